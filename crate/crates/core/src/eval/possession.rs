use serde::{Deserialize, Serialize};

use crate::ball::BallTrajectory;
use crate::config::PlannerConfig;
use crate::error::Result;
use crate::intercept::{first_intercept, intercept_all};
use crate::world::{Team, WorldState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PossessionParams {
    /// Interception times closer than this are a tie.
    pub contest_epsilon: f64,
}

impl Default for PossessionParams {
    fn default() -> Self {
        PossessionParams { contest_epsilon: 1e-3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PossessionSide {
    Ours,
    Theirs,
    Contested,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Possession {
    pub side: PossessionSide,
    pub our_time: Option<f64>,
    pub their_time: Option<f64>,
}

/// The team that can intercept the freely rolling ball first has it.
pub fn possession(world: &WorldState, cfg: &PlannerConfig) -> Result<Possession> {
    let ball = world.ball();
    let traj = BallTrajectory::rolling(ball.position, ball.velocity, &cfg.ball);
    let results = intercept_all(world, &traj, &cfg.motion, &cfg.intercept)?;
    let our_time = first_intercept(&results, Team::Ours, None).and_then(|r| r.time);
    let their_time = first_intercept(&results, Team::Theirs, None).and_then(|r| r.time);
    Ok(Possession {
        side: side_of(our_time, their_time, cfg.possession.contest_epsilon),
        our_time,
        their_time,
    })
}

pub(crate) fn side_of(ours: Option<f64>, theirs: Option<f64>, eps: f64) -> PossessionSide {
    match (ours, theirs) {
        (None, None) => PossessionSide::Contested,
        (Some(_), None) => PossessionSide::Ours,
        (None, Some(_)) => PossessionSide::Theirs,
        (Some(a), Some(b)) if (a - b).abs() <= eps => PossessionSide::Contested,
        (Some(a), Some(b)) if a < b => PossessionSide::Ours,
        _ => PossessionSide::Theirs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec2;
    use crate::world::{BallState, FieldGeometry, RobotState};

    #[test]
    fn side_rules() {
        assert_eq!(side_of(Some(0.5), Some(0.9), 1e-3), PossessionSide::Ours);
        assert_eq!(side_of(Some(0.9), Some(0.5), 1e-3), PossessionSide::Theirs);
        assert_eq!(side_of(Some(0.5), Some(0.5005), 1e-3), PossessionSide::Contested);
        assert_eq!(side_of(None, Some(2.0), 1e-3), PossessionSide::Theirs);
        assert_eq!(side_of(None, None, 1e-3), PossessionSide::Contested);
    }

    #[test]
    fn ball_at_our_robot() {
        let robots = vec![
            RobotState::at_rest(0, Team::Ours, Vec2::new(1.05, 0.0)),
            RobotState::at_rest(0, Team::Theirs, Vec2::new(-2.0, 1.0)),
        ];
        let ball = BallState {
            position: Vec2::new(1.0, 0.0),
            velocity: Vec2::ZERO,
        };
        let w = WorldState::new(FieldGeometry::default(), ball, robots, 0.0).unwrap();
        let p = possession(&w, &PlannerConfig::default()).unwrap();
        assert_eq!(p.side, PossessionSide::Ours);
        assert_eq!(p.our_time, Some(0.0));
    }

    #[test]
    fn symmetric_world_is_contested() {
        let robots = vec![
            RobotState::at_rest(0, Team::Ours, Vec2::new(0.0, 1.5)),
            RobotState::at_rest(0, Team::Theirs, Vec2::new(0.0, -1.5)),
        ];
        let w = WorldState::new(FieldGeometry::default(), BallState::default(), robots, 0.0).unwrap();
        let p = possession(&w, &PlannerConfig::default()).unwrap();
        assert_eq!(p.side, PossessionSide::Contested);
    }
}
