use serde::{Deserialize, Serialize};

use crate::ball::{BallTrajectory, KickType};
use crate::config::{nonneg, PlannerConfig};
use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::intercept::{scan_intercept, Cutoff, ScanHorizon};
use crate::world::{RobotState, Team, WorldState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShotParams {
    /// Minimum open goal angle, radians.
    pub angle_threshold: f64,
    /// Launch speed of a shot; the ball model's maximum when unset.
    pub shot_power: Option<f64>,
}

impl Default for ShotParams {
    fn default() -> Self {
        ShotParams {
            angle_threshold: 0.1,
            shot_power: None,
        }
    }
}

impl ShotParams {
    pub fn validate(&self) -> Result<()> {
        nonneg("shot.angle_threshold", self.angle_threshold)?;
        if let Some(p) = self.shot_power {
            if !(p > 0.0 && p.is_finite()) {
                return Err(Error::Config(format!("shot.shot_power must be positive, got {p}")));
            }
        }
        Ok(())
    }
}

/// An unobstructed angular interval of the opponent goal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoalWindow {
    /// Lower and upper bounding directions, radians.
    pub lo: f64,
    pub hi: f64,
    pub angle: f64,
    /// Where the window's bisector meets the goal line.
    pub target: Vec2,
}

/// Widest open window of the opponent goal seen from `point`, with opponents
/// as discs of `robot_radius`. `None` when the goal is fully covered or the
/// point is not in front of the goal line.
///
/// A disc blocks its whole tangent cone when its center is in front of the
/// goal line; discs centered on or behind the line are ignored.
pub fn widest_goal_window(point: Vec2, world: &WorldState, robot_radius: f64) -> Option<GoalWindow> {
    let field = world.field();
    let gx = field.half_length();
    let half_goal = field.goal_width / 2.0;
    let ahead = gx - point.x;
    if !(ahead > 0.0) {
        return None;
    }
    let lo = (-half_goal - point.y).atan2(ahead);
    let hi = (half_goal - point.y).atan2(ahead);

    let mut blocked: Vec<(f64, f64)> = Vec::new();
    for opp in world.theirs() {
        if opp.position.x >= gx {
            continue;
        }
        let rel = opp.position - point;
        let dist = rel.norm();
        if dist <= robot_radius {
            return None;
        }
        let half = (robot_radius / dist).asin();
        let center = rel.angle();
        let (a, b) = (center - half, center + half);
        if b > lo && a < hi {
            blocked.push((a.max(lo), b.min(hi)));
        }
    }
    blocked.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));

    let mut best: Option<(f64, f64)> = None;
    let mut consider = |a: f64, b: f64| {
        if b > a && best.map_or(true, |(ba, bb)| b - a > bb - ba) {
            best = Some((a, b));
        }
    };
    let mut cursor = lo;
    for (a, b) in blocked {
        if a > cursor {
            consider(cursor, a);
        }
        cursor = cursor.max(b);
    }
    consider(cursor, hi);

    best.map(|(a, b)| {
        let mid = 0.5 * (a + b);
        GoalWindow {
            lo: a,
            hi: b,
            angle: b - a,
            target: Vec2::new(gx, point.y + ahead * mid.tan()),
        }
    })
}

/// Angular size of the widest open goal window from `point`, 0 when covered.
pub fn shoot_angle(point: Vec2, world: &WorldState, robot_radius: f64) -> f64 {
    widest_goal_window(point, world, robot_radius).map_or(0.0, |w| w.angle)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShotReason {
    AngleTooSmall,
    Interceptable,
    Clear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotDecision {
    pub shoot: bool,
    pub shot_angle: f64,
    pub shot_target: Vec2,
    /// An opponent can reach the shot before it crosses the goal line.
    pub blocked: bool,
    pub reason: ShotReason,
}

/// Shoot only when the open angle clears the threshold and no opponent can
/// intercept a full-power shot at the window center before the goal line.
pub fn decide_shot(shooter: &RobotState, world: &WorldState, cfg: &PlannerConfig) -> Result<ShotDecision> {
    if shooter.team != Team::Ours {
        return Err(Error::Domain("shooter must be on our team".into()));
    }
    let radius = cfg.intercept.robot_radius;
    let origin = shooter.position;
    let window = widest_goal_window(origin, world, radius);
    let shot_angle = window.map_or(0.0, |w| w.angle);
    let shot_target = window.map_or(world.field().opponent_goal_center(), |w| w.target);

    let power = cfg.shot.shot_power.unwrap_or(cfg.ball.power_max);
    let blocked = match (shot_target - origin).normalized() {
        Some(dir) => {
            let traj = BallTrajectory::kick(origin, dir, power, KickType::Flat, &cfg.ball);
            let horizon = ScanHorizon::new(&traj, world.field());
            world.theirs().any(|opp| {
                scan_intercept(opp, &traj, horizon, &cfg.motion.theirs, cfg.intercept.dt, radius, Cutoff::NONE).is_some()
            })
        }
        None => false,
    };
    let reason = if shot_angle < cfg.shot.angle_threshold {
        ShotReason::AngleTooSmall
    } else if blocked {
        ShotReason::Interceptable
    } else {
        ShotReason::Clear
    };
    Ok(ShotDecision {
        shoot: reason == ShotReason::Clear,
        shot_angle,
        shot_target,
        blocked,
        reason,
    })
}
