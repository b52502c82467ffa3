//! Search-based interception prediction: walk the ball trajectory in fixed
//! time steps and report the first sample the robot can reach in time.

use serde::{Deserialize, Serialize};

use crate::ball::BallTrajectory;
use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::motion::{arrival_time_within, MotionLimits, ReachEnvelope};
use crate::world::{FieldGeometry, RobotRef, RobotState, Team, WorldState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InterceptParams {
    /// Sampling step along the trajectory, seconds.
    pub dt: f64,
    /// Robots touch the ball this far from their center.
    pub robot_radius: f64,
}

impl Default for InterceptParams {
    fn default() -> Self {
        InterceptParams {
            dt: 1.0 / 60.0,
            robot_radius: 0.09,
        }
    }
}

impl InterceptParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Domain(format!("interception step dt must be positive, got {}", self.dt)));
        }
        if !(self.robot_radius >= 0.0 && self.robot_radius.is_finite()) {
            return Err(Error::Config(format!("robot_radius must be non-negative, got {}", self.robot_radius)));
        }
        Ok(())
    }
}

/// Motion limits per team.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TeamLimits {
    pub ours: MotionLimits,
    pub theirs: MotionLimits,
}

impl TeamLimits {
    pub fn uniform(limits: MotionLimits) -> Self {
        TeamLimits {
            ours: limits,
            theirs: limits,
        }
    }

    pub fn for_team(&self, team: Team) -> &MotionLimits {
        match team {
            Team::Ours => &self.ours,
            Team::Theirs => &self.theirs,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterceptResult {
    pub robot: RobotRef,
    /// `None` when the ball leaves the field before the robot can reach it.
    pub time: Option<f64>,
    pub point: Option<Vec2>,
}

impl InterceptResult {
    pub fn is_finite(&self) -> bool {
        self.time.is_some()
    }
}

/// Path length after which the ball is out of play, or `None` if it comes
/// to rest inside the field.
pub(crate) fn exit_distance(traj: &BallTrajectory, field: &FieldGeometry) -> Option<f64> {
    let bounds = field.bounds();
    if bounds.contains(traj.stop_point()) {
        return None;
    }
    let o = traj.origin();
    if !bounds.contains(o) {
        return Some(0.0);
    }
    let d = traj.direction();
    let (hl, hw) = (field.half_length(), field.half_width());
    let sx = if d.x > 0.0 {
        (hl - o.x) / d.x
    } else if d.x < 0.0 {
        (-hl - o.x) / d.x
    } else {
        f64::INFINITY
    };
    let sy = if d.y > 0.0 {
        (hw - o.y) / d.y
    } else if d.y < 0.0 {
        (-hw - o.y) / d.y
    } else {
        f64::INFINITY
    };
    Some(sx.min(sy).min(traj.stop_distance()))
}

/// Scan horizon shared by every robot on one trajectory.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ScanHorizon {
    /// Last sample time to test while the ball moves.
    t_end: f64,
    /// Whether the ball leaves the field (no rest point).
    truncated: bool,
}

impl ScanHorizon {
    pub(crate) fn t_end(&self) -> f64 {
        self.t_end
    }

    pub(crate) fn new(traj: &BallTrajectory, field: &FieldGeometry) -> Self {
        match exit_distance(traj, field) {
            Some(s_exit) => ScanHorizon {
                t_end: traj.travel_time_to_distance(s_exit).unwrap_or(traj.stop_time()),
                truncated: true,
            },
            None => ScanHorizon {
                t_end: traj.stop_time(),
                truncated: false,
            },
        }
    }
}

/// Only interceptions that beat an already known time are of interest.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Cutoff {
    pub time: f64,
    /// Whether a hit at exactly `time` still counts.
    pub tie_wins: bool,
}

impl Cutoff {
    pub(crate) const NONE: Cutoff = Cutoff {
        time: f64::INFINITY,
        tie_wins: true,
    };

    fn admits(&self, t: f64) -> bool {
        t < self.time || (t == self.time && self.tie_wins)
    }
}

/// Core scan. Assumes validated `dt`. Returns `None` both when the robot
/// never intercepts and when it cannot beat `cutoff`.
pub(crate) fn scan_intercept(
    robot: &RobotState,
    traj: &BallTrajectory,
    horizon: ScanHorizon,
    limits: &MotionLimits,
    dt: f64,
    reach: f64,
    cutoff: Cutoff,
) -> Option<(f64, Vec2)> {
    let envelope = ReachEnvelope::new(robot.velocity.norm(), limits);
    let flight = traj.flight_distance();
    let mut k: u64 = 0;
    if flight > 0.0 {
        // Jump to just before the ball lands; the loop steps over the rest.
        let landing = traj.travel_time_to_distance(flight).unwrap_or(0.0);
        k = ((landing / dt).floor() as u64).saturating_sub(1);
    }
    loop {
        let t = k as f64 * dt;
        if t > horizon.t_end {
            break;
        }
        if !cutoff.admits(t) {
            return None;
        }
        let s = traj.distance_at(t);
        if s < flight {
            k += 1;
            continue;
        }
        let p = traj.point_at_distance(s);
        let need = p.distance(robot.position) - reach;
        if need > envelope.distance_within(t) {
            // The ball moves at most at its current speed, so no sample before
            // the envelope catches up with the nearest possible ball position
            // can succeed.
            let speed = traj.speed_at(t);
            let catch_up = envelope.first_time(need + speed * t, speed);
            let gap = (catch_up - t) * (1.0 - 1e-9);
            k += (gap / dt).floor().max(0.0) as u64 + 1;
            continue;
        }
        if arrival_time_within(robot, p, limits, reach) <= t {
            return Some((t, p));
        }
        k += 1;
    }
    if horizon.truncated {
        return None;
    }
    let rest = traj.stop_point();
    let time = arrival_time_within(robot, rest, limits, reach).max(traj.stop_time());
    cutoff.admits(time).then_some((time, rest))
}

/// Earliest sampled time at which `robot` can intercept the ball on `traj`.
pub fn intercept_time(
    robot: &RobotState,
    traj: &BallTrajectory,
    field: &FieldGeometry,
    limits: &MotionLimits,
    params: &InterceptParams,
) -> Result<InterceptResult> {
    params.validate()?;
    let horizon = ScanHorizon::new(traj, field);
    Ok(to_result(robot, scan_intercept(robot, traj, horizon, limits, params.dt, params.robot_radius, Cutoff::NONE)))
}

fn to_result(robot: &RobotState, hit: Option<(f64, Vec2)>) -> InterceptResult {
    InterceptResult {
        robot: robot.key(),
        time: hit.map(|h| h.0),
        point: hit.map(|h| h.1),
    }
}

/// Interception results for every robot, in world order (ours by id, theirs by id).
pub fn intercept_all(
    world: &WorldState,
    traj: &BallTrajectory,
    limits: &TeamLimits,
    params: &InterceptParams,
) -> Result<Vec<InterceptResult>> {
    params.validate()?;
    let horizon = ScanHorizon::new(traj, world.field());
    Ok(world
        .robots()
        .iter()
        .map(|r| {
            to_result(
                r,
                scan_intercept(
                    r,
                    traj,
                    horizon,
                    limits.for_team(r.team),
                    params.dt,
                    params.robot_radius,
                    Cutoff::NONE,
                ),
            )
        })
        .collect())
}

/// Fastest finite interceptor of `team`, skipping `exclude`. Ties go to the
/// earlier entry in `results`.
pub fn first_intercept(results: &[InterceptResult], team: Team, exclude: Option<RobotRef>) -> Option<InterceptResult> {
    let mut best: Option<InterceptResult> = None;
    for r in results {
        if r.robot.team != team || Some(r.robot) == exclude {
            continue;
        }
        if let Some(t) = r.time {
            if best.and_then(|b| b.time).map_or(true, |bt| t < bt) {
                best = Some(*r);
            }
        }
    }
    best
}
