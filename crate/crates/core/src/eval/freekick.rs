use serde::{Deserialize, Serialize};

use crate::ball::{pass_power_for, PassPower};
use crate::config::PlannerConfig;
use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::motion::{arrival_time_with_buffer, arrival_time_within};
use crate::search::PassCandidate;
use crate::world::{RobotState, WorldState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReceiveParams {
    /// Settling time a receiver needs after arriving, seconds.
    pub buffer: f64,
}

impl Default for ReceiveParams {
    fn default() -> Self {
        ReceiveParams { buffer: 0.3 }
    }
}

/// Pass power that brings the ball from `from` to `target` just as
/// `receiver` has arrived there and settled.
pub fn required_pass_power(from: Vec2, receiver: &RobotState, target: Vec2, cfg: &PlannerConfig) -> Result<PassPower> {
    let t = arrival_time_with_buffer(receiver, target, &cfg.motion.ours, cfg.receive.buffer);
    pass_power_for(from.distance(target), t, &cfg.ball)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FreeKickOrder {
    /// Send the receiver first and kick after `kick_delay`.
    RobotFirst,
    /// Kick now; the receiver is there no later than the ball.
    KickFirst,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeKickPlan {
    /// Ball travel time from the kick to the receive point.
    pub t_ball: f64,
    /// Receiver travel time to the receive point.
    pub t_robot: f64,
    pub order: FreeKickOrder,
    /// Wait between sending the receiver and kicking, seconds.
    pub kick_delay: f64,
}

/// Decide whether to move the receiver or kick first so that ball and
/// receiver meet at the receive point of `target`.
pub fn plan_free_kick(world: &WorldState, kicker_id: u32, target: &PassCandidate, cfg: &PlannerConfig) -> Result<FreeKickPlan> {
    world.our_robot(kicker_id).ok_or(Error::UnknownRobot(kicker_id))?;
    let receiver_hit = match target.first_ours {
        Some(hit) if target.feasible => hit,
        _ => return Err(Error::Domain("free-kick target must be a feasible pass".into())),
    };
    let receiver = world
        .robot(receiver_hit.robot)
        .ok_or(Error::UnknownRobot(receiver_hit.robot.id))?;
    let traj = target.trajectory(&cfg.ball);
    let distance = receiver_hit.point.distance(traj.origin()).min(traj.stop_distance());
    let t_ball = traj
        .travel_time_to_distance(distance)
        .expect("receive point lies on the trajectory");
    let t_robot = arrival_time_within(receiver, receiver_hit.point, &cfg.motion.ours, cfg.intercept.robot_radius);
    Ok(free_kick_plan(t_ball, t_robot))
}

pub(crate) fn free_kick_plan(t_ball: f64, t_robot: f64) -> FreeKickPlan {
    let order = if t_robot <= t_ball {
        FreeKickOrder::KickFirst
    } else {
        FreeKickOrder::RobotFirst
    };
    FreeKickPlan {
        t_ball,
        t_robot,
        order,
        kick_delay: (t_robot - t_ball).max(0.0),
    }
}
