//! Robot arrival-time prediction.
//!
//! A point mass with bounded acceleration, braking and speed follows a
//! bang-bang (trapezoidal or triangular) profile along the line to the
//! target and must come to rest there. Velocity across that line has to be
//! nulled at the braking limit; the prediction is the larger of the two times.
//! Everything is closed form: the interception search calls this hundreds
//! of thousands of times per query.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::world::RobotState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MotionLimits {
    pub max_speed: f64,
    pub max_accel: f64,
    pub max_decel: f64,
}

impl Default for MotionLimits {
    fn default() -> Self {
        MotionLimits {
            max_speed: 3.25,
            max_accel: 3.0,
            max_decel: 3.0,
        }
    }
}

impl MotionLimits {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("max_speed", self.max_speed),
            ("max_accel", self.max_accel),
            ("max_decel", self.max_decel),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("motion: {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Time from rest to rest over distance `d`.
pub fn rest_to_rest_time(d: f64, limits: &MotionLimits) -> f64 {
    along_track_time(d, 0.0, limits)
}

/// 1D time to stop exactly at distance `d ≥ 0` ahead, starting with signed
/// speed `v0` (positive = toward the target).
pub fn along_track_time(d: f64, v0: f64, limits: &MotionLimits) -> f64 {
    let MotionLimits {
        max_speed: vmax,
        max_accel: acc,
        max_decel: dec,
    } = *limits;
    if v0 < 0.0 {
        // Moving away: brake to rest, then go from rest over the longer distance.
        let brake_dist = v0 * v0 / (2.0 * dec);
        return -v0 / dec + along_track_time(d + brake_dist, 0.0, limits);
    }
    if v0 == 0.0 && d <= 0.0 {
        return 0.0;
    }
    let stop_dist = v0 * v0 / (2.0 * dec);
    if v0 > 0.0 && stop_dist >= d {
        // Cannot stop in time: overshoot, stop, come back.
        return v0 / dec + along_track_time(stop_dist - d, 0.0, limits);
    }
    if v0 > vmax {
        // Shed excess speed down to vmax; the total braking distance is unchanged.
        return v0 / dec + (d - stop_dist) / vmax;
    }
    let peak_sq = (d + v0 * v0 / (2.0 * acc)) / (0.5 / acc + 0.5 / dec);
    let peak = peak_sq.sqrt();
    if peak <= vmax {
        (peak - v0) / acc + peak / dec
    } else {
        let accel_dist = (vmax * vmax - v0 * v0) / (2.0 * acc);
        let brake_dist = vmax * vmax / (2.0 * dec);
        (vmax - v0) / acc + vmax / dec + (d - accel_dist - brake_dist) / vmax
    }
}

/// Time for `robot` to come to rest within `reach` of `target`.
pub fn arrival_time_within(robot: &RobotState, target: Vec2, limits: &MotionLimits, reach: f64) -> f64 {
    let delta = target - robot.position;
    let dist = (delta.x * delta.x + delta.y * delta.y).sqrt();
    let v = robot.velocity;
    let (along_v, cross_v) = if dist > 1e-12 {
        let inv = 1.0 / dist;
        let dir = Vec2::new(delta.x * inv, delta.y * inv);
        (v.dot(dir), v.cross(dir).abs())
    } else {
        // Already there: any motion carries the robot away.
        (-(v.x * v.x + v.y * v.y).sqrt(), 0.0)
    };
    let along = along_track_time((dist - reach).max(0.0), along_v, limits);
    let cross = cross_v / limits.max_decel;
    along.max(cross)
}

/// Predicted time for `robot` to come to rest at `target`.
pub fn arrival_time(robot: &RobotState, target: Vec2, limits: &MotionLimits) -> f64 {
    arrival_time_within(robot, target, limits, 0.0)
}

/// Arrival time plus a fixed settling buffer (e.g. 0.3 s to prepare for a reception).
pub fn arrival_time_with_buffer(robot: &RobotState, target: Vec2, limits: &MotionLimits, buffer: f64) -> f64 {
    arrival_time(robot, target, limits) + buffer
}

/// Farthest distance a robot can cover and be at rest after a given time,
/// whatever the direction: it may start with any speed up to its current
/// one, accelerate up to max(vmax, current speed), then brake. Every
/// `arrival_time_within` is at least the time this envelope needs to cover
/// the distance minus the reach.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ReachEnvelope {
    u: f64,
    acc: f64,
    dec: f64,
    vc: f64,
    /// acc·dec / (acc + dec)
    k: f64,
    /// End of the pure braking piece.
    t1: f64,
    /// Start of the cruising piece.
    t2: f64,
    x2: f64,
}

impl ReachEnvelope {
    pub(crate) fn new(robot_speed: f64, limits: &MotionLimits) -> Self {
        let (u, acc, dec) = (robot_speed, limits.max_accel, limits.max_decel);
        let vc = limits.max_speed.max(u);
        let k = acc * dec / (acc + dec);
        let t1 = u / dec;
        let t2 = (vc - u) / acc + vc / dec;
        let x2 = (vc * vc - u * u) / (2.0 * acc) + vc * vc / (2.0 * dec);
        ReachEnvelope {
            u,
            acc,
            dec,
            vc,
            k,
            t1,
            t2,
            x2,
        }
    }

    /// Farthest distance coverable, ending at rest, within time `t ≥ 0`.
    pub(crate) fn distance_within(&self, t: f64) -> f64 {
        if t <= self.t1 {
            0.5 * self.dec * t * t
        } else if t <= self.t2 {
            let y = t + self.u / self.acc;
            0.5 * self.k * y * y - self.u * self.u / (2.0 * self.acc)
        } else {
            self.x2 + self.vc * (t - self.t2)
        }
    }

    /// Root `T` of `c − s·T = distance_within(T)` for `c ≥ 0`, `s ≥ 0`: the
    /// first time at which a target receding no faster than `s` from an
    /// initial gap `c` could be reached.
    pub(crate) fn first_time(&self, c: f64, s: f64) -> f64 {
        let f = |t: f64| c - s * t - self.distance_within(t);
        if f(self.t1) <= 0.0 {
            2.0 * c / (s + (s * s + 2.0 * self.dec * c).sqrt())
        } else if f(self.t2) <= 0.0 {
            let e = c + self.u * self.u / (2.0 * self.acc) + s * self.u / self.acc;
            let y = 2.0 * e / (s + (s * s + 2.0 * self.k * e).sqrt());
            y - self.u / self.acc
        } else {
            (c - self.x2 + self.vc * self.t2) / (s + self.vc)
        }
    }
}
