//! Ideal ball model: a short high-deceleration sliding phase down to 5/7 of
//! the launch speed, then rolling to rest at a small constant deceleration.
//! Chip kicks follow the same speed schedule but cannot be touched while
//! airborne.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Vec2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KickType {
    Flat,
    Chip,
}

impl KickType {
    pub fn as_str(self) -> &'static str {
        match self {
            KickType::Flat => "flat",
            KickType::Chip => "chip",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BallModelParams {
    /// Magnitude of the sliding-phase deceleration, m/s².
    pub slide_decel: f64,
    /// Magnitude of the rolling-phase deceleration, m/s².
    pub roll_decel: f64,
    /// Speed ratio at the sliding → rolling transition.
    pub transition_ratio: f64,
    pub power_min: f64,
    pub power_max: f64,
    /// Fraction of the stop distance a chip kick spends in the air.
    pub chip_flight_fraction: f64,
}

impl Default for BallModelParams {
    fn default() -> Self {
        BallModelParams {
            slide_decel: 3.4,
            roll_decel: 0.5,
            transition_ratio: 5.0 / 7.0,
            power_min: 1.0,
            power_max: 6.5,
            chip_flight_fraction: 0.5,
        }
    }
}

impl BallModelParams {
    pub fn validate(&self) -> Result<()> {
        let all_finite = [
            self.slide_decel,
            self.roll_decel,
            self.transition_ratio,
            self.power_min,
            self.power_max,
            self.chip_flight_fraction,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::Config("ball: non-finite parameter".into()));
        }
        if !(self.slide_decel > self.roll_decel && self.roll_decel > 0.0) {
            return Err(Error::Config("ball: need slide_decel > roll_decel > 0".into()));
        }
        if !(self.transition_ratio > 0.0 && self.transition_ratio < 1.0) {
            return Err(Error::Config("ball: transition_ratio must lie in (0, 1)".into()));
        }
        if !(self.power_min > 0.0 && self.power_min < self.power_max) {
            return Err(Error::Config("ball: need 0 < power_min < power_max".into()));
        }
        if !(self.chip_flight_fraction > 0.0 && self.chip_flight_fraction < 1.0) {
            return Err(Error::Config("ball: chip_flight_fraction must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// Ball state sampled from a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallSample {
    pub position: Vec2,
    pub speed: f64,
    pub airborne: bool,
}

/// A straight-line ball trajectory with precomputed phase boundaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallTrajectory {
    origin: Vec2,
    direction: Vec2,
    kick_speed: f64,
    kick_type: KickType,
    slide_decel: f64,
    roll_decel: f64,
    v1: f64,
    slide_time: f64,
    slide_distance: f64,
    stop_time: f64,
    stop_distance: f64,
    flight_distance: f64,
}

impl BallTrajectory {
    /// A fresh kick: starts in the sliding phase. `direction` must be a unit vector.
    pub fn kick(origin: Vec2, direction: Vec2, kick_speed: f64, kick_type: KickType, params: &BallModelParams) -> Self {
        let v1 = params.transition_ratio * kick_speed;
        Self::build(origin, direction, kick_speed, v1, kick_type, params)
    }

    /// A ball already rolling with the given velocity (no sliding phase left).
    /// A zero velocity gives a trajectory that rests at `origin`.
    pub fn rolling(origin: Vec2, velocity: Vec2, params: &BallModelParams) -> Self {
        let speed = velocity.norm();
        let direction = velocity.normalized().unwrap_or(Vec2::new(1.0, 0.0));
        let speed = if velocity.normalized().is_some() { speed } else { 0.0 };
        Self::build(origin, direction, speed, speed, KickType::Flat, params)
    }

    fn build(origin: Vec2, direction: Vec2, kick_speed: f64, v1: f64, kick_type: KickType, params: &BallModelParams) -> Self {
        let slide_time = (kick_speed - v1) / params.slide_decel;
        let slide_distance = (kick_speed + v1) * 0.5 * slide_time;
        let roll_time = v1 / params.roll_decel;
        let roll_distance = v1 * 0.5 * roll_time;
        let stop_distance = slide_distance + roll_distance;
        let flight_distance = match kick_type {
            KickType::Flat => 0.0,
            KickType::Chip => params.chip_flight_fraction * stop_distance,
        };
        BallTrajectory {
            origin,
            direction,
            kick_speed,
            kick_type,
            slide_decel: params.slide_decel,
            roll_decel: params.roll_decel,
            v1,
            slide_time,
            slide_distance,
            stop_time: slide_time + roll_time,
            stop_distance,
            flight_distance,
        }
    }

    pub fn origin(&self) -> Vec2 {
        self.origin
    }

    pub fn direction(&self) -> Vec2 {
        self.direction
    }

    pub fn kick_speed(&self) -> f64 {
        self.kick_speed
    }

    pub fn kick_type(&self) -> KickType {
        self.kick_type
    }

    /// Speed at the sliding → rolling transition.
    pub fn v1(&self) -> f64 {
        self.v1
    }

    pub fn slide_time(&self) -> f64 {
        self.slide_time
    }

    pub fn stop_time(&self) -> f64 {
        self.stop_time
    }

    pub fn stop_distance(&self) -> f64 {
        self.stop_distance
    }

    pub fn stop_point(&self) -> Vec2 {
        self.point_at_distance(self.stop_distance)
    }

    /// Distance along the path within which a chip is airborne (0 for flat kicks).
    pub fn flight_distance(&self) -> f64 {
        self.flight_distance
    }

    pub fn point_at_distance(&self, s: f64) -> Vec2 {
        self.origin + self.direction * s
    }

    /// Distance travelled at time `t ≥ 0`.
    pub fn distance_at(&self, t: f64) -> f64 {
        if t <= self.slide_time {
            t * (self.kick_speed - 0.5 * self.slide_decel * t)
        } else if t < self.stop_time {
            let tau = t - self.slide_time;
            self.slide_distance + tau * (self.v1 - 0.5 * self.roll_decel * tau)
        } else {
            self.stop_distance
        }
    }

    pub fn speed_at(&self, t: f64) -> f64 {
        if t <= self.slide_time {
            self.kick_speed - self.slide_decel * t
        } else if t < self.stop_time {
            (self.v1 - self.roll_decel * (t - self.slide_time)).max(0.0)
        } else {
            0.0
        }
    }

    pub fn is_airborne_at_distance(&self, s: f64) -> bool {
        s < self.flight_distance
    }

    /// Position, speed and airborne flag at time `t`.
    pub fn state_at(&self, t: f64) -> Result<BallSample> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("ball time must be a non-negative number, got {t}")));
        }
        let s = self.distance_at(t);
        Ok(BallSample {
            position: self.point_at_distance(s),
            speed: self.speed_at(t),
            airborne: self.is_airborne_at_distance(s),
        })
    }

    /// Smallest `t` at which the ball has travelled `d`; `None` if it stops short.
    pub fn travel_time_to_distance(&self, d: f64) -> Option<f64> {
        if !(d >= 0.0) || d > self.stop_distance {
            return None;
        }
        if d <= self.slide_distance {
            Some(time_for_distance(self.kick_speed, self.slide_decel, d).min(self.slide_time))
        } else {
            let rem = d - self.slide_distance;
            let tau = time_for_distance(self.v1, self.roll_decel, rem);
            Some((self.slide_time + tau).min(self.stop_time))
        }
    }

    /// Earliest time a robot could touch the ball at path distance `d`:
    /// the travel time, or `None` while a chip is still in the air.
    pub fn interceptable_time_at_distance(&self, d: f64) -> Option<f64> {
        if self.is_airborne_at_distance(d) {
            None
        } else {
            self.travel_time_to_distance(d)
        }
    }
}

/// Time to cover `d` from speed `v` under constant deceleration `a`.
/// Written as 2d / (v + √(v² − 2ad)) so that it stays exact as `a → 0`.
fn time_for_distance(v: f64, a: f64, d: f64) -> f64 {
    if d <= 0.0 {
        return 0.0;
    }
    let disc = (v * v - 2.0 * a * d).max(0.0);
    2.0 * d / (v + disc.sqrt())
}

pub fn ball_state_at(traj: &BallTrajectory, t: f64) -> Result<BallSample> {
    traj.state_at(t)
}

pub fn travel_time_to_distance(traj: &BallTrajectory, d: f64) -> Option<f64> {
    traj.travel_time_to_distance(d)
}

pub fn time_of_first_interceptable_point(traj: &BallTrajectory, d: f64) -> Option<f64> {
    traj.interceptable_time_at_distance(d)
}

/// Result of inverting the ball model for a pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PassPower {
    /// Speed at the start of the rolling phase before clamping.
    pub v1: f64,
    /// Launch speed before clamping.
    pub unclamped: f64,
    /// Launch speed after clamping to the kicker's range.
    pub kick_speed: f64,
    pub clamped: bool,
}

/// Launch speed that makes the ball cover `d` in `t`.
///
/// The sliding phase is short, so its distance is ignored: the rolling-phase
/// speed is v1 = d/t + a·t/2 with `a` the rolling deceleration, and the
/// launch speed is v1 times the inverse transition ratio (7/5 by default).
pub fn pass_power_for(d: f64, t: f64, params: &BallModelParams) -> Result<PassPower> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::Domain(format!("pass distance must be positive, got {d}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("pass time must be positive, got {t}")));
    }
    let v1 = (d + 0.5 * params.roll_decel * t * t) / t;
    let unclamped = v1 * (1.0 / params.transition_ratio);
    let kick_speed = unclamped.clamp(params.power_min, params.power_max);
    Ok(PassPower {
        v1,
        unclamped,
        kick_speed,
        clamped: kick_speed != unclamped,
    })
}
