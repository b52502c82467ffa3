//! Value-based evaluation: weighted feature scores for pass candidates,
//! shot decisions, free-kick timing and the possession metric.

mod freekick;
mod possession;
mod shot;

pub use freekick::{plan_free_kick, required_pass_power, FreeKickOrder, FreeKickPlan, ReceiveParams};
pub use possession::{possession, Possession, PossessionParams, PossessionSide};
pub use shot::{decide_shot, shoot_angle, widest_goal_window, GoalWindow, ShotDecision, ShotParams, ShotReason};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::config::{finite, positive};
use crate::error::{Error, Result};
use crate::search::{CandidateGrid, PassCandidate};
use crate::world::{FieldGeometry, WorldState};
use crate::KickType;

/// Weights ω_i of the pass score Σ ω_i·x_i and the normalization bounds.
///
/// Lengths and angles are divided by their upper bound (and clamped to 1);
/// times are used as is. Features where smaller is better enter negated, so
/// non-negative weights always reward better passes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PassWeights {
    pub profile: String,
    pub teammate_intercept_time: f64,
    pub shoot_angle: f64,
    pub dist_to_goal: f64,
    pub refraction_angle: f64,
    pub intercept_margin: f64,
    /// Length normalization bound; the field length when unset.
    pub length_bound: Option<f64>,
    pub angle_bound: f64,
    /// Margin used when no opponent can reach the ball at all, and the cap on any margin.
    pub margin_cap: f64,
}

impl Default for PassWeights {
    fn default() -> Self {
        PassWeights {
            profile: "default".to_string(),
            teammate_intercept_time: 0.5,
            shoot_angle: 2.0,
            dist_to_goal: 1.5,
            refraction_angle: 0.5,
            intercept_margin: 1.0,
            length_bound: None,
            angle_bound: PI,
            margin_cap: 2.0,
        }
    }
}

impl PassWeights {
    pub fn zero() -> Self {
        PassWeights {
            profile: "zero".to_string(),
            teammate_intercept_time: 0.0,
            shoot_angle: 0.0,
            dist_to_goal: 0.0,
            refraction_angle: 0.0,
            intercept_margin: 0.0,
            ..Default::default()
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        PassWeights {
            teammate_intercept_time: self.teammate_intercept_time * factor,
            shoot_angle: self.shoot_angle * factor,
            dist_to_goal: self.dist_to_goal * factor,
            refraction_angle: self.refraction_angle * factor,
            intercept_margin: self.intercept_margin * factor,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, w) in [
            ("pass_weights.teammate_intercept_time", self.teammate_intercept_time),
            ("pass_weights.shoot_angle", self.shoot_angle),
            ("pass_weights.dist_to_goal", self.dist_to_goal),
            ("pass_weights.refraction_angle", self.refraction_angle),
            ("pass_weights.intercept_margin", self.intercept_margin),
        ] {
            finite(name, w)?;
        }
        if let Some(b) = self.length_bound {
            positive("pass_weights.length_bound", b)?;
        }
        positive("pass_weights.angle_bound", self.angle_bound)?;
        positive("pass_weights.margin_cap", self.margin_cap)
    }

    fn weights(&self) -> [f64; 5] {
        [
            self.teammate_intercept_time,
            self.shoot_angle,
            self.dist_to_goal,
            self.refraction_angle,
            self.intercept_margin,
        ]
    }

    /// Signed, normalized feature values x_i in weight order.
    pub fn terms(&self, f: &PassFeatures, field: &FieldGeometry) -> [f64; 5] {
        let length_bound = self.length_bound.unwrap_or(field.length);
        [
            -f.teammate_intercept_time,
            normalize(f.shoot_angle_at_receive, self.angle_bound),
            -normalize(f.dist_receive_to_goal, length_bound),
            -normalize(f.refraction_angle, self.angle_bound),
            f.intercept_margin.min(self.margin_cap),
        ]
    }

    pub fn score(&self, f: &PassFeatures, field: &FieldGeometry) -> f64 {
        weighted_sum(&self.weights(), &self.terms(f, field))
    }
}

/// Value divided by its bound, clamped to [0, 1].
pub fn normalize(value: f64, bound: f64) -> f64 {
    (value / bound).clamp(0.0, 1.0)
}

pub(crate) fn weighted_sum(weights: &[f64], terms: &[f64]) -> f64 {
    weights.iter().zip(terms).map(|(w, x)| w * x).sum()
}

/// Raw (unnormalized) pass features.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PassFeatures {
    pub teammate_intercept_time: f64,
    pub shoot_angle_at_receive: f64,
    pub dist_receive_to_goal: f64,
    /// Angle between the incoming ball direction and the shot direction.
    pub refraction_angle: f64,
    /// First opponent time minus first teammate time, capped.
    pub intercept_margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredPass {
    pub candidate: PassCandidate,
    pub score: f64,
    pub features: PassFeatures,
}

pub fn pass_features(
    candidate: &PassCandidate,
    world: &WorldState,
    weights: &PassWeights,
    robot_radius: f64,
) -> Result<PassFeatures> {
    if !candidate.feasible {
        return Err(Error::ScoreUndefined);
    }
    let ours = candidate.first_ours.ok_or(Error::ScoreUndefined)?;
    let receive = ours.point;
    let field = world.field();
    let window = widest_goal_window(receive, world, robot_radius);
    let shot_target = window.map_or(field.opponent_goal_center(), |w| w.target);
    let refraction_angle = match (shot_target - receive).normalized() {
        Some(shot_dir) => candidate.direction.angle_between(shot_dir),
        None => 0.0,
    };
    Ok(PassFeatures {
        teammate_intercept_time: ours.time,
        shoot_angle_at_receive: window.map_or(0.0, |w| w.angle),
        dist_receive_to_goal: receive.distance(field.opponent_goal_center()),
        refraction_angle,
        intercept_margin: candidate
            .intercept_margin()
            .map_or(weights.margin_cap, |m| m.min(weights.margin_cap)),
    })
}

/// Score a feasible candidate. Infeasible candidates have no score.
pub fn score_pass(
    candidate: &PassCandidate,
    world: &WorldState,
    weights: &PassWeights,
    robot_radius: f64,
) -> Result<(f64, PassFeatures)> {
    let features = pass_features(candidate, world, weights, robot_radius)?;
    Ok((weights.score(&features, world.field()), features))
}

/// Scores of every feasible candidate, in grid order.
pub fn score_feasible(
    grid: &CandidateGrid,
    world: &WorldState,
    weights: &PassWeights,
    robot_radius: f64,
) -> Vec<ScoredPass> {
    grid.candidates
        .iter()
        .filter(|c| c.feasible)
        .map(|c| {
            let (score, features) = score_pass(c, world, weights, robot_radius).expect("feasible candidate has a score");
            ScoredPass {
                candidate: *c,
                score,
                features,
            }
        })
        .collect()
}

fn argmax(scored: impl Iterator<Item = ScoredPass>) -> Option<ScoredPass> {
    // Strict comparison keeps the earliest (kick type, direction, power) on ties.
    scored.fold(None, |best: Option<ScoredPass>, s| match best {
        Some(b) if s.score <= b.score => Some(b),
        _ => Some(s),
    })
}

/// Highest-scoring feasible pass.
pub fn best_pass(grid: &CandidateGrid, world: &WorldState, weights: &PassWeights, robot_radius: f64) -> Result<ScoredPass> {
    argmax(score_feasible(grid, world, weights, robot_radius).into_iter()).ok_or(Error::NoFeasiblePass)
}

/// Highest-scoring feasible pass of one kick type.
pub fn best_pass_of_kind(
    grid: &CandidateGrid,
    world: &WorldState,
    weights: &PassWeights,
    robot_radius: f64,
    kind: KickType,
) -> Option<ScoredPass> {
    argmax(
        score_feasible(grid, world, weights, robot_radius)
            .into_iter()
            .filter(|s| s.candidate.kick_type == kind),
    )
}
