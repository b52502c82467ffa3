//! Planner configuration: every tunable of every stage, with defaults, in
//! one document. The file format is JSON, like the snapshot format; any
//! section or key may be omitted to take its default.

use serde::{Deserialize, Serialize};

use crate::ball::BallModelParams;
use crate::error::{Error, Result};
use crate::eval::{PassWeights, PossessionParams, ReceiveParams, ShotParams};
use crate::intercept::{InterceptParams, TeamLimits};
use crate::offball::{DragParams, RunningParams};
use crate::search::SearchGrid;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchParams {
    /// Minimum lead, seconds, of the first teammate over the first opponent.
    pub safety_margin: f64,
    /// The kicker should be this close to the ball; farther only warns.
    pub possession_radius: f64,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            safety_margin: 0.3,
            possession_radius: 0.15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerConfig {
    pub ball: BallModelParams,
    pub motion: TeamLimits,
    pub intercept: InterceptParams,
    pub grid: SearchGrid,
    pub search: SearchParams,
    pub pass_weights: PassWeights,
    pub shot: ShotParams,
    pub receive: ReceiveParams,
    pub possession: PossessionParams,
    pub running: RunningParams,
    pub drag: DragParams,
}

impl PlannerConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: PlannerConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }

    pub fn validate(&self) -> Result<()> {
        self.ball.validate()?;
        self.motion.ours.validate()?;
        self.motion.theirs.validate()?;
        self.intercept
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        self.grid.validate()?;
        nonneg("search.safety_margin", self.search.safety_margin)?;
        nonneg("search.possession_radius", self.search.possession_radius)?;
        self.pass_weights.validate()?;
        self.shot.validate()?;
        nonneg("receive.buffer", self.receive.buffer)?;
        nonneg("possession.contest_epsilon", self.possession.contest_epsilon)?;
        self.running.validate()?;
        self.drag.validate()?;
        Ok(())
    }
}

pub(crate) fn nonneg(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be a non-negative number, got {v}")))
    }
}

pub(crate) fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive, got {v}")))
    }
}

pub(crate) fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be finite, got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_round_trip() {
        let cfg = PlannerConfig::default();
        cfg.validate().unwrap();
        let back = PlannerConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn partial_documents_take_defaults() {
        let cfg = PlannerConfig::from_json(r#"{"search": {"safety_margin": 0.5}, "grid": {"n_powers": 8}}"#).unwrap();
        assert_eq!(cfg.search.safety_margin, 0.5);
        assert_eq!(cfg.search.possession_radius, 0.15);
        assert_eq!(cfg.grid.n_powers, 8);
        assert_eq!(cfg.grid.n_directions, 128);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(matches!(PlannerConfig::from_json(r#"{"gird": {}}"#), Err(Error::Config(_))));
        assert!(matches!(
            PlannerConfig::from_json(r#"{"ball": {"roll_decel": -1}}"#),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            PlannerConfig::from_json(r#"{"intercept": {"dt": 0}}"#),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            PlannerConfig::from_json(r#"{"motion": {"theirs": {"max_speed": 0}}}"#),
            Err(Error::Config(_))
        ));
    }
}
