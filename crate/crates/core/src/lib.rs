//! Pass and shot planning for Small Size League robot soccer.
//!
//! The pipeline: a [`WorldState`] snapshot goes through the dynamic passing
//! point search ([`search`]), which kicks a ball model ([`ball`]) in every
//! discretized direction and power and asks the interception predictor
//! ([`intercept`]) which robot gets there first. Feasible candidates are
//! scored ([`eval`]), and off-ball runners are placed by rasterizing four
//! dynamic zones of the attacking half ([`offball`]).

pub mod ball;
pub mod config;
pub mod error;
pub mod eval;
pub mod geom;
pub mod intercept;
pub mod motion;
pub mod offball;
pub mod search;
pub mod world;

pub use ball::{BallModelParams, BallTrajectory, KickType};
pub use config::PlannerConfig;
pub use error::{Error, Result};
pub use geom::Vec2;
pub use intercept::{InterceptParams, InterceptResult, TeamLimits};
pub use motion::MotionLimits;
pub use search::{CandidateGrid, PassCandidate, SearchGrid};
pub use world::{parse_world_snapshot, FieldGeometry, RobotRef, RobotState, Team, WorldState};
