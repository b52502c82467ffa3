//! World snapshot: field geometry, ball and robot states, and the JSON
//! snapshot format they are read from.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{normalize_angle, Rect, Vec2};

pub const MAX_ROBOTS_PER_TEAM: usize = 16;

/// Field dimensions. Origin at the field center, +x toward the opponent goal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldGeometry {
    pub length: f64,
    pub width: f64,
    pub goal_width: f64,
    pub defense_area_depth: f64,
    pub defense_area_width: f64,
}

impl Default for FieldGeometry {
    /// Division A dimensions.
    fn default() -> Self {
        FieldGeometry {
            length: 12.0,
            width: 9.0,
            goal_width: 1.8,
            defense_area_depth: 1.8,
            defense_area_width: 3.6,
        }
    }
}

impl FieldGeometry {
    pub fn validate(&self) -> Result<()> {
        let dims = [
            ("field.length", self.length),
            ("field.width", self.width),
            ("field.goal_width", self.goal_width),
            ("field.defense_area_depth", self.defense_area_depth),
            ("field.defense_area_width", self.defense_area_width),
        ];
        for (path, v) in dims {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::validation(path, format!("must be positive and finite, got {v}")));
            }
        }
        if self.goal_width >= self.width {
            return Err(Error::validation("field.goal_width", "must be smaller than field width"));
        }
        if self.defense_area_width >= self.width {
            return Err(Error::validation("field.defense_area_width", "must be smaller than field width"));
        }
        if self.defense_area_depth >= self.length / 2.0 {
            return Err(Error::validation("field.defense_area_depth", "must be smaller than half the field length"));
        }
        Ok(())
    }

    pub fn half_length(&self) -> f64 {
        self.length / 2.0
    }

    pub fn half_width(&self) -> f64 {
        self.width / 2.0
    }

    pub fn bounds(&self) -> Rect {
        Rect::new(
            Vec2::new(-self.half_length(), -self.half_width()),
            Vec2::new(self.half_length(), self.half_width()),
        )
    }

    /// The attacking half, x ∈ [0, length/2].
    pub fn front_field(&self) -> Rect {
        Rect::new(
            Vec2::new(0.0, -self.half_width()),
            Vec2::new(self.half_length(), self.half_width()),
        )
    }

    pub fn opponent_goal_center(&self) -> Vec2 {
        Vec2::new(self.half_length(), 0.0)
    }

    /// Goal posts of the opponent goal, (+y post, −y post).
    pub fn opponent_goal_posts(&self) -> (Vec2, Vec2) {
        let gx = self.half_length();
        let hw = self.goal_width / 2.0;
        (Vec2::new(gx, hw), Vec2::new(gx, -hw))
    }

    pub fn opponent_defense_area(&self) -> Rect {
        let gx = self.half_length();
        let hw = self.defense_area_width / 2.0;
        Rect::new(Vec2::new(gx - self.defense_area_depth, -hw), Vec2::new(gx, hw))
    }

    fn contains_with_margin(&self, p: Vec2, margin: f64) -> bool {
        p.x.abs() <= self.half_length() + margin && p.y.abs() <= self.half_width() + margin
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Team {
    Ours,
    Theirs,
}

impl Team {
    pub fn other(self) -> Team {
        match self {
            Team::Ours => Team::Theirs,
            Team::Theirs => Team::Ours,
        }
    }
}

/// Identifies a robot across both teams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RobotRef {
    pub team: Team,
    pub id: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobotState {
    pub id: u32,
    pub team: Team,
    pub position: Vec2,
    pub velocity: Vec2,
    pub orientation: f64,
}

impl RobotState {
    pub fn new(id: u32, team: Team, position: Vec2, velocity: Vec2, orientation: f64) -> Self {
        RobotState {
            id,
            team,
            position,
            velocity,
            orientation: normalize_angle(orientation),
        }
    }

    pub fn at_rest(id: u32, team: Team, position: Vec2) -> Self {
        RobotState::new(id, team, position, Vec2::ZERO, 0.0)
    }

    pub fn key(&self) -> RobotRef {
        RobotRef {
            team: self.team,
            id: self.id,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BallState {
    pub position: Vec2,
    pub velocity: Vec2,
}

/// Limits applied when admitting a snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IngestLimits {
    /// Robots and ball may sit this far outside the field lines.
    pub position_margin: f64,
    pub max_robot_speed: f64,
}

impl Default for IngestLimits {
    fn default() -> Self {
        IngestLimits {
            position_margin: 0.5,
            max_robot_speed: 5.0,
        }
    }
}

/// Immutable snapshot of the game. Robots are kept in canonical order:
/// our team by id, then theirs by id.
#[derive(Debug, Clone, PartialEq)]
pub struct WorldState {
    field: FieldGeometry,
    ball: BallState,
    robots: Vec<RobotState>,
    timestamp: f64,
}

impl WorldState {
    pub fn new(
        field: FieldGeometry,
        ball: BallState,
        robots: Vec<RobotState>,
        timestamp: f64,
    ) -> Result<Self> {
        Self::with_limits(field, ball, robots, timestamp, &IngestLimits::default())
    }

    pub fn with_limits(
        field: FieldGeometry,
        ball: BallState,
        mut robots: Vec<RobotState>,
        timestamp: f64,
        limits: &IngestLimits,
    ) -> Result<Self> {
        field.validate()?;
        if !ball.position.is_finite() || !ball.velocity.is_finite() {
            return Err(Error::validation("ball", "non-finite position or velocity"));
        }
        if !field.contains_with_margin(ball.position, limits.position_margin) {
            return Err(Error::validation("ball", "position outside field bounds"));
        }
        for team in [Team::Ours, Team::Theirs] {
            let section = team_section(team);
            let mut seen = BTreeSet::new();
            let mut count = 0;
            for r in robots.iter().filter(|r| r.team == team) {
                count += 1;
                let path = format!("{section}[id={}]", r.id);
                if !seen.insert(r.id) {
                    return Err(Error::validation(path, format!("duplicate robot id {}", r.id)));
                }
                if !r.position.is_finite() || !r.velocity.is_finite() || !r.orientation.is_finite() {
                    return Err(Error::validation(path, "non-finite value"));
                }
                if !field.contains_with_margin(r.position, limits.position_margin) {
                    return Err(Error::validation(path, "position outside field bounds"));
                }
                if r.velocity.norm() > limits.max_robot_speed {
                    return Err(Error::validation(
                        path,
                        format!("speed {:.3} m/s exceeds {} m/s", r.velocity.norm(), limits.max_robot_speed),
                    ));
                }
            }
            if count > MAX_ROBOTS_PER_TEAM {
                return Err(Error::validation(
                    section,
                    format!("{count} robots, at most {MAX_ROBOTS_PER_TEAM} allowed"),
                ));
            }
        }
        if !timestamp.is_finite() {
            return Err(Error::validation("timestamp", "non-finite"));
        }
        robots.sort_by_key(|r| r.key());
        Ok(WorldState {
            field,
            ball,
            robots,
            timestamp,
        })
    }

    pub fn field(&self) -> &FieldGeometry {
        &self.field
    }

    pub fn ball(&self) -> &BallState {
        &self.ball
    }

    pub fn timestamp(&self) -> f64 {
        self.timestamp
    }

    /// All robots, ours by id then theirs by id.
    pub fn robots(&self) -> &[RobotState] {
        &self.robots
    }

    pub fn team(&self, team: Team) -> impl Iterator<Item = &RobotState> + '_ {
        self.robots.iter().filter(move |r| r.team == team)
    }

    pub fn ours(&self) -> impl Iterator<Item = &RobotState> + '_ {
        self.team(Team::Ours)
    }

    pub fn theirs(&self) -> impl Iterator<Item = &RobotState> + '_ {
        self.team(Team::Theirs)
    }

    pub fn robot(&self, key: RobotRef) -> Option<&RobotState> {
        self.robots.iter().find(|r| r.key() == key)
    }

    pub fn our_robot(&self, id: u32) -> Option<&RobotState> {
        self.robot(RobotRef { team: Team::Ours, id })
    }

    /// Copy with the robot list replaced (re-validated).
    pub fn with_robots(&self, robots: Vec<RobotState>) -> Result<WorldState> {
        WorldState::new(self.field, self.ball, robots, self.timestamp)
    }

    pub fn with_ball(&self, ball: BallState) -> Result<WorldState> {
        WorldState::new(self.field, ball, self.robots.clone(), self.timestamp)
    }

    /// Reflect every position, velocity and orientation through y = 0.
    pub fn mirror(&self) -> WorldState {
        let robots = self
            .robots
            .iter()
            .map(|r| RobotState {
                position: r.position.mirror_y(),
                velocity: r.velocity.mirror_y(),
                orientation: normalize_angle(-r.orientation),
                ..*r
            })
            .collect();
        WorldState {
            field: self.field,
            ball: BallState {
                position: self.ball.position.mirror_y(),
                velocity: self.ball.velocity.mirror_y(),
            },
            robots,
            timestamp: self.timestamp,
        }
    }

    /// Relabel ours ↔ theirs, leaving geometry untouched.
    pub fn swap_teams(&self) -> WorldState {
        let mut robots: Vec<RobotState> = self
            .robots
            .iter()
            .map(|r| RobotState {
                team: r.team.other(),
                ..*r
            })
            .collect();
        robots.sort_by_key(|r| r.key());
        WorldState { robots, ..*self }
    }

    pub fn to_snapshot(&self) -> Snapshot {
        let section = |team| {
            self.team(team)
                .map(|r| RobotEntry {
                    id: r.id,
                    x: r.position.x,
                    y: r.position.y,
                    vx: r.velocity.x,
                    vy: r.velocity.y,
                    theta: r.orientation,
                })
                .collect()
        };
        Snapshot {
            timestamp: Some(self.timestamp),
            field: self.field,
            ball: BallEntry {
                x: self.ball.position.x,
                y: self.ball.position.y,
                vx: self.ball.velocity.x,
                vy: self.ball.velocity.y,
            },
            ours: section(Team::Ours),
            theirs: section(Team::Theirs),
        }
    }

    pub fn to_snapshot_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_snapshot()).expect("snapshot serialization cannot fail")
    }
}

// WorldState holds no interior mutability; shared references are safe across workers.
const _: () = {
    const fn assert_sync<T: Sync + Send>() {}
    assert_sync::<WorldState>();
};

fn team_section(team: Team) -> &'static str {
    match team {
        Team::Ours => "ours",
        Team::Theirs => "theirs",
    }
}

/// On-disk snapshot document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Snapshot {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<f64>,
    pub field: FieldGeometry,
    pub ball: BallEntry,
    pub ours: Vec<RobotEntry>,
    pub theirs: Vec<RobotEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallEntry {
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotEntry {
    pub id: u32,
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
    pub theta: f64,
}

impl Snapshot {
    pub fn into_world(self, limits: &IngestLimits) -> Result<WorldState> {
        let robots = [(Team::Ours, &self.ours), (Team::Theirs, &self.theirs)]
            .into_iter()
            .flat_map(|(team, entries)| {
                entries.iter().map(move |e| {
                    RobotState::new(e.id, team, Vec2::new(e.x, e.y), Vec2::new(e.vx, e.vy), e.theta)
                })
            })
            .collect();
        let ball = BallState {
            position: Vec2::new(self.ball.x, self.ball.y),
            velocity: Vec2::new(self.ball.vx, self.ball.vy),
        };
        WorldState::with_limits(self.field, ball, robots, self.timestamp.unwrap_or(0.0), limits)
    }
}

/// Parse and validate a snapshot document.
pub fn parse_world_snapshot(bytes: &[u8]) -> Result<WorldState> {
    parse_world_snapshot_with(bytes, &IngestLimits::default())
}

pub fn parse_world_snapshot_with(bytes: &[u8], limits: &IngestLimits) -> Result<WorldState> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Schema(format!("input is not UTF-8: {e}")))?;
    let snapshot: Snapshot = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    snapshot.into_world(limits)
}

pub fn mirror_world(w: &WorldState) -> WorldState {
    w.mirror()
}
