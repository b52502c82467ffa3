//! Dynamic passing-point search.
//!
//! The kicker's options are discretized into `n_directions × n_powers` kicks
//! per kick type. Every cell runs the interception scan for every robot on
//! the field and keeps the first teammate and first opponent to reach the
//! ball. Cells are independent, so the grid is a pure data-parallel map;
//! the serial path exists as the reference the parallel path must match
//! bit for bit.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball::{BallModelParams, BallTrajectory, KickType};
use crate::config::PlannerConfig;
use crate::error::{Error, Result};
use crate::geom::Vec2;
use crate::intercept::{scan_intercept, Cutoff, ScanHorizon};
use crate::world::{RobotRef, Team, WorldState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchGrid {
    pub n_directions: usize,
    pub n_powers: usize,
    pub power_min: f64,
    pub power_max: f64,
    pub kick_types: Vec<KickType>,
}

impl Default for SearchGrid {
    fn default() -> Self {
        SearchGrid {
            n_directions: 128,
            n_powers: 64,
            power_min: 1.0,
            power_max: 6.5,
            kick_types: vec![KickType::Flat, KickType::Chip],
        }
    }
}

impl SearchGrid {
    pub fn validate(&self) -> Result<()> {
        if self.n_directions == 0 || self.n_powers == 0 {
            return Err(Error::Config(format!(
                "search grid needs at least one direction and one power, got {} × {}",
                self.n_directions, self.n_powers
            )));
        }
        if !(self.power_min > 0.0 && self.power_min <= self.power_max && self.power_max.is_finite()) {
            return Err(Error::Config("search grid: need 0 < power_min ≤ power_max".into()));
        }
        let mut kinds = self.kick_types.clone();
        kinds.sort();
        kinds.dedup();
        if kinds.len() != self.kick_types.len() {
            return Err(Error::Config("search grid: duplicate kick type".into()));
        }
        Ok(())
    }

    pub fn cells_per_kick_type(&self) -> usize {
        self.n_directions * self.n_powers
    }

    pub fn cell_count(&self) -> usize {
        self.kick_types.len() * self.cells_per_kick_type()
    }

    /// Kick types in canonical order (flat before chip).
    pub fn ordered_kick_types(&self) -> Vec<KickType> {
        let mut kinds = self.kick_types.clone();
        kinds.sort();
        kinds
    }

    /// Direction angle −π + k·2π/n.
    pub fn angle(&self, dir_index: usize) -> f64 {
        (dir_index as f64 - self.n_directions as f64 / 2.0) * (2.0 * PI / self.n_directions as f64)
    }

    /// Unit vector for `dir_index`. Axis directions are exact, and the
    /// vectors for k and n − k are exact mirror images, so mirrored and
    /// rotated worlds map onto the grid without rounding drift.
    pub fn direction(&self, dir_index: usize) -> Vec2 {
        let n = self.n_directions as i64;
        let m = 2 * dir_index as i64 - n; // angle = m · π / n
        if m == -n || m == n {
            return Vec2::new(-1.0, 0.0);
        }
        if m == 0 {
            return Vec2::new(1.0, 0.0);
        }
        if 2 * m.abs() == n {
            return Vec2::new(0.0, m.signum() as f64);
        }
        let theta = m.unsigned_abs() as f64 * (PI / n as f64);
        Vec2::new(theta.cos(), m.signum() as f64 * theta.sin())
    }

    /// Launch speed v_min + j·(v_max − v_min)/(n − 1), endpoints inclusive.
    pub fn power(&self, power_index: usize) -> f64 {
        if self.n_powers <= 1 {
            return self.power_min;
        }
        self.power_min + power_index as f64 * (self.power_max - self.power_min) / (self.n_powers - 1) as f64
    }
}

/// A robot reaching the ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interceptor {
    pub robot: RobotRef,
    pub time: f64,
    pub point: Vec2,
}

/// One kick of the search grid with its interception outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PassCandidate {
    pub kick_type: KickType,
    pub dir_index: usize,
    pub power_index: usize,
    pub angle: f64,
    pub direction: Vec2,
    pub power: f64,
    pub origin: Vec2,
    /// First teammate (kicker excluded) to reach the ball.
    pub first_ours: Option<Interceptor>,
    /// First opponent to reach the ball.
    pub first_theirs: Option<Interceptor>,
    pub feasible: bool,
}

impl PassCandidate {
    pub fn receive_point(&self) -> Option<Vec2> {
        self.first_ours.map(|i| i.point)
    }

    /// Opponent time minus teammate time; infinite when no opponent gets there.
    pub fn intercept_margin(&self) -> Option<f64> {
        let ours = self.first_ours?;
        Some(self.first_theirs.map_or(f64::INFINITY, |o| o.time - ours.time))
    }

    pub fn trajectory(&self, params: &BallModelParams) -> BallTrajectory {
        BallTrajectory::kick(self.origin, self.direction, self.power, self.kick_type, params)
    }

    /// Canonical ordering key: (kick type, direction, power).
    pub fn order_key(&self) -> (KickType, usize, usize) {
        (self.kick_type, self.dir_index, self.power_index)
    }
}

/// Filled search grid, indexed by (kick type, direction, power).
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateGrid {
    pub grid: SearchGrid,
    pub kicker_id: u32,
    pub origin: Vec2,
    pub candidates: Vec<PassCandidate>,
    /// Number of single-robot interception scans run.
    pub sbip_calls: u64,
}

impl CandidateGrid {
    pub fn index(&self, kick_slot: usize, dir_index: usize, power_index: usize) -> usize {
        (kick_slot * self.grid.n_directions + dir_index) * self.grid.n_powers + power_index
    }

    pub fn get(&self, kick_type: KickType, dir_index: usize, power_index: usize) -> Option<&PassCandidate> {
        let slot = self.grid.ordered_kick_types().iter().position(|k| *k == kick_type)?;
        if dir_index >= self.grid.n_directions || power_index >= self.grid.n_powers {
            return None;
        }
        self.candidates.get(self.index(slot, dir_index, power_index))
    }

    /// Feasible candidates in (kick type, direction, power) order.
    pub fn feasible_candidates(&self) -> Vec<PassCandidate> {
        self.candidates.iter().filter(|c| c.feasible).copied().collect()
    }

    pub fn feasible_count(&self, kick_type: KickType) -> usize {
        self.candidates.iter().filter(|c| c.feasible && c.kick_type == kick_type).count()
    }

    /// One row per cell: kick_type, dir_index, power_index, angle, power,
    /// our_time, opp_time, feasible. Missing times are written as `never`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "kick_type,dir_index,power_index,angle,power,our_time,opp_time,feasible")?;
        for c in &self.candidates {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                c.kick_type.as_str(),
                c.dir_index,
                c.power_index,
                c.angle,
                c.power,
                fmt_time(c.first_ours.map(|i| i.time)),
                fmt_time(c.first_theirs.map(|i| i.time)),
                c.feasible
            )?;
        }
        Ok(())
    }
}

fn fmt_time(t: Option<f64>) -> String {
    t.map_or_else(|| "never".to_string(), |t| t.to_string())
}

pub fn feasible_candidates(grid: &CandidateGrid) -> Vec<PassCandidate> {
    grid.feasible_candidates()
}

/// How the grid is executed. Results never depend on the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel { workers: usize },
}

/// Run the search on `workers` threads.
pub fn run_dpps(world: &WorldState, kicker_id: u32, cfg: &PlannerConfig, workers: usize) -> Result<CandidateGrid> {
    run_dpps_with(world, kicker_id, cfg, Execution::Parallel { workers })
}

/// Single-threaded reference run.
pub fn run_dpps_serial(world: &WorldState, kicker_id: u32, cfg: &PlannerConfig) -> Result<CandidateGrid> {
    run_dpps_with(world, kicker_id, cfg, Execution::Serial)
}

pub fn run_dpps_with(world: &WorldState, kicker_id: u32, cfg: &PlannerConfig, exec: Execution) -> Result<CandidateGrid> {
    let grid = &cfg.grid;
    grid.validate()?;
    cfg.intercept.validate()?;
    let kicker = world.our_robot(kicker_id).ok_or(Error::UnknownRobot(kicker_id))?;
    let origin = world.ball().position;
    let gap = kicker.position.distance(origin);
    if gap > cfg.search.possession_radius {
        log::warn!(
            "kicker {kicker_id} is {gap:.3} m from the ball (possession radius {:.3} m)",
            cfg.search.possession_radius
        );
    }

    let kinds = grid.ordered_kick_types();
    let directions: Vec<Vec2> = (0..grid.n_directions).map(|k| grid.direction(k)).collect();
    let cells: Vec<(KickType, usize, usize)> = kinds
        .iter()
        .flat_map(|&kind| {
            (0..grid.n_directions).flat_map(move |k| (0..grid.n_powers).map(move |j| (kind, k, j)))
        })
        .collect();

    let ctx = CellContext {
        world,
        cfg,
        origin,
        kicker: kicker.key(),
        directions: &directions,
    };
    let evaluated: Vec<(PassCandidate, u64)> = match exec {
        Execution::Serial => cells.iter().map(|&c| ctx.evaluate(c)).collect(),
        Execution::Parallel { workers } => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers.max(1))
                .build()
                .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
            pool.install(|| cells.par_iter().map(|&c| ctx.evaluate(c)).collect())
        }
    };
    let sbip_calls = evaluated.iter().map(|(_, n)| n).sum();
    Ok(CandidateGrid {
        grid: grid.clone(),
        kicker_id,
        origin,
        candidates: evaluated.into_iter().map(|(c, _)| c).collect(),
        sbip_calls,
    })
}

struct CellContext<'a> {
    world: &'a WorldState,
    cfg: &'a PlannerConfig,
    origin: Vec2,
    kicker: RobotRef,
    directions: &'a [Vec2],
}

impl CellContext<'_> {
    fn evaluate(&self, (kick_type, dir_index, power_index): (KickType, usize, usize)) -> (PassCandidate, u64) {
        let cfg = self.cfg;
        let direction = self.directions[dir_index];
        let power = cfg.grid.power(power_index);
        let traj = BallTrajectory::kick(self.origin, direction, power, kick_type, &cfg.ball);
        let horizon = ScanHorizon::new(&traj, self.world.field());

        // Only the fastest robot per team is kept, so each scan may stop as soon
        // as it can no longer beat the current best of its team. Robots near
        // the ball path go first to tighten that bound early. Ties still go to
        // the robot that comes first in world order.
        let path_end = traj.point_at_distance(traj.distance_at(horizon.t_end()));
        let robots = self.world.robots();
        let mut order: Vec<(f64, usize)> = robots
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let key = if r.key() == self.kicker {
                    f64::INFINITY
                } else {
                    segment_distance(r.position, self.origin, path_end)
                };
                (key, i)
            })
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        let mut best: [Option<(Interceptor, usize)>; 2] = [None, None];
        let mut calls = 0u64;
        for &(_, i) in &order {
            let robot = &robots[i];
            let slot = match robot.team {
                Team::Ours => 0,
                Team::Theirs => 1,
            };
            let cutoff = best[slot].map_or(Cutoff::NONE, |(b, bi)| Cutoff {
                time: b.time,
                tie_wins: i < bi,
            });
            calls += 1;
            let hit = scan_intercept(
                robot,
                &traj,
                horizon,
                cfg.motion.for_team(robot.team),
                cfg.intercept.dt,
                cfg.intercept.robot_radius,
                cutoff,
            );
            if robot.key() == self.kicker {
                continue;
            }
            if let Some((time, point)) = hit {
                let interceptor = Interceptor {
                    robot: robot.key(),
                    time,
                    point,
                };
                best[slot] = Some((interceptor, i));
            }
        }
        let first_ours = best[0].map(|b| b.0);
        let first_theirs = best[1].map(|b| b.0);
        let feasible = match (first_ours, first_theirs) {
            (None, _) => false,
            (Some(_), None) => true,
            (Some(o), Some(t)) => o.time + cfg.search.safety_margin <= t.time,
        };
        let candidate = PassCandidate {
            kick_type,
            dir_index,
            power_index,
            angle: cfg.grid.angle(dir_index),
            direction,
            power,
            origin: self.origin,
            first_ours,
            first_theirs,
            feasible,
        };
        (candidate, calls)
    }
}

fn segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len_sq = ab.dot(ab);
    let u = if len_sq > 0.0 { ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0) } else { 0.0 };
    p.distance(a + ab * u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::{BallState, FieldGeometry, RobotState};

    #[test]
    fn grid_discretization() {
        let g = SearchGrid::default();
        assert_eq!(g.angle(0), -PI);
        assert!((g.angle(1) - (-PI + 2.0 * PI / 128.0)).abs() < 1e-15);
        assert_eq!(g.angle(64), 0.0);
        assert_eq!(g.power(0), 1.0);
        assert_eq!(g.power(63), 6.5);
        assert!((g.power(1) - 1.0 - 5.5 / 63.0).abs() < 1e-15);
        assert_eq!(g.cell_count(), 16384);
    }

    #[test]
    fn directions_are_unit_and_mirror_exactly() {
        let g = SearchGrid::default();
        for k in 0..g.n_directions {
            let d = g.direction(k);
            assert!((d.norm() - 1.0).abs() < 1e-15);
            assert!((d.angle() - g.angle(k)).abs() < 1e-12 || k == 0);
            let mirrored = g.direction((g.n_directions - k) % g.n_directions);
            assert_eq!(mirrored, d.mirror_y(), "k={k}");
        }
        assert_eq!(g.direction(0), Vec2::new(-1.0, 0.0));
        assert_eq!(g.direction(32), Vec2::new(0.0, -1.0));
        assert_eq!(g.direction(96), Vec2::new(0.0, 1.0));
    }

    #[test]
    fn zero_sized_grid_is_config_error() {
        let robots = vec![RobotState::at_rest(0, Team::Ours, Vec2::new(-0.1, 0.0))];
        let w = WorldState::new(FieldGeometry::default(), BallState::default(), robots, 0.0).unwrap();
        let mut cfg = PlannerConfig::default();
        cfg.grid.n_powers = 0;
        assert!(matches!(run_dpps_serial(&w, 0, &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn empty_kick_types_give_empty_grid() {
        let robots = vec![RobotState::at_rest(0, Team::Ours, Vec2::new(-0.1, 0.0))];
        let w = WorldState::new(FieldGeometry::default(), BallState::default(), robots, 0.0).unwrap();
        let mut cfg = PlannerConfig::default();
        cfg.grid.kick_types.clear();
        let g = run_dpps_serial(&w, 0, &cfg).unwrap();
        assert!(g.candidates.is_empty());
        assert_eq!(g.sbip_calls, 0);
    }

    #[test]
    fn unknown_kicker() {
        let robots = vec![RobotState::at_rest(0, Team::Theirs, Vec2::new(-0.1, 0.0))];
        let w = WorldState::new(FieldGeometry::default(), BallState::default(), robots, 0.0).unwrap();
        assert!(matches!(
            run_dpps_serial(&w, 0, &PlannerConfig::default()),
            Err(Error::UnknownRobot(0))
        ));
    }

    #[test]
    fn kicker_alone_has_no_feasible_pass() {
        let robots = vec![RobotState::at_rest(0, Team::Ours, Vec2::new(-0.1, 0.0))];
        let w = WorldState::new(FieldGeometry::default(), BallState::default(), robots, 0.0).unwrap();
        let mut cfg = PlannerConfig::default();
        cfg.grid.n_directions = 8;
        cfg.grid.n_powers = 4;
        let g = run_dpps_serial(&w, 0, &cfg).unwrap();
        assert!(g.feasible_candidates().is_empty());
        assert!(g.candidates.iter().all(|c| c.first_ours.is_none()));
        assert_eq!(g.sbip_calls, 2 * 8 * 4);
    }

    #[test]
    fn csv_has_one_row_per_cell() {
        let robots = vec![
            RobotState::at_rest(0, Team::Ours, Vec2::new(-0.1, 0.0)),
            RobotState::at_rest(1, Team::Ours, Vec2::new(2.0, 1.0)),
        ];
        let w = WorldState::new(FieldGeometry::default(), BallState::default(), robots, 0.0).unwrap();
        let mut cfg = PlannerConfig::default();
        cfg.grid.n_directions = 4;
        cfg.grid.n_powers = 3;
        let g = run_dpps_serial(&w, 0, &cfg).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + 24);
        assert!(text.lines().nth(1).unwrap().starts_with("flat,0,0,"));
        assert!(text.contains(",never,true") || text.contains(",never,false"));
    }
}
