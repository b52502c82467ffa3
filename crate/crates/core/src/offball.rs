//! Off-the-ball running: the attacking half is split into four zones that
//! follow the ball, each zone is rasterized, and every lattice vertex is
//! scored as a running point. Also hosts the drag-skill predicate.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{finite, positive, PlannerConfig};
use crate::error::{Error, Result};
use crate::eval::{normalize, weighted_sum};
use crate::geom::{Rect, Vec2};
use crate::motion::{arrival_time, MotionLimits};
use crate::world::{FieldGeometry, RobotState, WorldState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ZoneLabel {
    I,
    II,
    III,
    IV,
}

impl ZoneLabel {
    pub const ALL: [ZoneLabel; 4] = [ZoneLabel::I, ZoneLabel::II, ZoneLabel::III, ZoneLabel::IV];

    pub fn as_str(self) -> &'static str {
        match self {
            ZoneLabel::I => "I",
            ZoneLabel::II => "II",
            ZoneLabel::III => "III",
            ZoneLabel::IV => "IV",
        }
    }

    /// Zones nearer the opponent goal.
    pub fn is_attacking(self) -> bool {
        matches!(self, ZoneLabel::III | ZoneLabel::IV)
    }

    /// The zone a y-mirror maps this one onto.
    pub fn mirrored(self) -> ZoneLabel {
        match self {
            ZoneLabel::I => ZoneLabel::II,
            ZoneLabel::II => ZoneLabel::I,
            ZoneLabel::III => ZoneLabel::IV,
            ZoneLabel::IV => ZoneLabel::III,
        }
    }
}

impl std::str::FromStr for ZoneLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ZoneLabel::ALL
            .into_iter()
            .find(|z| z.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown zone `{s}` (expected I, II, III or IV)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zone {
    pub label: ZoneLabel,
    pub rect: Rect,
}

/// Four rectangles covering the attacking half. I and II lie next to the
/// halfway line, III and IV next to the opponent goal; I and III are on the
/// +y side of the ball-tracking cut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZonePartition {
    pub zones: [Zone; 4],
    /// y of the horizontal cut.
    pub cut_y: f64,
    /// x of the vertical cut.
    pub cut_x: f64,
}

impl ZonePartition {
    pub fn zone(&self, label: ZoneLabel) -> &Zone {
        &self.zones[label as usize]
    }

    /// Every zone whose closed rectangle contains `p`.
    pub fn zones_containing(&self, p: Vec2) -> impl Iterator<Item = ZoneLabel> + '_ {
        self.zones.iter().filter(move |z| z.rect.contains(p)).map(|z| z.label)
    }
}

pub fn partition_zones(field: &FieldGeometry, ball: Vec2, min_zone_width: f64) -> ZonePartition {
    let front = field.front_field();
    let cut_x = field.half_length() / 2.0;
    let lo = -field.half_width() + min_zone_width;
    let hi = field.half_width() - min_zone_width;
    let cut_y = if lo <= hi { ball.y.clamp(lo, hi) } else { 0.0 };
    let rect = |x0: f64, x1: f64, y0: f64, y1: f64| Rect::new(Vec2::new(x0, y0), Vec2::new(x1, y1));
    let (x0, x1, y0, y1) = (front.min.x, front.max.x, front.min.y, front.max.y);
    ZonePartition {
        zones: [
            Zone {
                label: ZoneLabel::I,
                rect: rect(x0, cut_x, cut_y, y1),
            },
            Zone {
                label: ZoneLabel::II,
                rect: rect(x0, cut_x, y0, cut_y),
            },
            Zone {
                label: ZoneLabel::III,
                rect: rect(cut_x, x1, cut_y, y1),
            },
            Zone {
                label: ZoneLabel::IV,
                rect: rect(cut_x, x1, y0, cut_y),
            },
        ],
        cut_y,
        cut_x,
    }
}

/// Weights ω_i of the running-point score Σ ω_i·x_i.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunningWeights {
    pub dist_to_goal: f64,
    pub dist_to_ball: f64,
    pub angle_to_goal: f64,
    pub guard_time: f64,
    pub defense_exposure: f64,
}

impl Default for RunningWeights {
    fn default() -> Self {
        RunningWeights {
            dist_to_goal: 1.0,
            dist_to_ball: 0.5,
            angle_to_goal: 0.5,
            guard_time: 0.3,
            defense_exposure: 1.0,
        }
    }
}

impl RunningWeights {
    pub fn zero() -> Self {
        RunningWeights {
            dist_to_goal: 0.0,
            dist_to_ball: 0.0,
            angle_to_goal: 0.0,
            guard_time: 0.0,
            defense_exposure: 0.0,
        }
    }

    fn as_array(&self) -> [f64; 5] {
        [
            self.dist_to_goal,
            self.dist_to_ball,
            self.angle_to_goal,
            self.guard_time,
            self.defense_exposure,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunningParams {
    pub weights: RunningWeights,
    /// Rasterization step, meters.
    pub grid_step: f64,
    /// The ball-tracking cut never leaves a zone narrower than this.
    pub min_zone_width: f64,
    pub guard_time_cap: f64,
    /// Preferred band of |angle to goal|, radians; the angle term is 1 inside
    /// and falls linearly to 0 over `angle_band_decay` outside.
    pub angle_band_low: f64,
    pub angle_band_high: f64,
    pub angle_band_decay: f64,
    /// Length normalization bound; the field length when unset.
    pub length_bound: Option<f64>,
}

impl Default for RunningParams {
    fn default() -> Self {
        RunningParams {
            weights: RunningWeights::default(),
            grid_step: 0.1,
            min_zone_width: 1.0,
            guard_time_cap: 10.0,
            angle_band_low: 15.0_f64.to_radians(),
            angle_band_high: 45.0_f64.to_radians(),
            angle_band_decay: 30.0_f64.to_radians(),
            length_bound: None,
        }
    }
}

impl RunningParams {
    pub fn validate(&self) -> Result<()> {
        for (name, w) in [
            ("running.weights.dist_to_goal", self.weights.dist_to_goal),
            ("running.weights.dist_to_ball", self.weights.dist_to_ball),
            ("running.weights.angle_to_goal", self.weights.angle_to_goal),
            ("running.weights.guard_time", self.weights.guard_time),
            ("running.weights.defense_exposure", self.weights.defense_exposure),
        ] {
            finite(name, w)?;
        }
        positive("running.grid_step", self.grid_step)?;
        positive("running.min_zone_width", self.min_zone_width)?;
        positive("running.guard_time_cap", self.guard_time_cap)?;
        positive("running.angle_band_decay", self.angle_band_decay)?;
        if !(0.0 <= self.angle_band_low && self.angle_band_low <= self.angle_band_high && self.angle_band_high <= PI) {
            return Err(Error::Config("running: need 0 ≤ angle_band_low ≤ angle_band_high ≤ π".into()));
        }
        if let Some(b) = self.length_bound {
            positive("running.length_bound", b)?;
        }
        Ok(())
    }

    /// 1 inside the preferred band, decaying linearly to 0 outside it.
    pub fn angle_band_score(&self, angle: f64) -> f64 {
        let a = angle.abs();
        let outside = if a < self.angle_band_low {
            self.angle_band_low - a
        } else if a > self.angle_band_high {
            a - self.angle_band_high
        } else {
            0.0
        };
        (1.0 - outside / self.angle_band_decay).max(0.0)
    }
}

/// Raw running-point features.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunningPointFeatures {
    pub dist_to_goal: f64,
    pub dist_to_ball: f64,
    /// |angle| between the goal direction from the point and the +x axis.
    pub angle_to_goal: f64,
    pub guard_time: f64,
    /// 1 when the opponent nearest the point is closer to the ball than the point is.
    pub defense_exposure: f64,
}

impl RunningPointFeatures {
    /// Signed, normalized terms x_i in weight order.
    pub fn terms(&self, params: &RunningParams, field: &FieldGeometry) -> [f64; 5] {
        let length_bound = params.length_bound.unwrap_or(field.length);
        [
            -normalize(self.dist_to_goal, length_bound),
            normalize(self.dist_to_ball, length_bound),
            params.angle_band_score(self.angle_to_goal),
            self.guard_time,
            -self.defense_exposure,
        ]
    }

    pub fn score(&self, weights: &RunningWeights, params: &RunningParams, field: &FieldGeometry) -> f64 {
        weighted_sum(&weights.as_array(), &self.terms(params, field))
    }
}

/// Guard coverage of a point: boundary points P and Q and the guards' time to reach them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuardTime {
    pub total: f64,
    /// Where the line to the +y post enters the defense area.
    pub p: Vec2,
    /// Where the line to the −y post enters the defense area.
    pub q: Vec2,
}

/// Time the opponent guard(s) need to reach P and Q, where P and Q are the
/// points at which the lines from `point` to the two goal posts enter the
/// opponent defense area.
pub fn guard_time(point: Vec2, world: &WorldState, limits: &MotionLimits, cap: f64) -> Result<GuardTime> {
    let field = world.field();
    let area = field.opponent_defense_area();
    if area.contains_strictly(point) {
        return Err(Error::DegenerateGeometry(format!(
            "point ({:.3}, {:.3}) lies inside the defense area",
            point.x, point.y
        )));
    }
    let (post_plus, post_minus) = field.opponent_goal_posts();
    let entry = |post| {
        area.segment_entry(point, post)
            .ok_or_else(|| Error::DegenerateGeometry("line to goal post misses the defense area".into()))
    };
    let p = entry(post_plus)?;
    let q = entry(post_minus)?;

    let inside: Vec<&RobotState> = world.theirs().filter(|r| area.contains(r.position)).collect();
    let goal = field.opponent_goal_center();
    let total = match inside.len() {
        0 => {
            let nearest = world
                .theirs()
                .fold(None::<(&RobotState, f64)>, |best, r| {
                    let d = area.distance_to(r.position);
                    match best {
                        Some((_, bd)) if d >= bd => best,
                        _ => Some((r, d)),
                    }
                })
                .map(|(r, _)| r);
            match nearest {
                Some(g) => arrival_time(g, p, limits) + arrival_time(g, q, limits),
                None => cap,
            }
        }
        1 => arrival_time(inside[0], p, limits) + arrival_time(inside[0], q, limits),
        _ => {
            let mut guards = inside;
            guards.sort_by(|a, b| a.position.distance(goal).total_cmp(&b.position.distance(goal)));
            let (a, b) = (guards[0], guards[1]);
            let straight = arrival_time(a, p, limits) + arrival_time(b, q, limits);
            let crossed = arrival_time(a, q, limits) + arrival_time(b, p, limits);
            straight.min(crossed)
        }
    };
    Ok(GuardTime {
        total: total.min(cap),
        p,
        q,
    })
}

pub fn running_point_features(point: Vec2, world: &WorldState, cfg: &PlannerConfig) -> Result<RunningPointFeatures> {
    let field = world.field();
    if !field.front_field().contains(point) {
        return Err(Error::OutOfRegion { x: point.x, y: point.y });
    }
    let guard = guard_time(point, world, &cfg.motion.theirs, cfg.running.guard_time_cap)?;
    let ball = world.ball().position;
    let to_goal = field.opponent_goal_center() - point;
    let dist_to_ball = point.distance(ball);
    let marker = world.theirs().fold(None::<(&RobotState, f64)>, |best, r| {
        let d = r.position.distance(point);
        match best {
            Some((_, bd)) if d >= bd => best,
            _ => Some((r, d)),
        }
    });
    let exposed = marker.is_some_and(|(m, _)| m.position.distance(ball) < dist_to_ball);
    Ok(RunningPointFeatures {
        dist_to_goal: to_goal.norm(),
        dist_to_ball,
        angle_to_goal: to_goal.y.atan2(to_goal.x).abs(),
        guard_time: guard.total,
        defense_exposure: if exposed { 1.0 } else { 0.0 },
    })
}

/// Score of a running point. `weights` overrides `cfg.running.weights`.
pub fn score_running_point(
    point: Vec2,
    world: &WorldState,
    weights: &RunningWeights,
    cfg: &PlannerConfig,
) -> Result<(f64, RunningPointFeatures)> {
    let f = running_point_features(point, world, cfg)?;
    Ok((f.score(weights, &cfg.running, world.field()), f))
}

/// Lattice vertices `k · step` inside the closed rectangle, x-major ascending.
pub fn lattice_points(rect: &Rect, step: f64) -> Vec<Vec2> {
    // Dividing by an integral inverse keeps k/10 exact where k·0.1 is not.
    let inv = 1.0 / step;
    let coord: Box<dyn Fn(i64) -> f64> = if (inv - inv.round()).abs() < 1e-9 {
        let inv = inv.round();
        Box::new(move |k| k as f64 / inv)
    } else {
        Box::new(move |k| k as f64 * step)
    };
    let range = |lo: f64, hi: f64| {
        let first = (lo / step - 1e-9).ceil() as i64;
        let last = (hi / step + 1e-9).floor() as i64;
        first..=last
    };
    let mut points = Vec::new();
    for i in range(rect.min.x, rect.max.x) {
        let x = coord(i);
        for j in range(rect.min.y, rect.max.y) {
            points.push(Vec2::new(x, coord(j)));
        }
    }
    points
}

/// One scored lattice vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunningSample {
    pub zone: ZoneLabel,
    pub point: Vec2,
    pub score: f64,
    pub features: RunningPointFeatures,
}

/// Scores of every lattice vertex of a zone. Vertices strictly inside the
/// opponent defense area have no score and are left out.
pub fn zone_heatmap(world: &WorldState, zone: &Zone, weights: &RunningWeights, cfg: &PlannerConfig) -> Vec<RunningSample> {
    let area = world.field().opponent_defense_area();
    lattice_points(&zone.rect, cfg.running.grid_step)
        .into_par_iter()
        .filter(|p| !area.contains_strictly(*p))
        .map(|p| {
            let (score, features) = score_running_point(p, world, weights, cfg).expect("lattice vertex lies in the front field");
            RunningSample {
                zone: zone.label,
                point: p,
                score,
                features,
            }
        })
        .collect()
}

/// Who is available to run, and what is off limits.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunnerRequest {
    pub available_runners: usize,
    pub occupied: BTreeSet<ZoneLabel>,
    pub best_pass_point: Option<Vec2>,
}

/// Best running point x_R per zone.
///
/// Zones that are occupied or contain the best passing point are skipped.
/// With fewer than four runners only zones III and IV are filled. Within a
/// zone only vertices strictly inside it compete; ties go to the lowest x,
/// then the lowest y. The result is ordered by zone label.
pub fn best_running_points(
    world: &WorldState,
    request: &RunnerRequest,
    weights: &RunningWeights,
    cfg: &PlannerConfig,
) -> Vec<RunningSample> {
    let partition = partition_zones(world.field(), world.ball().position, cfg.running.min_zone_width);
    let excluded: BTreeSet<ZoneLabel> = request
        .best_pass_point
        .map(|p| partition.zones_containing(p).collect())
        .unwrap_or_default();
    let short_handed = request.available_runners < 4;

    let mut best: Vec<RunningSample> = partition
        .zones
        .iter()
        .filter(|z| !request.occupied.contains(&z.label) && !excluded.contains(&z.label))
        .filter(|z| !short_handed || z.label.is_attacking())
        .filter_map(|z| {
            zone_heatmap(world, z, weights, cfg)
                .into_iter()
                .filter(|s| z.rect.contains_strictly(s.point))
                .fold(None, |acc: Option<RunningSample>, s| match acc {
                    Some(a) if s.score <= a.score => Some(a),
                    _ => Some(s),
                })
        })
        .collect();

    best.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.zone.cmp(&b.zone)));
    best.truncate(request.available_runners.min(4));
    best.sort_by_key(|s| s.zone);
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DragParams {
    /// Defender speed above which the feint reverses, m/s.
    pub v_min: f64,
    /// A defender within this distance counts as marking.
    pub mark_distance: f64,
}

impl Default for DragParams {
    fn default() -> Self {
        DragParams {
            v_min: 1.0,
            mark_distance: 1.0,
        }
    }
}

impl DragParams {
    pub fn validate(&self) -> Result<()> {
        positive("drag.v_min", self.v_min)?;
        positive("drag.mark_distance", self.mark_distance)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DragDecision {
    /// (x_ball − x_me)(y_opp − y_me) − (x_opp − x_me)(y_ball − y_me).
    pub judge: f64,
    pub marked: bool,
    /// Unit vector perpendicular to the line from us to the ball.
    pub accel_direction: Vec2,
    pub reversed: bool,
}

/// One tick of the drag feint: accelerate across the ball line away from the
/// defender, and reverse once the defender has committed above `v_min`.
pub fn drag_decision(
    me: &RobotState,
    defender: &RobotState,
    ball: Vec2,
    defender_speed: f64,
    params: &DragParams,
) -> Result<DragDecision> {
    let m = me.position;
    let o = defender.position;
    if m.distance(o) <= 1e-9 {
        return Err(Error::DegenerateGeometry("robot and defender coincide".into()));
    }
    let to_ball = (ball - m)
        .normalized()
        .ok_or_else(|| Error::DegenerateGeometry("robot and ball coincide".into()))?;
    let judge = (ball.x - m.x) * (o.y - m.y) - (o.x - m.x) * (ball.y - m.y);
    // judge > 0: the defender is on the counterclockwise side of the ball line.
    let left = to_ball.perp();
    let away = if judge > 0.0 { -left } else { left };
    let reversed = defender_speed > params.v_min;
    Ok(DragDecision {
        judge,
        marked: m.distance(o) <= params.mark_distance,
        accel_direction: if reversed { -away } else { away },
        reversed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::{BallState, Team};

    fn world_with(ball: Vec2, theirs: &[Vec2]) -> WorldState {
        let robots = theirs
            .iter()
            .enumerate()
            .map(|(i, p)| RobotState::at_rest(i as u32, Team::Theirs, *p))
            .collect();
        let ball = BallState {
            position: ball,
            velocity: Vec2::ZERO,
        };
        WorldState::new(FieldGeometry::default(), ball, robots, 0.0).unwrap()
    }

    #[test]
    fn centered_ball_gives_symmetric_zones() {
        let p = partition_zones(&FieldGeometry::default(), Vec2::ZERO, 1.0);
        assert_eq!(p.cut_y, 0.0);
        assert_eq!(p.cut_x, 3.0);
        for z in p.zones {
            assert!((z.rect.area() - 3.0 * 4.5).abs() < 1e-12);
        }
    }

    #[test]
    fn cut_clamps_near_touchline() {
        let p = partition_zones(&FieldGeometry::default(), Vec2::new(1.0, 4.4), 1.0);
        assert_eq!(p.cut_y, 3.5);
        assert!((p.zone(ZoneLabel::I).rect.height() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lattice_count_and_alignment() {
        let r = Rect::new(Vec2::new(0.0, 2.5), Vec2::new(3.0, 4.5));
        let pts = lattice_points(&r, 0.1);
        assert_eq!(pts.len(), 31 * 21);
        assert_eq!(pts[0], Vec2::new(0.0, 2.5));
        assert_eq!(*pts.last().unwrap(), Vec2::new(3.0, 4.5));
        assert!(pts.iter().all(|p| r.contains(*p)));
    }

    #[test]
    fn guard_time_symmetric_on_axis() {
        let w = world_with(Vec2::ZERO, &[Vec2::new(5.1, 0.0)]);
        let g = guard_time(Vec2::new(1.0, 0.0), &w, &MotionLimits::default(), 10.0).unwrap();
        assert_eq!(g.p.mirror_y(), g.q);
        let guard = w.theirs().next().unwrap();
        let l = MotionLimits::default();
        assert!((arrival_time(guard, g.p, &l) - arrival_time(guard, g.q, &l)).abs() < 1e-12);
        assert_eq!(g.p.x, 6.0 - 1.8);
    }

    #[test]
    fn guard_time_cap_without_opponents() {
        let w = world_with(Vec2::ZERO, &[]);
        let g = guard_time(Vec2::new(1.0, 1.0), &w, &MotionLimits::default(), 10.0).unwrap();
        assert_eq!(g.total, 10.0);
    }

    #[test]
    fn guard_time_inside_area_is_degenerate() {
        let w = world_with(Vec2::ZERO, &[]);
        assert!(matches!(
            guard_time(Vec2::new(5.5, 0.0), &w, &MotionLimits::default(), 10.0),
            Err(Error::DegenerateGeometry(_))
        ));
    }

    #[test]
    fn two_guards_take_best_assignment() {
        let w = world_with(Vec2::ZERO, &[Vec2::new(5.0, -1.0), Vec2::new(5.0, 1.0)]);
        let l = MotionLimits::default();
        let g = guard_time(Vec2::new(2.0, 0.0), &w, &l, 10.0).unwrap();
        let guards: Vec<_> = w.theirs().collect();
        let straight = arrival_time(guards[0], g.p, &l) + arrival_time(guards[1], g.q, &l);
        let crossed = arrival_time(guards[0], g.q, &l) + arrival_time(guards[1], g.p, &l);
        assert_eq!(g.total, straight.min(crossed));
        // The +y guard covers P (the +y post line).
        assert_eq!(g.total, crossed);
    }

    #[test]
    fn running_point_outside_front_field() {
        let w = world_with(Vec2::ZERO, &[]);
        let cfg = PlannerConfig::default();
        assert!(matches!(
            score_running_point(Vec2::new(-1.0, 0.0), &w, &cfg.running.weights, &cfg),
            Err(Error::OutOfRegion { .. })
        ));
    }

    #[test]
    fn zero_weights_zero_score() {
        let w = world_with(Vec2::ZERO, &[Vec2::new(3.0, 1.0)]);
        let cfg = PlannerConfig::default();
        let (s, _) = score_running_point(Vec2::new(2.0, 1.0), &w, &RunningWeights::zero(), &cfg).unwrap();
        assert_eq!(s, 0.0);
    }

    #[test]
    fn exposure_flag() {
        let cfg = PlannerConfig::default();
        let w = world_with(Vec2::new(1.0, 0.0), &[Vec2::new(4.0, 3.0)]);
        let f = running_point_features(Vec2::new(2.0, 0.0), &w, &cfg).unwrap();
        assert_eq!(f.defense_exposure, 0.0);
        let w = world_with(Vec2::new(1.0, 0.0), &[Vec2::new(1.5, 0.5)]);
        let f = running_point_features(Vec2::new(4.0, 2.0), &w, &cfg).unwrap();
        assert_eq!(f.defense_exposure, 1.0);
    }

    #[test]
    fn angle_band() {
        let p = RunningParams::default();
        assert_eq!(p.angle_band_score(30f64.to_radians()), 1.0);
        assert!((p.angle_band_score(0.0) - 0.5).abs() < 1e-12);
        assert_eq!(p.angle_band_score(80f64.to_radians()), 0.0);
        assert!(p.angle_band_score(0.0) < p.angle_band_score(20f64.to_radians()));
    }

    #[test]
    fn drag_judge_examples() {
        let me = RobotState::at_rest(0, Team::Ours, Vec2::ZERO);
        let def = RobotState::at_rest(0, Team::Theirs, Vec2::new(0.0, 1.0));
        let d = drag_decision(&me, &def, Vec2::new(1.0, 0.0), 0.0, &DragParams::default()).unwrap();
        assert_eq!(d.judge, 1.0);
        assert_eq!(d.accel_direction, Vec2::new(0.0, -1.0));
        assert!(d.marked);
        assert!(!d.reversed);

        let collinear = RobotState::at_rest(0, Team::Theirs, Vec2::new(2.0, 0.0));
        let d = drag_decision(&me, &collinear, Vec2::new(1.0, 0.0), 0.0, &DragParams::default()).unwrap();
        assert_eq!(d.judge, 0.0);

        let fast = drag_decision(&me, &def, Vec2::new(1.0, 0.0), 1.5, &DragParams::default()).unwrap();
        assert!(fast.reversed);
        assert_eq!(fast.accel_direction, Vec2::new(0.0, 1.0));
    }

    #[test]
    fn drag_degenerate() {
        let me = RobotState::at_rest(0, Team::Ours, Vec2::ZERO);
        let def = RobotState::at_rest(0, Team::Theirs, Vec2::new(0.0, 1.0));
        assert!(matches!(
            drag_decision(&me, &def, Vec2::ZERO, 0.0, &DragParams::default()),
            Err(Error::DegenerateGeometry(_))
        ));
        assert!(matches!(
            drag_decision(&me, &me, Vec2::new(1.0, 0.0), 0.0, &DragParams::default()),
            Err(Error::DegenerateGeometry(_))
        ));
    }
}
