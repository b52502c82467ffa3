//! Independent reference implementations and world generators shared by the
//! integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sslplan::ball::BallTrajectory;
use sslplan::motion::{arrival_time_within, MotionLimits};
use sslplan::world::BallState;
use sslplan::{FieldGeometry, RobotState, Team, Vec2, WorldState};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn bench_snapshot() -> WorldState {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/bench_16v16.json");
    let text = std::fs::read(path).expect("benchmark snapshot present");
    sslplan::parse_world_snapshot(&text).expect("benchmark snapshot is valid")
}

/// Euler-style integrator of the two-phase ball model. Velocity updates are
/// exact within a step, positions use the trapezoid rule.
pub struct IntegratedBall {
    pub dt: f64,
    /// (time, distance, speed) at every step until rest.
    pub samples: Vec<(f64, f64, f64)>,
}

pub fn integrate_ball(v0: f64, slide: f64, roll: f64, ratio: f64, dt: f64) -> IntegratedBall {
    let v1 = ratio * v0;
    let (mut t, mut x, mut v) = (0.0_f64, 0.0_f64, v0);
    let mut samples = vec![(t, x, v)];
    let mut sliding = v0 > v1;
    while v > 0.0 {
        let a = if sliding { slide } else { roll };
        let mut nv = v - a * dt;
        if sliding && nv <= v1 {
            // Split the step at the transition.
            let t1 = (v - v1) / slide;
            x += 0.5 * (v + v1) * t1;
            let rest = dt - t1;
            nv = (v1 - roll * rest).max(0.0);
            let used = if nv > 0.0 { rest } else { v1 / roll };
            x += 0.5 * (v1 + nv) * used;
            sliding = false;
        } else if nv <= 0.0 {
            x += 0.5 * v * (v / a);
            nv = 0.0;
        } else {
            x += 0.5 * (v + nv) * dt;
        }
        v = nv;
        t += dt;
        samples.push((t, x, v));
    }
    IntegratedBall { dt, samples }
}

impl IntegratedBall {
    /// First time the integrated ball has covered `d`, interpolated within a step.
    pub fn time_to(&self, d: f64) -> Option<f64> {
        let w = self.samples.windows(2).find(|w| w[1].1 >= d)?;
        let (t0, x0, _) = w[0];
        let (_, x1, _) = w[1];
        if d <= x0 {
            return Some(t0);
        }
        Some(t0 + self.dt * (d - x0) / (x1 - x0))
    }
}

/// Path length at which the ball leaves the closed field, found by bisection;
/// `None` when it rests inside.
pub fn exit_distance_bisect(traj: &BallTrajectory, field: &FieldGeometry) -> Option<f64> {
    let inside = |s: f64| {
        let p = traj.point_at_distance(s);
        p.x.abs() <= field.length / 2.0 && p.y.abs() <= field.width / 2.0
    };
    if inside(traj.stop_distance()) {
        return None;
    }
    if !inside(0.0) {
        return Some(0.0);
    }
    let (mut lo, mut hi) = (0.0, traj.stop_distance());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(hi)
}

/// Plain sample-by-sample interception scan with no skipping.
pub fn brute_intercept(
    robot: &RobotState,
    traj: &BallTrajectory,
    field: &FieldGeometry,
    limits: &MotionLimits,
    dt: f64,
    reach: f64,
) -> Option<(f64, Vec2)> {
    let exit = exit_distance_bisect(traj, field);
    let t_end = match exit {
        Some(s) => traj.travel_time_to_distance(s).unwrap_or(traj.stop_time()),
        None => traj.stop_time(),
    };
    let mut k = 0u64;
    loop {
        let t = k as f64 * dt;
        if t > t_end {
            break;
        }
        let s = traj.distance_at(t);
        if s >= traj.flight_distance() {
            let p = traj.point_at_distance(s);
            if arrival_time_within(robot, p, limits, reach) <= t {
                return Some((t, p));
            }
        }
        k += 1;
    }
    if exit.is_some() {
        return None;
    }
    let rest = traj.stop_point();
    Some((arrival_time_within(robot, rest, limits, reach).max(traj.stop_time()), rest))
}

/// Fastest interceptor of a team by brute force; ties keep world order.
pub fn brute_first(
    world: &WorldState,
    traj: &BallTrajectory,
    team: Team,
    skip: Option<u32>,
    limits: &MotionLimits,
    dt: f64,
    reach: f64,
) -> Option<(f64, Vec2, u32)> {
    let mut best: Option<(f64, Vec2, u32)> = None;
    for r in world.team(team) {
        if Some(r.id) == skip {
            continue;
        }
        if let Some((t, p)) = brute_intercept(r, traj, world.field(), limits, dt, reach) {
            if best.map_or(true, |b| t < b.0) {
                best = Some((t, p, r.id));
            }
        }
    }
    best
}

pub struct WorldSpec {
    pub ours: std::ops::RangeInclusive<usize>,
    pub theirs: std::ops::RangeInclusive<usize>,
    pub max_speed: f64,
    /// Snap positions to the 0.1 m lattice and zero all velocities.
    pub lattice: bool,
    pub moving_ball: bool,
}

impl Default for WorldSpec {
    fn default() -> Self {
        WorldSpec {
            ours: 2..=16,
            theirs: 2..=16,
            max_speed: 2.0,
            lattice: false,
            moving_ball: false,
        }
    }
}

fn snap(v: f64) -> f64 {
    (v * 10.0).round() / 10.0
}

/// Random world with our robot 0 next to the ball, ready to kick.
pub fn random_world(rng: &mut impl Rng, spec: &WorldSpec) -> WorldState {
    let field = FieldGeometry::default();
    let (hx, hy) = (field.length / 2.0 - 0.3, field.width / 2.0 - 0.3);
    let point = |rng: &mut dyn rand::RngCore| {
        let p = Vec2::new(rng.gen_range(-hx..hx), rng.gen_range(-hy..hy));
        if spec.lattice {
            Vec2::new(snap(p.x), snap(p.y))
        } else {
            p
        }
    };
    let velocity = |rng: &mut dyn rand::RngCore| {
        if spec.lattice || spec.max_speed == 0.0 {
            return Vec2::ZERO;
        }
        let speed = rng.gen_range(0.0..spec.max_speed);
        Vec2::from_angle(rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)) * speed
    };
    let ball_pos = point(rng);
    let ball_vel = if spec.moving_ball {
        Vec2::from_angle(rng.gen_range(-3.14..3.14)) * rng.gen_range(0.0..4.0)
    } else {
        Vec2::ZERO
    };
    let n_ours = rng.gen_range(spec.ours.clone());
    let n_theirs = rng.gen_range(spec.theirs.clone());
    let mut robots = Vec::new();
    let kicker_pos = if spec.lattice {
        ball_pos - Vec2::new(0.1, 0.0)
    } else {
        ball_pos - Vec2::from_angle(rng.gen_range(-3.14..3.14)) * 0.1
    };
    robots.push(RobotState::at_rest(0, Team::Ours, kicker_pos));
    for id in 1..n_ours as u32 {
        let (p, v) = (point(rng), velocity(rng));
        robots.push(RobotState::new(id, Team::Ours, p, v, 0.0));
    }
    for id in 0..n_theirs as u32 {
        let (p, v) = (point(rng), velocity(rng));
        robots.push(RobotState::new(id, Team::Theirs, p, v, 0.0));
    }
    let ball = BallState {
        position: ball_pos,
        velocity: ball_vel,
    };
    WorldState::new(field, ball, robots, 0.0).expect("generated world is valid")
}

/// Build a world from explicit robot lists; our robot 0 is the kicker.
pub fn world_from(ball: Vec2, ours: &[Vec2], theirs: &[Vec2]) -> WorldState {
    let mut robots: Vec<RobotState> = ours
        .iter()
        .enumerate()
        .map(|(i, p)| RobotState::at_rest(i as u32, Team::Ours, *p))
        .collect();
    robots.extend(
        theirs
            .iter()
            .enumerate()
            .map(|(i, p)| RobotState::at_rest(i as u32, Team::Theirs, *p)),
    );
    let ball = BallState {
        position: ball,
        velocity: Vec2::ZERO,
    };
    WorldState::new(FieldGeometry::default(), ball, robots, 0.0).expect("scenario world is valid")
}

/// Monte-Carlo estimate of the widest open goal window: fine ray sweep across
/// the goal mouth against opponent discs.
pub fn ray_shoot_angle(point: Vec2, world: &WorldState, radius: f64, rays: usize) -> f64 {
    let field = world.field();
    let gx = field.length / 2.0;
    let hg = field.goal_width / 2.0;
    let lo = (-hg - point.y).atan2(gx - point.x);
    let hi = (hg - point.y).atan2(gx - point.x);
    let step = (hi - lo) / rays as f64;
    let blocked = |theta: f64| {
        let d = Vec2::from_angle(theta);
        world.theirs().filter(|o| o.position.x < gx).any(|o| {
            let rel = o.position - point;
            let along = rel.dot(d);
            let perp = rel.cross(d).abs();
            along > 0.0 && perp < radius || rel.norm() <= radius
        })
    };
    let (mut best, mut run) = (0usize, 0usize);
    for i in 0..rays {
        let theta = lo + (i as f64 + 0.5) * step;
        if blocked(theta) {
            run = 0;
        } else {
            run += 1;
            best = best.max(run);
        }
    }
    best as f64 * step
}
