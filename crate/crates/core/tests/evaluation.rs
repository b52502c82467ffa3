mod common;

use proptest::prelude::*;
use rand::Rng;
use sslplan::eval::{
    best_pass, decide_shot, plan_free_kick, possession, score_feasible, score_pass, shoot_angle, widest_goal_window,
    FreeKickOrder, PassWeights, PossessionSide, ShotReason,
};
use sslplan::search::run_dpps_serial;
use sslplan::world::BallState;
use sslplan::{Error, PlannerConfig, SearchGrid, Team, Vec2, WorldState};

fn coarse() -> PlannerConfig {
    let mut cfg = PlannerConfig::default();
    cfg.grid = SearchGrid {
        n_directions: 48,
        n_powers: 16,
        ..SearchGrid::default()
    };
    cfg
}

#[test]
fn shoot_angle_agrees_with_ray_oracle() {
    let mut rng = common::rng(21);
    for _ in 0..40 {
        let point = Vec2::new(rng.gen_range(0.0..5.0), rng.gen_range(-3.0..3.0));
        let theirs: Vec<Vec2> = (0..rng.gen_range(0..5))
            .map(|_| Vec2::new(rng.gen_range(point.x..5.9), rng.gen_range(-2.0..2.0)))
            .collect();
        let w = common::world_from(Vec2::ZERO, &[Vec2::new(-0.1, 0.0)], &theirs);
        if theirs.iter().any(|o| o.distance(point) <= 0.09) {
            continue;
        }
        let exact = shoot_angle(point, &w, 0.09);
        let rays = common::ray_shoot_angle(point, &w, 0.09, 100_000);
        assert!((exact - rays).abs() <= 1e-2, "{point:?}: {exact} vs {rays}");
    }
}

#[test]
fn two_blockers_leave_the_larger_window() {
    let p = Vec2::new(2.0, 0.0);
    let w = common::world_from(Vec2::ZERO, &[Vec2::new(-0.1, 0.0)], &[Vec2::new(5.0, 0.25), Vec2::new(5.0, -0.55)]);
    let win = widest_goal_window(p, &w, 0.09).unwrap();
    let rays = common::ray_shoot_angle(p, &w, 0.09, 100_000);
    assert!((win.angle - rays).abs() < 1e-3);
    // Three gaps remain; the one between the blockers is the widest.
    assert!(win.target.y > -0.55 && win.target.y < 0.25);
    assert!(win.angle > 0.2 && win.angle < 0.21);
}

#[test]
fn wall_of_opponents_closes_the_goal() {
    let wall: Vec<Vec2> = (0..13).map(|i| Vec2::new(5.5, -0.96 + 0.16 * i as f64)).collect();
    let mut ours = vec![Vec2::new(-0.1, 0.0)];
    ours.push(Vec2::new(3.0, 0.0));
    let w = common::world_from(Vec2::ZERO, &ours, &wall);
    assert_eq!(shoot_angle(Vec2::new(3.0, 0.0), &w, 0.09), 0.0);
    let shooter = *w.our_robot(1).unwrap();
    let d = decide_shot(&shooter, &w, &PlannerConfig::default()).unwrap();
    assert!(!d.shoot);
    assert_eq!(d.reason, ShotReason::AngleTooSmall);
}

#[test]
fn clear_shot_from_two_meters() {
    let w = common::world_from(Vec2::ZERO, &[Vec2::new(-0.1, 0.0), Vec2::new(4.0, 0.0)], &[Vec2::new(-3.0, 2.0)]);
    let d = decide_shot(w.our_robot(1).unwrap(), &w, &PlannerConfig::default()).unwrap();
    assert!(d.shoot);
    assert_eq!(d.reason, ShotReason::Clear);
    assert!((d.shot_target - Vec2::new(6.0, 0.0)).norm() < 1e-12);
}

#[test]
fn fast_defender_makes_the_shot_pointless() {
    // A long shot with the goal open but a defender standing next to the line.
    let w = common::world_from(Vec2::ZERO, &[Vec2::new(-0.1, 0.0), Vec2::new(-3.0, 0.0)], &[Vec2::new(1.5, 0.5)]);
    let d = decide_shot(w.our_robot(1).unwrap(), &w, &PlannerConfig::default()).unwrap();
    assert!(d.shot_angle >= 0.1);
    assert!(!d.shoot);
    assert_eq!(d.reason, ShotReason::Interceptable);
}

#[test]
fn shooting_needs_no_angle_when_alone() {
    let mut rng = common::rng(22);
    let mut cfg = PlannerConfig::default();
    cfg.shot.angle_threshold = 0.0;
    for _ in 0..100 {
        let p = Vec2::new(rng.gen_range(-5.9..5.9), rng.gen_range(-4.4..4.4));
        let w = common::world_from(Vec2::ZERO, &[Vec2::new(-0.1, 0.0), p], &[]);
        assert!(decide_shot(w.our_robot(1).unwrap(), &w, &cfg).unwrap().shoot);
    }
}

proptest! {
    #[test]
    fn approaching_opponent_never_widens_the_goal(
        px in 0.0f64..4.0, py in -2.0f64..2.0, ox in 1.0f64..5.8, oy in -3.0f64..3.0, f in 0.0f64..0.95,
    ) {
        let point = Vec2::new(px, py);
        let start = Vec2::new(ox.max(px + 0.3), oy);
        let moved = start + (point - start) * f;
        prop_assume!(moved.distance(point) > 0.2);
        let far = common::world_from(Vec2::ZERO, &[Vec2::new(-0.1, 0.0)], &[start]);
        let near = common::world_from(Vec2::ZERO, &[Vec2::new(-0.1, 0.0)], &[moved]);
        prop_assert!(shoot_angle(point, &near, 0.09) <= shoot_angle(point, &far, 0.09) + 1e-12);
    }
}

fn scenario(seed: u64) -> WorldState {
    common::random_world(
        &mut common::rng(seed),
        &common::WorldSpec {
            ours: 3..=8,
            theirs: 2..=8,
            ..Default::default()
        },
    )
}

#[test]
fn scores_are_undefined_for_infeasible_cells() {
    let cfg = coarse();
    let w = scenario(23);
    let grid = run_dpps_serial(&w, 0, &cfg).unwrap();
    let bad = grid.candidates.iter().find(|c| !c.feasible).unwrap();
    assert!(matches!(
        score_pass(bad, &w, &cfg.pass_weights, 0.09),
        Err(Error::ScoreUndefined)
    ));
}

#[test]
fn zero_weights_give_zero_scores() {
    let cfg = coarse();
    let w = scenario(24);
    let grid = run_dpps_serial(&w, 0, &cfg).unwrap();
    for s in score_feasible(&grid, &w, &PassWeights::zero(), 0.09) {
        assert_eq!(s.score, 0.0);
    }
}

#[test]
fn argmax_survives_weight_scaling() {
    let cfg = coarse();
    for seed in 30..36 {
        let w = scenario(seed);
        let grid = run_dpps_serial(&w, 0, &cfg).unwrap();
        let Ok(best) = best_pass(&grid, &w, &cfg.pass_weights, 0.09) else { continue };
        for lambda in [0.25, 3.0, 1000.0] {
            let scaled = best_pass(&grid, &w, &cfg.pass_weights.scaled(lambda), 0.09).unwrap();
            assert_eq!(scaled.candidate.order_key(), best.candidate.order_key());
        }
    }
}

#[test]
fn margin_only_weights_pick_the_largest_margin() {
    let cfg = coarse();
    let weights = PassWeights {
        intercept_margin: 1.0,
        margin_cap: f64::INFINITY,
        ..PassWeights::zero()
    };
    for seed in 40..46 {
        let w = scenario(seed);
        let grid = run_dpps_serial(&w, 0, &cfg).unwrap();
        let Ok(best) = best_pass(&grid, &w, &weights, 0.09) else { continue };
        // Exhaustive oracle: first feasible cell in grid order with the largest margin.
        let mut oracle: Option<(f64, (sslplan::KickType, usize, usize))> = None;
        for c in grid.candidates.iter().filter(|c| c.feasible) {
            let m = c.intercept_margin().unwrap();
            let m = if m.is_infinite() { f64::INFINITY } else { m };
            if oracle.map_or(true, |(bm, _)| m > bm) {
                oracle = Some((m, c.order_key()));
            }
        }
        let (om, key) = oracle.unwrap();
        if om.is_finite() {
            assert_eq!(best.candidate.order_key(), key);
        }
    }
}

#[test]
fn empty_feasible_set_reports_no_pass() {
    let w = common::world_from(Vec2::ZERO, &[Vec2::new(-0.1, 0.0)], &[Vec2::new(3.0, 0.0)]);
    let cfg = coarse();
    let grid = run_dpps_serial(&w, 0, &cfg).unwrap();
    assert!(matches!(
        best_pass(&grid, &w, &cfg.pass_weights, 0.09),
        Err(Error::NoFeasiblePass)
    ));
}

#[test]
fn free_kick_cosimulation() {
    let cfg = coarse();
    let dt = cfg.intercept.dt;
    let mut checked = 0;
    for seed in 50..62 {
        let w = scenario(seed);
        let grid = run_dpps_serial(&w, 0, &cfg).unwrap();
        for c in grid.feasible_candidates().iter().step_by(7) {
            let plan = plan_free_kick(&w, 0, c, &cfg).unwrap();
            let hit = c.first_ours.unwrap();
            // Ball side: integrate the ball independently and find when it gets there.
            let sim = common::integrate_ball(c.power, cfg.ball.slide_decel, cfg.ball.roll_decel, cfg.ball.transition_ratio, 1e-4);
            let d = hit.point.distance(c.origin);
            let ball_at = sim.time_to(d.min(sim.samples.last().unwrap().1)).unwrap();
            assert!((ball_at - plan.t_ball).abs() < 1e-3);
            let robot_done = plan.t_robot;
            let ball_done = match plan.order {
                FreeKickOrder::RobotFirst => plan.kick_delay + plan.t_ball,
                FreeKickOrder::KickFirst => plan.t_ball,
            };
            match plan.order {
                FreeKickOrder::RobotFirst => assert!((robot_done - ball_done).abs() <= dt),
                FreeKickOrder::KickFirst => {
                    assert_eq!(plan.kick_delay, 0.0);
                    assert!(robot_done <= ball_done);
                }
            }
            // The interception scan found the receiver at a sample no earlier than its arrival.
            assert!(hit.time + 1e-12 >= plan.t_robot);
            checked += 1;
        }
    }
    assert!(checked > 20);
}

#[test]
fn receiver_on_the_spot_kicks_first() {
    let w = common::world_from(Vec2::ZERO, &[Vec2::new(-0.1, 0.0), Vec2::new(2.0, 0.0)], &[]);
    let cfg = coarse();
    let grid = run_dpps_serial(&w, 0, &cfg).unwrap();
    let c = grid.feasible_candidates()[0];
    // Park the receiver on the receive point of that pass.
    let hit = c.first_ours.unwrap();
    let mut robots = w.robots().to_vec();
    for r in robots.iter_mut().filter(|r| r.key() == hit.robot) {
        r.position = hit.point;
    }
    let parked = w.with_robots(robots).unwrap();
    let plan = plan_free_kick(&parked, 0, &c, &cfg).unwrap();
    assert_eq!(plan.t_robot, 0.0);
    assert_eq!(plan.order, FreeKickOrder::KickFirst);
    assert_eq!(plan.kick_delay, 0.0);
}

#[test]
fn possession_flips_under_team_swap() {
    let mut rng = common::rng(70);
    let cfg = PlannerConfig::default();
    for _ in 0..60 {
        let w = common::random_world(
            &mut rng,
            &common::WorldSpec {
                moving_ball: true,
                ..Default::default()
            },
        );
        let a = possession(&w, &cfg).unwrap();
        let b = possession(&w.swap_teams(), &cfg).unwrap();
        let flipped = match a.side {
            PossessionSide::Ours => PossessionSide::Theirs,
            PossessionSide::Theirs => PossessionSide::Ours,
            PossessionSide::Contested => PossessionSide::Contested,
        };
        assert_eq!(b.side, flipped);
        assert_eq!((a.our_time, a.their_time), (b.their_time, b.our_time));
    }
}

#[test]
fn possession_of_a_loose_ball_near_an_opponent() {
    let w = common::world_from(Vec2::new(1.0, 0.0), &[Vec2::new(-3.0, 0.0)], &[Vec2::new(1.2, 0.0)]);
    let w = w
        .with_ball(BallState {
            position: Vec2::new(1.0, 0.0),
            velocity: Vec2::new(0.5, 0.0),
        })
        .unwrap();
    let p = possession(&w, &PlannerConfig::default()).unwrap();
    assert_eq!(p.side, PossessionSide::Theirs);
    assert!(w.team(Team::Theirs).count() == 1);
}
