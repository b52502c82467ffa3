//! `sslplan` command-line front end: loads a world snapshot and a planner
//! configuration, runs one planning query, and writes its summary as JSON to
//! standard output plus optional CSV and SVG files.

mod error;
pub mod output;
pub mod render;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sslplan::eval::{
    best_pass, best_pass_of_kind, decide_shot, plan_free_kick, possession, score_feasible, FreeKickOrder, PossessionSide,
    ScoredPass,
};
use sslplan::offball::{best_running_points, drag_decision, partition_zones, zone_heatmap, RunnerRequest, ZoneLabel};
use sslplan::search::{run_dpps, run_dpps_serial, CandidateGrid};
use sslplan::{parse_world_snapshot, KickType, PlannerConfig, Team, Vec2, WorldState};

pub use error::{CliError, CliResult};
use output::Outputs;
use render::Palette;

#[derive(Debug, Parser)]
#[command(name = "sslplan", version, about = "Pass and shoot planner for SSL robot soccer")]
pub struct Cli {
    /// World snapshot (JSON).
    #[arg(long, global = true)]
    pub snapshot: Option<PathBuf>,

    /// Planner configuration (JSON); omitted keys take their defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Main output file (CSV).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// SVG rendering of the output.
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,

    /// Search worker threads. `bench` takes a comma-separated list.
    #[arg(long, global = true, value_delimiter = ',')]
    pub workers: Vec<usize>,

    /// Print the effective configuration and exit.
    #[arg(long)]
    pub print_config: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search passes, pick the best one, decide on a shot and place runners.
    Plan(PlanArgs),
    /// Dump scored pass receive points or running-point lattices.
    Heatmap(HeatmapArgs),
    /// Time the search serially and at each worker count.
    Bench(BenchArgs),
    /// Which team gets to the moving ball first.
    Possession,
    /// Receiver/kick timing for the best pass.
    Freekick(KickerArgs),
    /// Drag decision of one of our robots against one opponent.
    DragEval(DragArgs),
}

#[derive(Debug, Args)]
pub struct KickerArgs {
    /// Id of our robot at the ball.
    #[arg(long, default_value_t = 0)]
    pub kicker: u32,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[command(flatten)]
    pub kicker: KickerArgs,
    /// Runners available for off-ball positions; all teammates but the kicker and receiver by default.
    #[arg(long)]
    pub runners: Option<usize>,
    /// Also plan free-kick timing for the best pass.
    #[arg(long)]
    pub free_kick: bool,
    #[arg(long, default_value = "cyan")]
    pub flat_color: String,
    #[arg(long, default_value = "orange")]
    pub chip_color: String,
    #[arg(long, default_value = "green")]
    pub flat_line_color: String,
    #[arg(long, default_value = "yellow")]
    pub chip_line_color: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HeatmapMode {
    Pass,
    Run,
}

#[derive(Debug, Args)]
pub struct HeatmapArgs {
    #[arg(long, value_enum, default_value = "run")]
    pub mode: HeatmapMode,
    /// Zone I, II, III or IV (run mode); all four by default.
    #[arg(long)]
    pub zone: Option<ZoneLabel>,
    #[command(flatten)]
    pub kicker: KickerArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub kicker: KickerArgs,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
}

#[derive(Debug, Args)]
pub struct DragArgs {
    /// Our robot's id.
    #[arg(long)]
    pub me: u32,
    /// The opponent's id.
    #[arg(long)]
    pub defender: u32,
}

pub fn load_config(path: Option<&Path>) -> CliResult<PlannerConfig> {
    match path {
        None => Ok(PlannerConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
            Ok(PlannerConfig::from_json(&text)?)
        }
    }
}

pub fn load_snapshot(path: Option<&Path>) -> CliResult<WorldState> {
    let p = path.ok_or_else(|| CliError::Usage("--snapshot is required".into()))?;
    let bytes = std::fs::read(p).map_err(|e| CliError::io(p, e))?;
    Ok(parse_world_snapshot(&bytes)?)
}

impl Cli {
    fn single_worker_count(&self) -> CliResult<usize> {
        match self.workers.as_slice() {
            [] => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
            [0] => Err(CliError::Usage("--workers must be at least 1".into())),
            [n] => Ok(*n),
            _ => Err(CliError::Usage("only `bench` takes several worker counts".into())),
        }
    }
}

/// Runs the parsed command, writing its JSON summary to `stdout`. Output
/// files are written only after everything has been computed.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    let cfg = load_config(cli.config.as_deref())?;
    if cli.print_config {
        return emit(stdout, &cfg.to_json());
    }
    let command = cli
        .command
        .as_ref()
        .ok_or_else(|| CliError::Usage("no command given (try --help)".into()))?;
    let world = load_snapshot(cli.snapshot.as_deref())?;
    let mut outputs = Outputs::default();
    let summary = match command {
        Command::Plan(args) => cmd_plan(cli, args, &world, &cfg, &mut outputs)?,
        Command::Heatmap(args) => cmd_heatmap(cli, args, &world, &cfg, &mut outputs)?,
        Command::Bench(args) => cmd_bench(cli, args, &world, &cfg)?,
        Command::Possession => cmd_possession(&world, &cfg)?,
        Command::Freekick(args) => cmd_freekick(cli, args, &world, &cfg)?,
        Command::DragEval(args) => cmd_drag(args, &world, &cfg)?,
    };
    outputs.commit()?;
    emit(stdout, &serde_json::to_string_pretty(&summary).expect("summary serializes"))
}

fn emit(stdout: &mut dyn Write, text: &str) -> CliResult<()> {
    writeln!(stdout, "{text}").map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn xy(p: Vec2) -> Value {
    json!([p.x, p.y])
}

fn time_or_null(t: Option<f64>) -> Value {
    t.map_or(Value::Null, |t| json!(t))
}

fn pass_json(s: &ScoredPass) -> Value {
    let c = &s.candidate;
    let hit = c.first_ours.expect("feasible pass has a receiver");
    json!({
        "kick_type": c.kick_type.as_str(),
        "dir_index": c.dir_index,
        "power_index": c.power_index,
        "angle": c.angle,
        "power": c.power,
        "receiver": hit.robot.id,
        "receive_point": xy(hit.point),
        "receive_time": hit.time,
        "opponent_time": time_or_null(c.first_theirs.map(|h| h.time)),
        "score": s.score,
    })
}

fn search(world: &WorldState, kicker: u32, cfg: &PlannerConfig, workers: usize) -> CliResult<(CandidateGrid, f64)> {
    let start = Instant::now();
    let grid = run_dpps(world, kicker, cfg, workers)?;
    Ok((grid, start.elapsed().as_secs_f64() * 1e3))
}

fn best_or_none(grid: &CandidateGrid, world: &WorldState, cfg: &PlannerConfig) -> CliResult<Option<ScoredPass>> {
    match best_pass(grid, world, &cfg.pass_weights, cfg.intercept.robot_radius) {
        Ok(b) => Ok(Some(b)),
        Err(sslplan::Error::NoFeasiblePass) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn grid_csv(grid: &CandidateGrid) -> String {
    let mut buf = Vec::new();
    grid.write_csv(&mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("CSV is ASCII")
}

fn cmd_plan(cli: &Cli, args: &PlanArgs, world: &WorldState, cfg: &PlannerConfig, outputs: &mut Outputs) -> CliResult<Value> {
    let workers = cli.single_worker_count()?;
    let kicker_id = args.kicker.kicker;
    let kicker = *world.our_robot(kicker_id).ok_or(sslplan::Error::UnknownRobot(kicker_id))?;
    let (grid, wall_ms) = search(world, kicker_id, cfg, workers)?;
    let radius = cfg.intercept.robot_radius;
    let best = best_or_none(&grid, world, cfg)?;
    let best_flat = best_pass_of_kind(&grid, world, &cfg.pass_weights, radius, KickType::Flat);
    let best_chip = best_pass_of_kind(&grid, world, &cfg.pass_weights, radius, KickType::Chip);
    let shot = decide_shot(&kicker, world, cfg)?;

    let free_kick = match (&best, args.free_kick) {
        (Some(b), true) => {
            let plan = plan_free_kick(world, kicker_id, &b.candidate, cfg)?;
            Some(json!({
                "order": match plan.order {
                    FreeKickOrder::RobotFirst => "robot_first",
                    FreeKickOrder::KickFirst => "kick_first",
                },
                "t_ball": plan.t_ball,
                "t_robot": plan.t_robot,
                "kick_delay": plan.kick_delay,
            }))
        }
        _ => None,
    };

    let teammates = world.ours().count();
    let request = RunnerRequest {
        available_runners: args.runners.unwrap_or(teammates.saturating_sub(2).min(4)),
        occupied: Default::default(),
        best_pass_point: best.as_ref().and_then(|b| b.candidate.receive_point()),
    };
    let runners: Vec<Value> = best_running_points(world, &request, &cfg.running.weights, cfg)
        .iter()
        .map(|s| json!({ "zone": s.zone.as_str(), "point": xy(s.point), "score": s.score }))
        .collect();

    if let Some(path) = &cli.out {
        outputs.add(path, grid_csv(&grid));
    }
    if let Some(path) = &cli.svg {
        let palette = Palette {
            flat_point: args.flat_color.clone(),
            chip_point: args.chip_color.clone(),
            flat_line: args.flat_line_color.clone(),
            chip_line: args.chip_line_color.clone(),
        };
        let svg = render::pass_overlay_svg(world, &grid, best_flat.as_ref(), best_chip.as_ref(), cfg, &palette);
        outputs.add(path, svg);
    }

    Ok(json!({
        "kicker": kicker_id,
        "grid": {
            "directions": grid.grid.n_directions,
            "powers": grid.grid.n_powers,
            "kick_types": grid.grid.ordered_kick_types().iter().map(|k| k.as_str()).collect::<Vec<_>>(),
            "cells": grid.candidates.len(),
            "feasible_flat": grid.feasible_count(KickType::Flat),
            "feasible_chip": grid.feasible_count(KickType::Chip),
        },
        "no_feasible_pass": best.is_none(),
        "best_pass": best.as_ref().map_or(Value::Null, pass_json),
        "best_flat": best_flat.as_ref().map_or(Value::Null, pass_json),
        "best_chip": best_chip.as_ref().map_or(Value::Null, pass_json),
        "shot": {
            "shoot": shot.shoot,
            "angle": shot.shot_angle,
            "target": xy(shot.shot_target),
            "blocked": shot.blocked,
            "reason": serde_json::to_value(shot.reason).expect("reason serializes"),
        },
        "free_kick": free_kick,
        "running_points": runners,
        "telemetry": {
            "wall_time_ms": wall_ms,
            "workers": workers,
            "sbip_calls": grid.sbip_calls,
        },
    }))
}

fn cmd_heatmap(
    cli: &Cli,
    args: &HeatmapArgs,
    world: &WorldState,
    cfg: &PlannerConfig,
    outputs: &mut Outputs,
) -> CliResult<Value> {
    let (csv, cell, rows) = match args.mode {
        HeatmapMode::Pass => {
            if args.zone.is_some() {
                return Err(CliError::Usage("--zone applies to run mode only".into()));
            }
            let (grid, _) = search(world, args.kicker.kicker, cfg, cli.single_worker_count()?)?;
            let scored = score_feasible(&grid, world, &cfg.pass_weights, cfg.intercept.robot_radius);
            (render::pass_heatmap_csv(&scored), 0.1, scored.len())
        }
        HeatmapMode::Run => {
            let part = partition_zones(world.field(), world.ball().position, cfg.running.min_zone_width);
            let labels: Vec<ZoneLabel> = args.zone.map_or(ZoneLabel::ALL.to_vec(), |z| vec![z]);
            let samples: Vec<_> = labels
                .iter()
                .flat_map(|&l| zone_heatmap(world, part.zone(l), &cfg.running.weights, cfg))
                .collect();
            (render::running_heatmap_csv(&samples, cfg, world.field()), cfg.running.grid_step, samples.len())
        }
    };
    if let Some(path) = &cli.svg {
        // Rendered from the CSV text itself so a saved CSV re-renders identically.
        let points = render::parse_heatmap_csv(&csv)?;
        outputs.add(path, render::heatmap_svg(world.field(), &points, cell));
    }
    let out = cli
        .out
        .as_ref()
        .ok_or_else(|| CliError::Usage("heatmap needs --out".into()))?;
    outputs.add(out, csv);
    Ok(json!({
        "mode": match args.mode { HeatmapMode::Pass => "pass", HeatmapMode::Run => "run" },
        "rows": rows,
        "out": out.display().to_string(),
    }))
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed().as_secs_f64() * 1e3)
}

fn cmd_bench(cli: &Cli, args: &BenchArgs, world: &WorldState, cfg: &PlannerConfig) -> CliResult<Value> {
    if args.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    let counts = if cli.workers.is_empty() { vec![1] } else { cli.workers.clone() };
    if counts.contains(&0) {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let kicker = args.kicker.kicker;
    let mut serial_ms = Vec::new();
    let mut oracle = None;
    for _ in 0..args.reps {
        let (grid, ms) = timed(|| run_dpps_serial(world, kicker, cfg));
        oracle = Some(grid?);
        serial_ms.push(ms);
    }
    let oracle = oracle.expect("at least one repetition");
    let serial_median = median(serial_ms.clone());

    let mut rows = Vec::new();
    for &workers in &counts {
        let mut times = Vec::new();
        for rep in 0..args.reps {
            let (grid, ms) = timed(|| run_dpps(world, kicker, cfg, workers));
            if grid? != oracle {
                return Err(CliError::Bench(format!("grid at {workers} workers (repetition {rep}) differs from the serial result")));
            }
            times.push(ms);
        }
        let med = median(times.clone());
        rows.push(json!({
            "workers": workers,
            "median_ms": med,
            "min_ms": times.iter().cloned().fold(f64::INFINITY, f64::min),
            "speedup": serial_median / med,
        }));
    }
    Ok(json!({
        "repetitions": args.reps,
        "cells": oracle.candidates.len(),
        "sbip_calls": oracle.sbip_calls,
        "identical": true,
        "serial": {
            "median_ms": serial_median,
            "min_ms": serial_ms.iter().cloned().fold(f64::INFINITY, f64::min),
        },
        "parallel": rows,
    }))
}

fn cmd_possession(world: &WorldState, cfg: &PlannerConfig) -> CliResult<Value> {
    let p = possession(world, cfg)?;
    Ok(json!({
        "side": match p.side {
            PossessionSide::Ours => "ours",
            PossessionSide::Theirs => "theirs",
            PossessionSide::Contested => "contested",
        },
        "our_time": time_or_null(p.our_time),
        "their_time": time_or_null(p.their_time),
    }))
}

fn cmd_freekick(cli: &Cli, args: &KickerArgs, world: &WorldState, cfg: &PlannerConfig) -> CliResult<Value> {
    let (grid, _) = search(world, args.kicker, cfg, cli.single_worker_count()?)?;
    let Some(best) = best_or_none(&grid, world, cfg)? else {
        return Ok(json!({ "no_feasible_pass": true }));
    };
    let plan = plan_free_kick(world, args.kicker, &best.candidate, cfg)?;
    Ok(json!({
        "no_feasible_pass": false,
        "pass": pass_json(&best),
        "order": match plan.order {
            FreeKickOrder::RobotFirst => "robot_first",
            FreeKickOrder::KickFirst => "kick_first",
        },
        "t_ball": plan.t_ball,
        "t_robot": plan.t_robot,
        "kick_delay": plan.kick_delay,
    }))
}

fn cmd_drag(args: &DragArgs, world: &WorldState, cfg: &PlannerConfig) -> CliResult<Value> {
    let me = world.our_robot(args.me).ok_or(sslplan::Error::UnknownRobot(args.me))?;
    let defender = world
        .theirs()
        .find(|r| r.id == args.defender)
        .ok_or_else(|| CliError::Usage(format!("no opponent with id {}", args.defender)))?;
    debug_assert_eq!(defender.team, Team::Theirs);
    let d = drag_decision(me, defender, world.ball().position, defender.velocity.norm(), &cfg.drag)?;
    Ok(json!({
        "judge": d.judge,
        "marked": d.marked,
        "accel_direction": xy(d.accel_direction),
        "reversed": d.reversed,
    }))
}
