//! CSV rows and SVG overlays.
//!
//! Field coordinates map to pixels as px = 20 + 50·(x + L/2) and
//! py = 20 + 50·(W/2 − y): 50 px per meter, a 20 px margin, +y up.

use std::fmt::Write;

use sslplan::eval::ScoredPass;
use sslplan::offball::RunningSample;
use sslplan::search::CandidateGrid;
use sslplan::{FieldGeometry, KickType, PlannerConfig, Team, Vec2, WorldState};

use crate::error::{CliError, CliResult};

pub const PX_PER_M: f64 = 50.0;
pub const MARGIN_PX: f64 = 20.0;

#[derive(Debug, Clone, Copy)]
struct Frame {
    half_length: f64,
    half_width: f64,
}

impl Frame {
    fn new(field: &FieldGeometry) -> Self {
        Frame {
            half_length: field.half_length(),
            half_width: field.half_width(),
        }
    }

    fn px(&self, p: Vec2) -> (f64, f64) {
        (
            MARGIN_PX + PX_PER_M * (p.x + self.half_length),
            MARGIN_PX + PX_PER_M * (self.half_width - p.y),
        )
    }

    fn size(&self) -> (f64, f64) {
        (
            2.0 * MARGIN_PX + PX_PER_M * 2.0 * self.half_length,
            2.0 * MARGIN_PX + PX_PER_M * 2.0 * self.half_width,
        )
    }
}

/// Colors of the pass overlay.
#[derive(Debug, Clone)]
pub struct Palette {
    pub flat_point: String,
    pub chip_point: String,
    pub flat_line: String,
    pub chip_line: String,
}

impl Default for Palette {
    fn default() -> Self {
        Palette {
            flat_point: "cyan".into(),
            chip_point: "orange".into(),
            flat_line: "green".into(),
            chip_line: "yellow".into(),
        }
    }
}

fn open_svg(out: &mut String, frame: &Frame, field: &FieldGeometry) {
    let (w, h) = frame.size();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#
    );
    let _ = writeln!(out, r##"<rect x="0" y="0" width="{w:.0}" height="{h:.0}" fill="#1b5e20"/>"##);
    let (x0, y0) = frame.px(Vec2::new(-frame.half_length, frame.half_width));
    let _ = writeln!(
        out,
        r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="white" stroke-width="2"/>"#,
        PX_PER_M * field.length,
        PX_PER_M * field.width
    );
    let (cx, top) = frame.px(Vec2::new(0.0, frame.half_width));
    let (_, bottom) = frame.px(Vec2::new(0.0, -frame.half_width));
    let _ = writeln!(
        out,
        r#"<line x1="{cx:.2}" y1="{top:.2}" x2="{cx:.2}" y2="{bottom:.2}" stroke="white" stroke-width="1"/>"#
    );
    for sign in [-1.0, 1.0] {
        let gx = sign * frame.half_length;
        let inner = gx - sign * field.defense_area_depth;
        let corner = Vec2::new(gx.min(inner), field.defense_area_width / 2.0);
        let (ax, ay) = frame.px(corner);
        let _ = writeln!(
            out,
            r#"<rect x="{ax:.2}" y="{ay:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="white" stroke-width="1"/>"#,
            PX_PER_M * field.defense_area_depth,
            PX_PER_M * field.defense_area_width
        );
        let (_, g1) = frame.px(Vec2::new(gx, field.goal_width / 2.0));
        let (gxp, g2) = frame.px(Vec2::new(gx, -field.goal_width / 2.0));
        let _ = writeln!(
            out,
            r#"<line x1="{gxp:.2}" y1="{g1:.2}" x2="{gxp:.2}" y2="{g2:.2}" stroke="black" stroke-width="4"/>"#
        );
    }
}

fn draw_robots(out: &mut String, frame: &Frame, world: &WorldState, radius: f64) {
    for r in world.robots() {
        let (x, y) = frame.px(r.position);
        let fill = match r.team {
            Team::Ours => "royalblue",
            Team::Theirs => "gold",
        };
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="{:.2}" fill="{fill}" stroke="black"/>"#,
            PX_PER_M * radius
        );
    }
    let (bx, by) = frame.px(world.ball().position);
    let _ = writeln!(out, r#"<circle cx="{bx:.2}" cy="{by:.2}" r="2.5" fill="orangered"/>"#);
}

fn cross(out: &mut String, (x, y): (f64, f64), color: &str) {
    let s = 2.5;
    let _ = writeln!(
        out,
        r#"<path d="M{:.2} {:.2}L{:.2} {:.2}M{:.2} {:.2}L{:.2} {:.2}" stroke="{color}" stroke-width="1"/>"#,
        x - s,
        y - s,
        x + s,
        y + s,
        x - s,
        y + s,
        x + s,
        y - s
    );
}

/// Feasible receive points per kick type and the best pass line of each.
pub fn pass_overlay_svg(
    world: &WorldState,
    grid: &CandidateGrid,
    best_flat: Option<&ScoredPass>,
    best_chip: Option<&ScoredPass>,
    cfg: &PlannerConfig,
    palette: &Palette,
) -> String {
    let frame = Frame::new(world.field());
    let mut out = String::new();
    open_svg(&mut out, &frame, world.field());
    for c in grid.candidates.iter().filter(|c| c.feasible) {
        let color = match c.kick_type {
            KickType::Flat => &palette.flat_point,
            KickType::Chip => &palette.chip_point,
        };
        if let Some(p) = c.receive_point() {
            cross(&mut out, frame.px(p), color);
        }
    }
    for (best, color) in [(best_flat, &palette.flat_line), (best_chip, &palette.chip_line)] {
        if let Some(b) = best {
            let (x1, y1) = frame.px(b.candidate.origin);
            let (x2, y2) = frame.px(b.candidate.receive_point().expect("feasible pass has a receive point"));
            let _ = writeln!(
                out,
                r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{color}" stroke-width="2"/>"#
            );
        }
    }
    draw_robots(&mut out, &frame, world, cfg.intercept.robot_radius);
    out.push_str("</svg>\n");
    out
}

pub fn pass_heatmap_csv(scored: &[ScoredPass]) -> String {
    let mut out =
        String::from("kick_type,dir_index,power_index,x,y,teammate_time,shoot_angle,dist_to_goal,refraction_angle,intercept_margin,score\n");
    for s in scored {
        let p = s.candidate.receive_point().expect("feasible pass has a receive point");
        let f = &s.features;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            s.candidate.kick_type.as_str(),
            s.candidate.dir_index,
            s.candidate.power_index,
            p.x,
            p.y,
            f.teammate_intercept_time,
            f.shoot_angle_at_receive,
            f.dist_receive_to_goal,
            f.refraction_angle,
            f.intercept_margin,
            s.score
        );
    }
    out
}

/// Raw features, their signed normalized terms, and the weighted score.
pub fn running_heatmap_csv(samples: &[RunningSample], cfg: &PlannerConfig, field: &FieldGeometry) -> String {
    let mut out = String::from(
        "zone,x,y,dist_to_goal,dist_to_ball,angle_to_goal,guard_time,defense_exposure,\
         term_dist_to_goal,term_dist_to_ball,term_angle_to_goal,term_guard_time,term_defense_exposure,score\n",
    );
    for s in samples {
        let f = &s.features;
        let t = f.terms(&cfg.running, field);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            s.zone.as_str(),
            s.point.x,
            s.point.y,
            f.dist_to_goal,
            f.dist_to_ball,
            f.angle_to_goal,
            f.guard_time,
            f.defense_exposure,
            t[0],
            t[1],
            t[2],
            t[3],
            t[4],
            s.score
        );
    }
    out
}

/// A scored point read back from a heatmap CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatPoint {
    pub x: f64,
    pub y: f64,
    pub score: f64,
}

/// Reads the `x`, `y` and `score` columns of either heatmap CSV.
pub fn parse_heatmap_csv(text: &str) -> CliResult<Vec<HeatPoint>> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().ok_or_else(|| CliError::Csv("empty file".into()))?.split(',').collect();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| *h == name)
            .ok_or_else(|| CliError::Csv(format!("missing column `{name}`")))
    };
    let (ix, iy, is) = (col("x")?, col("y")?, col("score")?);
    lines
        .enumerate()
        .map(|(n, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            let get = |i: usize| -> CliResult<f64> {
                fields
                    .get(i)
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| CliError::Csv(format!("row {}: bad value in column {}", n + 2, header[i])))
            };
            Ok(HeatPoint {
                x: get(ix)?,
                y: get(iy)?,
                score: get(is)?,
            })
        })
        .collect()
}

/// Linear blue (low) to red (high) color ramp.
fn ramp(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let r = (255.0 * t).round() as u8;
    let b = (255.0 * (1.0 - t)).round() as u8;
    format!("#{r:02x}00{b:02x}")
}

/// One square per point, `cell` meters wide, colored by score relative to
/// the range of the map. A constant map is drawn in the middle color.
pub fn heatmap_svg(field: &FieldGeometry, points: &[HeatPoint], cell: f64) -> String {
    let frame = Frame::new(field);
    let mut out = String::new();
    open_svg(&mut out, &frame, field);
    let lo = points.iter().map(|p| p.score).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.score).fold(f64::NEG_INFINITY, f64::max);
    let side = PX_PER_M * cell;
    for p in points {
        let t = if hi > lo { (p.score - lo) / (hi - lo) } else { 0.5 };
        let (x, y) = frame.px(Vec2::new(p.x, p.y));
        let _ = writeln!(
            out,
            r#"<rect x="{:.2}" y="{:.2}" width="{side:.2}" height="{side:.2}" fill="{}" fill-opacity="0.8"/>"#,
            x - side / 2.0,
            y - side / 2.0,
            ramp(t)
        );
    }
    out.push_str("</svg>\n");
    out
}
