//! SVG path plot: envelope, pipeline, tolerance band and recorded steps.

use std::fmt::Write as _;

use pipetrack_core::sim::{PathRecord, World};

const SCALE: f64 = 3.0;
const MARGIN: f64 = 40.0;

struct Canvas {
    height: f64,
}

impl Canvas {
    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        (MARGIN + x * SCALE, self.height - MARGIN - y * SCALE)
    }

    fn points(&self, pts: &[(f64, f64)]) -> String {
        pts.iter()
            .map(|&(x, y)| {
                let (u, v) = self.px(x, y);
                format!("{u:.2},{v:.2}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// CSV values carry one decimal.
const SLACK: f64 = 0.05;
const STEP: f64 = 22.5;

/// First `y > after` on the pipeline where it passes through `x`. Along a
/// segment parallel to the y axis the point goes one default step further.
fn locate_y(world: &World, x: f64, after: f64) -> Option<f64> {
    world.pipeline.windows(2).find_map(|seg| {
        let ((x0, y0), (x1, y1)) = (seg[0], seg[1]);
        if y1 < after || x < x0.min(x1) - SLACK || x > x0.max(x1) + SLACK {
            return None;
        }
        let y = if (x1 - x0).abs() < SLACK {
            if after.is_finite() {
                (after + STEP).min(y1)
            } else {
                y0
            }
        } else {
            let t = ((x - x0) / (x1 - x0)).clamp(0.0, 1.0);
            y0 + t * (y1 - y0)
        };
        (y > after).then_some(y)
    })
}

/// Renders `record` over `world`. Steps are placed at the pipeline station
/// whose x matches the step's actual x.
pub fn render_svg(world: &World, record: &PathRecord) -> String {
    let (ex, ey) = world.envelope;
    let width = ex * SCALE + 2.0 * MARGIN;
    let height = ey * SCALE + 2.0 * MARGIN;
    let c = Canvas { height };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let (x0, y0) = c.px(0.0, ey);
    let _ = writeln!(
        out,
        r##"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="#f4f7fa" stroke="#333" stroke-width="1"/>"##,
        ex * SCALE,
        ey * SCALE
    );

    if world.pipeline.len() >= 2 {
        let tol = record.tolerance;
        let mut band: Vec<(f64, f64)> = world.pipeline.iter().map(|&(x, y)| (x - tol, y)).collect();
        band.extend(world.pipeline.iter().rev().map(|&(x, y)| (x + tol, y)));
        let _ = writeln!(
            out,
            r##"<polygon class="tolerance" points="{}" fill="#cde8cd" fill-opacity="0.6" stroke="none"/>"##,
            c.points(&band)
        );
        let _ = writeln!(
            out,
            r##"<polyline class="pipeline" points="{}" fill="none" stroke="#555" stroke-width="{:.2}"/>"##,
            c.points(&world.pipeline),
            world.pipe_width * SCALE
        );
    }

    let mut after = f64::NEG_INFINITY;
    let mut path = Vec::new();
    for p in &record.points {
        if let Some(y) = locate_y(world, p.actual_x, after) {
            after = y;
            path.push((p.simulated_x, y, p.drift.abs() <= record.tolerance));
        }
    }
    if path.len() >= 2 {
        let pts: Vec<(f64, f64)> = path.iter().map(|&(x, y, _)| (x, y)).collect();
        let _ = writeln!(
            out,
            r##"<polyline class="path" points="{}" fill="none" stroke="#1f5fbf" stroke-width="1.5"/>"##,
            c.points(&pts)
        );
    }
    for &(x, y, ok) in &path {
        let (u, v) = c.px(x, y);
        let color = if ok { "#1f5fbf" } else { "#c0392b" };
        let _ = writeln!(
            out,
            r#"<circle class="step" cx="{u:.2}" cy="{v:.2}" r="4" fill="{color}"/>"#
        );
    }
    out.push_str("</svg>\n");
    out
}
