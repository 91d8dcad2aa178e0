//! Per-step drift against the pipeline and its CSV form.

use std::fmt::Write as _;

use super::{AuvState, SimError, World};

pub const DEFAULT_TOLERANCE: f64 = 8.0;
pub const CSV_HEADER: &str = "step,actual_x_cm,sim_x_cm,drift_cm,pct_drift";

/// Rounds half-up to one decimal. The value is first snapped to 1e-9 so
/// that binary representation error in e.g. `91.25` cannot flip the
/// rounding direction.
pub fn round_half_up_1dp(value: f64) -> f64 {
    let snapped = (value * 1e9).round() / 1e9;
    (snapped * 10.0 + 0.5).floor() / 10.0
}

/// `100 |drift| / tolerance`, rounded half-up to one decimal.
pub fn percentage_of_drift(drift: f64, tolerance: f64) -> f64 {
    round_half_up_1dp(100.0 * drift.abs() / tolerance)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPoint {
    /// 1-based step number.
    pub step: usize,
    pub actual_x: f64,
    pub simulated_x: f64,
    /// `simulated_x - actual_x`.
    pub drift: f64,
    pub pct_drift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathRecord {
    pub points: Vec<PathPoint>,
    pub tolerance: f64,
}

impl PathRecord {
    pub fn max_abs_drift(&self) -> f64 {
        self.points.iter().map(|p| p.drift.abs()).fold(0.0, f64::max)
    }

    pub fn mean_abs_drift(&self) -> f64 {
        if self.points.is_empty() {
            return 0.0;
        }
        self.points.iter().map(|p| p.drift.abs()).sum::<f64>() / self.points.len() as f64
    }

    pub fn within_tolerance(&self) -> bool {
        self.points.iter().all(|p| p.drift.abs() <= self.tolerance)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{:.1}",
                p.step,
                fmt_1dp(p.actual_x),
                fmt_1dp(p.simulated_x),
                fmt_signed_1dp(p.drift),
                p.pct_drift
            );
        }
        out
    }

    /// Parses the CSV written by [`PathRecord::to_csv`].
    pub fn from_csv(text: &str, tolerance: f64) -> Result<Self, SimError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, header)) if header.trim() == CSV_HEADER => {}
            Some((i, _)) => {
                return Err(SimError::Csv {
                    line: i + 1,
                    message: format!("expected header {CSV_HEADER:?}"),
                })
            }
            None => {
                return Err(SimError::Csv {
                    line: 1,
                    message: "empty file".into(),
                })
            }
        }
        let mut points = Vec::new();
        for (i, line) in lines {
            let err = |message: String| SimError::Csv {
                line: i + 1,
                message,
            };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 5 {
                return Err(err(format!("expected 5 fields, found {}", fields.len())));
            }
            let step = fields[0]
                .parse::<usize>()
                .map_err(|_| err(format!("bad step {:?}", fields[0])))?;
            let mut nums = [0.0; 4];
            for (n, f) in nums.iter_mut().zip(&fields[1..]) {
                *n = f
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err(format!("bad number {f:?}")))?;
            }
            points.push(PathPoint {
                step,
                actual_x: nums[0],
                simulated_x: nums[1],
                drift: nums[2],
                pct_drift: nums[3],
            });
        }
        if points.is_empty() {
            return Err(SimError::Csv {
                line: 2,
                message: "no data rows".into(),
            });
        }
        Ok(Self { points, tolerance })
    }
}

fn fmt_1dp(v: f64) -> String {
    let s = format!("{v:.1}");
    if s == "-0.0" {
        "0.0".into()
    } else {
        s
    }
}

fn fmt_signed_1dp(v: f64) -> String {
    let s = format!("{v:+.1}");
    if s == "-0.0" {
        "+0.0".into()
    } else {
        s
    }
}

/// Drift of each recorded pose against the pipeline at the same `y`.
pub fn drift_metrics(path: &[AuvState], world: &World, tolerance: f64) -> Result<PathRecord, SimError> {
    if !(tolerance > 0.0) {
        return Err(SimError::InvalidTolerance(tolerance));
    }
    let points = path
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let actual_x = world
                .pipeline_x_at(s.y)
                .ok_or(SimError::OutOfRange { step: i + 1, y: s.y })?;
            let drift = s.x - actual_x;
            Ok(PathPoint {
                step: i + 1,
                actual_x,
                simulated_x: s.x,
                drift,
                pct_drift: percentage_of_drift(drift, tolerance),
            })
        })
        .collect::<Result<_, SimError>>()?;
    Ok(PathRecord { points, tolerance })
}
