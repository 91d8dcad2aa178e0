//! Coordinate-descent grid search over membership parameters.
//!
//! The objective is the worst absolute drift over every scenario, with the
//! mean absolute drift breaking ties. A failed mission scores just under
//! [`FAILURE_PENALTY`], graded by how far it got. Each coordinate is probed at a few grid offsets
//! around its current value and the best strict improvement is kept; a
//! sweep without improvement halves the grid spacing.

use std::cmp::Ordering;

use super::{simulate_partial, Scenario, MAX_STEPS};
use crate::fis::{
    FuzzyController, InputVar, Level, MembershipFunction, RuleBase, Steer, TermTable,
    INPUT_UNIVERSE,
};

pub const FAILURE_PENALTY: f64 = 1.0e6;

/// Lexicographic `(max |drift|, mean |drift|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Objective {
    pub max_abs_drift: f64,
    pub mean_abs_drift: f64,
}

impl Objective {
    /// Score of a failed mission: worse than any completed one, and better
    /// the more steps were flown before the failure.
    fn failed(steps_flown: usize, mean_abs_drift: f64) -> Self {
        Self {
            max_abs_drift: FAILURE_PENALTY - steps_flown as f64,
            mean_abs_drift,
        }
    }

    pub fn is_failure(&self) -> bool {
        self.max_abs_drift > FAILURE_PENALTY - MAX_STEPS as f64 - 1.0
    }

    pub fn better_than(&self, other: &Self) -> bool {
        self.cmp_key(other) == Ordering::Less
    }

    fn cmp_key(&self, other: &Self) -> Ordering {
        self.max_abs_drift
            .total_cmp(&other.max_abs_drift)
            .then(self.mean_abs_drift.total_cmp(&other.mean_abs_drift))
    }
}

pub fn evaluate(scenarios: &[Scenario], rules: &RuleBase, terms: &TermTable) -> Objective {
    let controller = FuzzyController::new(rules.clone(), terms.clone());
    let mut worst = 0.0f64;
    let mut total = 0.0;
    let mut count = 0usize;
    let mut failed = false;
    for s in scenarios {
        let (path, failure) = simulate_partial(s, &controller);
        failed |= failure.is_some();
        for p in &path {
            // poses past the pipeline's ends only happen on failed runs
            if let Some(x) = s.world.pipeline_x_at(p.y) {
                worst = worst.max((p.x - x).abs());
                total += (p.x - x).abs();
                count += 1;
            }
        }
    }
    let mean = if count == 0 { 0.0 } else { total / count as f64 };
    if failed {
        return Objective::failed(count, mean);
    }
    Objective {
        max_abs_drift: worst,
        mean_abs_drift: mean,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Input(InputVar, Level),
    Output(Steer),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Knob {
    Center,
    Width,
}

#[derive(Debug, Clone, Copy)]
struct Coordinate {
    slot: Slot,
    knob: Knob,
    /// Initial grid spacing in parameter units.
    spacing: f64,
}

fn coordinates() -> Vec<Coordinate> {
    let mut out = Vec::new();
    for var in InputVar::ALL {
        for level in Level::ALL {
            let slot = Slot::Input(var, level);
            out.push(Coordinate {
                slot,
                knob: Knob::Center,
                spacing: 0.05,
            });
            out.push(Coordinate {
                slot,
                knob: Knob::Width,
                spacing: 0.04,
            });
        }
    }
    // output widths play no part in the weighted-center defuzzifier
    for s in Steer::ALL {
        out.push(Coordinate {
            slot: Slot::Output(s),
            knob: Knob::Center,
            spacing: 10.0,
        });
    }
    out
}

fn get(terms: &TermTable, slot: Slot) -> MembershipFunction {
    match slot {
        Slot::Input(v, l) => terms.input(v, l),
        Slot::Output(s) => terms.output(s),
    }
}

fn with_value(terms: &TermTable, c: &Coordinate, value: f64) -> Option<TermTable> {
    // keeps written rule files free of representation noise
    let value = (value * 1e6).round() / 1e6;
    let shape = get(terms, c.slot);
    let shape = match c.knob {
        Knob::Center => shape.with_center(value),
        Knob::Width => shape.with_width(value),
    };
    let mut next = terms.clone();
    let ok = match c.slot {
        Slot::Input(v, l) => next.set_input(v, l, shape).is_ok(),
        Slot::Output(s) => next.set_output(s, shape).is_ok(),
    };
    ok.then_some(next)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneResult {
    pub terms: TermTable,
    pub initial: Objective,
    pub best: Objective,
    /// Objective evaluations spent, including the initial one.
    pub evaluations: usize,
}

const OFFSETS: [f64; 4] = [-2.0, -1.0, 1.0, 2.0];
const MIN_SCALE: f64 = 1.0 / 64.0;

/// Tunes `init` against the scenarios within `budget` objective evaluations.
/// Never returns parameters scoring worse than `init`.
pub fn tune(scenarios: &[Scenario], rules: &RuleBase, init: &TermTable, budget: usize) -> TuneResult {
    let budget = budget.max(1);
    let initial = evaluate(scenarios, rules, init);
    let mut best_terms = init.clone();
    let mut best = initial;
    let mut evaluations = 1;
    let coords = coordinates();
    let mut scale = 1.0;

    'search: while scale >= MIN_SCALE {
        let mut improved = false;
        for c in &coords {
            let current = match c.knob {
                Knob::Center => get(&best_terms, c.slot).center(),
                Knob::Width => get(&best_terms, c.slot).width(),
            };
            let mut step_best: Option<(TermTable, Objective)> = None;
            for off in OFFSETS {
                let candidate = current + off * c.spacing * scale;
                let Some(terms) = with_value(&best_terms, c, candidate) else {
                    continue;
                };
                if evaluations >= budget {
                    if let Some((t, o)) = step_best {
                        best_terms = t;
                        best = o;
                    }
                    break 'search;
                }
                let obj = evaluate(scenarios, rules, &terms);
                evaluations += 1;
                let reference = step_best.as_ref().map_or(best, |(_, o)| *o);
                if obj.better_than(&reference) {
                    step_best = Some((terms, obj));
                }
            }
            if let Some((t, o)) = step_best {
                best_terms = t;
                best = o;
                improved = true;
            }
        }
        if !improved {
            scale /= 2.0;
        }
    }

    TuneResult {
        terms: best_terms,
        initial,
        best,
        evaluations,
    }
}

/// Shifts every input term center by `offset`, clamped to the input universe.
pub fn shift_input_centers(terms: &TermTable, offset: f64) -> TermTable {
    let mut out = terms.clone();
    for var in InputVar::ALL {
        for level in Level::ALL {
            let shape = terms.input(var, level);
            let c = ((shape.center() + offset) * 1e6).round() / 1e6;
            let c = c.clamp(INPUT_UNIVERSE.0, INPUT_UNIVERSE.1);
            out.set_input(var, level, shape.with_center(c))
                .expect("clamped center stays valid");
        }
    }
    out
}
