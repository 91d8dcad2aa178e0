//! Closed-loop mission: capture, perceive, steer, step.

use std::thread;

use super::{drift_metrics, render_view, PathRecord, Scenario, SimError};
use crate::features::extract_features;
use crate::fis::FuzzyController;

/// Hard cap on steps, guards against vehicles that never reach the far end.
pub const MAX_STEPS: usize = 1000;

/// Vehicle pose. `heading` is in degrees: 90 points along +y and larger
/// values turn toward +x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuvState {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
}

impl AuvState {
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Self { x, y, heading }
    }

    /// Unit travel direction in the seabed plane.
    pub fn direction(&self) -> (f64, f64) {
        let (s, c) = self.heading.to_radians().sin_cos();
        (-c, s)
    }
}

/// Applies one steering set point: turn by `gain * (steer - 90)` degrees,
/// then advance `step_length`.
pub fn advance(state: &AuvState, steer: f64, gain: f64, step_length: f64) -> AuvState {
    let heading = state.heading + gain * (steer - 90.0);
    let mut next = AuvState::new(state.x, state.y, heading);
    let (dx, dy) = next.direction();
    next.x += step_length * dx;
    next.y += step_length * dy;
    next
}

/// One step inside the scenario's envelope.
pub fn step_auv(state: &AuvState, steer: f64, scenario: &Scenario) -> Result<AuvState, SimError> {
    if !(0.0..=180.0).contains(&steer) {
        return Err(SimError::InvalidSteer(steer));
    }
    let next = advance(state, steer, scenario.steering_gain, scenario.step_length);
    if scenario.world.inside(next.x, next.y) {
        Ok(next)
    } else {
        Err(SimError::EnvelopeExit { state: next })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Sequential,
    /// Processes the next image while the last steps of the current one run.
    Overlapped,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sequential" => Ok(Mode::Sequential),
            "overlapped" => Ok(Mode::Overlapped),
            _ => Err(format!("unknown mode {s:?}, expected sequential or overlapped")),
        }
    }
}

/// Steering set points for each band of the view from `pose`, bottom band first.
pub fn perceive(
    scenario: &Scenario,
    controller: &FuzzyController,
    pose: &AuvState,
    capture: u64,
) -> Result<Vec<f64>, SimError> {
    let img = render_view(&scenario.world, pose, &scenario.camera, capture);
    let features = extract_features(&img, scenario.threshold, scenario.min_area)
        .map_err(|source| SimError::Perception { capture, source })?;
    features
        .iter()
        .map(|fv| controller.infer(fv).map(|r| r.output))
        .collect::<Result<_, _>>()
        .map_err(|source| SimError::Inference { capture, source })
}

fn reached_far_end(scenario: &Scenario, state: &AuvState) -> bool {
    // another full step could carry the vehicle past the last waypoint
    scenario.world.far_end_y() - state.y < scenario.step_length * (1.0 - 1e-9)
}

/// Poses after each step, starting pose excluded.
pub fn simulate_path(
    scenario: &Scenario,
    controller: &FuzzyController,
    mode: Mode,
) -> Result<Vec<AuvState>, SimError> {
    scenario.validate()?;
    match mode {
        Mode::Sequential => simulate_sequential(scenario, controller),
        Mode::Overlapped => simulate_overlapped(scenario, controller),
    }
}

fn simulate_sequential(
    scenario: &Scenario,
    controller: &FuzzyController,
) -> Result<Vec<AuvState>, SimError> {
    let (path, failure) = simulate_partial(scenario, controller);
    match failure {
        Some(e) => Err(e),
        None => Ok(path),
    }
}

/// Sequential mission that keeps the poses reached before a failure.
pub fn simulate_partial(
    scenario: &Scenario,
    controller: &FuzzyController,
) -> (Vec<AuvState>, Option<SimError>) {
    let mut path = Vec::new();
    if let Err(e) = scenario.validate() {
        return (path, Some(e));
    }
    let mut state = scenario.start;
    let mut capture = 0u64;
    while !reached_far_end(scenario, &state) {
        let steers = match perceive(scenario, controller, &state, capture) {
            Ok(s) => s,
            Err(e) => return (path, Some(e)),
        };
        for &steer in &steers[..scenario.steps_per_image] {
            if reached_far_end(scenario, &state) {
                break;
            }
            if path.len() >= MAX_STEPS {
                return (path, Some(SimError::StepLimit(MAX_STEPS)));
            }
            match step_auv(&state, steer, scenario) {
                Ok(next) => state = next,
                Err(e) => return (path, Some(e)),
            }
            path.push(state);
        }
        capture += 1;
    }
    (path, None)
}

fn simulate_overlapped(
    scenario: &Scenario,
    controller: &FuzzyController,
) -> Result<Vec<AuvState>, SimError> {
    let mut state = scenario.start;
    let mut path = Vec::new();
    let mut capture = 0u64;
    let mut pending = if reached_far_end(scenario, &state) {
        None
    } else {
        Some(perceive(scenario, controller, &state, capture))
    };

    while let Some(result) = pending.take() {
        let steers = result?;
        let n = scenario.steps_per_image;
        // the next image is taken at the pose the remaining commands lead to
        let handoff = n.saturating_sub(2);

        thread::scope(|scope| -> Result<(), SimError> {
            let mut worker = None;
            for (k, &steer) in steers[..n].iter().enumerate() {
                if k == handoff {
                    let predicted = steers[k..n].iter().try_fold(state, |s, &st| {
                        (!reached_far_end(scenario, &s))
                            .then(|| advance(&s, st, scenario.steering_gain, scenario.step_length))
                    });
                    if let Some(pose) = predicted.filter(|p| !reached_far_end(scenario, p)) {
                        let next = capture + 1;
                        worker = Some(scope.spawn(move || perceive(scenario, controller, &pose, next)));
                    }
                }
                if reached_far_end(scenario, &state) {
                    break;
                }
                if path.len() >= MAX_STEPS {
                    return Err(SimError::StepLimit(MAX_STEPS));
                }
                state = step_auv(&state, steer, scenario)?;
                path.push(state);
            }
            pending = worker.map(|w| w.join().expect("perception worker panicked"));
            Ok(())
        })?;
        capture += 1;
    }
    Ok(path)
}

/// Outcome of a mission that may have failed part way.
#[derive(Debug)]
pub struct MissionReport {
    /// Steps flown before the end or the failure. Poses outside the
    /// pipeline's span are left out.
    pub record: PathRecord,
    pub failure: Option<SimError>,
}

/// Like [`run_mission`] but keeps the steps flown before a failure.
pub fn mission_report(scenario: &Scenario, controller: &FuzzyController) -> MissionReport {
    let (path, failure) = simulate_partial(scenario, controller);
    let span: Vec<AuvState> = path
        .into_iter()
        .take_while(|p| scenario.world.pipeline_x_at(p.y).is_some())
        .collect();
    let record = drift_metrics(&span, &scenario.world, scenario.tolerance).unwrap_or(PathRecord {
        points: Vec::new(),
        tolerance: scenario.tolerance,
    });
    MissionReport { record, failure }
}

/// Runs a mission and scores every step against the pipeline.
pub fn run_mission(
    scenario: &Scenario,
    controller: &FuzzyController,
    mode: Mode,
) -> Result<PathRecord, SimError> {
    let path = simulate_path(scenario, controller, mode)?;
    drift_metrics(&path, &scenario.world, scenario.tolerance)
}
