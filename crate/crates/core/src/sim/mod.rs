//! Deterministic mission simulator.
//!
//! A forward-looking camera renders the pipeline on a noisy seabed, the
//! vision chain and fuzzy controller turn each image into five steering set
//! points (one per band, nearest first), and the vehicle advances one fixed
//! step per set point. Drift is scored against the pipeline at each step.

mod camera;
mod metrics;
mod mission;
mod scenario;
pub mod tune;
mod world;

pub use camera::{render_view, CameraModel};
pub use metrics::{
    drift_metrics, percentage_of_drift, round_half_up_1dp, PathPoint, PathRecord, CSV_HEADER,
    DEFAULT_TOLERANCE,
};
pub use mission::{
    advance, mission_report, perceive, run_mission, simulate_partial, simulate_path, step_auv, AuvState, MissionReport, Mode, MAX_STEPS,
};
pub use scenario::{Scenario, SCENARIO_KEYS};
pub use tune::{shift_input_centers, tune, Objective, TuneResult};
pub use world::World;

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::features::FeatureError;
use crate::fis::FisError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid world: {0}")]
    InvalidWorld(String),
    #[error("invalid camera: {0}")]
    InvalidCamera(String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("line {line}: {message}")]
    Scenario { line: usize, message: String },
    #[error("{}:{line}: {message}", path.display())]
    ScenarioFile {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },
    #[error("{}: {source}", path.display())]
    Rules { path: PathBuf, source: FisError },
    #[error("steering set point {0} lies outside [0, 180]")]
    InvalidSteer(f64),
    #[error("envelope-exit: vehicle left the working area at ({:.1}, {:.1})", state.x, state.y)]
    EnvelopeExit { state: AuvState },
    #[error("image {capture}: {source}")]
    Perception { capture: u64, source: FeatureError },
    #[error("image {capture}: {source}")]
    Inference { capture: u64, source: FisError },
    #[error("step limit of {0} reached before the pipeline end")]
    StepLimit(usize),
    #[error("step {step}: y = {y:.2} lies outside the pipeline's y-span")]
    OutOfRange { step: usize, y: f64 },
    #[error("tolerance {0} must be positive")]
    InvalidTolerance(f64),
    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },
}

impl SimError {
    /// Attaches a file name to a line-numbered scenario error.
    pub fn in_file(self, path: &Path) -> Self {
        match self {
            SimError::Scenario { line, message } => SimError::ScenarioFile {
                path: path.to_path_buf(),
                line,
                message,
            },
            other => other,
        }
    }

    /// Mission failures, as opposed to configuration errors.
    pub fn is_mission_failure(&self) -> bool {
        matches!(
            self,
            SimError::EnvelopeExit { .. }
                | SimError::Perception { .. }
                | SimError::Inference { .. }
                | SimError::StepLimit(_)
                | SimError::OutOfRange { .. }
        )
    }
}
