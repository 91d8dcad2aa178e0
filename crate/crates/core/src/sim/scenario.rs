//! Mission scenario and its `key = value` file format.

use std::path::{Path, PathBuf};

use super::{AuvState, CameraModel, SimError, World, DEFAULT_TOLERANCE};
use crate::fis::{parse_controller, FuzzyController};
use crate::imgproc::ThresholdBand;

/// Everything a mission needs apart from the controller.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub world: World,
    pub camera: CameraModel,
    pub threshold: ThresholdBand,
    pub min_area: usize,
    /// Rule file; `None` selects the built-in controller.
    pub rulebase: Option<PathBuf>,
    /// Degrees of heading change per unit of set point away from 90.
    pub steering_gain: f64,
    pub step_length: f64,
    pub steps_per_image: usize,
    pub start: AuvState,
    pub tolerance: f64,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            world: World::default(),
            camera: CameraModel::default(),
            threshold: ThresholdBand::default(),
            min_area: 25,
            rulebase: None,
            steering_gain: 0.5,
            step_length: 22.5,
            steps_per_image: 5,
            // along the lead-in toward the first station
            start: AuvState::new(103.0, 20.0, 63.7),
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

/// Keys accepted in scenario files.
pub const SCENARIO_KEYS: &[&str] = &[
    "envelope.x",
    "envelope.y",
    "pipe.waypoints",
    "pipe.width",
    "camera.height",
    "camera.tilt",
    "camera.fov",
    "camera.image.width",
    "camera.image.height",
    "camera.pipe.intensity",
    "camera.seabed.intensity",
    "camera.noise",
    "camera.speckle",
    "threshold.t1",
    "threshold.t2",
    "minArea",
    "step.length",
    "steps.per.image",
    "steering.gain",
    "seed",
    "start.x",
    "start.y",
    "start.heading",
    "rulebase",
    "tolerance",
];

fn num<T: std::str::FromStr>(value: &str, line: usize, key: &str) -> Result<T, SimError> {
    value.parse::<T>().map_err(|_| SimError::Scenario {
        line,
        message: format!("bad value {value:?} for {key}"),
    })
}

fn finite(value: &str, line: usize, key: &str) -> Result<f64, SimError> {
    let v: f64 = num(value, line, key)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SimError::Scenario {
            line,
            message: format!("{key} must be finite"),
        })
    }
}

fn parse_waypoints(value: &str, line: usize) -> Result<Vec<(f64, f64)>, SimError> {
    value
        .split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|pair| {
            let (x, y) = pair.split_once(':').ok_or_else(|| SimError::Scenario {
                line,
                message: format!("waypoint {pair:?} is not x:y"),
            })?;
            Ok((
                finite(x.trim(), line, "pipe.waypoints")?,
                finite(y.trim(), line, "pipe.waypoints")?,
            ))
        })
        .collect()
}

impl Scenario {
    /// Parses scenario text. Unset keys keep their defaults. A relative
    /// `rulebase` path is kept as written; see [`Scenario::load`].
    pub fn parse(text: &str) -> Result<Self, SimError> {
        let mut s = Scenario::default();
        let (mut t1, mut t2) = (s.threshold.t1(), s.threshold.t2());
        let mut threshold_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| SimError::Scenario {
                line,
                message: format!("expected key = value, found {content:?}"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "envelope.x" => s.world.envelope.0 = finite(value, line, key)?,
                "envelope.y" => s.world.envelope.1 = finite(value, line, key)?,
                "pipe.waypoints" => s.world.pipeline = parse_waypoints(value, line)?,
                "pipe.width" => s.world.pipe_width = finite(value, line, key)?,
                "camera.height" => s.camera.height = finite(value, line, key)?,
                "camera.tilt" => s.camera.tilt_down = finite(value, line, key)?,
                "camera.fov" => s.camera.horizontal_fov = finite(value, line, key)?,
                "camera.image.width" => s.camera.image_width = num(value, line, key)?,
                "camera.image.height" => s.camera.image_height = num(value, line, key)?,
                "camera.pipe.intensity" => s.camera.pipe_intensity = num(value, line, key)?,
                "camera.seabed.intensity" => s.camera.seabed_intensity = num(value, line, key)?,
                "camera.noise" => s.camera.noise_amplitude = num(value, line, key)?,
                "camera.speckle" => s.camera.speckle_density = finite(value, line, key)?,
                "threshold.t1" => {
                    t1 = num(value, line, key)?;
                    threshold_line = line;
                }
                "threshold.t2" => {
                    t2 = num(value, line, key)?;
                    threshold_line = line;
                }
                "minArea" => s.min_area = num(value, line, key)?,
                "step.length" => s.step_length = finite(value, line, key)?,
                "steps.per.image" => s.steps_per_image = num(value, line, key)?,
                "steering.gain" => s.steering_gain = finite(value, line, key)?,
                "seed" => s.world.seed = num(value, line, key)?,
                "start.x" => s.start.x = finite(value, line, key)?,
                "start.y" => s.start.y = finite(value, line, key)?,
                "start.heading" => s.start.heading = finite(value, line, key)?,
                "rulebase" => s.rulebase = Some(PathBuf::from(value)),
                "tolerance" => s.tolerance = finite(value, line, key)?,
                _ => {
                    return Err(SimError::Scenario {
                        line,
                        message: format!("unknown key {key:?}"),
                    })
                }
            }
        }
        s.threshold = ThresholdBand::new(t1, t2).map_err(|e| SimError::Scenario {
            line: threshold_line,
            message: e.to_string(),
        })?;
        s.validate().map_err(|e| SimError::Scenario {
            line: 0,
            message: e.to_string(),
        })?;
        Ok(s)
    }

    /// Reads a scenario file, resolving `rulebase` against its directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, SimError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| SimError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let mut s = Self::parse(&text).map_err(|e| e.in_file(path))?;
        if let Some(rb) = &s.rulebase {
            if rb.is_relative() {
                let base = path.parent().unwrap_or_else(|| Path::new(""));
                s.rulebase = Some(base.join(rb));
            }
        }
        Ok(s)
    }

    /// Controller named by `rulebase`, or the built-in one.
    pub fn load_controller(&self) -> Result<FuzzyController, SimError> {
        match &self.rulebase {
            None => Ok(FuzzyController::default()),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| SimError::Io {
                    path: path.clone(),
                    message: e.to_string(),
                })?;
                parse_controller(&text).map_err(|e| SimError::Rules {
                    path: path.clone(),
                    source: e,
                })
            }
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        self.world.validate()?;
        self.camera.validate()?;
        let bad = |m: String| Err(SimError::InvalidScenario(m));
        if !(self.step_length > 0.0) {
            return bad(format!("step length {} must be positive", self.step_length));
        }
        if !(1..=crate::features::BAND_COUNT).contains(&self.steps_per_image) {
            return bad(format!(
                "steps per image {} must lie in 1..=5",
                self.steps_per_image
            ));
        }
        if !(self.tolerance > 0.0) {
            return bad(format!("tolerance {} must be positive", self.tolerance));
        }
        if !self.world.inside(self.start.x, self.start.y) {
            return bad(format!(
                "start ({}, {}) lies outside the envelope",
                self.start.x, self.start.y
            ));
        }
        Ok(())
    }

    /// Mirror image about the envelope's vertical midline.
    pub fn mirrored(&self) -> Self {
        let mut s = self.clone();
        s.world = self.world.mirrored();
        s.start = AuvState::new(
            self.world.envelope.0 - self.start.x,
            self.start.y,
            180.0 - self.start.heading,
        );
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        assert_eq!(Scenario::parse("# nothing\n").unwrap(), Scenario::default());
    }

    #[test]
    fn parses_all_keys() {
        let text = "\
envelope.x = 140
envelope.y = 190
pipe.waypoints = 70:10; 70:150
pipe.width = 8
camera.height = 35
camera.tilt = 40
camera.fov = 55
camera.image.width = 160
camera.image.height = 120
camera.pipe.intensity = 210
camera.seabed.intensity = 60
camera.noise = 10
camera.speckle = 0.001
threshold.t1 = 150
threshold.t2 = 250
minArea = 12
step.length = 20
steps.per.image = 4
steering.gain = 0.3
seed = 99
start.x = 70
start.y = 10
start.heading = 85
rulebase = tuned.rules
tolerance = 6.5
";
        let s = Scenario::parse(text).unwrap();
        assert_eq!(s.world.envelope, (140.0, 190.0));
        assert_eq!(s.world.pipeline, vec![(70.0, 10.0), (70.0, 150.0)]);
        assert_eq!(s.camera.image_width, 160);
        assert_eq!(s.camera.tilt_down, 40.0);
        assert_eq!((s.threshold.t1(), s.threshold.t2()), (150, 250));
        assert_eq!(s.min_area, 12);
        assert_eq!(s.steps_per_image, 4);
        assert_eq!(s.world.seed, 99);
        assert_eq!(s.start, AuvState::new(70.0, 10.0, 85.0));
        assert_eq!(s.rulebase.as_deref(), Some(Path::new("tuned.rules")));
        assert_eq!(s.tolerance, 6.5);
    }

    #[test]
    fn errors_name_the_line() {
        assert!(matches!(
            Scenario::parse("seed = 1\nbogus = 2"),
            Err(SimError::Scenario { line: 2, .. })
        ));
        assert!(matches!(
            Scenario::parse("\n\nstep.length = fast"),
            Err(SimError::Scenario { line: 3, .. })
        ));
        assert!(matches!(
            Scenario::parse("threshold.t1 = 200\nthreshold.t2 = 100"),
            Err(SimError::Scenario { line: 2, .. })
        ));
        assert!(matches!(
            Scenario::parse("pipe.waypoints = 1;2"),
            Err(SimError::Scenario { line: 1, .. })
        ));
        assert!(Scenario::parse("steps.per.image = 0").is_err());
        assert!(Scenario::parse("steps.per.image = 6").is_err());
        assert!(Scenario::parse("no equals sign").is_err());
    }

    #[test]
    fn empty_waypoints_mean_no_pipe() {
        let s = Scenario::parse("pipe.waypoints =").unwrap();
        assert!(s.world.pipeline.is_empty());
    }

    #[test]
    fn mirror_is_an_involution() {
        let s = Scenario::default();
        let m = s.mirrored().mirrored();
        assert_eq!(m.start, s.start);
        for (a, b) in m.world.pipeline.iter().zip(&s.world.pipeline) {
            assert!((a.0 - b.0).abs() < 1e-9 && a.1 == b.1);
        }
    }
}
