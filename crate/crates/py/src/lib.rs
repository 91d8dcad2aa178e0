//! Python bindings for the pipeline tracker.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use pipetrack_core::features::{self, FeatureVector};
use pipetrack_core::fis::{self, parse_controller};
use pipetrack_core::imgproc::{GrayImage, ThresholdBand};
use pipetrack_core::sim::{self, shift_input_centers, Mode, SimError};

create_exception!(pipetrack, MissionFailure, PyException);

fn sim_err(e: SimError) -> PyErr {
    if e.is_mission_failure() {
        MissionFailure::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn feature_vector(values: Vec<f64>) -> PyResult<FeatureVector> {
    let values: [f64; 6] = values
        .try_into()
        .map_err(|v: Vec<f64>| value_err(format!("expected 6 values, got {}", v.len())))?;
    Ok(FeatureVector::new(0, values))
}

/// Rule base plus membership parameters.
#[pyclass(name = "FuzzyController", from_py_object)]
#[derive(Clone)]
struct PyController {
    inner: fis::FuzzyController,
}

#[pymethods]
impl PyController {
    #[new]
    fn new() -> Self {
        Self {
            inner: fis::FuzzyController::default(),
        }
    }

    /// The bundled tuned controller.
    #[staticmethod]
    fn tuned() -> Self {
        Self {
            inner: fis::FuzzyController::tuned(),
        }
    }

    #[staticmethod]
    fn from_dsl(text: &str) -> PyResult<Self> {
        let inner = parse_controller(text).map_err(value_err)?;
        Ok(Self { inner })
    }

    fn to_dsl(&self) -> String {
        self.inner.to_dsl()
    }

    #[getter]
    fn rule_count(&self) -> usize {
        self.inner.rules.len()
    }

    /// Steering set point for the inputs `[x1, ..., x6]`.
    fn infer(&self, values: Vec<f64>) -> PyResult<f64> {
        let r = self.inner.infer(&feature_vector(values)?).map_err(value_err)?;
        Ok(r.output)
    }

    fn firing_strengths(&self, values: Vec<f64>) -> PyResult<Vec<f64>> {
        let r = self.inner.infer(&feature_vector(values)?).map_err(value_err)?;
        Ok(r.firing_strengths)
    }

    fn __repr__(&self) -> String {
        format!("FuzzyController({} rules)", self.inner.rules.len())
    }
}

#[pyclass(name = "Scenario", from_py_object)]
#[derive(Clone)]
struct PyScenario {
    inner: sim::Scenario,
}

#[pymethods]
impl PyScenario {
    #[new]
    fn new() -> Self {
        Self {
            inner: sim::Scenario::default(),
        }
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let inner = sim::Scenario::load(path).map_err(sim_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let inner = sim::Scenario::parse(text).map_err(sim_err)?;
        Ok(Self { inner })
    }

    /// Controller named by the scenario, or the built-in one.
    fn controller(&self) -> PyResult<PyController> {
        let inner = self.inner.load_controller().map_err(sim_err)?;
        Ok(PyController { inner })
    }

    fn mirrored(&self) -> Self {
        Self {
            inner: self.inner.mirrored(),
        }
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.world.seed
    }

    #[setter]
    fn set_seed(&mut self, seed: u64) {
        self.inner.world.seed = seed;
    }

    #[getter]
    fn tolerance(&self) -> f64 {
        self.inner.tolerance
    }

    #[setter]
    fn set_tolerance(&mut self, tolerance: f64) -> PyResult<()> {
        if tolerance.is_nan() || tolerance <= 0.0 {
            return Err(value_err(format!("tolerance {tolerance} must be positive")));
        }
        self.inner.tolerance = tolerance;
        Ok(())
    }

    #[getter]
    fn start(&self) -> (f64, f64, f64) {
        let s = self.inner.start;
        (s.x, s.y, s.heading)
    }

    #[getter]
    fn waypoints(&self) -> Vec<(f64, f64)> {
        self.inner.world.pipeline.clone()
    }

    fn __repr__(&self) -> String {
        let s = self.inner.start;
        format!(
            "Scenario(seed={}, start=({}, {}, {}), {} waypoints)",
            self.inner.world.seed,
            s.x,
            s.y,
            s.heading,
            self.inner.world.pipeline.len()
        )
    }
}

/// Per-step drift of one mission.
#[pyclass(name = "PathRecord")]
struct PyPathRecord {
    inner: sim::PathRecord,
}

#[pymethods]
impl PyPathRecord {
    /// `(step, actual_x, simulated_x, drift, pct_drift)` per step.
    #[getter]
    fn points(&self) -> Vec<(usize, f64, f64, f64, f64)> {
        self.inner
            .points
            .iter()
            .map(|p| (p.step, p.actual_x, p.simulated_x, p.drift, p.pct_drift))
            .collect()
    }

    #[getter]
    fn max_abs_drift(&self) -> f64 {
        self.inner.max_abs_drift()
    }

    fn within_tolerance(&self) -> bool {
        self.inner.within_tolerance()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn __len__(&self) -> usize {
        self.inner.points.len()
    }
}

/// Flies a mission. Raises `MissionFailure` if the pipe is lost or the
/// vehicle leaves the working area.
#[pyfunction]
#[pyo3(signature = (scenario, controller=None, mode="sequential"))]
fn run_mission(
    py: Python<'_>,
    scenario: &PyScenario,
    controller: Option<&PyController>,
    mode: &str,
) -> PyResult<PyPathRecord> {
    let mode: Mode = mode.parse().map_err(value_err)?;
    let controller = match controller {
        Some(c) => c.inner.clone(),
        None => scenario.inner.load_controller().map_err(sim_err)?,
    };
    let s = scenario.inner.clone();
    let inner = py
        .detach(move || sim::run_mission(&s, &controller, mode))
        .map_err(sim_err)?;
    Ok(PyPathRecord { inner })
}

/// Six features per band, bottom band first, from 8-bit gray pixels.
#[pyfunction]
#[pyo3(signature = (pixels, width, height, t1=180, t2=255, min_area=25))]
fn extract_features(
    pixels: Vec<u8>,
    width: usize,
    height: usize,
    t1: u8,
    t2: u8,
    min_area: usize,
) -> PyResult<Vec<Vec<f64>>> {
    let img = GrayImage::new(width, height, pixels).map_err(value_err)?;
    let band = ThresholdBand::new(t1, t2).map_err(value_err)?;
    let fvs = features::extract_features(&img, band, min_area)
        .map_err(|e| MissionFailure::new_err(e.to_string()))?;
    Ok(fvs.iter().map(|f| f.values.to_vec()).collect())
}

/// Camera view at the scenario's start pose: `(pixels, width, height)`.
#[pyfunction]
#[pyo3(signature = (scenario, capture=0))]
fn render_view<'py>(
    py: Python<'py>,
    scenario: &PyScenario,
    capture: u64,
) -> (Bound<'py, PyBytes>, usize, usize) {
    let s = &scenario.inner;
    let img = sim::render_view(&s.world, &s.start, &s.camera, capture);
    (PyBytes::new(py, img.pixels()), img.width(), img.height())
}

#[pyfunction]
#[pyo3(signature = (drift, tolerance=8.0))]
fn percentage_of_drift(drift: f64, tolerance: f64) -> f64 {
    sim::percentage_of_drift(drift, tolerance)
}

/// Tunes the controller's membership parameters. Returns the tuned
/// controller and the objective `(max |drift|, mean |drift|)` before and after.
#[pyfunction]
#[pyo3(signature = (scenarios, controller=None, budget=500, detune=None))]
#[allow(clippy::type_complexity)]
fn tune(
    py: Python<'_>,
    scenarios: Vec<PyScenario>,
    controller: Option<&PyController>,
    budget: usize,
    detune: Option<f64>,
) -> PyResult<(PyController, (f64, f64), (f64, f64))> {
    if budget == 0 {
        return Err(value_err("budget must be at least 1"));
    }
    let init = controller.map_or_else(fis::FuzzyController::default, |c| c.inner.clone());
    let terms = match detune {
        Some(d) => shift_input_centers(&init.terms, d),
        None => init.terms.clone(),
    };
    let suite: Vec<sim::Scenario> = scenarios.into_iter().map(|s| s.inner).collect();
    let rules = init.rules.clone();
    let r = py.detach(move || sim::tune(&suite, &rules, &terms, budget));
    Ok((
        PyController {
            inner: fis::FuzzyController::new(init.rules, r.terms),
        },
        (r.initial.max_abs_drift, r.initial.mean_abs_drift),
        (r.best.max_abs_drift, r.best.mean_abs_drift),
    ))
}

#[pymodule]
fn pipetrack(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyController>()?;
    m.add_class::<PyScenario>()?;
    m.add_class::<PyPathRecord>()?;
    m.add("MissionFailure", m.py().get_type::<MissionFailure>())?;
    m.add_function(wrap_pyfunction!(run_mission, m)?)?;
    m.add_function(wrap_pyfunction!(extract_features, m)?)?;
    m.add_function(wrap_pyfunction!(render_view, m)?)?;
    m.add_function(wrap_pyfunction!(percentage_of_drift, m)?)?;
    m.add_function(wrap_pyfunction!(tune, m)?)?;
    Ok(())
}
