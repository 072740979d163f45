//! Python bindings: set construction, staircase evaluation, the worked
//! calculus examples and the diffusion model.

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cantor_calculus::cantor_set::{self, ClosedInterval, ConstructionMode};
use cantor_calculus::diffusion::{self, DiffusionModel, DiffusionParams, DiffusionRegime, WalkConfig};
use cantor_calculus::fractal_calculus::{worked, GridFunction, IntegrationLadder};
use cantor_calculus::mass_staircase::{self, Normalization, StaircaseEvaluator, DEFAULT_TOLERANCE};
use cantor_calculus::{CantorParams, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyOSError::new_err(e.to_string()),
        e if e.is_numerical() => PyRuntimeError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn mode(name: &str) -> PyResult<ConstructionMode> {
    match name {
        "proportional" => Ok(ConstructionMode::Proportional),
        "absolute" | "absolute-removal" => Ok(ConstructionMode::AbsoluteRemoval),
        _ => Err(PyValueError::new_err(format!("unknown construction mode {name:?}"))),
    }
}

fn convention(name: &str) -> PyResult<Normalization> {
    match name {
        "inverse-gamma" => Ok(Normalization::InverseGamma),
        "gamma-scaled" => Ok(Normalization::GammaScaled),
        "unit" => Ok(Normalization::Unit),
        _ => Err(PyValueError::new_err(format!("unknown convention {name:?}"))),
    }
}

fn regime(name: &str) -> PyResult<DiffusionRegime> {
    match name {
        "super" => Ok(DiffusionRegime::Super),
        "normal" => Ok(DiffusionRegime::Normal),
        "sub" => Ok(DiffusionRegime::Sub),
        _ => Err(PyValueError::new_err(format!("unknown regime {name:?}"))),
    }
}

#[pyfunction]
fn hausdorff_dimension(xi: f64) -> PyResult<f64> {
    cantor_set::hausdorff_dimension(xi).map_err(to_py)
}

#[pyfunction]
fn xi_for_dimension(dim: f64) -> PyResult<f64> {
    cantor_set::xi_for_dimension(dim).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (xi, mode_name = "proportional"))]
fn varsigma_dimension(xi: f64, mode_name: &str) -> PyResult<f64> {
    let params = CantorParams::new(xi, mode(mode_name)?, 0).map_err(to_py)?;
    mass_staircase::varsigma_dimension(params, 0.0, 1.0).map_err(to_py)
}

#[pyfunction]
fn classify(zeta: f64, beta: f64) -> PyResult<&'static str> {
    diffusion::classify(zeta, beta).map(|r| r.name()).map_err(to_py)
}

#[pyclass(name = "PreFractal", frozen)]
struct PyPreFractal {
    inner: cantor_set::PreFractal,
}

#[pymethods]
impl PyPreFractal {
    #[new]
    #[pyo3(signature = (xi, depth, mode_name = "proportional"))]
    fn new(xi: f64, depth: u32, mode_name: &str) -> PyResult<Self> {
        let params = CantorParams::new(xi, mode(mode_name)?, depth).map_err(to_py)?;
        let inner = cantor_set::build_prefractal(params).map_err(to_py)?;
        Ok(Self { inner })
    }

    fn intervals(&self) -> Vec<(f64, f64)> {
        self.inner.intervals().iter().map(|iv| (iv.left, iv.right)).collect()
    }

    fn endpoints(&self) -> Vec<f64> {
        self.inner.endpoints()
    }

    fn contains(&self, x: f64) -> bool {
        self.inner.contains(x)
    }

    fn flag(&self, left: f64, right: f64) -> PyResult<u8> {
        let j = ClosedInterval::new(left, right).map_err(to_py)?;
        Ok(self.inner.flag(&j))
    }

    fn lebesgue_measure(&self) -> f64 {
        self.inner.lebesgue_measure()
    }

    /// Lower and upper sums of endpoint samples over `[v, w]`.
    fn darboux(&self, values: Vec<f64>, v: f64, w: f64, staircase: &PyStaircase) -> PyResult<(f64, f64)> {
        let grid = GridFunction::from_values(self.inner.clone(), values).map_err(to_py)?;
        let sums = grid.darboux(v, w, &staircase.inner).map_err(to_py)?;
        Ok((sums.lower, sums.upper))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        let p = self.inner.params();
        format!("PreFractal(xi={}, depth={}, mode={:?})", p.xi(), p.depth(), p.mode())
    }
}

#[pyclass(name = "Staircase", frozen)]
struct PyStaircase {
    inner: StaircaseEvaluator,
}

#[pymethods]
impl PyStaircase {
    #[new]
    #[pyo3(signature = (xi, zeta = None, convention_name = "inverse-gamma", tolerance = DEFAULT_TOLERANCE, mode_name = "proportional"))]
    fn new(xi: f64, zeta: Option<f64>, convention_name: &str, tolerance: f64, mode_name: &str) -> PyResult<Self> {
        let params = CantorParams::new(xi, mode(mode_name)?, 0).map_err(to_py)?;
        let inner = StaircaseEvaluator::with_options(params, zeta, convention(convention_name)?, tolerance)
            .map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn zeta(&self) -> f64 {
        self.inner.zeta()
    }

    #[getter]
    fn total_mass(&self) -> f64 {
        self.inner.total_mass()
    }

    fn __call__(&self, x: f64) -> f64 {
        self.inner.eval(x)
    }

    fn eval_many(&self, xs: Vec<f64>) -> Vec<f64> {
        xs.into_iter().map(|x| self.inner.eval(x)).collect()
    }

    fn eval_extended(&self, x: f64) -> f64 {
        self.inner.eval_extended(x)
    }

    fn inverse(&self, u: f64) -> PyResult<f64> {
        self.inner.inverse(u).map_err(to_py)
    }
}

/// Integral, sampled integral and round-trip residual of a worked example.
#[pyfunction]
#[pyo3(signature = (name, convention_name = "inverse-gamma", depth = 8))]
fn example<'py>(py: Python<'py>, name: &str, convention_name: &str, depth: u32) -> PyResult<Bound<'py, PyDict>> {
    let norm = convention(convention_name)?;
    let (calc, f) = match name {
        "ex1" => worked::sine_example(norm, depth),
        "ex2" => worked::square_example(norm, depth),
        _ => return Err(PyValueError::new_err(format!("unknown example {name:?}"))),
    }
    .map_err(to_py)?;
    let grid = calc
        .integrate_sampled(|x| calc.value(&f, x), 0.0, 1.0, IntegrationLadder::default())
        .map_err(to_py)?;
    let out = PyDict::new(py);
    out.set_item("integral", calc.integral(&f, 0.0, 1.0).map_err(to_py)?)?;
    out.set_item("grid_lower", grid.lower)?;
    out.set_item("grid_upper", grid.upper)?;
    out.set_item("ftc_residual", calc.ftc_residual(&f, 0.0, 1.0).map_err(to_py)?)?;
    out.set_item("total_mass", calc.staircase().total_mass())?;
    Ok(out)
}

#[pyclass(name = "Diffusion", frozen)]
struct PyDiffusion {
    inner: DiffusionModel,
}

#[pymethods]
impl PyDiffusion {
    #[new]
    #[pyo3(signature = (regime_name, zeta, beta = 1.0, coefficient = 1.0))]
    fn new(regime_name: &str, zeta: f64, beta: f64, coefficient: f64) -> PyResult<Self> {
        let params = DiffusionParams::new(regime(regime_name)?, zeta, beta, coefficient).map_err(to_py)?;
        Ok(Self {
            inner: DiffusionModel::new(params).map_err(to_py)?,
        })
    }

    #[getter]
    fn regime(&self) -> &'static str {
        self.inner.params().classify().name()
    }

    #[getter]
    fn bound_exponent(&self) -> f64 {
        self.inner.params().bound_exponent()
    }

    fn propagator(&self, x: f64, t: f64) -> PyResult<f64> {
        self.inner.propagator(x, t).map_err(to_py)
    }

    fn normalization(&self, t: f64) -> PyResult<f64> {
        self.inner.normalization(t).map_err(to_py)
    }

    fn msd<'py>(&self, py: Python<'py>, t: f64) -> PyResult<Bound<'py, PyDict>> {
        let r = self.inner.msd(t).map_err(to_py)?;
        let out = PyDict::new(py);
        out.set_item("msd_s", r.msd_s)?;
        out.set_item("msd_x", r.msd_x)?;
        out.set_item("stated_msd_s", r.stated_msd_s)?;
        out.set_item("msd_x_bound", r.msd_x_bound)?;
        out.set_item(
            "discrepancies",
            r.discrepancies.iter().map(|d| d.code.clone()).collect::<Vec<_>>(),
        )?;
        Ok(out)
    }

    #[pyo3(signature = (walkers = 10_000, seed = 0))]
    fn simulate_walk<'py>(&self, py: Python<'py>, walkers: usize, seed: u64) -> PyResult<Bound<'py, PyDict>> {
        let config = WalkConfig {
            walkers,
            seed,
            ..WalkConfig::default()
        };
        let s = py
            .detach(|| self.inner.simulate_walk(&config))
            .map_err(to_py)?;
        let out = PyDict::new(py);
        out.set_item("times", s.times)?;
        out.set_item("msd_x", s.msd_x)?;
        out.set_item("msd_s", s.msd_s)?;
        out.set_item("fitted_exponent", s.fitted_exponent)?;
        out.set_item("half_width", s.half_width)?;
        out.set_item("expected_exponent", s.expected_exponent)?;
        Ok(out)
    }
}

#[pymodule]
fn pycantor(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(hausdorff_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(xi_for_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(varsigma_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(example, m)?)?;
    m.add_class::<PyPreFractal>()?;
    m.add_class::<PyStaircase>()?;
    m.add_class::<PyDiffusion>()?;
    Ok(())
}
