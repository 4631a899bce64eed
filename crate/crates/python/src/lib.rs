//! Python bindings for `arl-core`, importable as `pyarl`.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use arl_core::arl;
use arl_core::crb;
use arl_core::experiments::{figure_preset, run_sweep, write_csv};
use arl_core::geometry;
use arl_core::signals;
use arl_core::smith_solver::{self, InitialGuess, SolverConfig};
use arl_core::Error;

create_exception!(pyarl, ArlError, PyValueError, "Base class of all pyarl errors.");
create_exception!(pyarl, SingularInformationError, ArlError);
create_exception!(pyarl, NoClosedFormError, ArlError);
create_exception!(pyarl, ClosedFormDomainError, ArlError);
create_exception!(pyarl, NoBracketError, ArlError);

fn to_py(err: Error) -> PyErr {
    let msg = err.to_string();
    match err {
        Error::SingularInformation { .. } => SingularInformationError::new_err(msg),
        Error::NoClosedForm { .. } => NoClosedFormError::new_err(msg),
        Error::DomainError { .. } => ClosedFormDomainError::new_err(msg),
        Error::NoBracket { .. } => NoBracketError::new_err(msg),
        _ => ArlError::new_err(msg),
    }
}

fn solver_config(abs_tol: f64, initial_guess: Option<f64>) -> SolverConfig {
    SolverConfig {
        abs_tol,
        initial_guess: initial_guess.map_or(InitialGuess::ClosedFormSeed, InitialGuess::Fixed),
        ..Default::default()
    }
}

/// Sensor positions in wavelengths, re-referenced so the first sensor is at 0.
#[pyclass(name = "ArrayGeometry", module = "pyarl", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyArrayGeometry {
    inner: geometry::ArrayGeometry,
}

#[pymethods]
impl PyArrayGeometry {
    #[new]
    fn new(positions: Vec<f64>) -> PyResult<Self> {
        geometry::ArrayGeometry::from_positions(&positions).map(|inner| Self { inner }).map_err(to_py)
    }

    #[staticmethod]
    fn ula(m: usize, d: f64) -> PyResult<Self> {
        geometry::ArrayGeometry::ula(m, d).map(|inner| Self { inner }).map_err(to_py)
    }

    /// `x` marks an occupied slot, `.` an empty one.
    #[staticmethod]
    fn from_pattern(pattern: &str, d: f64) -> PyResult<Self> {
        geometry::ArrayGeometry::from_pattern(pattern, d).map(|inner| Self { inner }).map_err(to_py)
    }

    /// Parses `ula:M=6,d=0.5` or `pattern:x....xxx,d=0.5`.
    #[staticmethod]
    fn parse(spec: &str) -> PyResult<Self> {
        let spec: geometry::GeometrySpec = spec.parse().map_err(to_py)?;
        spec.build().map(|inner| Self { inner }).map_err(to_py)
    }

    #[getter]
    fn positions(&self) -> Vec<f64> {
        self.inner.positions().to_vec()
    }

    #[getter]
    fn sensor_count(&self) -> usize {
        self.inner.sensor_count()
    }

    #[getter]
    fn aperture(&self) -> f64 {
        self.inner.aperture()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta()
    }

    fn steering_vector(&self, nu: f64) -> Vec<Complex64> {
        self.inner.steering_vector(nu)
    }

    fn __len__(&self) -> usize {
        self.inner.sensor_count()
    }

    fn __repr__(&self) -> String {
        format!("ArrayGeometry({:?})", self.inner.positions())
    }
}

/// Two complex source waveforms of equal length.
#[pyclass(name = "SourcePair", module = "pyarl", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PySourcePair {
    inner: signals::SourcePair,
}

#[pymethods]
impl PySourcePair {
    #[new]
    fn new(s1: Vec<Complex64>, s2: Vec<Complex64>) -> PyResult<Self> {
        signals::SourcePair::new(s1, s2).map(|inner| Self { inner }).map_err(to_py)
    }

    #[getter]
    fn s1(&self) -> Vec<Complex64> {
        self.inner.s1().to_vec()
    }

    #[getter]
    fn s2(&self) -> Vec<Complex64> {
        self.inner.s2().to_vec()
    }

    #[getter]
    fn snapshots(&self) -> usize {
        self.inner.snapshots()
    }

    #[getter]
    fn correlation(&self) -> Complex64 {
        self.inner.correlation()
    }

    /// (ε₁, ε₂) as stored for the pair.
    #[getter]
    fn strengths(&self) -> (f64, f64) {
        let stats = self.inner.stats();
        (stats.eps1, stats.eps2)
    }

    fn __repr__(&self) -> String {
        let stats = self.inner.stats();
        format!(
            "SourcePair(snapshots={}, eps1={}, eps2={}, rho={})",
            stats.snapshots, stats.eps1, stats.eps2, stats.rho
        )
    }
}

#[pyfunction]
fn make_pair(n: usize, eps1: f64, eps2: f64, rho: Complex64) -> PyResult<PySourcePair> {
    signals::make_pair(n, eps1, eps2, rho).map(|inner| PySourcePair { inner }).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, eps1, eps2, rho, seed=0))]
fn make_pair_rotated(n: usize, eps1: f64, eps2: f64, rho: Complex64, seed: u64) -> PyResult<PySourcePair> {
    signals::make_pair_rotated(n, eps1, eps2, rho, seed).map(|inner| PySourcePair { inner }).map_err(to_py)
}

/// Array, source pair and white-noise power σ².
#[pyclass(name = "Scenario", module = "pyarl", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyScenario {
    inner: signals::Scenario,
}

#[pymethods]
impl PyScenario {
    #[new]
    fn new(
        geometry: PyRef<'_, PyArrayGeometry>,
        sources: PyRef<'_, PySourcePair>,
        sigma2: f64,
    ) -> PyResult<Self> {
        signals::Scenario::new(geometry.inner.clone(), sources.inner.clone(), sigma2)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    #[getter]
    fn geometry(&self) -> PyArrayGeometry {
        PyArrayGeometry { inner: self.inner.geometry().clone() }
    }

    #[getter]
    fn sources(&self) -> PySourcePair {
        PySourcePair { inner: self.inner.sources().clone() }
    }

    #[getter]
    fn sigma2(&self) -> f64 {
        self.inner.sigma2()
    }

    #[getter]
    fn snapshots(&self) -> usize {
        self.inner.snapshots()
    }

    #[getter]
    fn snr1(&self) -> f64 {
        self.inner.snr1()
    }

    #[getter]
    fn snr2(&self) -> f64 {
        self.inner.snr2()
    }

    #[getter]
    fn rho(&self) -> Complex64 {
        self.inner.rho()
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(sensors={}, snapshots={}, snr1={}, snr2={}, rho={})",
            self.inner.geometry().sensor_count(),
            self.inner.snapshots(),
            self.inner.snr1(),
            self.inner.snr2(),
            self.inner.rho()
        )
    }
}

#[pyclass(name = "ArlResult", module = "pyarl", frozen, skip_from_py_object, get_all)]
#[derive(Clone)]
pub struct PyArlResult {
    delta: f64,
    case: String,
    approx_error_hint: Option<f64>,
}

#[pymethods]
impl PyArlResult {
    fn __repr__(&self) -> String {
        format!("ArlResult(delta={:e}, case='{}')", self.delta, self.case)
    }
}

#[pyclass(name = "CrbReport", module = "pyarl", frozen, skip_from_py_object, get_all)]
#[derive(Clone)]
pub struct PyCrbReport {
    crb_nu1: f64,
    crb_nu2: f64,
    crb_cross: f64,
    crb_sigma2: f64,
    psi: f64,
    delta: f64,
}

#[pymethods]
impl PyCrbReport {
    /// CRB(Δ) = CRB(ν₁) + CRB(ν₂) − 2 CRB(ν₁, ν₂).
    fn spacing(&self) -> f64 {
        self.crb_nu1 + self.crb_nu2 - 2.0 * self.crb_cross
    }

    fn __repr__(&self) -> String {
        format!(
            "CrbReport(crb_nu1={:e}, crb_nu2={:e}, crb_cross={:e}, delta={:e})",
            self.crb_nu1, self.crb_nu2, self.crb_cross, self.delta
        )
    }
}

#[pyfunction]
fn closed_form_arl(sc: PyRef<'_, PyScenario>) -> PyResult<PyArlResult> {
    let r = arl::closed_form_arl(&sc.inner).map_err(to_py)?;
    Ok(PyArlResult { delta: r.delta, case: r.case.tag().to_string(), approx_error_hint: r.approx_error_hint })
}

/// Smallest positive root of δ² = CRB(δ). `initial_guess` overrides the
/// closed-form seed of the bracket.
#[pyfunction]
#[pyo3(signature = (sc, abs_tol=1e-12, initial_guess=None))]
fn numeric_arl(sc: PyRef<'_, PyScenario>, abs_tol: f64, initial_guess: Option<f64>) -> PyResult<f64> {
    smith_solver::numeric_arl(&sc.inner, &solver_config(abs_tol, initial_guess)).map_err(to_py)
}

#[pyfunction]
fn smith_residual(sc: PyRef<'_, PyScenario>, delta: f64) -> PyResult<f64> {
    smith_solver::smith_residual(&sc.inner, delta).map_err(to_py)
}

#[pyfunction]
fn weak_signal_limit(sc: PyRef<'_, PyScenario>) -> PyResult<f64> {
    arl::weak_signal_limit(&sc.inner).map_err(to_py)
}

#[pyfunction]
fn crb_entries(sc: PyRef<'_, PyScenario>, delta: f64) -> PyResult<PyCrbReport> {
    let r = crb::crb_entries(&sc.inner, delta).map_err(to_py)?;
    Ok(PyCrbReport {
        crb_nu1: r.crb_nu1,
        crb_nu2: r.crb_nu2,
        crb_cross: r.crb_cross,
        crb_sigma2: r.crb_sigma2,
        psi: r.psi,
        delta: r.delta,
    })
}

#[pyfunction]
fn crb_of_spacing(sc: PyRef<'_, PyScenario>, delta: f64) -> PyResult<f64> {
    crb::crb_of_spacing(&sc.inner, delta).map_err(to_py)
}

#[pyfunction]
fn eta(sc: PyRef<'_, PyScenario>, delta: f64) -> Complex64 {
    crb::eta(&sc.inner, delta)
}

#[pyfunction]
fn eta_taylor(sc: PyRef<'_, PyScenario>, delta: f64) -> Complex64 {
    crb::eta_taylor(&sc.inner, delta)
}

#[pyfunction]
fn psi(sc: PyRef<'_, PyScenario>, delta: f64) -> f64 {
    crb::psi(&sc.inner, delta)
}

/// Angle block of the Fisher information as nested lists, plus the σ² entry.
#[pyfunction]
fn fim(sc: PyRef<'_, PyScenario>, delta: f64) -> (Vec<Vec<f64>>, f64) {
    let f = crb::fim(&sc.inner, delta);
    (f.angle.iter().map(|row| row.to_vec()).collect(), f.noise)
}

#[pyfunction]
fn quartic_coeffs<'py>(py: Python<'py>, sc: PyRef<'_, PyScenario>) -> PyResult<Bound<'py, PyDict>> {
    let k = arl::quartic_coeffs(&sc.inner);
    let out = PyDict::new(py);
    for (name, value) in [
        ("a", k.a),
        ("b", k.b),
        ("c", k.c),
        ("d", k.d),
        ("gamma", k.gamma),
        ("kappa", k.kappa),
        ("phi", k.phi),
        ("alpha", k.alpha),
        ("beta", k.beta),
        ("domain_ratio", k.domain_ratio()),
    ] {
        out.set_item(name, value)?;
    }
    Ok(out)
}

/// CSV text for figure preset 1..5, same as `arl fig <n>`.
#[pyfunction]
#[pyo3(signature = (figure, abs_tol=1e-12))]
fn figure_csv(py: Python<'_>, figure: u8, abs_tol: f64) -> PyResult<String> {
    let specs = figure_preset(figure).map_err(to_py)?;
    let cfg = solver_config(abs_tol, None);
    let out = py.detach(|| run_sweep(&specs, &cfg)).map_err(to_py)?;
    let mut buf = Vec::new();
    write_csv(&out.rows, &mut buf).map_err(to_py)?;
    String::from_utf8(buf).map_err(|e| ArlError::new_err(e.to_string()))
}

#[pymodule]
fn pyarl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("ArlError", py.get_type::<ArlError>())?;
    m.add("SingularInformationError", py.get_type::<SingularInformationError>())?;
    m.add("NoClosedFormError", py.get_type::<NoClosedFormError>())?;
    m.add("ClosedFormDomainError", py.get_type::<ClosedFormDomainError>())?;
    m.add("NoBracketError", py.get_type::<NoBracketError>())?;
    m.add_class::<PyArrayGeometry>()?;
    m.add_class::<PySourcePair>()?;
    m.add_class::<PyScenario>()?;
    m.add_class::<PyArlResult>()?;
    m.add_class::<PyCrbReport>()?;
    m.add_function(wrap_pyfunction!(make_pair, m)?)?;
    m.add_function(wrap_pyfunction!(make_pair_rotated, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_arl, m)?)?;
    m.add_function(wrap_pyfunction!(numeric_arl, m)?)?;
    m.add_function(wrap_pyfunction!(smith_residual, m)?)?;
    m.add_function(wrap_pyfunction!(weak_signal_limit, m)?)?;
    m.add_function(wrap_pyfunction!(crb_entries, m)?)?;
    m.add_function(wrap_pyfunction!(crb_of_spacing, m)?)?;
    m.add_function(wrap_pyfunction!(eta, m)?)?;
    m.add_function(wrap_pyfunction!(eta_taylor, m)?)?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(fim, m)?)?;
    m.add_function(wrap_pyfunction!(quartic_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(figure_csv, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
