//! Python bindings. Reports come back as plain dicts (decoded from the same
//! JSON the command-line tool prints); exact numbers are `QuadExt` objects.

use std::hash::{DefaultHasher, Hash, Hasher};

use coronawalk::algebraic::{self, Eigenvalue};
use coronawalk::corona_spectra::{self, CoronaKernel};
use coronawalk::spectra;
use coronawalk::state_transfer::{self, RadicandReport};
use coronawalk::workflow::{self, RunConfig, Target, TimeRequest, WorkflowError};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::pyclass::CompareOp;

create_exception!(coronawalk, CoronawalkError, PyValueError);

fn err(e: impl std::fmt::Display) -> PyErr {
    CoronawalkError::new_err(e.to_string())
}

fn decode<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (workflow::to_json(value),))
}

/// Exact number `(a + b√Δ)/2`.
#[pyclass(name = "QuadExt", frozen, module = "coronawalk")]
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct PyQuadExt(algebraic::QuadExt);

#[pymethods]
impl PyQuadExt {
    #[new]
    #[pyo3(signature = (a, b=0, delta=1))]
    fn new(a: i64, b: i64, delta: u64) -> PyResult<Self> {
        algebraic::QuadExt::new(a, b, delta).map(Self).map_err(err)
    }

    /// Recognizes `x` as a quadratic integer over 2, or returns `None`.
    #[staticmethod]
    #[pyo3(signature = (x, tolerance=1e-9))]
    fn recognize(x: f64, tolerance: f64) -> PyResult<Option<Self>> {
        let opts = algebraic::RecognizeOptions { tolerance, ..Default::default() };
        Ok(algebraic::recognize_quadext(x, opts).map_err(err)?.map(Self))
    }

    #[getter]
    fn a(&self) -> i64 {
        self.0.a()
    }

    #[getter]
    fn b(&self) -> i64 {
        self.0.b()
    }

    #[getter]
    fn delta(&self) -> u64 {
        self.0.delta()
    }

    fn is_rational(&self) -> bool {
        self.0.is_rational()
    }

    fn __float__(&self) -> f64 {
        self.0.to_f64()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("QuadExt({}, {}, {})", self.0.a(), self.0.b(), self.0.delta())
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.0.checked_add(&other.0).map(Self).ok_or_else(|| err("operands lie in different fields"))
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        self.0.checked_sub(&other.0).map(Self).ok_or_else(|| err("operands lie in different fields"))
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.0
            .checked_mul(&other.0)
            .map(Self)
            .ok_or_else(|| err("product is not of the form (a + b√Δ)/2 with a common Δ"))
    }

    fn __neg__(&self) -> Self {
        Self(self.0.neg())
    }

    fn __richcmp__(&self, other: &Self, op: CompareOp) -> bool {
        op.matches(self.0.cmp_value(&other.0))
    }

    fn __hash__(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.0.hash(&mut h);
        h.finish()
    }
}

/// Square-free decomposition `n = s² c`, returned as `(s, c)`.
#[pyfunction]
fn square_free_part(n: u64) -> PyResult<(u64, u64)> {
    if n == 0 {
        return Err(PyZeroDivisionError::new_err("0 has no square-free part"));
    }
    algebraic::square_free_part(n).map_err(err)
}

/// The constants of a regular corona with base order `n1`, inner order
/// `n2` and degrees `r1`, `r2`.
#[pyclass(name = "CoronaParams", frozen, module = "coronawalk")]
#[derive(Clone, Copy)]
struct PyCoronaParams(corona_spectra::CoronaParams);

#[pymethods]
impl PyCoronaParams {
    #[new]
    fn new(n1: usize, n2: usize, r1: usize, r2: usize) -> PyResult<Self> {
        corona_spectra::CoronaParams::new(n1, n2, r1, r2).map(Self).map_err(err)
    }

    #[getter]
    fn s(&self) -> i64 {
        self.0.s()
    }

    #[getter]
    fn t(&self) -> i64 {
        self.0.t()
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    /// `(θ-s+t)² + 4n2`.
    fn theta_radicand(&self, theta: i64) -> u64 {
        self.0.theta_radicand(theta)
    }

    /// `(2r1-s+t)² + 4n2(n1-1)²`.
    fn r_radicand(&self) -> u64 {
        self.0.r_radicand()
    }

    /// Square-free decomposition and irrationality of `Λ_r`.
    fn lambda_r<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        decode(py, &RadicandReport::of(self.0.r_radicand()).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!(
            "CoronaParams(n1={}, n2={}, r1={}, r2={}, s={}, t={})",
            self.0.n1(),
            self.0.n2(),
            self.0.r1(),
            self.0.r2(),
            self.0.s(),
            self.0.t()
        )
    }
}

fn config(tolerance: f64, cluster_tol: f64, epsilon: f64, l_bound: u64) -> RunConfig {
    RunConfig { tolerance, cluster_tol, epsilon, l_bound, ..RunConfig::default() }
}

fn target_and_pair(target: &str, u: &str, v: &str) -> Result<(Target, usize, usize), WorkflowError> {
    let target = workflow::parse_target(target)?;
    let (u, v) = (workflow::parse_vertex(u, &target)?, workflow::parse_vertex(v, &target)?);
    Ok((target, u, v))
}

/// Distinct signless Laplacian eigenvalues of a target as
/// `[(value, approx, multiplicity)]`, descending.
#[pyfunction]
#[pyo3(signature = (target, cluster_tol=1e-7))]
fn spectrum(target: &str, cluster_tol: f64) -> PyResult<Vec<(String, f64, usize)>> {
    let target = workflow::parse_target(target).map_err(err)?;
    let listing = workflow::spectrum(&target, &config(1e-9, cluster_tol, 0.01, 1)).map_err(err)?;
    Ok(listing.eigenvalues.into_iter().map(|e| (e.value, e.approx, e.multiplicity)).collect())
}

/// Closed-form spectrum of `corona(g,h)` next to the numeric oracle.
#[pyfunction]
fn corona_spectrum<'py>(py: Python<'py>, g: &str, h: &str) -> PyResult<Bound<'py, PyAny>> {
    let target = workflow::parse_target(&format!("corona({g},{h})")).map_err(err)?;
    decode(py, &workflow::corona_spectrum_summary(&target, &RunConfig::default()).map_err(err)?)
}

/// Perfect state transfer report between `u` and `v` (indices or
/// `base:i` / `copy:i:j`).
#[pyfunction]
#[pyo3(signature = (target, u, v, tolerance=1e-9))]
fn check_pst<'py>(py: Python<'py>, target: &str, u: &str, v: &str, tolerance: f64) -> PyResult<Bound<'py, PyAny>> {
    let (target, u, v) = target_and_pair(target, u, v).map_err(err)?;
    decode(py, &workflow::check_pst(&target, u, v, &config(tolerance, 1e-7, 0.01, 1)).map_err(err)?)
}

/// Bounded pretty good state transfer search between two base vertices.
#[pyfunction]
#[pyo3(signature = (target, u="base:0", v="base:1", epsilon=0.01, l_bound=1_000_000))]
fn search_pgst<'py>(
    py: Python<'py>,
    target: &str,
    u: &str,
    v: &str,
    epsilon: f64,
    l_bound: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let (target, u, v) = target_and_pair(target, u, v).map_err(err)?;
    decode(py, &workflow::search_pgst(&target, u, v, &config(1e-9, 1e-7, epsilon, l_bound)).map_err(err)?)
}

/// `(U(τ)_{uv}, |U(τ)_{uv}|²)` from the numeric decomposition.
#[pyfunction]
fn fidelity(target: &str, u: &str, v: &str, tau: f64) -> PyResult<(Complex64, f64)> {
    let (target, u, v) = target_and_pair(target, u, v).map_err(err)?;
    match workflow::fidelity(&target, u, v, TimeRequest::At(tau), &RunConfig::default()).map_err(err)? {
        workflow::FidelityOutput::Point { re, im, fidelity, .. } => Ok((Complex64::new(re, im), fidelity)),
        workflow::FidelityOutput::Scan { .. } => unreachable!("a single time yields a point"),
    }
}

/// Fidelity samples on `[0, t_max]` and the refined maximum.
#[pyfunction]
#[pyo3(signature = (target, u, v, t_max=50.0, steps=2000))]
fn fidelity_scan(target: &str, u: &str, v: &str, t_max: f64, steps: usize) -> PyResult<(Vec<(f64, f64)>, f64, f64)> {
    let (target, u, v) = target_and_pair(target, u, v).map_err(err)?;
    let request = TimeRequest::Grid { t_min: 0.0, t_max, steps };
    match workflow::fidelity(&target, u, v, request, &RunConfig::default()).map_err(err)? {
        workflow::FidelityOutput::Scan { scan, .. } => Ok((scan.samples, scan.best_tau, scan.best_fidelity)),
        workflow::FidelityOutput::Point { .. } => unreachable!("a grid yields a scan"),
    }
}

/// `U(τ)` entry between base vertices `(u,0)` and `(v,0)` of
/// `corona(g,h)` from the decomposition of `g` only.
#[pyfunction]
fn corona_transition_element(g: &str, h: &str, u: usize, v: usize, tau: f64) -> PyResult<Complex64> {
    let (gg, hh) = (coronawalk::graphs::generate(g).map_err(err)?, coronawalk::graphs::generate(h).map_err(err)?);
    let params = corona_spectra::CoronaParams::from_graphs(&gg, &hh).map_err(err)?;
    let gdec = spectra::decompose_graph(&gg, spectra::DEFAULT_CLUSTER_TOL).map_err(err)?;
    Ok(CoronaKernel::new(&gdec, &params, u, v).map_err(err)?.value(tau))
}

/// Whether a vertex with this exact eigenvalue support is periodic.
#[pyfunction]
fn is_periodic_vertex(support: Vec<PyQuadExt>) -> PyResult<bool> {
    let support: Vec<Eigenvalue> = support.into_iter().map(|q| Eigenvalue::Exact(q.0)).collect();
    Ok(state_transfer::is_periodic_vertex(&support).map_err(err)?.periodic)
}

/// Whether the projector identity for antipodal distance-regular graphs
/// holds numerically for `target`.
#[pyfunction]
fn antipodal_identity_check(target: &str) -> PyResult<bool> {
    let graph = workflow::parse_target(target).map_err(err)?.graph();
    spectra::antipodal_identity_check(&graph, spectra::DEFAULT_CLUSTER_TOL).map_err(err)
}

#[pymodule]
#[pyo3(name = "coronawalk")]
fn coronawalk_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CoronawalkError", m.py().get_type::<CoronawalkError>())?;
    m.add_class::<PyQuadExt>()?;
    m.add_class::<PyCoronaParams>()?;
    m.add_function(wrap_pyfunction!(square_free_part, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(corona_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(check_pst, m)?)?;
    m.add_function(wrap_pyfunction!(search_pgst, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity_scan, m)?)?;
    m.add_function(wrap_pyfunction!(corona_transition_element, m)?)?;
    m.add_function(wrap_pyfunction!(is_periodic_vertex, m)?)?;
    m.add_function(wrap_pyfunction!(antipodal_identity_check, m)?)?;
    Ok(())
}
