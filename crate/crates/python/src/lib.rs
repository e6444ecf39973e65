//! Python bindings: `import rpverify`.

use pyo3::exceptions::{PyMemoryError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use rpverify::verify::{self, ClassicBound, DusartSide, DEFAULT_TIE_BAND};
use rpverify::{bounds, sieve, Error};

const BUDGET: u64 = sieve::DEFAULT_MEMORY_BUDGET;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::ResourceLimit(_) => PyMemoryError::new_err(e.to_string()),
        Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py_json<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "PrimeTable", module = "rpverify", frozen)]
struct PyPrimeTable(sieve::PrimeTable);

#[pymethods]
impl PyPrimeTable {
    #[new]
    fn new(py: Python<'_>, limit: u64) -> PyResult<Self> {
        py.detach(|| sieve::PrimeTable::build_with_budget(limit, BUDGET))
            .map(Self)
            .map_err(py_err)
    }

    #[getter]
    fn limit(&self) -> u64 {
        self.0.limit()
    }

    fn is_prime(&self, x: u64) -> PyResult<bool> {
        self.0.is_prime(x).map_err(py_err)
    }

    fn prime_count(&self, x: u64) -> PyResult<u64> {
        self.0.prime_count(x).map_err(py_err)
    }

    fn nth_prime(&self, k: u64) -> PyResult<u64> {
        self.0.nth_prime(k).map_err(py_err)
    }

    fn __len__(&self) -> usize {
        self.0.prime_count_total() as usize
    }

    fn __repr__(&self) -> String {
        format!("PrimeTable(limit={})", self.0.limit())
    }
}

#[pyclass(name = "RamanujanTable", module = "rpverify", frozen)]
struct PyRamanujanTable(rpverify::RamanujanTable);

#[pymethods]
impl PyRamanujanTable {
    /// Compute R_1..R_n_max.
    #[staticmethod]
    fn build(py: Python<'_>, n_max: u64) -> PyResult<Self> {
        py.detach(|| rpverify::build_table_with_sieve(n_max, BUDGET))
            .map(|(t, _)| Self(t))
            .map_err(py_err)
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        rpverify::RamanujanTable::load(path)
            .map(Self)
            .map_err(py_err)
    }

    fn save(&self, path: std::path::PathBuf) -> PyResult<()> {
        self.0.save(path).map_err(py_err)
    }

    #[getter]
    fn n_max(&self) -> u64 {
        self.0.n_max()
    }

    #[getter]
    fn scan_bound(&self) -> u64 {
        self.0.scan_bound()
    }

    /// R_n.
    fn ramanujan(&self, n: u64) -> PyResult<u64> {
        self.0.ramanujan(n).map_err(py_err)
    }

    /// s with R_n = p_s.
    fn index_s(&self, n: u64) -> PyResult<u64> {
        self.0.index_s(n).map_err(py_err)
    }

    /// `[(R_n, s), ...]` for n = 1..n_max.
    fn entries(&self) -> Vec<(u64, u64)> {
        self.0.entries().iter().map(|e| (e.r, e.s)).collect()
    }

    fn __len__(&self) -> usize {
        self.0.n_max() as usize
    }

    fn __repr__(&self) -> String {
        format!("RamanujanTable(n_max={})", self.0.n_max())
    }
}

#[pyclass(name = "BoundParams", module = "rpverify", frozen)]
struct PyBoundParams(bounds::BoundParams);

#[pymethods]
impl PyBoundParams {
    /// eps = 0.5 split 0.1 + 0.4 with j(n) = log(log(n)) - log(2) - 0.5.
    #[staticmethod]
    fn corollary() -> Self {
        Self(bounds::BoundParams::corollary())
    }

    /// Custom j(n) given as an expression in `n`.
    #[new]
    #[pyo3(signature = (epsilon, j, epsilon1=None))]
    fn new(epsilon: f64, j: &str, epsilon1: Option<f64>) -> PyResult<Self> {
        let e1 = epsilon1.unwrap_or(epsilon / 5.0);
        bounds::BoundParams::custom(epsilon, e1, epsilon - e1, j)
            .map(Self)
            .map_err(py_err)
    }

    #[getter]
    fn epsilon(&self) -> f64 {
        self.0.epsilon
    }

    #[getter]
    fn epsilon1(&self) -> f64 {
        self.0.epsilon1
    }

    #[getter]
    fn epsilon2(&self) -> f64 {
        self.0.epsilon2
    }

    #[getter]
    fn j(&self) -> String {
        self.0.j_label()
    }

    fn g(&self, n: f64) -> PyResult<f64> {
        self.0.shape(n).map_err(py_err)
    }

    fn alpha(&self, n: f64) -> PyResult<f64> {
        self.0.alpha(n).map_err(py_err)
    }

    #[allow(non_snake_case)]
    fn G(&self, n: f64) -> PyResult<f64> {
        self.0.separation_at_alpha(n).map_err(py_err)
    }

    #[allow(non_snake_case)]
    fn G_prime(&self, n: f64) -> PyResult<f64> {
        self.0.separation_at_alpha_slope(n).map_err(py_err)
    }

    #[allow(non_snake_case)]
    fn A(&self, n: f64) -> PyResult<f64> {
        self.0.slope_difference(n).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "BoundParams(epsilon={}, epsilon1={}, epsilon2={}, j={:?})",
            self.0.epsilon,
            self.0.epsilon1,
            self.0.epsilon2,
            self.0.j_label()
        )
    }
}

/// Dusart's lower bound L(x) on the x-th prime.
#[pyfunction]
fn lower(x: f64) -> PyResult<f64> {
    bounds::lower(x).map_err(py_err)
}

/// Dusart's upper bound U(x) on the x-th prime.
#[pyfunction]
fn upper(x: f64) -> PyResult<f64> {
    bounds::upper(x).map_err(py_err)
}

/// F(x, n) = L(x) - 2 U(x - n + 1).
#[pyfunction]
fn separation(x: f64, n: f64) -> PyResult<f64> {
    bounds::separation(x, n).map_err(py_err)
}

/// `(threshold, crossover)` for log(log(2.4n)/log n) < eps2/5.
#[pyfunction]
#[pyo3(signature = (eps2=0.4))]
fn eq4_threshold(eps2: f64) -> PyResult<(u64, f64)> {
    verify::eq4_threshold(eps2)
        .map(|t| (t.threshold, t.crossover))
        .map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (n, eps2=0.4))]
fn eq5_check(n: u64, eps2: f64) -> PyResult<(f64, bool)> {
    verify::eq5_check(n, eps2).map_err(py_err)
}

/// s < alpha(n) on [n_min, n_max]; returns the JSON report as a dict.
#[pyfunction]
#[pyo3(signature = (table, n_min=44, n_max=None, params=None, tie_band=DEFAULT_TIE_BAND))]
fn verify_corollary<'py>(
    py: Python<'py>,
    table: &PyRamanujanTable,
    n_min: u64,
    n_max: Option<u64>,
    params: Option<&PyBoundParams>,
    tie_band: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let p = params.map_or_else(bounds::BoundParams::corollary, |p| p.0.clone());
    let hi = n_max.unwrap_or(table.0.n_max());
    let r = py
        .detach(|| verify::verify_corollary(&table.0, &p, n_min, hi, tie_band))
        .map_err(py_err)?;
    to_py_json(py, &r)
}

/// One of sondow-lower, sondow-upper, laishram, sn2014, lemma221.
#[pyfunction]
#[pyo3(signature = (which, n_min, n_max, tie_band=DEFAULT_TIE_BAND))]
fn verify_classic<'py>(
    py: Python<'py>,
    which: &str,
    n_min: u64,
    n_max: u64,
    tie_band: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let b: ClassicBound = which.parse().map_err(py_err)?;
    let r = py
        .detach(|| {
            let (tab, primes) = rpverify::build_table_with_sieve(n_max, BUDGET)?;
            verify::verify_classic(&tab, &primes, b, n_min, n_max, tie_band)
        })
        .map_err(py_err)?;
    to_py_json(py, &r)
}

#[pyfunction]
#[pyo3(signature = (side, k_min, k_max, tie_band=DEFAULT_TIE_BAND))]
fn verify_dusart<'py>(
    py: Python<'py>,
    side: &str,
    k_min: u64,
    k_max: u64,
    tie_band: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let side: DusartSide = side.parse().map_err(py_err)?;
    let r = py
        .detach(|| {
            let primes = sieve::sieve_for_nth_prime(k_max, BUDGET)?;
            verify::verify_dusart(&primes, side, k_min, k_max, tie_band)
        })
        .map_err(py_err)?;
    to_py_json(py, &r)
}

/// Empirical N for custom parameters, labelled EMPIRICAL.
#[pyfunction]
#[pyo3(signature = (params, cap=10_000_000, table=None, tie_band=DEFAULT_TIE_BAND))]
fn explore<'py>(
    py: Python<'py>,
    params: &PyBoundParams,
    cap: u64,
    table: Option<&PyRamanujanTable>,
    tie_band: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let ex = py
        .detach(|| verify::explore_theorem(&params.0, cap, table.map(|t| &t.0), tie_band))
        .map_err(py_err)?;
    Ok(to_py_json(py, &ex)?.cast_into::<PyDict>()?)
}

#[pymodule]
#[pyo3(name = "rpverify")]
fn rpverify_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    init(m)
}

/// Register every class and function on `m`.
pub fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPrimeTable>()?;
    m.add_class::<PyRamanujanTable>()?;
    m.add_class::<PyBoundParams>()?;
    m.add_function(wrap_pyfunction!(lower, m)?)?;
    m.add_function(wrap_pyfunction!(upper, m)?)?;
    m.add_function(wrap_pyfunction!(separation, m)?)?;
    m.add_function(wrap_pyfunction!(eq4_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(eq5_check, m)?)?;
    m.add_function(wrap_pyfunction!(verify_corollary, m)?)?;
    m.add_function(wrap_pyfunction!(verify_classic, m)?)?;
    m.add_function(wrap_pyfunction!(verify_dusart, m)?)?;
    m.add_function(wrap_pyfunction!(explore, m)?)?;
    Ok(())
}
