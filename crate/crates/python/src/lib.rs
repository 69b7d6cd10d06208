//! Python bindings: closed forms, subspaces, the three constructions and campaigns.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::path::Path;

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use qgrass_core::families::{self, io, Construction};
use qgrass_core::gfq::{self, make_field};
use qgrass_core::harness::{self, Campaign};
use qgrass_core::qnum;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyfunction]
#[pyo3(signature = (a, b, q = 2))]
fn gauss_binom(a: i64, b: i64, q: u64) -> BigInt {
    qnum::gauss_binom(a, b, q)
}

#[pyfunction]
#[pyo3(signature = (t, k, n, q = 2))]
fn h1_size(t: i64, k: i64, n: i64, q: u64) -> BigInt {
    qnum::h1_size(t, k, n, q)
}

#[pyfunction]
#[pyo3(signature = (t, k, c, n, q = 2))]
fn h2_size(t: i64, k: i64, c: i64, n: i64, q: u64) -> PyResult<BigInt> {
    qnum::h2_size(t, k, c, n, q).map_err(value_err)
}

#[pyfunction]
#[pyo3(signature = (t, k, n, q = 2))]
fn h3_size(t: i64, k: i64, n: i64, q: u64) -> BigInt {
    qnum::h3_size(t, k, n, q)
}

#[pyfunction]
#[pyo3(signature = (n, k, t, q = 2))]
fn f_threshold(n: i64, k: i64, t: i64, q: u64) -> BigInt {
    qnum::f_threshold(n, k, t, q)
}

/// Number of `m`-subspaces of `GF(q)^(e+l)` meeting a fixed `l`-subspace in dimension `h`.
#[pyfunction]
#[pyo3(signature = (m, h, e, l, q = 2))]
fn type_count(m: i64, h: i64, e: i64, l: i64, q: u64) -> BigInt {
    qnum::type_count(m, h, e, l, q)
}

#[pyfunction]
#[pyo3(signature = (m1, h1, m, h, e, l, q = 2))]
fn containing_count(m1: i64, h1: i64, m: i64, h: i64, e: i64, l: i64, q: u64) -> BigInt {
    qnum::containing_count(m1, h1, m, h, e, l, q)
}

/// Enumerates `[n, k]_q` and returns its length.
#[pyfunction]
#[pyo3(signature = (n, k, q = 2, budget = None))]
fn grassmannian_count(py: Python<'_>, n: usize, k: usize, q: u64, budget: Option<u64>) -> PyResult<u64> {
    let field = make_field(q).map_err(value_err)?;
    let budget = budget.unwrap_or_else(gfq::default_budget);
    py.detach(|| {
        let g = gfq::Grassmannian::new(&field, n, k, budget).map_err(value_err)?;
        Ok(g.iter().count() as u64)
    })
}

#[pyclass(name = "Subspace", frozen, skip_from_py_object, module = "qgrass")]
#[derive(Clone)]
struct PySubspace(gfq::Subspace);

#[pymethods]
impl PySubspace {
    /// The span of `rows` in `GF(q)^n`.
    #[new]
    fn new(q: u64, n: usize, rows: Vec<Vec<u8>>) -> PyResult<Self> {
        let field = make_field(q).map_err(value_err)?;
        Ok(PySubspace(gfq::Subspace::from_rows(&field, n, &rows).map_err(value_err)?))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PySubspace(serde_json::from_str(text).map_err(value_err)?))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("subspaces serialize")
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.ambient_dim()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.0.q()
    }

    /// Reduced row echelon basis.
    #[getter]
    fn rows(&self) -> Vec<Vec<u16>> {
        self.0.rows().into_iter().map(|r| r.into_iter().map(u16::from).collect()).collect()
    }

    fn sum(&self, other: &PySubspace) -> PyResult<Self> {
        Ok(PySubspace(self.0.sum(&other.0).map_err(value_err)?))
    }

    fn intersection(&self, other: &PySubspace) -> PyResult<Self> {
        Ok(PySubspace(self.0.intersection(&other.0).map_err(value_err)?))
    }

    fn intersect_dim(&self, other: &PySubspace) -> PyResult<usize> {
        self.0.intersect_dim(&other.0).map_err(value_err)
    }

    fn contains(&self, other: &PySubspace) -> bool {
        self.0.contains(&other.0)
    }

    fn __eq__(&self, other: &PySubspace) -> bool {
        self.0 == other.0
    }

    fn __hash__(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.0.hash(&mut h);
        h.finish()
    }

    fn __repr__(&self) -> String {
        format!("Subspace(q={}, n={}, dim={}, {})", self.0.q(), self.0.ambient_dim(), self.0.dim(), self.0)
    }
}

#[pyclass(name = "Family", frozen, module = "qgrass")]
struct PyFamily(families::Family);

#[pymethods]
impl PyFamily {
    /// Builds `h1`, `h2` (with `c`) or `h3` from a flag chosen by `seed`.
    #[staticmethod]
    #[pyo3(signature = (kind, t, k, n, q = 2, c = None, seed = 0, budget = None))]
    fn build(
        py: Python<'_>,
        kind: &str,
        t: usize,
        k: usize,
        n: usize,
        q: u64,
        c: Option<usize>,
        seed: u64,
        budget: Option<u64>,
    ) -> PyResult<Self> {
        let which = match (kind, c) {
            ("h1", _) => Construction::H1,
            ("h3", _) => Construction::H3,
            ("h2", Some(c)) => Construction::H2 { c },
            ("h2", None) => return Err(PyValueError::new_err("h2 needs c")),
            _ => return Err(PyValueError::new_err(format!("unknown construction {kind:?}"))),
        };
        let field = make_field(q).map_err(value_err)?;
        let budget = budget.unwrap_or_else(gfq::default_budget);
        py.detach(|| families::build_seeded(which, &field, n, k, t, seed, budget)).map(PyFamily).map_err(value_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::from_json(text).map(PyFamily).map_err(value_err)
    }

    fn to_json(&self) -> String {
        io::to_json(&self.0)
    }

    #[staticmethod]
    fn from_binary(data: &[u8]) -> PyResult<Self> {
        io::from_binary(data).map(PyFamily).map_err(value_err)
    }

    fn to_binary<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &io::to_binary(&self.0))
    }

    /// `(n, k, q, t)`.
    #[getter]
    fn params(&self) -> (usize, usize, u64, usize) {
        let p = self.0.params();
        (p.n, p.k, p.q, p.t)
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.0.provenance().tag()
    }

    fn members(&self) -> Vec<PySubspace> {
        self.0.members().iter().cloned().map(PySubspace).collect()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __contains__(&self, s: &PySubspace) -> bool {
        self.0.contains(&s.0)
    }

    fn is_t_intersecting(&self) -> bool {
        families::is_t_intersecting(&self.0).intersecting
    }

    fn common_core_dim(&self) -> PyResult<usize> {
        families::common_core_dim(&self.0).map_err(value_err)
    }

    #[pyo3(signature = (budget = None))]
    fn is_maximal(&self, py: Python<'_>, budget: Option<u64>) -> PyResult<bool> {
        let budget = budget.unwrap_or_else(gfq::default_budget);
        py.detach(|| families::is_maximal(&self.0, budget)).map(|m| m.maximal).map_err(value_err)
    }

    /// `(tau, number of minimal covers)`; `tau` is `None` when no cover of dimension `<= k` exists.
    #[pyo3(signature = (budget = None))]
    fn tau(&self, py: Python<'_>, budget: Option<u64>) -> PyResult<(Option<usize>, usize)> {
        let budget = budget.unwrap_or_else(gfq::default_budget);
        let k = self.0.params().k;
        let c = py.detach(|| families::covering_number(&self.0, k, budget)).map_err(value_err)?;
        Ok((c.level, c.witnesses.len()))
    }

    /// The structure label and whether its reconstruction reproduces the family.
    #[pyo3(signature = (budget = None))]
    fn structure(&self, py: Python<'_>, budget: Option<u64>) -> PyResult<Option<(String, bool)>> {
        let budget = budget.unwrap_or_else(gfq::default_budget);
        py.detach(|| {
            let Some((_, shape)) = families::analyze_t_structure(&self.0, budget)? else {
                return Ok(None);
            };
            let (_, rebuilt) = families::reconstruct(&self.0, &shape, budget)?;
            let same = rebuilt.is_some_and(|r| r.same_members(&self.0));
            Ok(Some((shape.label().to_string(), same)))
        })
        .map_err(|e: families::FamilyError| value_err(e))
    }
}

/// Runs a campaign config given as JSON text and returns the report as JSON text.
#[pyfunction]
#[pyo3(signature = (config, base_dir = ".", budget = None))]
fn run_campaign(py: Python<'_>, config: &str, base_dir: &str, budget: Option<u64>) -> PyResult<String> {
    let c = Campaign::from_json(config, Path::new(base_dir)).map_err(value_err)?;
    let budget = harness::resolve_budget(budget, c.budget);
    Ok(py.detach(|| harness::run_campaign(&c, budget)).to_json())
}

/// The bundled `desk-verify` campaign config.
#[pyfunction]
fn desk_verify_config() -> PyResult<String> {
    let c = qgrass_core::cli::bundled_desk_verify().map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    serde_json::to_string_pretty(&c).map_err(value_err)
}

#[pymodule]
pub fn qgrass(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("SUPPORTED_Q", gfq::SUPPORTED_Q.to_vec())?;
    m.add_function(wrap_pyfunction!(gauss_binom, m)?)?;
    m.add_function(wrap_pyfunction!(h1_size, m)?)?;
    m.add_function(wrap_pyfunction!(h2_size, m)?)?;
    m.add_function(wrap_pyfunction!(h3_size, m)?)?;
    m.add_function(wrap_pyfunction!(f_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(type_count, m)?)?;
    m.add_function(wrap_pyfunction!(containing_count, m)?)?;
    m.add_function(wrap_pyfunction!(grassmannian_count, m)?)?;
    m.add_function(wrap_pyfunction!(run_campaign, m)?)?;
    m.add_function(wrap_pyfunction!(desk_verify_config, m)?)?;
    m.add_class::<PySubspace>()?;
    m.add_class::<PyFamily>()?;
    Ok(())
}
