//! Python bindings: catalog entries, operations, Margolis homology, transfer
//! checks and DH reports. Reports are returned as JSON strings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use coniveau::catalog;
use coniveau::coniveau::{dh_report, quotient_by_coniveau, Mode};
use coniveau::margolis::margolis_homology;
use coniveau::ops::Operation;
use coniveau::Error;

fn to_py(e: Error) -> PyErr {
    if e.is_input_error() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

/// A loaded catalog entry or presentation file.
#[pyclass(name = "Entry", module = "coniveau_py")]
struct PyEntry {
    inner: coniveau::Entry,
}

#[pymethods]
impl PyEntry {
    /// Load a catalog id or a presentation file path.
    #[staticmethod]
    fn load(spec: &str) -> PyResult<Self> {
        Ok(PyEntry {
            inner: catalog::resolve(spec).map_err(to_py)?,
        })
    }

    /// Parse presentation text directly.
    #[staticmethod]
    fn from_text(name: &str, text: &str) -> PyResult<Self> {
        Ok(PyEntry {
            inner: coniveau::Entry::from_text(name, text).map_err(to_py)?,
        })
    }

    #[getter]
    fn id(&self) -> String {
        self.inner.id.clone()
    }

    #[getter]
    fn group(&self) -> String {
        self.inner.group().to_string()
    }

    #[getter]
    fn is_stub(&self) -> bool {
        self.inner.is_stub()
    }

    #[getter]
    fn prime(&self) -> PyResult<u32> {
        Ok(self.inner.algebra().map_err(to_py)?.prime())
    }

    #[getter]
    fn truncation(&self) -> PyResult<u32> {
        Ok(self.inner.algebra().map_err(to_py)?.truncation())
    }

    fn dims(&self) -> PyResult<Vec<usize>> {
        Ok(self.inner.algebra().map_err(to_py)?.dims())
    }

    fn basis(&self, degree: u32) -> PyResult<Vec<String>> {
        let alg = self.inner.algebra().map_err(to_py)?;
        let b = alg.degree_basis(degree).map_err(to_py)?;
        Ok(b.iter().map(|e| alg.format(e)).collect())
    }

    /// Normal form of an expression.
    fn normalize(&self, expr: &str) -> PyResult<String> {
        let alg = self.inner.algebra().map_err(to_py)?;
        Ok(alg.format(&alg.parse(expr).map_err(to_py)?))
    }

    /// `Q_n(expr)`; `n = 0` is the Bockstein.
    fn q(&self, n: u32, expr: &str) -> PyResult<String> {
        self.apply(Operation::Q(n), expr)
    }

    fn beta(&self, expr: &str) -> PyResult<String> {
        self.apply(Operation::Beta, expr)
    }

    /// Reduced power `P^k(expr)` (`Sq^{2k}` at p = 2).
    fn power(&self, k: u32, expr: &str) -> PyResult<String> {
        self.apply(Operation::Power(k), expr)
    }

    /// `(degree, ker, im, homology)` rows of the Q_n Margolis homology.
    fn margolis(&self, n: u32, max_degree: u32) -> PyResult<Vec<(u32, usize, usize, usize)>> {
        let a = self.inner.ops().map_err(to_py)?;
        let r = margolis_homology(a, n, max_degree).map_err(to_py)?;
        Ok(r.degrees
            .iter()
            .map(|d| (d.degree, d.ker_dim, d.im_dim, d.homology_dim))
            .collect())
    }

    /// Quotient basis of `H^d / N^c` in the weight model.
    fn coniveau_quotient(&self, c: u32, degree: u32) -> PyResult<Vec<String>> {
        let alg = self.inner.algebra().map_err(to_py)?;
        let q = quotient_by_coniveau(alg, c, degree).map_err(to_py)?;
        Ok(q.iter().map(|e| alg.format(e)).collect())
    }

    /// `(name, passed, detail)` for every structural check.
    fn validate(&self) -> PyResult<Vec<(String, bool, String)>> {
        let checks = catalog::validate_entry(&self.inner).map_err(to_py)?;
        Ok(checks.into_iter().map(|c| (c.name, c.passed, c.detail)).collect())
    }

    /// DH report as JSON text.
    #[pyo3(signature = (mode = "integral", max_degree = None))]
    fn dh_report(&self, mode: &str, max_degree: Option<u32>) -> PyResult<String> {
        let mode: Mode = mode.parse().map_err(to_py)?;
        Ok(dh_report(&self.inner, mode, max_degree).map_err(to_py)?.to_json())
    }

    fn __repr__(&self) -> String {
        format!("Entry({:?})", self.inner.id)
    }
}

impl PyEntry {
    fn apply(&self, op: Operation, expr: &str) -> PyResult<String> {
        let a = self.inner.ops().map_err(to_py)?;
        let x = a.algebra().parse(expr).map_err(to_py)?;
        let r = a.apply(op, &x).map_err(to_py)?;
        Ok(a.algebra().format(&r.value))
    }
}

#[pyfunction]
fn list_ids() -> Vec<String> {
    catalog::list_ids()
}

#[pymodule]
fn coniveau_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEntry>()?;
    m.add_function(wrap_pyfunction!(list_ids, m)?)?;
    Ok(())
}
