//! Python module `softtorus_py`.
//!
//! Matrices cross the boundary as `list[list[complex]]`, row-major.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use softtorus::brep;
use softtorus::certify::{self, CertifyError, SearchParams};
use softtorus::io::{self, CertificateFile};
use softtorus::matcore::{ComplexMatrix, UnitaryMatrix, C64};
use softtorus::ncpoly::Assignment;

create_exception!(softtorus_py, NoWitnessFound, PyRuntimeError);

type Rows = Vec<Vec<C64>>;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix(rows: Rows) -> PyResult<ComplexMatrix> {
    let dim = rows.len();
    if rows.iter().any(|r| r.len() != dim) {
        return Err(PyValueError::new_err(format!("expected a square matrix with {dim} rows")));
    }
    let entries: Vec<C64> = rows.into_iter().flatten().collect();
    ComplexMatrix::from_rows(dim, &entries).map_err(value_error)
}

fn unitary(rows: Rows) -> PyResult<UnitaryMatrix> {
    UnitaryMatrix::new(matrix(rows)?).map_err(value_error)
}

/// A *-polynomial in `u_n` and `v`.
#[pyclass(name = "Poly", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct Poly(softtorus::NCPoly);

#[pymethods]
impl Poly {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        softtorus::NCPoly::parse(text).map(Poly).map_err(value_error)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}')", self.0)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __add__(&self, other: &Self) -> Self {
        Poly(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &Self) -> Self {
        Poly(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &Self) -> Self {
        Poly(&self.0 * &other.0)
    }

    fn adjoint(&self) -> Self {
        Poly(self.0.adjoint())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Crossed form `Σ_k b_k·v^k` as `[(k, b_k)]`.
    fn normal_order(&self) -> PyResult<Vec<(i64, Poly)>> {
        let form = self.0.normal_order().map_err(value_error)?;
        Ok(form.components().map(|(k, b)| (k, Poly(b.clone()))).collect())
    }

    fn crossed_form(&self) -> PyResult<String> {
        Ok(self.0.normal_order().map_err(value_error)?.to_string())
    }

    fn cond_exp(&self) -> PyResult<Self> {
        self.0.cond_exp().map(Poly).map_err(value_error)
    }

    fn v_degree(&self) -> PyResult<u32> {
        self.0.v_degree().map_err(value_error)
    }

    /// Evaluates at `v = V`, `u_n = V^n·U·V^{-n}`.
    fn eval_crossed(&self, u: Rows, v: Rows) -> PyResult<Rows> {
        let (u, v) = (unitary(u)?, unitary(v)?);
        let assign = Assignment::crossed(&self.0, &u, &v).map_err(value_error)?;
        Ok(self.0.eval(&assign).map_err(value_error)?.to_rows())
    }
}

#[pyclass(name = "Certificate", frozen)]
pub struct Certificate(certify::Certificate);

#[pymethods]
impl Certificate {
    #[getter]
    fn eps(&self) -> f64 {
        self.0.eps
    }

    #[getter]
    fn poly(&self) -> String {
        self.0.poly.clone()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n
    }

    #[getter]
    fn p(&self) -> usize {
        self.0.p
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m
    }

    #[getter]
    fn q(&self) -> u32 {
        self.0.q
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.0.seed
    }

    #[getter]
    fn lambda_(&self) -> C64 {
        self.0.lambda
    }

    #[getter]
    fn u(&self) -> Rows {
        self.0.u.to_rows()
    }

    #[getter]
    fn v(&self) -> Rows {
        self.0.v.to_rows()
    }

    #[getter]
    fn achieved_norm(&self) -> f64 {
        self.0.achieved_norm
    }

    #[getter]
    fn commutator_norm(&self) -> f64 {
        self.0.commutator_norm
    }

    #[getter]
    fn lower_bound(&self) -> f64 {
        self.0.lower_bound
    }

    /// `(name, violation, passed, detail)` for every check.
    #[pyo3(signature = (tol = 1e-8))]
    fn verify(&self, tol: f64) -> Vec<(String, String, bool, String)> {
        certify::verify_certificate(&self.0, tol)
            .checks
            .into_iter()
            .map(|c| (c.name.to_string(), c.violation.to_string(), c.passed, c.detail))
            .collect()
    }

    fn to_json(&self) -> PyResult<String> {
        io::to_json(&CertificateFile::from(&self.0)).map_err(value_error)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file: CertificateFile = io::from_json(text).map_err(value_error)?;
        file.to_certificate().map(Certificate).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!(
            "Certificate(poly='{}', eps={}, n={}, achieved_norm={:.6}, lower_bound={:.6})",
            self.0.poly, self.0.eps, self.0.n, self.0.achieved_norm, self.0.lower_bound
        )
    }
}

#[pyfunction]
#[pyo3(name = "certify", signature = (poly, eps, dims = vec![1, 2], restarts = 16, seed = 7, ascent_steps = 400, q = None))]
fn certify_poly(
    py: Python<'_>,
    poly: &str,
    eps: f64,
    dims: Vec<usize>,
    restarts: usize,
    seed: u64,
    ascent_steps: usize,
    q: Option<u32>,
) -> PyResult<Certificate> {
    let params = SearchParams {
        dims,
        restarts,
        seed,
        ascent_steps,
        q,
    };
    let poly = poly.to_string();
    match py.detach(|| certify::certify_text(&poly, eps, &params)) {
        Ok(c) => Ok(Certificate(c)),
        Err(e @ CertifyError::NoWitnessFound { .. }) => Err(NoWitnessFound::new_err(e.to_string())),
        Err(e) => Err(value_error(e)),
    }
}

/// Verifies a certificate given as JSON text; returns whether every check passed.
#[pyfunction]
#[pyo3(signature = (text, tol = 1e-8))]
fn verify_json(text: &str, tol: f64) -> PyResult<bool> {
    let cert = Certificate::from_json(text)?;
    Ok(certify::verify_certificate(&cert.0, tol).all_passed())
}

#[pyfunction]
fn halmos_dilate(t: Rows) -> PyResult<Rows> {
    let v = brep::halmos_dilate(&matrix(t)?).map_err(value_error)?;
    Ok(v.matrix().to_rows())
}

#[pyfunction]
fn path_to_identity(w: Rows, eps: f64) -> PyResult<Vec<Rows>> {
    let path = brep::path_to_identity(&unitary(w)?, eps).map_err(value_error)?;
    Ok(path.iter().map(|u| u.matrix().to_rows()).collect())
}

/// Units `U_lo, …, U_hi` of a seeded random family.
#[pyfunction]
#[pyo3(signature = (eps, dim, lo, hi, seed = 7))]
fn random_brep(eps: f64, dim: usize, lo: i64, hi: i64, seed: u64) -> PyResult<Vec<Rows>> {
    let f = brep::random_brep(eps, dim, (lo, hi), seed).map_err(value_error)?;
    Ok(f.units().iter().map(|u| u.matrix().to_rows()).collect())
}

#[pyfunction]
fn op_norm(a: Rows) -> PyResult<f64> {
    softtorus::matcore::op_norm(&matrix(a)?).map_err(value_error)
}

#[pymodule]
pub fn softtorus_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Poly>()?;
    m.add_class::<Certificate>()?;
    m.add("NoWitnessFound", m.py().get_type::<NoWitnessFound>())?;
    m.add_function(wrap_pyfunction!(certify_poly, m)?)?;
    m.add_function(wrap_pyfunction!(verify_json, m)?)?;
    m.add_function(wrap_pyfunction!(halmos_dilate, m)?)?;
    m.add_function(wrap_pyfunction!(path_to_identity, m)?)?;
    m.add_function(wrap_pyfunction!(random_brep, m)?)?;
    m.add_function(wrap_pyfunction!(op_norm, m)?)?;
    Ok(())
}
