//! Python bindings for `alexinv`.
//!
//! Structured results are returned as plain dicts and lists; exact
//! rationals and cyclotomic values are rendered as strings.

use pyo3::exceptions::{PyMemoryError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use alexinv::alex_module::{chen_check, truncated_cokernel, nabla_bar};
use alexinv::budget::Budget;
use alexinv::cli::{bb_dims, BbMethod};
use alexinv::fox_alex::{self, Character, TwistedHomology};
use alexinv::free_lie::{lyndon_basis, witt_number};
use alexinv::johnson::{self, JohnsonData};
use alexinv::nilpotent_transport::{self, FinDimLaurentModule};
use alexinv::{quad_lie, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded { .. } => PyMemoryError::new_err(e.to_string()),
        Error::Inconsistent(_) | Error::EigenvalueCollision { .. } | Error::MultiplicityTooHigh { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        e => PyValueError::new_err(e.to_string()),
    }
}

fn budget() -> PyResult<Budget> {
    Budget::from_env().map_err(to_py)
}

fn pyobj<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Quadratic presentation `(V, R)` with `R ⊆ ∧²V`.
#[pyclass(name = "LiePresentation", frozen)]
struct PyLiePresentation(quad_lie::LiePresentation);

#[pymethods]
impl PyLiePresentation {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        quad_lie::LiePresentation::from_json(text).map(PyLiePresentation).map_err(to_py)
    }

    #[staticmethod]
    fn free(n: usize) -> Self {
        PyLiePresentation(quad_lie::LiePresentation::free(n))
    }

    #[staticmethod]
    fn abelian(n: usize) -> Self {
        PyLiePresentation(quad_lie::LiePresentation::abelian(n))
    }

    #[getter]
    fn dim_v(&self) -> usize {
        self.0.dim_v()
    }

    #[getter]
    fn num_relations(&self) -> usize {
        self.0.relations().len()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    /// Degree-wise dimensions of the infinitesimal Alexander invariant.
    #[pyo3(signature = (max_degree, method = "nabla-bar"))]
    fn bb_dims(&self, max_degree: usize, method: &str) -> PyResult<Vec<usize>> {
        let m = match method {
            "nabla" => BbMethod::Nabla,
            "nabla-bar" => BbMethod::NablaBar,
            "direct" => BbMethod::Direct,
            other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
        };
        Ok(bb_dims(&self.0, max_degree, m, &budget()?).map_err(to_py)?.dims)
    }

    /// Graded dimensions of the Lie algebra in degrees `1..=max_degree`.
    fn graded_dims(&self, max_degree: usize) -> Vec<usize> {
        quad_lie::graded_dims(&self.0, max_degree).dims
    }

    /// Annihilator exponent comparison on the truncated cokernel.
    fn exponent_match<'py>(&self, py: Python<'py>, max_degree: usize) -> PyResult<Bound<'py, PyAny>> {
        let c = truncated_cokernel(&nabla_bar(&self.0), max_degree);
        let m = nilpotent_transport::laurent_module_of(&c).map_err(to_py)?;
        pyobj(py, &nilpotent_transport::annihilator_exponent_match(&m, &c.dims).map_err(to_py)?)
    }

    fn __repr__(&self) -> String {
        format!("LiePresentation(dim_v={}, relations={})", self.0.dim_v(), self.0.relations().len())
    }
}

/// Finitely presented group.
#[pyclass(name = "GroupPresentation", frozen)]
struct PyGroupPresentation(fox_alex::GroupPresentation);

fn character(s: &str) -> PyResult<Character> {
    s.parse().map_err(to_py)
}

#[pymethods]
impl PyGroupPresentation {
    #[new]
    fn new(generators: usize, relators: Vec<Vec<i32>>) -> PyResult<Self> {
        fox_alex::GroupPresentation::new(generators, relators).map(PyGroupPresentation).map_err(to_py)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        fox_alex::GroupPresentation::from_json(text).map(PyGroupPresentation).map_err(to_py)
    }

    #[staticmethod]
    fn free(n: usize) -> Self {
        PyGroupPresentation(fox_alex::GroupPresentation::free(n))
    }

    #[staticmethod]
    fn free_abelian(n: usize) -> Self {
        PyGroupPresentation(fox_alex::GroupPresentation::free_abelian(n))
    }

    #[getter]
    fn generators(&self) -> usize {
        self.0.num_generators()
    }

    #[getter]
    fn relators(&self) -> Vec<Vec<i32>> {
        self.0.relators().to_vec()
    }

    fn normalized(&self) -> Self {
        PyGroupPresentation(self.0.normalized())
    }

    fn alexander_matrix(&self) -> Vec<Vec<String>> {
        fox_alex::alexander_matrix(&self.0).to_strings()
    }

    /// `dim H_1(G, C_ρ)` for a character given as `"v1,v2,..."`.
    fn twisted_h1_dim(&self, rho: &str) -> PyResult<usize> {
        fox_alex::twisted_h1_dim(&self.0, &character(rho)?).map_err(to_py)
    }

    #[pyo3(signature = (rho, depth = 1, restricted = false))]
    fn cv_membership(&self, rho: &str, depth: usize, restricted: bool) -> PyResult<bool> {
        let rho = character(rho)?;
        if restricted {
            fox_alex::cv_membership_restricted(&self.0, &rho, depth)
        } else {
            fox_alex::cv_membership(&self.0, &rho, depth)
        }
        .map_err(to_py)
    }

    #[pyo3(signature = (m, depth = 1, restricted = false))]
    fn torsion_sweep(&self, m: u64, depth: usize, restricted: bool) -> PyResult<Vec<Vec<String>>> {
        let found = fox_alex::torsion_sweep_within(&self.0, m, depth, restricted, &budget()?).map_err(to_py)?;
        Ok(found.iter().map(|c| c.values().iter().map(ToString::to_string).collect()).collect())
    }

    fn generic_h1_dim(&self) -> PyResult<usize> {
        TwistedHomology::new(&self.0).generic_h1_dim().map_err(to_py)
    }

    fn __repr__(&self) -> String {
        self.0.to_json()
    }
}

/// `∂w/∂x_j` as a map from reduced words to rational strings.
#[pyfunction]
fn fox_derivative(word: Vec<i32>, j: usize) -> Vec<(Vec<i32>, String)> {
    fox_alex::fox_derivative(&word, j).terms().iter().map(|(w, c)| (w.clone(), c.to_string())).collect()
}

/// Finite-dimensional module with commuting invertible actions.
#[pyclass(name = "LaurentModule", frozen)]
struct PyLaurentModule(FinDimLaurentModule);

#[pymethods]
impl PyLaurentModule {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        FinDimLaurentModule::from_json(text).map(PyLaurentModule).map_err(to_py)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn is_nilpotent<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        pyobj(py, &nilpotent_transport::is_nilpotent(&self.0))
    }

    /// The logarithms `X_i` as dense matrices of rational strings.
    fn log_transport(&self) -> PyResult<Vec<Vec<Vec<String>>>> {
        let x = nilpotent_transport::log_transport(&self.0).map_err(to_py)?;
        Ok(x.actions().iter().map(|m| m.to_dense().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()).collect())
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }
}

#[pyfunction]
fn witt(n: usize, q: usize) -> (usize, u64) {
    (lyndon_basis(n, q).len(), witt_number(n as u64, q as u64))
}

#[pyfunction]
fn chen<'py>(py: Python<'py>, n: usize, q: usize) -> PyResult<Bound<'py, PyAny>> {
    pyobj(py, &chen_check(n, q, &budget()?).map_err(to_py)?)
}

#[pyfunction]
#[pyo3(signature = (genus, max_degree, allow_large = false))]
fn johnson_module_dims<'py>(py: Python<'py>, genus: usize, max_degree: usize, allow_large: bool) -> PyResult<Bound<'py, PyAny>> {
    johnson::check_scale(genus, Some(max_degree), allow_large).map_err(to_py)?;
    let b = budget()?;
    let report = py
        .detach(|| JohnsonData::new(genus, &b).and_then(|d| johnson::johnson_report_with(&d, max_degree, &b)))
        .map_err(to_py)?;
    pyobj(py, &report)
}

#[pyfunction]
#[pyo3(signature = (genus, allow_large = false))]
fn decompose<'py>(py: Python<'py>, genus: usize, allow_large: bool) -> PyResult<Bound<'py, PyAny>> {
    johnson::check_scale(genus, None, allow_large).map_err(to_py)?;
    let b = budget()?;
    let d = py.detach(|| JohnsonData::new(genus, &b).and_then(|d| johnson::decompose_with(&d))).map_err(to_py)?;
    pyobj(py, &d)
}

/// Runs the command line front end; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let out = alexinv::cli::run(std::iter::once("alexinv".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
fn alexinv_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLiePresentation>()?;
    m.add_class::<PyGroupPresentation>()?;
    m.add_class::<PyLaurentModule>()?;
    m.add_function(wrap_pyfunction!(fox_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(witt, m)?)?;
    m.add_function(wrap_pyfunction!(chen, m)?)?;
    m.add_function(wrap_pyfunction!(johnson_module_dims, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
