//! Python bindings: grids, fields, the ground-state solver, functionals,
//! orbit fitting, time evolution and snapshots.

use hwlab::evolution::{self, EvolutionConfig};
use hwlab::functionals::{self as fx, FunctionalReport};
use hwlab::snapshot::Snapshot;
use hwlab::solitary::{self, InitKind, SolverOptions};
use hwlab::{Complex64, Representation};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: hwlab::Error) -> PyErr {
    match e {
        hwlab::Error::InvalidParameter(_) | hwlab::Error::InvalidGrid(_) | hwlab::Error::GridMismatch => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

#[pyclass(name = "Grid", frozen)]
#[derive(Clone)]
struct PyGrid(hwlab::Grid);

#[pymethods]
impl PyGrid {
    #[new]
    fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> PyResult<Self> {
        hwlab::Grid::new(nx, ny, lx, ly).map(PyGrid).map_err(err)
    }

    #[getter]
    fn nx(&self) -> usize {
        self.0.nx()
    }

    #[getter]
    fn ny(&self) -> usize {
        self.0.ny()
    }

    #[getter]
    fn lx(&self) -> f64 {
        self.0.lx()
    }

    #[getter]
    fn ly(&self) -> f64 {
        self.0.ly()
    }

    fn xs(&self) -> Vec<f64> {
        self.0.xs()
    }

    fn ys(&self) -> Vec<f64> {
        self.0.ys()
    }

    fn __repr__(&self) -> String {
        format!("Grid({}, {}, {}, {})", self.0.nx(), self.0.ny(), self.0.lx(), self.0.ly())
    }
}

#[pyclass(name = "ModelParams", frozen)]
#[derive(Clone, Copy)]
struct PyParams(hwlab::ModelParams);

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (p, omega = 1.0, v = 0.0))]
    fn new(p: f64, omega: f64, v: f64) -> PyResult<Self> {
        hwlab::ModelParams::new(p, omega, v).map(PyParams).map_err(err)
    }

    #[getter]
    fn p(&self) -> f64 {
        self.0.p
    }

    #[getter]
    fn omega(&self) -> f64 {
        self.0.omega
    }

    #[getter]
    fn v(&self) -> f64 {
        self.0.v
    }

    fn __repr__(&self) -> String {
        format!("ModelParams(p={}, omega={}, v={})", self.0.p, self.0.omega, self.0.v)
    }
}

/// A complex field in physical representation.
#[pyclass(name = "Field")]
#[derive(Clone)]
struct PyField(hwlab::Field);

#[pymethods]
impl PyField {
    /// Row-major samples, x slow and y fast.
    #[new]
    fn new(grid: &PyGrid, values: Vec<Complex64>) -> PyResult<Self> {
        hwlab::Field::from_values(&grid.0, values, Representation::Physical)
            .map(PyField)
            .map_err(err)
    }

    #[staticmethod]
    fn zeros(grid: &PyGrid) -> Self {
        PyField(hwlab::Field::zeros(&grid.0))
    }

    #[getter]
    fn grid(&self) -> PyGrid {
        PyGrid(self.0.grid().clone())
    }

    fn values(&self) -> Vec<Complex64> {
        self.0.to_physical().into_values()
    }

    fn spectrum(&self) -> Vec<Complex64> {
        self.0.to_spectral().into_values()
    }

    fn l2_norm(&self) -> f64 {
        self.0.l2_norm()
    }

    fn translated(&self, tau1: f64, tau2: f64) -> Self {
        PyField(self.0.translated(tau1, tau2).into_physical())
    }

    fn __add__(&self, other: &PyField) -> PyResult<Self> {
        if self.0.grid() != other.0.grid() {
            return Err(err(hwlab::Error::GridMismatch));
        }
        Ok(PyField(&self.0 + &other.0))
    }

    fn __sub__(&self, other: &PyField) -> PyResult<Self> {
        if self.0.grid() != other.0.grid() {
            return Err(err(hwlab::Error::GridMismatch));
        }
        Ok(PyField(&self.0 - &other.0))
    }

    fn __mul__(&self, a: Complex64) -> Self {
        PyField(&self.0 * a)
    }

    fn __rmul__(&self, a: Complex64) -> Self {
        PyField(&self.0 * a)
    }

    fn __len__(&self) -> usize {
        self.0.grid().len()
    }
}

#[pyclass(name = "Solution", frozen)]
struct PySolution {
    #[pyo3(get)]
    q: PyField,
    #[pyo3(get)]
    action: f64,
    #[pyo3(get)]
    nehari_residual: f64,
    #[pyo3(get)]
    gradient_residual: f64,
    #[pyo3(get)]
    iterations: usize,
    #[pyo3(get)]
    tail_mass_fraction: f64,
}

fn init_kind(name: &str, seed: u64) -> PyResult<InitKind> {
    match name {
        "gaussian" => Ok(InitKind::default()),
        "sech" => Ok(InitKind::SechLorentzian { wx: 1.0, wy: 1.5 }),
        "random" => Ok(InitKind::Random { seed }),
        _ => Err(PyValueError::new_err(format!("unknown init kind '{name}'"))),
    }
}

/// Nehari-constrained action minimiser (standing or traveling wave).
#[pyfunction]
#[pyo3(signature = (params, grid, tol = 1e-9, max_iter = 2000, init = "gaussian", seed = 0))]
fn ground_state(
    py: Python<'_>,
    params: &PyParams,
    grid: &PyGrid,
    tol: f64,
    max_iter: usize,
    init: &str,
    seed: u64,
) -> PyResult<PySolution> {
    let kind = init_kind(init, seed)?;
    let options = SolverOptions {
        tol,
        max_iter,
        ..SolverOptions::default()
    };
    let (params, grid) = (params.0, grid.0.clone());
    let s = py
        .detach(move || {
            let guess = solitary::initial_guess(kind, &grid, &params);
            solitary::solve_nehari(&params, &guess, &options)
        })
        .map_err(err)?;
    Ok(PySolution {
        q: PyField(s.q),
        action: s.action_value,
        nehari_residual: s.nehari_residual,
        gradient_residual: s.gradient_residual,
        iterations: s.iterations,
        tail_mass_fraction: s.tail_mass_fraction,
    })
}

#[pyfunction]
fn functional_report<'py>(py: Python<'py>, u: &PyField, params: &PyParams) -> PyResult<Bound<'py, PyDict>> {
    let r = FunctionalReport::of(&u.0, &params.0);
    let d = PyDict::new(py);
    d.set_item("mass", r.mass)?;
    d.set_item("hamiltonian", r.hamiltonian)?;
    d.set_item("action", r.action)?;
    d.set_item("nehari", r.nehari)?;
    d.set_item("i_value", r.i_value)?;
    d.set_item("x_norm", r.x_norm)?;
    d.set_item("lp1_norm", r.lp1_norm)?;
    d.set_item("gn_quotient", r.gn_quotient)?;
    Ok(d)
}

#[pyfunction]
fn mass(u: &PyField) -> f64 {
    fx::mass(&u.0)
}

#[pyfunction]
fn hamiltonian(u: &PyField, p: f64) -> f64 {
    fx::hamiltonian(&u.0, p)
}

#[pyfunction]
fn action(u: &PyField, params: &PyParams) -> f64 {
    fx::action(&u.0, &params.0)
}

#[pyfunction]
fn x_norm(u: &PyField) -> f64 {
    fx::x_norm(&u.0)
}

#[pyfunction]
fn gn_quotient(u: &PyField, p: f64) -> PyResult<f64> {
    fx::gn_quotient(&u.0, p).map_err(err)
}

/// `(theta, tau1, tau2, distance)` minimising `‖u − e^{iθ}q(· + τ)‖_X`.
#[pyfunction]
fn orbital_fit(u: &PyField, q: &PyField) -> PyResult<(f64, f64, f64, f64)> {
    let f = solitary::orbital_fit(&u.0, &q.0).map_err(err)?;
    Ok((f.theta, f.tau1, f.tau2, f.distance))
}

#[pyfunction]
fn t_lambda(u: &PyField, lam: f64) -> PyResult<PyField> {
    solitary::t_lambda(&u.0, lam).map(PyField).map_err(err)
}

/// `(analytic, numeric)` second derivative of the action along `T_λ` at `λ = 1`.
#[pyfunction]
fn second_variation(q: &PyField, params: &PyParams) -> PyResult<(f64, f64)> {
    let s = solitary::second_variation_scaling(&q.0, &params.0).map_err(err)?;
    Ok((s.analytic, s.numeric))
}

/// Strang evolution of the focusing equation; returns a dict of sampled
/// series and the final state.
#[pyfunction]
#[pyo3(signature = (u0, p, t_final, dt, sample_stride = 1, reference = None))]
fn evolve<'py>(
    py: Python<'py>,
    u0: &PyField,
    p: f64,
    t_final: f64,
    dt: f64,
    sample_stride: usize,
    reference: Option<&PyField>,
) -> PyResult<Bound<'py, PyDict>> {
    let mut cfg = EvolutionConfig::new(p, t_final, dt).with_stride(sample_stride);
    if let Some(q) = reference {
        cfg = cfg.with_reference(q.0.clone());
    }
    let u0 = u0.0.clone();
    let trace = py.detach(move || evolution::evolve(&u0, &cfg)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("times", trace.times.clone())?;
    d.set_item("mass", trace.mass_series.clone())?;
    d.set_item("hamiltonian", trace.hamiltonian_series.clone())?;
    d.set_item("linf", trace.linf_series.clone())?;
    d.set_item("orbital_distance", trace.orbital_distance_series.clone())?;
    d.set_item("aborted", trace.aborted.map(|a| format!("{a:?}")))?;
    d.set_item("state", PyField(trace.state))?;
    Ok(d)
}

/// `(slope, sup_norms)` of the 1-D free Schrödinger flow of `g`.
#[pyfunction]
fn dispersive_decay(g: Vec<Complex64>, length: f64, times: Vec<f64>) -> PyResult<(f64, Vec<f64>)> {
    let fit = evolution::dispersive_decay_probe(&g, length, &times).map_err(err)?;
    Ok((fit.slope, fit.sup_norms))
}

#[pyfunction]
fn save_snapshot(path: &str, u: &PyField, params: &PyParams) -> PyResult<()> {
    Snapshot::new(u.0.clone(), params.0).save(path).map_err(err)
}

#[pyfunction]
fn load_snapshot(path: &str) -> PyResult<(PyField, PyParams)> {
    let s = Snapshot::load(path).map_err(err)?;
    Ok((PyField(s.field), PyParams(s.params)))
}

#[pymodule]
fn hwlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrid>()?;
    m.add_class::<PyParams>()?;
    m.add_class::<PyField>()?;
    m.add_class::<PySolution>()?;
    m.add_function(wrap_pyfunction!(ground_state, m)?)?;
    m.add_function(wrap_pyfunction!(functional_report, m)?)?;
    m.add_function(wrap_pyfunction!(mass, m)?)?;
    m.add_function(wrap_pyfunction!(hamiltonian, m)?)?;
    m.add_function(wrap_pyfunction!(action, m)?)?;
    m.add_function(wrap_pyfunction!(x_norm, m)?)?;
    m.add_function(wrap_pyfunction!(gn_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(orbital_fit, m)?)?;
    m.add_function(wrap_pyfunction!(t_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(second_variation, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(dispersive_decay, m)?)?;
    m.add_function(wrap_pyfunction!(save_snapshot, m)?)?;
    m.add_function(wrap_pyfunction!(load_snapshot, m)?)?;
    Ok(())
}
