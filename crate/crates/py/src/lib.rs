use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tlab::dynamics::{default_grid, log_grid, propagate as propagate_mode, spectrum as mode_spectrum};
use tlab::envelope::{predict_rates as rates, HighBranch};
use tlab::fullline::{default_times, verify_theorem_bound, InitialDatum, Profile};
use tlab::lyapunov::certify as certify_cfg;
use tlab::model::{parse_config, Coupling, Damping, ModeState, SystemConfig, Tau, Vec8};

fn err(e: tlab::Error) -> PyErr {
    match e {
        tlab::Error::ConfigParse { .. } | tlab::Error::InvalidConfig(_) | tlab::Error::Range(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// System constants and variant selection.
#[pyclass(name = "Config", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyConfig {
    inner: SystemConfig,
}

#[pymethods]
impl PyConfig {
    #[new]
    #[pyo3(signature = (k, gamma, tau, damping, coupling = "first"))]
    fn new(k: [f64; 5], gamma: f64, tau: u8, damping: &str, coupling: &str) -> PyResult<Self> {
        let tau = Tau::from_index(tau).ok_or_else(|| PyValueError::new_err("tau must be 1, 2 or 3"))?;
        let damping = match damping {
            "type3" => Damping::TypeIII,
            "frictional" => Damping::Frictional,
            _ => return Err(PyValueError::new_err("damping must be type3 or frictional")),
        };
        let coupling = match coupling {
            "first" => Coupling::FirstOrder,
            "zero" => Coupling::ZeroOrder,
            _ => return Err(PyValueError::new_err("coupling must be first or zero")),
        };
        let inner = SystemConfig::new(k, gamma, tau, damping, coupling).map_err(err)?;
        Ok(PyConfig { inner })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyConfig { inner: parse_config(text).map_err(err)? })
    }

    #[getter]
    fn case(&self) -> String {
        self.inner.case_label()
    }

    #[getter]
    fn cell(&self) -> &'static str {
        self.inner.cell_name()
    }

    #[getter]
    fn chi(&self) -> f64 {
        self.inner.chi()
    }

    #[getter]
    fn stable(&self) -> bool {
        self.inner.is_stable()
    }

    fn __repr__(&self) -> String {
        format!(
            "Config({} {} k={:?} gamma={})",
            self.inner.case_label(),
            self.inner.variant_label(),
            self.inner.k,
            self.inner.gamma
        )
    }
}

/// Eigenvalues of the mode generator at `xi`.
#[pyfunction]
fn spectrum(cfg: &PyConfig, xi: f64) -> PyResult<Vec<Complex64>> {
    Ok(mode_spectrum(&cfg.inner, xi).map_err(err)?.eigenvalues.to_vec())
}

#[pyfunction]
fn abscissa(cfg: &PyConfig, xi: f64) -> PyResult<f64> {
    Ok(mode_spectrum(&cfg.inner, xi).map_err(err)?.abscissa)
}

/// Mode amplitudes at time `t` from `state` (eight complex numbers).
#[pyfunction]
fn propagate(cfg: &PyConfig, xi: f64, state: Vec<Complex64>, t: f64) -> PyResult<Vec<Complex64>> {
    if state.len() != 8 {
        return Err(PyValueError::new_err("state must have eight components"));
    }
    let s0 = ModeState::new(Vec8::from_column_slice(&state), xi);
    Ok(propagate_mode(&cfg.inner, xi, &s0, t).map_err(err)?.amps.iter().copied().collect())
}

#[pyfunction]
#[pyo3(signature = (cfg, xi_min = None, xi_max = None, per_decade = None))]
fn certify<'py>(
    py: Python<'py>,
    cfg: &PyConfig,
    xi_min: Option<f64>,
    xi_max: Option<f64>,
    per_decade: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let grid = match (xi_min, xi_max, per_decade) {
        (None, None, None) => default_grid(),
        _ => log_grid(xi_min.unwrap_or(1e-2), xi_max.unwrap_or(1e2), per_decade.unwrap_or(200), true).map_err(err)?,
    };
    let cert = py.detach(|| certify_cfg(&cfg.inner, &grid)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("case", cert.case)?;
    d.set_item("variant", cert.variant)?;
    d.set_item("big_lambda", cert.big_lambda)?;
    d.set_item("c", cert.c)?;
    d.set_item("c_tilde", cert.c_tilde)?;
    d.set_item("c1", cert.c1)?;
    d.set_item("c3", cert.c3)?;
    d.set_item("c4", cert.c4)?;
    d.set_item("worst_xi", cert.worst_xi)?;
    Ok(d)
}

fn branch_label(b: Option<HighBranch>) -> Option<String> {
    b.map(|b| match b {
        HighBranch::Exponential => "exponential".to_string(),
        HighBranch::Polynomial(r) => r.to_string(),
    })
}

/// Decay exponents as exact fraction strings.
#[pyfunction]
#[pyo3(signature = (cfg, j = 0, ell = 1))]
fn predict_rates<'py>(py: Python<'py>, cfg: &PyConfig, j: u32, ell: u32) -> PyResult<Bound<'py, PyDict>> {
    let p = rates(&cfg.inner, j, ell);
    let d = PyDict::new(py);
    d.set_item("stable", p.stable)?;
    d.set_item("low_exponent", p.low_exponent.map(|r| r.to_string()))?;
    d.set_item("high_branch", branch_label(p.high_branch))?;
    d.set_item("regularity_loss", p.regularity_loss)?;
    Ok(d)
}

/// Whole-line decay of a Gaussian datum against the predicted bound.
#[pyfunction]
#[pyo3(signature = (cfg, j = 0, ell = 1, times = 31, width = 1.0))]
fn decay_report<'py>(
    py: Python<'py>,
    cfg: &PyConfig,
    j: u32,
    ell: u32,
    times: usize,
    width: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let datum = InitialDatum::uniform(Profile::Gaussian { amplitude: 1.0, width }).map_err(err)?;
    let rep = py.detach(|| verify_theorem_bound(&cfg.inner, &datum, j, ell, &default_times(times))).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("c0", rep.c0)?;
    d.set_item("tail_slope", rep.tail_slope)?;
    d.set_item("ratio_slope", rep.ratio_slope)?;
    d.set_item("predicted_low", rep.predicted_low)?;
    d.set_item("high_branch", rep.high_branch)?;
    d.set_item("pass", rep.pass)?;
    d.set_item("t", rep.rows.iter().map(|r| r.t).collect::<Vec<_>>())?;
    d.set_item("norm", rep.rows.iter().map(|r| r.norm).collect::<Vec<_>>())?;
    Ok(d)
}

#[pymodule]
fn tlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyConfig>()?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(abscissa, m)?)?;
    m.add_function(wrap_pyfunction!(propagate, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(predict_rates, m)?)?;
    m.add_function(wrap_pyfunction!(decay_report, m)?)?;
    Ok(())
}
