//! Python bindings. Configs cross the boundary as JSON text, matrices as
//! nested lists of real and imaginary parts.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use qsync::linalg::CMatrix;
use qsync::ops::DensityMatrix;
use qsync::sweep::{emit, evaluate_measure, parse_config, run_sweep as core_run_sweep, SweepConfig};
use qsync::sync::{self, LimitCycleClass};

type Parts = (Vec<Vec<f64>>, Vec<Vec<f64>>);
type SteadyParts = (Vec<Vec<f64>>, Vec<Vec<f64>>, f64);

fn numerical(e: qsync::Error) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn config(text: &str) -> PyResult<SweepConfig> {
    parse_config(text.as_bytes()).map_err(|errs| {
        let lines: Vec<String> = errs.iter().map(|e| e.to_string()).collect();
        PyValueError::new_err(lines.join("\n"))
    })
}

fn split(m: &CMatrix) -> Parts {
    let rows = |f: fn(&Complex64) -> f64| (0..m.rows()).map(|i| m.row(i).iter().map(f).collect()).collect();
    (rows(|z| z.re), rows(|z| z.im))
}

fn density(re: Vec<Vec<f64>>, im: Vec<Vec<f64>>, dims: Vec<usize>) -> PyResult<DensityMatrix> {
    let d = re.len();
    if im.len() != d || re.iter().chain(&im).any(|r| r.len() != d) {
        return Err(PyValueError::new_err("re and im must both be square with the same shape"));
    }
    let m = CMatrix::from_fn(d, d, |i, j| Complex64::new(re[i][j], im[i][j]));
    DensityMatrix::new(m, dims).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn class(json: Option<&str>, dims: usize) -> PyResult<LimitCycleClass> {
    match json {
        Some(text) => serde_json::from_str(text).map_err(|e| PyValueError::new_err(format!("class: {e}"))),
        None if dims == 1 => Ok(LimitCycleClass::DiagonalCorrelated),
        None => Ok(LimitCycleClass::spin_pair_default()),
    }
}

/// Problems in a config document; empty when it is valid.
#[pyfunction]
fn validate_config(text: &str) -> Vec<String> {
    match parse_config(text.as_bytes()) {
        Ok(_) => Vec::new(),
        Err(errs) => errs.iter().map(|e| e.to_string()).collect(),
    }
}

/// Steady state of the configured model as `(re, im, residual)`.
#[pyfunction]
fn steady_state(text: &str) -> PyResult<SteadyParts> {
    let cfg = config(text)?;
    let ss = cfg.model.steady_state().map_err(numerical)?;
    let (re, im) = split(ss.rho.matrix());
    Ok((re, im, ss.residual))
}

/// Configured measures at the steady state, as `(column, value)` pairs.
#[pyfunction]
fn measure(text: &str) -> PyResult<Vec<(String, f64)>> {
    let cfg = config(text)?;
    let ss = cfg.model.steady_state().map_err(numerical)?;
    cfg.measures
        .iter()
        .map(|spec| {
            let v = evaluate_measure(&ss.rho, &cfg.model, spec, cfg.runtime.seed).map_err(numerical)?;
            Ok((spec.column(), v))
        })
        .collect()
}

/// Runs a sweep and returns the emitted document (CSV or JSON text).
#[pyfunction]
fn run_sweep(py: Python<'_>, text: &str) -> PyResult<String> {
    let cfg = config(text)?;
    let grid = py.detach(|| core_run_sweep(&cfg)).map_err(numerical)?;
    Ok(String::from_utf8(emit(&grid, cfg.output.format)).expect("emitters write UTF-8"))
}

/// Relative-entropy distance to the given limit-cycle class.
///
/// `class_json` is e.g. `{"class": "marginal_product"}`. Without it a single
/// site uses the diagonal class and two sites the partially coherent product
/// on the driven spin-1 pair.
#[pyfunction]
#[pyo3(signature = (re, im, dims, class_json = None))]
fn omega_r(re: Vec<Vec<f64>>, im: Vec<Vec<f64>>, dims: Vec<usize>, class_json: Option<&str>) -> PyResult<f64> {
    let n = dims.len();
    let rho = density(re, im, dims)?;
    let c = class(class_json, n)?;
    Ok(sync::omega_r(&rho, &c).map_err(numerical)?.value)
}

/// Trace-distance counterpart of [`omega_r`].
#[pyfunction]
#[pyo3(signature = (re, im, dims, class_json = None))]
fn omega_d(re: Vec<Vec<f64>>, im: Vec<Vec<f64>>, dims: Vec<usize>, class_json: Option<&str>) -> PyResult<f64> {
    let n = dims.len();
    let rho = density(re, im, dims)?;
    let c = class(class_json, n)?;
    Ok(sync::omega_d(&rho, &c).map_err(numerical)?.value)
}

#[pymodule(name = "qsync")]
fn qsync_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(validate_config, m)?)?;
    m.add_function(wrap_pyfunction!(steady_state, m)?)?;
    m.add_function(wrap_pyfunction!(measure, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(omega_r, m)?)?;
    m.add_function(wrap_pyfunction!(omega_d, m)?)?;
    Ok(())
}
