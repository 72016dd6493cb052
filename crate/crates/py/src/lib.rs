//! Python bindings for the ratio-bounds library: the closed-form bound
//! families, best enclosures, validity tables, the recurrence machinery and
//! the high-precision oracle.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ratio_bounds::bound::Side;
use ratio_bounds::bounds_i::{self, IBoundSpec, IFamily};
use ratio_bounds::bounds_k::{self, KBoundSpec, KFamily};
use ratio_bounds::cf::{self, TailPolicy};
use ratio_bounds::oracle::{self, PrecisionConfig};
use ratio_bounds::riccati::{self, Branch, CoefficientSet};
use ratio_bounds::Error;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Domain(_) | Error::Validity(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn parse_side(side: &str) -> PyResult<Side> {
    match side {
        "lower" => Ok(Side::Lower),
        "upper" => Ok(Side::Upper),
        other => Err(PyValueError::new_err(format!(
            "side must be 'lower' or 'upper', got '{other}'"
        ))),
    }
}

/// A lower/upper pair with family tags.
#[pyclass(frozen, name = "Enclosure")]
struct PyEnclosure {
    #[pyo3(get)]
    lower: f64,
    #[pyo3(get)]
    upper: f64,
    #[pyo3(get)]
    lower_family: String,
    #[pyo3(get)]
    upper_family: String,
}

#[pymethods]
impl PyEnclosure {
    #[getter]
    fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Relative gap upper/lower - 1.
    #[getter]
    fn gap(&self) -> f64 {
        self.upper / self.lower - 1.0
    }

    fn __repr__(&self) -> String {
        format!(
            "Enclosure(lower={:.17e} [{}], upper={:.17e} [{}])",
            self.lower, self.lower_family, self.upper, self.upper_family
        )
    }
}

impl<S> From<ratio_bounds::Enclosure<S>> for PyEnclosure {
    fn from(e: ratio_bounds::Enclosure<S>) -> Self {
        PyEnclosure {
            lower: e.lower.value,
            upper: e.upper.value,
            lower_family: e.lower.label,
            upper_family: e.upper.label,
        }
    }
}

/// b-family bound x/(lam + sqrt(lam^2 + x^2)), lam = nu + (alpha-1)/2.
#[pyfunction]
fn b_alpha(nu: f64, alpha: f64, x: f64) -> PyResult<f64> {
    bounds_i::b_alpha(nu, alpha, x).map_err(to_py_err)
}

/// B-family bound (first iteration of the root construction).
#[pyfunction]
fn big_b_alpha(nu: f64, alpha: f64, x: f64) -> PyResult<f64> {
    bounds_i::big_b_alpha(nu, alpha, x).map_err(to_py_err)
}

/// Btilde-family bound (recurrence-mapped B family).
#[pyfunction]
fn big_b_tilde_alpha(nu: f64, alpha: f64, x: f64) -> PyResult<f64> {
    bounds_i::big_b_tilde_alpha(nu, alpha, x).map_err(to_py_err)
}

/// d-family bound x/(tau + sqrt(tau^2 + x^2)), tau = nu - (alpha+1)/2.
#[pyfunction]
fn d_alpha(nu: f64, alpha: f64, x: f64) -> PyResult<f64> {
    bounds_k::d_alpha(nu, alpha, x).map_err(to_py_err)
}

/// D-family bound (first iteration on the K side).
#[pyfunction]
fn big_d_alpha(nu: f64, alpha: f64, x: f64) -> PyResult<f64> {
    bounds_k::big_d_alpha(nu, alpha, x).map_err(to_py_err)
}

/// The recurrence-refined pair (lower, upper) for the I-side ratio.
#[pyfunction]
fn cf1_bounds(nu: f64, x: f64) -> PyResult<(f64, f64)> {
    let e = bounds_i::cf1_bounds(nu, x).map_err(to_py_err)?;
    Ok((e.lower.value, e.upper.value))
}

/// Validity verdict (valid, reason) for an I-side request;
/// family is one of 'b', 'cf1', 'B', 'Btilde'.
#[pyfunction]
fn validity_i(family: &str, alpha: f64, side: &str, nu: f64) -> PyResult<(bool, String)> {
    let fam = match family {
        "b" => IFamily::Root,
        "cf1" => IFamily::Cf1,
        "B" => IFamily::Iterated,
        "Btilde" => IFamily::Mapped,
        other => return Err(PyValueError::new_err(format!("unknown I family '{other}'"))),
    };
    let v = bounds_i::validity_i(&IBoundSpec::new(fam, alpha, parse_side(side)?), nu);
    Ok((v.valid, v.reason.to_string()))
}

/// Validity verdict (valid, reason) for a K-side request;
/// family is 'd' or 'D'.
#[pyfunction]
fn validity_k(family: &str, alpha: f64, side: &str, nu: f64) -> PyResult<(bool, String)> {
    let fam = match family {
        "d" => KFamily::Root,
        "D" => KFamily::Iterated,
        other => return Err(PyValueError::new_err(format!("unknown K family '{other}'"))),
    };
    let v = bounds_k::validity_k(&KBoundSpec::new(fam, alpha, parse_side(side)?), nu);
    Ok((v.valid, v.reason.to_string()))
}

/// Best proven enclosure of I_nu(x)/I_(nu-1)(x) at the given level (0..=2).
#[pyfunction]
#[pyo3(signature = (nu, x, level = 1))]
fn enclose_i(nu: f64, x: f64, level: u8) -> PyResult<PyEnclosure> {
    bounds_i::enclosure_i(nu, x, level)
        .map(Into::into)
        .map_err(to_py_err)
}

/// Best proven enclosure of K_(nu-1)(x)/K_nu(x) at the given level (0..=1).
#[pyfunction]
#[pyo3(signature = (nu, x, level = 1))]
fn enclose_k(nu: f64, x: f64, level: u8) -> PyResult<PyEnclosure> {
    bounds_k::enclosure_k(nu, x, level)
        .map(Into::into)
        .map_err(to_py_err)
}

/// High-precision reference value of I_nu(x)/I_(nu-1)(x).
#[pyfunction]
#[pyo3(signature = (nu, x, digits = 50))]
fn oracle_ratio_i(nu: f64, x: f64, digits: u32) -> PyResult<f64> {
    let cfg = PrecisionConfig::with_digits(digits);
    Ok(oracle::oracle_ratio_i(nu, x, &cfg)
        .map_err(to_py_err)?
        .value
        .to_f64())
}

/// High-precision reference value of K_(nu-1)(x)/K_nu(x).
#[pyfunction]
#[pyo3(signature = (nu, x, digits = 50))]
fn oracle_ratio_k(nu: f64, x: f64, digits: u32) -> PyResult<f64> {
    let cfg = PrecisionConfig::with_digits(digits);
    Ok(oracle::oracle_ratio_k(nu, x, &cfg)
        .map_err(to_py_err)?
        .value
        .to_f64())
}

/// Tail-bracketed evaluation of the I-side ratio; returns (value, iterations).
/// policy is one of 'zero', 'b', 'B'.
#[pyfunction]
#[pyo3(signature = (nu, x, tol = 1e-12, policy = "B"))]
fn evaluate_ratio_i(nu: f64, x: f64, tol: f64, policy: &str) -> PyResult<(f64, usize)> {
    let p = match policy {
        "zero" => TailPolicy::Zero,
        "b" => TailPolicy::RootPair,
        "B" => TailPolicy::IteratedPair,
        other => return Err(PyValueError::new_err(format!("unknown policy '{other}'"))),
    };
    let run = cf::evaluate_ratio_i(nu, x, tol, p).map_err(to_py_err)?;
    Ok((run.value, run.iterations))
}

/// Zero-tail approximant of the continued fraction at the given depth.
#[pyfunction]
fn cf_approximant(nu: f64, x: f64, depth: usize) -> PyResult<f64> {
    cf::cf_approximant(nu, x, depth).map_err(to_py_err)
}

/// One application of the I-side recurrence map t -> 1/(2 nu/x + t).
#[pyfunction]
fn cf_map_i(nu: f64, x: f64, t: f64) -> PyResult<f64> {
    cf::cf_map_i(nu, x, t).map_err(to_py_err)
}

/// One application of the K-side recurrence map (experimental; output is
/// not certified as a bound).
#[pyfunction]
fn cf_map_k(nu: f64, x: f64, t: f64) -> PyResult<f64> {
    cf::cf_map_k(nu, x, t).map_err(to_py_err)
}

/// Runs the generic root-iteration engine on the I or K coefficient set;
/// returns (beta_n, eta_n) with the all-positive branch chain.
#[pyfunction]
fn riccati_iterate(kind: &str, nu: f64, alpha: f64, n: usize, x: f64) -> PyResult<(f64, f64)> {
    let coeffs = match kind {
        "I" | "i" => CoefficientSet::bessel_i(nu, alpha),
        "K" | "k" => CoefficientSet::bessel_k(nu, alpha),
        other => {
            return Err(PyValueError::new_err(format!(
                "kind must be 'I' or 'K', got '{other}'"
            )))
        }
    };
    riccati::iterate(&coeffs, n, &vec![Branch::Plus; n + 1], x).map_err(to_py_err)
}

#[pymodule]
fn ratio_bounds_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEnclosure>()?;
    m.add_function(wrap_pyfunction!(b_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(big_b_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(big_b_tilde_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(d_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(big_d_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(cf1_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(validity_i, m)?)?;
    m.add_function(wrap_pyfunction!(validity_k, m)?)?;
    m.add_function(wrap_pyfunction!(enclose_i, m)?)?;
    m.add_function(wrap_pyfunction!(enclose_k, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_ratio_i, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_ratio_k, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_ratio_i, m)?)?;
    m.add_function(wrap_pyfunction!(cf_approximant, m)?)?;
    m.add_function(wrap_pyfunction!(cf_map_i, m)?)?;
    m.add_function(wrap_pyfunction!(cf_map_k, m)?)?;
    m.add_function(wrap_pyfunction!(riccati_iterate, m)?)?;
    Ok(())
}
