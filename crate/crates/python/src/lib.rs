//! Python bindings: `import dessin`.
//!
//! Partitions are accepted as text ("2,1") or sequences of ints; exact values come
//! back as `fractions.Fraction`, polynomials as canonical text.

use std::collections::BTreeMap;

use dessin_core::algebra::Rational;
use dessin_core::characters::{hook_content_eval, mn_character, CharCache};
use dessin_core::cutjoin::{a_coeffs_closed, z_direct, z_flow};
use dessin_core::hurwitz::{connected_series, disconnected_series, n_bullet, n_circ, RamificationProfile};
use dessin_core::kp::{affine_coords, one_point_closed, two_point_closed, zhou_coefficient, zhou_npoint};
use dessin_core::oracle::Oracle;
use dessin_core::partition::{partitions_of, Partition};
use dessin_core::polyfit::{conjecture_fit, stanley_fit, ConjectureSpec, CorrelatorRoute};
use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;
use serde_json::Value;

create_exception!(dessin, DessinError, PyValueError, "Invalid input or exceeded size limit.");

fn err(e: dessin_core::Error) -> PyErr {
    DessinError::new_err(format!("[{}] {e}", e.kind()))
}

#[derive(FromPyObject)]
enum PartitionArg {
    Text(String),
    Parts(Vec<usize>),
}

impl PartitionArg {
    fn get(self) -> PyResult<Partition> {
        match self {
            PartitionArg::Text(s) => s.parse().map_err(err),
            PartitionArg::Parts(v) => Partition::new(v).map_err(err),
        }
    }
}

fn exps(k: &[usize]) -> Vec<u32> {
    k.iter().map(|&x| x as u32).collect()
}

fn json_to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_bound_py_any(py)?,
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_bound_py_any(py)?,
            None => n.as_f64().unwrap_or(f64::NAN).into_bound_py_any(py)?,
        },
        Value::String(s) => s.into_bound_py_any(py)?,
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, json_to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

/// All partitions of `d` as lists, largest first part first.
#[pyfunction]
fn partitions(d: usize) -> Vec<Vec<usize>> {
    partitions_of(d, None).into_iter().map(|p| p.parts().to_vec()).collect()
}

/// χ^λ evaluated on the class of cycle type μ.
#[pyfunction]
fn character(lam: PartitionArg, mu: PartitionArg) -> PyResult<i64> {
    mn_character(&lam.get()?, &mu.get()?).map_err(err)
}

#[pyfunction]
fn z_factor(mu: PartitionArg) -> PyResult<BigInt> {
    Ok(mu.get()?.z_factor())
}

/// `(1/d!)·#tuples` for a "|"-separated profile list, by brute force.
#[pyfunction]
#[pyo3(signature = (profiles, connected=false))]
fn oracle(profiles: &str, connected: bool) -> PyResult<Rational> {
    let rp: RamificationProfile = profiles.parse().map_err(err)?;
    let count = Oracle::default().count(&rp).map_err(err)?;
    Ok(if connected { count.connected() } else { count.disconnected() })
}

/// Disconnected correlator N•_k(μ).
#[pyfunction]
fn correlator(r: usize, k: Vec<usize>, mu: PartitionArg) -> PyResult<Rational> {
    n_bullet(r, &k, &mu.get()?, &CharCache::in_memory()).map_err(err)
}

/// Connected correlator N°_k(μ); route "zhou" or "log".
#[pyfunction]
#[pyo3(signature = (r, k, mu, route="zhou"))]
fn connected_correlator(r: usize, k: Vec<usize>, mu: PartitionArg, route: &str) -> PyResult<Rational> {
    let mu = mu.get()?;
    if k.len() != r {
        return Err(DessinError::new_err(format!("expected {r} counts k, got {}", k.len())));
    }
    match route {
        "zhou" => zhou_coefficient(&mu, &exps(&k)).map_err(err),
        "log" => n_circ(r, &k, &mu, &CharCache::in_memory()).map_err(err),
        other => Err(DessinError::new_err(format!("unknown route {other:?}"))),
    }
}

/// Σ_k N_k(μ) v^k as text; `connected` selects the Zhou formula, otherwise the Burnside series.
#[pyfunction]
#[pyo3(signature = (r, mu, connected=true))]
fn generating(r: usize, mu: PartitionArg, connected: bool) -> PyResult<String> {
    let mu = mu.get()?;
    let d = mu.size();
    let poly = if connected {
        zhou_npoint(&mu, &affine_coords(r, d)).map_err(err)?
    } else {
        disconnected_series(r, d, &CharCache::in_memory()).map_err(err)?.coeff(&mu)
    };
    Ok(poly.to_text())
}

/// `{partition text: coefficient text}` of Z_(r) (or log Z) through degree D.
#[pyfunction]
#[pyo3(signature = (r, degree, basis="powersum", connected=false))]
fn partition_function(r: usize, degree: usize, basis: &str, connected: bool) -> PyResult<BTreeMap<String, String>> {
    let cache = CharCache::in_memory();
    let series = match (basis, connected) {
        ("powersum", false) => disconnected_series(r, degree, &cache).map_err(err)?,
        ("powersum", true) => connected_series(r, degree, &cache).map_err(err)?,
        ("schur", false) => z_direct(r, degree),
        _ => return Err(DessinError::new_err(format!("unsupported basis {basis:?} (connected={connected})"))),
    };
    Ok(series.terms().map(|(p, c)| (p.to_text(), c.to_text())).collect())
}

/// The coefficients a_1..a_{r+1} of the cut-and-join operator, as text.
#[pyfunction]
fn a_coeffs(r: usize) -> PyResult<Vec<String>> {
    if r == 0 {
        return Err(DessinError::new_err("r must be at least 1"));
    }
    let spec = a_coeffs_closed(r);
    Ok((1..=r + 1).map(|k| spec.a(k).to_text()).collect())
}

/// True when the cut-and-join flow reproduces the direct Schur expansion through degree D.
#[pyfunction]
fn check_cutjoin(r: usize, degree: usize) -> bool {
    z_flow(r, degree) == z_direct(r, degree)
}

#[pyfunction]
#[pyo3(signature = (mu, r=1))]
fn hook_content(mu: PartitionArg, r: usize) -> PyResult<String> {
    Ok(hook_content_eval(&mu.get()?, r, 0).value().to_text())
}

#[pyfunction]
fn one_point(n: usize, r: usize) -> PyResult<String> {
    if n == 0 {
        return Err(DessinError::new_err("n must be positive"));
    }
    Ok(one_point_closed(n, r).to_text())
}

#[pyfunction]
fn two_point(n1: usize, n2: usize, r: usize) -> PyResult<String> {
    if n2 == 0 || n1 < n2 {
        return Err(DessinError::new_err("need n1 >= n2 >= 1"));
    }
    Ok(two_point_closed(n1, n2, r).to_text())
}

/// Stanley-type fit report as a dict.
#[pyfunction]
#[pyo3(signature = (r, lam, mu, samples=None, holdout=2))]
fn fit_stanley<'py>(
    py: Python<'py>,
    r: usize,
    lam: PartitionArg,
    mu: PartitionArg,
    samples: Option<usize>,
    holdout: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let rep = stanley_fit(r, &lam.get()?, &mu.get()?, samples, holdout, &CharCache::in_memory()).map_err(err)?;
    json_to_py(py, &rep.to_json())
}

/// Conjecture fit report as a dict.
#[pyfunction]
#[pyo3(signature = (r, k, length=1, holdout=2, max_degree=12, max_weight=None, route="zhou"))]
#[allow(clippy::too_many_arguments)]
fn fit_conjecture<'py>(
    py: Python<'py>,
    r: usize,
    k: Vec<usize>,
    length: usize,
    holdout: usize,
    max_degree: usize,
    max_weight: Option<usize>,
    route: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let route = match route {
        "zhou" => CorrelatorRoute::Zhou,
        "log" => CorrelatorRoute::Log,
        other => return Err(DessinError::new_err(format!("unknown route {other:?}"))),
    };
    let spec = ConjectureSpec {
        start: None,
        holdout,
        max_degree,
        max_weight,
        route,
    };
    let rep = conjecture_fit(r, &k, length, &spec, &CharCache::in_memory()).map_err(err)?;
    json_to_py(py, &rep.to_json())
}

#[pymodule]
fn dessin(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DessinError", m.py().get_type::<DessinError>())?;
    m.add_function(wrap_pyfunction!(partitions, m)?)?;
    m.add_function(wrap_pyfunction!(character, m)?)?;
    m.add_function(wrap_pyfunction!(z_factor, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(correlator, m)?)?;
    m.add_function(wrap_pyfunction!(connected_correlator, m)?)?;
    m.add_function(wrap_pyfunction!(generating, m)?)?;
    m.add_function(wrap_pyfunction!(partition_function, m)?)?;
    m.add_function(wrap_pyfunction!(a_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(check_cutjoin, m)?)?;
    m.add_function(wrap_pyfunction!(hook_content, m)?)?;
    m.add_function(wrap_pyfunction!(one_point, m)?)?;
    m.add_function(wrap_pyfunction!(two_point, m)?)?;
    m.add_function(wrap_pyfunction!(fit_stanley, m)?)?;
    m.add_function(wrap_pyfunction!(fit_conjecture, m)?)?;
    Ok(())
}
