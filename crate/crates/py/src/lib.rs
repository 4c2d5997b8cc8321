//! Python bindings: the main types and operations, with specs passed as the
//! same strings the CLI accepts. Structured results come back as plain
//! tuples/lists; full certificates and admissibility reports come back as
//! JSON strings for `json.loads`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use blochcert::corpus;
use blochcert::error::Error;
use blochcert::geometry::{self, ConvexDomain, NormSpec, Vector};
use blochcert::om::OMFunction;
use blochcert::omega::{self, GeodesicConfig};
use blochcert::paths::Polyline;
use blochcert::seminorms::{self, CheckConfig, SupremumConfig};
use blochcert::weights::{self, Weight};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn vec_to_vector(coords: Vec<f64>) -> PyResult<Vector> {
    Vector::new(coords).map_err(err)
}

fn coweight(spec: &str, codomain_dim: usize) -> PyResult<Weight> {
    match spec.trim() {
        "const1" => Ok(Weight::constant_one(
            ConvexDomain::ball(Vector::zeros(codomain_dim), 1e12).map_err(err)?,
        )),
        other => Weight::from_spec(other).map_err(err),
    }
}

/// ∥v∥ for `norm` in {"euclidean", "max", "p:<p>"}.
#[pyfunction]
fn norm(coords: Vec<f64>, norm: &str) -> PyResult<f64> {
    let v = vec_to_vector(coords)?;
    let n = NormSpec::parse(norm).map_err(err)?;
    Ok(geometry::norm(&v, n))
}

/// Hyperbolic distance on the Euclidean unit ball (asinh closed form).
#[pyfunction]
fn hyperbolic_distance(x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
    weights::hyperbolic_distance(&vec_to_vector(x)?, &vec_to_vector(y)?).map_err(err)
}

/// Spherical chordal distance on ℝ^m.
#[pyfunction]
fn spherical_distance(x: Vec<f64>, y: Vec<f64>) -> PyResult<f64> {
    weights::spherical_distance(&vec_to_vector(x)?, &vec_to_vector(y)?).map_err(err)
}

/// ω-length of a polyline under a weight spec.
#[pyfunction]
#[pyo3(signature = (points, weight, tol = 1e-8))]
fn omega_length(points: Vec<Vec<f64>>, weight: &str, tol: f64) -> PyResult<f64> {
    let w = Weight::from_spec(weight).map_err(err)?;
    let pts: Vec<Vector> = points
        .into_iter()
        .map(vec_to_vector)
        .collect::<PyResult<_>>()?;
    let p = Polyline::new(pts, w.domain().norm_spec()).map_err(err)?;
    omega::omega_length(&p, &w, tol).map_err(err)
}

/// ω-distance upper bound: returns (value, path, iterations, converged).
#[pyfunction]
#[pyo3(signature = (x, y, weight, control_points = 33, max_iters = 2000, margin = 1e-6))]
fn omega_distance(
    x: Vec<f64>,
    y: Vec<f64>,
    weight: &str,
    control_points: usize,
    max_iters: usize,
    margin: f64,
) -> PyResult<(f64, Vec<Vec<f64>>, usize, bool)> {
    let w = Weight::from_spec(weight).map_err(err)?;
    let cfg = GeodesicConfig {
        control_points,
        max_iters,
        margin,
        ..GeodesicConfig::default()
    };
    let res = omega::omega_distance(&vec_to_vector(x)?, &vec_to_vector(y)?, &w, &cfg).map_err(err)?;
    let path = res
        .path
        .points()
        .iter()
        .map(|p| p.coords().to_vec())
        .collect();
    Ok((res.value, path, res.iterations, res.converged))
}

/// Independent 2-D grid-graph oracle for the ω-distance.
#[pyfunction]
#[pyo3(signature = (x, y, weight, resolution = 400))]
fn grid_oracle(x: Vec<f64>, y: Vec<f64>, weight: &str, resolution: usize) -> PyResult<f64> {
    let w = Weight::from_spec(weight).map_err(err)?;
    omega::omega_distance_grid_oracle(&vec_to_vector(x)?, &vec_to_vector(y)?, &w, resolution).map_err(err)
}

/// Rows (radius, worst |d_ω/r − ω(x)|) of the limit-ratio probe.
#[pyfunction]
#[pyo3(signature = (weight, at, radii, directions = 16))]
fn lim_ratio_table(weight: &str, at: Vec<f64>, radii: Vec<f64>, directions: usize) -> PyResult<Vec<(f64, f64)>> {
    let w = Weight::from_spec(weight).map_err(err)?;
    let rep = omega::lim_ratio_check(
        &vec_to_vector(at)?,
        &w,
        &radii,
        directions,
        &GeodesicConfig::default(),
    )
    .map_err(err)?;
    Ok(rep.rows.iter().map(|r| (r.radius, r.worst_deviation)).collect())
}

/// An operator monotone function on (−1, 1), built from an om-spec string:
/// `artanh` or `nev:phi0=<v>,dphi0=<v>,atoms=(t:w;...)`.
#[pyclass]
struct OmFunction {
    inner: OMFunction,
}

#[pymethods]
impl OmFunction {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(Self { inner: OMFunction::parse(spec).map_err(err)? })
    }

    fn eval(&self, t: f64) -> PyResult<f64> {
        self.inner.eval(t).map_err(err)
    }

    fn derivative(&self, t: f64) -> PyResult<f64> {
        self.inner.derivative(t).map_err(err)
    }

    /// √(φ′(t)φ′(s))(t−s) − (φ(t) − φ(s)); nonnegative when the inequality holds.
    fn sqrt_mean_slack(&self, s: f64, t: f64) -> PyResult<f64> {
        blochcert::om::check_sqrt_mean_inequality(&self.inner, s, t).map_err(err)
    }

    #[pyo3(signature = (hi = 1.0, samples = 256))]
    fn derivative_increasing(&self, hi: f64, samples: usize) -> PyResult<bool> {
        Ok(blochcert::om::is_derivative_increasing(&self.inner, hi, samples)
            .map_err(err)?
            .increasing)
    }

    fn label(&self) -> String {
        self.inner.label()
    }
}

/// Bloch number estimate for a corpus map: (estimate, argmax, shell table).
#[pyfunction]
#[pyo3(signature = (map, weight, coweight, interior_samples = 4096, refine_rounds = 3, seed = 42))]
fn bloch_number(
    map: &str,
    weight: &str,
    coweight: &str,
    interior_samples: usize,
    refine_rounds: usize,
    seed: u64,
) -> PyResult<(f64, Vec<f64>, Vec<(f64, f64)>)> {
    let entry = corpus::corpus_get(map).map_err(err)?;
    let w = Weight::from_spec(weight).map_err(err)?;
    let cow = coweight_for(&entry, coweight)?;
    let cfg = SupremumConfig {
        interior_samples,
        refine_rounds,
        seed,
        ..SupremumConfig::default()
    };
    let b = seminorms::bloch_number(&entry.mapping, &w, &cow, &cfg).map_err(err)?;
    Ok((
        b.estimate,
        b.argmax.coords().to_vec(),
        b.shells.iter().map(|s| (s.delta, s.value)).collect(),
    ))
}

fn coweight_for(entry: &corpus::CorpusEntry, spec: &str) -> PyResult<Weight> {
    coweight(spec, entry.mapping.codomain_dim())
}

/// Lipschitz number estimate: (estimate, (argmax_x, argmax_y)).
#[pyfunction]
#[pyo3(signature = (map, psi, weight = "hyperbolic", coweight = "const1", pair_samples = 8192, seed = 42))]
fn lipschitz_number(
    map: &str,
    psi: &str,
    weight: &str,
    coweight: &str,
    pair_samples: usize,
    seed: u64,
) -> PyResult<(f64, (Vec<f64>, Vec<f64>))> {
    let entry = corpus::corpus_get(map).map_err(err)?;
    let w = Weight::from_spec(weight).map_err(err)?;
    let cow = coweight_for(&entry, coweight)?;
    let p = seminorms::psi_from_spec(psi, &entry.mapping, &w, &cow).map_err(err)?;
    let cfg = SupremumConfig { pair_samples, seed, ..SupremumConfig::default() };
    let l = seminorms::lipschitz_number(&entry.mapping, &p, &cfg).map_err(err)?;
    Ok((
        l.estimate,
        (
            l.argmax_pair.0.coords().to_vec(),
            l.argmax_pair.1.coords().to_vec(),
        ),
    ))
}

/// Full 𝔅 = 𝔏 certificate as a JSON string (load with `json.loads`).
#[pyfunction]
#[pyo3(signature = (map, weight, coweight, psi, tol = 0.02, interior_samples = 4096, pair_samples = 8192, seed = 42))]
#[allow(clippy::too_many_arguments)]
fn certify(
    map: &str,
    weight: &str,
    coweight: &str,
    psi: &str,
    tol: f64,
    interior_samples: usize,
    pair_samples: usize,
    seed: u64,
) -> PyResult<String> {
    let entry = corpus::corpus_get(map).map_err(err)?;
    let w = Weight::from_spec(weight).map_err(err)?;
    let cow = coweight_for(&entry, coweight)?;
    let p = seminorms::psi_from_spec(psi, &entry.mapping, &w, &cow).map_err(err)?;
    let cfg = SupremumConfig {
        interior_samples,
        pair_samples,
        seed,
        ..SupremumConfig::default()
    };
    let cert = seminorms::certify_equality(&entry.mapping, &w, &cow, &p, &cfg, tol, true);
    serde_json::to_string(&cert).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Per-condition admissibility report as a JSON string.
#[pyfunction]
#[pyo3(signature = (psi, map, weight = "hyperbolic", coweight = "const1", pairs = 1000, seed = 42))]
fn check_admissible(
    psi: &str,
    map: &str,
    weight: &str,
    coweight: &str,
    pairs: usize,
    seed: u64,
) -> PyResult<String> {
    let entry = corpus::corpus_get(map).map_err(err)?;
    let w = Weight::from_spec(weight).map_err(err)?;
    let cow = coweight_for(&entry, coweight)?;
    let p = seminorms::psi_from_spec(psi, &entry.mapping, &w, &cow).map_err(err)?;
    let ccfg = CheckConfig { pairs, seed, ..CheckConfig::default() };
    let rep = seminorms::check_admissible(&p, &entry.mapping, &w, &cow, &ccfg).map_err(err)?;
    serde_json::to_string(&rep).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Labels of the built-in mappings.
#[pyfunction]
fn corpus_list() -> Vec<String> {
    corpus::corpus_list().into_iter().map(str::to_string).collect()
}

#[pymodule]
fn blochcert_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(norm, m)?)?;
    m.add_function(wrap_pyfunction!(hyperbolic_distance, m)?)?;
    m.add_function(wrap_pyfunction!(spherical_distance, m)?)?;
    m.add_function(wrap_pyfunction!(omega_length, m)?)?;
    m.add_function(wrap_pyfunction!(omega_distance, m)?)?;
    m.add_function(wrap_pyfunction!(grid_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(lim_ratio_table, m)?)?;
    m.add_function(wrap_pyfunction!(bloch_number, m)?)?;
    m.add_function(wrap_pyfunction!(lipschitz_number, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(check_admissible, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_list, m)?)?;
    m.add_class::<OmFunction>()?;
    Ok(())
}
