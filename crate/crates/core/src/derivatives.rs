//! Fréchet differential operator norms and the metric upper derivative
//! d*_f(x) = limsup_{y→x} d(f(x), f(y)) / d(x, y).
//!
//! For differentiable mappings the two agree, and the exact-jacobian route is
//! used wherever one is supplied. Black-box mappings get a finite-sampling
//! estimate, which is a lower bound on the limsup by construction.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{contains, norm, ConvexDomain, NormSpec, Vector};
use crate::sampling;

/// Dense row-major matrix, sized for jacobians of desk-scale mappings.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidParameter(format!(
                "matrix data length {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("matrix entry {v}")));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// J·v as a vector in the codomain.
    pub fn apply(&self, v: &Vector) -> Vector {
        debug_assert_eq!(v.dim(), self.cols);
        let coords = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * v.get(c)).sum())
            .collect();
        Vector::new(coords).expect("finite matvec")
    }

    /// Jᵀ·v.
    fn apply_transpose(&self, v: &[f64]) -> Vec<f64> {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.get(r, c) * v[r]).sum())
            .collect()
    }
}

/// A mapping Ω → ℝ^k under semi-norm estimation.
#[derive(Clone)]
pub struct MappingUnderTest {
    label: String,
    domain: ConvexDomain,
    domain_dim: usize,
    codomain_dim: usize,
    codomain_norm: NormSpec,
    eval: Arc<dyn Fn(&Vector) -> Vector + Send + Sync>,
    jacobian: Option<Arc<dyn Fn(&Vector) -> Matrix + Send + Sync>>,
}

impl std::fmt::Debug for MappingUnderTest {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MappingUnderTest")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("codomain_dim", &self.codomain_dim)
            .field("jacobian", &self.jacobian.is_some())
            .finish()
    }
}

impl MappingUnderTest {
    pub fn new(
        label: impl Into<String>,
        domain: ConvexDomain,
        domain_dim: usize,
        codomain_dim: usize,
        codomain_norm: NormSpec,
        eval: impl Fn(&Vector) -> Vector + Send + Sync + 'static,
    ) -> Self {
        debug_assert!(domain.dim().map_or(true, |d| d == domain_dim));
        Self {
            label: label.into(),
            domain,
            domain_dim,
            codomain_dim,
            codomain_norm,
            eval: Arc::new(eval),
            jacobian: None,
        }
    }

    pub fn with_jacobian(mut self, jac: impl Fn(&Vector) -> Matrix + Send + Sync + 'static) -> Self {
        self.jacobian = Some(Arc::new(jac));
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> &ConvexDomain {
        &self.domain
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn domain_norm(&self) -> NormSpec {
        self.domain.norm_spec()
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    pub fn codomain_norm(&self) -> NormSpec {
        self.codomain_norm
    }

    pub fn has_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    pub fn evaluate(&self, x: &Vector) -> Vector {
        (self.eval)(x)
    }

    pub fn exact_jacobian(&self, x: &Vector) -> Option<Matrix> {
        self.jacobian.as_ref().map(|j| j(x))
    }
}

/// Settings for finite-difference and sampling estimates.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DerivativeConfig {
    /// Base finite-difference step h₀.
    pub fd_step: f64,
    /// Number of radius halvings below h₀ for the limsup probe.
    pub radii_levels: usize,
    /// Unit directions sampled (at least 2·dim is enforced at use).
    pub directions: usize,
    pub seed: u64,
}

impl Default for DerivativeConfig {
    fn default() -> Self {
        Self { fd_step: 1e-4, radii_levels: 6, directions: 64, seed: 42 }
    }
}

impl DerivativeConfig {
    fn validate(&self, dim: usize) -> Result<()> {
        if !(self.fd_step.is_finite() && self.fd_step > 0.0) {
            return Err(Error::InvalidParameter(format!("fd_step must be positive, got {}", self.fd_step)));
        }
        if self.directions < 2 * dim {
            return Err(Error::InvalidParameter(format!(
                "need at least {} directions for dim {dim}, got {}",
                2 * dim,
                self.directions
            )));
        }
        Ok(())
    }
}

/// Jacobian at x: the exact one when supplied, otherwise central differences
/// with step `cfg.fd_step` (error O(h²) for smooth mappings).
pub fn jacobian_at(f: &MappingUnderTest, x: &Vector, cfg: &DerivativeConfig) -> Result<Matrix> {
    if let Some(j) = f.exact_jacobian(x) {
        return Ok(j);
    }
    let dim = x.dim();
    let h = cfg.fd_step;
    let mut m = Matrix::zeros(f.codomain_dim(), dim);
    for c in 0..dim {
        let xp = x.add(&Vector::axis(dim, c, h));
        let xm = x.add(&Vector::axis(dim, c, -h));
        for p in [&xp, &xm] {
            if !contains(f.domain(), p, 0.0)? {
                return Err(Error::OutsideDomain(format!(
                    "finite-difference stencil leaves the domain of {} at step {h}",
                    f.label()
                )));
            }
        }
        let fp = f.evaluate(&xp);
        let fm = f.evaluate(&xm);
        for r in 0..f.codomain_dim() {
            m.set(r, c, (fp.get(r) - fm.get(r)) / (2.0 * h));
        }
    }
    Ok(m)
}

const POWER_ITER_CAP: usize = 10_000;
const POWER_ITER_RTOL: f64 = 1e-10;

/// Operator norm of J as a map (ℝ^m, domain norm) → (ℝ^k, codomain norm).
///
/// The Euclidean→Euclidean case is the top singular value, computed by power
/// iteration on JᵀJ. Any other pair is estimated from below by maximizing
/// ∥Jζ∥ over quasi-uniform unit-sphere samples refined by hill climbing.
pub fn operator_norm(
    j: &Matrix,
    domain_norm: NormSpec,
    codomain_norm: NormSpec,
    cfg: &DerivativeConfig,
) -> Result<f64> {
    if domain_norm == NormSpec::Euclidean && codomain_norm == NormSpec::Euclidean {
        return top_singular_value(j);
    }
    cfg.validate(j.cols())?;
    let dirs = sampling::unit_directions(j.cols(), cfg.directions, domain_norm, cfg.seed);
    let mut best = 0.0_f64;
    let mut best_dir = dirs[0].clone();
    for u in &dirs {
        let v = norm(&j.apply(u), codomain_norm);
        if v > best {
            best = v;
            best_dir = u.clone();
        }
    }
    // Compass refinement on the unit sphere of the domain norm.
    let dim = j.cols();
    let mut step = 0.25;
    while step > 1e-9 {
        let mut improved = false;
        for k in 0..dim {
            for s in [step, -step] {
                let mut cand = best_dir.clone();
                cand.set(k, cand.get(k) + s);
                let len = norm(&cand, domain_norm);
                if len < 1e-12 {
                    continue;
                }
                let cand = cand.scale(1.0 / len);
                let v = norm(&j.apply(&cand), codomain_norm);
                if v > best {
                    best = v;
                    best_dir = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(best)
}

/// Largest singular value via power iteration on JᵀJ to relative 1e−10.
fn top_singular_value(j: &Matrix) -> Result<f64> {
    let n = j.cols();
    // Deterministic start, slightly tilted so it is not orthogonal to the
    // leading eigenvector of typical test matrices.
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 1e-4 * i as f64).collect();
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= nv);
    let mut lambda_prev = -1.0;
    for _ in 0..POWER_ITER_CAP {
        // w = JᵀJ v
        let jv: Vec<f64> = {
            let vv = Vector::new(v.clone()).expect("finite iterate");
            j.apply(&vv).into_coords()
        };
        let w = j.apply_transpose(&jv);
        let lambda: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let nw = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nw == 0.0 {
            return Ok(0.0);
        }
        v = w.iter().map(|x| x / nw).collect();
        if (lambda - lambda_prev).abs() <= POWER_ITER_RTOL * lambda.abs().max(1e-300) {
            return Ok(lambda.max(0.0).sqrt());
        }
        lambda_prev = lambda;
    }
    Err(Error::PowerIterationDiverged { iters: POWER_ITER_CAP })
}

/// Sampled difference-quotient table: (radius, max ratio over directions).
///
/// The limsup of a non-differentiable Lipschitz map may oscillate across
/// levels; the table reports the evidence rather than resolving it.
pub fn upper_derivative_table(
    f: &MappingUnderTest,
    x: &Vector,
    cfg: &DerivativeConfig,
) -> Result<Vec<(f64, f64)>> {
    let dim = x.dim();
    cfg.validate(dim)?;
    if !contains(f.domain(), x, 0.0)? {
        return Err(Error::OutsideDomain(format!("{} sampled outside its domain", f.label())));
    }
    let dn = f.domain_norm();
    let cn = f.codomain_norm();
    let dirs = sampling::unit_directions(dim, cfg.directions, dn, cfg.seed);
    let fx = f.evaluate(x);
    let mut table = Vec::with_capacity(cfg.radii_levels + 1);
    for k in 0..=cfg.radii_levels {
        let r0 = cfg.fd_step * 0.5_f64.powi(k as i32);
        let mut worst = 0.0_f64;
        for u in &dirs {
            // Auto-shrink the radius for directions that would leave the domain.
            let mut r = r0;
            let mut y = x.add(&u.scale(r));
            let mut tries = 0;
            while !contains(f.domain(), &y, 0.0)? {
                r *= 0.5;
                y = x.add(&u.scale(r));
                tries += 1;
                if tries > 60 {
                    return Err(Error::OutsideDomain(format!(
                        "cannot keep probe of {} inside the domain near the boundary",
                        f.label()
                    )));
                }
            }
            let ratio = norm(&f.evaluate(&y).sub(&fx), cn) / (r * norm(u, dn));
            if ratio > worst {
                worst = ratio;
            }
        }
        table.push((r0, worst));
    }
    Ok(table)
}

/// Estimate of d*_f(x).
///
/// Returns the max sampled ratio over the two smallest radius levels — a
/// lower-bound estimate of the limsup — and, when an exact jacobian is
/// available, the max of that and the differential's operator norm.
pub fn upper_derivative(f: &MappingUnderTest, x: &Vector, cfg: &DerivativeConfig) -> Result<f64> {
    let table = upper_derivative_table(f, x, cfg)?;
    let take = 2.min(table.len());
    let sampled = table[table.len() - take..]
        .iter()
        .fold(0.0_f64, |m, &(_, v)| m.max(v));
    if f.has_jacobian() {
        let op = operator_norm(&jacobian_at(f, x, cfg)?, f.domain_norm(), f.codomain_norm(), cfg)?;
        Ok(sampled.max(op))
    } else {
        Ok(sampled)
    }
}

/// d*_f via the cheapest exact route: jacobian operator norm when available,
/// sampled estimate otherwise. Supremum sweeps use this.
pub fn d_star(f: &MappingUnderTest, x: &Vector, cfg: &DerivativeConfig) -> Result<f64> {
    if f.has_jacobian() {
        operator_norm(&jacobian_at(f, x, cfg)?, f.domain_norm(), f.codomain_norm(), cfg)
    } else {
        upper_derivative(f, x, cfg)
    }
}
