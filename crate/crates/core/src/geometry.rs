//! Points, norms, and convex domains of ℝ^m.
//!
//! Domains are open: `contains` with margin 0 excludes the boundary, and a
//! positive margin shrinks the domain further. Weights used elsewhere in the
//! crate typically blow up at the boundary, so feasibility is always tested
//! strictly inside.

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};

/// A point of ℝ^m.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    coords: Vec<f64>,
}

impl Vector {
    /// Builds a vector, rejecting non-finite coordinates and zero dimension.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("vector must have dim >= 1".into()));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::NonFinite(format!("vector coordinate {c}")));
        }
        Ok(Self { coords })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { coords: vec![0.0; dim] }
    }

    /// k-th standard basis vector scaled by `s`.
    pub fn axis(dim: usize, k: usize, s: f64) -> Self {
        let mut coords = vec![0.0; dim];
        coords[k] = s;
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn get(&self, i: usize) -> f64 {
        self.coords[i]
    }

    pub(crate) fn set(&mut self, i: usize, v: f64) {
        self.coords[i] = v;
    }

    pub fn add(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Vector {
        Vector {
            coords: self.coords.iter().map(|a| a * s).collect(),
        }
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Point (1−t)·self + t·other. Exact at t = 0 and t = 1.
    pub fn lerp(&self, other: &Vector, t: f64) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| (1.0 - t) * a + t * b)
                .collect(),
        }
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: self.dim(),
            });
        }
        Ok(())
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coords.len()))?;
        for c in &self.coords {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

/// Norm selection for a space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSpec {
    Euclidean,
    /// ℓ^p norm with p ≥ 1.
    PNorm(f64),
    MaxNorm,
}

impl NormSpec {
    pub fn p_norm(p: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::InvalidParameter(format!("p-norm requires p >= 1, got {p}")));
        }
        Ok(NormSpec::PNorm(p))
    }

    pub fn label(&self) -> String {
        match self {
            NormSpec::Euclidean => "euclidean".into(),
            NormSpec::PNorm(p) => format!("p:{p}"),
            NormSpec::MaxNorm => "max".into(),
        }
    }

    /// Parses `euclidean`, `max`, or `p:<value>`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "euclidean" | "l2" => Ok(NormSpec::Euclidean),
            "max" | "max_norm" | "linf" => Ok(NormSpec::MaxNorm),
            _ => {
                if let Some(p) = s.strip_prefix("p:") {
                    let p: f64 = p
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad p-norm exponent in {s:?}")))?;
                    NormSpec::p_norm(p)
                } else {
                    Err(Error::Parse(format!("unknown norm spec {s:?}")))
                }
            }
        }
    }
}

impl Serialize for NormSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.label())
    }
}

/// ∥v∥ for the selected norm. Zero iff v = 0.
pub fn norm(v: &Vector, n: NormSpec) -> f64 {
    match n {
        NormSpec::Euclidean => v.euclidean_norm(),
        NormSpec::PNorm(p) => v
            .coords()
            .iter()
            .map(|c| c.abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p),
        NormSpec::MaxNorm => v.coords().iter().fold(0.0_f64, |m, c| m.max(c.abs())),
    }
}

/// An open convex domain in ℝ^m.
///
/// `Ball` is Euclidean; `UnitBall` is the open unit ball of the given norm,
/// centered at the origin.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexDomain {
    UnitBall(NormSpec),
    Ball { center: Vector, radius: f64 },
    Box { lo: Vector, hi: Vector },
}

impl ConvexDomain {
    pub fn unit_ball(n: NormSpec) -> Self {
        ConvexDomain::UnitBall(n)
    }

    pub fn ball(center: Vector, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter(format!("ball radius must be positive, got {radius}")));
        }
        Ok(ConvexDomain::Ball { center, radius })
    }

    pub fn boxed(lo: Vector, hi: Vector) -> Result<Self> {
        lo.check_dim(hi.dim())?;
        if lo.coords().iter().zip(hi.coords()).any(|(a, b)| a >= b) {
            return Err(Error::InvalidParameter("box requires lo < hi componentwise".into()));
        }
        Ok(ConvexDomain::Box { lo, hi })
    }

    /// Fixed dimension if the domain pins one (unit balls fit any dim).
    pub fn dim(&self) -> Option<usize> {
        match self {
            ConvexDomain::UnitBall(_) => None,
            ConvexDomain::Ball { center, .. } => Some(center.dim()),
            ConvexDomain::Box { lo, .. } => Some(lo.dim()),
        }
    }

    /// Largest margin that still leaves an interior.
    pub fn inradius(&self) -> f64 {
        match self {
            ConvexDomain::UnitBall(_) => 1.0,
            ConvexDomain::Ball { radius, .. } => *radius,
            ConvexDomain::Box { lo, hi } => lo
                .coords()
                .iter()
                .zip(hi.coords())
                .map(|(a, b)| (b - a) / 2.0)
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// The norm naturally attached to the domain (used for path lengths).
    pub fn norm_spec(&self) -> NormSpec {
        match self {
            ConvexDomain::UnitBall(n) => *n,
            _ => NormSpec::Euclidean,
        }
    }

    /// Axis-aligned bounding box (lo, hi).
    pub fn bounding_box(&self, dim: usize) -> (Vector, Vector) {
        match self {
            ConvexDomain::UnitBall(_) => (
                Vector::new(vec![-1.0; dim]).unwrap(),
                Vector::new(vec![1.0; dim]).unwrap(),
            ),
            ConvexDomain::Ball { center, radius } => (
                Vector::new(center.coords().iter().map(|c| c - radius).collect()).unwrap(),
                Vector::new(center.coords().iter().map(|c| c + radius).collect()).unwrap(),
            ),
            ConvexDomain::Box { lo, hi } => (lo.clone(), hi.clone()),
        }
    }

    fn check_margin(&self, margin: f64) -> Result<()> {
        if !(margin.is_finite() && margin >= 0.0) {
            return Err(Error::InvalidParameter(format!("margin must be a finite nonnegative real, got {margin}")));
        }
        if margin >= self.inradius() {
            return Err(Error::InvalidParameter(format!(
                "margin {margin} is not smaller than the domain inradius {}",
                self.inradius()
            )));
        }
        Ok(())
    }
}

/// Strict interior test of the margin-shrunk domain.
pub fn contains(d: &ConvexDomain, x: &Vector, margin: f64) -> Result<bool> {
    d.check_margin(margin)?;
    if let Some(dim) = d.dim() {
        x.check_dim(dim)?;
    }
    Ok(match d {
        ConvexDomain::UnitBall(n) => norm(x, *n) < 1.0 - margin,
        ConvexDomain::Ball { center, radius } => x.sub(center).euclidean_norm() < radius - margin,
        ConvexDomain::Box { lo, hi } => x
            .coords()
            .iter()
            .zip(lo.coords().iter().zip(hi.coords()))
            .all(|(c, (a, b))| *c > a + margin && *c < b - margin),
    })
}

/// Retraction onto the margin-shrunk domain; identity on points already inside.
///
/// Euclidean balls and boxes get the exact Euclidean nearest point; other unit
/// balls are retracted radially (any retraction suffices for the optimizer
/// feasibility role this plays).
pub fn project(d: &ConvexDomain, x: &Vector, margin: f64) -> Result<Vector> {
    d.check_margin(margin)?;
    if let Some(dim) = d.dim() {
        x.check_dim(dim)?;
    }
    Ok(match d {
        ConvexDomain::UnitBall(n) => {
            let r = 1.0 - margin;
            let nx = norm(x, *n);
            if nx <= r {
                x.clone()
            } else {
                x.scale(r / nx)
            }
        }
        ConvexDomain::Ball { center, radius } => {
            let r = radius - margin;
            let off = x.sub(center);
            let nx = off.euclidean_norm();
            if nx <= r {
                x.clone()
            } else {
                center.add(&off.scale(r / nx))
            }
        }
        ConvexDomain::Box { lo, hi } => Vector::new(
            x.coords()
                .iter()
                .zip(lo.coords().iter().zip(hi.coords()))
                .map(|(c, (a, b))| c.max(a + margin).min(b - margin))
                .collect(),
        )
        .expect("projection of finite point is finite"),
    })
}
