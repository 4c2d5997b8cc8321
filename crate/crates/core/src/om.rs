//! Operator monotone functions on (−1, 1).
//!
//! Two constructions are supported: the closed form artanh, and finite-atom
//! Nevanlinna representations
//!
//! ```text
//! φ(t) = φ(0) + φ′(0) Σ w_i · t / (1 − t_i t),   t_i ∈ [−1, 1], Σ w_i = 1, w_i > 0.
//! ```
//!
//! Operator monotonicity holds by construction for every probability measure,
//! so nothing here ever tests operator orderings.

use serde::Serialize;

use crate::error::{Error, Result};

const WEIGHT_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum OMFunction {
    /// artanh t = ½ log((1+t)/(1−t)), with φ′(t) = (1−t²)⁻¹.
    Artanh,
    Nevanlinna {
        phi0: f64,
        phi0_prime: f64,
        /// Atoms (t_i, w_i) of the probability measure.
        atoms: Vec<(f64, f64)>,
    },
}

impl OMFunction {
    pub fn artanh() -> Self {
        OMFunction::Artanh
    }

    /// Builds an atomic Nevanlinna representation; weights must sum to 1.
    pub fn nevanlinna(phi0: f64, phi0_prime: f64, atoms: Vec<(f64, f64)>) -> Result<Self> {
        if !phi0.is_finite() || !phi0_prime.is_finite() || phi0_prime <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "need finite phi0 and positive phi0_prime, got ({phi0}, {phi0_prime})"
            )));
        }
        if atoms.is_empty() {
            return Err(Error::InvalidParameter("need at least one atom".into()));
        }
        let mut sum = 0.0;
        for &(t, w) in &atoms {
            if !((-1.0..=1.0).contains(&t) && w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "atom (t={t}, w={w}) violates t in [-1,1], w > 0"
                )));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidParameter(format!(
                "atom weights must sum to 1, got {sum}"
            )));
        }
        Ok(OMFunction::Nevanlinna { phi0, phi0_prime, atoms })
    }

    pub fn label(&self) -> String {
        match self {
            OMFunction::Artanh => "artanh".into(),
            OMFunction::Nevanlinna { phi0, phi0_prime, atoms } => {
                let atoms: Vec<String> = atoms.iter().map(|(t, w)| format!("{t}:{w}")).collect();
                format!("nev:phi0={phi0},dphi0={phi0_prime},atoms=({})", atoms.join(";"))
            }
        }
    }

    /// Parses `artanh` or `nev:phi0=<v>,dphi0=<v>,atoms=(t1:w1;t2:w2;...)`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec == "artanh" {
            return Ok(OMFunction::Artanh);
        }
        let body = spec
            .strip_prefix("nev:")
            .ok_or_else(|| Error::Parse(format!("unknown om-spec {spec:?}")))?;
        let mut phi0: Option<f64> = None;
        let mut dphi0: Option<f64> = None;
        let mut atoms: Option<Vec<(f64, f64)>> = None;
        // atoms=(...) contains commas' sibling separators only inside parens,
        // so split on commas not inside parentheses.
        let mut parts = Vec::new();
        let mut depth = 0usize;
        let mut cur = String::new();
        for ch in body.chars() {
            match ch {
                '(' => {
                    depth += 1;
                    cur.push(ch);
                }
                ')' => {
                    depth = depth.saturating_sub(1);
                    cur.push(ch);
                }
                ',' if depth == 0 => {
                    parts.push(cur.clone());
                    cur.clear();
                }
                _ => cur.push(ch),
            }
        }
        if !cur.is_empty() {
            parts.push(cur);
        }
        for part in parts {
            let part = part.trim();
            if let Some(v) = part.strip_prefix("phi0=") {
                phi0 = Some(v.parse().map_err(|_| Error::Parse(format!("bad phi0 {v:?}")))?);
            } else if let Some(v) = part.strip_prefix("dphi0=") {
                dphi0 = Some(v.parse().map_err(|_| Error::Parse(format!("bad dphi0 {v:?}")))?);
            } else if let Some(v) = part.strip_prefix("atoms=") {
                let v = v
                    .strip_prefix('(')
                    .and_then(|v| v.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse("atoms must be parenthesized".into()))?;
                let mut list = Vec::new();
                for entry in v.split(';').filter(|e| !e.trim().is_empty()) {
                    let (t, w) = entry
                        .split_once(':')
                        .ok_or_else(|| Error::Parse(format!("bad atom {entry:?}")))?;
                    let t: f64 = t.trim().parse().map_err(|_| Error::Parse(format!("bad atom t {t:?}")))?;
                    let w: f64 = w.trim().parse().map_err(|_| Error::Parse(format!("bad atom w {w:?}")))?;
                    list.push((t, w));
                }
                atoms = Some(list);
            } else {
                return Err(Error::Parse(format!("unknown om-spec field {part:?}")));
            }
        }
        OMFunction::nevanlinna(
            phi0.ok_or_else(|| Error::Parse("om-spec missing phi0=".into()))?,
            dphi0.ok_or_else(|| Error::Parse("om-spec missing dphi0=".into()))?,
            atoms.ok_or_else(|| Error::Parse("om-spec missing atoms=".into()))?,
        )
    }

    fn check_arg(&self, t: f64) -> Result<()> {
        if !(t.is_finite() && t.abs() < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "operator monotone functions are evaluated on (-1,1), got t={t}"
            )));
        }
        if let OMFunction::Nevanlinna { atoms, .. } = self {
            for &(ti, _) in atoms {
                if 1.0 - ti * t <= 0.0 {
                    return Err(Error::PoleHit { atom: ti, t });
                }
            }
        }
        Ok(())
    }

    /// φ(t).
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.check_arg(t)?;
        Ok(match self {
            OMFunction::Artanh => 0.5 * ((1.0 + t) / (1.0 - t)).ln(),
            OMFunction::Nevanlinna { phi0, phi0_prime, atoms } => {
                let s: f64 = atoms.iter().map(|&(ti, w)| w * t / (1.0 - ti * t)).sum();
                phi0 + phi0_prime * s
            }
        })
    }

    /// φ′(t) > 0.
    pub fn derivative(&self, t: f64) -> Result<f64> {
        self.check_arg(t)?;
        Ok(match self {
            OMFunction::Artanh => 1.0 / (1.0 - t * t),
            OMFunction::Nevanlinna { phi0_prime, atoms, .. } => {
                let s: f64 = atoms
                    .iter()
                    .map(|&(ti, w)| {
                        let d = 1.0 - ti * t;
                        w / (d * d)
                    })
                    .sum();
                phi0_prime * s
            }
        })
    }
}

/// Slack of φ(t) − φ(s) ≤ √(φ′(t) φ′(s)) (t − s); nonnegative slack means the
/// inequality holds at (s, t).
pub fn check_sqrt_mean_inequality(phi: &OMFunction, s: f64, t: f64) -> Result<f64> {
    if s >= t {
        return Err(Error::InvalidParameter(format!("need s < t, got s={s}, t={t}")));
    }
    let rhs = (phi.derivative(t)? * phi.derivative(s)?).sqrt() * (t - s);
    let lhs = phi.eval(t)? - phi.eval(s)?;
    Ok(rhs - lhs)
}

/// Outcome of a derivative-monotonicity scan on [0, hi).
#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityReport {
    pub increasing: bool,
    /// (t_lo, phi'(t_lo), t_hi, phi'(t_hi)) witnessing a decrease, if any.
    pub witness: Option<(f64, f64, f64, f64)>,
    /// For Nevanlinna functions: whether every atom has t_i ≥ 0, which is a
    /// sufficient condition for φ′ increasing on [0, 1).
    pub atoms_all_nonnegative: Option<bool>,
}

/// Samples φ′ on a uniform grid of [0, hi) and reports monotonicity evidence.
pub fn is_derivative_increasing(phi: &OMFunction, hi: f64, samples: usize) -> Result<MonotonicityReport> {
    if !(hi > 0.0 && hi <= 1.0) {
        return Err(Error::InvalidParameter(format!("need 0 < hi <= 1, got {hi}")));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples".into()));
    }
    let mut prev_t = 0.0;
    let mut prev_v = phi.derivative(0.0)?;
    let mut witness = None;
    for k in 1..samples {
        let t = hi * k as f64 / samples as f64;
        let v = phi.derivative(t)?;
        if v < prev_v - 1e-14 * prev_v.abs().max(1.0) && witness.is_none() {
            witness = Some((prev_t, prev_v, t, v));
        }
        prev_t = t;
        prev_v = v;
    }
    let atoms_all_nonnegative = match phi {
        OMFunction::Nevanlinna { atoms, .. } => Some(atoms.iter().all(|&(t, _)| t >= 0.0)),
        OMFunction::Artanh => None,
    };
    Ok(MonotonicityReport {
        increasing: witness.is_none(),
        witness,
        atoms_all_nonnegative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn artanh_values() {
        let phi = OMFunction::Artanh;
        assert_eq!(phi.eval(0.0).unwrap(), 0.0);
        assert!((phi.eval(0.5).unwrap() - 0.5 * 3.0_f64.ln()).abs() < 1e-15);
        assert!((phi.eval(0.5).unwrap() - 0.5493061443340549).abs() < 1e-12);
        assert_eq!(phi.derivative(0.0).unwrap(), 1.0);
        assert!((phi.derivative(0.5).unwrap() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn identity_from_single_atom_at_zero() {
        let phi = OMFunction::nevanlinna(0.0, 1.0, vec![(0.0, 1.0)]).unwrap();
        for t in [-0.9, -0.3, 0.0, 0.4, 0.85] {
            assert!((phi.eval(t).unwrap() - t).abs() < 1e-15);
            assert!((phi.derivative(t).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn single_atom_derivative_value() {
        let phi = OMFunction::nevanlinna(0.0, 1.0, vec![(0.5, 1.0)]).unwrap();
        assert!((phi.derivative(0.5).unwrap() - 16.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn constructor_validation() {
        assert!(OMFunction::nevanlinna(0.0, 0.0, vec![(0.0, 1.0)]).is_err());
        assert!(OMFunction::nevanlinna(0.0, 1.0, vec![(0.0, 0.5)]).is_err());
        assert!(OMFunction::nevanlinna(0.0, 1.0, vec![(1.5, 1.0)]).is_err());
        assert!(OMFunction::nevanlinna(0.0, 1.0, vec![]).is_err());
        assert!(OMFunction::nevanlinna(0.0, 1.0, vec![(0.2, 0.5), (-0.3, 0.5)]).is_ok());
    }

    #[test]
    fn eval_rejects_out_of_range() {
        let phi = OMFunction::Artanh;
        assert!(phi.eval(1.0).is_err());
        assert!(phi.eval(-1.2).is_err());
        assert!(phi.derivative(f64::NAN).is_err());
    }

    #[test]
    fn sqrt_mean_inequality_examples() {
        let phi = OMFunction::Artanh;
        let slack = check_sqrt_mean_inequality(&phi, 0.0, 0.5).unwrap();
        assert!((slack - (0.5 * (4.0_f64 / 3.0).sqrt() - 0.5_f64.atanh())).abs() < 1e-14);
        assert!((slack - 0.02804).abs() < 1e-5);

        // Identity: slack is exactly zero for all s < t.
        let id = OMFunction::nevanlinna(0.0, 1.0, vec![(0.0, 1.0)]).unwrap();
        for (s, t) in [(-0.5, 0.25), (0.0, 0.9), (-0.9, -0.1)] {
            assert!(check_sqrt_mean_inequality(&id, s, t).unwrap().abs() < 1e-15);
        }

        // t -> s limit: slack -> 0.
        let slack = check_sqrt_mean_inequality(&phi, 0.3, 0.3 + 1e-7).unwrap();
        assert!(slack.abs() < 1e-10);

        assert!(check_sqrt_mean_inequality(&phi, 0.5, 0.5).is_err());
    }

    #[test]
    fn derivative_monotonicity() {
        let rep = is_derivative_increasing(&OMFunction::Artanh, 1.0, 256).unwrap();
        assert!(rep.increasing);
        assert!(rep.atoms_all_nonnegative.is_none());

        let pos = OMFunction::nevanlinna(0.0, 1.0, vec![(0.2, 0.5), (0.9, 0.5)]).unwrap();
        let rep = is_derivative_increasing(&pos, 1.0, 256).unwrap();
        assert!(rep.increasing);
        assert_eq!(rep.atoms_all_nonnegative, Some(true));

        // φ′(t) = (1 + 0.9 t)^{-2} decreases on [0, 1).
        let neg = OMFunction::nevanlinna(0.0, 1.0, vec![(-0.9, 1.0)]).unwrap();
        let rep = is_derivative_increasing(&neg, 1.0, 256).unwrap();
        assert!(!rep.increasing);
        assert!(rep.witness.is_some());
        assert_eq!(rep.atoms_all_nonnegative, Some(false));
    }

    #[test]
    fn spec_parse_round_trip() {
        let phi = OMFunction::parse("artanh").unwrap();
        assert_eq!(phi, OMFunction::Artanh);

        let spec = "nev:phi0=0.5,dphi0=2,atoms=(0.25:0.5;-0.5:0.25;1:0.25)";
        let phi = OMFunction::parse(spec).unwrap();
        let again = OMFunction::parse(&phi.label()).unwrap();
        assert_eq!(phi, again);

        assert!(OMFunction::parse("nev:phi0=0,dphi0=1").is_err());
        assert!(OMFunction::parse("nev:phi0=0,dphi0=1,atoms=(0.5:0.9)").is_err());
        assert!(OMFunction::parse("sinh").is_err());
    }
}
