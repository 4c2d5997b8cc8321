//! Weight functions: positive continuous scalar fields on a domain, with
//! monotonicity metadata, plus the closed-form hyperbolic and spherical
//! distances used as ground truth.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{contains, norm, ConvexDomain, NormSpec, Vector};
use crate::om::OMFunction;

/// Declared behavior of a weight along radial rays. Validated by sampling,
/// never inferred at runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    IncreasingInNorm,
    DecreasingInNorm,
    None,
}

type Evaluator = Arc<dyn Fn(&Vector) -> f64 + Send + Sync>;
type ExactDistance = Arc<dyn Fn(&Vector, &Vector) -> Result<f64> + Send + Sync>;

/// A strictly positive continuous scalar field on an open convex domain.
#[derive(Clone)]
pub struct Weight {
    label: String,
    monotonicity: Monotonicity,
    domain: ConvexDomain,
    eval: Evaluator,
    /// Closed-form ω-distance, when one is known for this weight.
    exact_distance: Option<ExactDistance>,
}

impl std::fmt::Debug for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Weight")
            .field("label", &self.label)
            .field("monotonicity", &self.monotonicity)
            .field("domain", &self.domain)
            .field("exact_distance", &self.exact_distance.is_some())
            .finish()
    }
}

impl Weight {
    pub fn new(
        label: impl Into<String>,
        domain: ConvexDomain,
        monotonicity: Monotonicity,
        eval: impl Fn(&Vector) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            monotonicity,
            domain,
            eval: Arc::new(eval),
            exact_distance: None,
        }
    }

    /// ω ≡ 1 on the given domain; d_ω is the domain norm's distance.
    pub fn constant_one(domain: ConvexDomain) -> Self {
        let n = domain.norm_spec();
        Self {
            label: "const1".into(),
            monotonicity: Monotonicity::None,
            domain,
            eval: Arc::new(|_| 1.0),
            exact_distance: Some(Arc::new(move |x, y| Ok(norm(&x.sub(y), n)))),
        }
    }

    /// ω(x) = (1 − ∥x∥²)⁻¹ on the Euclidean unit ball; d_ω is the hyperbolic
    /// distance with its asinh closed form.
    pub fn hyperbolic() -> Self {
        Self {
            label: "hyperbolic".into(),
            monotonicity: Monotonicity::IncreasingInNorm,
            domain: ConvexDomain::unit_ball(NormSpec::Euclidean),
            eval: Arc::new(|x| 1.0 / (1.0 - x.dot(x))),
            exact_distance: Some(Arc::new(hyperbolic_distance)),
        }
    }

    /// ω̃(z) = (1 + ∥z∥²)⁻¹ on (effectively) all of ℝ^m; d_ω̃ is the spherical
    /// chordal distance.
    pub fn spherical() -> Self {
        // A huge Euclidean ball stands in for the whole plane at desk scale.
        let domain = ConvexDomain::ball(Vector::zeros(2), 1e12).expect("static radius");
        Self {
            label: "spherical".into(),
            monotonicity: Monotonicity::DecreasingInNorm,
            domain,
            eval: Arc::new(|z| 1.0 / (1.0 + z.dot(z))),
            exact_distance: Some(Arc::new(spherical_distance)),
        }
    }

    /// ω(x) = φ′(∥x∥) for an operator monotone φ; no closed-form distance is
    /// attached even when one exists, so this weight exercises the numerical
    /// geodesic route.
    pub fn phi_prime(phi: OMFunction, domain: ConvexDomain) -> Result<Self> {
        let n = domain.norm_spec();
        let report = crate::om::is_derivative_increasing(&phi, 1.0, 128)?;
        let monotonicity = if report.increasing {
            Monotonicity::IncreasingInNorm
        } else {
            Monotonicity::None
        };
        let label = format!("phi_prime:{}", phi.label());
        let phi_for_eval = phi.clone();
        Ok(Self {
            label,
            monotonicity,
            domain,
            // Out-of-range norms produce NaN, surfaced by callers' finiteness checks.
            eval: Arc::new(move |x| phi_for_eval.derivative(norm(x, n)).unwrap_or(f64::NAN)),
            exact_distance: None,
        })
    }

    /// Parses `const1 | hyperbolic | spherical | phi_prime:<om-spec>`.
    ///
    /// `const1` and `phi_prime` live on the Euclidean unit ball here; library
    /// users can build weights on other domains directly.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        match spec {
            "const1" => Ok(Self::constant_one(ConvexDomain::unit_ball(NormSpec::Euclidean))),
            "hyperbolic" => Ok(Self::hyperbolic()),
            "spherical" => Ok(Self::spherical()),
            _ => {
                if let Some(om) = spec.strip_prefix("phi_prime:") {
                    Self::phi_prime(OMFunction::parse(om)?, ConvexDomain::unit_ball(NormSpec::Euclidean))
                } else {
                    Err(Error::Parse(format!("unknown weight spec {spec:?}")))
                }
            }
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn monotonicity(&self) -> Monotonicity {
        self.monotonicity
    }

    pub fn domain(&self) -> &ConvexDomain {
        &self.domain
    }

    pub fn exact_distance_fn(&self) -> Option<&ExactDistance> {
        self.exact_distance.as_ref()
    }

    /// d_ω(x, y) from the attached closed form, if any.
    pub fn exact_distance(&self, x: &Vector, y: &Vector) -> Option<Result<f64>> {
        self.exact_distance.as_ref().map(|d| d(x, y))
    }

    /// Checked evaluation: errors outside the open domain and on
    /// non-finite/non-positive values.
    pub fn evaluate(&self, x: &Vector) -> Result<f64> {
        if !contains(&self.domain, x, 0.0)? {
            return Err(Error::OutsideDomain(format!(
                "weight {} evaluated outside its domain",
                self.label
            )));
        }
        let v = (self.eval)(x);
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::NonFinite(format!("weight {} produced {v}", self.label)));
        }
        Ok(v)
    }

    /// Unchecked evaluation for hot loops; callers guard the domain.
    pub fn evaluate_raw(&self, x: &Vector) -> f64 {
        (self.eval)(x)
    }

    /// True if the weight is constant (d_ω reduces to the norm distance).
    pub fn is_constant_one(&self) -> bool {
        self.label == "const1"
    }
}

/// Hyperbolic distance on the Euclidean unit ball:
/// ρ(x, y) = asinh( ∥x−y∥ / (√(1−∥x∥²) √(1−∥y∥²)) ).
pub fn hyperbolic_distance(x: &Vector, y: &Vector) -> Result<f64> {
    x.check_dim(y.dim())?;
    let nx2 = x.dot(x);
    let ny2 = y.dot(y);
    if nx2 >= 1.0 || ny2 >= 1.0 {
        return Err(Error::OutsideDomain(
            "hyperbolic distance needs both points strictly inside the unit ball".into(),
        ));
    }
    let gap = x.sub(y).euclidean_norm();
    Ok((gap / ((1.0 - nx2).sqrt() * (1.0 - ny2).sqrt())).asinh())
}

/// Spherical chordal distance σ(z, w) = ∥z−w∥ / (√(1+∥z∥²) √(1+∥w∥²)).
pub fn spherical_distance(z: &Vector, w: &Vector) -> Result<f64> {
    z.check_dim(w.dim())?;
    let gap = z.sub(w).euclidean_norm();
    Ok(gap / ((1.0 + z.dot(z)).sqrt() * (1.0 + w.dot(w)).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coords: &[f64]) -> Vector {
        Vector::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn builtin_values() {
        let h = Weight::hyperbolic();
        assert_eq!(h.evaluate(&v(&[0.0, 0.0])).unwrap(), 1.0);
        assert!((h.evaluate(&v(&[0.5, 0.0])).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!((h.evaluate(&v(&[0.3, 0.4])).unwrap() - 4.0 / 3.0).abs() < 1e-15);

        let s = Weight::spherical();
        assert!((s.evaluate(&v(&[1.0, 0.0])).unwrap() - 0.5).abs() < 1e-15);

        let c = Weight::constant_one(ConvexDomain::unit_ball(NormSpec::Euclidean));
        assert_eq!(c.evaluate(&v(&[0.2, -0.7])).unwrap(), 1.0);
    }

    #[test]
    fn evaluate_rejects_outside_domain() {
        let h = Weight::hyperbolic();
        assert!(matches!(h.evaluate(&v(&[1.0, 0.0])), Err(Error::OutsideDomain(_))));
        assert!(h.evaluate(&v(&[1.5, 0.0])).is_err());
    }

    #[test]
    fn phi_prime_artanh_matches_hyperbolic() {
        let w = Weight::phi_prime(OMFunction::Artanh, ConvexDomain::unit_ball(NormSpec::Euclidean)).unwrap();
        assert_eq!(w.monotonicity(), Monotonicity::IncreasingInNorm);
        let h = Weight::hyperbolic();
        for p in [v(&[0.0, 0.0]), v(&[0.5, 0.0]), v(&[-0.3, 0.6])] {
            assert!((w.evaluate(&p).unwrap() - h.evaluate(&p).unwrap()).abs() < 1e-14);
        }
        assert!(w.exact_distance_fn().is_none());
    }

    #[test]
    fn hyperbolic_distance_examples() {
        let rho = hyperbolic_distance(&v(&[0.0, 0.0]), &v(&[0.5, 0.0])).unwrap();
        assert!((rho - 0.5_f64.atanh()).abs() < 1e-14);
        assert!((rho - 0.5493061).abs() < 1e-6);

        let x = v(&[0.3, -0.2]);
        assert_eq!(hyperbolic_distance(&x, &x).unwrap(), 0.0);

        let rho = hyperbolic_distance(&v(&[-0.5, 0.0]), &v(&[0.5, 0.0])).unwrap();
        assert!((rho - (4.0_f64 / 3.0).asinh()).abs() < 1e-14);
        assert!((rho - 1.0986123).abs() < 1e-6);
        assert!((rho - 2.0 * 0.5_f64.atanh()).abs() < 1e-12);

        assert!(hyperbolic_distance(&v(&[1.0, 0.0]), &v(&[0.0, 0.0])).is_err());
    }

    #[test]
    fn spherical_distance_examples() {
        assert_eq!(spherical_distance(&v(&[0.0, 0.0]), &v(&[0.0, 0.0])).unwrap(), 0.0);
        let s = spherical_distance(&v(&[0.0, 0.0]), &v(&[1.0, 0.0])).unwrap();
        assert!((s - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        let s = spherical_distance(&v(&[1.0, 0.0]), &v(&[-1.0, 0.0])).unwrap();
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn weight_spec_parsing() {
        assert_eq!(Weight::from_spec("hyperbolic").unwrap().label(), "hyperbolic");
        assert_eq!(Weight::from_spec("const1").unwrap().label(), "const1");
        assert_eq!(Weight::from_spec("spherical").unwrap().label(), "spherical");
        let w = Weight::from_spec("phi_prime:artanh").unwrap();
        assert_eq!(w.label(), "phi_prime:artanh");
        assert!(Weight::from_spec("gauss").is_err());
    }
}
