//! Built-in mappings with analytically derived semi-norm values.
//!
//! Complex-analytic examples are realized as ℝ² → ℝ² maps with conformal
//! jacobians, so ∥d_f(z)∥ = |f′(z)| is an identity the tests can lean on.

use num_complex::Complex64;

use crate::derivatives::{Matrix, MappingUnderTest};
use crate::error::{Error, Result};
use crate::geometry::{ConvexDomain, NormSpec, Vector};

/// One registry entry: the mapping plus recommended weights, admissible
/// function, and — when known analytically — its Bloch number.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub mapping: MappingUnderTest,
    pub known_bloch: Option<f64>,
    /// Names the derivation behind `known_bloch`.
    pub provenance: Option<&'static str>,
    pub weight: &'static str,
    pub coweight: &'static str,
    pub psi: &'static str,
    pub notes: &'static str,
}

fn as_complex(p: &Vector) -> Complex64 {
    Complex64::new(p.get(0), p.get(1))
}

fn from_complex(z: Complex64) -> Vector {
    Vector::new(vec![z.re, z.im]).expect("finite complex value")
}

/// Conformal 2×2 block of a complex derivative a + bi.
fn conformal_block(d: Complex64) -> Matrix {
    Matrix::new(2, 2, vec![d.re, -d.im, d.im, d.re]).expect("finite derivative")
}

const LABELS: [&str; 6] = [
    "identity_disk",
    "constant",
    "moebius_a0.5",
    "log_bloch",
    "normal_pole",
    "linear_Rm",
];

pub fn corpus_list() -> Vec<&'static str> {
    LABELS.to_vec()
}

pub fn corpus_get(label: &str) -> Result<CorpusEntry> {
    let disk = || ConvexDomain::unit_ball(NormSpec::Euclidean);
    match label {
        "identity_disk" => Ok(CorpusEntry {
            mapping: MappingUnderTest::new("identity_disk", disk(), 2, 2, NormSpec::Euclidean, |x| x.clone())
                .with_jacobian(|_| Matrix::identity(2)),
            known_bloch: Some(1.0),
            provenance: Some("sup (1-|z|^2) * 1 over the disk, attained at z = 0"),
            weight: "hyperbolic",
            coweight: "const1",
            psi: "hyperbolic",
            notes: "f(z) = z",
        }),
        "constant" => Ok(CorpusEntry {
            mapping: MappingUnderTest::new("constant", disk(), 2, 2, NormSpec::Euclidean, |_| {
                Vector::new(vec![0.25, -0.4]).expect("finite constant")
            })
            .with_jacobian(|_| Matrix::zeros(2, 2)),
            known_bloch: Some(0.0),
            provenance: Some("d_f vanishes identically"),
            weight: "hyperbolic",
            coweight: "const1",
            psi: "hyperbolic",
            notes: "f == (0.25, -0.4)",
        }),
        "moebius_a0.5" => Ok(CorpusEntry {
            mapping: MappingUnderTest::new("moebius_a0.5", disk(), 2, 2, NormSpec::Euclidean, |p| {
                let a = Complex64::new(0.5, 0.0);
                let z = as_complex(p);
                from_complex((a - z) / (Complex64::new(1.0, 0.0) - a.conj() * z))
            })
            .with_jacobian(|p| {
                let a = Complex64::new(0.5, 0.0);
                let z = as_complex(p);
                let den = Complex64::new(1.0, 0.0) - a.conj() * z;
                conformal_block((a * a.conj() - Complex64::new(1.0, 0.0)) / (den * den))
            }),
            known_bloch: Some(1.0),
            provenance: Some(
                "Schwarz-Pick equality (1-|z|^2)|f'(z)| = 1-|f(z)|^2 for disk automorphisms, attained at z = a",
            ),
            weight: "hyperbolic",
            coweight: "const1",
            psi: "hyperbolic",
            notes: "f(z) = (a - z)/(1 - conj(a) z), a = 0.5",
        }),
        "log_bloch" => Ok(CorpusEntry {
            mapping: MappingUnderTest::new("log_bloch", disk(), 2, 2, NormSpec::Euclidean, |p| {
                let z = as_complex(p);
                from_complex(-(Complex64::new(1.0, 0.0) - z).ln())
            })
            .with_jacobian(|p| {
                let z = as_complex(p);
                conformal_block((Complex64::new(1.0, 0.0) - z).inv())
            }),
            known_bloch: Some(2.0),
            provenance: Some("(1-|z|^2)/|1-z| <= 1+|z| < 2, approached along real z -> 1; unattained"),
            weight: "hyperbolic",
            coweight: "const1",
            psi: "hyperbolic",
            notes: "f(z) = log(1/(1-z)); supremum unattained, certified by shell convergence",
        }),
        "normal_pole" => Ok(CorpusEntry {
            mapping: MappingUnderTest::new("normal_pole", disk(), 2, 2, NormSpec::Euclidean, |p| {
                let z = as_complex(p);
                from_complex((Complex64::new(1.0, 0.0) - z).inv())
            })
            .with_jacobian(|p| {
                let z = as_complex(p);
                let d = Complex64::new(1.0, 0.0) - z;
                conformal_block((d * d).inv())
            }),
            known_bloch: Some((5.0_f64.sqrt() - 1.0) / 2.0),
            provenance: Some(
                "(1-|z|^2)|f'|/(1+|f|^2) = (1-|z|^2)/(|1-z|^2+1) <= 1, maximized on the real axis at z = (3-sqrt(5))/2",
            ),
            weight: "hyperbolic",
            coweight: "spherical",
            psi: "spherical_normal",
            notes: "f(z) = 1/(1-z) with spherical codomain weight; spherical Bloch number <= 1",
        }),
        "linear_Rm" => Ok(CorpusEntry {
            mapping: MappingUnderTest::new(
                "linear_Rm",
                ConvexDomain::unit_ball(NormSpec::Euclidean),
                3,
                3,
                NormSpec::Euclidean,
                |x| {
                    Vector::new(vec![2.0 * x.get(0), x.get(1), 0.5 * x.get(2)]).expect("finite image")
                },
            )
            .with_jacobian(|_| {
                Matrix::new(3, 3, vec![2.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.5]).expect("static matrix")
            }),
            known_bloch: Some(2.0),
            provenance: Some("top singular value of diag(2, 1, 0.5)"),
            weight: "const1",
            coweight: "const1",
            psi: "minmax",
            notes: "f(x) = Ax on the unit ball of R^3, A = diag(2, 1, 0.5)",
        }),
        _ => Err(Error::UnknownLabel(label.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivatives::{jacobian_at, DerivativeConfig};

    #[test]
    fn list_and_get() {
        let labels = corpus_list();
        assert_eq!(labels.len(), 6);
        for l in &labels {
            let e = corpus_get(l).unwrap();
            assert_eq!(e.mapping.label(), *l);
            if e.known_bloch.is_some() {
                assert!(e.provenance.is_some(), "{l} needs a provenance note");
            }
        }
        assert!(matches!(corpus_get("unknown"), Err(Error::UnknownLabel(_))));
        let lb = corpus_get("log_bloch").unwrap();
        assert_eq!(lb.known_bloch, Some(2.0));
        assert!(lb.notes.contains("unattained"));
    }

    #[test]
    fn moebius_fixes_a_and_schwarz_pick_holds() {
        let e = corpus_get("moebius_a0.5").unwrap();
        let a = Vector::new(vec![0.5, 0.0]).unwrap();
        let img = e.mapping.evaluate(&a);
        assert!(img.euclidean_norm() < 1e-15, "f(a) = 0");
        // Schwarz-Pick equality at a few points.
        let cfg = DerivativeConfig::default();
        for p in [[0.0, 0.0], [0.3, 0.2], [-0.5, 0.4]] {
            let z = Vector::new(p.to_vec()).unwrap();
            let j = jacobian_at(&e.mapping, &z, &cfg).unwrap();
            let fp = (j.get(0, 0).powi(2) + j.get(1, 0).powi(2)).sqrt();
            let lhs = (1.0 - z.dot(&z)) * fp;
            let fz = e.mapping.evaluate(&z);
            let rhs = 1.0 - fz.dot(&fz);
            assert!((lhs - rhs).abs() < 1e-12, "at {p:?}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn exact_jacobians_match_finite_differences() {
        // Smooth corpus maps, points kept away from the boundary so the
        // central-difference error term stays below 1e-6.
        let cfg = DerivativeConfig::default();
        let pts = [[0.0, 0.0], [0.35, -0.2], [-0.4, 0.25], [0.1, 0.5]];
        for label in ["identity_disk", "constant", "moebius_a0.5", "log_bloch", "normal_pole"] {
            let e = corpus_get(label).unwrap();
            let plain = MappingUnderTest::new(
                "fd-probe",
                e.mapping.domain().clone(),
                2,
                2,
                NormSpec::Euclidean,
                {
                    let m = e.mapping.clone();
                    move |x| m.evaluate(x)
                },
            );
            for p in pts {
                let z = Vector::new(p.to_vec()).unwrap();
                let exact = e.mapping.exact_jacobian(&z).unwrap();
                let fd = jacobian_at(&plain, &z, &cfg).unwrap();
                for r in 0..2 {
                    for c in 0..2 {
                        let d = (exact.get(r, c) - fd.get(r, c)).abs();
                        assert!(d <= 1e-6, "{label} at {p:?} entry ({r},{c}): |delta| = {d}");
                    }
                }
            }
        }
        // And the 3-D linear map.
        let e = corpus_get("linear_Rm").unwrap();
        let plain = MappingUnderTest::new(
            "fd-probe",
            e.mapping.domain().clone(),
            3,
            3,
            NormSpec::Euclidean,
            {
                let m = e.mapping.clone();
                move |x| m.evaluate(x)
            },
        );
        let z = Vector::new(vec![0.2, -0.3, 0.4]).unwrap();
        let exact = e.mapping.exact_jacobian(&z).unwrap();
        let fd = jacobian_at(&plain, &z, &cfg).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                assert!((exact.get(r, c) - fd.get(r, c)).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn normal_pole_integrand_peaks_at_golden_point() {
        // Brute-force the spherical Bloch integrand on the real axis and
        // compare with the closed-form argmax (3-sqrt(5))/2.
        let e = corpus_get("normal_pole").unwrap();
        let g = |x: f64| (1.0 - x * x) / ((1.0 - x) * (1.0 - x) + 1.0);
        let mut best = (f64::MIN, 0.0);
        for k in -9_000..9_500 {
            let x = k as f64 / 10_000.0;
            if g(x) > best.0 {
                best = (g(x), x);
            }
        }
        let want_x = (3.0 - 5.0_f64.sqrt()) / 2.0;
        let want_v = (5.0_f64.sqrt() - 1.0) / 2.0;
        assert!((best.1 - want_x).abs() < 1e-3);
        assert!((best.0 - want_v).abs() < 1e-6);
        assert!((e.known_bloch.unwrap() - want_v).abs() < 1e-15);
    }
}
