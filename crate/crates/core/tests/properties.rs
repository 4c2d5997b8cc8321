//! Property-style invariants: norm axioms, path-length laws, integral
//! consistency, operator-monotone inequalities, and closed-form distance
//! identities, over seeded bulk samples and proptest-shrunk cases.

use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use blochcert::geometry::{contains, norm, project, ConvexDomain, NormSpec, Vector};
use blochcert::om::{check_sqrt_mean_inequality, is_derivative_increasing, OMFunction};
use blochcert::paths::{integrate, integrate_segment, riemann_sum, segment, Partition, Polyline, TagRule};
use blochcert::weights::{hyperbolic_distance, spherical_distance, Weight};

fn v(coords: &[f64]) -> Vector {
    Vector::new(coords.to_vec()).unwrap()
}

fn rand_vec(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> Vector {
    Vector::new((0..dim).map(|_| rng.random_range(-scale..scale)).collect()).unwrap()
}

const NORMS: [NormSpec; 4] = [
    NormSpec::Euclidean,
    NormSpec::MaxNorm,
    NormSpec::PNorm(1.0),
    NormSpec::PNorm(3.5),
];

#[test]
fn norm_triangle_inequality_and_homogeneity_bulk() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10_000 {
        let dim = rng.random_range(1..5);
        let a = rand_vec(&mut rng, dim, 10.0);
        let b = rand_vec(&mut rng, dim, 10.0);
        let c: f64 = rng.random_range(-5.0..5.0);
        for n in NORMS {
            let slack = norm(&a, n) + norm(&b, n) - norm(&a.add(&b), n);
            assert!(slack >= -1e-12, "triangle inequality violated by {slack}");
            let h = (norm(&a.scale(c), n) - c.abs() * norm(&a, n)).abs();
            assert!(h <= 1e-12 * norm(&a, n).max(1.0), "homogeneity off by {h}");
        }
    }
}

proptest! {
    #[test]
    fn norm_triangle_inequality(ax in -10.0..10.0f64, ay in -10.0..10.0f64,
                                bx in -10.0..10.0f64, by in -10.0..10.0f64) {
        for n in NORMS {
            let a = v(&[ax, ay]);
            let b = v(&[bx, by]);
            prop_assert!(norm(&a, n) + norm(&b, n) - norm(&a.add(&b), n) >= -1e-12);
        }
    }

    #[test]
    fn projection_is_idempotent(px in -4.0..4.0f64, py in -4.0..4.0f64, m in 0.0..0.4f64) {
        let domains = [
            ConvexDomain::unit_ball(NormSpec::Euclidean),
            ConvexDomain::unit_ball(NormSpec::MaxNorm),
            ConvexDomain::boxed(v(&[-1.0, -2.0]), v(&[2.0, 1.0])).unwrap(),
        ];
        let x = v(&[px, py]);
        for d in &domains {
            let p = project(d, &x, m).unwrap();
            let pp = project(d, &p, m).unwrap();
            for i in 0..p.dim() {
                prop_assert!((p.get(i) - pp.get(i)).abs() <= 1e-12);
            }
            prop_assert!(contains(d, &p, m / 2.0).unwrap());
        }
    }
}

#[test]
fn polyline_length_dominates_endpoint_gap() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let dim = rng.random_range(2..4);
        let count = rng.random_range(2..8);
        let pts: Vec<Vector> = (0..count).map(|_| rand_vec(&mut rng, dim, 3.0)).collect();
        let n = NORMS[rng.random_range(0..NORMS.len())];
        let Ok(p) = Polyline::new(pts, n) else { continue };
        let gap = norm(&p.last().sub(p.first()), n);
        assert!(p.length() >= gap - 1e-12);
    }
}

#[test]
fn restrict_additivity_at_random_splits() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let count = rng.random_range(2..7);
        let pts: Vec<Vector> = (0..count).map(|_| rand_vec(&mut rng, 2, 2.0)).collect();
        let Ok(p) = Polyline::new(pts, NormSpec::Euclidean) else { continue };
        let c: f64 = rng.random_range(0.05..0.95);
        let a = p.restrict(0.0, c).unwrap();
        let b = p.restrict(c, 1.0).unwrap();
        let err = (a.length() + b.length() - p.length()).abs();
        assert!(err <= 1e-12 * p.length().max(1.0), "additivity off by {err}");
    }
}

#[test]
fn riemann_sum_of_one_is_length_for_any_partition() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let p = Polyline::new(
        vec![v(&[0.0, 0.0]), v(&[0.4, 0.1]), v(&[0.2, 0.8]), v(&[-0.5, 0.9])],
        NormSpec::Euclidean,
    )
    .unwrap();
    for _ in 0..200 {
        // Random strictly increasing knots with random tags.
        let cells = rng.random_range(1..9);
        let mut knots = vec![0.0];
        for _ in 0..cells - 1 {
            knots.push(rng.random_range(0.001..0.999));
        }
        knots.push(1.0);
        knots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        knots.dedup();
        if knots.len() < 2 {
            continue;
        }
        let tags: Vec<f64> = knots
            .windows(2)
            .map(|w| rng.random_range(w[0]..=w[1]))
            .collect();
        let part = Partition::new(knots, tags).unwrap();
        let s = riemann_sum(|_| 1.0, &p, &part).unwrap();
        assert!((s - p.length()).abs() <= 1e-12 * p.length());
    }
}

#[test]
fn integrate_agrees_with_integrate_segment_on_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let tol = 1e-8;
    for _ in 0..50 {
        let x = rand_vec(&mut rng, 2, 0.8);
        let y = rand_vec(&mut rng, 2, 0.8);
        if x == y {
            continue;
        }
        let (a, b, c) = (
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(0.5..2.0),
        );
        let f = move |p: &Vector| c + a * p.get(0) + b * p.get(1) * p.get(1) + p.get(0) * p.get(1);
        let seg = segment(&x, &y, NormSpec::Euclidean).unwrap();
        let i1 = integrate(f, &seg, tol).unwrap();
        let i2 = integrate_segment(f, &x, &y, NormSpec::Euclidean, tol).unwrap();
        assert!((i1 - i2).abs() <= 2.0 * tol, "mismatch {}", (i1 - i2).abs());
    }
}

#[test]
fn integrate_respects_pointwise_monotonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let tol = 1e-8;
    for _ in 0..30 {
        let x = rand_vec(&mut rng, 2, 0.8);
        let y = rand_vec(&mut rng, 2, 0.8);
        if x == y {
            continue;
        }
        let bump: f64 = rng.random_range(0.0..1.0);
        let f1 = move |p: &Vector| 1.0 + p.get(0).sin() * 0.3;
        let f2 = move |p: &Vector| 1.0 + p.get(0).sin() * 0.3 + bump * (1.0 + p.get(1).cos());
        let seg = segment(&x, &y, NormSpec::Euclidean).unwrap();
        let i1 = integrate(f1, &seg, tol).unwrap();
        let i2 = integrate(f2, &seg, tol).unwrap();
        assert!(i1 <= i2 + 2.0 * tol);
    }
}

#[test]
fn sqrt_mean_inequality_bulk() {
    // artanh plus 20 seeded atomic Nevanlinna functions, atoms anywhere in
    // [-1, 1]; the inequality holds for all of them, not only those with
    // increasing derivative.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut functions = vec![OMFunction::Artanh];
    for _ in 0..20 {
        let k = rng.random_range(1..5);
        let mut atoms: Vec<(f64, f64)> = (0..k)
            .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(0.05..1.0)))
            .collect();
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        for a in &mut atoms {
            a.1 /= total;
        }
        // Exact unit sum after normalization drift.
        let drift: f64 = atoms.iter().map(|a| a.1).sum::<f64>() - 1.0;
        atoms[0].1 -= drift;
        functions.push(
            OMFunction::nevanlinna(rng.random_range(-1.0..1.0), rng.random_range(0.1..3.0), atoms).unwrap(),
        );
    }
    for phi in &functions {
        for _ in 0..1000 {
            let a: f64 = rng.random_range(-0.95..0.95);
            let b: f64 = rng.random_range(-0.95..0.95);
            if a == b {
                continue;
            }
            let (s, t) = if a < b { (a, b) } else { (b, a) };
            let slack = check_sqrt_mean_inequality(phi, s, t).unwrap();
            assert!(slack >= -1e-12, "{} violated at ({s}, {t}): slack {slack}", phi.label());
        }
    }
}

#[test]
fn om_derivative_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let phis = [
        OMFunction::Artanh,
        OMFunction::nevanlinna(0.3, 2.0, vec![(0.8, 0.5), (-0.6, 0.5)]).unwrap(),
        OMFunction::nevanlinna(0.0, 1.0, vec![(0.99, 0.25), (0.0, 0.5), (-0.99, 0.25)]).unwrap(),
    ];
    for phi in &phis {
        for _ in 0..100 {
            let t: f64 = rng.random_range(-0.9..0.9);
            let h = 1e-6 * (1.0 + t.abs());
            let fd = (phi.eval(t + h).unwrap() - phi.eval(t - h).unwrap()) / (2.0 * h);
            let d = phi.derivative(t).unwrap();
            assert!(((fd - d) / d).abs() <= 1e-6, "{} at {t}: fd {fd} vs {d}", phi.label());
        }
    }
}

#[test]
fn nonnegative_atoms_imply_increasing_derivative() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let k = rng.random_range(1..4);
        let mut atoms: Vec<(f64, f64)> = (0..k)
            .map(|_| (rng.random_range(0.0..1.0), rng.random_range(0.1..1.0)))
            .collect();
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        for a in &mut atoms {
            a.1 /= total;
        }
        let drift: f64 = atoms.iter().map(|a| a.1).sum::<f64>() - 1.0;
        atoms[0].1 -= drift;
        let phi = OMFunction::nevanlinna(0.0, 1.0, atoms).unwrap();
        let rep = is_derivative_increasing(&phi, 1.0, 128).unwrap();
        assert!(rep.increasing, "{}", phi.label());
        assert_eq!(rep.atoms_all_nonnegative, Some(true));
    }
}

#[test]
fn om_eval_strictly_increasing() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let phis = [
        OMFunction::Artanh,
        OMFunction::nevanlinna(-0.5, 0.7, vec![(-0.9, 1.0)]).unwrap(),
        OMFunction::nevanlinna(1.0, 2.0, vec![(0.5, 0.5), (-0.5, 0.5)]).unwrap(),
    ];
    for phi in &phis {
        for _ in 0..500 {
            let a: f64 = rng.random_range(-0.95..0.949);
            let b: f64 = rng.random_range(a + 1e-4..0.95);
            assert!(phi.eval(b).unwrap() > phi.eval(a).unwrap(), "{}", phi.label());
        }
    }
}

#[test]
fn hyperbolic_weight_is_increasing_in_norm() {
    let w = Weight::hyperbolic();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let r1: f64 = rng.random_range(0.0..0.99);
        let r2: f64 = rng.random_range(0.0..0.99);
        let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
        if lo == hi {
            continue;
        }
        let p = v(&[lo * angle.cos(), lo * angle.sin()]);
        let q = v(&[hi * angle.cos(), hi * angle.sin()]);
        assert!(w.evaluate(&q).unwrap() >= w.evaluate(&p).unwrap());
    }
}

#[test]
fn asinh_is_dominated_by_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..1000 {
        let t: f64 = rng.random_range(0.0..50.0);
        assert!(t - t.asinh() >= -1e-12);
    }
}

#[test]
fn hyperbolic_distance_dominated_by_chord_over_psi() {
    // √(1−|x|²)√(1−|y|²)·ρ(x, y) ≤ |x−y|.
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..1000 {
        let x = rand_vec(&mut rng, 2, 0.7);
        let y = rand_vec(&mut rng, 2, 0.7);
        let rho = hyperbolic_distance(&x, &y).unwrap();
        let psi = ((1.0 - x.dot(&x)) * (1.0 - y.dot(&y))).sqrt();
        let chord = x.sub(&y).euclidean_norm();
        assert!(chord - psi * rho >= -1e-12);
    }
}

#[test]
fn spherical_distance_algebraic_identity() {
    // σ(z, w)·√(1+|z|²)√(1+|w|²) = |z−w| exactly (up to round-off).
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..1000 {
        let z = rand_vec(&mut rng, 2, 20.0);
        let wv = rand_vec(&mut rng, 2, 20.0);
        let sigma = spherical_distance(&z, &wv).unwrap();
        let lhs = sigma * ((1.0 + z.dot(&z)) * (1.0 + wv.dot(&wv))).sqrt();
        let rhs = z.sub(&wv).euclidean_norm();
        assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
    }
}

#[test]
fn polyline_csv_round_trip_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..100 {
        let count = rng.random_range(2..6);
        let pts: Vec<Vector> = (0..count).map(|_| rand_vec(&mut rng, 3, 5.0)).collect();
        let Ok(p) = Polyline::new(pts, NormSpec::Euclidean) else { continue };
        let q = Polyline::from_csv(&p.to_csv()).unwrap();
        assert_eq!(p, q, "exact CSV round trip via shortest float repr");
    }
}

#[test]
fn left_and_right_tags_converge_to_the_same_integral() {
    // Tag-rule independence evidence for continuous integrands.
    let p = Polyline::new(vec![v(&[0.0, 0.0]), v(&[0.6, 0.2]), v(&[0.3, 0.9])], NormSpec::Euclidean).unwrap();
    let f = |q: &Vector| 1.0 + q.get(0) * q.get(0) + (3.0 * q.get(1)).sin().abs();
    let reference = integrate(f, &p, 1e-10).unwrap();
    for rule in [TagRule::Left, TagRule::Right, TagRule::Midpoint] {
        let part = Partition::uniform(1 << 14, rule).unwrap();
        let s = riemann_sum(f, &p, &part).unwrap();
        assert!((s - reference).abs() < 1e-3, "{rule:?} sum {s} vs {reference}");
    }
}
