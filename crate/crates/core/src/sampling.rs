//! Deterministic seeded sampling: Halton low-discrepancy sequences, domain
//! samplers, and direction sets. All consumers derive their own sub-seed so
//! estimates are reproducible bit for bit.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{contains, norm, ConvexDomain, NormSpec, Vector};

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Stable sub-seed for a named consumer of a top-level seed.
pub fn sub_seed(seed: u64, tag: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in tag.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    splitmix64(seed ^ h)
}

/// Radical-inverse of `i` in the given base, in (0, 1).
fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut out = 0.0;
    let mut f = inv;
    while i > 0 {
        out += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    out
}

/// A seeded Halton sequence over the unit cube.
pub struct Halton {
    dim: usize,
    offset: u64,
}

impl Halton {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim <= PRIMES.len(), "Halton sampler supports dim <= 8");
        Self {
            dim,
            offset: 64 + splitmix64(seed) % 8192,
        }
    }

    pub fn get(&self, i: u64) -> Vec<f64> {
        (0..self.dim)
            .map(|d| radical_inverse(i + self.offset, PRIMES[d]))
            .collect()
    }
}

/// Up to `n` low-discrepancy points strictly inside the margin-shrunk domain.
pub fn sample_domain(domain: &ConvexDomain, dim: usize, margin: f64, n: usize, seed: u64) -> Vec<Vector> {
    let (lo, hi) = domain.bounding_box(dim);
    let halton = Halton::new(dim, seed);
    let mut out = Vec::with_capacity(n);
    let mut i = 0u64;
    let cap = (n as u64) * 64 + 1024;
    while out.len() < n && i < cap {
        let u = halton.get(i);
        let coords: Vec<f64> = (0..dim)
            .map(|d| lo.get(d) + u[d] * (hi.get(d) - lo.get(d)))
            .collect();
        let p = Vector::new(coords).expect("finite bbox sample");
        if contains(domain, &p, margin).unwrap_or(false) {
            out.push(p);
        }
        i += 1;
    }
    out
}

/// Points hugging the inner boundary of the margin-shrunk domain; only ball
/// domains get these (suprema of boundary-blowing integrands live there).
pub fn ring_samples(domain: &ConvexDomain, dim: usize, margin: f64, n: usize, seed: u64) -> Vec<Vector> {
    let (center, radius, nspec) = match domain {
        ConvexDomain::UnitBall(ns) => (Vector::zeros(dim), 1.0, *ns),
        ConvexDomain::Ball { center, radius } => (center.clone(), *radius, NormSpec::Euclidean),
        ConvexDomain::Box { .. } => return Vec::new(),
    };
    let r_max = radius - margin;
    let halton = Halton::new(dim + 1, sub_seed(seed, "ring"));
    let mut out = Vec::with_capacity(n);
    let mut i = 0u64;
    let cap = (n as u64) * 64 + 1024;
    while out.len() < n && i < cap {
        let u = halton.get(i);
        i += 1;
        // Direction from centered cube sample, normalized in the ball's norm.
        let dir: Vec<f64> = (0..dim).map(|d| u[d] - 0.5).collect();
        let dir = Vector::new(dir).expect("finite direction");
        let len = norm(&dir, nspec);
        if len < 1e-9 {
            continue;
        }
        // Radial factor in [1 - 1e-2, 1), denser toward the rim.
        let f = 1.0 - 1e-2 * u[dim] * u[dim];
        let p = center.add(&dir.scale(r_max * f / len));
        if contains(domain, &p, margin).unwrap_or(false) {
            out.push(p);
        }
    }
    out
}

/// Deterministic unit directions for the given norm: signed axes first, then
/// normalized axis pairs, then seeded Gaussian fills.
pub fn unit_directions(dim: usize, count: usize, nspec: NormSpec, seed: u64) -> Vec<Vector> {
    let mut dirs = Vec::with_capacity(count);
    for k in 0..dim {
        for s in [1.0, -1.0] {
            if dirs.len() < count {
                dirs.push(Vector::axis(dim, k, s));
            }
        }
    }
    'pairs: for a in 0..dim {
        for b in (a + 1)..dim {
            for (sa, sb) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                if dirs.len() >= count {
                    break 'pairs;
                }
                let mut u = Vector::zeros(dim);
                u.set(a, sa);
                u.set(b, sb);
                let len = norm(&u, nspec);
                dirs.push(u.scale(1.0 / len));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, "directions"));
    while dirs.len() < count {
        let coords: Vec<f64> = (0..dim).map(|_| gaussian(&mut rng)).collect();
        let u = Vector::new(coords).expect("finite gaussian");
        let len = norm(&u, nspec);
        if len > 1e-9 {
            dirs.push(u.scale(1.0 / len));
        }
    }
    dirs
}

/// Equally spaced planar directions (used by the lim-ratio sweep in ℝ²).
pub fn planar_directions(count: usize) -> Vec<Vector> {
    (0..count)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
            Vector::new(vec![a.cos(), a.sin()]).expect("finite angle")
        })
        .collect()
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller; deterministic given the seeded stream.
    let u1: f64 = rng.random_range(1e-12..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Uniform-ish point in the unit Euclidean ball from a ChaCha stream.
pub fn ball_point<R: Rng>(rng: &mut R, dim: usize) -> Vector {
    loop {
        let coords: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let p = Vector::new(coords).expect("finite sample");
        if p.euclidean_norm() < 1.0 {
            return p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_is_deterministic_and_in_unit_cube() {
        let h1 = Halton::new(2, 42);
        let h2 = Halton::new(2, 42);
        for i in 0..100 {
            let a = h1.get(i);
            let b = h2.get(i);
            assert_eq!(a, b);
            assert!(a.iter().all(|x| (0.0..1.0).contains(x)));
        }
        let h3 = Halton::new(2, 43);
        assert_ne!(h1.get(0), h3.get(0));
    }

    #[test]
    fn domain_samples_respect_margin() {
        let d = ConvexDomain::unit_ball(NormSpec::Euclidean);
        let pts = sample_domain(&d, 2, 1e-2, 256, 7);
        assert_eq!(pts.len(), 256);
        for p in &pts {
            assert!(p.euclidean_norm() < 1.0 - 1e-2);
        }
    }

    #[test]
    fn ring_samples_hug_the_rim() {
        let d = ConvexDomain::unit_ball(NormSpec::Euclidean);
        let pts = ring_samples(&d, 2, 1e-3, 128, 7);
        assert!(!pts.is_empty());
        for p in &pts {
            let r = p.euclidean_norm();
            assert!(r < 1.0 - 1e-3 && r > (1.0 - 1e-3) * 0.985);
        }
    }

    #[test]
    fn directions_are_unit_and_cover_axes() {
        for nspec in [NormSpec::Euclidean, NormSpec::MaxNorm] {
            let dirs = unit_directions(3, 32, nspec, 11);
            assert_eq!(dirs.len(), 32);
            for u in &dirs {
                assert!((norm(u, nspec) - 1.0).abs() < 1e-12);
            }
            assert_eq!(dirs[0], Vector::axis(3, 0, 1.0));
            assert_eq!(dirs[1], Vector::axis(3, 0, -1.0));
        }
    }
}
