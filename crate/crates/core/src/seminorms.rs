//! Bloch numbers, Lipschitz numbers, the admissible-function catalogue, and
//! the 𝔅 = 𝔏 equality certifier.
//!
//! 𝔅_f = sup_x ω̃(f(x)) d*_f(x) / ω(x) over the domain;
//! 𝔏_f = sup_{x≠y} Ψ_f(x, y) d(f(x), f(y)) / d(x, y) over off-diagonal pairs.
//!
//! All suprema are estimated from below: low-discrepancy global samples per
//! boundary shell, local refinement around the incumbent argmax, and a final
//! deterministic compass polish. Certificates compare the two estimates by
//! relative gap; they never claim ground truth for possibly-unattained
//! suprema.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::derivatives::{d_star, DerivativeConfig, MappingUnderTest};
use crate::error::{Error, Result};
use crate::geometry::{contains, norm, project, NormSpec, Vector};
use crate::om::OMFunction;
use crate::omega::{omega_distance, GeodesicConfig};
use crate::sampling;
use crate::weights::Weight;

/// Settings shared by the supremum estimators. Everything is seeded; the same
/// seed reproduces samples, argmaxes, and estimates exactly.
#[derive(Debug, Clone, Serialize)]
pub struct SupremumConfig {
    /// Low-discrepancy interior samples per shell.
    pub interior_samples: usize,
    /// Off-diagonal pair samples (half global, half near-diagonal).
    pub pair_samples: usize,
    /// Local refinement rounds around the incumbent argmax.
    pub refine_rounds: usize,
    /// Boundary margins swept, strictly decreasing (shells grow).
    pub shell_deltas: Vec<f64>,
    pub seed: u64,
}

impl Default for SupremumConfig {
    fn default() -> Self {
        Self {
            interior_samples: 4096,
            pair_samples: 8192,
            refine_rounds: 3,
            shell_deltas: vec![1e-2, 1e-3, 1e-4],
            seed: 42,
        }
    }
}

impl SupremumConfig {
    pub fn validate(&self) -> Result<()> {
        if self.interior_samples == 0 || self.pair_samples == 0 {
            return Err(Error::InvalidParameter("sample counts must be positive".into()));
        }
        if self.shell_deltas.is_empty()
            || self.shell_deltas.iter().any(|d| !(d.is_finite() && *d > 0.0))
            || self.shell_deltas.windows(2).any(|p| p[0] <= p[1])
        {
            return Err(Error::InvalidParameter(
                "shell_deltas must be positive and strictly decreasing".into(),
            ));
        }
        Ok(())
    }

    fn smallest_shell(&self) -> f64 {
        *self.shell_deltas.last().unwrap()
    }
}

/// Per-shell supremum record.
#[derive(Debug, Clone, Serialize)]
pub struct BlochShell {
    pub delta: f64,
    pub value: f64,
    pub argmax: Vector,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlochEstimate {
    /// Lower bound on the true supremum.
    pub estimate: f64,
    pub argmax: Vector,
    pub shells: Vec<BlochShell>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LipschitzEstimate {
    /// Lower bound on the true supremum.
    pub estimate: f64,
    pub argmax_pair: (Vector, Vector),
    /// Pairs discarded because ∥x−y∥ fell below 1e−12.
    pub degenerate_skipped: usize,
}

fn domain_scale(f: &MappingUnderTest) -> f64 {
    let (lo, hi) = f.domain().bounding_box(f.domain_dim());
    (0..f.domain_dim())
        .map(|i| hi.get(i) - lo.get(i))
        .fold(0.0_f64, f64::max)
        / 2.0
}

/// Deterministic compass ascent of `eval` within the margin-shrunk domain.
fn compass_polish<E>(
    f: &MappingUnderTest,
    margin: f64,
    start: (f64, Vector),
    step0: f64,
    eval: &mut E,
) -> Result<(f64, Vector)>
where
    E: FnMut(&Vector) -> Result<f64>,
{
    let dim = start.1.dim();
    let (mut best, mut arg) = start;
    let mut step = step0;
    let mut accepted = 0usize;
    while step > 1e-11 && accepted < 20_000 {
        let mut moved = false;
        for k in 0..dim {
            for sign in [1.0, -1.0] {
                let mut cand = arg.clone();
                cand.set(k, cand.get(k) + sign * step);
                let cand = project(f.domain(), &cand, margin)?;
                if cand == arg {
                    continue;
                }
                let v = eval(&cand)?;
                if v > best + 1e-15 * best.abs().max(1.0) {
                    best = v;
                    arg = cand;
                    moved = true;
                    accepted += 1;
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    Ok((best, arg))
}

/// 𝔅_f estimate: per-shell supremum of ω̃(f(x)) d*_f(x) / ω(x).
///
/// Shells are processed largest-margin first and each shell inherits the
/// previous argmax, so the per-shell values are non-decreasing and boundary
/// behavior (attained vs. approached suprema) is visible in the shell table.
pub fn bloch_number(
    f: &MappingUnderTest,
    w: &Weight,
    cow: &Weight,
    cfg: &SupremumConfig,
) -> Result<BlochEstimate> {
    cfg.validate()?;
    let dim = f.domain_dim();
    let dcfg = DerivativeConfig {
        seed: sampling::sub_seed(cfg.seed, "bloch-dstar"),
        directions: DerivativeConfig::default().directions.max(2 * dim),
        ..DerivativeConfig::default()
    };
    let mut integrand = |x: &Vector| -> Result<f64> {
        let fx = f.evaluate(x);
        let num = cow.evaluate(&fx)?;
        let den = w.evaluate(x)?;
        Ok(num * d_star(f, x, &dcfg)? / den)
    };

    let scale = domain_scale(f);
    let mut shells: Vec<BlochShell> = Vec::with_capacity(cfg.shell_deltas.len());
    let mut carry: Option<Vector> = None;
    for (si, &delta) in cfg.shell_deltas.iter().enumerate() {
        let mut best: Option<(f64, Vector)> = None;
        let consider = |x: &Vector, best: &mut Option<(f64, Vector)>, integrand: &mut dyn FnMut(&Vector) -> Result<f64>| -> Result<()> {
            let v = integrand(x)?;
            if best.as_ref().map_or(true, |(b, _)| v > *b) {
                *best = Some((v, x.clone()));
            }
            Ok(())
        };
        if let Some(c) = &carry {
            consider(c, &mut best, &mut integrand)?;
        }
        let n_global = cfg.interior_samples - cfg.interior_samples / 4;
        let seed = sampling::sub_seed(cfg.seed, &format!("bloch-shell-{si}"));
        for x in sampling::sample_domain(f.domain(), dim, delta, n_global, seed) {
            consider(&x, &mut best, &mut integrand)?;
        }
        for x in sampling::ring_samples(f.domain(), dim, delta, cfg.interior_samples / 4, seed) {
            consider(&x, &mut best, &mut integrand)?;
        }
        let (_, mut argmax) = best.clone().expect("at least one sample per shell");
        // Halton refinement with radii shrinking from coarse to the shell width.
        let r0 = 0.1 * scale;
        let r_min = (delta * 0.5).min(r0);
        for round in 0..cfg.refine_rounds {
            let t = if cfg.refine_rounds <= 1 {
                1.0
            } else {
                round as f64 / (cfg.refine_rounds - 1) as f64
            };
            let r = r0 * (r_min / r0).powf(t);
            let h = sampling::Halton::new(dim, sampling::sub_seed(cfg.seed, &format!("bloch-refine-{si}-{round}")));
            let count = (cfg.interior_samples / 4).max(64);
            for i in 0..count {
                let u = h.get(i as u64);
                let off: Vec<f64> = u.iter().map(|c| 2.0 * c - 1.0).collect();
                let off = Vector::new(off).expect("finite offset");
                if off.euclidean_norm() > 1.0 {
                    continue;
                }
                let cand = project(f.domain(), &argmax.add(&off.scale(r)), delta)?;
                consider(&cand, &mut best, &mut integrand)?;
            }
            argmax = best.as_ref().unwrap().1.clone();
        }
        let polished = compass_polish(f, delta, best.clone().unwrap(), 0.05 * scale, &mut integrand)?;
        shells.push(BlochShell {
            delta,
            value: polished.0,
            argmax: polished.1.clone(),
        });
        carry = Some(polished.1);
    }
    let best_shell = shells
        .iter()
        .max_by(|a, b| a.value.partial_cmp(&b.value).unwrap())
        .expect("at least one shell");
    Ok(BlochEstimate {
        estimate: best_shell.value,
        argmax: best_shell.argmax.clone(),
        shells,
    })
}

/// 𝔏_f estimate over off-diagonal pairs.
///
/// Half the pair budget is spent on independent pairs, half on near-diagonal
/// perturbations (the supremum is typically approached as y → x), followed by
/// refinement around the incumbent pair, diagonal pulls, and a joint compass
/// polish.
pub fn lipschitz_number(
    f: &MappingUnderTest,
    psi: &AdmissibleFn,
    cfg: &SupremumConfig,
) -> Result<LipschitzEstimate> {
    cfg.validate()?;
    let dim = f.domain_dim();
    let dn = f.domain_norm();
    let cn = f.codomain_norm();
    let margin = cfg.smallest_shell();
    let mut degenerate = 0usize;
    let mut ratio = |x: &Vector, y: &Vector, degenerate: &mut usize| -> Result<Option<f64>> {
        let gap = norm(&x.sub(y), dn);
        if gap < 1e-12 {
            *degenerate += 1;
            return Ok(None);
        }
        let fx = f.evaluate(x);
        let fy = f.evaluate(y);
        let p = psi.evaluate_with(x, y, Some(&fx), Some(&fy))?;
        let v = p * norm(&fx.sub(&fy), cn) / gap;
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("Lipschitz ratio at a sampled pair: {v}")));
        }
        Ok(Some(v))
    };

    let mut best: Option<(f64, Vector, Vector)> = None;
    let consider =
        |x: &Vector, y: &Vector, best: &mut Option<(f64, Vector, Vector)>, degenerate: &mut usize, ratio: &mut dyn FnMut(&Vector, &Vector, &mut usize) -> Result<Option<f64>>| -> Result<()> {
            if let Some(v) = ratio(x, y, degenerate)? {
                if best.as_ref().map_or(true, |(b, _, _)| v > *b) {
                    *best = Some((v, x.clone(), y.clone()));
                }
            }
            Ok(())
        };

    // Global pairs.
    let n_global = cfg.pair_samples / 2;
    let h = sampling::Halton::new((2 * dim).min(8), sampling::sub_seed(cfg.seed, "lip-global"));
    let (lo, hi) = f.domain().bounding_box(dim);
    let mut produced = 0usize;
    let mut i = 0u64;
    while produced < n_global && i < n_global as u64 * 64 + 1024 {
        let u = h.get(i);
        i += 1;
        let mut coords_x = Vec::with_capacity(dim);
        let mut coords_y = Vec::with_capacity(dim);
        for d in 0..dim {
            coords_x.push(lo.get(d) + u[d % u.len()] * (hi.get(d) - lo.get(d)));
            let ud = u[(dim + d) % u.len()];
            coords_y.push(lo.get(d) + ud * (hi.get(d) - lo.get(d)));
        }
        let x = Vector::new(coords_x).expect("finite sample");
        let y = Vector::new(coords_y).expect("finite sample");
        if contains(f.domain(), &x, margin)? && contains(f.domain(), &y, margin)? {
            produced += 1;
            consider(&x, &y, &mut best, &mut degenerate, &mut ratio)?;
        }
    }

    // Near-diagonal pairs.
    let n_diag = cfg.pair_samples - n_global;
    let centers = sampling::sample_domain(
        f.domain(),
        dim,
        margin,
        n_diag,
        sampling::sub_seed(cfg.seed, "lip-centers"),
    );
    let dirs = sampling::unit_directions(dim, (2 * dim).max(16), dn, sampling::sub_seed(cfg.seed, "lip-dirs"));
    let radii = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5];
    for (k, x) in centers.iter().enumerate() {
        let u = &dirs[k % dirs.len()];
        let r = radii[k % radii.len()];
        let y = x.add(&u.scale(r));
        if contains(f.domain(), &y, margin)? {
            consider(x, &y, &mut best, &mut degenerate, &mut ratio)?;
        }
    }

    let (_, mut bx, mut by) = best.clone().ok_or_else(|| {
        Error::InvalidParameter("no valid pair sample found; domain/margin too tight".into())
    })?;

    // Refinement around the incumbent pair plus diagonal pulls.
    let scale = domain_scale(f);
    let pulls = [0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 3e-3, 1e-3, 3e-4, 1e-4];
    for round in 0..cfg.refine_rounds.max(1) {
        let r = 0.05 * scale * (0.05_f64).powf(round as f64 / cfg.refine_rounds.max(1) as f64);
        let mut rng = ChaCha8Rng::seed_from_u64(sampling::sub_seed(cfg.seed, &format!("lip-refine-{round}")));
        for _ in 0..(cfg.pair_samples / 8).max(64) {
            let ox = sampling::ball_point(&mut rng, dim).scale(r);
            let oy = sampling::ball_point(&mut rng, dim).scale(r);
            let x = project(f.domain(), &bx.add(&ox), margin)?;
            let y = project(f.domain(), &by.add(&oy), margin)?;
            consider(&x, &y, &mut best, &mut degenerate, &mut ratio)?;
        }
        for &s in &pulls {
            let y = bx.lerp(&by, s);
            consider(&bx, &y, &mut best, &mut degenerate, &mut ratio)?;
        }
        bx = best.as_ref().unwrap().1.clone();
        by = best.as_ref().unwrap().2.clone();
    }

    // Joint compass polish over both endpoints.
    let mut step = 0.02 * scale;
    let mut accepted = 0usize;
    while step > 1e-11 && accepted < 20_000 {
        let mut moved = false;
        for endpoint in 0..2 {
            for k in 0..dim {
                for sign in [1.0, -1.0] {
                    let (mut cx, mut cy) = (bx.clone(), by.clone());
                    let target = if endpoint == 0 { &mut cx } else { &mut cy };
                    target.set(k, target.get(k) + sign * step);
                    let cx = project(f.domain(), &cx, margin)?;
                    let cy = project(f.domain(), &cy, margin)?;
                    if let Some(v) = ratio(&cx, &cy, &mut degenerate)? {
                        let cur = best.as_ref().unwrap().0;
                        if v > cur + 1e-15 * cur.abs().max(1.0) {
                            best = Some((v, cx.clone(), cy.clone()));
                            bx = cx;
                            by = cy;
                            moved = true;
                            accepted += 1;
                        }
                    }
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    // Final diagonal pulls from the polished pair.
    for &s in &pulls {
        let y = bx.lerp(&by, s);
        consider(&bx, &y, &mut best, &mut degenerate, &mut ratio)?;
    }

    let (estimate, ax, ay) = best.unwrap();
    Ok(LipschitzEstimate {
        estimate,
        argmax_pair: (ax, ay),
        degenerate_skipped: degenerate,
    })
}

type PsiEval = Arc<dyn Fn(&Vector, &Vector, Option<&Vector>, Option<&Vector>) -> Result<f64> + Send + Sync>;

/// A candidate admissible function Ψ_f(x, y): symmetric, positive, matching
/// ω̃(f(x))/ω(x) on the diagonal, and dominated by the d_ω̃/d_ω ratio.
#[derive(Clone)]
pub struct AdmissibleFn {
    label: String,
    /// True when Ψ consults f; the estimators then share one f-evaluation per
    /// pair point with the distance ratio.
    requires_mapping: bool,
    eval: PsiEval,
}

impl std::fmt::Debug for AdmissibleFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AdmissibleFn")
            .field("label", &self.label)
            .field("requires_mapping", &self.requires_mapping)
            .finish()
    }
}

impl AdmissibleFn {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn requires_mapping(&self) -> bool {
        self.requires_mapping
    }

    pub fn evaluate(&self, x: &Vector, y: &Vector) -> Result<f64> {
        (self.eval)(x, y, None, None)
    }

    /// Evaluation with precomputed images f(x), f(y), shared with the caller.
    pub fn evaluate_with(&self, x: &Vector, y: &Vector, fx: Option<&Vector>, fy: Option<&Vector>) -> Result<f64> {
        (self.eval)(x, y, fx, fy)
    }

    /// Ψ scaled by a positive constant. Scaling by c > 1 breaks condition (4)
    /// and is used to exercise the admissibility checker's failure path.
    pub fn scaled(&self, c: f64) -> AdmissibleFn {
        let inner = self.eval.clone();
        AdmissibleFn {
            label: format!("scaled:{c}:{}", self.label),
            requires_mapping: self.requires_mapping,
            eval: Arc::new(move |x, y, fx, fy| Ok(c * inner(x, y, fx, fy)?)),
        }
    }
}

/// Symmetrization Ψ̃(x, y) = max{Ψ(x, y), Ψ(y, x)}; idempotent on symmetric
/// inputs.
pub fn symmetrize(psi: &AdmissibleFn) -> AdmissibleFn {
    let inner = psi.eval.clone();
    AdmissibleFn {
        label: format!("sym({})", psi.label),
        requires_mapping: psi.requires_mapping,
        eval: Arc::new(move |x, y, fx, fy| {
            let a = inner(x, y, fx, fy)?;
            let b = inner(y, x, fy, fx)?;
            Ok(a.max(b))
        }),
    }
}

/// Ψ(x, y) = (φ′(∥x∥) φ′(∥y∥))^(−1/2), for weights that are derivatives of an
/// operator monotone function.
pub fn psi_geometric_mean_phi(phi: OMFunction, nspec: NormSpec) -> AdmissibleFn {
    AdmissibleFn {
        label: format!("geometric_mean:{}", phi.label()),
        requires_mapping: false,
        eval: Arc::new(move |x, y, _, _| {
            let a = phi.derivative(norm(x, nspec))?;
            let b = phi.derivative(norm(y, nspec))?;
            Ok(1.0 / (a * b).sqrt())
        }),
    }
}

/// Ψ_f(x, y) = min{ω̃(f(x)), ω̃(f(y))} / max{ω(x), ω(y)}, admissible for
/// norm-monotone weights on convex domains.
pub fn psi_minmax(w: &Weight, cow: &Weight, f: &MappingUnderTest) -> AdmissibleFn {
    let w = w.clone();
    let cow = cow.clone();
    let f = f.clone();
    AdmissibleFn {
        label: "minmax".into(),
        requires_mapping: true,
        eval: Arc::new(move |x, y, fx, fy| {
            let fx = match fx {
                Some(v) => v.clone(),
                None => f.evaluate(x),
            };
            let fy = match fy {
                Some(v) => v.clone(),
                None => f.evaluate(y),
            };
            let num = cow.evaluate(&fx)?.min(cow.evaluate(&fy)?);
            let den = w.evaluate(x)?.max(w.evaluate(y)?);
            Ok(num / den)
        }),
    }
}

/// Ψ(x, y) = √(1−∥x∥²) √(1−∥y∥²) on the Euclidean unit ball.
pub fn psi_hyperbolic() -> AdmissibleFn {
    AdmissibleFn {
        label: "hyperbolic".into(),
        requires_mapping: false,
        eval: Arc::new(|x, y, _, _| {
            let a = 1.0 - x.dot(x);
            let b = 1.0 - y.dot(y);
            if a <= 0.0 || b <= 0.0 {
                return Err(Error::OutsideDomain(
                    "hyperbolic admissible function needs points inside the unit ball".into(),
                ));
            }
            Ok((a * b).sqrt())
        }),
    }
}

/// Ψ_f(x, y) = √(1−∥x∥²)√(1−∥y∥²) / (√(1+∥f(x)∥²)√(1+∥f(y)∥²)): the normal
/// (spherical-codomain) variant.
pub fn psi_spherical_normal(f: &MappingUnderTest) -> AdmissibleFn {
    let f = f.clone();
    AdmissibleFn {
        label: "spherical_normal".into(),
        requires_mapping: true,
        eval: Arc::new(move |x, y, fx, fy| {
            let a = 1.0 - x.dot(x);
            let b = 1.0 - y.dot(y);
            if a <= 0.0 || b <= 0.0 {
                return Err(Error::OutsideDomain(
                    "spherical_normal admissible function needs points inside the unit ball".into(),
                ));
            }
            let fx = match fx {
                Some(v) => v.clone(),
                None => f.evaluate(x),
            };
            let fy = match fy {
                Some(v) => v.clone(),
                None => f.evaluate(y),
            };
            Ok((a * b).sqrt() / ((1.0 + fx.dot(&fx)) * (1.0 + fy.dot(&fy))).sqrt())
        }),
    }
}

/// The piecewise distance-ratio admissible function
/// Ψ_f = [d_ω̃(f(x), f(y)) / d(f(x), f(y))] ÷ [d_ω(x, y) / d(x, y)], with the
/// two degenerate branches (f(x) = f(y), and x = y). Distances use a weight's
/// closed form when it carries one and the geodesic optimizer otherwise.
pub fn psi_ratio(w: &Weight, cow: &Weight, f: &MappingUnderTest, geo: GeodesicConfig) -> AdmissibleFn {
    let w = w.clone();
    let cow = cow.clone();
    let f = f.clone();
    let dn = f.domain_norm();
    let cn = f.codomain_norm();
    let dist = move |weight: &Weight, a: &Vector, b: &Vector| -> Result<f64> {
        match weight.exact_distance(a, b) {
            Some(d) => d,
            None => Ok(omega_distance(a, b, weight, &geo)?.value),
        }
    };
    AdmissibleFn {
        label: "ratio".into(),
        requires_mapping: true,
        eval: Arc::new(move |x, y, fx, fy| {
            let fx = match fx {
                Some(v) => v.clone(),
                None => f.evaluate(x),
            };
            let fy = match fy {
                Some(v) => v.clone(),
                None => f.evaluate(y),
            };
            if x == y {
                return Ok(cow.evaluate(&fx)? / w.evaluate(x)?);
            }
            let dx = norm(&x.sub(y), dn);
            let d_omega = dist(&w, x, y)?;
            let dy = norm(&fx.sub(&fy), cn);
            if dy < 1e-15 {
                return Ok(cow.evaluate(&fx)? / (d_omega / dx));
            }
            let d_co = dist(&cow, &fx, &fy)?;
            Ok((d_co / dy) / (d_omega / dx))
        }),
    }
}

/// Builds a catalogue Ψ from its CLI label:
/// `hyperbolic | minmax | geometric_mean:<om-spec> | spherical_normal | ratio`,
/// optionally wrapped as `scaled:<c>:<label>`.
pub fn psi_from_spec(spec: &str, f: &MappingUnderTest, w: &Weight, cow: &Weight) -> Result<AdmissibleFn> {
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("scaled:") {
        let (c, inner) = rest
            .split_once(':')
            .ok_or_else(|| Error::Parse("scaled spec needs scaled:<c>:<label>".into()))?;
        let c: f64 = c.parse().map_err(|_| Error::Parse(format!("bad scale factor {c:?}")))?;
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParameter("scale factor must be positive".into()));
        }
        return Ok(psi_from_spec(inner, f, w, cow)?.scaled(c));
    }
    match spec {
        "hyperbolic" => Ok(psi_hyperbolic()),
        "minmax" => Ok(psi_minmax(w, cow, f)),
        "spherical_normal" => Ok(psi_spherical_normal(f)),
        "ratio" => Ok(psi_ratio(w, cow, f, GeodesicConfig { control_points: 17, max_iters: 500, ..GeodesicConfig::default() })),
        _ => {
            if let Some(om) = spec.strip_prefix("geometric_mean:") {
                Ok(psi_geometric_mean_phi(OMFunction::parse(om)?, f.domain_norm()))
            } else {
                Err(Error::Parse(format!("unknown admissible-function spec {spec:?}")))
            }
        }
    }
}

/// Settings for the admissibility checker.
#[derive(Debug, Clone, Serialize)]
pub struct CheckConfig {
    /// Pair budget for symmetry/diagonal and closed-form condition (4) runs.
    pub pairs: usize,
    /// Pair budget when condition (4) needs numerical geodesics.
    pub numerical_pairs: usize,
    /// Base points for the liminf (condition 3) evidence.
    pub liminf_points: usize,
    /// Sampling margin keeping pairs strictly interior.
    pub margin: f64,
    /// Relative accuracy attributed to numerical distance computations; the
    /// condition-(4) budget is three times this.
    pub distance_rel_tol: f64,
    pub geodesic: GeodesicConfig,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            pairs: 1000,
            numerical_pairs: 48,
            liminf_points: 24,
            margin: 1e-3,
            distance_rel_tol: 1e-3,
            geodesic: GeodesicConfig {
                control_points: 17,
                max_iters: 500,
                ..GeodesicConfig::default()
            },
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairWitness {
    pub x: Vector,
    pub y: Vector,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub condition: String,
    /// How the condition was evaluated (sampled, closed-form, numerical...).
    pub route: String,
    pub checked: usize,
    pub worst_slack: f64,
    pub passed: bool,
    pub note: String,
    pub witnesses: Vec<PairWitness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub conditions: Vec<ConditionReport>,
    pub passed: bool,
}

fn sample_interior(f: &MappingUnderTest, margin: f64, rng: &mut ChaCha8Rng) -> Vector {
    let dim = f.domain_dim();
    let (lo, hi) = f.domain().bounding_box(dim);
    loop {
        let coords: Vec<f64> = (0..dim)
            .map(|d| rng.random_range(lo.get(d)..hi.get(d)))
            .collect();
        let p = Vector::new(coords).expect("finite sample");
        if contains(f.domain(), &p, margin).unwrap_or(false) {
            return p;
        }
    }
}

fn sample_pair(f: &MappingUnderTest, margin: f64, rng: &mut ChaCha8Rng) -> (Vector, Vector) {
    let x = sample_interior(f, margin, rng);
    if rng.random_range(0.0..1.0) < 0.5 {
        loop {
            let y = sample_interior(f, margin, rng);
            if y != x {
                return (x, y);
            }
        }
    }
    // Near-diagonal: log-uniform radius.
    let dim = f.domain_dim();
    loop {
        let r = 10f64.powf(rng.random_range(-6.0..-1.0));
        let u = sampling::ball_point(rng, dim);
        let len = u.euclidean_norm();
        if len < 1e-6 {
            continue;
        }
        let y = x.add(&u.scale(r / len));
        if contains(f.domain(), &y, margin).unwrap_or(false) && y != x {
            return (x, y);
        }
    }
}

/// Per-condition admissibility report for Ψ against f, ω, ω̃.
///
/// Condition (3) is one-sided finite evidence (a liminf cannot be refuted by
/// finitely many samples, only supported). Condition (4) uses closed-form
/// distances whenever both weights carry one, and numerical geodesics with a
/// 3× `distance_rel_tol` budget otherwise. With ω̃ ≡ 1 the simplified
/// condition (4′) Ψ(x, y)·d_ω(x, y) ≤ d(x, y) is checked instead.
pub fn check_admissible(
    psi: &AdmissibleFn,
    f: &MappingUnderTest,
    w: &Weight,
    cow: &Weight,
    ccfg: &CheckConfig,
) -> Result<AdmissibilityReport> {
    let dn = f.domain_norm();
    let cn = f.codomain_norm();
    let mut conditions = Vec::new();

    // (1) symmetry.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(sampling::sub_seed(ccfg.seed, "adm-sym"));
        let mut worst = 0.0_f64;
        let mut witnesses: Vec<PairWitness> = Vec::new();
        for _ in 0..ccfg.pairs {
            let (x, y) = sample_pair(f, ccfg.margin, &mut rng);
            let a = psi.evaluate(&x, &y)?;
            let b = psi.evaluate(&y, &x)?;
            let slack = (a - b).abs();
            if slack > worst {
                worst = slack;
                witnesses = vec![PairWitness { x, y, lhs: a, rhs: b, slack }];
            }
        }
        let passed = worst <= 1e-12;
        conditions.push(ConditionReport {
            condition: "(1) symmetry".into(),
            route: "sampled".into(),
            checked: ccfg.pairs,
            worst_slack: worst,
            passed,
            note: String::new(),
            witnesses: if passed { Vec::new() } else { witnesses },
        });
    }

    // (2) diagonal identity Ψ(x, x) = ω̃(f(x))/ω(x).
    {
        let mut rng = ChaCha8Rng::seed_from_u64(sampling::sub_seed(ccfg.seed, "adm-diag"));
        let mut worst = 0.0_f64;
        let mut witnesses: Vec<PairWitness> = Vec::new();
        for _ in 0..ccfg.pairs {
            let x = sample_interior(f, ccfg.margin, &mut rng);
            let fx = f.evaluate(&x);
            let want = cow.evaluate(&fx)? / w.evaluate(&x)?;
            let got = psi.evaluate(&x, &x)?;
            let slack = (got - want).abs() / want.abs().max(1.0);
            if slack > worst {
                worst = slack;
                witnesses = vec![PairWitness { x: x.clone(), y: x, lhs: got, rhs: want, slack }];
            }
        }
        let passed = worst <= 1e-12;
        conditions.push(ConditionReport {
            condition: "(2) diagonal".into(),
            route: "sampled".into(),
            checked: ccfg.pairs,
            worst_slack: worst,
            passed,
            note: String::new(),
            witnesses: if passed { Vec::new() } else { witnesses },
        });
    }

    // (3) liminf_{y→x} Ψ(x, y) ≥ Ψ(x, x): one-sided shrinking-radius evidence.
    {
        let mut rng = ChaCha8Rng::seed_from_u64(sampling::sub_seed(ccfg.seed, "adm-liminf"));
        let dirs = sampling::unit_directions(f.domain_dim(), (2 * f.domain_dim()).max(4), dn, sampling::sub_seed(ccfg.seed, "adm-liminf-dirs"));
        let radii = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
        let mut worst = f64::NEG_INFINITY;
        let mut witnesses: Vec<PairWitness> = Vec::new();
        let mut checked = 0usize;
        for _ in 0..ccfg.liminf_points {
            let x = sample_interior(f, ccfg.margin, &mut rng);
            let base = psi.evaluate(&x, &x)?;
            // Evidence at the smallest radius that stays inside.
            for u in &dirs {
                let mut probe = None;
                for &r in radii.iter().rev() {
                    let y = x.add(&u.scale(r));
                    if contains(f.domain(), &y, 0.0)? && y != x {
                        probe = Some(y);
                        break;
                    }
                }
                if let Some(y) = probe {
                    checked += 1;
                    let v = psi.evaluate(&x, &y)?;
                    let slack = base - v; // positive slack = evidence against
                    if slack > worst {
                        worst = slack;
                        witnesses = vec![PairWitness { x: x.clone(), y, lhs: v, rhs: base, slack }];
                    }
                }
            }
        }
        let tol = 1e-4;
        let passed = worst <= tol;
        conditions.push(ConditionReport {
            condition: "(3) liminf toward diagonal".into(),
            route: "sampled".into(),
            checked,
            worst_slack: worst,
            passed,
            note: "one-sided: finite evidence cannot refute a liminf".into(),
            witnesses: if passed { Vec::new() } else { witnesses },
        });
    }

    // (4) / (4′) distance-ratio domination.
    {
        let simplified = cow.is_constant_one();
        let exact_w = w.exact_distance_fn().is_some();
        let exact_cow = cow.exact_distance_fn().is_some();
        let all_exact = exact_w && (simplified || exact_cow);
        let pairs = if all_exact { ccfg.pairs } else { ccfg.numerical_pairs };
        let budget = if all_exact {
            1e-12
        } else {
            3.0 * ccfg.distance_rel_tol
        };
        let d_w = |a: &Vector, b: &Vector| -> Result<f64> {
            match w.exact_distance(a, b) {
                Some(d) => d,
                None => Ok(omega_distance(a, b, w, &ccfg.geodesic)?.value),
            }
        };
        let d_cow = |a: &Vector, b: &Vector| -> Result<f64> {
            match cow.exact_distance(a, b) {
                Some(d) => d,
                None => Ok(omega_distance(a, b, cow, &ccfg.geodesic)?.value),
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(sampling::sub_seed(ccfg.seed, "adm-ratio"));
        let mut worst = f64::NEG_INFINITY;
        let mut witnesses: Vec<PairWitness> = Vec::new();
        for _ in 0..pairs {
            let (x, y) = sample_pair(f, ccfg.margin, &mut rng);
            let psival;
            let lhs;
            let rhs;
            if simplified {
                // (4′): Ψ(x, y) d_ω(x, y) ≤ d(x, y).
                psival = psi.evaluate(&x, &y)?;
                lhs = psival * d_w(&x, &y)?;
                rhs = norm(&x.sub(&y), dn);
            } else {
                // (4): Ψ(x, y) d(f(x), f(y))/d(x, y) ≤ d_ω̃(f(x), f(y))/d_ω(x, y).
                let fx = f.evaluate(&x);
                let fy = f.evaluate(&y);
                psival = psi.evaluate_with(&x, &y, Some(&fx), Some(&fy))?;
                lhs = psival * norm(&fx.sub(&fy), cn) / norm(&x.sub(&y), dn);
                rhs = d_cow(&fx, &fy)? / d_w(&x, &y)?;
            }
            // Violation measured relative to the right-hand side.
            let slack = (lhs - rhs) / rhs.abs().max(1e-300);
            if slack > worst {
                worst = slack;
                if witnesses.len() < 3 || slack > witnesses[0].slack {
                    witnesses.insert(0, PairWitness { x, y, lhs, rhs, slack });
                    witnesses.truncate(3);
                }
            }
        }
        let passed = worst <= budget;
        conditions.push(ConditionReport {
            condition: if simplified { "(4') simplified domination".into() } else { "(4) distance-ratio domination".into() },
            route: if all_exact { "closed-form distances".into() } else { format!("numerical geodesics, budget 3x{}", ccfg.distance_rel_tol) },
            checked: pairs,
            worst_slack: worst,
            passed,
            note: if all_exact { String::new() } else { "upper-bound distances inflate the left side slightly".into() },
            witnesses: if passed { Vec::new() } else { witnesses },
        });
    }

    let passed = conditions.iter().all(|c| c.passed);
    Ok(AdmissibilityReport { conditions, passed })
}

/// A 𝔅 = 𝔏 certificate.
#[derive(Debug, Clone, Serialize)]
pub struct EqualityCertificate {
    pub bloch_estimate: Option<f64>,
    pub lipschitz_estimate: Option<f64>,
    pub argmax_point: Option<Vector>,
    pub argmax_pair: Option<(Vector, Vector)>,
    /// |𝔅 − 𝔏| / max(𝔅, 𝔏, 1e−300).
    pub relative_gap: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    /// True when the caller skipped the admissibility precheck.
    pub admissibility_waived: bool,
    pub failures: Vec<String>,
    pub config: SupremumConfig,
    pub bloch_shells: Vec<BlochShell>,
}

/// Runs both estimators under one seed and compares them by relative gap.
/// Estimation failures embed in the certificate rather than aborting it.
pub fn certify_equality(
    f: &MappingUnderTest,
    w: &Weight,
    cow: &Weight,
    psi: &AdmissibleFn,
    cfg: &SupremumConfig,
    tolerance: f64,
    admissibility_waived: bool,
) -> EqualityCertificate {
    let mut failures = Vec::new();
    let bloch = match bloch_number(f, w, cow, cfg) {
        Ok(b) => Some(b),
        Err(e) => {
            failures.push(format!("bloch estimation failed: {e}"));
            None
        }
    };
    let lip = match lipschitz_number(f, psi, cfg) {
        Ok(l) => Some(l),
        Err(e) => {
            failures.push(format!("lipschitz estimation failed: {e}"));
            None
        }
    };
    let relative_gap = match (&bloch, &lip) {
        (Some(b), Some(l)) => {
            Some((b.estimate - l.estimate).abs() / b.estimate.max(l.estimate).max(1e-300))
        }
        _ => None,
    };
    let pass = failures.is_empty() && relative_gap.map_or(false, |g| g <= tolerance);
    EqualityCertificate {
        bloch_estimate: bloch.as_ref().map(|b| b.estimate),
        lipschitz_estimate: lip.as_ref().map(|l| l.estimate),
        argmax_point: bloch.as_ref().map(|b| b.argmax.clone()),
        argmax_pair: lip.as_ref().map(|l| l.argmax_pair.clone()),
        relative_gap,
        tolerance,
        pass,
        admissibility_waived,
        failures,
        config: cfg.clone(),
        bloch_shells: bloch.map(|b| b.shells).unwrap_or_default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ConvexDomain;

    fn v(coords: &[f64]) -> Vector {
        Vector::new(coords.to_vec()).unwrap()
    }

    fn identity_disk() -> MappingUnderTest {
        MappingUnderTest::new(
            "identity",
            ConvexDomain::unit_ball(NormSpec::Euclidean),
            2,
            2,
            NormSpec::Euclidean,
            |x| x.clone(),
        )
        .with_jacobian(|_| crate::derivatives::Matrix::identity(2))
    }

    fn small_cfg() -> SupremumConfig {
        SupremumConfig {
            interior_samples: 512,
            pair_samples: 1024,
            refine_rounds: 2,
            shell_deltas: vec![1e-2, 1e-3],
            seed: 42,
        }
    }

    #[test]
    fn psi_constructors_diagonal_and_symmetry() {
        let f = identity_disk();
        let w = Weight::hyperbolic();
        let cow = Weight::constant_one(ConvexDomain::ball(Vector::zeros(2), 1e12).unwrap());
        let psis = vec![
            psi_hyperbolic(),
            psi_geometric_mean_phi(OMFunction::Artanh, NormSpec::Euclidean),
            psi_minmax(&w, &cow, &f),
            psi_spherical_normal(&f),
        ];
        let pts = [v(&[0.0, 0.0]), v(&[0.3, -0.2]), v(&[-0.7, 0.1]), v(&[0.5, 0.5])];
        for psi in &psis {
            for x in &pts {
                for y in &pts {
                    let a = psi.evaluate(x, y).unwrap();
                    let b = psi.evaluate(y, x).unwrap();
                    assert!((a - b).abs() <= 1e-15, "{} not symmetric", psi.label());
                    assert!(a > 0.0);
                }
            }
        }
        // geometric_mean(artanh) coincides with the hyperbolic Ψ.
        let g = psi_geometric_mean_phi(OMFunction::Artanh, NormSpec::Euclidean);
        let h = psi_hyperbolic();
        for x in &pts {
            for y in &pts {
                let a = g.evaluate(x, y).unwrap();
                let b = h.evaluate(x, y).unwrap();
                assert!((a - b).abs() < 1e-14);
            }
        }
        // geometric_mean at the origin pair evaluates to 1.
        assert!((g.evaluate(&v(&[0.0, 0.0]), &v(&[0.0, 0.0])).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn minmax_diagonal_matches_weight_ratio() {
        let f = identity_disk();
        let w = Weight::hyperbolic();
        let cow = Weight::constant_one(ConvexDomain::ball(Vector::zeros(2), 1e12).unwrap());
        let psi = psi_minmax(&w, &cow, &f);
        for x in [v(&[0.0, 0.0]), v(&[0.4, 0.3]), v(&[-0.6, 0.2])] {
            let got = psi.evaluate(&x, &x).unwrap();
            let want = 1.0 / w.evaluate(&x).unwrap();
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn minmax_dominated_by_geometric_mean() {
        // min{1/φ′(∥x∥), 1/φ′(∥y∥)} ≤ (φ′(∥x∥) φ′(∥y∥))^(−1/2).
        let f = identity_disk();
        let w = Weight::hyperbolic();
        let cow = Weight::constant_one(ConvexDomain::ball(Vector::zeros(2), 1e12).unwrap());
        let mm = psi_minmax(&w, &cow, &f);
        let gm = psi_geometric_mean_phi(OMFunction::Artanh, NormSpec::Euclidean);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1000 {
            let x = sampling::ball_point(&mut rng, 2).scale(0.95);
            let y = sampling::ball_point(&mut rng, 2).scale(0.95);
            let a = mm.evaluate(&x, &y).unwrap();
            let b = gm.evaluate(&x, &y).unwrap();
            assert!(a <= b + 1e-12, "min-max {a} must not exceed geometric mean {b}");
        }
    }

    #[test]
    fn symmetrize_is_idempotent_and_fixes_asymmetry() {
        let asym = AdmissibleFn {
            label: "toy".into(),
            requires_mapping: false,
            eval: Arc::new(|x, y, _, _| Ok(1.0 + x.get(0) - 0.5 * y.get(0) + x.dot(y).abs())),
        };
        let sym = symmetrize(&asym);
        let twice = symmetrize(&sym);
        let pts = [v(&[0.1, 0.2]), v(&[-0.3, 0.5]), v(&[0.7, -0.1])];
        for x in &pts {
            for y in &pts {
                let a = sym.evaluate(x, y).unwrap();
                let b = sym.evaluate(y, x).unwrap();
                assert!((a - b).abs() < 1e-15);
                let m = asym.evaluate(x, y).unwrap().max(asym.evaluate(y, x).unwrap());
                assert!((a - m).abs() < 1e-15);
                assert!((twice.evaluate(x, y).unwrap() - a).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn bloch_identity_disk_is_one() {
        let f = identity_disk();
        let w = Weight::hyperbolic();
        let cow = Weight::constant_one(ConvexDomain::ball(Vector::zeros(2), 1e12).unwrap());
        let b = bloch_number(&f, &w, &cow, &small_cfg()).unwrap();
        assert!((b.estimate - 1.0).abs() < 1e-3, "estimate {}", b.estimate);
        assert!(b.argmax.euclidean_norm() < 0.05, "argmax should sit near 0");
    }

    #[test]
    fn bloch_constant_map_is_zero() {
        let f = MappingUnderTest::new(
            "const",
            ConvexDomain::unit_ball(NormSpec::Euclidean),
            2,
            2,
            NormSpec::Euclidean,
            |_| v(&[0.25, -0.4]),
        )
        .with_jacobian(|_| crate::derivatives::Matrix::zeros(2, 2));
        let w = Weight::hyperbolic();
        let cow = Weight::constant_one(ConvexDomain::ball(Vector::zeros(2), 1e12).unwrap());
        let b = bloch_number(&f, &w, &cow, &small_cfg()).unwrap();
        assert_eq!(b.estimate, 0.0);
    }

    #[test]
    fn lipschitz_identity_disk_is_one() {
        let f = identity_disk();
        let l = lipschitz_number(&f, &psi_hyperbolic(), &small_cfg()).unwrap();
        assert!((l.estimate - 1.0).abs() < 2e-2, "estimate {}", l.estimate);
        // Supremum approached at the diagonal near the origin.
        assert!(l.argmax_pair.0.euclidean_norm() < 0.1);
    }

    #[test]
    fn certify_identity_disk_passes() {
        let f = identity_disk();
        let w = Weight::hyperbolic();
        let cow = Weight::constant_one(ConvexDomain::ball(Vector::zeros(2), 1e12).unwrap());
        let cert = certify_equality(&f, &w, &cow, &psi_hyperbolic(), &small_cfg(), 0.02, true);
        assert!(cert.pass, "certificate failed: {cert:?}");
        assert!(cert.failures.is_empty());
        assert!(cert.relative_gap.unwrap() <= 0.02);
    }

    #[test]
    fn scaling_coweight_scales_estimates_and_keeps_argmax() {
        let f = identity_disk();
        let w = Weight::hyperbolic();
        let cow1 = Weight::constant_one(ConvexDomain::ball(Vector::zeros(2), 1e12).unwrap());
        let c = 2.5;
        let cow2 = Weight::new(
            "const-c",
            ConvexDomain::ball(Vector::zeros(2), 1e12).unwrap(),
            crate::weights::Monotonicity::None,
            move |_| c,
        );
        let cfg = small_cfg();
        let b1 = bloch_number(&f, &w, &cow1, &cfg).unwrap();
        let b2 = bloch_number(&f, &w, &cow2, &cfg).unwrap();
        assert_eq!(b1.argmax, b2.argmax, "same seed, same samples, same argmax");
        assert!((b2.estimate - c * b1.estimate).abs() < 1e-12 * c);
    }

    #[test]
    fn check_admissible_hyperbolic_passes_and_scaled_fails() {
        let f = identity_disk();
        let w = Weight::hyperbolic();
        let cow = Weight::constant_one(ConvexDomain::ball(Vector::zeros(2), 1e12).unwrap());
        let ccfg = CheckConfig { pairs: 400, liminf_points: 8, ..CheckConfig::default() };
        let rep = check_admissible(&psi_hyperbolic(), &f, &w, &cow, &ccfg).unwrap();
        assert!(rep.passed, "{rep:?}");

        let broken = psi_hyperbolic().scaled(2.0);
        let rep = check_admissible(&broken, &f, &w, &cow, &ccfg).unwrap();
        assert!(!rep.passed);
        let cond4 = rep.conditions.iter().find(|c| c.condition.starts_with("(4")).unwrap();
        assert!(!cond4.passed);
        assert!(!cond4.witnesses.is_empty(), "failure must carry witnesses");
    }

    #[test]
    fn psi_spec_parsing() {
        let f = identity_disk();
        let w = Weight::hyperbolic();
        let cow = Weight::constant_one(ConvexDomain::ball(Vector::zeros(2), 1e12).unwrap());
        for spec in ["hyperbolic", "minmax", "spherical_normal", "ratio", "geometric_mean:artanh", "scaled:2:hyperbolic"] {
            let psi = psi_from_spec(spec, &f, &w, &cow).unwrap();
            assert!(psi.evaluate(&v(&[0.1, 0.0]), &v(&[0.0, 0.2])).unwrap() > 0.0);
        }
        assert!(psi_from_spec("nope", &f, &w, &cow).is_err());
        assert!(psi_from_spec("scaled:x:hyperbolic", &f, &w, &cow).is_err());
    }
}
