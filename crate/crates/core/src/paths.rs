//! Rectifiable paths as polylines: lengths, restriction, path Riemann sums,
//! and path integrals.
//!
//! Polylines are parameterized by cumulative arclength fraction t ∈ [0, 1],
//! which makes restriction and refinement norm-independent at the interface:
//! the sub-path over [a, b] has length (b − a)·ℓ exactly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{norm, NormSpec, Vector};

/// Number of cells the dyadic integrator refuses to exceed.
pub const REFINEMENT_CAP: usize = 1 << 20;

/// A rectifiable path given by its vertices, at least two of them.
#[derive(Debug, Clone, Serialize)]
pub struct Polyline {
    points: Vec<Vector>,
    norm: NormSpec,
    /// Cumulative vertex arclengths; `cum[0] = 0`, `cum[last] = length`.
    #[serde(skip)]
    cum: Vec<f64>,
}

impl PartialEq for Polyline {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.norm == other.norm
    }
}

impl Polyline {
    pub fn new(points: Vec<Vector>, n: NormSpec) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::DegeneratePath("polyline needs at least 2 points".into()));
        }
        let dim = points[0].dim();
        for p in &points {
            p.check_dim(dim)?;
        }
        let mut cum = Vec::with_capacity(points.len());
        cum.push(0.0);
        for w in points.windows(2) {
            let gap = norm(&w[1].sub(&w[0]), n);
            if gap == 0.0 {
                return Err(Error::DegeneratePath("consecutive duplicate points".into()));
            }
            cum.push(cum.last().unwrap() + gap);
        }
        Ok(Self { points, norm: n, cum })
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn norm_spec(&self) -> NormSpec {
        self.norm
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    /// Exact length: the supremum over partitions is attained for polylines.
    pub fn length(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    pub fn first(&self) -> &Vector {
        &self.points[0]
    }

    pub fn last(&self) -> &Vector {
        self.points.last().unwrap()
    }

    /// Point at arclength fraction `t` ∈ [0, 1]. Exact at vertices.
    pub fn point_at(&self, t: f64) -> Vector {
        let t = t.clamp(0.0, 1.0);
        let target = t * self.length();
        // Index of the first cum entry >= target.
        let i = match self
            .cum
            .binary_search_by(|c| c.partial_cmp(&target).unwrap())
        {
            Ok(i) => i,
            Err(i) => i,
        };
        if i == 0 {
            return self.points[0].clone();
        }
        let i = i.min(self.cum.len() - 1);
        let seg_len = self.cum[i] - self.cum[i - 1];
        let s = ((target - self.cum[i - 1]) / seg_len).clamp(0.0, 1.0);
        self.points[i - 1].lerp(&self.points[i], s)
    }

    /// Sub-path over arclength fractions [c, d]; 0 ≤ c < d ≤ 1.
    pub fn restrict(&self, c: f64, d: f64) -> Result<Polyline> {
        if !(0.0..=1.0).contains(&c) || !(0.0..=1.0).contains(&d) || c >= d {
            return Err(Error::InvalidParameter(format!(
                "restrict requires 0 <= c < d <= 1, got c={c}, d={d}"
            )));
        }
        let lo = c * self.length();
        let hi = d * self.length();
        let mut pts = vec![self.point_at(c)];
        for (i, p) in self.points.iter().enumerate() {
            if self.cum[i] > lo && self.cum[i] < hi && pts.last().unwrap() != p {
                pts.push(p.clone());
            }
        }
        let end = self.point_at(d);
        if pts.last().unwrap() != &end {
            pts.push(end);
        }
        Polyline::new(pts, self.norm)
    }

    /// CSV with a `# dim=<m> norm=<kind>` header and one point per line.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# dim={} norm={}\n", self.dim(), self.norm.label());
        for p in &self.points {
            let row: Vec<String> = p.coords().iter().map(|c| format!("{c}")).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Polyline> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty polyline CSV".into()))?;
        let header = header
            .strip_prefix('#')
            .ok_or_else(|| Error::Parse("polyline CSV must start with a # header".into()))?;
        let mut dim: Option<usize> = None;
        let mut nspec: Option<NormSpec> = None;
        for tok in header.split_whitespace() {
            if let Some(v) = tok.strip_prefix("dim=") {
                dim = Some(v.parse().map_err(|_| Error::Parse(format!("bad dim in header: {v}")))?);
            } else if let Some(v) = tok.strip_prefix("norm=") {
                nspec = Some(NormSpec::parse(v)?);
            }
        }
        let dim = dim.ok_or_else(|| Error::Parse("header missing dim=".into()))?;
        let nspec = nspec.ok_or_else(|| Error::Parse("header missing norm=".into()))?;
        let mut pts = Vec::new();
        for line in lines {
            let coords: Vec<f64> = line
                .split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad coordinate {c:?}"))))
                .collect::<Result<_>>()?;
            let p = Vector::new(coords)?;
            p.check_dim(dim)?;
            pts.push(p);
        }
        Polyline::new(pts, nspec)
    }
}

/// The segment [x, y]: a two-point polyline with length ∥x − y∥.
pub fn segment(x: &Vector, y: &Vector, n: NormSpec) -> Result<Polyline> {
    x.check_dim(y.dim())?;
    if x == y {
        return Err(Error::DegeneratePath("segment endpoints coincide".into()));
    }
    Polyline::new(vec![x.clone(), y.clone()], n)
}

/// A tagged partition of [0, 1]: strictly increasing knots with one tag per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    knots: Vec<f64>,
    tags: Vec<f64>,
}

/// Tag placement rule for uniform partitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagRule {
    Left,
    Midpoint,
    Right,
}

impl Partition {
    pub fn new(knots: Vec<f64>, tags: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 || knots[0] != 0.0 || *knots.last().unwrap() != 1.0 {
            return Err(Error::InvalidParameter("knots must run from 0 to 1".into()));
        }
        if knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("knots must be strictly increasing".into()));
        }
        if tags.len() != knots.len() - 1 {
            return Err(Error::InvalidParameter("need one tag per cell".into()));
        }
        for (i, s) in tags.iter().enumerate() {
            if !(knots[i] <= *s && *s <= knots[i + 1]) {
                return Err(Error::InvalidParameter(format!(
                    "tag {s} escapes its cell [{}, {}]",
                    knots[i],
                    knots[i + 1]
                )));
            }
        }
        Ok(Self { knots, tags })
    }

    pub fn uniform(cells: usize, rule: TagRule) -> Result<Self> {
        if cells == 0 {
            return Err(Error::InvalidParameter("need at least one cell".into()));
        }
        let knots: Vec<f64> = (0..=cells).map(|i| i as f64 / cells as f64).collect();
        let tags: Vec<f64> = (0..cells)
            .map(|i| match rule {
                TagRule::Left => knots[i],
                TagRule::Midpoint => 0.5 * (knots[i] + knots[i + 1]),
                TagRule::Right => knots[i + 1],
            })
            .collect();
        Partition::new(knots, tags)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn tags(&self) -> &[f64] {
        &self.tags
    }
}

/// Σ f(γ(s_i)) ℓ(γ|cell_i). Errors on a non-finite integrand value at a tag.
pub fn riemann_sum<F: Fn(&Vector) -> f64>(f: F, p: &Polyline, part: &Partition) -> Result<f64> {
    let total = p.length();
    let mut sum = 0.0;
    for i in 0..part.tags.len() {
        let v = f(&p.point_at(part.tags[i]));
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("integrand at tag t={}", part.tags[i])));
        }
        sum += v * (part.knots[i + 1] - part.knots[i]) * total;
    }
    Ok(sum)
}

/// Path integral ∫_γ f by uniform dyadic refinement with midpoint tags.
///
/// Cell counts double until successive sums differ by less than `tol`;
/// the last sum is returned. Deterministic.
pub fn integrate<F: Fn(&Vector) -> f64>(f: F, p: &Polyline, tol: f64) -> Result<f64> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    let total = p.length();
    let eval_n = |n: usize| -> Result<f64> {
        let w = total / n as f64;
        let mut sum = 0.0;
        for i in 0..n {
            let t = (i as f64 + 0.5) / n as f64;
            let v = f(&p.point_at(t));
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("integrand at t={t}")));
            }
            sum += v * w;
        }
        Ok(sum)
    };
    let mut prev = eval_n(1)?;
    let mut n = 2;
    while n <= REFINEMENT_CAP {
        let cur = eval_n(n)?;
        if (cur - prev).abs() < tol {
            return Ok(cur);
        }
        prev = cur;
        n *= 2;
    }
    Err(Error::IntegrationDidNotConverge {
        prev,
        last: eval_n(REFINEMENT_CAP)?,
    })
}

/// ∫_{[x,y]} f = ∥x−y∥ ∫₀¹ f((1−t)x + ty) dt by adaptive Simpson quadrature.
pub fn integrate_segment<F: Fn(&Vector) -> f64>(
    f: F,
    x: &Vector,
    y: &Vector,
    n: NormSpec,
    tol: f64,
) -> Result<f64> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    x.check_dim(y.dim())?;
    if x == y {
        return Err(Error::DegeneratePath("segment endpoints coincide".into()));
    }
    let len = norm(&y.sub(x), n);
    let g = |t: f64| -> Result<f64> {
        let v = f(&x.lerp(y, t));
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(format!("integrand at t={t}")))
        }
    };
    // Tolerance applies to the final (length-scaled) value.
    let inner_tol = tol / len.max(f64::MIN_POSITIVE);
    let fa = g(0.0)?;
    let fm = g(0.5)?;
    let fb = g(1.0)?;
    let whole = simpson(fa, fm, fb, 1.0);
    let integral = adaptive_simpson(&g, 0.0, 1.0, fa, fm, fb, whole, inner_tol, 48)?;
    Ok(len * integral)
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h * (fa + 4.0 * fm + fb) / 6.0
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson<G: Fn(f64) -> Result<f64>>(
    g: &G,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = g(lm)?;
    let frm = g(rm)?;
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let refined = left + right;
    if (refined - whole).abs() <= 15.0 * tol || b - a < 1e-14 {
        return Ok(refined + (refined - whole) / 15.0);
    }
    if depth == 0 {
        return Err(Error::IntegrationDidNotConverge {
            prev: whole,
            last: refined,
        });
    }
    let l = adaptive_simpson(g, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?;
    let r = adaptive_simpson(g, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?;
    Ok(l + r)
}
