//! Adaptive quadrature: bisection-refined Simpson in one dimension, nested
//! for boxes and `ℓ∞` spheres, plus a Monte Carlo accumulator.

use alloc::vec::Vec;
use core::cell::Cell;

use crate::error::{Error, Result};
use crate::math;
use crate::space::Space;

pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Every segment is bisected at least this many times before it may be accepted.
const MIN_DEPTH: u32 = 3;
const MAX_DEPTH: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: 1e-10, rel: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_bound: f64,
    pub evaluations: usize,
}

struct Segment {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
}

#[inline]
fn simpson_rule(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// `∫_a^b f` by adaptive Simpson.
pub fn simpson<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance, budget: usize) -> Result<Integral> {
    simpson_pieces(f, &[a, b], tol, budget)
}

/// Adaptive Simpson over the consecutive pieces of `breaks` (sorted,
/// endpoints included). Put known kinks of the integrand into `breaks`.
pub fn simpson_pieces<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    tol: Tolerance,
    budget: usize,
) -> Result<Integral> {
    let mut pts: Vec<f64> = breaks.to_vec();
    pts.dedup();
    if pts.len() < 2 {
        return Ok(Integral { value: 0.0, error_bound: 0.0, evaluations: 0 });
    }
    let span = pts[pts.len() - 1] - pts[0];
    if span == 0.0 {
        return Ok(Integral { value: 0.0, error_bound: 0.0, evaluations: 0 });
    }
    let mut evals = 0usize;
    let mut stack: Vec<Segment> = Vec::with_capacity(64);
    let mut fa = f(pts[0]);
    evals += 1;
    let mut coarse = 0.0;
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let m = 0.5 * (a + b);
        let fm = f(m);
        let fb = f(b);
        evals += 2;
        let whole = simpson_rule(a, b, fa, fm, fb);
        coarse += whole;
        stack.push(Segment { a, b, fa, fm, fb, whole, eps: 0.0, depth: 0 });
        fa = fb;
    }
    let eps_total = tol.abs.max(tol.rel * math::abs(coarse));
    for s in stack.iter_mut() {
        s.eps = eps_total * math::abs(s.b - s.a) / math::abs(span);
    }

    let mut value = 0.0;
    let mut err = 0.0;
    while let Some(s) = stack.pop() {
        if evals > budget {
            return Err(Error::NoConvergence { evaluations: evals, error_estimate: f64::INFINITY });
        }
        let m = 0.5 * (s.a + s.b);
        let lm = 0.5 * (s.a + m);
        let rm = 0.5 * (m + s.b);
        let flm = f(lm);
        let frm = f(rm);
        evals += 2;
        let left = simpson_rule(s.a, m, s.fa, flm, s.fm);
        let right = simpson_rule(m, s.b, s.fm, frm, s.fb);
        let delta = left + right - s.whole;
        let tiny = math::abs(s.b - s.a) <= 4.0 * f64::EPSILON * (math::abs(s.a) + math::abs(s.b));
        if (s.depth >= MIN_DEPTH && math::abs(delta) <= 15.0 * s.eps) || s.depth >= MAX_DEPTH || tiny {
            value += left + right + delta / 15.0;
            err += math::abs(delta) / 15.0;
        } else {
            let eps = 0.5 * s.eps;
            let depth = s.depth + 1;
            stack.push(Segment { a: s.a, b: m, fa: s.fa, fm: flm, fb: s.fm, whole: left, eps, depth });
            stack.push(Segment { a: m, b: s.b, fa: s.fm, fm: frm, fb: s.fb, whole: right, eps, depth });
        }
    }
    if !value.is_finite() {
        return Err(Error::NoConvergence { evaluations: evals, error_estimate: f64::NAN });
    }
    Ok(Integral { value, error_bound: err, evaluations: evals })
}

/// Sorted breakpoints `[a, …interior kinks…, b]`.
pub fn with_breaks(a: f64, b: f64, kinks: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = Vec::new();
    v.push(a);
    v.extend(kinks.into_iter().filter(|k| *k > a && *k < b));
    v.push(b);
    v.sort_by(|x, y| x.total_cmp(y));
    v.dedup();
    v
}

/// `∫_{Π[lo_i, hi_i]} f` by nested adaptive Simpson. `breaks[i]`, when
/// given, lists kink abscissae along axis `i`.
pub fn box_integral(
    f: &dyn Fn(&[f64]) -> f64,
    bounds: &[(f64, f64)],
    breaks: Option<&[Vec<f64>]>,
    tol: Tolerance,
    budget: usize,
) -> Result<Integral> {
    if bounds.is_empty() {
        let v = f(&[]);
        return Ok(Integral { value: v, error_bound: 0.0, evaluations: 1 });
    }
    let failure: Cell<Option<Error>> = Cell::new(None);
    let evals = Cell::new(0usize);
    let v = nested(f, bounds, breaks, &[], tol, budget, &failure, &evals);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let r = v?;
    Ok(Integral { value: r.value, error_bound: r.error_bound, evaluations: evals.get() })
}

#[allow(clippy::too_many_arguments)]
fn nested(
    f: &dyn Fn(&[f64]) -> f64,
    bounds: &[(f64, f64)],
    breaks: Option<&[Vec<f64>]>,
    prefix: &[f64],
    tol: Tolerance,
    budget: usize,
    failure: &Cell<Option<Error>>,
    evals: &Cell<usize>,
) -> Result<Integral> {
    let axis = prefix.len();
    let (lo, hi) = bounds[axis];
    let pts = match breaks.and_then(|b| b.get(axis)) {
        Some(k) => with_breaks(lo, hi, k.iter().copied()),
        None => with_breaks(lo, hi, core::iter::empty()),
    };
    if axis + 1 == bounds.len() {
        let mut x = prefix.to_vec();
        x.push(0.0);
        let r = simpson_pieces(
            |t| {
                x[axis] = t;
                f(&x)
            },
            &pts,
            tol,
            budget,
        )?;
        evals.set(evals.get() + r.evaluations);
        return Ok(r);
    }
    let base = prefix.to_vec();
    let worst_inner = Cell::new(0.0f64);
    let mut r = simpson_pieces(
        |t| {
            let mut p = base.clone();
            p.push(t);
            match nested(f, bounds, breaks, &p, tol, budget, failure, evals) {
                Ok(inner) => {
                    worst_inner.set(worst_inner.get().max(inner.error_bound));
                    inner.value
                }
                Err(e) => {
                    let prev = failure.take();
                    failure.set(Some(prev.unwrap_or(e)));
                    0.0
                }
            }
        },
        &pts,
        tol,
        budget,
    )?;
    r.error_bound += math::abs(hi - lo) * worst_inner.get();
    Ok(r)
}

/// `∫_{∂B_t ∩ X} g dσ` over the `ℓ∞` sphere of radius `t`: the faces
/// `u_i = ±t` (only `+t` on half-line axes), each a `(d−1)`-box.
/// On `ℝ^1` this is `g(t) + g(−t)`.
pub fn sphere_integral(
    space: &Space,
    t: f64,
    g: &dyn Fn(&[f64]) -> f64,
    tol: Tolerance,
    budget: usize,
) -> Result<Integral> {
    let d = space.d();
    let mut total = Integral { value: 0.0, error_bound: 0.0, evaluations: 0 };
    for i in 0..d {
        let signs: &[f64] = if space.is_half(i) { &[1.0] } else { &[1.0, -1.0] };
        for &s in signs {
            let bounds: Vec<(f64, f64)> =
                (0..d).filter(|j| *j != i).map(|j| if space.is_half(j) { (0.0, t) } else { (-t, t) }).collect();
            let face = |v: &[f64]| {
                let mut u = Vec::with_capacity(d);
                u.extend_from_slice(&v[..i]);
                u.push(s * t);
                u.extend_from_slice(&v[i..]);
                g(&u)
            };
            let r = box_integral(&face, &bounds, None, tol, budget)?;
            total.value += r.value;
            total.error_bound += r.error_bound;
            total.evaluations += r.evaluations;
        }
    }
    Ok(total)
}

/// Running mean and standard error (Welford).
#[derive(Debug, Clone, Copy, Default)]
pub struct MeanAccumulator {
    n: u64,
    mean: f64,
    m2: f64,
}

impl MeanAccumulator {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        if self.n < 2 {
            return f64::INFINITY;
        }
        math::sqrt(self.m2 / (self.n - 1) as f64 / self.n as f64)
    }
}
