//! Integrals over balls, the local seminorms `⌋f⌈_h`, and the norms used
//! by every inequality, for functions that carry certified metadata.
//!
//! A supremum over a non-compact space cannot be computed by sampling, so
//! the quantities that enter a bound come from a function's [`Certificate`];
//! the sampled estimates here are lower bounds used to cross-check them.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::math;
use crate::modulus::Modulus;
use crate::quadrature::{self, Integral, MeanAccumulator, Tolerance, DEFAULT_BUDGET};
use crate::rng;
use crate::space::{integer_box, linf_distance, linf_norm, Point, Space, SpaceKind};

/// How a numeric value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    /// One-dimensional radial reduction with adaptive quadrature.
    Radial1D,
    MonteCarlo,
    LatticeExact,
    /// Nested adaptive quadrature over a box or sphere.
    Cubature,
    /// Maximum over a finite search grid (a lower estimate of a supremum).
    GridSearch,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Radial1D => "radial_1d",
            Method::MonteCarlo => "monte_carlo",
            Method::LatticeExact => "lattice_exact",
            Method::Cubature => "cubature",
            Method::GridSearch => "grid_search",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub method: Method,
    pub tol: Tolerance,
    pub mc_samples: usize,
    pub seed: u64,
    /// Maximum integrand evaluations for one adaptive integral.
    pub budget: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            method: Method::Radial1D,
            tol: Tolerance::default(),
            mc_samples: 100_000,
            seed: 0,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl QuadratureSpec {
    /// The most exact method available: lattice sums on lattices, closed
    /// forms for power moduli, radial quadrature otherwise.
    pub fn auto(space: &Space, omega: &Modulus) -> Self {
        let method = match (space.kind(), omega) {
            (SpaceKind::Lattice, _) => Method::LatticeExact,
            (SpaceKind::Continuum, Modulus::Power { .. }) => Method::ClosedForm,
            (SpaceKind::Continuum, Modulus::Table { .. }) => Method::Radial1D,
        };
        QuadratureSpec { method, ..Default::default() }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_tol(mut self, abs: f64, rel: f64) -> Self {
        self.tol = Tolerance::new(abs, rel);
        self
    }

    pub fn with_samples(mut self, n: usize, seed: u64) -> Self {
        self.mc_samples = n;
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol.abs > 0.0) || !(self.tol.rel > 0.0) {
            return Err(Error::InvalidParameter("quadrature tolerances must be positive"));
        }
        if self.method == Method::MonteCarlo && self.mc_samples < 2 {
            return Err(Error::InvalidParameter("Monte Carlo needs at least two samples"));
        }
        Ok(())
    }
}

/// A value with its provenance and an error bound (one standard error for
/// Monte Carlo).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub method: Method,
    pub error_bound: f64,
}

impl Estimate {
    pub fn exact(value: f64, method: Method) -> Self {
        Estimate { value, method, error_bound: 0.0 }
    }

    fn from_integral(r: Integral, method: Method) -> Self {
        Estimate { value: r.value, method, error_bound: r.error_bound }
    }

    pub fn scaled(self, k: f64) -> Self {
        Estimate { value: self.value * k, method: self.method, error_bound: self.error_bound * math::abs(k) }
    }
}

/// `f` is constant (`value`) outside the open ball `B_radius`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exterior {
    pub radius: f64,
    pub value: f64,
}

/// Proven facts about a function. Every field is an exact value or an upper
/// bound; absent fields are unknown.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Certificate {
    /// Upper bound for `‖f‖_{H^ω}`.
    pub holder_bound: Option<f64>,
    /// `‖f‖_{B(X)}`.
    pub sup_norm: Option<f64>,
    /// `(h, ⌋f⌈_h)`.
    pub seminorm_h: Option<(f64, f64)>,
    /// `⌋f⌈ = sup_h ⌋f⌈_h`.
    pub seminorm_global: Option<f64>,
    pub l1_norm: Option<f64>,
    /// `‖G_f‖_∞` for an upper gradient `G_f`.
    pub upper_gradient_bound: Option<f64>,
    pub exterior: Option<Exterior>,
}

impl Certificate {
    /// Radius outside of which `f` vanishes.
    pub fn support_radius(&self) -> Option<f64> {
        self.exterior.filter(|e| e.value == 0.0).map(|e| e.radius)
    }

    /// Certified `⌋f⌈_h` at exactly this `h`.
    pub fn seminorm_at(&self, h: f64) -> Option<f64> {
        self.seminorm_h.filter(|(hc, _)| math::abs(hc - h) <= 1e-14 * h.max(1.0)).map(|(_, v)| v)
    }

    /// The certificate of `λ f`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let a = math::abs(lambda);
        Certificate {
            holder_bound: self.holder_bound.map(|v| v * a),
            sup_norm: self.sup_norm.map(|v| v * a),
            seminorm_h: self.seminorm_h.map(|(h, v)| (h, v * a)),
            seminorm_global: self.seminorm_global.map(|v| v * a),
            l1_norm: self.l1_norm.map(|v| v * a),
            upper_gradient_bound: self.upper_gradient_bound.map(|v| v * a),
            exterior: self.exterior.map(|e| Exterior { radius: e.radius, value: e.value * lambda }),
        }
    }
}

/// A real function on a space.
pub trait RealFunction: Send + Sync {
    fn eval(&self, x: &[f64]) -> f64;

    fn certificate(&self) -> Certificate {
        Certificate::default()
    }

    /// `∫_{B_h} f dμ` over the ball centred at `θ`, when the function knows
    /// it (radial closed forms).
    fn origin_ball_integral(&self, _space: &Space, _h: f64, _spec: &QuadratureSpec) -> Option<Result<Estimate>> {
        None
    }

    /// Abscissae along `axis` where `f` may have kinks; used as quadrature
    /// breakpoints.
    fn axis_kinks(&self, _axis: usize) -> Vec<f64> {
        Vec::new()
    }
}

struct Closure<F> {
    f: F,
    cert: Certificate,
}

impl<F: Fn(&[f64]) -> f64 + Send + Sync> RealFunction for Closure<F> {
    fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    fn certificate(&self) -> Certificate {
        self.cert
    }
}

struct Scaled {
    inner: FunctionModel,
    lambda: f64,
}

impl RealFunction for Scaled {
    fn eval(&self, x: &[f64]) -> f64 {
        self.lambda * self.inner.eval(x)
    }

    fn certificate(&self) -> Certificate {
        self.inner.certificate().scaled(self.lambda)
    }

    fn origin_ball_integral(&self, space: &Space, h: f64, spec: &QuadratureSpec) -> Option<Result<Estimate>> {
        self.inner.0.origin_ball_integral(space, h, spec).map(|r| r.map(|e| e.scaled(self.lambda)))
    }

    fn axis_kinks(&self, axis: usize) -> Vec<f64> {
        self.inner.0.axis_kinks(axis)
    }
}

/// Shared handle to a [`RealFunction`].
#[derive(Clone)]
pub struct FunctionModel(Arc<dyn RealFunction>);

impl fmt::Debug for FunctionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionModel").field("certificate", &self.certificate()).finish()
    }
}

impl FunctionModel {
    pub fn new<F: RealFunction + 'static>(f: F) -> Self {
        FunctionModel(Arc::new(f))
    }

    pub fn from_fn<F: Fn(&[f64]) -> f64 + Send + Sync + 'static>(f: F) -> Self {
        Self::with_certificate(f, Certificate::default())
    }

    pub fn with_certificate<F: Fn(&[f64]) -> f64 + Send + Sync + 'static>(f: F, cert: Certificate) -> Self {
        FunctionModel(Arc::new(Closure { f, cert }))
    }

    pub fn zero() -> Self {
        Self::with_certificate(
            |_| 0.0,
            Certificate {
                holder_bound: Some(0.0),
                sup_norm: Some(0.0),
                seminorm_global: Some(0.0),
                l1_norm: Some(0.0),
                upper_gradient_bound: Some(0.0),
                exterior: Some(Exterior { radius: 0.0, value: 0.0 }),
                seminorm_h: None,
            },
        )
    }

    pub fn constant(c: f64) -> Self {
        Self::with_certificate(
            move |_| c,
            Certificate {
                holder_bound: Some(0.0),
                sup_norm: Some(math::abs(c)),
                upper_gradient_bound: Some(0.0),
                exterior: Some(Exterior { radius: 0.0, value: c }),
                ..Default::default()
            },
        )
    }

    /// `λ f` with the certificate rescaled.
    pub fn scaled(&self, lambda: f64) -> Self {
        FunctionModel(Arc::new(Scaled { inner: self.clone(), lambda }))
    }

    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.0.eval(x)
    }

    pub fn certificate(&self) -> Certificate {
        self.0.certificate()
    }

    pub fn axis_kinks(&self, axis: usize) -> Vec<f64> {
        self.0.axis_kinks(axis)
    }

    pub fn as_real_function(&self) -> &dyn RealFunction {
        &*self.0
    }
}

fn radius_check(space: &Space, h: f64) -> Result<()> {
    space.check_radius(h)
}

/// `2^{d−m} d ∫_0^h g(t) t^{d−1} dt`, i.e. `∫_{B_h} g(ρ(u, θ)) dμ(u)` on
/// the continuum. The substitution `t = h s²` tames cusps of `g` at 0.
pub fn radial_integral(
    space: &Space,
    h: f64,
    g: &dyn Fn(f64) -> f64,
    kinks: &[f64],
    tol: Tolerance,
    budget: usize,
) -> Result<Integral> {
    let d = space.d();
    let c = math::pow2(d - space.m()) * d as f64;
    let breaks =
        quadrature::with_breaks(0.0, 1.0, kinks.iter().filter(|k| **k > 0.0 && **k < h).map(|k| math::sqrt(k / h)));
    let integrand = |s: f64| {
        let t = h * s * s;
        g(t) * math::powi(t, d as i32 - 1) * 2.0 * h * s
    };
    let r = quadrature::simpson_pieces(integrand, &breaks, Tolerance::new(tol.abs / c, tol.rel), budget)?;
    Ok(Integral { value: c * r.value, error_bound: c * r.error_bound, evaluations: r.evaluations })
}

/// Number of lattice points of `B_{k+1/2}`, i.e. with `|u|_∞ ≤ k`.
fn lattice_count_within(space: &Space, k: i64) -> f64 {
    if k < 0 {
        return 0.0;
    }
    math::powi((k + 1) as f64, space.m() as i32) * math::powi((2 * k + 1) as f64, (space.d() - space.m()) as i32)
}

/// `Σ_{u ∈ B_h} g(|u|_∞)` on a lattice, grouped by shells.
pub(crate) fn lattice_radial_sum(space: &Space, h: f64, g: &dyn Fn(f64) -> f64) -> f64 {
    let n = Space::lattice_reach(h);
    (0..=n).map(|k| (lattice_count_within(space, k) - lattice_count_within(space, k - 1)) * g(k as f64)).sum()
}

/// Mean of `g` over `B_h` by Monte Carlo, scaled by `μ(B_h)`.
fn mc_ball_mean(space: &Space, h: f64, spec: &QuadratureSpec, g: &dyn Fn(&[f64]) -> f64) -> Result<Estimate> {
    spec.validate()?;
    let mu = space.ball_measure(h)?;
    let mut acc = MeanAccumulator::default();
    match space.kind() {
        SpaceKind::Continuum => {
            let mut block = 0u64;
            let mut done = 0usize;
            while done < spec.mc_samples {
                let mut r = rng::stream(spec.seed, block);
                let take = (spec.mc_samples - done).min(rng::BLOCK);
                for _ in 0..take {
                    let u = space.sample_one(h, &mut r);
                    acc.push(g(&u));
                }
                done += take;
                block += 1;
            }
        }
        SpaceKind::Lattice => {
            let ranges = space.lattice_ball_ranges(h);
            let mut block = 0u64;
            let mut done = 0usize;
            let mut u = vec![0.0; space.d()];
            while done < spec.mc_samples {
                let mut r = rng::stream(spec.seed, block);
                let take = (spec.mc_samples - done).min(rng::BLOCK);
                for _ in 0..take {
                    for (c, (lo, hi)) in u.iter_mut().zip(&ranges) {
                        *c = rng::int_in(&mut r, *lo, *hi) as f64;
                    }
                    acc.push(g(&u));
                }
                done += take;
                block += 1;
            }
        }
    }
    Ok(Estimate { value: mu * acc.mean(), method: Method::MonteCarlo, error_bound: mu * acc.std_error() })
}

/// `I(h) = ∫_{B_h} ω(ρ(u, θ)) dμ(u)`.
pub fn ball_integral_of_modulus(space: &Space, omega: &Modulus, h: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    radius_check(space, h)?;
    spec.validate()?;
    let d = space.d() as f64;
    match (spec.method, space.kind()) {
        (Method::ClosedForm, SpaceKind::Continuum) => match omega {
            Modulus::Power { alpha } => Ok(Estimate::exact(
                d * math::pow2(space.d() - space.m()) / (d + alpha) * math::powf(h, d + alpha),
                Method::ClosedForm,
            )),
            Modulus::Table { .. } => Err(Error::MethodMismatch("no closed form for table moduli")),
        },
        (Method::Radial1D, SpaceKind::Continuum) => {
            let r = radial_integral(space, h, &|t| omega.value(t), &omega.kinks(), spec.tol, spec.budget)?;
            Ok(Estimate::from_integral(r, Method::Radial1D))
        }
        (Method::LatticeExact, SpaceKind::Lattice) => {
            Ok(Estimate::exact(lattice_radial_sum(space, h, &|t| omega.value(t)), Method::LatticeExact))
        }
        (Method::MonteCarlo, _) => mc_ball_mean(space, h, spec, &|u| omega.value(linf_norm(u))),
        (Method::LatticeExact, SpaceKind::Continuum) => Err(Error::MethodMismatch("lattice sums on a continuum space")),
        (_, SpaceKind::Lattice) => Err(Error::MethodMismatch("continuum quadrature on a lattice space")),
        (Method::Cubature | Method::GridSearch, SpaceKind::Continuum) => {
            Err(Error::MethodMismatch("use ClosedForm, Radial1D or MonteCarlo for ball integrals"))
        }
    }
}

/// `∫_{x+B_h} f dμ`.
///
/// Lattice: exact sum. Continuum: the function's own radial closed form at
/// `x = θ` when available, Monte Carlo if requested, nested adaptive
/// quadrature over the box `x + B_h` otherwise.
pub fn integral_over_ball(
    f: &FunctionModel,
    space: &Space,
    x: &[f64],
    h: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    radius_check(space, h)?;
    space.check_point(x)?;
    if spec.method == Method::MonteCarlo {
        return mc_ball_mean(space, h, spec, &|u| {
            let y: Vec<f64> = x.iter().zip(u).map(|(a, b)| a + b).collect();
            f.eval(&y)
        });
    }
    match space.kind() {
        SpaceKind::Lattice => {
            let ranges = space.lattice_ball_ranges(h);
            let mut sum = 0.0;
            let mut y = vec![0.0; space.d()];
            for u in integer_box(&ranges) {
                for ((yi, xi), ui) in y.iter_mut().zip(x).zip(&u) {
                    *yi = xi + *ui as f64;
                }
                sum += f.eval(&y);
            }
            Ok(Estimate::exact(sum, Method::LatticeExact))
        }
        SpaceKind::Continuum => {
            if x.iter().all(|c| *c == 0.0) {
                if let Some(r) = f.as_real_function().origin_ball_integral(space, h, spec) {
                    return r;
                }
            }
            let bounds: Vec<(f64, f64)> =
                space.ball_box(h).into_iter().zip(x).map(|((lo, hi), xi)| (xi + lo, xi + hi)).collect();
            let breaks: Vec<Vec<f64>> = (0..space.d()).map(|i| f.axis_kinks(i)).collect();
            let g = |y: &[f64]| f.eval(y);
            let r = quadrature::box_integral(&g, &bounds, Some(&breaks), spec.tol, spec.budget)?;
            Ok(Estimate::from_integral(r, Method::Cubature))
        }
    }
}

/// Region searched for suprema: the box `|x|_∞ ≤ radius` intersected with
/// the space, on a uniform grid of the given step (every lattice point on a
/// lattice), plus `θ` and any extra candidate points.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub radius: f64,
    pub step: Option<f64>,
    pub extra: Vec<Point>,
}

impl Window {
    pub fn new(radius: f64) -> Self {
        Window { radius, step: None, extra: Vec::new() }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = Some(step);
        self
    }

    pub fn with_points(mut self, pts: impl IntoIterator<Item = Point>) -> Self {
        self.extra.extend(pts);
        self
    }

    /// Search points. `default_step` applies on the continuum when no step
    /// was set.
    pub fn points(&self, space: &Space, default_step: f64) -> Result<Vec<Vec<f64>>> {
        if !(self.radius >= 0.0) {
            return Err(Error::InvalidParameter("window radius must be nonnegative"));
        }
        let mut pts: Vec<Vec<f64>> = match space.kind() {
            SpaceKind::Lattice => space
                .lattice_window(math::floor(self.radius) as i64)?
                .into_iter()
                .map(|p| p.into_iter().map(|c| c as f64).collect())
                .collect(),
            SpaceKind::Continuum => {
                let step = self.step.unwrap_or(default_step);
                if !(step > 0.0) {
                    return Err(Error::InvalidParameter("grid step must be positive"));
                }
                let axis = |lo: f64, hi: f64| -> Vec<f64> {
                    let n = (math::ceil((hi - lo) / step) as usize).max(1);
                    (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect()
                };
                let axes: Vec<Vec<f64>> = (0..space.d())
                    .map(|i| if space.is_half(i) { axis(0.0, self.radius) } else { axis(-self.radius, self.radius) })
                    .collect();
                let mut out: Vec<Vec<f64>> = vec![Vec::new()];
                for a in &axes {
                    let mut next = Vec::with_capacity(out.len() * a.len());
                    for p in &out {
                        for v in a {
                            let mut q = p.clone();
                            q.push(*v);
                            next.push(q);
                        }
                    }
                    out = next;
                }
                out.push(vec![0.0; space.d()]);
                out
            }
        };
        pts.extend(self.extra.iter().filter(|p| space.contains(p)).map(|p| p.coords().to_vec()));
        Ok(pts)
    }
}

/// Sampled `⌋f⌈_h` next to the certified value (when the function has one).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeminormEstimate {
    pub h: f64,
    /// Lower estimate: the maximum over the search points.
    pub estimate: Estimate,
    pub certified: Option<f64>,
    /// `false` when the lower estimate exceeds the certified value by more
    /// than the tolerance.
    pub consistent: bool,
}

impl SeminormEstimate {
    /// The certified value when present, otherwise the lower estimate.
    pub fn value(&self) -> f64 {
        self.certified.unwrap_or(self.estimate.value)
    }
}

fn require_window(f: &FunctionModel, window: f64, extra: f64) -> Result<()> {
    if let Some(r) = f.certificate().support_radius() {
        let required = r + extra;
        if window < required {
            return Err(Error::WindowTooSmall { window, required });
        }
    }
    Ok(())
}

fn consistent(estimate: &Estimate, certified: Option<f64>, tol: &Tolerance) -> bool {
    match certified {
        None => true,
        Some(c) => {
            estimate.value
                <= c + tol.abs.max(tol.rel * math::abs(c)) + 10.0 * estimate.error_bound + 1e-9 * math::abs(c)
        }
    }
}

/// Lower estimate of `⌋f⌈_h = sup_x |∫_{x+B_h} f dμ|` over the window
/// (exact on a lattice when the window covers the support).
pub fn seminorm_local(
    f: &FunctionModel,
    space: &Space,
    h: f64,
    window: &Window,
    spec: &QuadratureSpec,
) -> Result<SeminormEstimate> {
    radius_check(space, h)?;
    require_window(f, window.radius, h)?;
    let pts = window.points(space, h / 64.0)?;
    let mut best = Estimate { value: 0.0, method: Method::GridSearch, error_bound: 0.0 };
    for x in &pts {
        let e = integral_over_ball(f, space, x, h, spec)?;
        let v = math::abs(e.value);
        if v > best.value {
            best.value = v;
        }
        best.error_bound = best.error_bound.max(e.error_bound);
    }
    best.method = if space.is_lattice() && f.certificate().support_radius().is_some() {
        Method::LatticeExact
    } else {
        Method::GridSearch
    };
    let certified = f.certificate().seminorm_at(h);
    Ok(SeminormEstimate { h, estimate: best, certified, consistent: consistent(&best, certified, &spec.tol) })
}

/// Lower estimate of `⌋f⌈ = sup_h ⌋f⌈_h` over a finite grid of radii; `h`
/// in the result is the maximizing radius.
pub fn seminorm_global(
    f: &FunctionModel,
    space: &Space,
    h_grid: &[f64],
    window: &Window,
    spec: &QuadratureSpec,
) -> Result<SeminormEstimate> {
    if h_grid.is_empty() {
        return Err(Error::InvalidParameter("h grid must be nonempty"));
    }
    let mut best: Option<SeminormEstimate> = None;
    for &h in h_grid {
        let s = seminorm_local(f, space, h, window, spec)?;
        if best.is_none_or(|b| s.estimate.value > b.estimate.value) {
            best = Some(s);
        }
    }
    let mut best = best.expect("nonempty grid");
    best.certified = f.certificate().seminorm_global;
    best.consistent = consistent(&best.estimate, best.certified, &spec.tol);
    Ok(best)
}

/// `max |f(x) − f(y)| / ω(ρ(x, y))` over the pairs: a lower bound for
/// `‖f‖_{H^ω}`.
pub fn holder_lower_estimate(
    f: &FunctionModel,
    space: &Space,
    omega: &Modulus,
    pairs: &[(Point, Point)],
) -> Result<f64> {
    let mut best = 0.0f64;
    for (x, y) in pairs {
        space.check_dim(x)?;
        space.check_dim(y)?;
        let r = linf_distance(x, y);
        if r == 0.0 {
            return Err(Error::CoincidentPair);
        }
        let diff = math::abs(f.eval(x) - f.eval(y));
        let w = omega.value(r);
        let q = if w > 0.0 {
            diff / w
        } else if diff > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        best = best.max(q);
    }
    Ok(best)
}

/// Grid-search lower estimate of `‖f‖_{B(X)}` (exact on a lattice window
/// covering the support).
pub fn sup_norm(f: &FunctionModel, space: &Space, window_radius: f64, grid_step: f64) -> Result<Estimate> {
    require_window(f, window_radius, 0.0)?;
    let mut window = Window::new(window_radius).with_step(grid_step);
    if let Some(r) = f.certificate().exterior.map(|e| e.radius) {
        for i in 0..space.d() {
            for s in [1.0, -1.0] {
                let mut p = vec![0.0; space.d()];
                p[i] = s * r;
                window.extra.push(Point::new(p));
            }
        }
    }
    let pts = window.points(space, grid_step)?;
    let v = pts.iter().map(|x| math::abs(f.eval(x))).fold(0.0, f64::max);
    let exterior = f.certificate().exterior.map_or(0.0, |e| math::abs(e.value));
    let method = if space.is_lattice() && f.certificate().support_radius().is_some() {
        Method::LatticeExact
    } else {
        Method::GridSearch
    };
    Ok(Estimate::exact(v.max(exterior), method))
}

/// `∫ |f| dμ` over the window box (the full `‖f‖_{L₁}` when the window
/// covers the support).
pub fn l1_norm(f: &FunctionModel, space: &Space, window_radius: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    require_window(f, window_radius, 0.0)?;
    match space.kind() {
        SpaceKind::Lattice => {
            let sum = space
                .lattice_window(math::floor(window_radius) as i64)?
                .into_iter()
                .map(|p| {
                    let x: Vec<f64> = p.into_iter().map(|c| c as f64).collect();
                    math::abs(f.eval(&x))
                })
                .sum();
            Ok(Estimate::exact(sum, Method::LatticeExact))
        }
        SpaceKind::Continuum => {
            let bounds: Vec<(f64, f64)> = (0..space.d())
                .map(|i| if space.is_half(i) { (0.0, window_radius) } else { (-window_radius, window_radius) })
                .collect();
            let breaks: Vec<Vec<f64>> = (0..space.d()).map(|i| f.axis_kinks(i)).collect();
            let g = |y: &[f64]| math::abs(f.eval(y));
            let r = quadrature::box_integral(&g, &bounds, Some(&breaks), spec.tol, spec.budget)?;
            Ok(Estimate::from_integral(r, Method::Cubature))
        }
    }
}

/// Spot-checks a declared exterior value at `n` random points with
/// `R < |x|_∞ < 3R + 1`. Returns `true` when every sample matches.
pub fn spot_check_exterior(f: &FunctionModel, space: &Space, n: usize, seed: u64) -> bool {
    let Some(ext) = f.certificate().exterior else {
        return true;
    };
    let mut r = rng::stream(seed, 0);
    let outer = 3.0 * ext.radius + 1.0;
    let mut checked = 0;
    let mut attempts = 0;
    while checked < n && attempts < 100 * n.max(1) {
        attempts += 1;
        let mut x = space.sample_one(outer, &mut r);
        if space.is_lattice() {
            for c in x.iter_mut() {
                *c = math::floor(*c);
            }
        }
        if linf_norm(&x) <= ext.radius || !space.contains(&x) {
            continue;
        }
        checked += 1;
        if math::abs(f.eval(&x) - ext.value) > 1e-12 * (1.0 + math::abs(ext.value)) {
            return false;
        }
    }
    true
}
