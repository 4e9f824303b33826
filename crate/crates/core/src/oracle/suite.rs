use alloc::vec::Vec;

use crate::calculus::{self, FunctionModel, Method, QuadratureSpec, Window};
use crate::error::{Error, Result};
use crate::math;
use crate::modulus::Modulus;
use crate::operators::{
    charge_nagy_rhs, hypersingular_full, hypersingular_rhs, kernel_ball_mass, kernel_tail_mass,
    mixed_multiplicative_rhs, mixed_nagy_rhs, nagy_l1_rhs, nagy_rhs, ostrowski_bound, sobolev_rhs, steklov_average,
    Bound, ChargeModel, InequalityReport, Kernel, TheoremId, Verdict, QUADRATURE_TOL,
};
use crate::oracle::cone::{cone_radius, ConeFunctionSpec};
use crate::quadrature::{self, Tolerance, DEFAULT_BUDGET};
use crate::rng;
use crate::space::{Space, SpaceKind};

/// Relative slack for lattice trials, which only suffer rounding.
pub const LATTICE_TOL: f64 = 1e-9;

/// One random trial: the generated function, its radius, and the outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub trial: usize,
    pub spec: ConeFunctionSpec,
    pub h: f64,
    pub report: InequalityReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub theorem: TheoremId,
    pub trials: usize,
    /// Smallest `rhs − lhs` over all trials.
    pub min_gap: f64,
    pub violations: usize,
    /// The trial attaining `min_gap`.
    pub worst_case: Option<TrialOutcome>,
    pub seed: u64,
}

/// Parameters of a random suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub theorem: TheoremId,
    pub space: Space,
    pub omega: Modulus,
    pub h_values: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Kernel for the hypersingular theorem; defaults to `t^{−d−a/2}` with
    /// `a` the small-scale exponent of `ω`.
    pub kernel: Option<Kernel>,
    /// Relative slack replacing the default (`1e−9` on lattices, `1e−5` on
    /// the continuum).
    pub tolerance: Option<f64>,
}

impl SuiteConfig {
    pub fn new(theorem: TheoremId, space: Space, omega: Modulus, h_values: Vec<f64>, trials: usize, seed: u64) -> Self {
        SuiteConfig { theorem, space, omega, h_values, trials, seed, kernel: None, tolerance: None }
    }

    fn kernel(&self) -> Result<Kernel> {
        match &self.kernel {
            Some(k) => Ok(k.clone()),
            None => Kernel::power_law(self.omega.small_scale_exponent() / 2.0),
        }
    }
}

fn is_mixed(t: TheoremId) -> bool {
    matches!(t, TheoremId::MixedAdditive | TheoremId::MixedMultiplicative)
}

/// The cone function of trial `trial`, drawn from stream `(seed, trial)`.
pub fn trial_spec(theorem: TheoremId, space: &Space, omega: &Modulus, seed: u64, trial: usize) -> ConeFunctionSpec {
    let mut r = rng::stream(seed, trial as u64);
    ConeFunctionSpec::random(space, omega, &mut r, !is_mixed(theorem))
}

/// `rhs − lhs ≥ −tol·max(|lhs|, |rhs|)` on `trials` random cone functions.
pub fn random_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    if config.trials == 0 {
        return Err(Error::InvalidParameter("a suite needs at least one trial"));
    }
    if config.tolerance.is_some_and(|t| !(t >= 0.0)) {
        return Err(Error::InvalidParameter("tolerance must be nonnegative"));
    }
    if config.h_values.is_empty() {
        return Err(Error::InvalidParameter("a suite needs at least one radius"));
    }
    for h in &config.h_values {
        config.space.check_radius(*h)?;
    }
    let kernel = config.kernel()?;
    let mut out = SuiteReport {
        theorem: config.theorem,
        trials: config.trials,
        min_gap: f64::INFINITY,
        violations: 0,
        worst_case: None,
        seed: config.seed,
    };
    for trial in 0..config.trials {
        let spec = trial_spec(config.theorem, &config.space, &config.omega, config.seed, trial);
        let h = config.h_values[trial % config.h_values.len()];
        let mut report = run_trial(config.theorem, &config.space, &config.omega, &kernel, &spec, h)?;
        if let Some(tol) = config.tolerance {
            report = InequalityReport::assess(config.theorem, report.lhs, report.rhs, tol);
        }
        if report.verdict == Verdict::Violated {
            out.violations += 1;
        }
        if out.worst_case.is_none() || report.gap < out.min_gap {
            out.min_gap = report.gap;
            out.worst_case = Some(TrialOutcome { trial, spec, h, report });
        }
    }
    Ok(out)
}

fn auto_spec(space: &Space, omega: &Modulus) -> QuadratureSpec {
    QuadratureSpec::auto(space, omega)
}

fn tolerance(space: &Space) -> f64 {
    if space.is_lattice() {
        LATTICE_TOL
    } else {
        QUADRATURE_TOL
    }
}

/// Search points covering `|x|_∞ ≤ radius`: every lattice point, or a grid
/// of the given step plus the cone centres on the continuum.
fn search_points(space: &Space, spec: &ConeFunctionSpec, radius: f64, step: f64) -> Result<Vec<Vec<f64>>> {
    Window::new(radius).with_step(step).with_points(spec.centers.iter().cloned()).points(space, step)
}

/// Radius beyond which both `f` and its ball integrals vanish.
fn reach(spec: &ConeFunctionSpec, omega: &Modulus, h: f64) -> f64 {
    spec.support_radius(omega).map_or(h, |r| r + h)
}

fn lattice_ceil(space: &Space, r: f64) -> f64 {
    if space.is_lattice() {
        math::ceil(r)
    } else {
        r
    }
}

/// Upper bound for `⌋f⌈_h`: exact on a lattice; on the continuum the grid
/// maximum plus `μ(B_h) λ ω(step/2)`, the most `∫_{x+B_h} f` can move within
/// half a grid step.
fn seminorm_upper(f: &FunctionModel, spec: &ConeFunctionSpec, space: &Space, omega: &Modulus, h: f64) -> Result<f64> {
    let qs =
        auto_spec(space, omega).with_method(if space.is_lattice() { Method::LatticeExact } else { Method::Cubature });
    let radius = lattice_ceil(space, reach(spec, omega, h));
    if space.is_lattice() {
        return Ok(calculus::seminorm_local(f, space, h, &Window::new(radius), &qs)?.estimate.value);
    }
    let step = h / 16.0;
    let mut best = 0.0f64;
    let mut err = 0.0f64;
    for x in search_points(space, spec, radius, step)? {
        let e = calculus::integral_over_ball(f, space, &x, h, &qs)?;
        best = best.max(math::abs(e.value));
        err = err.max(e.error_bound);
    }
    Ok(best + err + space.ball_measure(h)? * spec.slope * omega.value(step / 2.0))
}

fn sup_lower(f: &FunctionModel, spec: &ConeFunctionSpec, space: &Space, omega: &Modulus, h: f64) -> Result<f64> {
    let radius = lattice_ceil(space, spec.support_radius(omega).unwrap_or(0.0));
    Ok(search_points(space, spec, radius, h / 16.0)?.iter().map(|x| math::abs(f.eval(x))).fold(0.0, f64::max))
}

fn l1_upper(f: &FunctionModel, spec: &ConeFunctionSpec, space: &Space, omega: &Modulus) -> Result<f64> {
    match spec.support_radius(omega) {
        None => Ok(f64::INFINITY),
        Some(r) => {
            let e = calculus::l1_norm(f, space, lattice_ceil(space, r), &auto_spec(space, omega))?;
            Ok(e.value + e.error_bound)
        }
    }
}

/// Evaluates one theorem on one cone function.
pub fn run_trial(
    theorem: TheoremId,
    space: &Space,
    omega: &Modulus,
    kernel: &Kernel,
    spec: &ConeFunctionSpec,
    h: f64,
) -> Result<InequalityReport> {
    if is_mixed(theorem) {
        return mixed_trial(theorem, space, omega, spec, h);
    }
    let f = spec.build(space, omega)?;
    let lambda = spec.slope;
    let qs = auto_spec(space, omega);
    let tol = tolerance(space);
    let (lhs, rhs): (f64, Bound) = match theorem {
        TheoremId::Lemma1 => {
            let radius = lattice_ceil(space, reach(spec, omega, h));
            let avg = steklov_average(
                &f,
                space,
                h,
                &qs.with_method(if space.is_lattice() { Method::LatticeExact } else { Method::Cubature }),
            )?;
            let mut lhs = 0.0f64;
            let mut err = 0.0f64;
            for x in search_points(space, spec, radius, h / 8.0)? {
                let e = avg.try_eval(&x)?;
                lhs = lhs.max(math::abs(f.eval(&x) - e.value));
                err = err.max(e.error_bound);
            }
            // Averaging a constant need not return it bit for bit.
            err = err.max(64.0 * f64::EPSILON * spec.max_height());
            let b = ostrowski_bound(space, omega, h, lambda, &qs)?;
            ((lhs - err).max(0.0), Bound { approximation: b, remainder: 0.0 })
        }
        TheoremId::Nagy => {
            let s = seminorm_upper(&f, spec, space, omega, h)?;
            (sup_lower(&f, spec, space, omega, h)?, nagy_rhs(space, omega, h, lambda, s, &qs)?)
        }
        TheoremId::NagyL1 => {
            let l1 = l1_upper(&f, spec, space, omega)?;
            (sup_lower(&f, spec, space, omega, h)?, nagy_l1_rhs(space, omega, h, lambda, l1, &qs)?)
        }
        TheoremId::Sobolev => {
            let s = seminorm_upper(&f, spec, space, omega, h)?;
            let g = f.certificate().upper_gradient_bound.ok_or(Error::Uncertified("upper gradient"))?;
            (sup_lower(&f, spec, space, omega, h)?, sobolev_rhs(space, omega, h, g, s, &qs)?)
        }
        TheoremId::Charge => {
            let nu = ChargeModel::new(f.clone());
            let s = if space.is_lattice() {
                let radius = lattice_ceil(space, reach(spec, omega, h));
                nu.seminorm_h(space, h, &Window::new(radius), &qs.with_method(Method::LatticeExact))?.value
            } else {
                seminorm_upper(&f, spec, space, omega, h)?
            };
            (sup_lower(&f, spec, space, omega, h)?, charge_nagy_rhs(space, omega, h, lambda, s, &qs)?)
        }
        TheoremId::Hypersingular => {
            if space.kind() != SpaceKind::Continuum {
                return Err(Error::Unsupported("hypersingular suites run on the continuum"));
            }
            let mass_spec = match (omega, kernel) {
                (Modulus::Power { .. }, Kernel::PowerLaw { .. }) => qs.with_method(Method::ClosedForm),
                _ => qs.with_method(Method::Radial1D),
            };
            let a = kernel_ball_mass(space, omega, kernel, h, &mass_spec)?;
            let t = kernel_tail_mass(space, kernel, h, &mass_spec)?;
            let op_spec = QuadratureSpec::default().with_tol(1e-7, 1e-7);
            let mut lhs = 0.0f64;
            let mut err = a.error_bound + t.error_bound;
            let top = spec
                .centers
                .iter()
                .zip(&spec.heights)
                .fold((0.0f64, space.origin()), |acc, (p, c)| if *c > acc.0 { (*c, p.clone()) } else { acc })
                .1;
            for x in [top, space.origin()] {
                let e = hypersingular_full(&f, space, omega, kernel, &x, h, &op_spec)?;
                lhs = lhs.max(math::abs(e.value));
                err = err.max(e.error_bound);
            }
            let sup = f.certificate().sup_norm.ok_or(Error::Uncertified("sup norm"))?;
            ((lhs - err).max(0.0), hypersingular_rhs(lambda, sup, a.value, t.value))
        }
        TheoremId::MixedAdditive | TheoremId::MixedMultiplicative => unreachable!(),
    };
    Ok(InequalityReport::assess(theorem, lhs, rhs, tol))
}

/// Mixed-derivative trial on the line: `f' = φ` with
/// `φ(x) = ψ(x − δ) − ψ(x − δ − D)`, `ψ` the cone function, `δ` moving its
/// support to `[0, D]`. Then `‖φ‖_{H^ω} ≤ 2λ`, `‖φ‖ = max c_i` and
/// `‖f‖ = ‖ψ‖_{L₁}`.
fn mixed_trial(
    theorem: TheoremId,
    space: &Space,
    omega: &Modulus,
    spec: &ConeFunctionSpec,
    h: f64,
) -> Result<InequalityReport> {
    if space.kind() != SpaceKind::Continuum || space.d() != 1 {
        return Err(Error::Unsupported("random mixed-derivative suites run on the line or half-line"));
    }
    if spec.slope == 0.0 {
        return Err(Error::InvalidParameter("mixed-derivative trials need a positive slope"));
    }
    let line = Space::continuum(1, 0)?;
    let psi = spec.build(&line, omega)?;
    let mut left = f64::INFINITY;
    let mut right = f64::NEG_INFINITY;
    for (p, c) in spec.centers.iter().zip(&spec.heights) {
        let r = cone_radius(omega, *c, spec.slope);
        left = left.min(p[0] - r);
        right = right.max(p[0] + r);
    }
    if !(left.is_finite() && right.is_finite()) {
        return Err(Error::Unsupported("cone heights exceed the range of the modulus"));
    }
    let width = right - left;
    let breaks = quadrature::with_breaks(left, right, psi.axis_kinks(0));
    let l1 = quadrature::simpson_pieces(
        |t| math::abs(psi.eval(&[t])),
        &breaks,
        Tolerance::new(1e-12, 1e-12),
        DEFAULT_BUDGET,
    )?;
    let f_norm = l1.value + l1.error_bound;
    let phi = |x: f64| psi.eval(&[x + left]) - psi.eval(&[x + left - width]);
    let n = 1024;
    let mut lhs = 0.0f64;
    for k in 0..=n {
        lhs = lhs.max(math::abs(phi(2.0 * width * k as f64 / n as f64)));
    }
    for p in &spec.centers {
        lhs = lhs.max(math::abs(phi(p[0] - left)));
    }
    let holder = 2.0 * spec.slope;
    let m = space.m();
    let qs = auto_spec(space, omega);
    let rhs = match theorem {
        TheoremId::MixedAdditive => mixed_nagy_rhs(1, m, omega, h, holder, f_norm, &qs)?,
        _ => {
            let alpha =
                omega.alpha().ok_or(Error::Unsupported("the multiplicative inequality needs a power modulus"))?;
            Bound { approximation: mixed_multiplicative_rhs(1, m, alpha, f_norm, holder)?, remainder: 0.0 }
        }
    };
    Ok(InequalityReport::assess(theorem, lhs, rhs, QUADRATURE_TOL))
}
