use alloc::format;
use alloc::vec::Vec;

use crate::calculus::{Estimate, FunctionModel, Method, QuadratureSpec};
use crate::error::{Error, Result};
use crate::math;
use crate::modulus::Modulus;
use crate::operators::report::Bound;
use crate::quadrature::{self, Integral, MeanAccumulator, Tolerance};
use crate::rng;
use crate::space::{linf_norm, Space, SpaceKind};

/// Cutoff multiple of the inner radius beyond which power-law tails are
/// taken in closed form.
pub const TAIL_CUTOFF: f64 = 1e3;

/// A radial kernel `P` of a hypersingular operator.
#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    /// `P(t) = t^{−d−β}`.
    PowerLaw { beta: f64 },
    /// Piecewise linear through the knots, constant before the first knot
    /// and zero beyond the last one.
    Table { knots: Vec<(f64, f64)> },
}

impl Kernel {
    pub fn power_law(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidKernel(format!("power-law exponent {beta} must be positive")));
        }
        Ok(Kernel::PowerLaw { beta })
    }

    pub fn table(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidKernel("a table needs at least two knots".into()));
        }
        if knots.iter().any(|(t, p)| !t.is_finite() || !p.is_finite() || *t < 0.0 || *p < 0.0) {
            return Err(Error::InvalidKernel("knots must be finite and nonnegative".into()));
        }
        if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidKernel("knot abscissae must be strictly increasing".into()));
        }
        Ok(Kernel::Table { knots })
    }

    /// `P(t)` in dimension `d`.
    pub fn eval(&self, t: f64, d: usize) -> f64 {
        match self {
            Kernel::PowerLaw { beta } => math::powf(t, -(d as f64) - beta),
            Kernel::Table { knots } => {
                let last = knots[knots.len() - 1];
                if t > last.0 {
                    return 0.0;
                }
                if t <= knots[0].0 {
                    return knots[0].1;
                }
                let j = knots.partition_point(|k| k.0 <= t).min(knots.len() - 1);
                let (t0, p0) = knots[j - 1];
                let (t1, p1) = knots[j];
                p0 + (p1 - p0) * (t - t0) / (t1 - t0)
            }
        }
    }

    /// Radius beyond which `P` vanishes.
    pub fn support_end(&self) -> Option<f64> {
        match self {
            Kernel::PowerLaw { .. } => None,
            Kernel::Table { knots } => Some(knots[knots.len() - 1].0),
        }
    }

    fn kinks(&self) -> Vec<f64> {
        match self {
            Kernel::PowerLaw { .. } => Vec::new(),
            Kernel::Table { knots } => knots.iter().map(|k| k.0).collect(),
        }
    }

    /// `γ` such that `ω(t)P(t)t^{d−1}` behaves like `t^{γ−1}` near 0.
    fn singular_order(&self, omega: &Modulus, d: usize) -> Result<f64> {
        let a = omega.small_scale_exponent();
        match self {
            Kernel::PowerLaw { beta } => {
                if a <= *beta {
                    Err(Error::DivergentMass("the modulus exponent must exceed the kernel exponent"))
                } else {
                    Ok(a - beta)
                }
            }
            Kernel::Table { .. } => Ok(a + d as f64),
        }
    }
}

/// `(κ, P̂)` with `ω(t) ≤ κ t^a` near 0 and `P ≤ P̂ t^{−d−β}` (`P̂ = max P`
/// for tables, read with `β = −d`).
fn envelope(omega: &Modulus, kernel: &Kernel) -> (f64, f64) {
    let kappa = match omega {
        Modulus::Power { .. } => 1.0,
        Modulus::Table { knots } => (knots[1].1 - knots[0].1) / (knots[1].0 - knots[0].0),
    };
    let p_hat = match kernel {
        Kernel::PowerLaw { .. } => 1.0,
        Kernel::Table { knots } => knots.iter().map(|k| k.1).fold(0.0, f64::max),
    };
    (kappa, p_hat)
}

fn sphere_const(space: &Space) -> f64 {
    space.d() as f64 * math::pow2(space.d() - space.m())
}

fn continuum_only(space: &Space) -> Result<()> {
    match space.kind() {
        SpaceKind::Continuum => Ok(()),
        SpaceKind::Lattice => Err(Error::Unsupported("hypersingular operators are defined on the continuum")),
    }
}

fn positive_radius(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidRadius { h, reason: "radius must be positive and finite" })
    }
}

/// `∫_lo^r g` for `g(t) ~ t^{γ−1}` at 0, via `t = r s^{2/γ}`.
fn singular_integral(
    lo: f64,
    r: f64,
    gamma: f64,
    g: &dyn Fn(f64) -> f64,
    kinks: &[f64],
    tol: Tolerance,
    budget: usize,
) -> Result<Integral> {
    let p = 2.0 / gamma;
    let s0 = if lo > 0.0 { math::powf(lo / r, 1.0 / p) } else { 0.0 };
    let breaks = quadrature::with_breaks(
        s0,
        1.0,
        kinks.iter().filter(|k| **k > lo && **k < r).map(|k| math::powf(k / r, 1.0 / p)),
    );
    quadrature::simpson_pieces(
        |s| {
            let t = r * math::powf(s, p);
            if t <= 0.0 {
                0.0
            } else {
                g(t) * r * p * math::powf(s, p - 1.0)
            }
        },
        &breaks,
        tol,
        budget,
    )
}

/// `∫_lo^hi g` via `t = lo·e^v`.
fn log_integral(
    lo: f64,
    hi: f64,
    g: &dyn Fn(f64) -> f64,
    kinks: &[f64],
    tol: Tolerance,
    budget: usize,
) -> Result<Integral> {
    let top = math::ln(hi / lo);
    let breaks =
        quadrature::with_breaks(0.0, top, kinks.iter().filter(|k| **k > lo && **k < hi).map(|k| math::ln(k / lo)));
    quadrature::simpson_pieces(
        |v| {
            let t = lo * math::exp(v);
            g(t) * t
        },
        &breaks,
        tol,
        budget,
    )
}

fn from_integral(r: Integral, method: Method) -> Estimate {
    Estimate { value: r.value, method, error_bound: r.error_bound }
}

/// Importance-sampled `∫_lo^hi g` with `t = lo·U^{1/γ}` style draws:
/// `draw(u)` maps a uniform to `t` and returns `(t, q(t))`.
fn mc_radial(spec: &QuadratureSpec, g: &dyn Fn(f64) -> f64, draw: &dyn Fn(f64) -> (f64, f64)) -> Result<Estimate> {
    spec.validate()?;
    let mut acc = MeanAccumulator::default();
    let mut done = 0usize;
    let mut block = 0u64;
    while done < spec.mc_samples {
        let mut r = rng::stream(spec.seed, block);
        let take = (spec.mc_samples - done).min(rng::BLOCK);
        for _ in 0..take {
            let (t, q) = draw(rng::open01(&mut r));
            acc.push(g(t) / q);
        }
        done += take;
        block += 1;
    }
    Ok(Estimate { value: acc.mean(), method: Method::MonteCarlo, error_bound: acc.std_error() })
}

/// `A(h) = ∫_{B_h} ω(ρ(u, θ)) P(ρ(u, θ)) dμ(u)`.
pub fn kernel_ball_mass(
    space: &Space,
    omega: &Modulus,
    kernel: &Kernel,
    h: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    continuum_only(space)?;
    positive_radius(h)?;
    let d = space.d();
    let gamma = kernel.singular_order(omega, d)?;
    let c = sphere_const(space);
    let g = |t: f64| c * omega.value(t) * kernel.eval(t, d) * math::powi(t, d as i32 - 1);
    match spec.method {
        Method::ClosedForm => match (omega, kernel) {
            (Modulus::Power { alpha }, Kernel::PowerLaw { beta }) => {
                Ok(Estimate::exact(c * math::powf(h, alpha - beta) / (alpha - beta), Method::ClosedForm))
            }
            _ => Err(Error::MethodMismatch("closed forms need a power modulus and a power-law kernel")),
        },
        Method::Radial1D => {
            let mut kinks = omega.kinks();
            kinks.extend(kernel.kinks());
            let r =
                singular_integral(0.0, h, gamma, &g, &kinks, Tolerance::new(spec.tol.abs, spec.tol.rel), spec.budget)?;
            Ok(from_integral(r, Method::Radial1D))
        }
        Method::MonteCarlo => {
            // q(t) = γ' t^{γ'−1} / h^{γ'} with γ' = γ/2 keeps the weight bounded.
            let gp = match kernel {
                Kernel::PowerLaw { .. } => gamma / 2.0,
                Kernel::Table { .. } => d as f64,
            };
            mc_radial(spec, &g, &|u| {
                let t = h * math::powf(u, 1.0 / gp);
                (t, gp * math::powf(t, gp - 1.0) / math::powf(h, gp))
            })
        }
        _ => Err(Error::MethodMismatch("use ClosedForm, Radial1D or MonteCarlo for kernel masses")),
    }
}

/// `c·R^{−β}/β`: the power-law mass outside `B_R`.
fn power_tail(space: &Space, beta: f64, r: f64) -> f64 {
    sphere_const(space) * math::powf(r, -beta) / beta
}

/// `T(h) = ∫_{X∖B_h} P(ρ(u, θ)) dμ(u)`.
pub fn kernel_tail_mass(space: &Space, kernel: &Kernel, h: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    continuum_only(space)?;
    positive_radius(h)?;
    let d = space.d();
    let c = sphere_const(space);
    let g = |t: f64| c * kernel.eval(t, d) * math::powi(t, d as i32 - 1);
    match (spec.method, kernel) {
        (Method::ClosedForm, Kernel::PowerLaw { beta }) => {
            Ok(Estimate::exact(power_tail(space, *beta, h), Method::ClosedForm))
        }
        (Method::ClosedForm, Kernel::Table { .. }) => Err(Error::MethodMismatch("no closed form for table kernels")),
        (Method::Radial1D, Kernel::PowerLaw { beta }) => {
            let cut = TAIL_CUTOFF * h;
            let r = log_integral(h, cut, &g, &[], spec.tol, spec.budget)?;
            let mut e = from_integral(r, Method::Radial1D);
            e.value += power_tail(space, *beta, cut);
            Ok(e)
        }
        (Method::Radial1D, Kernel::Table { .. }) => {
            let end = kernel.support_end().unwrap_or(h);
            if end <= h {
                return Ok(Estimate::exact(0.0, Method::Radial1D));
            }
            let breaks = quadrature::with_breaks(h, end, kernel.kinks());
            Ok(from_integral(quadrature::simpson_pieces(g, &breaks, spec.tol, spec.budget)?, Method::Radial1D))
        }
        (Method::MonteCarlo, Kernel::PowerLaw { beta }) => {
            // Pareto proposal with index β/2.
            let gp = beta / 2.0;
            mc_radial(spec, &g, &|u| {
                let t = h * math::powf(u, -1.0 / gp);
                (t, gp * math::powf(h, gp) * math::powf(t, -gp - 1.0))
            })
        }
        (Method::MonteCarlo, Kernel::Table { .. }) => {
            let end = kernel.support_end().unwrap_or(h);
            if end <= h {
                return Ok(Estimate::exact(0.0, Method::MonteCarlo));
            }
            mc_radial(spec, &g, &|u| (h + (end - h) * u, 1.0 / (end - h)))
        }
        _ => Err(Error::MethodMismatch("use ClosedForm, Radial1D or MonteCarlo for kernel masses")),
    }
}

/// `‖𝔇̄_{P,h}‖ = 2 T(h)` on bounded continuous functions.
pub fn truncated_operator_norm(space: &Space, kernel: &Kernel, h: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    Ok(kernel_tail_mass(space, kernel, h, spec)?.scaled(2.0))
}

/// `‖f‖_{H^ω} A(h) + 2‖f‖_{C_b} T(h)`.
pub fn hypersingular_rhs(holder_norm: f64, sup_norm: f64, ball_mass: f64, tail_mass: f64) -> Bound {
    Bound { approximation: holder_norm * ball_mass, remainder: 2.0 * sup_norm * tail_mass }
}

/// Radii at which the sphere `x + ∂B_t` crosses a kink plane of `f`.
fn crossing_radii(f: &FunctionModel, x: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for (i, xi) in x.iter().enumerate() {
        out.extend(f.axis_kinks(i).into_iter().map(|k| math::abs(k - xi)));
    }
    if let Some(e) = f.certificate().exterior {
        for xi in x {
            out.push(e.radius + math::abs(*xi));
            out.push(math::abs(e.radius - math::abs(*xi)));
        }
    }
    out.retain(|t| *t > 0.0 && t.is_finite());
    out
}

/// `S(t) = ∫_{∂B_t} (f(x) − f(x+u)) dσ(u)`.
fn sphere_difference(
    f: &FunctionModel,
    space: &Space,
    x: &[f64],
    fx: f64,
    t: f64,
    tol: Tolerance,
    budget: usize,
) -> Result<f64> {
    let g = |u: &[f64]| {
        let y: Vec<f64> = x.iter().zip(u).map(|(a, b)| a + b).collect();
        fx - f.eval(&y)
    };
    Ok(quadrature::sphere_integral(space, t, &g, tol, budget)?.value)
}

/// `𝔇̄_{P,h} f(x) = ∫_{X∖B_h} (f(x) − f(x+u)) P(ρ(u, θ)) dμ(u)`.
///
/// Integrated radially out to the declared exterior of `f`, beyond which the
/// power-law remainder is exact; without an exterior the integral stops at
/// `10³ h` and the remainder is bounded through the certified sup norm.
pub fn hypersingular_truncated(
    f: &FunctionModel,
    space: &Space,
    kernel: &Kernel,
    h: f64,
    x: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    continuum_only(space)?;
    positive_radius(h)?;
    space.check_point(x)?;
    spec.validate()?;
    let d = space.d();
    let fx = f.eval(x);
    let kinks = crossing_radii(f, x);
    let cert = f.certificate();
    let mut first: Option<Error> = None;
    let radial = |t: f64| match sphere_difference(f, space, x, fx, t, spec.tol, spec.budget) {
        Ok(s) => kernel.eval(t, d) * s,
        Err(_) => f64::NAN,
    };
    let mut kinks_all = kinks;
    kinks_all.extend(kernel.kinks());
    let est = match kernel {
        Kernel::Table { .. } => {
            let end = kernel.support_end().unwrap_or(h);
            if end <= h {
                return Ok(Estimate::exact(0.0, Method::Radial1D));
            }
            let breaks = quadrature::with_breaks(h, end, kinks_all.iter().copied());
            from_integral(quadrature::simpson_pieces(radial, &breaks, spec.tol, spec.budget)?, Method::Radial1D)
        }
        Kernel::PowerLaw { beta } => {
            // Past the declared exterior the sphere difference is exactly
            // `σ(t)(f(x) − value)`, so the remainder is closed form there.
            let cut = match cert.exterior {
                Some(e) => h.max(e.radius + linf_norm(x)),
                None => TAIL_CUTOFF * h,
            };
            let mut e = if cut > h {
                from_integral(log_integral(h, cut, &radial, &kinks_all, spec.tol, spec.budget)?, Method::Radial1D)
            } else {
                Estimate::exact(0.0, Method::Radial1D)
            };
            let rest = power_tail(space, *beta, cut);
            match cert.exterior {
                Some(ext) => e.value += (fx - ext.value) * rest,
                None => match cert.sup_norm {
                    Some(s) => e.error_bound += (math::abs(fx) + s) * rest,
                    None => first = Some(Error::Uncertified("sup norm needed to bound the kernel tail")),
                },
            }
            e
        }
    };
    if let Some(err) = first {
        return Err(err);
    }
    if !est.value.is_finite() {
        return Err(Error::NoConvergence { evaluations: 0, error_estimate: f64::NAN });
    }
    Ok(est)
}

/// `𝔇_P f(x) = ∫_X (f(x) − f(x+u)) P(ρ(u, θ)) dμ(u)`, split at `split`:
/// the singular part on `B_split` plus [`hypersingular_truncated`] outside.
/// Requires a certified `H^ω` bound for `f`.
pub fn hypersingular_full(
    f: &FunctionModel,
    space: &Space,
    omega: &Modulus,
    kernel: &Kernel,
    x: &[f64],
    split: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    continuum_only(space)?;
    positive_radius(split)?;
    space.check_point(x)?;
    if f.certificate().holder_bound.is_none() {
        return Err(Error::Uncertified("the full operator needs a certified Hölder bound"));
    }
    let d = space.d();
    let gamma = kernel.singular_order(omega, d)?;
    let fx = f.eval(x);
    let mut kinks = crossing_radii(f, x);
    kinks.extend(kernel.kinks());
    let radial = |t: f64| match sphere_difference(f, space, x, fx, t, spec.tol, spec.budget) {
        Ok(s) => kernel.eval(t, d) * s,
        Err(_) => f64::NAN,
    };
    // Near t = 0 the differences f(x) − f(x+u) cancel to rounding noise,
    // which the kernel amplifies. Below t_ε the Hölder bound
    // |S(t)| ≤ H ω(t) σ(t) gives the mass H κ c P̂ t^γ/γ instead; t_ε
    // balances that bound against the noise floor.
    let holder = f.certificate().holder_bound.unwrap_or(0.0);
    if holder == 0.0 {
        return hypersingular_truncated(f, space, kernel, split, x, spec);
    }
    let (kappa, p_hat) = envelope(omega, kernel);
    let c = sphere_const(space);
    let a = omega.small_scale_exponent();
    let scale = math::abs(fx) + f.certificate().sup_norm.unwrap_or(math::abs(fx) + holder * omega.value(split));
    let noise = 8.0 * f64::EPSILON * scale.max(f64::MIN_POSITIVE);
    let t_noise = math::powf(noise / (holder * kappa), 1.0 / a);
    let t_tol = math::powf(0.01 * spec.tol.abs * gamma / (holder * kappa * c * p_hat), 1.0 / gamma);
    let t_eps = t_noise.max(t_tol).min(0.5 * split);
    let cut_mass = holder * kappa * c * p_hat * math::powf(t_eps, gamma) / gamma;
    let tol = Tolerance::new(spec.tol.abs.max(cut_mass), spec.tol.rel);
    let inner = singular_integral(t_eps, split, gamma, &radial, &kinks, tol, spec.budget)?;
    if !inner.value.is_finite() {
        return Err(Error::NoConvergence { evaluations: inner.evaluations, error_estimate: f64::NAN });
    }
    let outer = hypersingular_truncated(f, space, kernel, split, x, spec)?;
    Ok(Estimate {
        value: inner.value + outer.value,
        method: Method::Radial1D,
        error_bound: inner.error_bound + outer.error_bound + cut_mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn line() -> Space {
        Space::continuum(1, 0).unwrap()
    }

    #[test]
    fn masses_match_closed_forms() {
        let s = line();
        let w = Modulus::identity();
        let k = Kernel::power_law(0.5).unwrap();
        let cf = QuadratureSpec::default().with_method(Method::ClosedForm);
        let rad = QuadratureSpec::default();
        assert_eq!(kernel_ball_mass(&s, &w, &k, 1.0, &cf).unwrap().value, 4.0);
        assert_eq!(kernel_tail_mass(&s, &k, 1.0, &cf).unwrap().value, 4.0);
        assert!((kernel_ball_mass(&s, &w, &k, 1.0, &rad).unwrap().value - 4.0).abs() < 1e-9);
        assert!((kernel_tail_mass(&s, &k, 1.0, &rad).unwrap().value - 4.0).abs() < 1e-9);
        let t1 = kernel_tail_mass(&s, &k, 1.0, &cf).unwrap().value;
        let t2 = kernel_tail_mass(&s, &k, 2.0, &cf).unwrap().value;
        assert!((t2 / t1 - math::powf(2.0, -0.5)).abs() < 1e-15);
    }

    #[test]
    fn divergent_ball_mass() {
        let s = line();
        let w = Modulus::power(0.5).unwrap();
        let k = Kernel::power_law(0.5).unwrap();
        assert!(matches!(kernel_ball_mass(&s, &w, &k, 1.0, &QuadratureSpec::default()), Err(Error::DivergentMass(_))));
        assert!(Kernel::power_law(0.0).is_err());
    }

    #[test]
    fn constants_are_annihilated() {
        let s = line();
        let k = Kernel::power_law(0.5).unwrap();
        let c = FunctionModel::constant(2.5);
        let spec = QuadratureSpec::default();
        assert_eq!(hypersingular_truncated(&c, &s, &k, 1.0, &[0.3], &spec).unwrap().value, 0.0);
        let full = hypersingular_full(&c, &s, &Modulus::identity(), &k, &[0.3], 1.0, &spec).unwrap();
        assert_eq!(full.value, 0.0);
    }

    #[test]
    fn table_kernel_with_compact_support() {
        let s = line();
        let k = Kernel::table(vec![(0.0, 1.0), (2.0, 1.0)]).unwrap();
        // ∫_{1<|u|<2} 1 du = 2
        let t = kernel_tail_mass(&s, &k, 1.0, &QuadratureSpec::default()).unwrap();
        assert!((t.value - 2.0).abs() < 1e-12);
        assert_eq!(kernel_tail_mass(&s, &k, 3.0, &QuadratureSpec::default()).unwrap().value, 0.0);
    }
}
