use alloc::vec::Vec;

use crate::calculus::{self, Certificate, Estimate, FunctionModel, QuadratureSpec, RealFunction, Window};
use crate::error::{Error, Result};
use crate::math;
use crate::modulus::Modulus;
use crate::operators::report::Bound;
use crate::operators::steklov::{steklov_average, SteklovAverage};
use crate::rng;
use crate::space::{linf_distance, Point, Space};

fn nonneg(v: f64, what: &'static str) -> Result<()> {
    if v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(what))
    }
}

fn scaled_terms(space: &Space, omega: &Modulus, h: f64, k: f64, other: f64, spec: &QuadratureSpec) -> Result<Bound> {
    let i = calculus::ball_integral_of_modulus(space, omega, h, spec)?.value;
    let mu = space.ball_measure(h)?;
    Ok(Bound { approximation: k * i / mu, remainder: other / mu })
}

/// `‖f‖_{H^ω} I(h)/μ(B_h) + ⌋f⌈_h/μ(B_h)`.
pub fn nagy_rhs(
    space: &Space,
    omega: &Modulus,
    h: f64,
    holder_norm: f64,
    seminorm_h: f64,
    spec: &QuadratureSpec,
) -> Result<Bound> {
    nonneg(holder_norm, "Hölder norm must be nonnegative")?;
    nonneg(seminorm_h, "seminorm must be nonnegative")?;
    scaled_terms(space, omega, h, holder_norm, seminorm_h, spec)
}

/// `‖f‖_{H^ω} I(h)/μ(B_h) + ‖f‖_{L₁}/μ(B_h)`.
pub fn nagy_l1_rhs(
    space: &Space,
    omega: &Modulus,
    h: f64,
    holder_norm: f64,
    l1_norm: f64,
    spec: &QuadratureSpec,
) -> Result<Bound> {
    nonneg(holder_norm, "Hölder norm must be nonnegative")?;
    nonneg(l1_norm, "L1 norm must be nonnegative")?;
    scaled_terms(space, omega, h, holder_norm, l1_norm, spec)
}

/// `2‖G_f‖_∞ I(h)/μ(B_h) + ⌋f⌈_h/μ(B_h)`.
pub fn sobolev_rhs(
    space: &Space,
    omega: &Modulus,
    h: f64,
    gradient_bound: f64,
    seminorm_h: f64,
    spec: &QuadratureSpec,
) -> Result<Bound> {
    nonneg(gradient_bound, "gradient bound must be nonnegative")?;
    nonneg(seminorm_h, "seminorm must be nonnegative")?;
    scaled_terms(space, omega, h, 2.0 * gradient_bound, seminorm_h, spec)
}

/// Outcome of checking `|f(x) − f(y)| ≤ (G(x) + G(y)) ω(ρ(x, y))` on pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperGradientCheck {
    pub pairs: usize,
    pub violations: usize,
    /// Largest `|f(x) − f(y)| − (G(x) + G(y)) ω(ρ(x, y))`.
    pub worst_excess: f64,
}

pub fn upper_gradient_check(
    f: &FunctionModel,
    gradient: &dyn Fn(&[f64]) -> f64,
    space: &Space,
    omega: &Modulus,
    pairs: &[(Point, Point)],
) -> Result<UpperGradientCheck> {
    let mut out = UpperGradientCheck { pairs: pairs.len(), violations: 0, worst_excess: f64::NEG_INFINITY };
    for (x, y) in pairs {
        space.check_dim(x)?;
        space.check_dim(y)?;
        let lhs = math::abs(f.eval(x) - f.eval(y));
        let rhs = (gradient(x) + gradient(y)) * omega.value(linf_distance(x, y));
        let excess = lhs - rhs;
        if excess > 1e-12 * rhs.max(1.0) {
            out.violations += 1;
        }
        out.worst_excess = out.worst_excess.max(excess);
    }
    Ok(out)
}

/// An absolutely continuous charge, stored through its density `D_μν`.
#[derive(Debug, Clone)]
pub struct ChargeModel {
    density: FunctionModel,
}

impl ChargeModel {
    pub fn new(density: FunctionModel) -> Self {
        ChargeModel { density }
    }

    pub fn density(&self) -> &FunctionModel {
        &self.density
    }

    /// `ν(x + B_h) = ∫_{x+B_h} D_μν dμ`.
    pub fn ball_charge(&self, space: &Space, x: &[f64], h: f64, spec: &QuadratureSpec) -> Result<Estimate> {
        calculus::integral_over_ball(&self.density, space, x, h, spec)
    }

    /// Lower estimate of `⌉ν⌊_h = sup_x |ν(x + B_h)|` over the window.
    pub fn seminorm_h(&self, space: &Space, h: f64, window: &Window, spec: &QuadratureSpec) -> Result<Estimate> {
        if let Some(r) = self.density.certificate().support_radius() {
            if window.radius < r + h {
                return Err(Error::WindowTooSmall { window: window.radius, required: r + h });
            }
        }
        let mut best = Estimate { value: 0.0, method: calculus::Method::GridSearch, error_bound: 0.0 };
        for x in window.points(space, h / 64.0)? {
            let e = self.ball_charge(space, &x, h, spec)?;
            best.value = best.value.max(math::abs(e.value));
            best.error_bound = best.error_bound.max(e.error_bound);
        }
        if space.is_lattice() && self.density.certificate().support_radius().is_some() {
            best.method = calculus::Method::LatticeExact;
        }
        Ok(best)
    }
}

/// `S̄_hν(x) = ν(x + B_h)/μ(B_h)`.
#[derive(Debug, Clone)]
pub struct ChargeAverage {
    nu: ChargeModel,
    space: Space,
    h: f64,
    mu: f64,
    spec: QuadratureSpec,
}

impl ChargeAverage {
    pub fn try_eval(&self, x: &[f64]) -> Result<Estimate> {
        Ok(self.nu.ball_charge(&self.space, x, self.h, &self.spec)?.scaled(1.0 / self.mu))
    }

    pub fn operator_norm(&self) -> f64 {
        1.0 / self.mu
    }

    /// The same operator written as a Steklov average of the density.
    pub fn as_steklov(&self) -> Result<SteklovAverage> {
        steklov_average(&self.nu.density, &self.space, self.h, &self.spec)
    }
}

impl RealFunction for ChargeAverage {
    fn eval(&self, x: &[f64]) -> f64 {
        self.try_eval(x).map_or(f64::NAN, |e| e.value)
    }

    fn certificate(&self) -> Certificate {
        Certificate { holder_bound: self.nu.density.certificate().holder_bound, ..Default::default() }
    }
}

pub fn charge_average(nu: &ChargeModel, space: &Space, h: f64, spec: &QuadratureSpec) -> Result<ChargeAverage> {
    let mu = space.ball_measure(h)?;
    spec.validate()?;
    Ok(ChargeAverage { nu: nu.clone(), space: *space, h, mu, spec: *spec })
}

/// `‖D_μν‖_{H^ω} I(h)/μ(B_h) + ⌉ν⌊_h/μ(B_h)`.
pub fn charge_nagy_rhs(
    space: &Space,
    omega: &Modulus,
    h: f64,
    density_holder_norm: f64,
    charge_seminorm_h: f64,
    spec: &QuadratureSpec,
) -> Result<Bound> {
    nagy_rhs(space, omega, h, density_holder_norm, charge_seminorm_h, spec)
}

/// `n` uniform pairs of distinct points in `|x|_∞ < radius`.
pub fn sample_pairs(space: &Space, radius: f64, n: usize, seed: u64) -> Result<Vec<(Point, Point)>> {
    space.check_radius(radius)?;
    let mut r = rng::stream(seed, 0);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = space.sample_one(radius, &mut r);
        let y = space.sample_one(radius, &mut r);
        if linf_distance(&x, &y) > 0.0 {
            out.push((Point::new(x), Point::new(y)));
        }
    }
    Ok(out)
}
