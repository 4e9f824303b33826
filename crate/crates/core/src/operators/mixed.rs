use alloc::vec::Vec;

use crate::calculus::{self, FunctionModel, QuadratureSpec};
use crate::error::{Error, Result};
use crate::math;
use crate::modulus::Modulus;
use crate::operators::report::Bound;
use crate::space::{Space, SpaceKind};

/// `𝔖_h f(x) = (Δ⁺_{1,h} ∘ … ∘ Δ⁺_{m,h} ∘ Δ_{m+1,h} ∘ … ∘ Δ_{d,h}) f(x) / (2^{d−m} h^d)`,
/// with forward differences `f(x + h e_i) − f(x)` on the half-line axes and
/// centred differences `f(x + h e_i) − f(x − h e_i)` on the others.
pub fn mixed_difference(f: &FunctionModel, space: &Space, h: f64, x: &[f64]) -> Result<f64> {
    if space.kind() != SpaceKind::Continuum {
        return Err(Error::Unsupported("mixed differences are defined on the continuum"));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidRadius { h, reason: "radius must be positive and finite" });
    }
    space.check_point(x)?;
    let d = space.d();
    let mut sum = 0.0;
    let mut y: Vec<f64> = x.to_vec();
    for mask in 0u32..(1u32 << d) {
        let mut sign = 1.0;
        for (i, yi) in y.iter_mut().enumerate() {
            let up = mask & (1 << i) != 0;
            let back = if space.is_half(i) { 0.0 } else { -h };
            *yi = x[i] + if up { h } else { back };
            if !up {
                sign = -sign;
            }
        }
        if !space.contains(&y) {
            return Err(Error::OutsideDomain);
        }
        sum += sign * f.eval(&y);
    }
    Ok(sum / (math::pow2(d - space.m()) * math::powi(h, d as i32)))
}

/// `‖𝔖_h‖ ≤ 2^m/h^d` from sup norm to sup norm.
pub fn mixed_difference_norm(space: &Space, h: f64) -> f64 {
    math::pow2(space.m()) / math::powi(h, space.d() as i32)
}

/// `‖∂_I f‖_{H^ω} I(h)/(2^{d−m}h^d) + (2^m/h^d)‖f‖`.
pub fn mixed_nagy_rhs(
    d: usize,
    m: usize,
    omega: &Modulus,
    h: f64,
    holder_norm_of_derivative: f64,
    sup_norm_of_f: f64,
    spec: &QuadratureSpec,
) -> Result<Bound> {
    if !(holder_norm_of_derivative >= 0.0 && sup_norm_of_f >= 0.0) {
        return Err(Error::InvalidParameter("norms must be nonnegative"));
    }
    let space = Space::continuum(d, m)?;
    let i = calculus::ball_integral_of_modulus(&space, omega, h, spec)?.value;
    let mu = space.ball_measure(h)?;
    Ok(Bound {
        approximation: holder_norm_of_derivative * i / mu,
        remainder: mixed_difference_norm(&space, h) * sup_norm_of_f,
    })
}

fn check_params(d: usize, m: usize, alpha: f64) -> Result<()> {
    Space::continuum(d, m)?;
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter("α must lie in (0, 1]"));
    }
    Ok(())
}

/// `2^{mα/(d+α)} ((d+α)/α)^{α/(d+α)}`.
pub fn mixed_multiplicative_constant(d: usize, m: usize, alpha: f64) -> Result<f64> {
    check_params(d, m, alpha)?;
    let df = d as f64;
    let e = alpha / (df + alpha);
    Ok(math::powf(2.0, m as f64 * e) * math::powf((df + alpha) / alpha, e))
}

/// The minimiser of the additive bound in `h`:
/// `2^{m/(d+α)} ((d+α)/α · ‖f‖/‖∂_I f‖_{H^ω})^{1/(d+α)}`.
pub fn optimal_h(d: usize, m: usize, alpha: f64, sup_norm: f64, holder_norm: f64) -> Result<f64> {
    check_params(d, m, alpha)?;
    if !(holder_norm > 0.0) {
        return Err(Error::InvalidParameter("the optimal radius is unbounded for a zero Hölder norm"));
    }
    if !(sup_norm > 0.0) {
        return Err(Error::InvalidParameter("the optimal radius needs a positive sup norm"));
    }
    let df = d as f64;
    let e = 1.0 / (df + alpha);
    Ok(math::powf(2.0, m as f64 * e) * math::powf((df + alpha) / alpha * sup_norm / holder_norm, e))
}

/// `C ‖f‖^{α/(d+α)} ‖∂_I f‖_{H^ω}^{d/(d+α)}`.
pub fn mixed_multiplicative_rhs(d: usize, m: usize, alpha: f64, sup_norm: f64, holder_norm: f64) -> Result<f64> {
    let c = mixed_multiplicative_constant(d, m, alpha)?;
    if !(sup_norm >= 0.0 && holder_norm >= 0.0) {
        return Err(Error::InvalidParameter("norms must be nonnegative"));
    }
    let df = d as f64;
    Ok(c * math::powf(sup_norm, alpha / (df + alpha)) * math::powf(holder_norm, df / (df + alpha)))
}
