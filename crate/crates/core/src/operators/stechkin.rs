use alloc::vec::Vec;

use crate::calculus::{self, QuadratureSpec};
use crate::error::{Error, Result};
use crate::modulus::Modulus;
use crate::space::{Space, SpaceKind};

/// One point of the Stechkin curve: the Steklov average with `‖S_h‖ = 1/μ(B_h) = N`
/// and its deviation `E_N` on the unit `H^ω` ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StechkinPoint {
    pub n: f64,
    pub h: f64,
    pub e_n: f64,
}

/// `U(S_h) = I(h)/μ(B_h)`: the deviation of `S_h` on the unit `H^ω` ball.
pub fn deviation_u(space: &Space, omega: &Modulus, h: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(calculus::ball_integral_of_modulus(space, omega, h, spec)?.value / space.ball_measure(h)?)
}

/// The radius with `μ(B_h) = 1/N`, by bisection to `1e−15` relative width.
pub fn radius_for_norm(space: &Space, n: f64) -> Result<f64> {
    if space.kind() != SpaceKind::Continuum {
        return Err(Error::Unsupported("μ(B_h) is a step function on a lattice"));
    }
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::InvalidParameter("N must be positive and finite"));
    }
    let target = 1.0 / n;
    let mu = |h: f64| space.ball_measure(h);
    let (mut lo, mut hi) = (1.0f64, 1.0f64);
    while mu(hi)? < target {
        hi *= 2.0;
    }
    while mu(lo)? > target {
        lo *= 0.5;
    }
    for _ in 0..2000 {
        if hi - lo <= 1e-15 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mu(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn stechkin_curve(
    space: &Space,
    omega: &Modulus,
    n_values: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<StechkinPoint>> {
    n_values
        .iter()
        .map(|&n| {
            let h = radius_for_norm(space, n)?;
            Ok(StechkinPoint { n, h, e_n: deviation_u(space, omega, h, spec)? })
        })
        .collect()
}
