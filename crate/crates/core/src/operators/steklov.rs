use alloc::vec::Vec;

use crate::calculus::{self, Certificate, Estimate, FunctionModel, QuadratureSpec, RealFunction};
use crate::error::{Error, Result};
use crate::math;
use crate::modulus::Modulus;
use crate::space::Space;

/// The Steklov average `S_h f(x) = μ(B_h)^{-1} ∫_{B_h} f(x + u) dμ(u)`.
#[derive(Debug, Clone)]
pub struct SteklovAverage {
    f: FunctionModel,
    space: Space,
    h: f64,
    mu: f64,
    spec: QuadratureSpec,
}

impl SteklovAverage {
    pub fn try_eval(&self, x: &[f64]) -> Result<Estimate> {
        Ok(calculus::integral_over_ball(&self.f, &self.space, x, self.h, &self.spec)?.scaled(1.0 / self.mu))
    }

    /// `‖S_h‖ = 1/μ(B_h)` as a map from `(L_{⌋·⌈_h}, ⌋·⌈_h)` to `B(X)`.
    pub fn operator_norm(&self) -> f64 {
        1.0 / self.mu
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn into_model(self) -> FunctionModel {
        FunctionModel::new(self)
    }
}

impl RealFunction for SteklovAverage {
    /// `NaN` when the inner integral fails; use [`SteklovAverage::try_eval`]
    /// to see the error.
    fn eval(&self, x: &[f64]) -> f64 {
        self.try_eval(x).map_or(f64::NAN, |e| e.value)
    }

    /// Averaging does not increase the `H^ω` or sup norms.
    fn certificate(&self) -> Certificate {
        let c = self.f.certificate();
        Certificate { holder_bound: c.holder_bound, sup_norm: None, ..Default::default() }
    }
}

pub fn steklov_average(f: &FunctionModel, space: &Space, h: f64, spec: &QuadratureSpec) -> Result<SteklovAverage> {
    let mu = space.ball_measure(h)?;
    spec.validate()?;
    Ok(SteklovAverage { f: f.clone(), space: *space, h, mu, spec: *spec })
}

/// `holder_norm · I(h)/μ(B_h)`: the bound on `‖f − S_h f‖_{B(X)}`.
pub fn ostrowski_bound(space: &Space, omega: &Modulus, h: f64, holder_norm: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(holder_norm >= 0.0) {
        return Err(Error::InvalidParameter("Hölder norm must be nonnegative"));
    }
    let i = calculus::ball_integral_of_modulus(space, omega, h, spec)?;
    Ok(holder_norm * i.value / space.ball_measure(h)?)
}

/// `max_x |f(x) − S_h f(x)|` over the given points.
pub fn ostrowski_deviation(
    f: &FunctionModel,
    space: &Space,
    h: f64,
    points: &[Vec<f64>],
    spec: &QuadratureSpec,
) -> Result<f64> {
    let s = steklov_average(f, space, h, spec)?;
    let mut best = 0.0f64;
    for x in points {
        let v = s.try_eval(x)?.value;
        best = best.max(math::abs(f.eval(x) - v));
    }
    Ok(best)
}
