use alloc::vec;
use alloc::vec::Vec;

use crate::calculus::{self, Estimate, FunctionModel, Method, QuadratureSpec};
use crate::error::{Error, Result};
use crate::extremals::{box_integral_f_eh, split_point_a};
use crate::math;
use crate::modulus::Modulus;
use crate::operators::{kernel_ball_mass, kernel_tail_mass, Kernel};
use crate::quadrature::MeanAccumulator;
use crate::rng;
use crate::space::{linf_norm, Space, SpaceKind};

/// An operation with both a deterministic and a Monte Carlo path.
#[derive(Debug, Clone)]
pub enum CrossCheck {
    /// `I(h)`: closed form or radial quadrature (lattice sum) against uniform
    /// sampling of the ball.
    BallIntegral { space: Space, omega: Modulus, h: f64 },
    /// `A(h)` against importance sampling in the radius.
    KernelBallMass { space: Space, omega: Modulus, kernel: Kernel, h: f64 },
    /// `T(h)` against importance sampling in the radius.
    KernelTailMass { space: Space, kernel: Kernel, h: f64 },
    /// `∫_{x+B_h} f`: nested quadrature against uniform sampling.
    BallAverage { f: FunctionModel, space: Space, x: Vec<f64>, h: f64 },
    /// The split point: half of `∫_{B_h} f_{e,h}` against a sampled
    /// integral over `B_h ∩ {x₁ < a}`.
    SplitPoint { omega: Modulus, h: f64, d: usize },
}

impl CrossCheck {
    pub fn name(&self) -> &'static str {
        match self {
            CrossCheck::BallIntegral { .. } => "ball_integral_of_modulus",
            CrossCheck::KernelBallMass { .. } => "kernel_ball_mass",
            CrossCheck::KernelTailMass { .. } => "kernel_tail_mass",
            CrossCheck::BallAverage { .. } => "integral_over_ball",
            CrossCheck::SplitPoint { .. } => "split_point_a",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCheckReport {
    pub op: &'static str,
    pub deterministic: Estimate,
    pub monte_carlo: Estimate,
    /// `|deterministic − MC|` in units of the MC standard error.
    pub sigmas: f64,
    /// `|deterministic − MC| ≤ 4σ + deterministic error bound`.
    pub agrees: bool,
}

/// Sampling bound: the two paths must agree within this many standard errors.
pub const AGREEMENT_SIGMAS: f64 = 4.0;

fn deterministic_method(space: &Space, omega: &Modulus) -> Method {
    match (space.kind(), omega) {
        (SpaceKind::Lattice, _) => Method::LatticeExact,
        (SpaceKind::Continuum, Modulus::Power { .. }) => Method::ClosedForm,
        (SpaceKind::Continuum, Modulus::Table { .. }) => Method::Radial1D,
    }
}

pub fn mc_cross_check(op: &CrossCheck, samples: usize, seed: u64) -> Result<CrossCheckReport> {
    let mc = QuadratureSpec::default().with_method(Method::MonteCarlo).with_samples(samples, seed);
    let (det, sampled) = match op {
        CrossCheck::BallIntegral { space, omega, h } => {
            let d = calculus::ball_integral_of_modulus(
                space,
                omega,
                *h,
                &mc.with_method(deterministic_method(space, omega)),
            )?;
            (d, calculus::ball_integral_of_modulus(space, omega, *h, &mc)?)
        }
        CrossCheck::KernelBallMass { space, omega, kernel, h } => {
            let method = match (omega, kernel) {
                (Modulus::Power { .. }, Kernel::PowerLaw { .. }) => Method::ClosedForm,
                _ => Method::Radial1D,
            };
            (
                kernel_ball_mass(space, omega, kernel, *h, &mc.with_method(method))?,
                kernel_ball_mass(space, omega, kernel, *h, &mc)?,
            )
        }
        CrossCheck::KernelTailMass { space, kernel, h } => {
            let method = match kernel {
                Kernel::PowerLaw { .. } => Method::ClosedForm,
                Kernel::Table { .. } => Method::Radial1D,
            };
            (kernel_tail_mass(space, kernel, *h, &mc.with_method(method))?, kernel_tail_mass(space, kernel, *h, &mc)?)
        }
        CrossCheck::BallAverage { f, space, x, h } => {
            let method = if space.is_lattice() { Method::LatticeExact } else { Method::Cubature };
            let det = calculus::integral_over_ball(f, space, x, *h, &mc.with_method(method))?;
            (det, calculus::integral_over_ball(f, space, x, *h, &mc)?)
        }
        CrossCheck::SplitPoint { omega, h, d } => split_point_check(omega, *h, *d, &mc)?,
    };
    let diff = math::abs(det.value - sampled.value);
    let sigmas = if sampled.error_bound > 0.0 {
        diff / sampled.error_bound
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    let agrees = diff <= AGREEMENT_SIGMAS * sampled.error_bound + det.error_bound + 1e-12 * math::abs(det.value);
    Ok(CrossCheckReport { op: op.name(), deterministic: det, monte_carlo: sampled, sigmas, agrees })
}

fn split_point_check(omega: &Modulus, h: f64, d: usize, mc: &QuadratureSpec) -> Result<(Estimate, Estimate)> {
    let space = Space::continuum(d, 1)?;
    let a = split_point_a(omega, h, d)?.a;
    let mut lo = vec![-h; d];
    lo[0] = 0.0;
    let half = 0.5 * box_integral_f_eh(omega, h, &lo, &vec![h; d])?;
    mc.validate()?;
    if mc.mc_samples < 2 {
        return Err(Error::InvalidParameter("Monte Carlo needs at least two samples"));
    }
    let wh = omega.value(h);
    let mut acc = MeanAccumulator::default();
    let mut done = 0usize;
    let mut block = 0u64;
    while done < mc.mc_samples {
        let mut r = rng::stream(mc.seed, block);
        let take = (mc.mc_samples - done).min(rng::BLOCK);
        for _ in 0..take {
            let u = space.sample_one(h, &mut r);
            let v = if u[0] < a { (wh - omega.value(linf_norm(&u))).max(0.0) } else { 0.0 };
            acc.push(v);
        }
        done += take;
        block += 1;
    }
    let mu = space.ball_measure(h)?;
    Ok((
        Estimate { value: half, method: Method::Radial1D, error_bound: 1e-12 * half },
        Estimate { value: mu * acc.mean(), method: Method::MonteCarlo, error_bound: mu * acc.std_error() },
    ))
}
