use alloc::vec::Vec;

use rand_core::RngCore;

use crate::calculus::{Certificate, Exterior, FunctionModel, RealFunction};
use crate::error::{Error, Result};
use crate::modulus::Modulus;
use crate::rng;
use crate::space::{linf_distance, linf_norm, Point, Space};

/// `f(x) = σ · max_i (c_i − λ ω(ρ(x, p_i)))_+`; a constant `σ max c_i` when
/// `λ = 0`. Every such function satisfies `‖f‖_{H^ω} ≤ λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeFunctionSpec {
    pub centers: Vec<Point>,
    pub heights: Vec<f64>,
    pub slope: f64,
    /// `+1` or `−1`.
    pub sign: f64,
}

impl ConeFunctionSpec {
    pub fn validate(&self, space: &Space) -> Result<()> {
        if self.centers.is_empty() || self.centers.len() != self.heights.len() {
            return Err(Error::InvalidParameter("cone centers and heights must be nonempty and of equal length"));
        }
        for p in &self.centers {
            space.check_point(p)?;
        }
        if self.heights.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::InvalidParameter("cone heights must be finite and nonnegative"));
        }
        if !(self.slope.is_finite() && self.slope >= 0.0) {
            return Err(Error::InvalidParameter("cone slope must be finite and nonnegative"));
        }
        if self.sign != 1.0 && self.sign != -1.0 {
            return Err(Error::InvalidParameter("cone sign must be +1 or -1"));
        }
        Ok(())
    }

    pub fn max_height(&self) -> f64 {
        self.heights.iter().copied().fold(0.0, f64::max)
    }

    /// `λ f` for `λ ≥ 0` (heights and slope scale together).
    pub fn scaled(&self, lambda: f64) -> Self {
        ConeFunctionSpec {
            centers: self.centers.clone(),
            heights: self.heights.iter().map(|c| c * lambda).collect(),
            slope: self.slope * lambda,
            sign: self.sign,
        }
    }

    /// Radius outside of which the function vanishes (`None` for constants
    /// or when `ω` never reaches `c_i/λ`).
    pub fn support_radius(&self, omega: &Modulus) -> Option<f64> {
        if self.slope == 0.0 {
            return None;
        }
        let mut r = 0.0f64;
        for (p, c) in self.centers.iter().zip(&self.heights) {
            r = r.max(linf_norm(p) + omega.inverse(c / self.slope)?);
        }
        Some(r)
    }

    pub fn build(&self, space: &Space, omega: &Modulus) -> Result<FunctionModel> {
        self.validate(space)?;
        let top = self.max_height();
        let exterior = if self.slope == 0.0 {
            Some(Exterior { radius: 0.0, value: self.sign * top })
        } else {
            self.support_radius(omega).map(|radius| Exterior { radius, value: 0.0 })
        };
        let cert = Certificate {
            holder_bound: Some(self.slope),
            sup_norm: Some(top),
            upper_gradient_bound: Some(self.slope / 2.0),
            exterior,
            ..Default::default()
        };
        Ok(FunctionModel::new(Cone { spec: self.clone(), omega: omega.clone(), cert }))
    }

    /// A random instance: one to three cones with centres in `[−3, 3]`
    /// (`[0, 3]` on half-line axes, integral on lattices), radii `ω`-mapped
    /// from `(0.5, 3)`, slope in `(0.2, 2)` or, with probability 1/20, zero.
    pub fn random<R: RngCore>(space: &Space, omega: &Modulus, r: &mut R, allow_constant: bool) -> Self {
        let k = rng::int_in(r, 1, 3) as usize;
        let constant = allow_constant && rng::int_in(r, 0, 19) == 0;
        let slope = if constant { 0.0 } else { rng::uniform(r, 0.2, 2.0) };
        let mut centers = Vec::with_capacity(k);
        let mut heights = Vec::with_capacity(k);
        for _ in 0..k {
            let p: Vec<f64> = (0..space.d())
                .map(|i| {
                    let lo = if space.is_half(i) { 0 } else { -3 };
                    if space.is_lattice() {
                        rng::int_in(r, lo, 3) as f64
                    } else {
                        rng::uniform(r, lo as f64, 3.0)
                    }
                })
                .collect();
            centers.push(Point::new(p));
            let radius = rng::uniform(r, 0.5, 3.0);
            heights.push(if constant { rng::uniform(r, 0.1, 2.0) } else { slope * omega.value(radius) });
        }
        let sign = if r.next_u32() & 1 == 0 { 1.0 } else { -1.0 };
        ConeFunctionSpec { centers, heights, slope, sign }
    }
}

struct Cone {
    spec: ConeFunctionSpec,
    omega: Modulus,
    cert: Certificate,
}

impl RealFunction for Cone {
    fn eval(&self, x: &[f64]) -> f64 {
        let s = &self.spec;
        if s.slope == 0.0 {
            return s.sign * s.max_height();
        }
        let mut best = 0.0f64;
        for (p, c) in s.centers.iter().zip(&s.heights) {
            best = best.max(c - s.slope * self.omega.value(linf_distance(x, p)));
        }
        s.sign * best
    }

    fn certificate(&self) -> Certificate {
        self.cert
    }

    fn axis_kinks(&self, axis: usize) -> Vec<f64> {
        let s = &self.spec;
        let mut out = Vec::new();
        if s.slope == 0.0 {
            return out;
        }
        for (p, c) in s.centers.iter().zip(&s.heights) {
            out.push(p[axis]);
            if let Some(r) = self.omega.inverse(c / s.slope) {
                out.push(p[axis] - r);
                out.push(p[axis] + r);
            }
            for k in self.omega.kinks() {
                out.push(p[axis] - k);
                out.push(p[axis] + k);
            }
        }
        out.retain(|v| v.is_finite());
        out
    }
}

/// `ω^{-1}` helper that never fails on cones whose heights are in range.
pub(crate) fn cone_radius(omega: &Modulus, height: f64, slope: f64) -> f64 {
    if slope == 0.0 {
        return f64::INFINITY;
    }
    omega.inverse(height / slope).unwrap_or(f64::INFINITY)
}
