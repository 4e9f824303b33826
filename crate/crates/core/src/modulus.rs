//! Moduli of continuity.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// A modulus of continuity `ω`: nonnegative, nondecreasing, semi-additive,
/// `ω(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum Modulus {
    /// `ω(t) = t^α`, `0 < α ≤ 1`.
    Power { alpha: f64 },
    /// Piecewise linear through `knots` (first knot `(0, 0)`), constant
    /// beyond the last knot.
    Table { knots: Vec<(f64, f64)> },
}

/// One failed axiom found by [`Modulus::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonzeroAtOrigin { value: f64 },
    Negative { t: f64, value: f64 },
    Decreasing { s: f64, t: f64 },
    NotSemiAdditive { s: f64, t: f64, sum: f64, bound: f64 },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Modulus {
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidModulus(format!("power exponent {alpha} outside (0, 1]")));
        }
        Ok(Modulus::Power { alpha })
    }

    /// `ω(t) = t`.
    pub fn identity() -> Self {
        Modulus::Power { alpha: 1.0 }
    }

    /// A concave piecewise-linear modulus. Concavity is what makes a
    /// nondecreasing table with `ω(0) = 0` semi-additive, so it is required.
    pub fn table(knots: Vec<(f64, f64)>) -> Result<Self> {
        let m = Self::raw_table(knots)?;
        if let Modulus::Table { knots } = &m {
            for w in knots.windows(2) {
                if w[1].1 < w[0].1 {
                    return Err(Error::InvalidModulus(format!(
                        "values decrease between t = {} and t = {}",
                        w[0].0, w[1].0
                    )));
                }
            }
            for w in knots.windows(3) {
                let s0 = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
                let s1 = (w[2].1 - w[1].1) / (w[2].0 - w[1].0);
                if s1 > s0 * (1.0 + 1e-12) + 1e-300 {
                    return Err(Error::InvalidModulus(format!(
                        "table is not concave at t = {} (slope {s0} then {s1})",
                        w[1].0
                    )));
                }
            }
        }
        Ok(m)
    }

    /// A table checked only for ordering and `ω(0) = 0`; monotonicity and
    /// concavity are left to [`Modulus::validate`]. Not a modulus in general.
    pub fn raw_table(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidModulus("a table needs at least two knots".into()));
        }
        if knots[0] != (0.0, 0.0) {
            return Err(Error::InvalidModulus("the first knot must be (0, 0)".into()));
        }
        if knots.iter().any(|(t, w)| !t.is_finite() || !w.is_finite()) {
            return Err(Error::InvalidModulus("knots must be finite".into()));
        }
        if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidModulus("knot abscissae must be strictly increasing".into()));
        }
        Ok(Modulus::Table { knots })
    }

    /// `ω(t)`; errors on negative `t`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::NegativeArgument(t));
        }
        Ok(self.value(t))
    }

    /// `ω(t)` for `t ≥ 0` without the argument check.
    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        match self {
            Modulus::Power { alpha } => {
                if t <= 0.0 {
                    0.0
                } else if *alpha == 1.0 {
                    t
                } else {
                    math::powf(t, *alpha)
                }
            }
            Modulus::Table { knots } => {
                let last = knots[knots.len() - 1];
                if t >= last.0 {
                    return last.1;
                }
                // First knot with abscissa > t.
                let j = knots.partition_point(|k| k.0 <= t);
                let (t0, w0) = knots[j - 1];
                let (t1, w1) = knots[j];
                w0 + (w1 - w0) * (t - t0) / (t1 - t0)
            }
        }
    }

    /// Right derivative `ω'(t+)` for `t > 0` (0 at `t = 0` by convention;
    /// callers integrate it against weights vanishing there).
    pub fn derivative(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self {
            Modulus::Power { alpha } => alpha * math::powf(t, alpha - 1.0),
            Modulus::Table { knots } => {
                let last = knots[knots.len() - 1];
                if t >= last.0 {
                    return 0.0;
                }
                let j = knots.partition_point(|k| k.0 <= t);
                let (t0, w0) = knots[j - 1];
                let (t1, w1) = knots[j];
                (w1 - w0) / (t1 - t0)
            }
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            Modulus::Power { alpha } => Some(*alpha),
            Modulus::Table { .. } => None,
        }
    }

    /// Exponent `a` with `ω(t) ≤ C t^a` near zero: `α` for powers, 1 for
    /// tables (a concave table lies below its first chord's line).
    pub fn small_scale_exponent(&self) -> f64 {
        match self {
            Modulus::Power { alpha } => *alpha,
            Modulus::Table { .. } => 1.0,
        }
    }

    /// Interior points where `ω` is not smooth.
    pub fn kinks(&self) -> Vec<f64> {
        match self {
            Modulus::Power { .. } => Vec::new(),
            Modulus::Table { knots } => knots.iter().skip(1).map(|k| k.0).collect(),
        }
    }

    /// `sup_t ω(t)` (infinite for powers).
    pub fn sup(&self) -> f64 {
        match self {
            Modulus::Power { .. } => f64::INFINITY,
            Modulus::Table { knots } => knots[knots.len() - 1].1,
        }
    }

    /// Smallest `t ≥ 0` with `ω(t) ≥ y`, or `None` if `ω` never reaches `y`.
    pub fn inverse(&self, y: f64) -> Option<f64> {
        if y <= 0.0 {
            return Some(0.0);
        }
        match self {
            Modulus::Power { alpha } => Some(math::powf(y, 1.0 / alpha)),
            Modulus::Table { knots } => {
                let j = knots.iter().position(|k| k.1 >= y)?;
                let (t0, w0) = knots[j - 1];
                let (t1, w1) = knots[j];
                Some(t0 + (t1 - t0) * (y - w0) / (w1 - w0))
            }
        }
    }

    /// Checks nonnegativity, monotonicity and semi-additivity over every
    /// point and pair drawn from `grid`. Comparisons allow a relative slack of
    /// `1e-12` for rounding.
    pub fn validate(&self, grid: &[f64]) -> ValidationReport {
        let mut report = ValidationReport::default();
        let w0 = self.value(0.0);
        if w0 != 0.0 {
            report.violations.push(Violation::NonzeroAtOrigin { value: w0 });
        }
        let mut pts: Vec<f64> = grid.iter().copied().filter(|t| *t >= 0.0).collect();
        pts.sort_by(|a, b| a.total_cmp(b));
        pts.dedup();
        let vals: Vec<f64> = pts.iter().map(|t| self.value(*t)).collect();
        let slack = |x: f64| 1e-12 * x.abs().max(1e-300);
        for (t, v) in pts.iter().zip(&vals) {
            if *v < 0.0 {
                report.violations.push(Violation::Negative { t: *t, value: *v });
            }
        }
        for i in 1..pts.len() {
            if vals[i] < vals[i - 1] - slack(vals[i - 1]) {
                report.violations.push(Violation::Decreasing { s: pts[i - 1], t: pts[i] });
            }
        }
        for i in 0..pts.len() {
            for j in i..pts.len() {
                let sum = self.value(pts[i] + pts[j]);
                let bound = vals[i] + vals[j];
                if sum > bound + slack(bound) {
                    report.violations.push(Violation::NotSemiAdditive { s: pts[i], t: pts[j], sum, bound });
                }
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn eval_examples() {
        assert_eq!(Modulus::identity().eval(0.7).unwrap(), 0.7);
        assert_eq!(Modulus::power(0.5).unwrap().eval(4.0).unwrap(), 2.0);
        assert_eq!(Modulus::power(0.3).unwrap().eval(0.0).unwrap(), 0.0);
        let t = Modulus::table(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 1.5)]).unwrap();
        assert_eq!(t.eval(0.0).unwrap(), 0.0);
        assert_eq!(t.eval(1.5).unwrap(), 1.25);
        assert_eq!(t.eval(10.0).unwrap(), 1.5);
        assert!(matches!(t.eval(-0.1), Err(Error::NegativeArgument(_))));
    }

    #[test]
    fn constructor_errors() {
        assert!(Modulus::power(0.0).is_err());
        assert!(Modulus::power(1.5).is_err());
        assert!(Modulus::table(vec![(0.0, 0.0)]).is_err());
        assert!(Modulus::table(vec![(0.0, 0.1), (1.0, 1.0)]).is_err());
        assert!(Modulus::table(vec![(0.0, 0.0), (1.0, 1.0), (1.0, 2.0)]).is_err());
        // convex
        assert!(Modulus::table(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 3.0)]).is_err());
        // decreasing
        assert!(Modulus::table(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 0.5)]).is_err());
    }

    #[test]
    fn validate_examples() {
        let grid: Vec<f64> = (0..=40).map(|i| i as f64 * 0.1).collect();
        assert!(Modulus::power(0.5).unwrap().validate(&grid).passed());
        let good = Modulus::table(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 1.5)]).unwrap();
        assert!(good.validate(&grid).passed());
        let bad = Modulus::raw_table(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 3.0)]).unwrap();
        let rep = bad.validate(&[0.0, 1.0, 2.0]);
        assert!(rep
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NotSemiAdditive { s, t, .. } if *s == 1.0 && *t == 1.0)));
    }

    #[test]
    fn inverse_round_trips() {
        let t = Modulus::table(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 1.5)]).unwrap();
        assert_eq!(t.inverse(1.25), Some(1.5));
        assert_eq!(t.inverse(2.0), None);
        let p = Modulus::power(0.5).unwrap();
        assert!((p.inverse(3.0).unwrap() - 9.0).abs() < 1e-12);
    }
}
