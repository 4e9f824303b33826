use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::modulus::Modulus;
use crate::operators::{Bound, InequalityReport, TheoremId, Verdict};
use crate::space::{integer_box, Space};

/// A modulus of continuity with rational values at rational arguments.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactModulus {
    /// `ω(t) = t`.
    Identity,
    /// Piecewise linear through rational knots, constant past the last.
    Table(Vec<(BigRational, BigRational)>),
}

impl ExactModulus {
    /// Converts `t` and `t^1` exactly; floating-point knots are read as the
    /// dyadic rationals they represent. Other power moduli are irrational.
    pub fn from_modulus(omega: &Modulus) -> Result<Self> {
        match omega {
            Modulus::Power { alpha } if *alpha == 1.0 => Ok(ExactModulus::Identity),
            Modulus::Power { .. } => Err(Error::NonRational("t^α with α < 1 takes irrational values")),
            Modulus::Table { knots } => knots
                .iter()
                .map(|(t, w)| Ok((rational(*t)?, rational(*w)?)))
                .collect::<Result<Vec<_>>>()
                .map(ExactModulus::Table),
        }
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        match self {
            ExactModulus::Identity => t.clone(),
            ExactModulus::Table(knots) => {
                let last = &knots[knots.len() - 1];
                if *t >= last.0 {
                    return last.1.clone();
                }
                let j = knots.partition_point(|k| k.0 <= *t);
                let (t0, w0) = &knots[j - 1];
                let (t1, w1) = &knots[j];
                w0 + (w1 - w0) * (t - t0) / (t1 - t0)
            }
        }
    }
}

/// Exact rational value of a finite float.
pub fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or(Error::NonRational("value is not finite"))
}

/// A lattice function with rational values.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactFunction {
    Zero,
    /// `f_{e,h}` for the `h` of the check.
    FEh,
    /// `c ± ω(ρ(x, θ))`.
    FOmega {
        c: BigRational,
        sign: i8,
    },
    /// Finitely supported values, zero elsewhere.
    Values(BTreeMap<Vec<i64>, BigRational>),
}

/// Every quantity of a lattice check in exact arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactReport {
    pub theorem: TheoremId,
    pub lhs: BigRational,
    pub rhs_term1: BigRational,
    pub rhs_term2: BigRational,
    pub gap: BigRational,
    pub verdict: Verdict,
}

impl ExactReport {
    pub fn rhs(&self) -> BigRational {
        &self.rhs_term1 + &self.rhs_term2
    }

    /// The same report in floating point; the verdict stays exact.
    pub fn to_report(&self) -> InequalityReport {
        let f = |q: &BigRational| q.to_f64().unwrap_or(f64::NAN);
        let mut r = InequalityReport::assess(
            self.theorem,
            f(&self.lhs),
            Bound { approximation: f(&self.rhs_term1), remainder: f(&self.rhs_term2) },
            0.0,
        );
        r.gap = f(&self.gap);
        r.verdict = self.verdict;
        r
    }
}

struct Ctx<'a> {
    space: Space,
    omega: &'a ExactModulus,
    wh: BigRational,
    f: &'a ExactFunction,
}

impl Ctx<'_> {
    fn norm(x: &[i64]) -> BigRational {
        BigRational::from_integer(BigInt::from(x.iter().map(|c| c.abs()).max().unwrap_or(0)))
    }

    fn eval(&self, x: &[i64]) -> BigRational {
        match self.f {
            ExactFunction::Zero => BigRational::zero(),
            ExactFunction::FEh => {
                let v = &self.wh - self.omega.eval(&Self::norm(x));
                if v.is_negative() {
                    BigRational::zero()
                } else {
                    v
                }
            }
            ExactFunction::FOmega { c, sign } => {
                let w = self.omega.eval(&Self::norm(x));
                if *sign >= 0 {
                    c + w
                } else {
                    c - w
                }
            }
            ExactFunction::Values(map) => map.get(x).cloned().unwrap_or_else(BigRational::zero),
        }
    }

    /// Coordinates of the box `|x|_∞ ≤ r` inside the space.
    fn window(&self, r: i64) -> Vec<Vec<i64>> {
        let ranges: Vec<(i64, i64)> =
            (0..self.space.d()).map(|i| if self.space.is_half(i) { (0, r) } else { (-r, r) }).collect();
        integer_box(&ranges)
    }

    /// Largest `|x|_∞` on the support, or `None` if not finitely supported.
    fn support(&self, reach: i64) -> Option<i64> {
        match self.f {
            ExactFunction::Zero => Some(0),
            ExactFunction::FEh => Some(reach),
            ExactFunction::FOmega { .. } => None,
            ExactFunction::Values(map) => Some(map.keys().flat_map(|k| k.iter().map(|c| c.abs())).max().unwrap_or(0)),
        }
    }
}

fn exact_ceil(q: &BigRational) -> Result<i64> {
    q.ceil().to_integer().to_i64().ok_or(Error::InvalidParameter("radius too large"))
}

/// `(μ(B_h), I(h))` on a lattice in exact arithmetic.
pub fn exact_ball_integral(space: &Space, omega: &ExactModulus, h: &BigRational) -> Result<(BigRational, BigRational)> {
    if !space.is_lattice() {
        return Err(Error::Unsupported("exact ball integrals run on lattices"));
    }
    if *h <= BigRational::from_integer(BigInt::from(1)) {
        return Err(Error::InvalidRadius { h: h.to_f64().unwrap_or(f64::NAN), reason: "lattice radius must exceed 1" });
    }
    let reach = exact_ceil(h)? - 1;
    let ranges: Vec<(i64, i64)> =
        (0..space.d()).map(|i| if space.is_half(i) { (0, reach) } else { (-reach, reach) }).collect();
    let ball = integer_box(&ranges);
    let mu = BigRational::from_integer(BigInt::from(ball.len()));
    let i = ball.iter().map(|u| omega.eval(&Ctx::norm(u))).fold(BigRational::zero(), |a, b| a + b);
    Ok((mu, i))
}

/// Exact check of one inequality on a lattice. `window` bounds the search
/// for functions without finite support and enlarges it otherwise.
///
/// Supports `lemma1`, `nagy`, `nagy_l1`, `sobolev` (upper gradient
/// `‖f‖_{H^ω}/2`, or `1/2` for `f_{e,h}`) and `charge` (the density `f`).
pub fn exact_verify(
    theorem: TheoremId,
    space: &Space,
    omega: &ExactModulus,
    h: &BigRational,
    f: &ExactFunction,
    window: i64,
) -> Result<ExactReport> {
    if !space.is_lattice() {
        return Err(Error::Unsupported("exact verification runs on lattices"));
    }
    if *h <= BigRational::from_integer(BigInt::from(1)) {
        return Err(Error::InvalidRadius { h: h.to_f64().unwrap_or(f64::NAN), reason: "lattice radius must exceed 1" });
    }
    if let ExactFunction::Values(map) = f {
        for k in map.keys() {
            space.check_point(&k.iter().map(|c| *c as f64).collect::<Vec<_>>())?;
        }
    }
    let ctx = Ctx { space: *space, omega, wh: omega.eval(h), f };
    let reach = exact_ceil(h)? - 1;
    let ball = ctx.window(reach);
    let mu = BigRational::from_integer(BigInt::from(ball.len()));
    let i_h: BigRational = ball.iter().map(|u| omega.eval(&Ctx::norm(u))).fold(BigRational::zero(), |a, b| a + b);
    let support = ctx.support(reach);
    let outer = support.map_or(window, |s| s.max(window));

    let ball_sum = |x: &[i64]| -> BigRational {
        let mut y = vec![0i64; x.len()];
        let mut s = BigRational::zero();
        for u in &ball {
            for ((yi, xi), ui) in y.iter_mut().zip(x).zip(u) {
                *yi = xi + ui;
            }
            s += ctx.eval(&y);
        }
        s
    };

    let holder = || -> BigRational {
        match f {
            ExactFunction::Zero => BigRational::zero(),
            ExactFunction::FOmega { .. } => BigRational::from_integer(BigInt::from(1)),
            _ => {
                // Pairs in the support box plus one layer suffice: any
                // farther point projects onto that layer, where f = 0, at a
                // smaller distance.
                let pts = ctx.window(outer + 1);
                let vals: Vec<BigRational> = pts.iter().map(|p| ctx.eval(p)).collect();
                let mut best = BigRational::zero();
                for i in 0..pts.len() {
                    for j in (i + 1)..pts.len() {
                        let diff = (&vals[i] - &vals[j]).abs();
                        if diff.is_zero() {
                            continue;
                        }
                        let rho = pts[i].iter().zip(&pts[j]).map(|(a, b)| (a - b).abs()).max().unwrap_or(0);
                        let w = omega.eval(&BigRational::from_integer(BigInt::from(rho)));
                        let q = diff / w;
                        if q > best {
                            best = q;
                        }
                    }
                }
                best
            }
        }
    };

    let need_support = || support.ok_or(Error::Unsupported("this check needs a finitely supported function"));

    let sup = || -> BigRational {
        ctx.window(outer).iter().map(|x| ctx.eval(x).abs()).fold(BigRational::zero(), |a, b| if b > a { b } else { a })
    };

    let seminorm = || -> Result<BigRational> {
        let s = need_support()?;
        Ok(ctx.window(s.max(window) + reach).iter().map(|x| ball_sum(x).abs()).fold(BigRational::zero(), |a, b| {
            if b > a {
                b
            } else {
                a
            }
        }))
    };

    let (lhs, t1, t2) = match theorem {
        TheoremId::Lemma1 => {
            let r = support.map_or(window, |s| s.max(window) + reach);
            let lhs = ctx
                .window(r)
                .iter()
                .map(|x| (ctx.eval(x) - ball_sum(x) / &mu).abs())
                .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
            (lhs, holder() * &i_h / &mu, BigRational::zero())
        }
        TheoremId::Nagy | TheoremId::Charge => {
            let s = seminorm()?;
            (sup(), holder() * &i_h / &mu, s / &mu)
        }
        TheoremId::NagyL1 => {
            need_support()?;
            let l1 = ctx.window(outer).iter().map(|x| ctx.eval(x).abs()).fold(BigRational::zero(), |a, b| a + b);
            (sup(), holder() * &i_h / &mu, l1 / &mu)
        }
        TheoremId::Sobolev => {
            let s = seminorm()?;
            let two_g = match f {
                ExactFunction::FEh => BigRational::from_integer(BigInt::from(1)),
                _ => holder(),
            };
            (sup(), two_g * &i_h / &mu, s / &mu)
        }
        _ => return Err(Error::Unsupported("exact checks cover lemma1, nagy, nagy_l1, sobolev and charge")),
    };
    let gap = &t1 + &t2 - &lhs;
    let verdict = if gap.is_negative() {
        Verdict::Violated
    } else if gap.is_zero() {
        Verdict::EqualityAttained
    } else {
        Verdict::Holds
    };
    Ok(ExactReport { theorem, lhs, rhs_term1: t1, rhs_term2: t2, gap, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn line_examples() {
        let s = Space::lattice(1, 0).unwrap();
        let w = ExactModulus::Identity;
        let h = q(3, 2);
        let r = exact_verify(TheoremId::Nagy, &s, &w, &h, &ExactFunction::FEh, 0).unwrap();
        assert_eq!(r.lhs, q(3, 2));
        assert_eq!(r.rhs_term1, q(2, 3));
        assert_eq!(r.rhs_term2, q(5, 6));
        assert!(r.gap.is_zero());
        assert_eq!(r.verdict, Verdict::EqualityAttained);
        let l = exact_verify(TheoremId::Lemma1, &s, &w, &h, &ExactFunction::FOmega { c: q(0, 1), sign: 1 }, 5).unwrap();
        assert_eq!(l.lhs, q(2, 3));
        assert_eq!(l.rhs(), q(2, 3));
        let z = exact_verify(TheoremId::Nagy, &s, &w, &h, &ExactFunction::Zero, 2).unwrap();
        assert!(z.lhs.is_zero() && z.rhs().is_zero());
    }

    #[test]
    fn plane_example() {
        let s = Space::lattice(2, 0).unwrap();
        let r = exact_verify(TheoremId::Charge, &s, &ExactModulus::Identity, &q(3, 2), &ExactFunction::FEh, 0).unwrap();
        assert_eq!(r.rhs_term1, q(8, 9));
        assert_eq!(r.rhs_term2, q(11, 18));
        assert_eq!(r.verdict, Verdict::EqualityAttained);
    }

    #[test]
    fn irrational_inputs() {
        assert!(ExactModulus::from_modulus(&Modulus::power(0.5).unwrap()).is_err());
        assert_eq!(ExactModulus::from_modulus(&Modulus::identity()).unwrap(), ExactModulus::Identity);
    }
}
