use core::fmt;
use core::str::FromStr;

use crate::error::Error;
use crate::math;

/// Relative tolerance for equality verdicts computed from closed forms.
pub const CLOSED_FORM_TOL: f64 = 1e-8;
/// Relative tolerance for equality verdicts that involve quadrature.
pub const QUADRATURE_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    /// `‖f − S_h f‖ ≤ ‖f‖_{H^ω} I(h)/μ(B_h)`.
    Lemma1,
    /// `‖f‖ ≤ ‖f‖_{H^ω} I(h)/μ(B_h) + ⌋f⌈_h/μ(B_h)`.
    Nagy,
    /// As [`TheoremId::Nagy`] with `‖f‖_{L₁}` in place of `⌋f⌈_h`.
    NagyL1,
    /// Upper-gradient form: `2‖G‖_∞ I(h)/μ(B_h) + ⌋f⌈_h/μ(B_h)`.
    Sobolev,
    /// Charges through their densities.
    Charge,
    Hypersingular,
    MixedAdditive,
    MixedMultiplicative,
}

impl TheoremId {
    pub const ALL: [TheoremId; 8] = [
        TheoremId::Lemma1,
        TheoremId::Nagy,
        TheoremId::NagyL1,
        TheoremId::Sobolev,
        TheoremId::Charge,
        TheoremId::Hypersingular,
        TheoremId::MixedAdditive,
        TheoremId::MixedMultiplicative,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::Lemma1 => "lemma1",
            TheoremId::Nagy => "nagy",
            TheoremId::NagyL1 => "nagy_l1",
            TheoremId::Sobolev => "sobolev",
            TheoremId::Charge => "charge",
            TheoremId::Hypersingular => "hypersingular",
            TheoremId::MixedAdditive => "mixed_additive",
            TheoremId::MixedMultiplicative => "mixed_multiplicative",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        TheoremId::ALL.into_iter().find(|t| t.as_str() == s).ok_or(Error::InvalidParameter("unknown theorem id"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    EqualityAttained,
    Violated,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::EqualityAttained => "equality",
            Verdict::Violated => "violated",
        }
    }
}

/// A right-hand side split into the approximation term (the deviation of
/// the approximating operator) and the norm term (operator norm times the
/// weaker norm).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Bound {
    pub approximation: f64,
    pub remainder: f64,
}

impl Bound {
    pub fn total(&self) -> f64 {
        self.approximation + self.remainder
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityReport {
    pub theorem: TheoremId,
    pub lhs: f64,
    pub rhs: Bound,
    /// `rhs − lhs`.
    pub gap: f64,
    /// Relative tolerance applied to `max(|lhs|, |rhs|)`.
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl InequalityReport {
    pub fn assess(theorem: TheoremId, lhs: f64, rhs: Bound, tolerance: f64) -> Self {
        let total = rhs.total();
        let gap = total - lhs;
        let slack = tolerance * math::abs(lhs).max(math::abs(total));
        let verdict = if gap.is_nan() || gap < -slack {
            Verdict::Violated
        } else if gap == f64::INFINITY {
            Verdict::Holds
        } else if math::abs(gap) <= slack {
            Verdict::EqualityAttained
        } else {
            Verdict::Holds
        };
        InequalityReport { theorem, lhs, rhs, gap, tolerance, verdict }
    }

    pub fn rhs_total(&self) -> f64 {
        self.rhs.total()
    }

    /// Relative gap `(rhs − lhs)/max(|lhs|, |rhs|)` (0 when both vanish).
    pub fn relative_gap(&self) -> f64 {
        let scale = math::abs(self.lhs).max(math::abs(self.rhs.total()));
        if scale == 0.0 {
            0.0
        } else {
            self.gap / scale
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        let b = |a, r| Bound { approximation: a, remainder: r };
        assert_eq!(
            InequalityReport::assess(TheoremId::Nagy, 1.0, b(0.5, 0.5), 1e-8).verdict,
            Verdict::EqualityAttained
        );
        assert_eq!(InequalityReport::assess(TheoremId::Nagy, 0.5, b(0.5, 0.5), 1e-8).verdict, Verdict::Holds);
        assert_eq!(InequalityReport::assess(TheoremId::Nagy, 1.1, b(0.5, 0.5), 1e-8).verdict, Verdict::Violated);
        assert_eq!(
            InequalityReport::assess(TheoremId::Nagy, 0.0, b(0.0, 0.0), 1e-8).verdict,
            Verdict::EqualityAttained
        );
        assert_eq!(InequalityReport::assess(TheoremId::Nagy, f64::NAN, b(0.0, 0.0), 1e-8).verdict, Verdict::Violated);
        assert_eq!(
            InequalityReport::assess(TheoremId::NagyL1, 1.0, b(0.0, f64::INFINITY), 1e-8).verdict,
            Verdict::Holds
        );
    }

    #[test]
    fn theorem_ids_round_trip() {
        for t in TheoremId::ALL {
            assert_eq!(t.as_str().parse::<TheoremId>().unwrap(), t);
        }
        assert!("theorem7".parse::<TheoremId>().is_err());
    }
}
