use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `d = 0` or `m > d`.
    InvalidSpace {
        d: usize,
        m: usize,
    },
    /// Radius is not positive, or a lattice radius does not exceed 1.
    InvalidRadius {
        h: f64,
        reason: &'static str,
    },
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// A point violates the sign constraints of the half-line factors or is
    /// not integral on a lattice.
    OutsideDomain,
    NegativeArgument(f64),
    InvalidModulus(String),
    InvalidKernel(String),
    InvalidParameter(&'static str),
    /// The requested quadrature method cannot be used for this space/operand.
    MethodMismatch(&'static str),
    NoConvergence {
        evaluations: usize,
        error_estimate: f64,
    },
    WindowTooSmall {
        window: f64,
        required: f64,
    },
    CoincidentPair,
    DivergentMass(&'static str),
    Uncertified(&'static str),
    Unsupported(&'static str),
    NonRational(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSpace { d, m } => write!(f, "invalid space: d = {d}, m = {m} (need d >= 1, m <= d)"),
            Error::InvalidRadius { h, reason } => write!(f, "invalid radius {h}: {reason}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::OutsideDomain => f.write_str("point lies outside the space"),
            Error::NegativeArgument(t) => write!(f, "negative argument {t}"),
            Error::InvalidModulus(msg) => write!(f, "invalid modulus of continuity: {msg}"),
            Error::InvalidKernel(msg) => write!(f, "invalid kernel: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::MethodMismatch(msg) => write!(f, "quadrature method mismatch: {msg}"),
            Error::NoConvergence { evaluations, error_estimate } => write!(
                f,
                "quadrature did not converge after {evaluations} evaluations (error estimate {error_estimate:e})"
            ),
            Error::WindowTooSmall { window, required } => {
                write!(f, "search window {window} is smaller than the required {required}")
            }
            Error::CoincidentPair => f.write_str("sample pair has coincident points"),
            Error::DivergentMass(msg) => write!(f, "divergent kernel mass: {msg}"),
            Error::Uncertified(msg) => write!(f, "missing certified metadata: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::NonRational(msg) => write!(f, "non-rational input: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
