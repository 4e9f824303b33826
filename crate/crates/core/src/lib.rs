//! Sharp Nagy and Landau–Kolmogorov type inequalities on metric measure monoids.
//!
//! The crate is `no_std` and only needs `alloc`. It provides
//!
//! * the two shipped space families ([`space`]): the continuum
//!   `ℝ^m₊ × ℝ^{d−m}` with Lebesgue measure and the lattice `ℤ^m₊ × ℤ^{d−m}`
//!   with counting measure, both under the `ℓ∞` metric;
//! * moduli of continuity ([`modulus`]);
//! * ball integrals, seminorms and norms with certified metadata ([`calculus`]);
//! * the Steklov averaging operator, the Nagy / upper-gradient / charge bounds,
//!   hypersingular operators, mixed differences and the Stechkin curve
//!   ([`operators`]);
//! * the extremal functions on which the bounds turn into equalities
//!   ([`extremals`]);
//! * brute-force and randomized verification ([`oracle`]).
//!
//! IO, configuration files and the command line live in the `sharp-ineq` crate.
#![no_std]
#![warn(missing_debug_implementations)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod calculus;
pub mod error;
pub mod extremals;
mod math;
pub mod modulus;
pub mod operators;
pub mod oracle;
pub mod quadrature;
pub mod rng;
pub mod space;

pub use calculus::{Certificate, Estimate, FunctionModel, Method, QuadratureSpec, RealFunction};
pub use error::{Error, Result};
pub use modulus::Modulus;
pub use operators::{Bound, InequalityReport, Kernel, TheoremId, Verdict};
pub use space::{Point, Space, SpaceKind};
