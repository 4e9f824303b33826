//! Independent verification: exact rational checks on lattices, randomized
//! suites over certified cone functions, and Monte Carlo cross-checks.

mod cone;
mod crosscheck;
mod exact;
mod suite;

pub use cone::*;
pub use crosscheck::*;
pub use exact::*;
pub use suite::*;
