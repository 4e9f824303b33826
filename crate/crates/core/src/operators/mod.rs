//! Operators and the right-hand sides of the sharp inequalities.

mod hypersingular;
mod mixed;
mod nagy;
mod report;
mod stechkin;
mod steklov;

pub use hypersingular::*;
pub use mixed::*;
pub use nagy::*;
pub use report::*;
pub use stechkin::*;
pub use steklov::*;
