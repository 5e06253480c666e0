//! Fundamental solutions of the two-dimensional Lamé system.

pub mod bessel;
pub mod expansion;
pub mod far;
pub mod green;

pub use bessel::{hankel0_first_kind, hankel_first_kind};
pub use expansion::{beta, eval_a, eval_b, ExpansionCoefficients};
pub use far::far_kernel;
pub use green::{green, green_dynamic, green_static, radial, traction, Radial};
