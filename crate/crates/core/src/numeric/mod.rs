//! Quadrature and root bracketing shared by the contest machinery.

pub mod quadrature;
pub mod roots;

pub use quadrature::{integrate, integrate_pieces, DEFAULT_TOL};
pub use roots::{bisect, bisect_threshold};
