//! Numerical machinery for the sign structure of `d^k/ds^k log L(s, χ)`
//! for real primitive Dirichlet characters `χ`.
//!
//! The crate evaluates `L(s, χ)` through Hurwitz zeta, locates zeros on the
//! critical line, computes `F^(k)(s, χ)` by a Dirichlet series and by a sum
//! over zeros, and builds the sign fingerprints, density scans and the
//! synthetic Siegel-zero and off-line-zero constructions on top.

pub mod characters;
pub mod error;
pub mod lfunction;
pub mod logderiv;
pub mod monotonicity;
pub mod special;
pub mod sum;
pub mod zeros;

pub use characters::RealPrimitiveCharacter;
pub use error::{Error, Result};
