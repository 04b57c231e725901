//! Exact arithmetic in Z[t, t⁻¹] and its fraction field.
//!
//! Everything here is exact: coefficients are arbitrary-precision integers
//! and determinants are computed without leaving the Laurent ring.

mod fraction;
mod matrix;
mod poly;

pub use fraction::RationalFraction;
pub use matrix::{det_integer, LaurentMatrix};
pub use poly::LaurentPoly;
