//! Exact symbolic scalar arithmetic over coordinate charts.
//!
//! [`ScalarExpr`] is a multivariate rational function with arbitrary
//! precision rational coefficients, kept in a canonical form (coprime
//! numerator/denominator, monic denominator) so that equality is decidable
//! structural equality. This is the coefficient field for every tensor in
//! the crate.

mod chart;
pub mod parse;
mod poly;
mod scalar;

pub use chart::{Chart, ChartError};
pub use parse::{parse, ParseError};
pub use poly::{gcd as poly_gcd, Poly};
pub use scalar::{ExprError, ScalarExpr};

pub use num::bigint::BigInt;
pub use num::rational::BigRational;

/// Shorthand for an exact rational from a numerator/denominator pair.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
