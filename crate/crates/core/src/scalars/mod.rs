//! Exact and floating arithmetic kernel.
//!
//! Scalars are binary64 (real or complex); exact [`Fraction`] arithmetic is
//! reserved for the combinatorial stability computations. Infinity on the
//! projective line is always represented projectively as `(1, 0)`, never as
//! a sentinel floating value.

mod agm;
mod mobius;
mod poly;
mod proj;

pub use agm::agm;
pub use mobius::{mobius_from_triple, Mobius};
pub use poly::{lagrange_interpolate, Field, Poly};
pub use proj::{cross_ratio, ProjPoint};

/// Complex binary64 scalar used throughout the numeric kernels.
pub type C = num_complex::Complex64;

/// Exact rational scalar (arbitrary-precision, always reduced).
pub type Fraction = num_rational::BigRational;

/// Default relative tolerance for numeric identity checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Builds a reduced fraction from a numerator/denominator pair.
pub fn frac(num: i64, den: i64) -> Fraction {
    Fraction::new(num.into(), den.into())
}
