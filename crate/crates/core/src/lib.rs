//! Exact Wedderburn data and SK₁ verdicts for truncated Iwasawa algebras of
//! G = H ⋊ Γ.
//!
//! The linear algebra, polynomials and function fields are generic over the
//! [`scalar`] traits; the aliases below fix the concrete exact scalars the
//! engine runs on.

pub mod arith;
pub mod chars;
pub mod cli;
pub mod crossed;
pub mod cyclo;
pub mod error;
pub mod groups;
pub mod linalg;
pub mod scalar;
pub mod sk1;
pub mod wedderburn;

pub use error::{Error, Result};

/// Arbitrary-precision rational in lowest terms.
pub type Rational = num_rational::BigRational;
pub use cyclo::CycNumber;
/// Polynomials in T over a cyclotomic field.
pub type CycPoly = cyclo::Poly<CycNumber>;
/// The function field standing in for the fraction field of ℤ_l[[Γ₀]].
pub type RatFunc = cyclo::RationalFunction<CycNumber>;
