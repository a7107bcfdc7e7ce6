//! Scalar traits the exact linear algebra is generic over.
//!
//! Everything in the engine is exact: the concrete scalars are
//! [`Rational`](crate::Rational), [`CycNumber`](crate::CycNumber),
//! polynomials and rational functions over them.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A commutative ring with exact equality.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Neg<Output = Self>
        + Add<Output = Self>
        + Sub<Output = Self>
        + Mul<Output = Self>
{
}

/// An integral domain in which divisions known to be exact can be carried out.
/// This is what fraction-free elimination needs.
pub trait ExactDiv: Ring {
    /// `self / rhs` when `rhs` divides `self`; `None` otherwise.
    fn exact_div(&self, rhs: &Self) -> Option<Self>;
}

/// A field.
pub trait Field: Ring {
    fn inverse(&self) -> Option<Self>;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inverse().map(|r| self.clone() * r)
    }
}

impl Field for BigRational {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl ExactDiv for BigInt {
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(rhs);
        r.is_zero().then_some(q)
    }
}

/// Every field divides exactly.
#[macro_export]
macro_rules! field_exact_div {
    ($t:ty) => {
        impl $crate::scalar::ExactDiv for $t {
            fn exact_div(&self, rhs: &Self) -> Option<Self> {
                <$t as $crate::scalar::Field>::div(self, rhs)
            }
        }
    };
}

field_exact_div!(BigRational);
