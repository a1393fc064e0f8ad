//! The coefficient ring abstraction the free algebra is generic over.

use std::fmt::{Debug, Display};
use std::ops::{Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

/// An exact commutative coefficient ring.
///
/// Only exact rings implement this; floating point lives in the matrix
/// oracle, never in the symbolic engine.
pub trait Coefficient:
    Clone + PartialEq + Debug + Display + Zero + One + Neg<Output = Self> + Sub<Output = Self> + Send + Sync
{
    fn from_ratio(numer: i64, denom: i64) -> Self;

    /// True when the printed form starts with a minus sign that can be
    /// pulled out as a term separator.
    fn leading_negative(&self) -> bool;

    /// True when the printed form needs no parentheses as a factor.
    fn is_atomic(&self) -> bool;
}

impl Coefficient for Scalar {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        Scalar::from_ratio(numer, denom)
    }
    fn leading_negative(&self) -> bool {
        Scalar::leading_negative(self)
    }
    fn is_atomic(&self) -> bool {
        Scalar::is_atomic(self)
    }
}

impl Coefficient for BigRational {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }
    fn leading_negative(&self) -> bool {
        self.is_negative()
    }
    fn is_atomic(&self) -> bool {
        true
    }
}
