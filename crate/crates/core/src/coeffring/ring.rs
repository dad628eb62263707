use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Scalar ring for polynomial coefficients.
///
/// Implemented for arbitrary-precision integers and rationals. Everything in
/// the engine is integral except the output of the formal logarithm.
pub trait Ring:
    Clone
    + PartialEq
    + Eq
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_i64(v: i64) -> Self;

    /// Multiplicative inverse, if the element is a unit of the ring.
    fn try_inverse(&self) -> Option<Self>;

    /// True for nonnegative integers (used by positivity checks).
    fn is_natural(&self) -> bool;

    /// Exact quotient by an integer, if it exists in the ring.
    fn div_exact_int(&self, d: i64) -> Option<Self>;

    /// Exact quotient by another ring element, if it exists in the ring.
    fn div_exact(&self, d: &Self) -> Option<Self>;

    /// Decimal string form used by the JSON writers.
    fn to_decimal_string(&self) -> String {
        self.to_string()
    }
}

impl Ring for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }

    fn try_inverse(&self) -> Option<Self> {
        if self.is_one() || (-self).is_one() {
            Some(self.clone())
        } else {
            None
        }
    }

    fn is_natural(&self) -> bool {
        !self.is_negative()
    }

    fn div_exact_int(&self, d: i64) -> Option<Self> {
        self.div_exact(&BigInt::from(d))
    }

    fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let q = self / d;
        if &q * d == *self {
            Some(q)
        } else {
            None
        }
    }
}

impl Ring for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn try_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn is_natural(&self) -> bool {
        self.is_integer() && !self.is_negative()
    }

    fn div_exact_int(&self, d: i64) -> Option<Self> {
        if d == 0 {
            None
        } else {
            Some(self / BigRational::from_i64(d))
        }
    }

    fn div_exact(&self, d: &Self) -> Option<Self> {
        d.try_inverse().map(|inv| self * inv)
    }
}
