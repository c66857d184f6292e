//! Scalar abstraction shared by the folding operators.
//!
//! The modular operators only need ordered ring arithmetic plus a floor
//! division, so they run unchanged on floats, machine integers and exact
//! rationals. Halves are never formed: `r >= b/2` is evaluated as
//! `r + r >= b`, which keeps integer instantiations exact.

use std::fmt::Debug;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Float, Num, Signed, ToPrimitive};

pub trait Scalar: Copy + PartialOrd + Num + Signed + ToPrimitive + Debug {
    /// `floor(self / rhs)` for `rhs > 0`.
    fn floor_div(self, rhs: Self) -> Self;

    fn from_i64(value: i64) -> Self;
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            #[inline]
            fn floor_div(self, rhs: Self) -> Self {
                Float::floor(self / rhs)
            }

            #[inline]
            fn from_i64(value: i64) -> Self {
                value as $t
            }
        }
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

impl Scalar for i64 {
    #[inline]
    fn floor_div(self, rhs: Self) -> Self {
        Integer::div_floor(&self, &rhs)
    }

    #[inline]
    fn from_i64(value: i64) -> Self {
        value
    }
}

impl Scalar for i128 {
    #[inline]
    fn floor_div(self, rhs: Self) -> Self {
        Integer::div_floor(&self, &rhs)
    }

    #[inline]
    fn from_i64(value: i64) -> Self {
        value as i128
    }
}

impl Scalar for Ratio<i64> {
    #[inline]
    fn floor_div(self, rhs: Self) -> Self {
        (self / rhs).floor()
    }

    #[inline]
    fn from_i64(value: i64) -> Self {
        Ratio::from_integer(value)
    }
}
