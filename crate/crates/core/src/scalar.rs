use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{FromPrimitive, One, Zero};

use crate::Rational;

/// Field element usable by the generic matrix routines.
///
/// Implemented for `f32`, `f64` and [`Rational`]. Only the rational instance is
/// exact; the float instances exist for approximate cross-checks.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + FromPrimitive
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
    /// Whether arithmetic in this type is exact.
    const EXACT: bool;

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every i64 is representable")
    }

    /// `num / den` as a scalar.
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;
}

impl Scalar for f64 {
    const EXACT: bool = false;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        Rational::from_integer(v.into())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(num.into(), den.into())
    }
}
