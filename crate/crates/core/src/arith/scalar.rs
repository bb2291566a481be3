use std::fmt::Debug;
use std::ops::{Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{to_f64, Rational};

/// Coefficient ring shared by the exact and floating-point code paths.
///
/// Implemented for `f64`, [`Rational`] and [`super::ExtScalar`], so the Riccati
/// calculus and the cascade solver can run unchanged over all three.
pub trait Scalar:
    Clone + Debug + Zero + One + Neg<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()))
    }

    /// `None` when `rhs` is zero (or not invertible).
    fn checked_div(&self, rhs: &Self) -> Option<Self>;
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        (*rhs != 0.0).then(|| self / rhs)
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        (!rhs.is_zero()).then(|| self / rhs)
    }
}
