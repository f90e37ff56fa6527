//! Scalar abstraction shared by the exact (rational) and floating paths.
//!
//! Every algorithm that only needs field operations and an order is written
//! against [`Scalar`]. Instantiated with [`crate::Rational`] the results are
//! exact; instantiated with `f64`/`f32` they are ordinary floating estimates.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// An ordered field element: either exact rationals or IEEE floats.
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync
{
    /// `true` when arithmetic never rounds.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("i64 fits every scalar")
            / Self::from_i64(den).expect("i64 fits every scalar")
    }

    fn from_u64_exact(n: u64) -> Self {
        Self::from_u64(n).expect("u64 fits every scalar")
    }

    /// Lossy conversion used only for reporting.
    fn approx_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }

    /// Integer power with negative exponents allowed.
    fn powi(&self, exp: i64) -> Self {
        let pos = num_traits::pow(self.clone(), exp.unsigned_abs() as usize);
        if exp < 0 {
            pos.recip()
        } else {
            pos
        }
    }

    /// Largest of two values under the partial order.
    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_u64_exact(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn approx_f64(&self) -> f64 {
        crate::exactnum::rational_to_f64(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
}

impl Scalar for f32 {
    const EXACT: bool = false;
}

/// Complex values whose parts are a [`Scalar`]; used on the Fourier side.
pub fn complex_from_real<T: Scalar>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// `p^n` in the scalar type, computed by repeated squaring.
pub fn int_pow<T: Scalar>(p: u64, n: u32) -> T {
    num_traits::pow(T::from_u64_exact(p), n as usize)
}

/// Sign of a scalar as -1, 0 or +1.
pub fn sign_of<T: Scalar>(x: &T) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}
