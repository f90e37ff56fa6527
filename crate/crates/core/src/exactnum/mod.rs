//! Exact rational arithmetic, error-bounded values and certified q-series.

mod bounded;
mod decimal;
mod qseries;

pub use bounded::ErrorBounded;
pub use decimal::{format_decimal, format_fraction, parse_rational, Rounding};
pub use qseries::{
    char_function_sign, char_function_value, phi11_certified, qpochhammer_finite,
    qpochhammer_infinite, verify_cauchy_sum, verify_transformation, Phi11Params, SignCertificate,
    DEFAULT_TERM_BUDGET,
};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::Rational;

/// `num/den` as an exact rational.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Nearest `f64` to a rational (correct for arbitrarily large parts).
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Exact rational value of a finite `f64`.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Round `x` to the nearest multiple of `2^-bits`.
pub fn round_dyadic(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::from(1u8) << bits as usize;
    let scaled = x * Rational::from_integer(scale.clone());
    Rational::new(scaled.round().to_integer(), scale)
}

/// `10^-digits` as a rational.
pub fn ten_pow_neg(digits: u32) -> Rational {
    Rational::new(
        BigInt::from(1u8),
        num_traits::pow(BigInt::from(10u8), digits as usize),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_rounding_stays_within_half_ulp() {
        let x = rat(1, 3);
        let r = round_dyadic(&x, 20);
        let err = (&r - &x).abs();
        assert!(err <= Rational::new(BigInt::from(1), BigInt::from(1u64 << 21)));
        assert_eq!(r.denom() % BigInt::from(2), BigInt::from(0));
    }

    #[test]
    fn conversions_round_trip_small_values() {
        assert_eq!(rational_to_f64(&rat(3, 4)), 0.75);
        assert_eq!(rational_from_f64(0.5).unwrap(), rat(1, 2));
        assert_eq!(ten_pow_neg(3), rat(1, 1000));
    }
}
