//! Lossless decimal text for rationals.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// Direction used when a rational must be cut to finitely many digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Floor,
    Ceil,
    Nearest,
}

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u8), e as usize)
}

/// Parse `"3/4"`, `"-0.125"`, `"1e-20"` or `"2.5E+3"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidParameter(format!("cannot parse '{text}' as a rational"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(digits.parse::<BigInt>().map_err(|_| bad())?);
    let shift = exponent - frac_part.len() as i32;
    let scale = Rational::from_integer(pow10(shift.unsigned_abs()));
    if shift >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    Ok(if negative { -value } else { value })
}

/// Position of the leading decimal digit: the `e` with `10^e <= |x| < 10^(e+1)`.
fn decimal_exponent(x: &Rational) -> i32 {
    let a = x.abs();
    let estimate =
        (a.numer().bits() as i64 - a.denom().bits() as i64) as f64 * std::f64::consts::LOG10_2;
    let mut e = estimate.floor() as i32;
    let ten = |k: i32| {
        if k >= 0 {
            Rational::from_integer(pow10(k as u32))
        } else {
            Rational::new(BigInt::one(), pow10((-k) as u32))
        }
    };
    while ten(e) > a {
        e -= 1;
    }
    while ten(e + 1) <= a {
        e += 1;
    }
    e
}

/// Format `x` as a plain decimal string with `significant` digits.
///
/// `Floor`/`Ceil` round toward -∞/+∞, so a printed bracket `[floor(lo), ceil(hi)]`
/// still encloses the exact one.
pub fn format_decimal(x: &Rational, significant: u32, rounding: Rounding) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let significant = significant.max(1) as i32;
    let e = decimal_exponent(x);
    // keep `frac` digits after the point
    let frac = (significant - 1 - e).max(0);
    let scaled = x * Rational::from_integer(pow10(frac as u32));
    let int = match rounding {
        Rounding::Floor => scaled.floor().to_integer(),
        Rounding::Ceil => scaled.ceil().to_integer(),
        Rounding::Nearest => scaled.round().to_integer(),
    };
    let negative = int.is_negative();
    let digits = int.abs().to_string();
    let body = if frac == 0 {
        digits
    } else {
        let frac = frac as usize;
        let padded = if digits.len() <= frac {
            format!("{}{}", "0".repeat(frac + 1 - digits.len()), digits)
        } else {
            digits
        };
        let (i, f) = padded.split_at(padded.len() - frac);
        format!("{i}.{f}")
    };
    if negative && body.chars().any(|c| c != '0' && c != '.') {
        format!("-{body}")
    } else {
        body
    }
}

/// Exact lowest-terms text `"num/den"` (or just `"num"` for integers).
pub fn format_fraction(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
