use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{char_function_sign, rat, SignCertificate, DEFAULT_TERM_BUDGET};
use crate::tree::Prime;
use crate::Rational;

/// Default upper end of the fallback sign scan.
pub const DEFAULT_SCAN_CEILING: u64 = 1 << 62;

/// Certified signs of the characteristic series at both bracket ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignEvidence {
    pub sign_lo: i8,
    pub sign_hi: i8,
    pub terms_lo: usize,
    pub terms_hi: usize,
}

/// A root `λ_n` enclosed in `(lo, hi)` with a certified sign change.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueRecord {
    pub p: u64,
    pub index: u32,
    pub lo: Rational,
    pub hi: Rational,
    /// Largest `d` with `hi - lo ≤ 10^{-d} hi`.
    pub digits: u32,
    pub sign_evidence: SignEvidence,
}

impl EigenvalueRecord {
    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

/// Refined records for `λ_1..λ_count`, computed in parallel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueTable {
    pub p: u64,
    pub records: Vec<EigenvalueRecord>,
}

fn sign_at(p: Prime, lambda: &Rational) -> Result<SignCertificate> {
    char_function_sign(lambda, &p.q(), DEFAULT_TERM_BUDGET)
}

/// `(q^{1-n}(1 - qⁿ/(1-qⁿ))², q^{1-n})`, the a-priori interval for `λ_n`.
pub fn transported_bracket(p: Prime, n: u32) -> (Rational, Rational) {
    let q = p.q();
    let hi = num_traits::pow(
        Rational::from_integer(BigInt::from(p.get())),
        2 * (n as usize - 1),
    );
    let qn = num_traits::pow(q, n as usize);
    let shrink = Rational::one() - &qn / (Rational::one() - &qn);
    (&hi * &shrink * &shrink, hi)
}

/// A certified bracket for `λ_n`, `n ≥ 1`.
///
/// The transported interval is tried first. If its ends do not show the
/// expected sign change, a geometric sign scan from `0` locates the `n`-th
/// sign change instead.
pub fn bracket_eigenvalue(p: Prime, n: u32) -> Result<(Rational, Rational)> {
    bracket_with_ceiling(p, n, &Rational::from_integer(DEFAULT_SCAN_CEILING.into()))
}

pub fn bracket_with_ceiling(p: Prime, n: u32, ceiling: &Rational) -> Result<(Rational, Rational)> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "eigenvalue indices start at 1".into(),
        ));
    }
    let (lo, hi) = transported_bracket(p, n);
    let expect_lo: i8 = if n % 2 == 1 { 1 } else { -1 };
    if let (Ok(a), Ok(b)) = (sign_at(p, &lo), sign_at(p, &hi)) {
        if a.sign == expect_lo && b.sign == -expect_lo {
            return Ok((lo, hi));
        }
    }
    scan_bracket(p, n, ceiling)
}

/// `n`-th sign change on the grid `0, 2^-8, 2^-7, …` up to `ceiling`.
pub fn scan_bracket(p: Prime, n: u32, ceiling: &Rational) -> Result<(Rational, Rational)> {
    let mut prev = Rational::zero();
    let mut prev_sign = 1i8; // the series equals 1 at λ = 0
    let mut x = rat(1, 256);
    let mut changes = 0;
    while &x <= ceiling {
        let s = sign_at(p, &x)?.sign;
        if s != prev_sign {
            changes += 1;
            if changes == n {
                return Ok((prev, x));
            }
        }
        prev = x.clone();
        prev_sign = s;
        x *= Rational::from_integer(2.into());
    }
    Err(Error::ScanExhausted { index: n as usize })
}

/// Largest `d ≤ 1000` with `width ≤ 10^{-d}·scale`.
pub fn achieved_digits(width: &Rational, scale: &Rational) -> u32 {
    if width.is_zero() {
        return 1000;
    }
    let ten = Rational::from_integer(10.into());
    let mut bound = scale.abs();
    let mut d = 0;
    while d < 1000 {
        bound /= &ten;
        if *width > bound {
            break;
        }
        d += 1;
    }
    d
}

/// Certified bisection of `λ_n` to relative width `10^{-digits}`.
pub fn refine_eigenvalue(p: Prime, n: u32, digits: u32) -> Result<EigenvalueRecord> {
    let (mut lo, mut hi) = bracket_eigenvalue(p, n)?;
    let mut cert_lo = sign_at(p, &lo)?;
    let mut cert_hi = sign_at(p, &hi)?;
    if cert_lo.sign == cert_hi.sign {
        return Err(Error::InvalidParameter(format!(
            "no sign change around λ_{n}"
        )));
    }
    let tol = num_traits::pow(rat(1, 10), digits as usize);
    let half = rat(1, 2);
    while &hi - &lo > &tol * &hi {
        let mid = (&lo + &hi) * &half;
        let cert = sign_at(p, &mid)?;
        if cert.sign == cert_lo.sign {
            lo = mid;
            cert_lo = cert;
        } else {
            hi = mid;
            cert_hi = cert;
        }
    }
    let digits = achieved_digits(&(&hi - &lo), &hi);
    Ok(EigenvalueRecord {
        p: p.get(),
        index: n,
        lo,
        hi,
        digits,
        sign_evidence: SignEvidence {
            sign_lo: cert_lo.sign,
            sign_hi: cert_hi.sign,
            terms_lo: cert_lo.terms,
            terms_hi: cert_hi.terms,
        },
    })
}

/// `λ_1..λ_count` refined independently on the rayon pool.
pub fn eigenvalue_table(p: Prime, count: u32, digits: u32) -> Result<EigenvalueTable> {
    let records = (1..=count)
        .into_par_iter()
        .map(|n| refine_eigenvalue(p, n, digits))
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenvalueTable {
        p: p.get(),
        records,
    })
}
