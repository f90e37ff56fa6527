//! q-Pochhammer symbols and the basic hypergeometric series ₁φ₁.
//!
//! Partial sums and products are exact rationals; only the omitted tail is
//! replaced by an analytic bound, so every sign and enclosure is certified.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::bounded::ErrorBounded;
use crate::error::{Error, Result};
use crate::exactnum::rat;
use crate::scalar::Scalar;
use crate::Rational;

/// Default cap on the number of series terms or product factors.
pub const DEFAULT_TERM_BUDGET: usize = 256;

/// `(a;q)_n = (1-a)(1-aq)…(1-aq^{n-1})`, with `(a;q)_0 = 1`.
pub fn qpochhammer_finite<T: Scalar>(a: &T, q: &T, n: usize) -> T {
    let mut acc = T::one();
    let mut aq = a.clone();
    for _ in 0..n {
        acc = acc * (T::one() - aq.clone());
        aq = aq * q.clone();
    }
    acc
}

fn check_q(q: &Rational) -> Result<()> {
    if q.is_positive() && *q < Rational::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "q = {q} must lie strictly inside (0, 1)"
        )))
    }
}

/// Enclosure of `(a;q)_∞` with radius at most `eps`.
///
/// After `J` exact factors the remaining product satisfies
/// `|∏_{j≥J}(1-aq^j) - 1| ≤ exp(S) - 1 ≤ S/(1-S)` with
/// `S = |a|q^J / ((1-q)(1-|a|q^J))`.
pub fn qpochhammer_infinite(
    a: &Rational,
    q: &Rational,
    eps: &Rational,
    budget: usize,
) -> Result<ErrorBounded<Rational>> {
    check_q(q)?;
    if a.is_zero() {
        return Ok(ErrorBounded::exact(Rational::one()));
    }
    let one = Rational::one();
    let half = rat(1, 2);
    let abs_a = a.abs();
    let mut partial = Rational::one();
    let mut aq = a.clone(); // a q^J
    let mut abs_aq = abs_a; // |a| q^J
    for _ in 0..=budget {
        if partial.is_zero() {
            // a = q^{-j} for some j: a factor vanished exactly.
            return Ok(ErrorBounded::exact(partial));
        }
        if abs_aq < half {
            let s = &abs_aq / ((&one - q) * (&one - &abs_aq));
            if s < one {
                let rel = &s / (&one - &s);
                let radius = partial.abs() * rel;
                if radius <= *eps {
                    return Ok(ErrorBounded::new(partial, radius));
                }
            }
        }
        partial *= &one - &aq;
        aq *= q;
        abs_aq *= q;
    }
    Err(Error::BudgetExhausted { budget })
}

/// Parameters of `₁φ₁(a; b; q, z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Phi11Params {
    pub a: Rational,
    pub b: Rational,
    pub q: Rational,
    pub z: Rational,
}

impl Phi11Params {
    /// Validates `0 < q < 1` and `b ≠ q^{-n}` for every `n ≥ 0`.
    pub fn new(a: Rational, b: Rational, q: Rational, z: Rational) -> Result<Self> {
        check_q(&q)?;
        let mut inv_pow = Rational::one(); // q^{-n}
        while inv_pow <= b.abs() {
            if b == inv_pow {
                return Err(Error::InvalidParameter(format!(
                    "b = {b} is a nonpositive power of q; the series is undefined"
                )));
            }
            inv_pow /= &q;
        }
        Ok(Self { a, b, q, z })
    }
}

/// Certified enclosure of `₁φ₁(a; b; q, z) = Σ (a;q)_n / ((q;q)_n (b;q)_n) (-1)^n q^{n(n-1)/2} z^n`.
///
/// Terms are generated from their exact ratio. Once every later ratio is at
/// most 1/2 in magnitude the tail is bounded by twice the first omitted term;
/// enclosures for decreasing `eps` are therefore nested.
pub fn phi11_certified(
    params: &Phi11Params,
    eps: &Rational,
    budget: usize,
) -> Result<ErrorBounded<Rational>> {
    let Phi11Params { a, b, q, z } = params;
    let one = Rational::one();
    let half = rat(1, 2);
    let abs_a = a.abs();
    let abs_b = b.abs();
    let abs_z = z.abs();
    let mut sum = Rational::zero();
    let mut term = Rational::one();
    let mut qn = Rational::one(); // q^n
    for _ in 0..budget {
        let tail = term.abs() * Rational::from_integer(2.into());
        // sup_{m≥n} |t_{m+1}/t_m| ≤ (1+|a|q^n) q^n |z| / ((1-q^{n+1})(1-|b|q^n))
        let bq = &abs_b * &qn;
        if bq < one {
            let qn1 = &qn * q;
            let ratio = (&one + &abs_a * &qn) * &qn * &abs_z / ((&one - qn1) * (&one - bq));
            if ratio <= half && tail <= *eps {
                return Ok(ErrorBounded::new(sum, tail));
            }
        }
        sum += &term;
        let qn1 = &qn * q;
        term = term * (&one - a * &qn) * (-(&qn * z)) / ((&one - &qn1) * (&one - b * &qn));
        qn = qn1;
    }
    Err(Error::BudgetExhausted { budget })
}

/// A sign of the characteristic series proven by an exact partial sum.
#[derive(Clone, Debug, PartialEq)]
pub struct SignCertificate {
    /// `+1` or `-1`.
    pub sign: i8,
    pub partial_sum: Rational,
    /// Rigorous bound on the omitted tail; strictly below `|partial_sum|`.
    pub tail_bound: Rational,
    pub terms: usize,
}

/// Certified sign of `₁φ₁(0; q; q, λ) = 1 + Σ_{k≥1} (-1)^k λ^k q^{k(k-1)/2} / (q;q)_k²`.
///
/// Terms are added until the exact partial sum dominates the tail bound.
/// Fails with [`Error::SignUndecided`] only when the budget runs out, which
/// for rational λ signals a point extremely close to a root.
pub fn char_function_sign(
    lambda: &Rational,
    q: &Rational,
    budget: usize,
) -> Result<SignCertificate> {
    check_q(q)?;
    // With λ = a/b and q = u/v every term shares the denominator
    // D_n = bⁿ ∏_{j≤n} (v^j - u^j)², so the partial sums stay integers.
    let (a, b) = (lambda.numer(), lambda.denom());
    let (u, v) = (q.numer(), q.denom());
    let abs_a = a.abs();
    let v2 = v * v;
    let mut num = BigInt::zero(); // Σ_{k<n} t_k · D_{n-1}
    let mut tnum = BigInt::one(); // t_n · D_n
    let mut den_prev = BigInt::one();
    let mut un = BigInt::one();
    let mut vn = BigInt::one();
    for n in 0..budget {
        let grow = if n == 0 {
            BigInt::one()
        } else {
            let g = &vn - &un;
            b * &g * &g
        };
        let un1 = &un * u;
        let vn1 = &vn * v;
        let g1 = &vn1 - &un1;
        // |t_{n+1}/t_n| ≤ 1/2 bounds the tail by 2|t_n|
        if (&un * &abs_a * &vn * &v2) * 2 <= b * &g1 * &g1 && num.abs() * &grow > tnum.abs() * 2 {
            let den = &den_prev * &grow;
            let sign = if num.is_positive() { 1 } else { -1 };
            return Ok(SignCertificate {
                sign,
                partial_sum: Rational::new(num, den_prev),
                tail_bound: Rational::new(tnum.abs() * 2, den),
                terms: n,
            });
        }
        num = num * &grow + &tnum;
        den_prev *= &grow;
        tnum = -(tnum * a * &un * &vn * &v2);
        un = un1;
        vn = vn1;
    }
    Err(Error::SignUndecided { terms: budget })
}

/// Enclosure of the characteristic series `₁φ₁(0; q; q, λ)`.
pub fn char_function_value(
    lambda: &Rational,
    q: &Rational,
    eps: &Rational,
    budget: usize,
) -> Result<ErrorBounded<Rational>> {
    let params = Phi11Params::new(Rational::zero(), q.clone(), q.clone(), lambda.clone())?;
    phi11_certified(&params, eps, budget)
}

/// Runs `f` with shrinking sub-tolerances until its result has radius `≤ eps`.
fn tighten<F>(eps: &Rational, mut f: F) -> Result<ErrorBounded<Rational>>
where
    F: FnMut(&Rational) -> Result<ErrorBounded<Rational>>,
{
    let mut sub = eps / Rational::from_integer(64.into());
    for _ in 0..8 {
        let out = f(&sub)?;
        if out.radius <= *eps {
            return Ok(out);
        }
        sub /= Rational::from_integer(1024.into());
    }
    f(&sub)
}

/// `LHS - RHS` of `₁φ₁(0;b;q,z) = (z;q)_∞/(b;q)_∞ · ₁φ₁(0;z;q,b)`.
pub fn verify_transformation(
    b: &Rational,
    q: &Rational,
    z: &Rational,
    eps: &Rational,
    budget: usize,
) -> Result<ErrorBounded<Rational>> {
    if b == z {
        return Ok(ErrorBounded::exact(Rational::zero()));
    }
    let zero = Rational::zero();
    let lhs_params = Phi11Params::new(zero.clone(), b.clone(), q.clone(), z.clone())?;
    let rhs_params = Phi11Params::new(zero, z.clone(), q.clone(), b.clone())?;
    tighten(eps, |sub| {
        let lhs = phi11_certified(&lhs_params, sub, budget)?;
        let inner = phi11_certified(&rhs_params, sub, budget)?;
        let num = qpochhammer_infinite(z, q, sub, budget)?;
        let den = qpochhammer_infinite(b, q, sub, budget)?;
        let ratio = num.div(&den).ok_or_else(|| {
            Error::InvalidParameter("(b;q)_∞ enclosure contains zero".to_string())
        })?;
        Ok(&lhs - &(&ratio * &inner))
    })
}

/// `LHS - RHS` of the Cauchy sum `₁φ₁(a; b; q, b/a) = (b/a;q)_∞ / (b;q)_∞`.
pub fn verify_cauchy_sum(
    a: &Rational,
    b: &Rational,
    q: &Rational,
    eps: &Rational,
    budget: usize,
) -> Result<ErrorBounded<Rational>> {
    if a.is_zero() {
        return Err(Error::InvalidParameter(
            "Cauchy sum needs a ≠ 0".to_string(),
        ));
    }
    let z = b / a;
    let params = Phi11Params::new(a.clone(), b.clone(), q.clone(), z.clone())?;
    tighten(eps, |sub| {
        let lhs = phi11_certified(&params, sub, budget)?;
        let num = qpochhammer_infinite(&z, q, sub, budget)?;
        let den = qpochhammer_infinite(b, q, sub, budget)?;
        let rhs = num.div(&den).ok_or_else(|| {
            Error::InvalidParameter("(b;q)_∞ enclosure contains zero".to_string())
        })?;
        Ok(&lhs - &rhs)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rational_to_f64, ten_pow_neg};

    /// Term-by-term rational evaluation, kept as an oracle for the integer form.
    fn sign_reference(lambda: &Rational, q: &Rational, budget: usize) -> Result<SignCertificate> {
        check_q(q)?;
        let one = Rational::one();
        let half = rat(1, 2);
        let abs_lambda = lambda.abs();
        let mut sum = Rational::zero();
        let mut term = Rational::one();
        let mut qn = Rational::one();
        for n in 0..budget {
            let qn1 = &qn * q;
            let denom = (&one - &qn1) * (&one - &qn1);
            let ratio = &qn * &abs_lambda / &denom;
            if ratio <= half {
                let tail = term.abs() * Rational::from_integer(2.into());
                if sum.abs() > tail {
                    let sign = if sum.is_positive() { 1 } else { -1 };
                    return Ok(SignCertificate {
                        sign,
                        partial_sum: sum,
                        tail_bound: tail,
                        terms: n,
                    });
                }
            }
            sum += &term;
            term = -(term * &qn * lambda) / denom;
            qn = qn1;
        }
        Err(Error::SignUndecided { terms: budget })
    }

    /// Plain partial sum of ₁φ₁ in f64, from the definition term by term.
    fn phi11_naive(a: f64, b: f64, q: f64, z: f64, terms: usize) -> f64 {
        (0..terms)
            .map(|n| {
                let num = qpochhammer_finite(&a, &q, n);
                let den = qpochhammer_finite(&q, &q, n) * qpochhammer_finite(&b, &q, n);
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                num / den * sign * q.powi((n * (n.saturating_sub(1)) / 2) as i32) * z.powi(n as i32)
            })
            .sum()
    }

    #[test]
    fn finite_pochhammer_examples() {
        assert_eq!(
            qpochhammer_finite(&rat(3, 7), &rat(1, 5), 0),
            Rational::one()
        );
        assert_eq!(qpochhammer_finite(&rat(1, 4), &rat(1, 4), 2), rat(45, 64));
        assert_eq!(qpochhammer_finite(&rat(2, 9), &rat(1, 3), 1), rat(7, 9));
    }

    #[test]
    fn infinite_pochhammer_zero_argument_is_exact() {
        let v = qpochhammer_infinite(&Rational::zero(), &rat(1, 4), &ten_pow_neg(10), 256).unwrap();
        assert_eq!(v, ErrorBounded::exact(Rational::one()));
    }

    #[test]
    fn infinite_pochhammer_matches_long_float_product() {
        let eps = ten_pow_neg(20);
        let v = qpochhammer_infinite(&rat(1, 4), &rat(1, 4), &eps, 256).unwrap();
        assert!(v.radius <= eps);
        let reference: f64 = (0..200).map(|j| 1.0 - 0.25f64 * 0.25f64.powi(j)).product();
        assert!((rational_to_f64(&v.center) - reference).abs() < 1e-15);
        // exact factor of zero: a = q^{-2}
        let z = qpochhammer_infinite(&rat(16, 1), &rat(1, 4), &eps, 256).unwrap();
        assert!(z.center.is_zero() && z.radius.is_zero());
    }

    #[test]
    fn phi11_at_zero_argument_is_exact_one() {
        let p = Phi11Params::new(rat(1, 3), rat(1, 5), rat(1, 4), Rational::zero()).unwrap();
        let v = phi11_certified(&p, &ten_pow_neg(30), 256).unwrap();
        assert_eq!(v, ErrorBounded::exact(Rational::one()));
    }

    #[test]
    fn phi11_matches_naive_float_sum() {
        let p = Phi11Params::new(Rational::zero(), rat(1, 4), rat(1, 4), Rational::one()).unwrap();
        let v = phi11_certified(&p, &ten_pow_neg(25), 256).unwrap();
        let naive = phi11_naive(0.0, 0.25, 0.25, 1.0, 60);
        assert!((rational_to_f64(&v.center) - naive).abs() < 1e-14);
        assert!((naive - (-0.304203)).abs() < 1e-6);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(Phi11Params::new(rat(0, 1), rat(1, 1), rat(1, 2), rat(1, 1)).is_err());
        assert!(Phi11Params::new(rat(0, 1), rat(4, 1), rat(1, 2), rat(1, 1)).is_err());
        assert!(Phi11Params::new(rat(0, 1), rat(3, 1), rat(1, 2), rat(1, 1)).is_ok());
        assert!(Phi11Params::new(rat(0, 1), rat(1, 3), rat(1, 1), rat(1, 1)).is_err());
        assert!(qpochhammer_infinite(&rat(1, 2), &rat(3, 2), &ten_pow_neg(3), 10).is_err());
    }

    #[test]
    fn char_sign_examples() {
        let q = rat(1, 4);
        assert_eq!(char_function_sign(&rat(1, 1), &q, 256).unwrap().sign, -1);
        assert_eq!(char_function_sign(&rat(1, 2), &q, 256).unwrap().sign, 1);
        let tiny = char_function_sign(&rat(1, 1_000_000), &q, 256).unwrap();
        assert_eq!(tiny.sign, 1);
        let zero = char_function_sign(&Rational::zero(), &q, 256).unwrap();
        assert_eq!(zero.sign, 1);
        assert_eq!(zero.partial_sum, Rational::one());
    }

    #[test]
    fn char_sign_budget_exhaustion_is_reported() {
        assert_eq!(
            char_function_sign(&rat(1, 1), &rat(1, 4), 1),
            Err(Error::SignUndecided { terms: 1 })
        );
    }

    #[test]
    fn transformation_is_trivial_on_the_diagonal() {
        let d = verify_transformation(&rat(1, 3), &rat(1, 4), &rat(1, 3), &ten_pow_neg(20), 256)
            .unwrap();
        assert!(d.center.is_zero() && d.radius.is_zero());
    }

    #[test]
    fn transformation_examples_contain_zero() {
        let eps = ten_pow_neg(20);
        let d = verify_transformation(&rat(1, 4), &rat(1, 4), &rat(1, 2), &eps, 256).unwrap();
        assert!(d.contains_zero() && d.radius <= eps);
        let d = verify_transformation(&rat(1, 9), &rat(1, 9), &rat(1, 3), &eps, 256).unwrap();
        assert!(d.contains_zero() && d.radius <= eps);
    }

    #[test]
    fn integer_sign_matches_rational_reference() {
        let qs = [rat(1, 4), rat(1, 9), rat(2, 7)];
        let lams = [
            rat(1, 3),
            rat(7, 10),
            rat(-5, 2),
            rat(4, 1),
            rat(1601, 100),
            rat(65535, 1024),
            rat(1, 1),
        ];
        for q in &qs {
            for l in &lams {
                let a = char_function_sign(l, q, 256).unwrap();
                let b = sign_reference(l, q, 256).unwrap();
                assert_eq!(a, b, "λ={l} q={q}");
            }
        }
    }
}
