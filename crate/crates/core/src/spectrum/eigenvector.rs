//! Eigenvectors of `D₀*D₀` as finite exponential sums `f_n = Σ_k c(2k) p^{-2nk}`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{qpochhammer_infinite, rat, ErrorBounded, DEFAULT_TERM_BUDGET};
use crate::operators::{apply_d0star_d0, HalfLineSeq};
use crate::scalar::int_pow;
use crate::tree::Prime;
use crate::Rational;

/// Coefficients `c(2), …, c(2K)` for a given `λ`, normalized by `c(2) = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenvectorExpansion {
    pub p: u64,
    pub lambda: Rational,
    /// `coefficients[k-1] = c(2k)`.
    pub coefficients: Vec<Rational>,
    /// Bound on `Σ_n |Σ_{k>K} c(2k) p^{-2nk}|`.
    pub tail_bound: Rational,
}

/// Samples `f_0..f_{N-1}` of an expansion with the ℓ¹ mass they miss.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthesizedVector {
    pub values: HalfLineSeq<Rational>,
    pub c2: Rational,
    /// Bound on `Σ_n |f_n - values_n|` against the untruncated expansion,
    /// counting both the omitted coefficients and the samples past `N`.
    pub tail_bound: Rational,
}

/// Residual of the eigen-equation for a synthesized vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenResidual {
    /// `‖(A - λ)f‖₂²`, rows past the samples included analytically.
    pub residual_sq: Rational,
    /// `Σ_{n<N} f_n²`, a lower bound for `‖f‖₂²`.
    pub norm_sq: Rational,
    /// `f_0 - f_1 - λ f_0`.
    pub initial_condition: Rational,
    pub relative: f64,
}

fn q_of(p: Prime) -> Rational {
    p.q()
}

/// `c(2k)` from its closed product formula, `c(2) = 1`.
pub fn coefficient_closed_form(lambda: &Rational, p: Prime, k: u32) -> Rational {
    if k <= 1 {
        return Rational::one();
    }
    let pp = p.get();
    let one = Rational::one();
    let base = -lambda / (&one - q_of(p));
    let p2m1 = Rational::from_integer((pp * pp - 1).into());
    let mut num = num_traits::pow(base, k as usize - 1) * int_pow::<Rational>(pp, k * (k - 1));
    num *= num_traits::pow(p2m1, k as usize - 2);
    let mut den = int_pow::<Rational>(pp, 2 * k) - &one;
    for j in 2..k {
        let f = int_pow::<Rational>(pp, 2 * j) - &one;
        den *= &f * &f;
    }
    num / den
}

/// `|c(2k+2)/c(2k)| = |λ|/(1-q) · p^{2k}(p²-1)/((p^{2k}-1)(p^{2k+2}-1))`, decreasing in `k`.
fn coefficient_ratio(lambda: &Rational, p: Prime, k: u32) -> Rational {
    let pp = p.get();
    let one = Rational::one();
    let p2k: Rational = int_pow(pp, 2 * k);
    let p2k2: Rational = int_pow(pp, 2 * k + 2);
    let p2m1 = Rational::from_integer((pp * pp - 1).into());
    lambda.abs() / (&one - q_of(p)) * &p2k * p2m1 / ((&p2k - &one) * (p2k2 - &one))
}

/// `c(2), …, c(2K)` with a rigorous tail bound. `K ≥ 1`, `λ > 0`.
pub fn eigenvector_coefficients(
    lambda: &Rational,
    p: Prime,
    terms: u32,
) -> Result<EigenvectorExpansion> {
    if terms == 0 {
        return Err(Error::InvalidParameter(
            "need at least one coefficient".into(),
        ));
    }
    if !lambda.is_positive() {
        return Err(Error::InvalidParameter("λ must be positive".into()));
    }
    let coefficients: Vec<Rational> = (1..=terms)
        .map(|k| coefficient_closed_form(lambda, p, k))
        .collect();
    // Σ_{k>K} |c(2k)|: exact terms until the ratio drops to 1/2, then geometric.
    let half = rat(1, 2);
    let mut tail = Rational::zero();
    let mut k = terms;
    let mut c = coefficients[terms as usize - 1].abs();
    loop {
        let r = coefficient_ratio(lambda, p, k);
        c *= &r; // |c(2k+2)|
        k += 1;
        if r <= half {
            tail += &c / (Rational::one() - coefficient_ratio(lambda, p, k));
            break;
        }
        tail += &c;
        if k > terms + DEFAULT_TERM_BUDGET as u32 {
            return Err(Error::BudgetExhausted {
                budget: DEFAULT_TERM_BUDGET,
            });
        }
    }
    // Σ_n p^{-2nk} = 1/(1 - q^k) ≤ 1/(1 - q^{K+1}) for k > K
    let q = q_of(p);
    let tail_bound = tail / (Rational::one() - num_traits::pow(q, terms as usize + 1));
    Ok(EigenvectorExpansion {
        p: p.get(),
        lambda: lambda.clone(),
        coefficients,
        tail_bound,
    })
}

/// `f_n = Σ_{k≤K} c(2k) p^{-2nk}` for `n < samples`, exact.
pub fn synthesize_eigenvector(
    exp: &EigenvectorExpansion,
    samples: usize,
) -> Result<SynthesizedVector> {
    let p = Prime::new(exp.p)?;
    let q = q_of(p);
    let mut values = vec![Rational::zero(); samples];
    let mut missed = exp.tail_bound.clone();
    let mut qk = Rational::one();
    for c in &exp.coefficients {
        qk *= &q; // q^k
        let mut x = c.clone();
        for v in values.iter_mut() {
            *v += &x;
            x *= &qk;
        }
        // x = c q^{kN}: Σ_{n≥N} |c| q^{kn} = |c| q^{kN}/(1 - q^k)
        missed += x.abs() / (Rational::one() - &qk);
    }
    Ok(SynthesizedVector {
        values: HalfLineSeq::new(values),
        c2: exp.coefficients[0].clone(),
        tail_bound: missed,
    })
}

/// `(A - λ)f` on the sampled rows, plus the closed form `-λ c(2K) p^{-2Kn}`
/// for the rows past them.
pub fn eigen_residual(exp: &EigenvectorExpansion, samples: usize) -> Result<EigenResidual> {
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    let p = Prime::new(exp.p)?;
    // one extra sample so the last evaluated row sees the true f_N
    let f = synthesize_eigenvector(exp, samples + 1)?.values;
    let af = apply_d0star_d0(p, &f);
    let lambda = &exp.lambda;
    let mut residual_sq = Rational::zero();
    let mut norm_sq = Rational::zero();
    for n in 0..samples {
        let r = af.get(n) - lambda * f.get(n);
        residual_sq += &r * &r;
        norm_sq += f.get(n) * f.get(n);
    }
    let big_k = exp.coefficients.len();
    let qk: Rational = num_traits::pow(q_of(p), big_k);
    let ck = &exp.coefficients[big_k - 1];
    let edge = lambda * ck * num_traits::pow(qk.clone(), samples);
    residual_sq += &edge * &edge / (Rational::one() - &qk * &qk);
    let initial_condition = f.get(0) - f.get(1) - lambda * f.get(0);
    let relative = (crate::exactnum::rational_to_f64(&residual_sq)
        / crate::exactnum::rational_to_f64(&norm_sq))
    .sqrt();
    Ok(EigenResidual {
        residual_sq,
        norm_sq,
        initial_condition,
        relative,
    })
}

/// Upper bound on `|c(2) - λ/(1-q) Σ_k f_k|` for a synthesized vector,
/// counting the omitted ℓ¹ mass in full.
pub fn check_c2_identity(v: &SynthesizedVector, lambda: &Rational, p: Prime) -> Rational {
    let factor = lambda / (Rational::one() - q_of(p));
    let sum: Rational = v.values.values.iter().sum();
    (&v.c2 - &factor * sum).abs() + factor.abs() * &v.tail_bound
}

/// `|λ|ᴺ / (p^{N(N+1)} (q;q)_∞²)` with the lower end of a certified enclosure
/// of `(q;q)_∞`, so the value stays an upper bound.
pub fn remainder_bound(lambda: &Rational, p: Prime, n: u32) -> Result<Rational> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "remainder order must be at least 1".into(),
        ));
    }
    let q = q_of(p);
    let prod = qpochhammer_infinite(&q, &q, &rat(1, 1_000_000_000_000), DEFAULT_TERM_BUDGET)?;
    let low = prod.lo();
    let den = int_pow::<Rational>(p.get(), n * (n + 1)) * &low * &low;
    Ok(num_traits::pow(lambda.abs(), n as usize) / den)
}

/// `Σ_n |Σ_{k>N} c(2k) p^{-2nk}|` measured against a longer expansion, with
/// that expansion's own tail added so the value is an upper estimate.
pub fn empirical_remainder(
    lambda: &Rational,
    p: Prime,
    n: u32,
    reference_terms: u32,
) -> Result<Rational> {
    let full = eigenvector_coefficients(lambda, p, reference_terms)?;
    let q = q_of(p);
    let mut total = full.tail_bound.clone();
    let mut qk = num_traits::pow(q.clone(), n as usize);
    for c in &full.coefficients[n as usize..] {
        qk *= &q;
        total += c.abs() / (Rational::one() - &qk);
    }
    Ok(total)
}

/// `-Σ_k c(2k)(1 - q^k - λ)`, i.e. `-(f_0 - f_1 - λf_0)` of the full expansion
/// with `c(2) = 1`. Vanishes exactly at the eigenvalues; equals `(q-1)` times
/// the characteristic series.
pub fn neve_form(lambda: &Rational, p: Prime, eps: &Rational) -> Result<ErrorBounded<Rational>> {
    let q = q_of(p);
    let one = Rational::one();
    let half = rat(1, 2);
    let factor_bound = &one + lambda.abs();
    let mut sum = Rational::zero();
    let mut c = Rational::one();
    let mut qk = q.clone();
    for k in 1..=DEFAULT_TERM_BUDGET as u32 {
        sum -= &c * (&one - &qk - lambda);
        let r = coefficient_ratio(lambda, p, k);
        c = coefficient_closed_form(lambda, p, k + 1);
        qk *= &q;
        if r <= half {
            // Σ_{j>k} |c(2j)|(1 + |λ|) ≤ 2|c(2k+2)|(1 + |λ|)
            let radius = c.abs() * &factor_bound * Rational::from_integer(2.into());
            if &radius <= eps {
                return Ok(ErrorBounded::new(sum, radius));
            }
        }
    }
    Err(Error::BudgetExhausted {
        budget: DEFAULT_TERM_BUDGET,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{char_function_value, rational_to_f64, ten_pow_neg};
    use crate::spectrum::refine_eigenvalue;
    use crate::Scalar;

    fn prime(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    /// Independent route to the coefficients: `c(2k) g_k = λ c(2k-2)` with
    /// `g_k = (1 + p² - p^{2-2k} - p^{2k})/p²`.
    fn recursion_coefficients(lambda: &Rational, p: u64, terms: u32) -> Vec<Rational> {
        let pr = Rational::from_integer(p.into());
        let p2 = &pr * &pr;
        let mut out = vec![Rational::one()];
        for k in 2..=terms as i32 {
            let k = k as i64;
            let g = (Rational::one() + &p2 - pr.powi(2 - 2 * k) - pr.powi(2 * k)) / &p2;
            let prev = out.last().unwrap().clone();
            out.push(lambda * prev / g);
        }
        out
    }

    #[test]
    fn closed_form_matches_recursion() {
        for p in [2u64, 3, 5] {
            for lam in [rat(7, 10), rat(4, 1), rat(123, 7)] {
                let exp = eigenvector_coefficients(&lam, prime(p), 12).unwrap();
                assert_eq!(exp.coefficients, recursion_coefficients(&lam, p, 12));
            }
        }
    }

    #[test]
    fn second_coefficient_example() {
        let lam = rat(3, 5);
        let exp = eigenvector_coefficients(&lam, prime(2), 2).unwrap();
        assert_eq!(exp.coefficients[0], Rational::one());
        assert_eq!(exp.coefficients[1], rat(-16, 45) * &lam);
    }

    #[test]
    fn coefficients_decay_superexponentially() {
        let lam = rat(16, 1);
        let exp = eigenvector_coefficients(&lam, prime(2), 20).unwrap();
        for k in 3..20usize {
            // |c(2k)| ≤ λ^k / p^{(k-2)(k-1)} up to a k-independent constant
            let scaled = exp.coefficients[k - 1].abs()
                * int_pow::<Rational>(2, ((k - 2) * (k - 1)) as u32)
                / num_traits::pow(lam.clone(), k);
            assert!(scaled < Rational::one());
        }
    }

    #[test]
    fn one_term_vector() {
        let p = prime(2);
        let exp = eigenvector_coefficients(&rat(1, 2), p, 1).unwrap();
        let v = synthesize_eigenvector(&exp, 6).unwrap();
        for n in 0..6 {
            assert_eq!(v.values.get(n), rat(1, 4i64.pow(n as u32)));
        }
        let af = apply_d0star_d0(p, &v.values);
        assert_eq!(af.get(0) / v.values.get(0), rat(3, 4));
    }

    #[test]
    fn c2_identity_self_test() {
        // f_n = p^{-2n} with λ = (1-q)²: λ/(1-q) · 1/(1-q) = 1 = c(2)
        let p = prime(3);
        let q = p.q();
        let lam = (Rational::one() - &q) * (Rational::one() - &q);
        let vals: Vec<Rational> = (0..40).map(|n| num_traits::pow(q.clone(), n)).collect();
        let missed = num_traits::pow(q.clone(), 40) / (Rational::one() - &q);
        let v = SynthesizedVector {
            values: HalfLineSeq::new(vals),
            c2: Rational::one(),
            tail_bound: missed,
        };
        let d = check_c2_identity(&v, &lam, p);
        assert!(d < ten_pow_neg(30));
    }

    #[test]
    fn eigenvector_quality_for_the_first_roots() {
        for (p, n) in [(2u64, 1u32), (2, 2), (3, 3)] {
            let rec = refine_eigenvalue(prime(p), n, 22).unwrap();
            let lam = rec.midpoint();
            let exp = eigenvector_coefficients(&lam, prime(p), 20).unwrap();
            let res = eigen_residual(&exp, 60).unwrap();
            assert!(res.relative <= 1e-12, "p={p} n={n}: {}", res.relative);
            assert!(rational_to_f64(&res.initial_condition).abs() < 1e-12);
            let v = synthesize_eigenvector(&exp, 60).unwrap();
            assert!(check_c2_identity(&v, &lam, prime(p)) < ten_pow_neg(12));
            // p^{2n} f_n → c(2)
            let scaled = v.values.get(30) * int_pow::<Rational>(p, 60);
            assert!((scaled - Rational::one()).abs() < ten_pow_neg(12));
        }
    }

    #[test]
    fn residual_rows_follow_the_closed_form() {
        let p = prime(2);
        let lam = rat(7, 3);
        let exp = eigenvector_coefficients(&lam, p, 4).unwrap();
        let f = synthesize_eigenvector(&exp, 12).unwrap().values;
        let af = apply_d0star_d0(p, &f);
        let c4 = &exp.coefficients[3];
        for n in 1..11u32 {
            let expected = -(&lam * c4) * num_traits::pow(rat(1, 256), n as usize);
            assert_eq!(af.get(n as usize) - &lam * f.get(n as usize), expected);
        }
    }

    #[test]
    fn remainder_bound_behaviour() {
        let p = prime(2);
        let b3 = remainder_bound(&rat(1, 1), p, 3).unwrap();
        let approx = 5.149_734_137_540_556e-4; // 1/(4096 (1/4;1/4)_∞²)
        assert!((rational_to_f64(&b3) - approx).abs() < 1e-9 * approx);
        let b4 = remainder_bound(&rat(1, 1), p, 4).unwrap();
        assert_eq!(b4 / b3, rat(1, 256));
        let lam = refine_eigenvalue(p, 1, 20).unwrap().midpoint();
        for n in 1..=10 {
            let emp = empirical_remainder(&lam, p, n, 30).unwrap();
            assert!(emp <= remainder_bound(&lam, p, n).unwrap(), "N={n}");
        }
    }

    #[test]
    fn neve_equals_scaled_series() {
        let p = prime(2);
        let q = p.q();
        let eps = ten_pow_neg(30);
        for lam in [rat(1, 3), rat(1, 1), rat(5, 2), rat(19, 4), rat(40, 1)] {
            let neve = neve_form(&lam, p, &eps).unwrap();
            let phi = char_function_value(&lam, &q, &eps, DEFAULT_TERM_BUDGET).unwrap();
            let scaled = phi.scale(&(&q - Rational::one()));
            let diff = &neve - &scaled;
            assert!(diff.contains_zero(), "λ={lam}");
        }
    }
}
