//! Sturm-count bisection for symmetric tridiagonal matrices.
//!
//! The count of eigenvalues below `x` is the number of negative pivots in the
//! `LDLᵀ` factorization of `A - x`. For rational input the pivots are tracked
//! through integer continuants, so every count is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{rat, ErrorBounded};
use crate::operators::TruncMatrix;
use crate::scalar::Scalar;
use crate::Rational;

/// Number of eigenvalues strictly below `x`, from pivots in `T`.
///
/// A zero pivot is read as `+0`: the next pivot is then `-∞` and the one after
/// restarts from `a - x`.
pub fn sturm_count<T: Scalar>(diag: &[T], off: &[T], x: &T) -> usize {
    let n = diag.len();
    let mut count = 0;
    let mut i = 0;
    let mut prev: Option<T> = None;
    while i < n {
        let mut d = diag[i].clone() - x.clone();
        if let Some(pv) = &prev {
            d = d - off[i - 1].clone() * off[i - 1].clone() / pv.clone();
        }
        if d.is_zero() {
            if i + 1 < n {
                count += 1;
            }
            i += 2;
            prev = None;
            continue;
        }
        if d.is_negative() {
            count += 1;
        }
        prev = Some(d);
        i += 1;
    }
    count
}

/// Integer form of a rational symmetric tridiagonal matrix: `scale · A` has
/// integer diagonal `diag` and squared off-diagonal `off_sq`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntTridiagonal {
    pub diag: Vec<BigInt>,
    pub off_sq: Vec<BigInt>,
    pub scale: BigInt,
}

impl IntTridiagonal {
    pub fn from_matrix(m: &TruncMatrix<Rational>) -> Result<Self> {
        if !m.is_tridiagonal() || !m.is_symmetric() {
            return Err(Error::NotTridiagonal);
        }
        let diag = m.diagonal();
        let off = m.superdiagonal();
        let scale = diag
            .iter()
            .chain(off.iter())
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let s = Rational::from_integer(scale.clone());
        let diag = diag.iter().map(|x| (x * &s).to_integer()).collect();
        let off_sq = off
            .iter()
            .map(|x| {
                let b = (x * &s).to_integer();
                &b * &b
            })
            .collect();
        Ok(Self {
            diag,
            off_sq,
            scale,
        })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Exact number of eigenvalues of `A` strictly below `x`.
    pub fn count_below(&self, x: &Rational) -> usize {
        let sx = x * Rational::from_integer(self.scale.clone());
        let u = sx.numer();
        let v = sx.denom(); // positive
        let v2 = v * v;
        let n = self.dim();
        let mut count = 0;
        let mut i = 0;
        let mut th1 = BigInt::one();
        let mut th2 = BigInt::zero();
        let mut coupled = false;
        while i < n {
            let shifted = &self.diag[i] * v - u;
            let t = if coupled {
                &shifted * &th1 - &self.off_sq[i - 1] * &v2 * &th2
            } else {
                shifted
            };
            if t.is_zero() {
                if i + 1 < n {
                    count += 1;
                }
                i += 2;
                th1 = BigInt::one();
                coupled = false;
                continue;
            }
            if t.is_negative() != th1.is_negative() {
                count += 1;
            }
            th2 = std::mem::replace(&mut th1, t);
            coupled = true;
            i += 1;
        }
        count
    }

    fn gershgorin(&self) -> (Rational, Rational) {
        let n = self.dim();
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for i in 0..n {
            // |b| ≤ b² + 1 keeps the radius rational without square roots
            let mut r = BigInt::zero();
            if i > 0 {
                r += &self.off_sq[i - 1] + 1;
            }
            if i + 1 < n {
                r += &self.off_sq[i] + 1;
            }
            let a = Rational::from_integer(self.diag[i].clone());
            let r = Rational::from_integer(r);
            let l = &a - &r;
            let h = a + r;
            lo = Some(lo.map_or(l.clone(), |x| x.min(l)));
            hi = Some(hi.map_or(h.clone(), |x| x.max(h)));
        }
        let s = Rational::from_integer(self.scale.clone());
        (lo.unwrap_or_default() / &s, hi.unwrap_or_default() / &s)
    }

    /// Enclosure of the `k`-th smallest eigenvalue (1-based) with
    /// `hi - lo ≤ 10^{-digits} max(|lo|, |hi|)`.
    pub fn eigenvalue(&self, k: usize, digits: u32) -> Result<ErrorBounded<Rational>> {
        if k == 0 || k > self.dim() {
            return Err(Error::InvalidParameter(format!(
                "eigenvalue index {k} out of range"
            )));
        }
        let two = Rational::from_integer(2.into());
        let (mut lo, mut hi) = if self.count_below(&Rational::zero()) < k {
            // nonnegative target: dyadic search for [2^j, 2^{j+1}]
            let mut x = Rational::one();
            if self.count_below(&x) >= k {
                let mut steps = 0;
                while self.count_below(&(&x / &two)) >= k && steps < 4000 {
                    x /= &two;
                    steps += 1;
                }
                if steps == 4000 {
                    (Rational::zero(), x)
                } else {
                    (&x / &two, x)
                }
            } else {
                while self.count_below(&x) < k {
                    x *= &two;
                }
                (&x / &two, x)
            }
        } else {
            let (g_lo, _) = self.gershgorin();
            (g_lo - Rational::one(), Rational::zero())
        };
        let tol = num_traits::pow(rat(1, 10), digits as usize);
        let half = rat(1, 2);
        loop {
            let scale = lo.abs().max(hi.abs());
            if &hi - &lo <= &tol * &scale || (&hi - &lo).is_zero() {
                break;
            }
            let mid = (&lo + &hi) * &half;
            if self.count_below(&mid) >= k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(ErrorBounded::new((&lo + &hi) * &half, (&hi - &lo) * &half))
    }

    /// `Tr(A⁻¹)` exactly from leading and trailing continuants.
    pub fn inverse_trace(&self) -> Result<Rational> {
        let n = self.dim();
        // theta[i] = det of the leading i×i block, phi[i] = det of rows i..n
        let mut theta = vec![BigInt::one(); n + 1];
        for i in 1..=n {
            let mut t = &self.diag[i - 1] * &theta[i - 1];
            if i >= 2 {
                t -= &self.off_sq[i - 2] * &theta[i - 2];
            }
            theta[i] = t;
        }
        let mut phi = vec![BigInt::one(); n + 2];
        for i in (1..=n).rev() {
            let mut t = &self.diag[i - 1] * &phi[i + 1];
            if i < n {
                t -= &self.off_sq[i - 1] * &phi[i + 2];
            }
            phi[i] = t;
        }
        if theta[n].is_zero() {
            return Err(Error::InvalidParameter("matrix is singular".into()));
        }
        let num: BigInt = (1..=n).map(|i| &theta[i - 1] * &phi[i + 1]).sum();
        // (sA)⁻¹ = A⁻¹/s
        Ok(Rational::new(num * &self.scale, theta[n].clone()))
    }
}

/// The `count` smallest eigenvalues of a symmetric tridiagonal rational
/// matrix, each enclosed to relative width `10^{-digits}`; ascending.
pub fn tridiag_eigenvalues(
    m: &TruncMatrix<Rational>,
    count: usize,
    digits: u32,
) -> Result<Vec<ErrorBounded<Rational>>> {
    let t = IntTridiagonal::from_matrix(m)?;
    (1..=count.min(t.dim()))
        .map(|k| t.eigenvalue(k, digits))
        .collect()
}

/// `Tr(A⁻¹)` of a symmetric tridiagonal rational matrix.
pub fn tridiag_inverse_trace(m: &TruncMatrix<Rational>) -> Result<Rational> {
    IntTridiagonal::from_matrix(m)?.inverse_trace()
}
