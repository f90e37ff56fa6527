//! Discrete Fourier transform on each level `ℤ/pⁿℤ` of the tree.
//!
//! `f̂(l) = p⁻ⁿ Σ_k f(k) e^{-2πi kl/pⁿ}` and `f(k) = Σ_l f̂(l) e^{2πi kl/pⁿ}`.
//!
//! Over `f64` the twiddles come from `sin`/`cos`. Over [`Rational`] each twiddle
//! is a dyadic rational within `2^-bits` of the true root of unity in each
//! component, so a transform of `f` is off by at most `√2 · 2^-bits · max|f|`
//! per output entry (plus nothing else: the remaining arithmetic is exact).

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::Prime;
use crate::error::{Error, Result};
use crate::exactnum::round_dyadic;
use crate::scalar::Scalar;
use crate::Rational;

/// 64 decimal digits plus guard bits.
pub const DEFAULT_DFT_BITS: u32 = 230;

/// Values of one level, `pⁿ` complex entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelData<T> {
    pub level: u32,
    pub values: Vec<Complex<T>>,
}

impl<T: Scalar> LevelData<T> {
    pub fn new(p: Prime, level: u32, values: Vec<Complex<T>>) -> Result<Self> {
        let expected = p.pow(level)?;
        if values.len() as u64 != expected {
            return Err(Error::InvalidParameter(format!(
                "level {level} needs {expected} values, got {}",
                values.len()
            )));
        }
        Ok(Self { level, values })
    }

    pub fn from_real(p: Prime, level: u32, values: Vec<T>) -> Result<Self> {
        Self::new(
            p,
            level,
            values
                .into_iter()
                .map(|x| Complex::new(x, T::zero()))
                .collect(),
        )
    }
}

/// Scalars that can supply `e^{2πi k/n}`.
pub trait RootsOfUnity: Scalar {
    /// `e^{2πi k/n}`; `bits` sets the accuracy for types that need one.
    fn root_of_unity(k: u64, n: u64, bits: u32) -> Complex<Self>;
}

impl RootsOfUnity for f64 {
    fn root_of_unity(k: u64, n: u64, _bits: u32) -> Complex<f64> {
        let theta = std::f64::consts::TAU * (k % n) as f64 / n as f64;
        Complex::new(theta.cos(), theta.sin())
    }
}

impl RootsOfUnity for f32 {
    fn root_of_unity(k: u64, n: u64, _bits: u32) -> Complex<f32> {
        let theta = std::f64::consts::TAU * (k % n) as f64 / n as f64;
        Complex::new(theta.cos() as f32, theta.sin() as f32)
    }
}

impl RootsOfUnity for Rational {
    fn root_of_unity(k: u64, n: u64, bits: u32) -> Complex<Rational> {
        let k = k % n;
        // exact quarter turns
        if (4 * k).is_multiple_of(n) {
            let (c, s) = match 4 * k / n {
                0 => (1, 0),
                1 => (0, 1),
                2 => (-1, 0),
                _ => (0, -1),
            };
            return Complex::new(
                Rational::from_integer(c.into()),
                Rational::from_integer(s.into()),
            );
        }
        let guard = bits + 16;
        // angle in (-π, π]
        let signed_k = if 2 * k <= n {
            k as i64
        } else {
            k as i64 - n as i64
        };
        let theta = round_dyadic(
            &(pi_dyadic(guard) * Rational::new(BigInt::from(2 * signed_k), BigInt::from(n))),
            guard,
        );
        let (c, s) = cos_sin_dyadic(&theta, guard);
        Complex::new(round_dyadic(&c, bits), round_dyadic(&s, bits))
    }
}

/// arctan(1/x) to within `2^-bits`, by its alternating series.
fn arctan_inv(x: u64, bits: u32) -> Rational {
    let tol = Rational::new(BigInt::one(), BigInt::one() << (bits as usize + 4));
    let x2 = Rational::from_integer(BigInt::from(x) * BigInt::from(x));
    let mut power = Rational::new(BigInt::one(), BigInt::from(x)); // x^{-(2j+1)}
    let mut sum = Rational::zero();
    let mut j = 0u64;
    loop {
        let term = &power / Rational::from_integer(BigInt::from(2 * j + 1));
        if term < tol {
            break;
        }
        if j.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power = round_dyadic(&(power / &x2), bits + 8);
        j += 1;
    }
    sum
}

/// π to within `2^-bits` via Machin's formula.
fn pi_dyadic(bits: u32) -> Rational {
    let b = bits + 8;
    let pi = arctan_inv(5, b) * Rational::from_integer(16.into())
        - arctan_inv(239, b) * Rational::from_integer(4.into());
    round_dyadic(&pi, bits)
}

/// `(cos θ, sin θ)` for `|θ| ≤ π` from their Taylor series.
fn cos_sin_dyadic(theta: &Rational, bits: u32) -> (Rational, Rational) {
    let tol = Rational::new(BigInt::one(), BigInt::one() << (bits as usize + 4));
    let work = bits + 16;
    let mut cos = Rational::zero();
    let mut sin = Rational::zero();
    let mut term = Rational::one(); // θ^j / j!
    let mut j = 0u64;
    while j < 8 || term.abs() >= tol {
        match j % 4 {
            0 => cos += &term,
            1 => sin += &term,
            2 => cos -= &term,
            _ => sin -= &term,
        }
        j += 1;
        term = round_dyadic(
            &(term * theta / Rational::from_integer(BigInt::from(j))),
            work,
        );
    }
    (cos, sin)
}

fn twiddles<T: RootsOfUnity>(n: u64, bits: u32) -> Vec<Complex<T>> {
    (0..n).map(|k| T::root_of_unity(k, n, bits)).collect()
}

/// Forward transform `f̂(l) = p⁻ⁿ Σ_k f(k) e^{-2πi kl/pⁿ}`.
pub fn level_dft<T: RootsOfUnity>(p: Prime, data: &LevelData<T>, bits: u32) -> LevelData<T> {
    let size = data.values.len() as u64;
    let roots = twiddles::<T>(size, bits);
    let scale = T::from_u64_exact(size).recip();
    let values = (0..size)
        .map(|l| {
            let mut acc = Complex::<T>::zero();
            for (k, f) in data.values.iter().enumerate() {
                let idx = (size - (k as u64 * l) % size) % size;
                acc = acc + f.clone() * roots[idx as usize].clone();
            }
            acc.scale(scale.clone())
        })
        .collect();
    debug_assert_eq!(Some(size), p.pow(data.level).ok());
    LevelData {
        level: data.level,
        values,
    }
}

/// Inverse transform `f(k) = Σ_l f̂(l) e^{2πi kl/pⁿ}`.
pub fn level_idft<T: RootsOfUnity>(p: Prime, data: &LevelData<T>, bits: u32) -> LevelData<T> {
    let size = data.values.len() as u64;
    let roots = twiddles::<T>(size, bits);
    let values = (0..size)
        .map(|k| {
            let mut acc = Complex::<T>::zero();
            for (l, f) in data.values.iter().enumerate() {
                let idx = (k * l as u64) % size;
                acc = acc + f.clone() * roots[idx as usize].clone();
            }
            acc
        })
        .collect();
    debug_assert_eq!(Some(size), p.pow(data.level).ok());
    LevelData {
        level: data.level,
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rational_to_f64, ten_pow_neg};

    fn prime(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn abs2(z: &Complex<Rational>) -> Rational {
        &z.re * &z.re + &z.im * &z.im
    }

    #[test]
    fn rational_twiddles_are_accurate() {
        for (k, n) in [(1u64, 3u64), (2, 9), (5, 8), (7, 27), (13, 16)] {
            let z = Rational::root_of_unity(k, n, 200);
            let theta = std::f64::consts::TAU * k as f64 / n as f64;
            assert!((rational_to_f64(&z.re) - theta.cos()).abs() < 1e-15);
            assert!((rational_to_f64(&z.im) - theta.sin()).abs() < 1e-15);
            // |z|² = 1 to within the dyadic rounding
            let dev = (abs2(&z) - Rational::one()).abs();
            assert!(
                dev < ten_pow_neg(55),
                "|z|^2 - 1 = {}",
                rational_to_f64(&dev)
            );
        }
    }

    #[test]
    fn constant_transforms_to_delta() {
        let p = prime(3);
        let data = LevelData::from_real(p, 2, vec![Rational::one(); 9]).unwrap();
        let hat = level_dft(p, &data, DEFAULT_DFT_BITS);
        assert_eq!(
            hat.values[0],
            Complex::new(Rational::one(), Rational::zero())
        );
        for z in &hat.values[1..] {
            assert!(abs2(z) < ten_pow_neg(120));
        }
    }

    #[test]
    fn inversion_holds_to_twenty_digits() {
        let p = prime(3);
        for level in 0..=4 {
            let size = p.pow(level).unwrap();
            let values: Vec<Complex<Rational>> = (0..size)
                .map(|k| Complex::new(rat(k as i64 * 7 % 11 - 5, 3), rat((k * k) as i64 % 5, 7)))
                .collect();
            let data = LevelData::new(p, level, values.clone()).unwrap();
            let back = level_idft(p, &level_dft(p, &data, DEFAULT_DFT_BITS), DEFAULT_DFT_BITS);
            for (a, b) in back.values.iter().zip(&values) {
                assert!(abs2(&(a - b)) < ten_pow_neg(40));
            }
        }
    }

    #[test]
    fn parseval_identity() {
        let p = prime(2);
        let level = 4;
        let size = p.pow(level).unwrap();
        let values: Vec<Rational> = (0..size).map(|k| rat((k as i64 * 5) % 7 - 3, 2)).collect();
        let lhs: Rational =
            values.iter().map(|x| x * x).sum::<Rational>() / Rational::from_integer(size.into());
        let data = LevelData::from_real(p, level, values).unwrap();
        let hat = level_dft(p, &data, DEFAULT_DFT_BITS);
        let rhs: Rational = hat.values.iter().map(abs2).sum();
        assert!((lhs - rhs).abs() < ten_pow_neg(50));
    }

    #[test]
    fn float_path_agrees_with_rational_path() {
        let p = prime(3);
        let xs: Vec<f64> = (0..27).map(|k| ((k * 13) % 17) as f64 - 8.0).collect();
        let hat_f = level_dft(p, &LevelData::from_real(p, 3, xs.clone()).unwrap(), 0);
        let xq: Vec<Rational> = xs
            .iter()
            .map(|&x| Rational::from_float(x).unwrap())
            .collect();
        let hat_q = level_dft(
            p,
            &LevelData::from_real(p, 3, xq).unwrap(),
            DEFAULT_DFT_BITS,
        );
        for (a, b) in hat_f.values.iter().zip(&hat_q.values) {
            assert!((a.re - rational_to_f64(&b.re)).abs() < 1e-12);
            assert!((a.im - rational_to_f64(&b.im)).abs() < 1e-12);
        }
        assert!(LevelData::<f64>::from_real(p, 2, vec![0.0; 8]).is_err());
    }
}
