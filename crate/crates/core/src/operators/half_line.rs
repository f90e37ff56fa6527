use serde::{Deserialize, Serialize};

use super::{p_inv, p_pow, Coefficient};
use crate::scalar::Scalar;
use crate::tree::Prime;

/// Finitely supported sequence on `ℤ≥0`; entries past the end are zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfLineSeq<V> {
    pub values: Vec<V>,
}

impl<V: Coefficient> HalfLineSeq<V> {
    pub fn new(values: Vec<V>) -> Self {
        Self { values }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            values: vec![V::zero(); len],
        }
    }

    /// `e_n` stored with length `n + 1`.
    pub fn unit(n: usize) -> Self {
        let mut s = Self::zeros(n + 1);
        s.values[n] = V::one();
        s
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entry `n`, zero beyond the stored range.
    pub fn get(&self, n: usize) -> V {
        self.values.get(n).cloned().unwrap_or_else(V::zero)
    }

    /// Drops trailing zeros.
    pub fn trimmed(mut self) -> Self {
        while self.values.last().is_some_and(|v| v.is_zero()) {
            self.values.pop();
        }
        self
    }

    /// Equality as sequences on `ℤ≥0` (trailing zeros ignored).
    pub fn same_sequence(&self, other: &Self) -> bool {
        let n = self.len().max(other.len());
        (0..n).all(|i| self.get(i) == other.get(i))
    }

    pub fn scaled(&self, k: &V) -> Self {
        Self {
            values: self.values.iter().map(|v| v.clone() * k.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.len().max(other.len());
        Self {
            values: (0..n).map(|i| self.get(i) - other.get(i)).collect(),
        }
    }
}

impl<T: Scalar> HalfLineSeq<T> {
    /// `Σ f_n²`.
    pub fn norm_sq(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |acc, v| acc + v.clone() * v.clone())
    }

    /// `Σ |f_n|`.
    pub fn l1_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| acc + v.abs())
    }
}

/// `(D₀f)_n = pⁿ (f_n - f_{n+1})`, for `n` in the support of `f`.
pub fn apply_d0<V: Coefficient>(p: Prime, f: &HalfLineSeq<V>) -> HalfLineSeq<V> {
    let values = (0..f.len())
        .map(|n| p_pow::<V>(p.get(), n as u32) * (f.get(n) - f.get(n + 1)))
        .collect();
    HalfLineSeq { values }
}

/// `(D₀*g)_n = pⁿ (g_n - g_{n-1}/p)` with `g_{-1} = 0`; support grows by one.
pub fn apply_d0star<V: Coefficient>(p: Prime, g: &HalfLineSeq<V>) -> HalfLineSeq<V> {
    let inv = p_inv::<V>(p.get());
    let values = (0..=g.len())
        .map(|n| {
            let prev = if n == 0 {
                V::zero()
            } else {
                g.get(n - 1) * inv.clone()
            };
            p_pow::<V>(p.get(), n as u32) * (g.get(n) - prev)
        })
        .collect();
    HalfLineSeq { values }
}

/// `D₀*D₀` in its three-term form:
/// `(Af)_0 = f_0 - f_1`, `(Af)_n = p^{2n-2}[-p² f_{n+1} + (1+p²) f_n - f_{n-1}]`.
pub fn apply_d0star_d0<V: Coefficient>(p: Prime, f: &HalfLineSeq<V>) -> HalfLineSeq<V> {
    let p2: V = p_pow(p.get(), 2);
    let values = (0..=f.len())
        .map(|n| {
            if n == 0 {
                f.get(0) - f.get(1)
            } else {
                let scale: V = p_pow(p.get(), 2 * n as u32 - 2);
                scale
                    * ((V::one() + p2.clone()) * f.get(n)
                        - p2.clone() * f.get(n + 1)
                        - f.get(n - 1))
            }
        })
        .collect();
    HalfLineSeq { values }
}
