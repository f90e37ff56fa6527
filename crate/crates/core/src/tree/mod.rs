//! The p-adic tree in its two coordinate systems.
//!
//! A vertex `(n, k)` is the ball `k + pⁿℤ_p`; its children are
//! `(n+1, k + j·pⁿ)` for `0 ≤ j < p` and its weight is the Haar volume `p⁻ⁿ`.
//! The Prüfer coordinates `(r/pᵐ, l)` regroup vertices into the invariant
//! fibers on which the Fourier-side operators act as half-line operators.

mod dft;
mod dot;

pub use dft::{level_dft, level_idft, LevelData, RootsOfUnity, DEFAULT_DFT_BITS};
pub use dot::tree_dot;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Rational;

/// Largest vertex count the crate will enumerate in one go.
pub const DEFAULT_VERTEX_LIMIT: u64 = 1 << 22;

/// A prime `p ≥ 2`, checked by trial division.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 {
            return Err(Error::NotPrime(p));
        }
        let mut d = 2u64;
        while d * d <= p {
            if p.is_multiple_of(d) {
                return Err(Error::NotPrime(p));
            }
            d += 1;
        }
        Ok(Self(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// `pⁿ`, or an error if it does not fit in 64 bits.
    pub fn pow(self, n: u32) -> Result<u64> {
        self.0.checked_pow(n).ok_or(Error::DimensionLimit {
            dim: u64::MAX,
            limit: u64::MAX,
        })
    }

    /// `q = p⁻²`.
    pub fn q(self) -> Rational {
        Rational::new(
            BigInt::from(1u8),
            BigInt::from(self.0) * BigInt::from(self.0),
        )
    }

    /// Number of vertices on levels `0..=depth`: `Σ pⁿ`.
    pub fn vertex_count(self, depth: u32) -> Result<u64> {
        (0..=depth).try_fold(0u64, |acc, n| {
            acc.checked_add(self.pow(n)?).ok_or(Error::DimensionLimit {
                dim: u64::MAX,
                limit: u64::MAX,
            })
        })
    }

    /// `p`-adic valuation of a positive integer.
    pub fn valuation(self, mut k: u64) -> u32 {
        debug_assert!(k > 0);
        let mut v = 0;
        while k.is_multiple_of(self.0) {
            k /= self.0;
            v += 1;
        }
        v
    }
}

impl std::fmt::Display for Prime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Vertex `(n, k)` with `0 ≤ k < pⁿ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub level: u32,
    pub index: u64,
}

impl Vertex {
    pub const ROOT: Vertex = Vertex { level: 0, index: 0 };

    pub fn new(p: Prime, level: u32, index: u64) -> Result<Self> {
        if index >= p.pow(level)? {
            return Err(Error::InvalidVertex { level, index });
        }
        Ok(Self { level, index })
    }
}

/// Prüfer coordinates: fiber label `g = r/pᵐ` and position `l` along the fiber.
///
/// The identity of the Prüfer group is `(r, m) = (0, 0)`; for `m ≥ 1` the
/// residue satisfies `0 < r < pᵐ` and `p ∤ r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PruferPoint {
    pub r: u64,
    pub m: u32,
    pub l: u32,
}

impl PruferPoint {
    pub fn new(p: Prime, r: u64, m: u32, l: u32) -> Result<Self> {
        let valid = if m == 0 {
            r == 0
        } else {
            r > 0 && r < p.pow(m)? && !r.is_multiple_of(p.get())
        };
        if valid {
            Ok(Self { r, m, l })
        } else {
            Err(Error::InvalidPrufer { r, m, l })
        }
    }
}

/// The `p` children of `v`, in increasing index order.
pub fn children(p: Prime, v: Vertex) -> Result<Vec<Vertex>> {
    let stride = p.pow(v.level)?;
    p.pow(v.level + 1)?;
    Ok((0..p.get())
        .map(|j| Vertex {
            level: v.level + 1,
            index: v.index + j * stride,
        })
        .collect())
}

/// `(n-1, k mod p^{n-1})`.
pub fn parent(p: Prime, v: Vertex) -> Result<Vertex> {
    if v.level == 0 {
        return Err(Error::RootHasNoParent);
    }
    Ok(Vertex {
        level: v.level - 1,
        index: v.index % p.pow(v.level - 1)?,
    })
}

/// Haar volume `p⁻ⁿ` of the ball at `v`.
pub fn weight(p: Prime, v: Vertex) -> Rational {
    Rational::new(
        BigInt::from(1u8),
        num_traits::pow(BigInt::from(p.get()), v.level as usize),
    )
}

/// `(n, k) ↦ (r/pᵐ, l)` with `k = r pˡ`, `p ∤ r`, `m = n - l`; `(n, 0) ↦ (0, 0, n)`.
pub fn to_prufer(p: Prime, v: Vertex) -> PruferPoint {
    if v.index == 0 {
        return PruferPoint {
            r: 0,
            m: 0,
            l: v.level,
        };
    }
    let l = p.valuation(v.index);
    let r = v.index / p.get().pow(l);
    PruferPoint {
        r,
        m: v.level - l,
        l,
    }
}

/// `(r/pᵐ, l) ↦ (m + l, r pˡ)`.
pub fn from_prufer(p: Prime, point: PruferPoint) -> Result<Vertex> {
    let index = point
        .r
        .checked_mul(p.pow(point.l)?)
        .ok_or(Error::DimensionLimit {
            dim: u64::MAX,
            limit: u64::MAX,
        })?;
    Ok(Vertex {
        level: point.m + point.l,
        index,
    })
}

/// All vertices on levels `0..=depth`, level by level.
pub fn vertices(p: Prime, depth: u32) -> Result<Vec<Vertex>> {
    let count = p.vertex_count(depth)?;
    if count > DEFAULT_VERTEX_LIMIT {
        return Err(Error::DimensionLimit {
            dim: count,
            limit: DEFAULT_VERTEX_LIMIT,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    for n in 0..=depth {
        out.extend((0..p.pow(n)?).map(|k| Vertex { level: n, index: k }));
    }
    Ok(out)
}

/// Prüfer group elements `(r, m)` with `m ≤ max_m`, the identity first.
pub fn prufer_fibers(p: Prime, max_m: u32) -> Result<Vec<(u64, u32)>> {
    let mut out = vec![(0, 0)];
    for m in 1..=max_m {
        out.extend((1..p.pow(m)?).filter(|r| r % p.get() != 0).map(|r| (r, m)));
    }
    Ok(out)
}

/// Number of Prüfer elements with denominator exactly `pᵐ`: `1` for `m = 0`,
/// `pᵐ - p^{m-1}` otherwise.
pub fn fiber_multiplicity(p: Prime, m: u32) -> u64 {
    if m == 0 {
        1
    } else {
        p.get().pow(m) - p.get().pow(m - 1)
    }
}
