use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{p_inv, p_pow, Coefficient, HalfLineSeq};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tree::{
    from_prufer, level_dft, level_idft, LevelData, Prime, PruferPoint, RootsOfUnity,
};

/// A function on levels `0..=depth` of the tree; deeper levels are zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeFunction<V> {
    pub p: Prime,
    pub levels: Vec<Vec<V>>,
}

impl<V: Coefficient> TreeFunction<V> {
    pub fn zeros(p: Prime, depth: u32) -> Result<Self> {
        let levels = (0..=depth)
            .map(|n| Ok(vec![V::zero(); p.pow(n)? as usize]))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { p, levels })
    }

    pub fn from_levels(p: Prime, levels: Vec<Vec<V>>) -> Result<Self> {
        for (n, lvl) in levels.iter().enumerate() {
            if lvl.len() as u64 != p.pow(n as u32)? {
                return Err(Error::InvalidParameter(format!(
                    "level {n} has {} entries, expected {}",
                    lvl.len(),
                    p.pow(n as u32)?
                )));
            }
        }
        Ok(Self { p, levels })
    }

    /// Indicator of the vertex `(n, k)` on a tree of the given depth.
    pub fn delta(p: Prime, depth: u32, level: u32, index: u64) -> Result<Self> {
        let mut f = Self::zeros(p, depth)?;
        *f.levels
            .get_mut(level as usize)
            .and_then(|l| l.get_mut(index as usize))
            .ok_or(Error::InvalidVertex { level, index })? = V::one();
        Ok(f)
    }

    pub fn depth(&self) -> u32 {
        self.levels.len().saturating_sub(1) as u32
    }

    /// Value at `(n, k)`, zero outside the stored levels.
    pub fn get(&self, level: u32, index: u64) -> V {
        self.levels
            .get(level as usize)
            .and_then(|l| l.get(index as usize))
            .cloned()
            .unwrap_or_else(V::zero)
    }

    /// Copy with levels up to `depth` (extra levels dropped, missing ones zero).
    pub fn resized(&self, depth: u32) -> Result<Self> {
        let mut out = Self::zeros(self.p, depth)?;
        for (n, lvl) in out.levels.iter_mut().enumerate() {
            for (k, x) in lvl.iter_mut().enumerate() {
                *x = self.get(n as u32, k as u64);
            }
        }
        Ok(out)
    }

    /// Equality as functions on the whole tree.
    pub fn same_function(&self, other: &Self) -> bool {
        let depth = self.depth().max(other.depth());
        (0..=depth).all(|n| {
            let size = self.p.pow(n).unwrap_or(0);
            (0..size).all(|k| self.get(n, k) == other.get(n, k))
        })
    }
}

impl<T: Scalar> TreeFunction<T> {
    /// `⟨f, g⟩_H = Σ_v f(v) g(v) p^{-n(v)}`.
    pub fn inner_weighted(&self, other: &Self) -> T {
        let depth = self.depth().min(other.depth());
        let mut total = T::zero();
        for n in 0..=depth {
            let w = T::from_u64_exact(self.p.get()).powi(-(n as i64));
            let level_sum = self.levels[n as usize]
                .iter()
                .zip(&other.levels[n as usize])
                .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
            total = total + level_sum * w;
        }
        total
    }
}

/// `(Df)_n(k) = pⁿ (f_n(k) - (1/p) Σ_j f_{n+1}(k + j pⁿ))`.
pub fn apply_d<V: Coefficient>(f: &TreeFunction<V>) -> TreeFunction<V> {
    let p = f.p.get();
    let inv = p_inv::<V>(p);
    let levels = f
        .levels
        .iter()
        .enumerate()
        .map(|(n, lvl)| {
            let stride = p.pow(n as u32);
            let scale = p_pow::<V>(p, n as u32);
            lvl.iter()
                .enumerate()
                .map(|(k, fk)| {
                    let children = (0..p).fold(V::zero(), |acc, j| {
                        acc + f.get(n as u32 + 1, k as u64 + j * stride)
                    });
                    scale.clone() * (fk.clone() - children * inv.clone())
                })
                .collect()
        })
        .collect();
    TreeFunction { p: f.p, levels }
}

/// `(D*g)_n(k) = pⁿ (g_n(k) - (1/p) g_{n-1}(k mod p^{n-1}))`, with `g_{-1} = 0`.
/// The result reaches one level deeper than `g`.
pub fn apply_dstar<V: Coefficient>(g: &TreeFunction<V>) -> TreeFunction<V> {
    let p = g.p.get();
    let inv = p_inv::<V>(p);
    let depth = g.depth() + 1;
    let levels = (0..=depth)
        .map(|n| {
            let scale = p_pow::<V>(p, n);
            (0..p.pow(n))
                .map(|k| {
                    let up = if n == 0 {
                        V::zero()
                    } else {
                        g.get(n - 1, k % p.pow(n - 1))
                    };
                    scale.clone() * (g.get(n, k) - up * inv.clone())
                })
                .collect()
        })
        .collect();
    TreeFunction { p: g.p, levels }
}

/// Fourier side of `D`: `(D̂f̂)_n(l) = pⁿ (f̂_n(l) - f̂_{n+1}(pl))`.
pub fn apply_dhat<V: Coefficient>(fhat: &TreeFunction<V>) -> TreeFunction<V> {
    let p = fhat.p.get();
    let levels = fhat
        .levels
        .iter()
        .enumerate()
        .map(|(n, lvl)| {
            let scale = p_pow::<V>(p, n as u32);
            lvl.iter()
                .enumerate()
                .map(|(l, x)| scale.clone() * (x.clone() - fhat.get(n as u32 + 1, p * l as u64)))
                .collect()
        })
        .collect();
    TreeFunction { p: fhat.p, levels }
}

/// Fourier side of `D*`: `pⁿ ĝ_n(l)` when `p ∤ l`, otherwise
/// `pⁿ (ĝ_n(l) - ĝ_{n-1}(l/p)/p)`. Reaches one level deeper than `ĝ`.
pub fn apply_dhatstar<V: Coefficient>(ghat: &TreeFunction<V>) -> TreeFunction<V> {
    let p = ghat.p.get();
    let inv = p_inv::<V>(p);
    let depth = ghat.depth() + 1;
    let levels = (0..=depth)
        .map(|n| {
            let scale = p_pow::<V>(p, n);
            (0..p.pow(n))
                .map(|l| {
                    let own = ghat.get(n, l);
                    if l % p != 0 || n == 0 {
                        scale.clone() * own
                    } else {
                        scale.clone() * (own - ghat.get(n - 1, l / p) * inv.clone())
                    }
                })
                .collect()
        })
        .collect();
    TreeFunction { p: ghat.p, levels }
}

/// `⟨a, b⟩ = Σ a(v) conj(b(v))` on the Fourier side (no weight).
pub fn fourier_inner<T: Scalar>(
    a: &TreeFunction<Complex<T>>,
    b: &TreeFunction<Complex<T>>,
) -> Complex<T> {
    let depth = a.depth().min(b.depth());
    let mut total = Complex::new(T::zero(), T::zero());
    for n in 0..=depth as usize {
        for (x, y) in a.levels[n].iter().zip(&b.levels[n]) {
            total = total + x.clone() * y.conj();
        }
    }
    total
}

/// Per-level forward DFT of a whole tree function.
pub fn tree_dft<T: RootsOfUnity>(
    f: &TreeFunction<Complex<T>>,
    bits: u32,
) -> TreeFunction<Complex<T>> {
    map_levels(f, |level, values| {
        level_dft(f.p, &LevelData { level, values }, bits).values
    })
}

/// Per-level inverse DFT of a whole tree function.
pub fn tree_idft<T: RootsOfUnity>(
    f: &TreeFunction<Complex<T>>,
    bits: u32,
) -> TreeFunction<Complex<T>> {
    map_levels(f, |level, values| {
        level_idft(f.p, &LevelData { level, values }, bits).values
    })
}

fn map_levels<T: RootsOfUnity, F>(f: &TreeFunction<Complex<T>>, op: F) -> TreeFunction<Complex<T>>
where
    F: Fn(u32, Vec<Complex<T>>) -> Vec<Complex<T>>,
{
    let levels = f
        .levels
        .iter()
        .enumerate()
        .map(|(n, lvl)| op(n as u32, lvl.clone()))
        .collect();
    TreeFunction { p: f.p, levels }
}

/// Values of `f` along the Prüfer fiber `(r, m)`: entry `l` is `f` at vertex
/// `(m + l, r pˡ)`, for every `l` with `m + l ≤ depth`.
pub fn fiber_restrict<V: Coefficient>(
    f: &TreeFunction<V>,
    r: u64,
    m: u32,
) -> Result<HalfLineSeq<V>> {
    let depth = f.depth();
    if m > depth {
        return Ok(HalfLineSeq::new(Vec::new()));
    }
    let values = (0..=depth - m)
        .map(|l| {
            let v = from_prufer(f.p, PruferPoint::new(f.p, r, m, l)?)?;
            Ok(f.get(v.level, v.index))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HalfLineSeq::new(values))
}

/// The tree function supported on fiber `(r, m)` with the given values.
pub fn fiber_embed<V: Coefficient>(
    p: Prime,
    depth: u32,
    r: u64,
    m: u32,
    seq: &HalfLineSeq<V>,
) -> Result<TreeFunction<V>> {
    let mut f = TreeFunction::zeros(p, depth)?;
    for (l, x) in seq.values.iter().enumerate() {
        let v = from_prufer(p, PruferPoint::new(p, r, m, l as u32)?)?;
        if v.level > depth {
            return Err(Error::InvalidParameter(format!(
                "fiber ({r}, {m}) entry {l} falls below depth {depth}"
            )));
        }
        f.levels[v.level as usize][v.index as usize] = x.clone();
    }
    Ok(f)
}

impl<T: Scalar> TreeFunction<T> {
    /// The same function with complex values (zero imaginary part).
    pub fn complexify(&self) -> TreeFunction<Complex<T>> {
        let levels = self
            .levels
            .iter()
            .map(|l| {
                l.iter()
                    .map(|x| Complex::new(x.clone(), T::zero()))
                    .collect()
            })
            .collect();
        TreeFunction { p: self.p, levels }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, ten_pow_neg};
    use crate::operators::{apply_d0, apply_d0star};
    use crate::tree::{prufer_fibers, DEFAULT_DFT_BITS};
    use crate::Rational;
    use num_traits::{One, Zero};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn prime(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn random_fn(p: Prime, depth: u32, rng: &mut ChaCha8Rng) -> TreeFunction<Rational> {
        let mut f = TreeFunction::zeros(p, depth).unwrap();
        for lvl in f.levels.iter_mut() {
            for x in lvl.iter_mut() {
                if rng.gen_bool(0.6) {
                    *x = rat(rng.gen_range(-9..=9), rng.gen_range(1..=6));
                }
            }
        }
        f
    }

    #[test]
    fn d_examples() {
        let p = prime(2);
        let f = TreeFunction::<Rational>::delta(p, 3, 1, 0).unwrap();
        let df = apply_d(&f);
        let mut expected = TreeFunction::<Rational>::zeros(p, 3).unwrap();
        expected.levels[0][0] = rat(-1, 2);
        expected.levels[1][0] = rat(2, 1);
        assert!(df.same_function(&expected));

        let root = TreeFunction::<Rational>::delta(p, 3, 0, 0).unwrap();
        assert!(apply_d(&root).same_function(&root));
    }

    #[test]
    fn d_kills_constants_away_from_the_edge() {
        let p = prime(3);
        let depth = 3;
        let mut f = TreeFunction::<Rational>::zeros(p, depth).unwrap();
        for lvl in f.levels.iter_mut() {
            lvl.iter_mut().for_each(|x| *x = rat(5, 3));
        }
        let df = apply_d(&f);
        for n in 0..depth {
            assert!(df.levels[n as usize].iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn dstar_examples() {
        let p = prime(2);
        let g = TreeFunction::<Rational>::delta(p, 2, 0, 0).unwrap();
        let out = apply_dstar(&g);
        assert_eq!(out.get(0, 0), Rational::one());
        assert_eq!(out.get(1, 0), rat(-1, 1));
        assert_eq!(out.get(1, 1), rat(-1, 1));
        assert!(out.levels[2].iter().all(|x| x.is_zero()));
        let zero = TreeFunction::<Rational>::zeros(p, 2).unwrap();
        assert!(apply_dstar(&zero)
            .levels
            .iter()
            .flatten()
            .all(|x| x.is_zero()));
    }

    #[test]
    fn adjointness_worked_example() {
        let p = prime(2);
        let f = TreeFunction::<Rational>::delta(p, 2, 1, 0).unwrap();
        let g = TreeFunction::<Rational>::delta(p, 2, 0, 0).unwrap();
        let lhs = apply_d(&f).inner_weighted(&g);
        let rhs = f.inner_weighted(&apply_dstar(&g));
        assert_eq!(lhs, rat(-1, 2));
        assert_eq!(rhs, rat(-1, 2));
    }

    #[test]
    fn adjointness_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [prime(2), prime(3)] {
            for _ in 0..20 {
                let f = random_fn(p, 4, &mut rng);
                let g = random_fn(p, 4, &mut rng);
                let lhs = apply_d(&f).inner_weighted(&g);
                let rhs = f.inner_weighted(&apply_dstar(&g));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn dhat_examples() {
        let p = prime(2);
        let d = TreeFunction::<Rational>::delta(p, 3, 0, 0).unwrap();
        assert!(apply_dhat(&d).same_function(&d));
        let g = TreeFunction::<Rational>::delta(p, 3, 1, 1).unwrap();
        let out = apply_dhatstar(&g);
        let mut expected = TreeFunction::<Rational>::zeros(p, 3).unwrap();
        // p ∤ l branch at (1,1); the p | l branch picks it up again at (2,2)
        expected.levels[1][1] = rat(2, 1);
        expected.levels[2][2] = rat(-2, 1);
        assert!(out.same_function(&expected));
    }

    #[test]
    fn dhat_adjointness_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [prime(2), prime(3)] {
            for _ in 0..10 {
                let f = random_fn(p, 3, &mut rng);
                let g = random_fn(p, 3, &mut rng);
                let lhs: Rational = apply_dhat(&f)
                    .levels
                    .iter()
                    .flatten()
                    .zip(g.resized(3).unwrap().levels.iter().flatten())
                    .map(|(a, b)| a * b)
                    .sum();
                let rhs: Rational = f
                    .resized(4)
                    .unwrap()
                    .levels
                    .iter()
                    .flatten()
                    .zip(apply_dhatstar(&g).levels.iter().flatten())
                    .map(|(a, b)| a * b)
                    .sum();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn fiber_decomposition_is_exact() {
        let p = prime(3);
        let depth = 4;
        for (r, m) in prufer_fibers(p, 2).unwrap() {
            let len = (depth - m + 1) as usize;
            let seq = HalfLineSeq::new((0..len).map(|l| rat(l as i64 * 3 - 4, 5)).collect());
            let f = fiber_embed(p, depth, r, m, &seq).unwrap();
            let pm = rat(3i64.pow(m), 1);
            let lhs = fiber_restrict(&apply_dhat(&f), r, m).unwrap();
            assert!(lhs.same_sequence(&apply_d0(p, &seq).scaled(&pm)));
            let star = apply_dhatstar(&f);
            let lhs_star = fiber_restrict(&star, r, m).unwrap();
            let rhs_star = apply_d0star(p, &seq).scaled(&pm);
            // restriction to depth+1 keeps exactly len+1 sites of the fiber
            assert!(lhs_star.same_sequence(&rhs_star));
        }
    }

    #[test]
    fn dft_conjugates_d_into_dhat() {
        let p = prime(2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_fn(p, 4, &mut rng).complexify();
        let via_fourier = tree_idft(
            &apply_dhat(&tree_dft(&f, DEFAULT_DFT_BITS)),
            DEFAULT_DFT_BITS,
        );
        let direct = apply_d(&f);
        let tol = ten_pow_neg(40);
        for (a, b) in via_fourier
            .levels
            .iter()
            .flatten()
            .zip(direct.levels.iter().flatten())
        {
            let d = a - b;
            assert!(&d.re * &d.re + &d.im * &d.im < tol);
        }
    }
}
