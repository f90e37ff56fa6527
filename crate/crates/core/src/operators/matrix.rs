//! Dense truncated matrices of the half-line and tree operators.
//!
//! Truncation is Dirichlet: coordinates past the cutoff are zero and terms that
//! reference them are dropped. A half-line truncation of size `N` keeps indices
//! `0..N`; a tree truncation of depth `N` keeps levels `0..=N`, vertices ordered
//! level by level.

use std::fmt::Write;

use num_traits::{Float, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{format_fraction, parse_rational};
use crate::scalar::{int_pow, Scalar};
use crate::tree::Prime;
use crate::Rational;

/// Largest dimension built densely unless the caller raises it.
pub const DEFAULT_DENSE_LIMIT: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorId {
    D0,
    D0Star,
    D0StarD0,
    /// `D` on the tree in the vertex basis.
    TreeD,
    /// `W⁻¹MᵀW·M`: the weighted adjoint of the truncated `D` times `D`. Exact
    /// but not symmetric; similar to the symmetrized form.
    TreeDStarD,
    /// `BᵀB` with `B = W^{1/2} M W^{-1/2}`; floating only.
    TreeDStarDSym,
}

impl OperatorId {
    fn name(self) -> &'static str {
        match self {
            OperatorId::D0 => "d0",
            OperatorId::D0Star => "d0_star",
            OperatorId::D0StarD0 => "d0_star_d0",
            OperatorId::TreeD => "tree_d",
            OperatorId::TreeDStarD => "tree_dstar_d",
            OperatorId::TreeDStarDSym => "tree_dstar_d_sym",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        [
            OperatorId::D0,
            OperatorId::D0Star,
            OperatorId::D0StarD0,
            OperatorId::TreeD,
            OperatorId::TreeDStarD,
            OperatorId::TreeDStarDSym,
        ]
        .into_iter()
        .find(|op| op.name() == name)
    }

    fn on_tree(self) -> bool {
        matches!(
            self,
            OperatorId::TreeD | OperatorId::TreeDStarD | OperatorId::TreeDStarDSym
        )
    }
}

/// Dense square matrix in row-major order with provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncMatrix<T> {
    pub dim: usize,
    pub entries: Vec<T>,
    pub op: OperatorId,
    pub p: u64,
    /// Half-line size `N` or tree depth `N`.
    pub depth: u32,
    pub boundary: String,
}

impl<T: Scalar> TruncMatrix<T> {
    fn zeros(dim: usize, op: OperatorId, p: Prime, depth: u32) -> Self {
        Self {
            dim,
            entries: vec![T::zero(); dim * dim],
            op,
            p: p.get(),
            depth,
            boundary: "dirichlet".to_string(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.dim + j]
    }

    fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, self.get(j, i).clone());
            }
        }
        out
    }

    /// Product `self · rhs`; metadata is taken from `self`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::InvalidParameter(format!(
                "dimension mismatch {} vs {}",
                self.dim, rhs.dim
            )));
        }
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                let mut acc = T::zero();
                for k in 0..n {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        acc = acc + a.clone() * rhs.get(k, j).clone();
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> T {
        (0..self.dim).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn frobenius_sq(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |acc, x| acc + x.clone() * x.clone())
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_tridiagonal(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| i.abs_diff(j) <= 1 || self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.dim).map(|i| self.get(i, i).clone()).collect()
    }

    /// Superdiagonal `A_{i,i+1}`.
    pub fn superdiagonal(&self) -> Vec<T> {
        (1..self.dim).map(|i| self.get(i - 1, i).clone()).collect()
    }

    /// `A x`.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim).fold(T::zero(), |acc, j| {
                    acc + self.get(i, j).clone() * x[j].clone()
                })
            })
            .collect()
    }

    /// `c · A`.
    pub fn scaled(&self, c: &T) -> Self {
        let mut out = self.clone();
        out.entries
            .iter_mut()
            .for_each(|x| *x = x.clone() * c.clone());
        out
    }
}

fn check_dim(dim: u64, limit: u64) -> Result<usize> {
    if dim > limit {
        Err(Error::DimensionLimit { dim, limit })
    } else {
        Ok(dim as usize)
    }
}

/// Exact truncation of `op`; `n` is the half-line size or the tree depth.
pub fn truncated_matrix<T: Scalar>(op: OperatorId, p: Prime, n: u32) -> Result<TruncMatrix<T>> {
    truncated_matrix_with_limit(op, p, n, DEFAULT_DENSE_LIMIT)
}

pub fn truncated_matrix_with_limit<T: Scalar>(
    op: OperatorId,
    p: Prime,
    n: u32,
    limit: u64,
) -> Result<TruncMatrix<T>> {
    if n < 1 {
        return Err(Error::InvalidParameter(
            "truncation size must be at least 1".into(),
        ));
    }
    if op.on_tree() {
        let dim = check_dim(p.vertex_count(n)?, limit)?;
        return match op {
            OperatorId::TreeD => Ok(tree_d(p, n, dim)),
            OperatorId::TreeDStarD => {
                let m = tree_d::<T>(p, n, dim);
                let mut adj = m.transpose();
                // (W⁻¹MᵀW)_{uv} = M_{vu} w(v)/w(u)
                let levels = level_of_index(p, n);
                for u in 0..dim {
                    for v in 0..dim {
                        let x = adj.get(u, v).clone();
                        if !x.is_zero() {
                            let shift = levels[u] as i64 - levels[v] as i64;
                            adj.set(u, v, x * T::from_u64_exact(p.get()).powi(shift));
                        }
                    }
                }
                let mut out = adj.matmul(&m)?;
                out.op = OperatorId::TreeDStarD;
                Ok(out)
            }
            _ => Err(Error::InvalidParameter(
                "the symmetrized tree operator needs a float type; use symmetrized_tree_dstar_d"
                    .into(),
            )),
        };
    }
    let dim = check_dim(n as u64, limit)?;
    let d0 = half_line_d0::<T>(p, n, dim);
    let mut out = match op {
        OperatorId::D0 => d0,
        OperatorId::D0Star => d0.transpose(),
        _ => d0.transpose().matmul(&d0)?,
    };
    out.op = op;
    Ok(out)
}

fn half_line_d0<T: Scalar>(p: Prime, n: u32, dim: usize) -> TruncMatrix<T> {
    let mut m = TruncMatrix::zeros(dim, OperatorId::D0, p, n);
    for i in 0..dim {
        let pi: T = int_pow(p.get(), i as u32);
        if i + 1 < dim {
            m.set(i, i + 1, -pi.clone());
        }
        m.set(i, i, pi);
    }
    m
}

fn level_of_index(p: Prime, depth: u32) -> Vec<u32> {
    (0..=depth)
        .flat_map(|n| std::iter::repeat_n(n, p.get().pow(n) as usize))
        .collect()
}

/// Position of vertex `(n, k)` in the level-by-level ordering.
pub fn vertex_position(p: Prime, level: u32, index: u64) -> usize {
    ((p.get().pow(level) - 1) / (p.get() - 1) + index) as usize
}

fn tree_d<T: Scalar>(p: Prime, depth: u32, dim: usize) -> TruncMatrix<T> {
    let mut m = TruncMatrix::zeros(dim, OperatorId::TreeD, p, depth);
    let pp = p.get();
    for n in 0..=depth {
        let scale: T = int_pow(pp, n);
        let child: T = scale.clone() / T::from_u64_exact(pp);
        for k in 0..pp.pow(n) {
            let row = vertex_position(p, n, k);
            m.set(row, row, scale.clone());
            if n < depth {
                for j in 0..pp {
                    m.set(
                        row,
                        vertex_position(p, n + 1, k + j * pp.pow(n)),
                        -child.clone(),
                    );
                }
            }
        }
    }
    m
}

/// Symmetric `BᵀB` with `B = W^{1/2} M_D W^{-1/2}`, `W = diag(p^{-n})`.
pub fn symmetrized_tree_dstar_d<T: Scalar + Float>(p: Prime, depth: u32) -> Result<TruncMatrix<T>> {
    if depth < 1 {
        return Err(Error::InvalidParameter(
            "tree depth must be at least 1".into(),
        ));
    }
    let dim = check_dim(p.vertex_count(depth)?, DEFAULT_DENSE_LIMIT)?;
    let mut b = tree_d::<T>(p, depth, dim);
    let sqrt_p = <T as Float>::sqrt(T::from_u64_exact(p.get()));
    // off-diagonal entries -p^{n-1} pick up a factor √p
    for x in b.entries.iter_mut() {
        if *x < T::zero() {
            *x = *x * sqrt_p;
        }
    }
    let mut out = b.transpose().matmul(&b)?;
    out.op = OperatorId::TreeDStarDSym;
    Ok(out)
}

impl TruncMatrix<Rational> {
    /// Plain-text dump: a header line, the dimension line, then one
    /// `row col num/den` line per nonzero entry (1-based indices).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "%%padic-matrix {} p={} depth={} boundary={}",
            self.op.name(),
            self.p,
            self.depth,
            self.boundary
        );
        let nnz = self.entries.iter().filter(|x| !x.is_zero()).count();
        let _ = writeln!(out, "{} {} {}", self.dim, self.dim, nnz);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let x = self.get(i, j);
                if !x.is_zero() {
                    let _ = writeln!(out, "{} {} {}", i + 1, j + 1, format_fraction(x));
                }
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidParameter(format!("matrix text: {msg}"));
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("empty input"))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("%%padic-matrix") {
            return Err(bad("missing header"));
        }
        let op = fields
            .next()
            .and_then(OperatorId::from_name)
            .ok_or_else(|| bad("operator"))?;
        let mut p = None;
        let mut depth = None;
        let mut boundary = None;
        for f in fields {
            match f.split_once('=') {
                Some(("p", v)) => p = v.parse::<u64>().ok(),
                Some(("depth", v)) => depth = v.parse::<u32>().ok(),
                Some(("boundary", v)) => boundary = Some(v.to_string()),
                _ => return Err(bad("header field")),
            }
        }
        let prime = Prime::new(p.ok_or_else(|| bad("p"))?)?;
        let size = lines.next().ok_or_else(|| bad("size line"))?;
        let dims: Vec<usize> = size
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| bad("size line")))
            .collect::<Result<_>>()?;
        if dims.len() != 3 || dims[0] != dims[1] {
            return Err(bad("size line"));
        }
        let mut m = TruncMatrix::zeros(dims[0], op, prime, depth.ok_or_else(|| bad("depth"))?);
        m.boundary = boundary.ok_or_else(|| bad("boundary"))?;
        let mut count = 0;
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(bad("entry line"));
            }
            let i: usize = parts[0].parse().map_err(|_| bad("row"))?;
            let j: usize = parts[1].parse().map_err(|_| bad("column"))?;
            if i == 0 || j == 0 || i > m.dim || j > m.dim {
                return Err(bad("index out of range"));
            }
            m.set(i - 1, j - 1, parse_rational(parts[2])?);
            count += 1;
        }
        if count != dims[2] {
            return Err(bad("entry count"));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::operators::{apply_d, TreeFunction};

    fn prime(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn worked_example() {
        let a = truncated_matrix::<Rational>(OperatorId::D0StarD0, prime(2), 3).unwrap();
        let expected = [[1, -1, 0], [-1, 5, -4], [0, -4, 20]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(*a.get(i, j), rat(expected[i][j], 1));
            }
        }
        assert!(a.is_symmetric());
        assert!(a.is_tridiagonal());
    }

    #[test]
    fn entries_follow_the_three_term_form() {
        for p in [2u64, 3, 5] {
            let a = truncated_matrix::<Rational>(OperatorId::D0StarD0, prime(p), 8).unwrap();
            assert_eq!(*a.get(0, 0), rat(1, 1));
            for n in 1..8usize {
                let p2n = (p as i64).pow(2 * n as u32);
                assert_eq!(*a.get(n, n), rat(p2n + p2n / (p * p) as i64, 1));
                assert_eq!(*a.get(n - 1, n), rat(-p2n / (p * p) as i64, 1));
            }
        }
    }

    #[test]
    fn composition_and_adjoint() {
        let p = prime(3);
        let d0 = truncated_matrix::<Rational>(OperatorId::D0, p, 6).unwrap();
        let star = truncated_matrix::<Rational>(OperatorId::D0Star, p, 6).unwrap();
        let a = truncated_matrix::<Rational>(OperatorId::D0StarD0, p, 6).unwrap();
        assert_eq!(star.matmul(&d0).unwrap().entries, a.entries);
        assert_eq!(star.entries, d0.transpose().entries);
    }

    #[test]
    fn tree_matrix_matches_operator_action() {
        let p = prime(2);
        let depth = 3;
        let m = truncated_matrix::<Rational>(OperatorId::TreeD, p, depth).unwrap();
        assert_eq!(m.dim, 15);
        let f = TreeFunction::<Rational>::delta(p, depth, 2, 3).unwrap();
        let col: Vec<Rational> = f.levels.iter().flatten().cloned().collect();
        let via_matrix = m.apply(&col);
        let direct: Vec<Rational> = apply_d(&f).levels.into_iter().flatten().collect();
        assert_eq!(via_matrix, direct);
    }

    #[test]
    fn symmetrized_form_is_similar_to_weighted_product() {
        let p = prime(2);
        let exact = truncated_matrix::<Rational>(OperatorId::TreeDStarD, p, 3).unwrap();
        let sym = symmetrized_tree_dstar_d::<f64>(p, 3).unwrap();
        assert!(!exact.is_symmetric());
        let t_exact = crate::exactnum::rational_to_f64(&exact.trace());
        assert!((t_exact - sym.trace()).abs() < 1e-9 * t_exact);
        let sq = exact.matmul(&exact).unwrap().trace();
        let sq_sym = sym.matmul(&sym).unwrap().trace();
        let sq = crate::exactnum::rational_to_f64(&sq);
        assert!((sq - sq_sym).abs() < 1e-9 * sq);
        for i in 0..sym.dim {
            for j in 0..i {
                assert!((sym.get(i, j) - sym.get(j, i)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dense_limit_guard() {
        let err = truncated_matrix::<Rational>(OperatorId::TreeD, prime(5), 7).unwrap_err();
        assert!(matches!(err, Error::DimensionLimit { .. }));
        assert!(truncated_matrix::<Rational>(OperatorId::D0, prime(2), 0).is_err());
    }

    #[test]
    fn text_round_trip() {
        let a = truncated_matrix::<Rational>(OperatorId::TreeDStarD, prime(3), 2).unwrap();
        let text = a.to_text();
        assert!(text.starts_with("%%padic-matrix tree_dstar_d p=3 depth=2 boundary=dirichlet"));
        assert_eq!(TruncMatrix::from_text(&text).unwrap(), a);
        assert!(TruncMatrix::from_text("garbage").is_err());
    }
}
