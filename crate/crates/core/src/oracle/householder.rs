//! Dense symmetric eigenvalues by Householder reduction and Sturm bisection.

use num_traits::Float;

use super::sturm::sturm_count;
use crate::error::{Error, Result};
use crate::operators::TruncMatrix;
use crate::scalar::Scalar;

/// Householder reduction of a symmetric matrix to tridiagonal `(diag, off)`.
pub fn tridiagonalize<T: Scalar + Float>(m: &TruncMatrix<T>) -> Result<(Vec<T>, Vec<T>)> {
    let n = m.dim;
    let mut a = m.entries.clone();
    let frob = a.iter().fold(T::zero(), |acc, x| acc + *x * *x).sqrt();
    let tol = T::epsilon() * frob * T::from_u64_exact(16);
    for i in 0..n {
        for j in 0..i {
            if (a[i * n + j] - a[j * n + i]).abs() > tol {
                return Err(Error::InvalidParameter(
                    "Householder needs a symmetric matrix".into(),
                ));
            }
        }
    }
    let two = T::one() + T::one();
    let mut v = vec![T::zero(); n];
    let mut p = vec![T::zero(); n];
    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let norm = (lo..n)
            .fold(T::zero(), |acc, i| acc + a[i * n + k] * a[i * n + k])
            .sqrt();
        if norm == T::zero() {
            continue;
        }
        let x0 = a[lo * n + k];
        let alpha = if x0 > T::zero() { -norm } else { norm };
        for i in lo..n {
            v[i] = a[i * n + k];
        }
        v[lo] = v[lo] - alpha;
        let vtv = (lo..n).fold(T::zero(), |acc, i| acc + v[i] * v[i]);
        if vtv == T::zero() {
            continue;
        }
        let beta = two / vtv;
        for i in lo..n {
            let row = &a[i * n + lo..i * n + n];
            p[i] = beta
                * row
                    .iter()
                    .zip(&v[lo..n])
                    .fold(T::zero(), |acc, (x, y)| acc + *x * *y);
        }
        let kk = beta * (lo..n).fold(T::zero(), |acc, i| acc + v[i] * p[i]) / two;
        for i in lo..n {
            p[i] = p[i] - kk * v[i];
        }
        for i in lo..n {
            let (vi, pi) = (v[i], p[i]);
            for j in lo..n {
                a[i * n + j] = a[i * n + j] - vi * p[j] - pi * v[j];
            }
        }
        a[lo * n + k] = alpha;
        a[k * n + lo] = alpha;
        for i in lo + 1..n {
            a[i * n + k] = T::zero();
            a[k * n + i] = T::zero();
        }
    }
    let diag = (0..n).map(|i| a[i * n + i]).collect();
    let off = (1..n).map(|i| a[i * n + i - 1]).collect();
    Ok((diag, off))
}

/// All eigenvalues, ascending, to a few ulps of the spectral radius.
pub fn householder_eigenvalues<T: Scalar + Float>(m: &TruncMatrix<T>) -> Result<Vec<T>> {
    let (diag, off) = tridiagonalize(m)?;
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { T::zero() }
            + if i + 1 < n { off[i].abs() } else { T::zero() };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let radius = lo.abs().max(hi.abs());
    let stop = T::epsilon() * radius * T::from_u64_exact(4);
    let half = T::one() / (T::one() + T::one());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        // smallest x with more than k eigenvalues below it
        let (mut a, mut b) = (lo - stop, hi + stop);
        for _ in 0..200 {
            if b - a <= stop {
                break;
            }
            let mid = (a + b) * half;
            if sturm_count(&diag, &off, &mid) > k {
                b = mid;
            } else {
                a = mid;
            }
        }
        out.push((a + b) * half);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{symmetrized_tree_dstar_d, truncated_matrix, OperatorId};
    use crate::oracle::{jacobi_eigenvalues, DEFAULT_MAX_SWEEPS};
    use crate::tree::Prime;

    #[test]
    fn agrees_with_jacobi_on_tree() {
        for (p, depth) in [(2, 5), (3, 3)] {
            let m = symmetrized_tree_dstar_d::<f64>(Prime::new(p).unwrap(), depth).unwrap();
            let a = householder_eigenvalues(&m).unwrap();
            let b = jacobi_eigenvalues(&m, DEFAULT_MAX_SWEEPS).unwrap();
            let scale = b.last().copied().unwrap();
            assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() <= 1e-11 * scale, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn tridiagonal_input_is_kept() {
        let m = truncated_matrix::<f64>(OperatorId::D0StarD0, Prime::new(2).unwrap(), 3).unwrap();
        let eig = householder_eigenvalues(&m).unwrap();
        for x in &eig {
            let f = ((x - 26.0) * x + 108.0) * x - 64.0;
            assert!(f.abs() < 1e-9, "{x}");
        }
    }

    #[test]
    fn asymmetric_rejected() {
        let m = truncated_matrix::<f64>(OperatorId::D0, Prime::new(2).unwrap(), 3).unwrap();
        assert!(householder_eigenvalues(&m).is_err());
    }
}
