use num_traits::Float;

use crate::error::{Error, Result};
use crate::operators::TruncMatrix;
use crate::scalar::Scalar;

pub const DEFAULT_MAX_SWEEPS: usize = 60;

/// All eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations,
/// ascending.
pub fn jacobi_eigenvalues<T: Scalar + Float>(
    m: &TruncMatrix<T>,
    max_sweeps: usize,
) -> Result<Vec<T>> {
    let n = m.dim;
    let mut a = m.entries.clone();
    let frob: T = a.iter().fold(T::zero(), |acc, x| acc + *x * *x);
    for i in 0..n {
        for j in 0..i {
            let (x, y) = (a[i * n + j], a[j * n + i]);
            if Float::abs(x - y) > T::epsilon() * Float::sqrt(frob) * T::from_u64_exact(16) {
                return Err(Error::InvalidParameter(
                    "Jacobi needs a symmetric matrix".into(),
                ));
            }
        }
    }
    let target = T::epsilon() * T::epsilon() * frob;
    for _ in 0..max_sweeps {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(T::zero(), |acc, (i, j)| acc + a[i * n + j] * a[i * n + j]);
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let two = T::one() + T::one();
                let theta = (aqq - app) / (two * apq);
                let t = Float::signum(theta)
                    / (Float::abs(theta) + Float::sqrt(theta * theta + T::one()));
                let t = if theta == T::zero() { T::one() } else { t };
                let c = T::one() / Float::sqrt(t * t + T::one());
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<T> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{symmetrized_tree_dstar_d, truncated_matrix, OperatorId};
    use crate::tree::Prime;

    #[test]
    fn small_symmetric_matrix() {
        let m = truncated_matrix::<f64>(OperatorId::D0StarD0, Prime::new(2).unwrap(), 3).unwrap();
        let eig = jacobi_eigenvalues(&m, DEFAULT_MAX_SWEEPS).unwrap();
        // roots of x³ - 26x² + 108x - 64
        for x in &eig {
            let f = ((x - 26.0) * x + 108.0) * x - 64.0;
            assert!(f.abs() < 1e-9, "{x}");
        }
        assert!((eig.iter().sum::<f64>() - 26.0).abs() < 1e-12);
    }

    #[test]
    fn trace_and_frobenius_are_preserved() {
        let m = symmetrized_tree_dstar_d::<f64>(Prime::new(2).unwrap(), 4).unwrap();
        let eig = jacobi_eigenvalues(&m, DEFAULT_MAX_SWEEPS).unwrap();
        let tr = m.trace();
        assert!((eig.iter().sum::<f64>() - tr).abs() < 1e-10 * tr);
        let fro = m.frobenius_sq();
        assert!((eig.iter().map(|x| x * x).sum::<f64>() - fro).abs() < 1e-10 * fro);
        assert!(eig.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn f32_instantiation() {
        let m = truncated_matrix::<f32>(OperatorId::D0StarD0, Prime::new(2).unwrap(), 3).unwrap();
        let eig = jacobi_eigenvalues(&m, DEFAULT_MAX_SWEEPS).unwrap();
        assert!((eig[0] - 0.711).abs() < 1e-3);
    }

    #[test]
    fn asymmetric_rejected() {
        let m = truncated_matrix::<f64>(OperatorId::D0, Prime::new(2).unwrap(), 3).unwrap();
        assert!(jacobi_eigenvalues(&m, DEFAULT_MAX_SWEEPS).is_err());
    }
}
