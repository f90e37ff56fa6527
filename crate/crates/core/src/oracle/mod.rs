//! Brute-force ground truth from truncated matrices: exact Sturm bisection
//! for the half-line operator, dense Householder reduction with bisection for
//! the tree operator, and cyclic Jacobi as a second dense solver.

mod householder;
mod jacobi;
mod sturm;

pub use householder::{householder_eigenvalues, tridiagonalize};
pub use jacobi::{jacobi_eigenvalues, DEFAULT_MAX_SWEEPS};
pub use sturm::{sturm_count, tridiag_eigenvalues, tridiag_inverse_trace, IntTridiagonal};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{rational_from_f64, rational_to_f64, ErrorBounded};
use crate::operators::{symmetrized_tree_dstar_d, truncated_matrix, OperatorId};
use crate::spectrum::{refine_eigenvalue, EigenvalueRecord};
use crate::tree::{fiber_multiplicity, Prime};
use crate::Rational;

/// Default relative tolerance for grouping eigenvalues into clusters.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;

/// Digits used for Sturm enclosures.
pub const ORACLE_DIGITS: u32 = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub index: u32,
    pub certified: Rational,
    pub oracle: Rational,
    pub relative_deviation: f64,
}

/// A run of eigenvalues whose consecutive relative gaps are within tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub center: f64,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub operator: OperatorId,
    pub p: u64,
    pub truncation: u32,
    /// Ascending.
    pub eigenvalues: Vec<ErrorBounded<Rational>>,
    pub comparisons: Vec<Comparison>,
    pub max_relative_deviation: f64,
    pub clusters: Vec<Cluster>,
}

/// Pass/fail summary of [`compare`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareSummary {
    pub deviations: Vec<f64>,
    pub max_deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

fn relative(a: &Rational, b: &Rational) -> f64 {
    if b.is_zero() {
        return if a.is_zero() { 0.0 } else { f64::INFINITY };
    }
    rational_to_f64(&((a - b) / b).abs())
}

/// Relative deviation of each oracle eigenvalue from the certified midpoint.
pub fn compare(
    certified: &[EigenvalueRecord],
    oracle: &OracleReport,
    tol: f64,
) -> Result<CompareSummary> {
    if certified.iter().any(|r| r.p != oracle.p) {
        return Err(Error::InvalidParameter(
            "prime mismatch between inputs".into(),
        ));
    }
    let mut deviations = Vec::with_capacity(certified.len());
    for rec in certified {
        let ev = oracle
            .eigenvalues
            .get(rec.index as usize - 1)
            .ok_or_else(|| {
                Error::InvalidParameter(format!("oracle has no eigenvalue {}", rec.index))
            })?;
        deviations.push(relative(&ev.center, &rec.midpoint()));
    }
    let max_deviation = deviations.iter().cloned().fold(0.0, f64::max);
    Ok(CompareSummary {
        pass: max_deviation <= tol,
        deviations,
        max_deviation,
        tol,
    })
}

/// Sturm eigenvalues of the size-`n` truncation of `D₀*D₀`, compared with
/// certified roots `λ_1..λ_count`.
pub fn truncated_d0_spectrum(p: Prime, n: u32, count: u32) -> Result<OracleReport> {
    if n < count + 10 {
        return Err(Error::InvalidParameter(format!(
            "truncation {n} too small for {count} eigenvalues (need at least count + 10)"
        )));
    }
    let m = truncated_matrix::<Rational>(OperatorId::D0StarD0, p, n)?;
    let eigenvalues = tridiag_eigenvalues(&m, count as usize, ORACLE_DIGITS)?;
    let mut comparisons = Vec::new();
    for (i, ev) in eigenvalues.iter().enumerate() {
        let rec = refine_eigenvalue(p, i as u32 + 1, ORACLE_DIGITS)?;
        let certified = rec.midpoint();
        comparisons.push(Comparison {
            index: i as u32 + 1,
            relative_deviation: relative(&ev.center, &certified),
            certified,
            oracle: ev.center.clone(),
        });
    }
    let max_relative_deviation = comparisons
        .iter()
        .map(|c| c.relative_deviation)
        .fold(0.0, f64::max);
    Ok(OracleReport {
        operator: OperatorId::D0StarD0,
        p: p.get(),
        truncation: n,
        eigenvalues,
        comparisons,
        max_relative_deviation,
        clusters: Vec::new(),
    })
}

/// Groups sorted values whose consecutive relative gap is at most `tol`.
pub fn cluster_values(sorted: &[f64], tol: f64) -> Vec<Cluster> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for &x in sorted {
        match out.last_mut() {
            Some(run) if (x - run[run.len() - 1]).abs() <= tol * x.abs().max(f64::MIN_POSITIVE) => {
                run.push(x)
            }
            _ => out.push(vec![x]),
        }
    }
    out.into_iter()
        .map(|run| Cluster {
            center: run.iter().sum::<f64>() / run.len() as f64,
            lo: run[0],
            hi: run[run.len() - 1],
            count: run.len(),
        })
        .collect()
}

/// Dense eigensolve of the depth-`depth` symmetrized tree `D*D`, clustered.
pub fn truncated_tree_spectrum(p: Prime, depth: u32, cluster_tol: f64) -> Result<OracleReport> {
    let m = symmetrized_tree_dstar_d::<f64>(p, depth)?;
    let eig = householder_eigenvalues(&m)?;
    // reflection roundoff: a few ulps of the Frobenius norm per eigenvalue
    let slack = 64.0 * f64::EPSILON * m.frobenius_sq().sqrt();
    let slack_q = rational_from_f64(slack).unwrap_or_default();
    let eigenvalues = eig
        .iter()
        .map(|&x| ErrorBounded::new(rational_from_f64(x).unwrap_or_default(), slack_q.clone()))
        .collect();
    Ok(OracleReport {
        operator: OperatorId::TreeDStarDSym,
        p: p.get(),
        truncation: depth,
        eigenvalues,
        comparisons: Vec::new(),
        max_relative_deviation: 0.0,
        clusters: cluster_values(&eig, cluster_tol),
    })
}

/// Eigenvalue of the depth-`depth` tree truncation predicted by its fiber
/// structure: the fiber with denominator `pᵐ` carries `p^{2m}` times the
/// size-`(depth + 1 - m)` half-line truncation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberPrediction {
    pub m: u32,
    pub n: u32,
    pub value: ErrorBounded<Rational>,
    pub multiplicity: u64,
}

pub fn fiber_predictions(
    p: Prime,
    depth: u32,
    max_m: u32,
    max_n: u32,
) -> Result<Vec<FiberPrediction>> {
    let mut out = Vec::new();
    for m in 0..=max_m.min(depth) {
        let size = depth + 1 - m;
        let a = truncated_matrix::<Rational>(OperatorId::D0StarD0, p, size)?;
        let ev = tridiag_eigenvalues(&a, max_n as usize, ORACLE_DIGITS)?;
        let scale = crate::scalar::int_pow::<Rational>(p.get(), 2 * m);
        for (i, e) in ev.into_iter().enumerate() {
            out.push(FiberPrediction {
                m,
                n: i as u32 + 1,
                value: e.scale(&scale),
                multiplicity: fiber_multiplicity(p, m),
            });
        }
    }
    Ok(out)
}

/// Tr(Mᵏ), k = 1..=powers, of the exact weighted `D*D`, against the power sums
/// of the symmetrized spectrum; returns the largest relative difference.
pub fn weight_convention_gap(p: Prime, depth: u32, powers: u32) -> Result<f64> {
    let exact = truncated_matrix::<Rational>(OperatorId::TreeDStarD, p, depth)?;
    let sym = symmetrized_tree_dstar_d::<f64>(p, depth)?;
    let eig = jacobi_eigenvalues(&sym, DEFAULT_MAX_SWEEPS)?;
    let mut power = exact.clone();
    let mut worst: f64 = 0.0;
    for k in 1..=powers {
        if k > 1 {
            power = power.matmul(&exact)?;
        }
        let tr = rational_to_f64(&power.trace());
        let sum: f64 = eig.iter().map(|x| x.powi(k as i32)).sum();
        worst = worst.max(((tr - sum) / tr).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn prime(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn d0_oracle_agrees_with_certified_roots() {
        let rep = truncated_d0_spectrum(prime(2), 60, 5).unwrap();
        assert!(
            rep.max_relative_deviation <= 1e-10,
            "{}",
            rep.max_relative_deviation
        );
        let rep3 = truncated_d0_spectrum(prime(3), 40, 4).unwrap();
        assert!(rep3.max_relative_deviation <= 1e-10);
        assert!(truncated_d0_spectrum(prime(2), 12, 5).is_err());
    }

    #[test]
    fn truncation_sweep_converges_monotonically() {
        let p = prime(2);
        let lam = refine_eigenvalue(p, 1, 30).unwrap().midpoint();
        let mut last = f64::INFINITY;
        for n in [4u32, 6, 8, 10, 12] {
            let a = truncated_matrix::<Rational>(OperatorId::D0StarD0, p, n).unwrap();
            let ev = tridiag_eigenvalues(&a, 1, 30).unwrap();
            let dev = relative(&ev[0].center, &lam);
            assert!(dev < last, "n={n}");
            last = dev;
        }
    }

    #[test]
    fn compare_detects_perturbations() {
        let p = prime(2);
        let rep = truncated_d0_spectrum(p, 30, 3).unwrap();
        let recs: Vec<_> = (1..=3)
            .map(|n| refine_eigenvalue(p, n, ORACLE_DIGITS).unwrap())
            .collect();
        assert!(compare(&recs, &rep, 1e-8).unwrap().pass);
        let mut bad = recs.clone();
        let bump = rat(10_001, 10_000);
        bad[0].lo *= &bump;
        bad[0].hi *= &bump;
        let s = compare(&bad, &rep, 1e-8).unwrap();
        assert!(!s.pass);
        assert!(s.deviations[0] > 9e-5);
        // identical inputs
        let mut same = rep.clone();
        same.eigenvalues = recs
            .iter()
            .map(|r| ErrorBounded::exact(r.midpoint()))
            .collect();
        assert_eq!(compare(&recs, &same, 0.0).unwrap().max_deviation, 0.0);
    }

    #[test]
    fn tree_spectrum_matches_fiber_structure() {
        let p = prime(2);
        let depth = 4;
        let rep = truncated_tree_spectrum(p, depth, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(rep.eigenvalues.len(), 31);
        let preds = fiber_predictions(p, depth, depth, depth + 1).unwrap();
        let total: u64 = preds.iter().map(|f| f.multiplicity).sum();
        assert_eq!(total, 31);
        let eig: Vec<f64> = rep
            .eigenvalues
            .iter()
            .map(|e| rational_to_f64(&e.center))
            .collect();
        for f in &preds {
            let v = rational_to_f64(&f.value.center);
            let hits = eig.iter().filter(|&&x| ((x - v) / v).abs() < 1e-9).count();
            assert!(hits as u64 >= f.multiplicity, "m={} n={}", f.m, f.n);
        }
    }

    #[test]
    fn weight_conventions_agree() {
        assert!(weight_convention_gap(prime(3), 2, 3).unwrap() < 1e-10);
    }

    #[test]
    fn clustering() {
        let c = cluster_values(&[1.0, 1.0 + 1e-9, 2.0, 4.0, 4.0, 4.0], 1e-6);
        let counts: Vec<usize> = c.iter().map(|c| c.count).collect();
        assert_eq!(counts, vec![2, 1, 3]);
    }

    #[test]
    fn inverse_trace_tracks_reciprocal_sum() {
        let p = prime(2);
        let a = truncated_matrix::<Rational>(OperatorId::D0StarD0, p, 40).unwrap();
        let tr = rational_to_f64(&tridiag_inverse_trace(&a).unwrap());
        let ev = tridiag_eigenvalues(&a, 40, 20).unwrap();
        let s: f64 = ev.iter().map(|e| 1.0 / rational_to_f64(&e.center)).sum();
        assert!((tr - s).abs() < 1e-12 * tr);
    }
}
