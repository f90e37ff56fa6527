//! Eigenvalues of `D₀*D₀` as certified roots of the characteristic series,
//! their eigenvectors, and the spectrum of `D*D` with multiplicities.

mod eigenvector;
mod full;
mod roots;

pub use eigenvector::{
    check_c2_identity, coefficient_closed_form, eigen_residual, eigenvector_coefficients,
    empirical_remainder, neve_form, remainder_bound, synthesize_eigenvector, EigenResidual,
    EigenvectorExpansion, SynthesizedVector,
};
pub use full::{dstar_d_spectrum, SpectrumEntry};
pub use roots::{
    achieved_digits, bracket_eigenvalue, bracket_with_ceiling, eigenvalue_table, refine_eigenvalue,
    scan_bracket, transported_bracket, EigenvalueRecord, EigenvalueTable, SignEvidence,
    DEFAULT_SCAN_CEILING,
};
