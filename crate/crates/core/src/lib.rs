//! Certified spectral computations for the forward derivative on the p-adic tree.
//!
//! The crate computes the eigenvalues of `D*D` as roots of the basic
//! hypergeometric series `₁φ₁(0; q; q, λ)` with `q = p⁻²`, certifies every
//! bracket by an exact rational sign evaluation, synthesizes eigenvectors from
//! their closed-form coefficients, assembles the full spectrum with
//! multiplicities, evaluates the associated spectral zeta functions, and checks
//! all of it against brute-force truncated-matrix eigensolvers.
//!
//! Algorithms are generic over [`Scalar`]; the aliases below pick the exact
//! rational instantiation used for certification and the `f64` one used for
//! quick numerics.

pub mod error;
pub mod exactnum;
pub mod operators;
pub mod oracle;
pub mod scalar;
pub mod spectrum;
pub mod tree;
pub mod zeta;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Arbitrary-precision exact rational, always in lowest terms.
pub type Rational = num_rational::BigRational;

/// Exact enclosure of a real number.
pub type Enclosure = exactnum::ErrorBounded<Rational>;

/// Half-line sequences with exact and floating entries.
pub type HalfLineSeqQ = operators::HalfLineSeq<Rational>;
pub type HalfLineSeqF = operators::HalfLineSeq<f64>;

/// Tree functions with exact and floating entries.
pub type TreeFunctionQ = operators::TreeFunction<Rational>;
pub type TreeFunctionF = operators::TreeFunction<f64>;

/// Truncated operator matrices with exact and floating entries.
pub type TruncMatrixQ = operators::TruncMatrix<Rational>;
pub type TruncMatrixF = operators::TruncMatrix<f64>;
