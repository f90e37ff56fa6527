//! The forward derivative, its adjoint, their Fourier-side forms and the
//! half-line model operator, acting on finitely supported functions.
//!
//! Inputs are finitely supported; everything beyond the stored range is zero.
//! `D` and `D₀` never enlarge the support, while the adjoints `D*`, `D̂*`, `D₀*`
//! reach exactly one step further, so each action here is the exact action of
//! the unbounded operator on that input.

mod half_line;
mod matrix;
mod tree_ops;

pub use half_line::{apply_d0, apply_d0star, apply_d0star_d0, HalfLineSeq};
pub use matrix::{
    symmetrized_tree_dstar_d, truncated_matrix, truncated_matrix_with_limit, vertex_position,
    OperatorId, TruncMatrix, DEFAULT_DENSE_LIMIT,
};
pub use tree_ops::{
    apply_d, apply_dhat, apply_dhatstar, apply_dstar, fiber_embed, fiber_restrict, fourier_inner,
    tree_dft, tree_idft, TreeFunction,
};

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num};

/// Entry type of sequences and tree functions: a real scalar or a complex
/// number over one.
pub trait Coefficient: Clone + Debug + PartialEq + Num + FromPrimitive + Send + Sync {}

impl<V> Coefficient for V where V: Clone + Debug + PartialEq + Num + FromPrimitive + Send + Sync {}

/// `pⁿ` as a coefficient.
pub(crate) fn p_pow<V: Coefficient>(p: u64, n: u32) -> V {
    num_traits::pow(V::from_u64(p).expect("prime fits"), n as usize)
}

/// `1/p` as a coefficient.
pub(crate) fn p_inv<V: Coefficient>(p: u64) -> V {
    V::one() / V::from_u64(p).expect("prime fits")
}
