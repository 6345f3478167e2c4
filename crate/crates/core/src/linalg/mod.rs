//! Dense complex linear algebra for small quantum registers.
//!
//! Matrices here are at most a few hundred wide, so everything is plain
//! row-major `Vec` storage and `O(d^3)` algorithms.

mod eig;
mod matrix;
pub mod random;
mod states;
mod tensor;

pub use eig::{clipped_spectrum, eig_hermitian, psd_inv_sqrt, psd_sqrt, Eigen};
pub use matrix::{pauli, ComplexMatrix, C64};
pub use states::{DensityMatrix, Povm};
pub use tensor::{kron, kron_vec, partial_trace, purify, PureStateVector};

pub(crate) use matrix::c;

/// Entrywise complex conjugation in the standard basis.
pub fn conjugate_std(m: &ComplexMatrix) -> ComplexMatrix {
    m.conj()
}
