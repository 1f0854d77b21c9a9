//! Dense complex matrix arithmetic and Hermitian spectral routines for the
//! small dimensions this crate works with.

mod eig;
mod matrix;
mod state;

pub use eig::{eig_hermitian, Eigensystem};
pub use matrix::{fix_global_phase, inner, kron_vec, vec_norm, ComplexMatrix};
pub use state::{expectation, DensityMatrix, PureState};

/// Kronecker product of two matrices, left factor major.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Conjugate transpose.
pub fn adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}
