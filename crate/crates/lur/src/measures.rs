//! Reference entanglement measure for two-qubit states.


use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix, DensityMatrix};
use crate::operators::pauli_matrices;
use crate::tolerance::Tolerances;

/// Eigenvalues this close to zero are rounding debris of an exactly
/// rank-deficient state; square roots would amplify them to ~1e-8.
const RANK_FLOOR: f64 = 1e-12;

fn matrix_sqrt_psd(m: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(m, tol)?;
    let n = m.rows();
    let roots: Vec<f64> = eig
        .values
        .iter()
        .map(|&l| if l <= RANK_FLOOR { 0.0 } else { l.sqrt() })
        .collect();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| eig.vectors[(i, k)] * roots[k] * eig.vectors[(j, k)].conj())
            .sum()
    }))
}

/// Wootters concurrence of a two-qubit density matrix.
///
/// Uses the spin-flipped state ρ̃ = (σy⊗σy)ρ*(σy⊗σy) and
/// C = max{0, √λ₁ − √λ₂ − √λ₃ − √λ₄} with λᵢ the descending eigenvalues of
/// ρρ̃. The non-Hermitian product is avoided through the equivalent Hermitian
/// form: the √λᵢ are the singular values of √ρ̃·√ρ (whose Gram matrix is
/// √ρ·ρ̃·√ρ), read off the Hermitian dilation [[0, M], [M†, 0]]. Going
/// through singular values rather than λᵢ keeps the error at machine scale
/// instead of √ε.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimMismatch {
            context: "concurrence is defined for two qubits",
            got: rho.dim(),
            expected: 4,
        });
    }
    let tol = Tolerances::default();
    let (_, sy, _) = pauli_matrices();
    let flip = sy.kron(&sy);
    let rho_tilde = &(&flip * &rho.matrix().conj()) * &flip;

    let sqrt_rho = matrix_sqrt_psd(rho.matrix(), &tol)?;
    let sqrt_tilde = matrix_sqrt_psd(&rho_tilde, &tol)?;
    let m = &sqrt_tilde * &sqrt_rho;

    // Hermitian dilation: eigenvalues come in ±σ pairs.
    let dilation = ComplexMatrix::from_fn(8, 8, |i, j| {
        if i < 4 && j >= 4 {
            m[(i, j - 4)]
        } else if i >= 4 && j < 4 {
            m[(j, i - 4)].conj()
        } else {
            num_complex::Complex64::ZERO
        }
    });
    let sigmas = eig_hermitian(&dilation, &tol)?.values;

    let c = 2.0 * sigmas[0] - sigmas[..4].iter().sum::<f64>();
    Ok(c.clamp(0.0, 1.0))
}

/// Closed form for Werner states: C = max{(3p_s − 1)/2, 0}.
pub fn werner_concurrence(p_s: f64) -> f64 {
    ((3.0 * p_s - 1.0) / 2.0).max(0.0)
}
