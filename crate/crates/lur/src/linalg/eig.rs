//! Hermitian eigendecomposition by cyclic Jacobi rotations.
//!
//! The matrices in this crate are tiny (a handful of levels per subsystem),
//! so a quadratically convergent, unconditionally stable Jacobi sweep beats
//! pulling in a full LAPACK binding. The rotations are the complex analogue
//! of the classic symmetric scheme: each sweep annihilates every off-diagonal
//! element once with a unitary plane rotation whose phase absorbs the
//! argument of the pivot entry.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

use super::matrix::ComplexMatrix;

const MAX_SWEEPS: usize = 100;

/// Result of a Hermitian eigendecomposition: `values` descending,
/// `vectors` holding the matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl Eigensystem {
    /// Column `k` as an owned vector.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.rows()).map(|i| self.vectors[(i, k)]).collect()
    }

    /// VΛV† reassembled from the decomposition.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.values[k] * self.vectors[(j, k)].conj())
                .sum()
        })
    }
}

/// Eigendecompose a Hermitian matrix. Eigenvalues are sorted descending with
/// a stable index tie-break; within a degenerate cluster the eigenvectors
/// only promise to span the eigenspace.
pub fn eig_hermitian(m: &ComplexMatrix, tol: &Tolerances) -> Result<Eigensystem> {
    if !m.is_square() {
        return Err(Error::DimMismatch {
            context: "eig_hermitian requires a square matrix",
            got: m.cols(),
            expected: m.rows(),
        });
    }
    let dev = m.hermiticity_error();
    if dev > tol.hermiticity {
        return Err(Error::NotHermitian {
            max_deviation: dev,
            tolerance: tol.hermiticity,
        });
    }

    let n = m.rows();
    // Work on the exactly Hermitian part; the asymmetry is within tolerance.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(m[(i, i)].re, 0.0)
        } else {
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        }
    });
    let mut v = ComplexMatrix::identity(n);

    let scale = a.max_abs().max(1e-300);
    let stop = 1e-15 * scale;

    for _sweep in 0..MAX_SWEEPS {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= stop {
            return finish(m, a, v, tol);
        }

        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let h = a[(p, q)];
                let habs = h.norm();
                if habs <= stop * 1e-2 {
                    a[(p, q)] = Complex64::ZERO;
                    a[(q, p)] = Complex64::ZERO;
                    continue;
                }

                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * habs);
                // Smaller-magnitude root of t² − 2θt − 1 = 0.
                let t = if theta >= 0.0 {
                    -1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sigma = t * c;
                // Plane rotation with the pivot's phase folded in:
                // columns (p, q) mixed by [[c, -conj(s)], [s, c]], s = σ·h̄/|h|.
                let s = Complex64::new(sigma, 0.0) * (h.conj() / habs);

                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let mkp = a[(k, p)];
                    let mkq = a[(k, q)];
                    a[(k, p)] = mkp * c + mkq * s;
                    a[(k, q)] = mkq * c - mkp * s.conj();
                    a[(p, k)] = a[(k, p)].conj();
                    a[(q, k)] = a[(k, q)].conj();
                }
                a[(p, p)] = Complex64::new(app * c * c + aqq * sigma * sigma + 2.0 * c * sigma * habs, 0.0);
                a[(q, q)] = Complex64::new(app * sigma * sigma + aqq * c * c - 2.0 * c * sigma * habs, 0.0);
                a[(p, q)] = Complex64::ZERO;
                a[(q, p)] = Complex64::ZERO;

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * s;
                    v[(k, q)] = vkq * c - vkp * s.conj();
                }
            }
        }
    }

    Err(Error::Internal(format!(
        "Jacobi eigensolver failed to converge in {MAX_SWEEPS} sweeps (dim {n})"
    )))
}

fn finish(
    original: &ComplexMatrix,
    a: ComplexMatrix,
    v: ComplexMatrix,
    tol: &Tolerances,
) -> Result<Eigensystem> {
    let n = a.rows();
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).expect("finite eigenvalues"));

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    let sys = Eigensystem { values, vectors };

    let residual = sys.reconstruct().max_abs_diff(original);
    if residual > tol.eig_residual {
        return Err(Error::Internal(format!(
            "eigendecomposition residual {residual:.3e} exceeds {:.3e}",
            tol.eig_residual
        )));
    }
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pauli_x_spectrum() {
        let sx = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ]);
        let eig = eig_hermitian(&sx, &Tolerances::default()).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-12);
        assert!((eig.values[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_spectrum_is_all_ones() {
        let eig = eig_hermitian(&ComplexMatrix::identity(3), &Tolerances::default()).unwrap();
        for v in eig.values {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_non_hermitian_input() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ]);
        let err = eig_hermitian(&m, &Tolerances::default()).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn eigenvectors_are_orthonormal_and_reconstruct() {
        // A genuinely complex Hermitian matrix with degenerate-ish spectrum.
        let m = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.5, 0.3), c(0.0, -1.0)],
            vec![c(0.5, -0.3), c(1.0, 0.0), c(0.2, 0.0)],
            vec![c(0.0, 1.0), c(0.2, 0.0), c(2.0, 0.0)],
        ]);
        let eig = eig_hermitian(&m, &Tolerances::default()).unwrap();
        let v = &eig.vectors;
        let gram = &v.adjoint() * v;
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
        assert!(eig.reconstruct().max_abs_diff(&m) < 1e-12);
        assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
    }
}
