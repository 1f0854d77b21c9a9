//! Validated quantum-state representations.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

use super::eig::eig_hermitian;
use super::matrix::{inner, kron_vec, vec_norm, ComplexMatrix};

/// Normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Validate and wrap a state vector using the default tolerances.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerances(amplitudes, &Tolerances::default())
    }

    /// Validate the norm against an explicit tolerance record.
    pub fn with_tolerances(amplitudes: Vec<Complex64>, tol: &Tolerances) -> Result<Self> {
        let deviation = (vec_norm(&amplitudes) - 1.0).abs();
        if !deviation.is_finite() || deviation > tol.norm {
            return Err(Error::NotNormalized {
                deviation,
                tolerance: tol.norm,
            });
        }
        Ok(Self { amplitudes })
    }

    /// Rescale an arbitrary nonzero vector to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = vec_norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized {
                deviation: f64::INFINITY,
                tolerance: 0.0,
            });
        }
        for z in &mut amplitudes {
            *z /= n;
        }
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Projector |ψ⟩⟨ψ| as a density matrix.
    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: ComplexMatrix::outer(&self.amplitudes, &self.amplitudes),
        }
    }

    /// Tensor product |self⟩⊗|other⟩ (left factor major).
    pub fn tensor(&self, other: &PureState) -> PureState {
        PureState {
            amplitudes: kron_vec(&self.amplitudes, &other.amplitudes),
        }
    }

    /// ⟨ψ|A|ψ⟩ for Hermitian `a`; the tiny imaginary part is discarded.
    pub fn expectation(&self, a: &ComplexMatrix) -> f64 {
        inner(&self.amplitudes, &a.apply(&self.amplitudes)).re
    }
}

/// Trace-one positive-semidefinite Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validate Hermiticity, unit trace and positivity with default tolerances.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerances(matrix, &Tolerances::default())
    }

    /// Validate against an explicit tolerance record.
    pub fn with_tolerances(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimMismatch {
                context: "density matrix must be square",
                got: matrix.cols(),
                expected: matrix.rows(),
            });
        }
        let herm = matrix.hermiticity_error();
        if herm > tol.hermiticity {
            return Err(Error::NotHermitian {
                max_deviation: herm,
                tolerance: tol.hermiticity,
            });
        }
        let tr = matrix.trace();
        let tr_dev = (tr - Complex64::ONE).norm();
        if tr_dev > tol.trace {
            return Err(Error::TraceNotOne {
                deviation: tr_dev,
                tolerance: tol.trace,
            });
        }
        let eig = eig_hermitian(&matrix, tol)?;
        let smallest = *eig.values.last().expect("non-empty spectrum");
        if smallest < -tol.psd {
            return Err(Error::NotPositive {
                eigenvalue: smallest,
                tolerance: tol.psd,
            });
        }
        Ok(Self { matrix })
    }

    /// Maximally mixed state I/n.
    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(n).scale(Complex64::new(1.0 / n as f64, 0.0)),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

impl From<&PureState> for DensityMatrix {
    fn from(psi: &PureState) -> Self {
        psi.to_density()
    }
}

/// tr{ρA} for Hermitian `a`. The imaginary part is asserted negligible and
/// discarded.
pub fn expectation(rho: &DensityMatrix, a: &ComplexMatrix) -> Result<f64> {
    if a.rows() != rho.dim() || a.cols() != rho.dim() {
        return Err(Error::DimMismatch {
            context: "expectation operator vs state",
            got: a.rows(),
            expected: rho.dim(),
        });
    }
    let val = rho.matrix().trace_product(a);
    assert!(
        val.im.abs() <= Tolerances::default().expectation_imag,
        "expectation of a Hermitian operator came out complex: {val}"
    );
    Ok(val.re)
}
