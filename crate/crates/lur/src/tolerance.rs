//! Centralized numerical tolerances.
//!
//! Every validating constructor takes a [`Tolerances`] record so that a single
//! configuration governs all invariant checks. The defaults below are used by
//! the plain constructors (`PureState::new`, `DensityMatrix::new`, ...).

/// Numerical tolerances for validation and self-checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    /// Pure-state norm deviation: |‖ψ‖ − 1| must stay below this.
    pub norm: f64,
    /// Hermiticity: max elementwise |M − M†| allowed.
    pub hermiticity: f64,
    /// Density-matrix trace deviation from one.
    pub trace: f64,
    /// Positive semidefiniteness slack: eigenvalues may dip to −psd.
    pub psd: f64,
    /// Eigendecomposition reconstruction residual ‖M − VΛV†‖_max.
    pub eig_residual: f64,
    /// Variances this far below zero are clamped to zero; anything more
    /// negative is treated as an internal error instead of rounding noise.
    pub variance_floor: f64,
    /// Expectation values must be real up to this imaginary part.
    pub expectation_imag: f64,
    /// Verdict margin: a state is judged Entangled only when the LUR total
    /// falls below the bound by more than this.
    pub judge: f64,
    /// Matching window between dataset outcome values and operator spectra.
    pub spectrum_match: f64,
    /// Allowed deviation of per-setting probabilities from summing to one.
    pub probability_sum: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            norm: 1e-12,
            hermiticity: 1e-10,
            trace: 1e-10,
            psd: 1e-9,
            eig_residual: 1e-9,
            variance_floor: 1e-12,
            expectation_imag: 1e-10,
            judge: 1e-9,
            spectrum_match: 1e-9,
            probability_sum: 1e-6,
        }
    }
}
