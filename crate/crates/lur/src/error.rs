//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong while building operators, validating states,
/// certifying bounds or ingesting measurement data.
#[derive(Debug, Error)]
pub enum Error {
    /// Operand dimensions do not line up.
    #[error("dimension mismatch: {context} (got {got}, expected {expected})")]
    DimMismatch {
        context: &'static str,
        got: usize,
        expected: usize,
    },

    /// A matrix that must be Hermitian is not, within the configured tolerance.
    #[error("matrix is not Hermitian: max |M - M†| element is {max_deviation:.3e} (tolerance {tolerance:.3e})")]
    NotHermitian { max_deviation: f64, tolerance: f64 },

    /// A pure-state vector is not normalized within tolerance.
    #[error("state vector is not normalized: |norm - 1| = {deviation:.3e} (tolerance {tolerance:.3e})")]
    NotNormalized { deviation: f64, tolerance: f64 },

    /// A density matrix violates the unit-trace invariant.
    #[error("density matrix trace is not one: |tr - 1| = {deviation:.3e} (tolerance {tolerance:.3e})")]
    TraceNotOne { deviation: f64, tolerance: f64 },

    /// A density matrix has an eigenvalue below the allowed negative slack.
    #[error("density matrix is not positive semidefinite: smallest eigenvalue {eigenvalue:.3e} (floor -{tolerance:.3e})")]
    NotPositive { eigenvalue: f64, tolerance: f64 },

    /// Spin quantum number is not a positive half-integer.
    #[error("invalid spin: {0} (must be a half-integer >= 1/2)")]
    InvalidSpin(f64),

    /// A scalar parameter is outside its documented range.
    #[error("invalid parameter {name}: {value} (expected {expected})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// No optimizer restart met the gradient/step tolerance.
    #[error("optimizer did not converge in any of {restarts} restarts (tolerance {tolerance:.3e})")]
    NonConvergence { restarts: usize, tolerance: f64 },

    /// Measurement data file violates the documented JSON schema.
    #[error("data schema error: {0}")]
    SchemaError(String),

    /// Per-setting weights do not form a valid distribution.
    #[error("normalization error: {0}")]
    NormalizationError(String),

    /// An outcome eigenvalue does not appear in the spectrum of the
    /// corresponding setting operator.
    #[error("spectrum mismatch: setting '{setting}' has outcome value {value} not in the operator spectrum (tolerance {tolerance:.3e})")]
    SpectrumMismatch {
        setting: String,
        value: f64,
        tolerance: f64,
    },

    /// The dataset lacks a record for a setting the relation requires.
    #[error("missing setting '{0}' in measurement dataset")]
    MissingSetting(String),

    /// A numerical self-check failed; indicates a bug rather than bad input.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
