//! Entanglement detection through local uncertainty relations.
//!
//! A bipartite state is separable only if the joint properties Aᵢ+Bᵢ carry at
//! least as much total uncertainty as the local relations Σᵢ δAᵢ² ≥ U_A and
//! Σᵢ δBᵢ² ≥ U_B allow. Measuring less noise than U_A + U_B therefore proves
//! entanglement from a handful of local measurement settings, with no state
//! tomography anywhere.
//!
//! The crate provides:
//! - spin-l and Pauli observables with the algebraic identities they obey
//!   ([`operators`]);
//! - state factories (singlet, maximally entangled, Werner, a spin-1 noise
//!   model) and seeded random samplers ([`states`]);
//! - sum-uncertainty evaluation, the analytic bound registry, and numerical
//!   bound certification by multi-start descent over pure states
//!   ([`uncertainty`]);
//! - construction and evaluation of local uncertainty relations, the relative
//!   violation C_LUR, and product-state minimization ([`relations`]);
//! - Wootters concurrence for two qubits as the reference measure
//!   ([`measures`]);
//! - a measurement-data format with empirical evaluation and simulation
//!   ([`ingest`]).
//!
//! ```
//! use lur::{evaluate, BoundKind, LurSpec, Verdict};
//! use lur::states::{werner, WernerParams};
//!
//! let spec = LurSpec::builtin(BoundKind::Pauli3);
//! let noisy_singlet = werner(WernerParams::new(0.8)?);
//! let report = evaluate(&noisy_singlet, &spec)?;
//! assert_eq!(report.verdict, Verdict::Entangled);
//! assert!((report.c_lur - 0.7).abs() < 1e-12);
//! # Ok::<(), lur::Error>(())
//! ```

pub mod error;
pub mod format;
pub mod ingest;
pub mod linalg;
pub mod measures;
pub mod operators;
pub mod relations;
pub mod states;
pub mod tolerance;
pub mod uncertainty;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, DensityMatrix, PureState};
pub use operators::{ObservableSet, Spin};
pub use relations::{
    evaluate, joint_operator, min_over_product_states, werner_sweep, LurReport, LurSpec, Verdict,
};
pub use tolerance::Tolerances;
pub use uncertainty::{
    analytic_bound, minimize_sum_uncertainty, sum_uncertainty, variance, BoundKind,
    MinimizeOptions, UncertaintyBound,
};

/// The guide chapters under `book/` compile and run as doc-tests, so the
/// narrative cannot drift from the library.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/uncertainty-bounds.md")]
    mod uncertainty_bounds {}
    #[doc = include_str!("../../../book/src/local-uncertainty-relations.md")]
    mod local_uncertainty_relations {}
    #[doc = include_str!("../../../book/src/werner-and-concurrence.md")]
    mod werner_and_concurrence {}
    #[doc = include_str!("../../../book/src/measurement-data.md")]
    mod measurement_data {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
