//! Variances, sum uncertainties, the analytic bound registry, and numerical
//! certification of bounds by minimization over pure states.
//!
//! Minimizing over pure states is enough: the variance of a mixture is never
//! smaller than the averaged variances of its components, so no mixed state
//! can undercut the best pure state.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{fix_global_phase, vec_norm, ComplexMatrix, DensityMatrix, PureState};
use crate::operators::{ObservableSet, Spin};
use crate::states::random_pure;
use crate::tolerance::Tolerances;

/// How a bound value was obtained.
#[derive(Debug, Clone)]
pub enum Provenance {
    /// Closed-form value.
    Analytic,
    /// Found by multi-start minimization; keeps the achieving state.
    Numeric {
        restarts: usize,
        tolerance: f64,
        best_state: PureState,
    },
}

/// A certified lower limit U for a sum uncertainty.
#[derive(Debug, Clone)]
pub struct UncertaintyBound {
    pub value: f64,
    pub provenance: Provenance,
    pub observable_set_label: String,
}

/// The sum uncertainty relations with known closed-form limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// δLx² + δLy² + δLz² ≥ l for spin l.
    Spin3(Spin),
    /// δσ1² + δσ2² + δσ3² ≥ 2.
    Pauli3,
    /// δσ1² + δσ2² ≥ 1.
    Pauli2,
    /// δLx² + δLy² ≥ 7/16 for spin 1.
    Spin1Xy,
}

impl BoundKind {
    /// The observable set the bound refers to.
    pub fn observable_set(self) -> ObservableSet {
        match self {
            BoundKind::Spin3(l) => ObservableSet::spin_xyz(l),
            BoundKind::Pauli3 => ObservableSet::pauli3(),
            BoundKind::Pauli2 => ObservableSet::pauli2(),
            BoundKind::Spin1Xy => ObservableSet::spin1_xy(),
        }
    }
}

/// The analytic value of a registered bound.
pub fn analytic_bound(kind: BoundKind) -> UncertaintyBound {
    let (value, label) = match kind {
        BoundKind::Spin3(l) => (l.value(), format!("spin_xyz(l={l})")),
        BoundKind::Pauli3 => (2.0, "pauli3".to_string()),
        BoundKind::Pauli2 => (1.0, "pauli2".to_string()),
        BoundKind::Spin1Xy => (7.0 / 16.0, "spin1_xy".to_string()),
    };
    UncertaintyBound {
        value,
        provenance: Provenance::Analytic,
        observable_set_label: label,
    }
}

fn clamp_variance(v: f64, tol: &Tolerances) -> Result<f64> {
    if v >= 0.0 {
        Ok(v)
    } else if v >= -tol.variance_floor {
        Ok(0.0)
    } else {
        Err(Error::Internal(format!(
            "variance {v:.3e} is below the rounding floor -{:.3e}",
            tol.variance_floor
        )))
    }
}

/// δA² = ⟨A²⟩ − ⟨A⟩² on a density matrix.
pub fn variance(rho: &DensityMatrix, a: &ComplexMatrix) -> Result<f64> {
    variance_with_tolerances(rho, a, &Tolerances::default())
}

pub fn variance_with_tolerances(
    rho: &DensityMatrix,
    a: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<f64> {
    if a.rows() != rho.dim() || a.cols() != rho.dim() {
        return Err(Error::DimMismatch {
            context: "variance operator vs state",
            got: a.rows(),
            expected: rho.dim(),
        });
    }
    let dev = a.hermiticity_error();
    if dev > tol.hermiticity {
        return Err(Error::NotHermitian {
            max_deviation: dev,
            tolerance: tol.hermiticity,
        });
    }
    let mean = rho.matrix().trace_product(a).re;
    let mean_sq = rho.matrix().trace_product(&(a * a)).re;
    clamp_variance(mean_sq - mean * mean, tol)
}

/// Σᵢ δAᵢ² over an observable set, using the cached squares.
pub fn sum_uncertainty(rho: &DensityMatrix, obs: &ObservableSet) -> Result<f64> {
    let tol = Tolerances::default();
    if obs.dim() != rho.dim() {
        return Err(Error::DimMismatch {
            context: "sum_uncertainty observables vs state",
            got: obs.dim(),
            expected: rho.dim(),
        });
    }
    let mut total = 0.0;
    for o in obs.iter() {
        let mean = rho.matrix().trace_product(o.matrix()).re;
        let mean_sq = rho.matrix().trace_product(o.squared()).re;
        total += clamp_variance(mean_sq - mean * mean, &tol)?;
    }
    Ok(total)
}

/// Σᵢ δAᵢ² evaluated directly on a normalized state vector.
pub fn sum_uncertainty_pure(psi: &[Complex64], obs: &ObservableSet) -> f64 {
    obs.iter()
        .map(|o| {
            let e = crate::linalg::inner(psi, &o.matrix().apply(psi)).re;
            let q = crate::linalg::inner(psi, &o.squared().apply(psi)).re;
            q - e * e
        })
        .sum()
}

/// Gradient of [`sum_uncertainty_pure`] with respect to the real embedding of
/// the state, encoded as a complex vector g with directional derivative
/// Re⟨g, d⟩ along a perturbation d. The gradient accounts for the unit-norm
/// constraint (Rayleigh-quotient form), so it is automatically tangent to the
/// sphere and orthogonal to the global-phase direction.
pub fn sum_uncertainty_gradient(psi: &[Complex64], obs: &ObservableSet) -> Vec<Complex64> {
    let n = psi.len();
    let mut g = vec![Complex64::ZERO; n];
    for o in obs.iter() {
        let a_psi = o.matrix().apply(psi);
        let a2_psi = o.squared().apply(psi);
        let e = crate::linalg::inner(psi, &a_psi).re;
        let q = crate::linalg::inner(psi, &a2_psi).re;
        let diag = 2.0 * e * e - q;
        for k in 0..n {
            g[k] += (a2_psi[k] - a_psi[k] * (2.0 * e) + psi[k] * diag) * 2.0;
        }
    }
    g
}

/// Knobs for the multi-start sphere descent.
#[derive(Debug, Clone)]
pub struct MinimizeOptions {
    pub restarts: usize,
    /// Gradient infinity-norm at which a restart counts as converged.
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            restarts: 64,
            tol: 1e-9,
            max_iters: 10_000,
            seed: 0,
        }
    }
}

pub(crate) struct DescentOutcome {
    pub value: f64,
    pub state: Vec<Complex64>,
    pub converged: bool,
}

/// Projected gradient descent with backtracking line search on the unit
/// sphere of the state space. The retraction is plain renormalization.
pub(crate) fn sphere_descend(
    start: Vec<Complex64>,
    objective: &dyn Fn(&[Complex64]) -> f64,
    gradient: &dyn Fn(&[Complex64]) -> Vec<Complex64>,
    tol: f64,
    max_iters: usize,
) -> DescentOutcome {
    let renormalize = |v: &mut Vec<Complex64>| {
        let n = vec_norm(v);
        for z in v.iter_mut() {
            *z /= n;
        }
    };

    let mut psi = start;
    renormalize(&mut psi);
    let mut f = objective(&psi);
    let mut step = 1.0f64;

    for _ in 0..max_iters {
        let g = gradient(&psi);
        let grad_inf = g
            .iter()
            .map(|z| z.re.abs().max(z.im.abs()))
            .fold(0.0, f64::max);
        if grad_inf <= tol {
            return DescentOutcome {
                value: f,
                state: psi,
                converged: true,
            };
        }

        let grad_sq: f64 = g.iter().map(|z| z.norm_sqr()).sum();
        step = (step * 2.0).min(1e3);
        loop {
            let mut cand: Vec<Complex64> =
                psi.iter().zip(&g).map(|(p, gk)| p - gk * step).collect();
            renormalize(&mut cand);
            let fc = objective(&cand);
            if fc <= f - 1e-4 * step * grad_sq {
                let moved = cand
                    .iter()
                    .zip(&psi)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                psi = cand;
                f = fc;
                if moved <= 1e-14 {
                    // Step tolerance: the iterate has stopped moving.
                    return DescentOutcome {
                        value: f,
                        state: psi,
                        converged: true,
                    };
                }
                break;
            }
            step *= 0.5;
            if step < 1e-16 {
                // No descent left at f64 resolution; the line search has hit
                // the numerical floor of the landscape.
                return DescentOutcome {
                    value: f,
                    state: psi,
                    converged: true,
                };
            }
        }
    }

    DescentOutcome {
        value: f,
        state: psi,
        converged: false,
    }
}

/// Certify a sum-uncertainty bound: the global minimum of Σᵢ δAᵢ² over pure
/// states, found by multi-start projected gradient descent. Restart seeds are
/// pre-assigned streams of one generator, so the result is deterministic for
/// a fixed seed no matter how restarts are scheduled.
pub fn minimize_sum_uncertainty(
    obs: &ObservableSet,
    opts: &MinimizeOptions,
) -> Result<UncertaintyBound> {
    assert!(opts.restarts >= 1, "at least one restart is required");
    let dim = obs.dim();
    let objective = |psi: &[Complex64]| sum_uncertainty_pure(psi, obs);
    let gradient = |psi: &[Complex64]| sum_uncertainty_gradient(psi, obs);

    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for restart in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(restart as u64 + 1);
        let start = random_pure(dim, &mut rng).amplitudes().to_vec();
        let outcome = sphere_descend(start, &objective, &gradient, opts.tol, opts.max_iters);
        if outcome.converged {
            let better = best.as_ref().map_or(true, |(v, _)| outcome.value < *v);
            if better {
                best = Some((outcome.value, outcome.state));
            }
        }
    }

    let (value, mut state) = best.ok_or(Error::NonConvergence {
        restarts: opts.restarts,
        tolerance: opts.tol,
    })?;
    let tol = Tolerances::default();
    let value = clamp_variance(value, &tol)?;
    fix_global_phase(&mut state);
    Ok(UncertaintyBound {
        value,
        provenance: Provenance::Numeric {
            restarts: opts.restarts,
            tolerance: opts.tol,
            best_state: PureState::normalized(state).expect("descent preserves normalization"),
        },
        observable_set_label: obs.label().to_string(),
    })
}
