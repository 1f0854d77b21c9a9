//! Local uncertainty relations: construction, evaluation on bipartite states,
//! relative violation, and certification of the separable bound over product
//! states.
//!
//! A relation pairs observables {Aᵢ} on side A with {Bᵢ} on side B and bounds
//! the total uncertainty of the joint properties Aᵢ+Bᵢ from below by U_A+U_B
//! for every separable state. Any state that dips under the bound is
//! entangled — that is the whole detection principle.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{digest, sig12};
use crate::linalg::{ComplexMatrix, DensityMatrix};
use crate::measures::concurrence;
use crate::operators::ObservableSet;
use crate::states::{random_pure, werner, WernerParams};
use crate::tolerance::Tolerances;
use crate::uncertainty::{
    analytic_bound, minimize_sum_uncertainty, sphere_descend, sum_uncertainty_gradient,
    sum_uncertainty_pure, BoundKind, MinimizeOptions, UncertaintyBound,
};

/// A⊗I + I⊗B on the joint space. The factors may live in different
/// dimensions.
pub fn joint_operator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let tol = Tolerances::default();
    for (m, side) in [(a, "A"), (b, "B")] {
        let dev = m.hermiticity_error();
        if dev > tol.hermiticity {
            let _ = side;
            return Err(Error::NotHermitian {
                max_deviation: dev,
                tolerance: tol.hermiticity,
            });
        }
    }
    let ia = ComplexMatrix::identity(a.rows());
    let ib = ComplexMatrix::identity(b.rows());
    Ok(&a.kron(&ib) + &ia.kron(b))
}

/// One measurement setting of a relation: the joint operator Aᵢ+Bᵢ with its
/// square cached for fast variance evaluation.
#[derive(Debug, Clone)]
pub struct JointSetting {
    label: String,
    op: ComplexMatrix,
    op_squared: ComplexMatrix,
}

impl JointSetting {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn operator(&self) -> &ComplexMatrix {
        &self.op
    }
}

/// Paired observable sets with their certified separable bound U_A + U_B.
#[derive(Debug, Clone)]
pub struct LurSpec {
    label: String,
    obs_a: ObservableSet,
    obs_b: ObservableSet,
    bound_a: UncertaintyBound,
    bound_b: UncertaintyBound,
    settings: Vec<JointSetting>,
}

impl LurSpec {
    /// Pair two observable sets under a bound. There must be exactly one Bᵢ
    /// for every Aᵢ and the combined bound must be positive.
    pub fn new(
        label: impl Into<String>,
        obs_a: ObservableSet,
        obs_b: ObservableSet,
        bound_a: UncertaintyBound,
        bound_b: UncertaintyBound,
    ) -> Result<Self> {
        if obs_a.len() != obs_b.len() {
            return Err(Error::DimMismatch {
                context: "one B operator is required for every A operator",
                got: obs_b.len(),
                expected: obs_a.len(),
            });
        }
        let bound = bound_a.value + bound_b.value;
        if bound <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "separable bound U_A + U_B",
                value: bound,
                expected: "a positive value",
            });
        }
        let mut settings = Vec::with_capacity(obs_a.len());
        for (a, b) in obs_a.iter().zip(obs_b.iter()) {
            let op = joint_operator(a.matrix(), b.matrix())?;
            let op_squared = &op * &op;
            settings.push(JointSetting {
                label: a.label().to_string(),
                op,
                op_squared,
            });
        }
        Ok(Self {
            label: label.into(),
            obs_a,
            obs_b,
            bound_a,
            bound_b,
            settings,
        })
    }

    /// The singlet-type relations with analytic bounds. Side B reuses the
    /// side-A observables, since the singlet annihilates every Lᵢ(A)+Lᵢ(B)
    /// directly.
    pub fn builtin(kind: BoundKind) -> Self {
        let label = match kind {
            BoundKind::Spin3(l) => format!("spin3_lur(l={l})"),
            BoundKind::Spin1Xy => "spin1_xy_lur".to_string(),
            BoundKind::Pauli3 => "pauli3_lur".to_string(),
            BoundKind::Pauli2 => "pauli2_lur".to_string(),
        };
        let obs = kind.observable_set();
        Self::new(
            label,
            obs.clone(),
            obs,
            analytic_bound(kind),
            analytic_bound(kind),
        )
        .expect("builtin relations are well formed")
    }

    /// The relation tailored to the maximally entangled state: side B uses
    /// the partner operators −Aᵢᵀ and both bound sides are certified
    /// numerically.
    pub fn for_max_entangled(obs_a: ObservableSet, opts: &MinimizeOptions) -> Result<Self> {
        let obs_b = obs_a.partner();
        let bound_a = minimize_sum_uncertainty(&obs_a, opts)?;
        let bound_b = minimize_sum_uncertainty(&obs_b, opts)?;
        Self::new(
            format!("max_entangled_lur({})", obs_a.label()),
            obs_a,
            obs_b,
            bound_a,
            bound_b,
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Separable bound U_A + U_B.
    pub fn bound(&self) -> f64 {
        self.bound_a.value + self.bound_b.value
    }

    pub fn bound_a(&self) -> &UncertaintyBound {
        &self.bound_a
    }

    pub fn bound_b(&self) -> &UncertaintyBound {
        &self.bound_b
    }

    pub fn obs_a(&self) -> &ObservableSet {
        &self.obs_a
    }

    pub fn obs_b(&self) -> &ObservableSet {
        &self.obs_b
    }

    pub fn settings(&self) -> &[JointSetting] {
        &self.settings
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.obs_a.dim(), self.obs_b.dim())
    }

    pub fn joint_dim(&self) -> usize {
        self.obs_a.dim() * self.obs_b.dim()
    }
}

/// Outcome of testing one state (or dataset) against one relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Entangled,
    Inconclusive,
}

/// Per-setting contribution to a report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SettingReport {
    pub label: String,
    pub variance: f64,
    /// Total measurement shots behind the empirical variance, when the data
    /// came as counts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
}

/// Evaluation result: per-setting variances, the total against the bound,
/// the relative violation, and the verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LurReport {
    pub spec: String,
    pub per_setting: Vec<SettingReport>,
    pub total: f64,
    pub bound: f64,
    /// Relative violation 1 − total/bound; positive only under violation,
    /// 1 exactly when every joint property is perfectly correlated.
    pub c_lur: f64,
    /// total − bound: negative margins certify entanglement.
    pub margin: f64,
    pub verdict: Verdict,
    pub input_digest: String,
}

impl LurReport {
    pub(crate) fn from_variances(
        spec: &LurSpec,
        per_setting: Vec<SettingReport>,
        input_digest: String,
        judge: f64,
    ) -> Self {
        let total: f64 = per_setting.iter().map(|s| s.variance).sum();
        let bound = spec.bound();
        let verdict = if total < bound - judge {
            Verdict::Entangled
        } else {
            Verdict::Inconclusive
        };
        Self {
            spec: spec.label().to_string(),
            per_setting,
            total,
            bound,
            c_lur: 1.0 - total / bound,
            margin: total - bound,
            verdict,
            input_digest,
        }
    }

    /// Canonical JSON: fixed key order, floats at 12 significant digits.
    pub fn to_json(&self) -> String {
        let rounded = Self {
            spec: self.spec.clone(),
            per_setting: self
                .per_setting
                .iter()
                .map(|s| SettingReport {
                    label: s.label.clone(),
                    variance: sig12(s.variance),
                    shots: s.shots,
                })
                .collect(),
            total: sig12(self.total),
            bound: sig12(self.bound),
            c_lur: sig12(self.c_lur),
            margin: sig12(self.margin),
            verdict: self.verdict,
            input_digest: self.input_digest.clone(),
        };
        serde_json::to_string_pretty(&rounded).expect("report serialization cannot fail")
    }
}

fn density_digest(rho: &DensityMatrix) -> String {
    let mut bytes = Vec::with_capacity(8 + rho.dim() * rho.dim() * 16);
    bytes.extend_from_slice(&(rho.dim() as u64).to_le_bytes());
    for z in rho.matrix().entries() {
        bytes.extend_from_slice(&z.re.to_le_bytes());
        bytes.extend_from_slice(&z.im.to_le_bytes());
    }
    digest(&bytes)
}

/// Evaluate a relation on a density matrix.
pub fn evaluate(rho: &DensityMatrix, spec: &LurSpec) -> Result<LurReport> {
    evaluate_with_tolerances(rho, spec, &Tolerances::default())
}

pub fn evaluate_with_tolerances(
    rho: &DensityMatrix,
    spec: &LurSpec,
    tol: &Tolerances,
) -> Result<LurReport> {
    if rho.dim() != spec.joint_dim() {
        return Err(Error::DimMismatch {
            context: "state dimension vs relation joint dimension",
            got: rho.dim(),
            expected: spec.joint_dim(),
        });
    }
    let mut per_setting = Vec::with_capacity(spec.settings.len());
    for setting in &spec.settings {
        let mean = rho.matrix().trace_product(&setting.op).re;
        let mean_sq = rho.matrix().trace_product(&setting.op_squared).re;
        let raw = mean_sq - mean * mean;
        let variance = if raw >= 0.0 {
            raw
        } else if raw >= -tol.variance_floor {
            0.0
        } else {
            return Err(Error::Internal(format!(
                "joint variance {raw:.3e} below the rounding floor"
            )));
        };
        per_setting.push(SettingReport {
            label: setting.label.clone(),
            variance,
            shots: None,
        });
    }
    Ok(LurReport::from_variances(
        spec,
        per_setting,
        density_digest(rho),
        tol.judge,
    ))
}

/// Minimum of the relation total over pure product states |α⟩⊗|β⟩, by
/// multi-start alternating descent: optimize α holding β, then swap, until
/// the joint total stops improving. For separable inputs this can never fall
/// below the bound; equality is reached when both local minima are
/// independently achievable.
pub fn min_over_product_states(spec: &LurSpec, opts: &MinimizeOptions) -> Result<f64> {
    assert!(opts.restarts >= 1, "at least one restart is required");
    let (dim_a, dim_b) = spec.dims();

    // Local statistics a side contributes to the product-state total:
    // on |α⟩⊗|β⟩ each joint variance splits as δAᵢ²(α) + δBᵢ²(β).
    let local_total = |psi: &[Complex64], obs: &ObservableSet| sum_uncertainty_pure(psi, obs);

    let mut best: Option<f64> = None;
    for restart in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(restart as u64 + 1);
        let mut alpha = random_pure(dim_a, &mut rng).amplitudes().to_vec();
        let mut beta = random_pure(dim_b, &mut rng).amplitudes().to_vec();

        let mut converged = false;
        let mut previous = f64::INFINITY;
        for _round in 0..50 {
            let const_b = local_total(&beta, spec.obs_b());
            let objective_a =
                |psi: &[Complex64]| sum_uncertainty_pure(psi, spec.obs_a()) + const_b;
            let gradient_a = |psi: &[Complex64]| sum_uncertainty_gradient(psi, spec.obs_a());
            let out_a = sphere_descend(alpha, &objective_a, &gradient_a, opts.tol, opts.max_iters);
            alpha = out_a.state;

            let const_a = local_total(&alpha, spec.obs_a());
            let objective_b =
                |psi: &[Complex64]| sum_uncertainty_pure(psi, spec.obs_b()) + const_a;
            let gradient_b = |psi: &[Complex64]| sum_uncertainty_gradient(psi, spec.obs_b());
            let out_b = sphere_descend(beta, &objective_b, &gradient_b, opts.tol, opts.max_iters);
            beta = out_b.state;

            let total = out_b.value;
            if out_a.converged && out_b.converged && (previous - total).abs() <= 1e-13 * total.abs().max(1.0)
            {
                converged = true;
                break;
            }
            previous = total;
        }
        if !converged {
            continue;
        }

        // Final value through the full evaluation path on the product state.
        let alpha_state = crate::linalg::PureState::normalized(alpha)?;
        let beta_state = crate::linalg::PureState::normalized(beta)?;
        let product = alpha_state.tensor(&beta_state).to_density();
        let total = evaluate(&product, spec)?.total;
        if best.map_or(true, |b| total < b) {
            best = Some(total);
        }
    }

    let best = best.ok_or(Error::NonConvergence {
        restarts: opts.restarts,
        tolerance: opts.tol,
    })?;
    if best < spec.bound() - 1e-6 {
        return Err(Error::Internal(format!(
            "product-state minimum {best} fell below the separable bound {} — the bound or the optimizer is wrong",
            spec.bound()
        )));
    }
    Ok(best)
}

/// One row of the Werner-state comparison table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WernerSweepRow {
    pub p_s: f64,
    pub c_lur_pauli3: f64,
    pub c_lur_pauli2: f64,
    pub concurrence: f64,
}

/// Relative violations and concurrence across Werner states, all computed by
/// direct evaluation (no closed forms anywhere in this path).
pub fn werner_sweep(p_grid: &[f64]) -> Result<Vec<WernerSweepRow>> {
    let pauli3 = LurSpec::builtin(BoundKind::Pauli3);
    let pauli2 = LurSpec::builtin(BoundKind::Pauli2);
    let mut rows = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        let rho = werner(WernerParams::new(p)?);
        rows.push(WernerSweepRow {
            p_s: p,
            c_lur_pauli3: evaluate(&rho, &pauli3)?.c_lur,
            c_lur_pauli2: evaluate(&rho, &pauli2)?.c_lur,
            concurrence: concurrence(&rho)?,
        });
    }
    Ok(rows)
}
