//! Constructors for the state families used throughout the crate, random
//! samplers for property testing, and the JSON state-file format.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{
    fix_global_phase, kron_vec, vec_norm, ComplexMatrix, DensityMatrix, PureState,
};
use crate::operators::{spin_matrices, Spin};
use crate::tolerance::Tolerances;

/// Singlet fraction of a Werner state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerParams {
    p_s: f64,
}

impl WernerParams {
    pub fn new(p_s: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_s) {
            return Err(Error::InvalidParameter {
                name: "p_s",
                value: p_s,
                expected: "0 <= p_s <= 1",
            });
        }
        Ok(Self { p_s })
    }

    pub fn p_s(self) -> f64 {
        self.p_s
    }
}

/// One weighted component of a mixture.
#[derive(Debug, Clone)]
pub struct MixtureTerm {
    pub weight: f64,
    pub state: DensityMatrix,
}

/// Convex combination Σ pₘ ρₘ. Weights must be nonnegative and sum to one
/// within 1e-12.
pub fn mix(terms: &[MixtureTerm]) -> Result<DensityMatrix> {
    if terms.is_empty() {
        return Err(Error::InvalidParameter {
            name: "mixture terms",
            value: 0.0,
            expected: "at least one term",
        });
    }
    let total: f64 = terms.iter().map(|t| t.weight).sum();
    if terms.iter().any(|t| t.weight < 0.0) || (total - 1.0).abs() > 1e-12 {
        return Err(Error::NormalizationError(format!(
            "mixture weights must be nonnegative and sum to 1 (got {total})"
        )));
    }
    let dim = terms[0].state.dim();
    let mut acc = ComplexMatrix::zeros(dim, dim);
    for term in terms {
        if term.state.dim() != dim {
            return Err(Error::DimMismatch {
                context: "mixture components must share a dimension",
                got: term.state.dim(),
                expected: dim,
            });
        }
        acc = &acc + &term.state.matrix().scale(Complex64::new(term.weight, 0.0));
    }
    DensityMatrix::new(acc)
}

/// The two-spin-l singlet: the unique joint state annihilated by all three
/// total-spin components. Expressed in the descending-m product basis as
/// (1/√N) Σₘ (−1)^(l−m) |m⟩⊗|−m⟩ with the |+l⟩⊗|−l⟩ coefficient positive.
pub fn singlet(l: Spin) -> PureState {
    let n = l.dim();
    let norm = 1.0 / (n as f64).sqrt();
    let mut amps = vec![Complex64::ZERO; n * n];
    for k in 0..n {
        // |m⟩ at index k pairs with |−m⟩ at index n−1−k; phase (−1)^(l−m).
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        amps[k * n + (n - 1 - k)] = Complex64::new(sign * norm, 0.0);
    }
    let state = PureState::new(amps).expect("singlet amplitudes are normalized by construction");

    let (lx, ly, lz) = spin_matrices(l);
    let id = ComplexMatrix::identity(n);
    for op in [lx, ly, lz] {
        let joint = &op.kron(&id) + &id.kron(&op);
        let residual = vec_norm(&joint.apply(state.amplitudes()));
        assert!(
            residual <= 1e-10,
            "singlet construction failed the total-spin check: residual {residual}"
        );
    }
    state
}

/// Maximally entangled state (1/√N) Σₙ |n⟩⊗|n⟩.
pub fn max_entangled(n: usize) -> PureState {
    assert!(n >= 1, "max_entangled needs a positive dimension");
    let norm = 1.0 / (n as f64).sqrt();
    let mut amps = vec![Complex64::ZERO; n * n];
    for k in 0..n {
        amps[k * n + k] = Complex64::new(norm, 0.0);
    }
    PureState::new(amps).expect("uniform Schmidt amplitudes are normalized")
}

/// Werner state: (1−p_s)·I/4 + p_s·|singlet⟩⟨singlet| on two qubits.
pub fn werner(params: WernerParams) -> DensityMatrix {
    let p = params.p_s();
    let s = singlet(Spin::HALF).to_density();
    let noise = ComplexMatrix::identity(4).scale(Complex64::new((1.0 - p) / 4.0, 0.0));
    let m = &noise + &s.matrix().scale(Complex64::new(p, 0.0));
    DensityMatrix::new(m).expect("Werner states are valid for p_s in [0,1]")
}

/// Spin-1 noise model: singlet fraction p_s plus equal weights on the three
/// x-anticorrelated product states |+1;−1⟩, |0;0⟩, |−1;+1⟩, all in the Lx
/// eigenbasis. The x-correlation stays perfect for every p_s, so
/// δ(Lx(A)+Lx(B))² = 0 while the transverse components fluctuate.
pub fn noise_model_state(p_s: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p_s) {
        return Err(Error::InvalidParameter {
            name: "p_s",
            value: p_s,
            expected: "0 <= p_s <= 1",
        });
    }
    let (lx, _, _) = spin_matrices(Spin::ONE);
    // Columns of the diagonalizing unitary, descending eigenvalue order:
    // the Lx eigenkets for m_x = +1, 0, −1 expressed in the stored Lz basis.
    let eig = crate::linalg::eig_hermitian(&lx, &Tolerances::default())?;
    let x_plus = eig.eigenvector(0);
    let x_zero = eig.eigenvector(1);
    let x_minus = eig.eigenvector(2);

    let mut m = singlet(Spin::ONE)
        .to_density()
        .matrix()
        .scale(Complex64::new(p_s, 0.0));
    let w = Complex64::new((1.0 - p_s) / 3.0, 0.0);
    for (a, b) in [(&x_plus, &x_minus), (&x_zero, &x_zero), (&x_minus, &x_plus)] {
        let ket = kron_vec(a, b);
        m = &m + &ComplexMatrix::outer(&ket, &ket).scale(w);
    }
    DensityMatrix::new(m)
}

/// Haar-random pure state of dimension `n` (normalized complex Gaussian
/// vector). The global phase is fixed so the largest amplitude is positive
/// real, which makes sampling reproducible down to the exact amplitudes.
pub fn random_pure(n: usize, rng: &mut impl Rng) -> PureState {
    assert!(n >= 1, "random_pure needs a positive dimension");
    let mut amps: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let mut norm = vec_norm(&amps);
    while norm < 1e-12 {
        // Astronomically unlikely; resample rather than divide by ~zero.
        amps = (0..n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        norm = vec_norm(&amps);
    }
    for z in &mut amps {
        *z /= norm;
    }
    fix_global_phase(&mut amps);
    PureState::new(amps).expect("normalized by construction")
}

/// Random mixed state from the Ginibre ensemble: GG†/tr{GG†}.
pub fn random_density(n: usize, rng: &mut impl Rng) -> DensityMatrix {
    assert!(n >= 1, "random_density needs a positive dimension");
    loop {
        let g = ComplexMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let gg = &g * &g.adjoint();
        let tr = gg.trace().re;
        if tr > 1e-9 {
            let m = gg.scale(Complex64::new(1.0 / tr, 0.0));
            return DensityMatrix::new(m).expect("Ginibre states are valid density matrices");
        }
    }
}

/// Random separable state: a convex combination of `m` random pure product
/// states with weights drawn uniformly from the simplex.
pub fn random_separable_mixture(
    dim_a: usize,
    dim_b: usize,
    m: usize,
    rng: &mut impl Rng,
) -> DensityMatrix {
    assert!(m >= 1, "a separable mixture needs at least one term");
    // Uniform simplex weights: normalized standard exponentials.
    let mut weights: Vec<f64> = (0..m)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }

    let mut acc = ComplexMatrix::zeros(dim_a * dim_b, dim_a * dim_b);
    for &w in &weights {
        let alpha = random_pure(dim_a, rng);
        let beta = random_pure(dim_b, rng);
        let product = alpha.tensor(&beta);
        let proj = ComplexMatrix::outer(product.amplitudes(), product.amplitudes());
        acc = &acc + &proj.scale(Complex64::new(w, 0.0));
    }
    DensityMatrix::new(acc).expect("convex combinations of product states are valid")
}

/// A state loaded from or destined for a state file.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(PureState),
    Density(DensityMatrix),
}

impl State {
    pub fn dim(&self) -> usize {
        match self {
            State::Pure(p) => p.dim(),
            State::Density(d) => d.dim(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            State::Pure(p) => p.to_density(),
            State::Density(d) => d.clone(),
        }
    }

    /// Parse the JSON state-file format:
    /// `{"dim": N, "kind": "pure"|"density", "data": ...}` where `data` holds
    /// `[re, im]` pairs — a flat list for pure states, a row-major nested
    /// list for density matrices. Basis order is |+l⟩…|−l⟩ per factor,
    /// A-major for bipartite systems.
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_json_with_tolerances(text, &Tolerances::default())
    }

    pub fn from_json_with_tolerances(text: &str, tol: &Tolerances) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::SchemaError(format!("state file: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::SchemaError("state file must be a JSON object".into()))?;
        let dim = obj
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::SchemaError("state file needs a positive integer 'dim'".into()))?
            as usize;
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::SchemaError("state file needs 'kind': \"pure\"|\"density\"".into()))?;
        let data = obj
            .get("data")
            .ok_or_else(|| Error::SchemaError("state file needs a 'data' field".into()))?;

        match kind {
            "pure" => {
                let amps = parse_complex_list(data, dim, "data")?;
                Ok(State::Pure(PureState::with_tolerances(amps, tol)?))
            }
            "density" => {
                let rows = data
                    .as_array()
                    .ok_or_else(|| Error::SchemaError("density 'data' must be an array of rows".into()))?;
                if rows.len() != dim {
                    return Err(Error::SchemaError(format!(
                        "density 'data' has {} rows, expected {dim}",
                        rows.len()
                    )));
                }
                let mut m = ComplexMatrix::zeros(dim, dim);
                for (i, row) in rows.iter().enumerate() {
                    let entries = parse_complex_list(row, dim, "data row")?;
                    for (j, z) in entries.into_iter().enumerate() {
                        m[(i, j)] = z;
                    }
                }
                Ok(State::Density(DensityMatrix::with_tolerances(m, tol)?))
            }
            other => Err(Error::SchemaError(format!(
                "unknown state kind '{other}' (expected \"pure\" or \"density\")"
            ))),
        }
    }

    /// Serialize in the state-file format at full float precision.
    pub fn to_json(&self) -> String {
        let value = match self {
            State::Pure(p) => json!({
                "dim": p.dim(),
                "kind": "pure",
                "data": p.amplitudes().iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>(),
            }),
            State::Density(d) => {
                let n = d.dim();
                let rows: Vec<Value> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let z = d.matrix()[(i, j)];
                                json!([z.re, z.im])
                            })
                            .collect::<Vec<_>>()
                            .into()
                    })
                    .collect();
                json!({"dim": n, "kind": "density", "data": rows})
            }
        };
        serde_json::to_string_pretty(&value).expect("state serialization cannot fail")
    }
}

fn parse_complex_list(value: &Value, expected_len: usize, what: &str) -> Result<Vec<Complex64>> {
    let items = value
        .as_array()
        .ok_or_else(|| Error::SchemaError(format!("{what} must be an array of [re, im] pairs")))?;
    if items.len() != expected_len {
        return Err(Error::SchemaError(format!(
            "{what} has {} entries, expected {expected_len}",
            items.len()
        )));
    }
    items
        .iter()
        .map(|pair| {
            let xs = pair
                .as_array()
                .filter(|xs| xs.len() == 2)
                .ok_or_else(|| Error::SchemaError(format!("{what}: entries must be [re, im] pairs")))?;
            let re = xs[0]
                .as_f64()
                .ok_or_else(|| Error::SchemaError(format!("{what}: non-numeric real part")))?;
            let im = xs[1]
                .as_f64()
                .ok_or_else(|| Error::SchemaError(format!("{what}: non-numeric imaginary part")))?;
            Ok(Complex64::new(re, im))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{expectation, inner};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn joint_component(l: Spin, pick: usize) -> ComplexMatrix {
        let (lx, ly, lz) = spin_matrices(l);
        let op = [lx, ly, lz][pick].clone();
        let id = ComplexMatrix::identity(l.dim());
        &op.kron(&id) + &id.kron(&op)
    }

    fn joint_variance(rho: &DensityMatrix, joint: &ComplexMatrix) -> f64 {
        let sq = joint * joint;
        expectation(rho, &sq).unwrap() - expectation(rho, joint).unwrap().powi(2)
    }

    #[test]
    fn qubit_singlet_amplitudes() {
        let s = singlet(Spin::HALF);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let amps = s.amplitudes();
        assert!((amps[1] - c(inv_sqrt2, 0.0)).norm() < 1e-15); // |↑↓⟩
        assert!((amps[2] - c(-inv_sqrt2, 0.0)).norm() < 1e-15); // |↓↑⟩
        assert!(amps[0].norm() < 1e-15 && amps[3].norm() < 1e-15);
    }

    #[test]
    fn spin1_singlet_matches_null_space_solution() {
        // Independent oracle: the singlet is the kernel of Σᵢ JᵢᵀJᵢ where
        // Jᵢ = Lᵢ(A)+Lᵢ(B); find it by eigendecomposition and compare rays.
        let l = Spin::ONE;
        let mut k = ComplexMatrix::zeros(9, 9);
        for pick in 0..3 {
            let j = joint_component(l, pick);
            k = &k + &(&j.adjoint() * &j);
        }
        let eig = crate::linalg::eig_hermitian(&k, &Tolerances::default()).unwrap();
        assert!(eig.values[8].abs() < 1e-10, "kernel eigenvalue should vanish");
        assert!(eig.values[7] > 0.5, "kernel should be one-dimensional");
        let kernel = eig.eigenvector(8);

        let s = singlet(l);
        let overlap = inner(&kernel, s.amplitudes()).norm();
        assert!((overlap - 1.0).abs() < 1e-10);

        // And the closed form itself: (|+1,−1⟩ − |0,0⟩ + |−1,+1⟩)/√3.
        let amps = s.amplitudes();
        let inv_sqrt3 = 1.0 / 3f64.sqrt();
        assert!((amps[2] - c(inv_sqrt3, 0.0)).norm() < 1e-14);
        assert!((amps[4] - c(-inv_sqrt3, 0.0)).norm() < 1e-14);
        assert!((amps[6] - c(inv_sqrt3, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn singlet_has_zero_total_spin_uncertainty() {
        for doubled in [1u32, 2, 3, 4] {
            let l = Spin::from_doubled(doubled).unwrap();
            let rho = singlet(l).to_density();
            let total: f64 = (0..3)
                .map(|pick| joint_variance(&rho, &joint_component(l, pick)))
                .sum();
            assert!(total.abs() < 1e-10, "l={l}: total {total}");
        }
    }

    #[test]
    fn max_entangled_two_qubits() {
        let e = max_entangled(2);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!((e.amplitudes()[0] - c(inv_sqrt2, 0.0)).norm() < 1e-15);
        assert!((e.amplitudes()[3] - c(inv_sqrt2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn max_entangled_schmidt_diagonal_correlation() {
        let (_, _, lz) = spin_matrices(Spin::ONE);
        let id = ComplexMatrix::identity(3);
        let diff = &lz.kron(&id) - &id.kron(&lz);
        let image = diff.apply(max_entangled(3).amplitudes());
        assert!(vec_norm(&image) < 1e-12);
    }

    #[test]
    fn werner_joint_variances() {
        let (s1, s2, s3) = crate::operators::pauli_matrices();
        let id = ComplexMatrix::identity(2);
        for (p, expected) in [(1.0, 0.0), (0.0, 2.0), (0.5, 1.0)] {
            let rho = werner(WernerParams::new(p).unwrap());
            for s in [&s1, &s2, &s3] {
                let joint = &s.kron(&id) + &id.kron(s);
                let v = joint_variance(&rho, &joint);
                assert!((v - expected).abs() < 1e-12, "p={p}: got {v}");
            }
        }
    }

    #[test]
    fn noise_model_limits() {
        let s = singlet(Spin::ONE).to_density();
        let at_one = noise_model_state(1.0).unwrap();
        assert!(at_one.matrix().max_abs_diff(s.matrix()) < 1e-12);

        let (lx, ly, _) = spin_matrices(Spin::ONE);
        let id = ComplexMatrix::identity(3);
        let jx = &lx.kron(&id) + &id.kron(&lx);
        let jy = &ly.kron(&id) + &id.kron(&ly);
        for p in [0.0, 0.3, 0.69, 1.0] {
            let rho = noise_model_state(p).unwrap();
            assert!(joint_variance(&rho, &jx).abs() < 1e-12, "x stays perfectly correlated");
            let vy = joint_variance(&rho, &jy);
            assert!((vy - 4.0 / 3.0 * (1.0 - p)).abs() < 1e-12, "p={p}: δJy² = {vy}");
        }
    }

    #[test]
    fn noise_model_rejects_out_of_range() {
        assert!(noise_model_state(1.2).is_err());
        assert!(noise_model_state(-0.1).is_err());
    }

    #[test]
    fn random_pure_is_reproducible_and_phase_fixed() {
        let a = random_pure(3, &mut ChaCha8Rng::seed_from_u64(42));
        let b = random_pure(3, &mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a.amplitudes(), b.amplitudes());

        let single = random_pure(1, &mut ChaCha8Rng::seed_from_u64(9));
        assert!((single.amplitudes()[0] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn random_pure_matches_haar_moment() {
        // E|⟨k|ψ⟩|² = 1/N; |a_k|² is Beta(1, N−1) with variance (N−1)/(N²(N+1)).
        let n = 4;
        let samples = 100_000;
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        let mut mean = 0.0;
        for _ in 0..samples {
            mean += random_pure(n, &mut rng).amplitudes()[1].norm_sqr();
        }
        mean /= samples as f64;
        let var = (n as f64 - 1.0) / ((n as f64).powi(2) * (n as f64 + 1.0));
        let three_sigma = 3.0 * (var / samples as f64).sqrt();
        assert!(
            (mean - 1.0 / n as f64).abs() < three_sigma,
            "mean {mean} deviates from {} by more than {three_sigma}",
            1.0 / n as f64
        );
    }

    #[test]
    fn single_term_mixture_is_a_product_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random_separable_mixture(2, 2, 1, &mut rng);
        // Pure product state: ρ² = ρ.
        let sq = rho.matrix() * rho.matrix();
        assert!(sq.max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn separable_mixtures_have_zero_concurrence() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let m = 1 + (rng.random::<u32>() % 5) as usize;
            let rho = random_separable_mixture(2, 2, m, &mut rng);
            let c = crate::measures::concurrence(&rho).unwrap();
            assert!(c < 1e-9, "separable state produced concurrence {c}");
        }
    }

    #[test]
    fn mixture_weights_must_normalize() {
        let rho = DensityMatrix::maximally_mixed(2);
        let err = mix(&[MixtureTerm {
            weight: 0.5,
            state: rho,
        }])
        .unwrap_err();
        assert!(matches!(err, Error::NormalizationError(_)));
    }

    #[test]
    fn state_file_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let rho = random_density(3, &mut rng);
        let text = State::Density(rho.clone()).to_json();
        let back = State::from_json(&text).unwrap();
        match back {
            State::Density(d) => assert!(d.matrix().max_abs_diff(rho.matrix()) < 1e-15),
            _ => panic!("kind changed in round trip"),
        }

        let psi = random_pure(4, &mut rng);
        let text = State::Pure(psi.clone()).to_json();
        match State::from_json(&text).unwrap() {
            State::Pure(p) => assert_eq!(p.amplitudes(), psi.amplitudes()),
            _ => panic!("kind changed in round trip"),
        }
    }

    #[test]
    fn state_file_schema_errors() {
        assert!(matches!(
            State::from_json("{\"kind\": \"pure\"}"),
            Err(Error::SchemaError(_))
        ));
        assert!(matches!(
            State::from_json("{\"dim\": 2, \"kind\": \"spooky\", \"data\": []}"),
            Err(Error::SchemaError(_))
        ));
        // Structurally valid but unnormalized.
        let bad = "{\"dim\": 2, \"kind\": \"pure\", \"data\": [[1.0, 0.0], [1.0, 0.0]]}";
        assert!(matches!(State::from_json(bad), Err(Error::NotNormalized { .. })));
    }
}
