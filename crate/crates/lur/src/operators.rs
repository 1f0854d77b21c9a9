//! Spin and Pauli observables, partner operators, and labeled observable sets.
//!
//! Conventions fixed here and relied on everywhere else:
//! - basis order is descending magnetic quantum number |+l⟩, …, |−l⟩;
//! - ladder phases follow Condon–Shortley (all ladder elements real ≥ 0).

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix, Eigensystem};
use crate::tolerance::Tolerances;

/// Half-integer spin quantum number, stored as 2l.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Spin {
    doubled: u32,
}

impl Spin {
    pub const HALF: Spin = Spin { doubled: 1 };
    pub const ONE: Spin = Spin { doubled: 2 };

    /// Build from 2l. Fails unless 2l ≥ 1.
    pub fn from_doubled(doubled: u32) -> Result<Self> {
        if doubled == 0 {
            return Err(Error::InvalidSpin(0.0));
        }
        Ok(Self { doubled })
    }

    /// Build from l itself; must be a positive half-integer.
    pub fn try_from_value(l: f64) -> Result<Self> {
        let doubled = (2.0 * l).round();
        if !l.is_finite() || doubled < 1.0 || (2.0 * l - doubled).abs() > 1e-9 {
            return Err(Error::InvalidSpin(l));
        }
        Ok(Self {
            doubled: doubled as u32,
        })
    }

    /// l as a float.
    pub fn value(self) -> f64 {
        self.doubled as f64 / 2.0
    }

    pub fn doubled(self) -> u32 {
        self.doubled
    }

    /// Hilbert-space dimension N = 2l + 1.
    pub fn dim(self) -> usize {
        self.doubled as usize + 1
    }

    /// Magnetic quantum number of basis index `k` (descending order).
    pub fn m_of_index(self, k: usize) -> f64 {
        self.value() - k as f64
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.doubled % 2 == 0 {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

/// A spin-l system: dimension plus quantum number, kept consistent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinSystem {
    spin: Spin,
}

impl SpinSystem {
    pub fn new(spin: Spin) -> Self {
        Self { spin }
    }

    /// From a Hilbert-space dimension N ≥ 2; l = (N−1)/2.
    pub fn from_dim(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSpin((n as f64 - 1.0) / 2.0));
        }
        Ok(Self {
            spin: Spin {
                doubled: (n - 1) as u32,
            },
        })
    }

    pub fn spin(self) -> Spin {
        self.spin
    }

    pub fn dim(self) -> usize {
        self.spin.dim()
    }
}

/// Angular momentum components (Lx, Ly, Lz) for spin `l`.
///
/// Lz is diagonal with entries l, l−1, …, −l; the transverse components come
/// from the ladder operators and satisfy the Casimir identity
/// Lx² + Ly² + Lz² = l(l+1)·I.
pub fn spin_matrices(l: Spin) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let n = l.dim();
    let lv = l.value();

    let mut lz = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        lz[(k, k)] = Complex64::new(l.m_of_index(k), 0.0);
    }

    // Raising operator in the descending-m basis: couples |m⟩ (index k) to
    // |m+1⟩ (index k−1) with the Condon–Shortley element.
    let mut lp = ComplexMatrix::zeros(n, n);
    for k in 1..n {
        let m = l.m_of_index(k);
        let elem = (lv * (lv + 1.0) - m * (m + 1.0)).sqrt();
        lp[(k - 1, k)] = Complex64::new(elem, 0.0);
    }
    let lm = lp.adjoint();

    let lx = (&lp + &lm).scale(Complex64::new(0.5, 0.0));
    let ly = (&lp - &lm).scale(Complex64::new(0.0, -0.5));
    (lx, ly, lz)
}

/// Normalized Pauli matrices (eigenvalues ±1): σᵢ = 2Lᵢ at l = 1/2.
pub fn pauli_matrices() -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let (lx, ly, lz) = spin_matrices(Spin::HALF);
    let two = Complex64::new(2.0, 0.0);
    (lx.scale(two), ly.scale(two), lz.scale(two))
}

/// Partner operator B = −Aᵀ (transpose in the computational basis).
///
/// For any Hermitian A, A⊗I + I⊗B annihilates the maximally entangled state
/// with uniform Schmidt coefficients, so matched pairs (A, −Aᵀ) give the
/// largest possible uncertainty violation.
pub fn partner_operator(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    partner_operator_with_tolerances(a, &Tolerances::default())
}

pub fn partner_operator_with_tolerances(
    a: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<ComplexMatrix> {
    let dev = a.hermiticity_error();
    if dev > tol.hermiticity {
        return Err(Error::NotHermitian {
            max_deviation: dev,
            tolerance: tol.hermiticity,
        });
    }
    Ok(a.transpose().scale(Complex64::new(-1.0, 0.0)))
}

/// A labeled Hermitian operator with its spectral decomposition and square
/// cached at construction.
#[derive(Debug, Clone)]
pub struct Observable {
    label: String,
    matrix: ComplexMatrix,
    squared: ComplexMatrix,
    eigen: Eigensystem,
}

impl Observable {
    pub fn new(label: impl Into<String>, matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerances(label, matrix, &Tolerances::default())
    }

    pub fn with_tolerances(
        label: impl Into<String>,
        matrix: ComplexMatrix,
        tol: &Tolerances,
    ) -> Result<Self> {
        let dev = matrix.hermiticity_error();
        if dev > tol.hermiticity {
            return Err(Error::NotHermitian {
                max_deviation: dev,
                tolerance: tol.hermiticity,
            });
        }
        let eigen = eig_hermitian(&matrix, tol)?;
        let squared = &matrix * &matrix;
        Ok(Self {
            label: label.into(),
            matrix,
            squared,
            eigen,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn squared(&self) -> &ComplexMatrix {
        &self.squared
    }

    pub fn eigen(&self) -> &Eigensystem {
        &self.eigen
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// Non-empty list of same-dimension Hermitian observables under one label.
#[derive(Debug, Clone)]
pub struct ObservableSet {
    label: String,
    observables: Vec<Observable>,
}

impl ObservableSet {
    pub fn new(
        label: impl Into<String>,
        items: Vec<(impl Into<String>, ComplexMatrix)>,
    ) -> Result<Self> {
        Self::with_tolerances(label, items, &Tolerances::default())
    }

    pub fn with_tolerances(
        label: impl Into<String>,
        items: Vec<(impl Into<String>, ComplexMatrix)>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let label = label.into();
        if items.is_empty() {
            return Err(Error::InvalidParameter {
                name: "observable set size",
                value: 0.0,
                expected: "at least one operator",
            });
        }
        let mut observables = Vec::with_capacity(items.len());
        for (op_label, matrix) in items {
            observables.push(Observable::with_tolerances(op_label, matrix, tol)?);
        }
        let dim = observables[0].dim();
        for obs in &observables {
            if obs.dim() != dim {
                return Err(Error::DimMismatch {
                    context: "observable set operators must share a dimension",
                    got: obs.dim(),
                    expected: dim,
                });
            }
        }
        Ok(Self { label, observables })
    }

    /// All three spin components for spin `l`.
    pub fn spin_xyz(l: Spin) -> Self {
        let (lx, ly, lz) = spin_matrices(l);
        Self::new(
            format!("spin_xyz(l={l})"),
            vec![("L_x", lx), ("L_y", ly), ("L_z", lz)],
        )
        .expect("spin matrices are Hermitian by construction")
    }

    /// The two transverse spin-1 components.
    pub fn spin1_xy() -> Self {
        let (lx, ly, _) = spin_matrices(Spin::ONE);
        Self::new("spin1_xy", vec![("L_x", lx), ("L_y", ly)])
            .expect("spin matrices are Hermitian by construction")
    }

    /// All three normalized Pauli matrices.
    pub fn pauli3() -> Self {
        let (s1, s2, s3) = pauli_matrices();
        Self::new(
            "pauli3",
            vec![("sigma_1", s1), ("sigma_2", s2), ("sigma_3", s3)],
        )
        .expect("Pauli matrices are Hermitian by construction")
    }

    /// The first two Pauli matrices.
    pub fn pauli2() -> Self {
        let (s1, s2, _) = pauli_matrices();
        Self::new("pauli2", vec![("sigma_1", s1), ("sigma_2", s2)])
            .expect("Pauli matrices are Hermitian by construction")
    }

    /// The partner set {−Aᵢᵀ} with the same operator labels.
    pub fn partner(&self) -> Self {
        let items: Vec<(String, ComplexMatrix)> = self
            .observables
            .iter()
            .map(|o| {
                (
                    o.label().to_string(),
                    partner_operator(o.matrix()).expect("observables are Hermitian"),
                )
            })
            .collect();
        Self::new(format!("partner({})", self.label), items)
            .expect("partner of a Hermitian operator is Hermitian")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.observables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observables.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.observables[0].dim()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Observable> {
        self.observables.iter()
    }

    pub fn get(&self, k: usize) -> &Observable {
        &self.observables[k]
    }
}

/// GUE-style random Hermitian matrix, for property tests and random witness
/// sets.
pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    (&g + &g.adjoint()).scale(Complex64::new(0.5, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PureState;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        &(a * b) - &(b * a)
    }

    #[test]
    fn lz_for_spin_half() {
        let (_, _, lz) = spin_matrices(Spin::HALF);
        assert!(lz.max_abs_diff(&ComplexMatrix::diag(&[0.5, -0.5])) < 1e-15);
    }

    #[test]
    fn casimir_identity_holds() {
        for doubled in 1..=10u32 {
            let l = Spin::from_doubled(doubled).unwrap();
            let (lx, ly, lz) = spin_matrices(l);
            let total = &(&(&lx * &lx) + &(&ly * &ly)) + &(&lz * &lz);
            let expected =
                ComplexMatrix::identity(l.dim()).scale(Complex64::new(l.value() * (l.value() + 1.0), 0.0));
            assert!(
                total.max_abs_diff(&expected) < 1e-12,
                "Casimir identity violated at l={l}"
            );
        }
    }

    #[test]
    fn spin1_lx_offdiagonals() {
        let (lx, _, _) = spin_matrices(Spin::ONE);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        for (i, j) in [(0, 1), (1, 0), (1, 2), (2, 1)] {
            assert!((lx[(i, j)] - Complex64::new(inv_sqrt2, 0.0)).norm() < 1e-14);
        }
        assert!(lx[(0, 2)].norm() < 1e-15 && lx[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn commutation_relations_up_to_l_5() {
        for doubled in 1..=10u32 {
            let l = Spin::from_doubled(doubled).unwrap();
            let (lx, ly, lz) = spin_matrices(l);
            let i = Complex64::new(0.0, 1.0);
            assert!(commutator(&lx, &ly).max_abs_diff(&lz.scale(i)) < 1e-12);
            assert!(commutator(&ly, &lz).max_abs_diff(&lx.scale(i)) < 1e-12);
            assert!(commutator(&lz, &lx).max_abs_diff(&ly.scale(i)) < 1e-12);
        }
    }

    #[test]
    fn spectrum_of_each_component_is_m_ladder() {
        let l = Spin::try_from_value(1.5).unwrap();
        let (lx, ly, lz) = spin_matrices(l);
        for op in [lx, ly, lz] {
            let eig = eig_hermitian(&op, &Tolerances::default()).unwrap();
            let expected = [1.5, 0.5, -0.5, -1.5];
            for (got, want) in eig.values.iter().zip(expected) {
                assert!((got - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn invalid_spins_are_rejected() {
        assert!(matches!(Spin::try_from_value(0.0), Err(Error::InvalidSpin(_))));
        assert!(matches!(Spin::try_from_value(-1.0), Err(Error::InvalidSpin(_))));
        assert!(matches!(Spin::try_from_value(0.7), Err(Error::InvalidSpin(_))));
        assert!(Spin::try_from_value(2.5).is_ok());
    }

    #[test]
    fn pauli_algebra() {
        let (s1, s2, s3) = pauli_matrices();
        assert!(s3.max_abs_diff(&ComplexMatrix::diag(&[1.0, -1.0])) < 1e-15);
        let i = Complex64::new(0.0, 1.0);
        assert!((&s1 * &s2).max_abs_diff(&s3.scale(i)) < 1e-14);
    }

    #[test]
    fn pauli_sum_uncertainty_is_two_on_pure_states() {
        // δσ1²+δσ2²+δσ3² = 3 − |Bloch|² = 2 for every pure qubit state.
        let set = ObservableSet::pauli3();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let psi = crate::states::random_pure(2, &mut rng);
            let total: f64 = set
                .iter()
                .map(|o| psi.expectation(o.squared()) - psi.expectation(o.matrix()).powi(2))
                .sum();
            assert!((total - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn partner_of_pauli_y_is_itself() {
        let (_, s2, s3) = pauli_matrices();
        assert!(partner_operator(&s2).unwrap().max_abs_diff(&s2) < 1e-15);
        assert!(
            partner_operator(&s3)
                .unwrap()
                .max_abs_diff(&s3.scale(Complex64::new(-1.0, 0.0)))
                < 1e-15
        );
    }

    #[test]
    fn partner_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 3, 5] {
            let a = random_hermitian(n, &mut rng);
            let back = partner_operator(&partner_operator(&a).unwrap()).unwrap();
            assert!(back.max_abs_diff(&a) < 1e-12);
        }
    }

    #[test]
    fn partner_rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[
            vec![Complex64::ZERO, Complex64::ONE],
            vec![Complex64::ZERO, Complex64::ZERO],
        ]);
        assert!(matches!(partner_operator(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn partner_pair_annihilates_the_maximally_entangled_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in [2, 3, 4] {
            let a = random_hermitian(n, &mut rng);
            let b = partner_operator(&a).unwrap();
            let joint = &a.kron(&ComplexMatrix::identity(n)) + &ComplexMatrix::identity(n).kron(&b);
            let e_max = crate::states::max_entangled(n);
            let image = joint.apply(e_max.amplitudes());
            let residual = crate::linalg::vec_norm(&image);
            assert!(residual < 1e-10, "residual {residual} for n={n}");
        }
    }

    #[test]
    fn observable_set_requires_matching_dims() {
        let err = ObservableSet::new(
            "bad",
            vec![
                ("a", ComplexMatrix::identity(2)),
                ("b", ComplexMatrix::identity(3)),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::DimMismatch { .. }));
    }

    #[test]
    fn pure_state_helper_matches_density_expectation() {
        let psi = PureState::new(vec![Complex64::ONE, Complex64::ZERO]).unwrap();
        let (_, _, s3) = pauli_matrices();
        assert!((psi.expectation(&s3) - 1.0).abs() < 1e-14);
    }
}
