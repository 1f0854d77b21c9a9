//! Property-based invariants on randomized inputs.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lur::linalg::{eig_hermitian, expectation, tensor_product, ComplexMatrix};
use lur::operators::random_hermitian;
use lur::states::{mix, random_density, MixtureTerm};
use lur::uncertainty::variance;
use lur::Tolerances;

fn hermitian_from_seed(seed: u64, dim: usize) -> ComplexMatrix {
    random_hermitian(dim, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_product_trace_is_multiplicative(seed in any::<u64>(), da in 2usize..5, db in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_hermitian(da, &mut rng);
        let b = random_hermitian(db, &mut rng);
        let lhs = tensor_product(&a, &b).trace();
        let rhs = a.trace() * b.trace();
        prop_assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn eigenvalue_sum_matches_trace_and_reconstruction_holds(seed in any::<u64>(), dim in 2usize..7) {
        let m = hermitian_from_seed(seed, dim);
        let eig = eig_hermitian(&m, &Tolerances::default()).unwrap();
        let sum: f64 = eig.values.iter().sum();
        prop_assert!((sum - m.trace().re).abs() < 1e-9);
        prop_assert!(eig.reconstruct().max_abs_diff(&m) < 1e-9);
    }

    #[test]
    fn expectation_is_linear_in_the_operator(seed in any::<u64>(), dim in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density(dim, &mut rng);
        let a = random_hermitian(dim, &mut rng);
        let b = random_hermitian(dim, &mut rng);
        let (x, y) = (rng.random::<f64>() * 4.0 - 2.0, rng.random::<f64>() * 4.0 - 2.0);
        let combo = &a.scale(Complex64::new(x, 0.0)) + &b.scale(Complex64::new(y, 0.0));
        let lhs = expectation(&rho, &combo).unwrap();
        let rhs = x * expectation(&rho, &a).unwrap() + y * expectation(&rho, &b).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn mixture_variance_dominates_averaged_variances(seed in any::<u64>(), dim in 2usize..5, terms in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut weights: Vec<f64> = (0..terms).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        let states: Vec<_> = (0..terms).map(|_| random_density(dim, &mut rng)).collect();
        let mixture = mix(&weights.iter().zip(&states).map(|(&weight, state)| MixtureTerm {
            weight,
            state: state.clone(),
        }).collect::<Vec<_>>()).unwrap();

        let s = random_hermitian(dim, &mut rng);
        let mixed = variance(&mixture, &s).unwrap();
        let averaged: f64 = weights.iter().zip(&states).map(|(w, st)| w * variance(st, &s).unwrap()).sum();
        prop_assert!(mixed >= averaged - 1e-10);
    }
}
