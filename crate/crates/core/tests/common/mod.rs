#![allow(dead_code)]

use proptest::test_runner::{Config, RngSeed};
use qhm_core::clifford::construct_irreducible;
use qhm_core::matrix::random_orthogonal;
use qhm_core::qhm::{self, verify_qhm, QuadraticHarmonicMorphism};
use qhm_core::sampling::gaussian_point;
use qhm_core::{Matrix, Scalar, TolerancePolicy};

/// Deterministic proptest configuration.
pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x9e37_79b9),
        failure_persistence: None,
        ..Config::default()
    }
}

/// Symmetric matrix with Gaussian entries.
pub fn random_symmetric(m: usize, seed: u64) -> Matrix {
    let g = Matrix::from_f64s(m, m, gaussian_point(m * m, seed, 0));
    (&g + &g.transpose()).scale_f64(0.5)
}

/// A valid map built from the irreducible family: a sum of scaled copies of
/// the `n`-member Clifford map (either class), an optional kernel of
/// dimension `kernel`, then a seeded rotation of the domain.
pub fn valid_map(n: usize, scales: &[i64], kernel: usize, seed: u64) -> QuadraticHarmonicMorphism {
    let base = construct_irreducible(n);
    let parts: Vec<QuadraticHarmonicMorphism> = scales
        .iter()
        .enumerate()
        .map(|(j, &l)| {
            let cs = if (seed >> j) & 1 == 1 { base.with_negated(n) } else { base.clone() };
            qhm::scaled(&qhm::from_clifford(&cs).unwrap(), &Scalar::int(l))
        })
        .collect();
    let sum = parts[1..]
        .iter()
        .fold(parts[0].clone(), |acc, p| qhm::direct_sum(&acc, p).unwrap());
    let padded: Vec<Matrix> = sum
        .components()
        .iter()
        .map(|a| Matrix::block_diag(&[a, &Matrix::zeros(kernel, kernel)]))
        .collect();
    let m = sum.m() + kernel;
    let phi = verify_qhm(&padded, &TolerancePolicy::default(), 8, seed).unwrap();
    phi.precomposed(&random_orthogonal(m, seed))
}

pub fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}
