//! Seeded sample points. Each sample gets its own ChaCha stream derived from
//! `(seed, index)`, so results do not depend on evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub(crate) fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Standard Gaussian vector in `ℝ^dim` for sample `index`.
pub fn gaussian_point(dim: usize, seed: u64, index: u64) -> Vec<f64> {
    let mut rng = sample_rng(seed, index);
    (0..dim).map(|_| rng.sample(StandardNormal)).collect()
}

/// Uniform point on the unit sphere `S^{dim-1}` for sample `index`.
pub fn unit_point(dim: usize, seed: u64, index: u64) -> Vec<f64> {
    normalized(gaussian_point(dim, seed, index))
}

fn normalized(mut v: Vec<f64>) -> Vec<f64> {
    let n = norm(&v);
    if n == 0.0 {
        // Probability zero; fall back to a fixed axis.
        v[0] = 1.0;
        return v;
    }
    v.iter_mut().for_each(|x| *x /= n);
    v
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
