use num_bigint::BigUint;
use serde::Serialize;

use super::classify::classify;
use super::QuadraticHarmonicMorphism;
use crate::error::{Error, Result};
use crate::matrix::{is_symmetric, Matrix, Scalar, TolerancePolicy};
use crate::sampling::{gaussian_point, norm, unit_point};

/// Sampled differential conditions: the Laplacian of each component and the
/// Gram matrix of the component gradients, both from central differences
/// with step 1 (exact for quadratics up to rounding).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampledCriteria {
    /// Largest `|Δφ^α(X)| / (2 s √m)` with `s = max_α ‖A_α‖_F`.
    pub max_laplacian: f64,
    /// Largest deviation of the gradient Gram matrix from `λ²(X)·I`,
    /// relative to `4 s² ‖X‖²`.
    pub max_conformal_defect: f64,
    /// `λ²(X) = ‖∇φ^1(X)‖²` at each sample point.
    pub dilations: Vec<f64>,
}

impl SampledCriteria {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_laplacian <= tol && self.max_conformal_defect <= tol
    }
}

fn forms(components: &[Matrix]) -> (usize, Vec<Vec<f64>>) {
    (components[0].rows(), components.iter().map(Matrix::to_f64_vec).collect())
}

fn quad(a: &[f64], m: usize, x: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..m {
        let row = &a[i * m..(i + 1) * m];
        acc += x[i] * row.iter().zip(x).map(|(r, v)| r * v).sum::<f64>();
    }
    acc
}

/// Gradient (by central differences) and Laplacian of `X ↦ XᵗAX` at `x`.
fn differentials(a: &[f64], m: usize, x: &[f64]) -> (Vec<f64>, f64) {
    let f0 = quad(a, m, x);
    let mut grad = Vec::with_capacity(m);
    let mut lap = 0.0;
    let mut y = x.to_vec();
    for i in 0..m {
        y[i] = x[i] + 1.0;
        let fp = quad(a, m, &y);
        y[i] = x[i] - 1.0;
        let fm = quad(a, m, &y);
        y[i] = x[i];
        grad.push((fp - fm) / 2.0);
        lap += fp - 2.0 * f0 + fm;
    }
    (grad, lap)
}

/// Evaluates the harmonic morphism conditions at `samples` seeded Gaussian
/// points without using any matrix identity.
pub fn sampled_criteria(components: &[Matrix], samples: usize, seed: u64) -> SampledCriteria {
    let (m, a) = forms(components);
    let s = components.iter().map(Matrix::frobenius_norm).fold(0.0_f64, f64::max);
    let mut out = SampledCriteria {
        max_laplacian: 0.0,
        max_conformal_defect: 0.0,
        dilations: Vec::with_capacity(samples),
    };
    if s == 0.0 {
        out.dilations = vec![0.0; samples];
        return out;
    }
    for k in 0..samples as u64 {
        let x = gaussian_point(m, seed, k);
        let r2 = x.iter().map(|v| v * v).sum::<f64>();
        let diffs: Vec<(Vec<f64>, f64)> = a.iter().map(|ai| differentials(ai, m, &x)).collect();
        for (_, lap) in &diffs {
            out.max_laplacian = out.max_laplacian.max(lap.abs() / (2.0 * s * (m as f64).sqrt()));
        }
        let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(p, q)| p * q).sum::<f64>();
        let lambda2 = dot(&diffs[0].0, &diffs[0].0);
        let denom = 4.0 * s * s * r2;
        for (alpha, (ga, _)) in diffs.iter().enumerate() {
            for (beta, (gb, _)) in diffs.iter().enumerate().skip(alpha) {
                let g = dot(ga, gb);
                let target = if alpha == beta { lambda2 } else { 0.0 };
                if denom > 0.0 {
                    out.max_conformal_defect = out.max_conformal_defect.max((g - target).abs() / denom);
                }
            }
        }
        out.dilations.push(lambda2);
    }
    out
}

/// Outcome of [`verify_isoparametric`] for `F(x) = xᵗMx`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsoparametricReport {
    pub holds: bool,
    /// `ΔF`, which for a quadratic is the constant `2·tr M`.
    pub c: f64,
    /// `s` with `s² = tr(M²)/m`; the gradient condition is tested for `F/s`.
    pub scale: f64,
    /// Largest `|‖∇F‖² − 4s²‖x‖²| / (4s²‖x‖²)` over the samples.
    pub max_gradient_defect: f64,
    /// Largest `|ΔF(x) − c|` over the samples.
    pub max_laplacian_defect: f64,
}

const ISOPARAMETRIC_TOL: f64 = 1e-9;

/// Checks the degree-2 isoparametric conditions `‖∇F‖² = 4‖x‖²` and
/// `ΔF = c` at seeded points, after normalising `F` so that `M²` has unit
/// mean eigenvalue. The gradient condition holds exactly when `M² = s²I`.
pub fn verify_isoparametric(f: &Matrix, samples: usize, seed: u64) -> Result<IsoparametricReport> {
    if !f.is_square() {
        return Err(Error::NotSquare {
            rows: f.rows(),
            cols: f.cols(),
        });
    }
    if !is_symmetric(f, &TolerancePolicy::default()) {
        return Err(Error::NotSymmetric { member: 1 });
    }
    let m = f.rows();
    let c = 2.0 * f.trace().to_f64();
    let scale = ((f * f).trace().to_f64() / m as f64).sqrt();
    let a = f.to_f64_vec();
    let mut max_gradient_defect = 0.0_f64;
    let mut max_laplacian_defect = 0.0_f64;
    for k in 0..samples as u64 {
        let x = gaussian_point(m, seed, k);
        let r2 = x.iter().map(|v| v * v).sum::<f64>();
        let (grad, lap) = differentials(&a, m, &x);
        let g2 = grad.iter().map(|v| v * v).sum::<f64>();
        let target = 4.0 * scale * scale * r2;
        if target > 0.0 {
            max_gradient_defect = max_gradient_defect.max((g2 - target).abs() / target);
        }
        max_laplacian_defect = max_laplacian_defect.max((lap - c).abs());
    }
    let holds = scale > 0.0
        && max_gradient_defect <= ISOPARAMETRIC_TOL
        && max_laplacian_defect <= ISOPARAMETRIC_TOL * scale.max(1.0) * m as f64;
    Ok(IsoparametricReport {
        holds,
        c,
        scale,
        max_gradient_defect,
        max_laplacian_defect,
    })
}

/// Outcome of [`sphere_restriction_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SphereReport {
    /// The positive eigenvalue `λ`; unit vectors should map to `‖φ‖ = λ`.
    pub radius: f64,
    /// Largest `|‖φ(x)‖ − λ|` over unit sample points.
    pub max_defect: f64,
    pub holds: bool,
}

/// For umbilical `φ` with eigenvalue `λ`, tests `‖φ(x)‖ = λ‖x‖²` on seeded
/// unit vectors. This holds for Hopf maps and `z ↦ z²`, but not for every
/// umbilical map (a single component `λ(‖x‖² − ‖y‖²)` fails it).
pub fn sphere_restriction_check(phi: &QuadraticHarmonicMorphism, samples: usize, seed: u64) -> Result<SphereReport> {
    let report = classify(phi)?;
    if !report.is_umbilical {
        return Err(Error::NotUmbilical);
    }
    let radius = report.splitting[0].scale.to_f64();
    let mut max_defect = 0.0_f64;
    for k in 0..samples as u64 {
        let x = unit_point(phi.m(), seed, k);
        let v = phi.evaluate(&x)?;
        max_defect = max_defect.max((norm(&v) - radius).abs());
    }
    Ok(SphereReport {
        radius,
        max_defect,
        holds: max_defect <= 1e-9 * radius.max(1.0),
    })
}

/// Number of bi-equivalence classes of maps `ℝ^{2k·m(n)} → ℝ^{n+1}` with
/// fixed distinct scales: `1` unless `n ≡ 0 mod 4`, where each of the `k`
/// summands comes in two classes and a sign change of the last range
/// coordinate flips all of them at once, leaving `2^{k−1}`.
pub fn count_biequivalence_classes(n: usize, k: usize) -> BigUint {
    assert!(n >= 1 && k >= 1, "n and k must be positive");
    if !n.is_multiple_of(4) {
        BigUint::from(1u8)
    } else {
        BigUint::from(1u8) << (k - 1)
    }
}

/// `tr(A_1 A_2 ⋯ A_n)`. For a Clifford system with `n ≡ 1 mod 4` members on
/// an irreducible module this is `±2m` and separates the two classes.
pub fn volume_trace(components: &[Matrix]) -> Scalar {
    components
        .iter()
        .skip(1)
        .fold(components[0].clone(), |acc, a| &acc * a)
        .trace()
}
