//! Small named maps used in documentation, tests and the command line tool.

use crate::matrix::Matrix;
use crate::qhm::QuadraticHarmonicMorphism;

/// `z ↦ z²` on `ℝ² ≅ ℂ`: components `diag(1, −1)` and `[[0, 1], [1, 0]]`.
pub fn z_squared() -> QuadraticHarmonicMorphism {
    QuadraticHarmonicMorphism::new_unchecked(2, z_squared_components())
}

pub fn z_squared_components() -> Vec<Matrix> {
    vec![Matrix::diag_ints(&[1, -1]), Matrix::from_ints(2, 2, &[0, 1, 1, 0])]
}

/// A map `ℝ⁸ → ℝ³` with positive eigenvalues 2 and 3, each of multiplicity
/// two:
///
/// ```text
/// φ¹ = 2(x₁² + x₂²) + 3(x₃² + x₄²) − 2(x₅² + x₆²) − 3(x₇² + x₈²)
/// φ² = 4(x₁x₅ + x₂x₆) + 6(x₃x₈ − x₄x₇)
/// φ³ = 4(x₂x₅ − x₁x₆) + 6(x₃x₇ + x₄x₈)
/// ```
///
/// It is not umbilical and splits as `3φ₀ ⊕ 2φ₀` with `φ₀: ℝ⁴ → ℝ³`.
pub fn two_scale_r8_components() -> Vec<Matrix> {
    let mut a2 = vec![0i64; 64];
    let mut a3 = vec![0i64; 64];
    let set = |a: &mut Vec<i64>, i: usize, j: usize, v: i64| {
        a[(i - 1) * 8 + j - 1] = v;
        a[(j - 1) * 8 + i - 1] = v;
    };
    set(&mut a2, 1, 5, 2);
    set(&mut a2, 2, 6, 2);
    set(&mut a2, 3, 8, 3);
    set(&mut a2, 4, 7, -3);
    set(&mut a3, 1, 6, -2);
    set(&mut a3, 2, 5, 2);
    set(&mut a3, 3, 7, 3);
    set(&mut a3, 4, 8, 3);
    vec![
        Matrix::diag_ints(&[2, 2, 3, 3, -2, -2, -3, -3]),
        Matrix::from_ints(8, 8, &a2),
        Matrix::from_ints(8, 8, &a3),
    ]
}

pub fn two_scale_r8() -> QuadraticHarmonicMorphism {
    QuadraticHarmonicMorphism::new_unchecked(8, two_scale_r8_components())
}
