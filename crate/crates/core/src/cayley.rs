//! Left-multiplication matrices of the real division algebras ℝ, ℂ, ℍ, 𝕆,
//! built by Cayley–Dickson doubling with the product
//! `(a, b)(c, d) = (ac − d̄b, da + bc̄)`.

use crate::matrix::Matrix;

fn conj(x: &[i64]) -> Vec<i64> {
    let mut out: Vec<i64> = x.iter().map(|v| -v).collect();
    out[0] = x[0];
    out
}

fn add(x: &[i64], y: &[i64]) -> Vec<i64> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn sub(x: &[i64], y: &[i64]) -> Vec<i64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

/// Cayley–Dickson product of two elements of dimension `2^k`.
pub(crate) fn product(x: &[i64], y: &[i64]) -> Vec<i64> {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    if n == 1 {
        return vec![x[0] * y[0]];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let first = sub(&product(a, c), &product(&conj(d), b));
    let second = add(&product(d, a), &product(b, &conj(c)));
    [first, second].concat()
}

/// Matrix of `y ↦ e_i · y` on the algebra of dimension `n ∈ {1, 2, 4, 8}`.
pub(crate) fn left_mult(n: usize, i: usize) -> Matrix {
    let mut e = vec![0; n];
    e[i] = 1;
    let mut data = vec![0; n * n];
    for j in 0..n {
        let mut f = vec![0; n];
        f[j] = 1;
        let col = product(&e, &f);
        for (r, v) in col.into_iter().enumerate() {
            data[r * n + j] = v;
        }
    }
    Matrix::from_ints(n, n, &data)
}

/// `(L_{e_0}, …, L_{e_{n−1}})`; the first is the identity.
pub(crate) fn left_mults(n: usize) -> Vec<Matrix> {
    (0..n).map(|i| left_mult(n, i)).collect()
}
