use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::{rational_to_f64, Scalar};

#[derive(Clone, Debug, PartialEq)]
enum Entries {
    Exact(Vec<BigRational>),
    Approx(Vec<f64>),
}

/// Dense row-major matrix over exact rationals or floats.
///
/// The whole matrix shares one scalar mode. Binary operations between an exact
/// and a float matrix produce a float matrix. Shape mismatches in the operator
/// impls panic, like the dense types of most linear algebra crates; the public
/// verifiers check shapes first and report [`crate::Error`] values instead.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Entries,
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: Entries::Exact(vec![BigRational::zero(); rows * cols]),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        if let Entries::Exact(e) = &mut m.entries {
            for i in 0..n {
                e[i * n + i] = BigRational::one();
            }
        }
        m
    }

    /// Exact matrix from row-major integers.
    pub fn from_ints(rows: usize, cols: usize, data: &[i64]) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        Matrix {
            rows,
            cols,
            entries: Entries::Exact(data.iter().map(|&v| rat(v)).collect()),
        }
    }

    pub fn from_rationals(rows: usize, cols: usize, data: Vec<BigRational>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        Matrix {
            rows,
            cols,
            entries: Entries::Exact(data),
        }
    }

    pub fn from_f64s(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        Matrix {
            rows,
            cols,
            entries: Entries::Approx(data),
        }
    }

    /// Builds from scalars; the result is exact only if every entry is.
    pub fn from_scalars(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        if data.iter().all(Scalar::is_exact) {
            let v = data
                .into_iter()
                .map(|s| match s {
                    Scalar::Exact(q) => q,
                    Scalar::Approx(_) => unreachable!(),
                })
                .collect();
            Matrix::from_rationals(rows, cols, v)
        } else {
            Matrix::from_f64s(rows, cols, data.iter().map(Scalar::to_f64).collect())
        }
    }

    pub fn diag_ints(diag: &[i64]) -> Self {
        let n = diag.len();
        let mut data = vec![0; n * n];
        for (i, &d) in diag.iter().enumerate() {
            data[i * n + i] = d;
        }
        Matrix::from_ints(n, n, &data)
    }

    pub fn diag_f64s(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut data = vec![0.0; n * n];
        for (i, &d) in diag.iter().enumerate() {
            data[i * n + i] = d;
        }
        Matrix::from_f64s(n, n, data)
    }

    pub fn from_nalgebra(m: &DMatrix<f64>) -> Self {
        let (rows, cols) = m.shape();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(m[(i, j)]);
            }
        }
        Matrix::from_f64s(rows, cols, data)
    }

    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        let v = self.to_f64_vec();
        DMatrix::from_row_slice(self.rows, self.cols, &v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.entries, Entries::Exact(_))
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        let k = i * self.cols + j;
        match &self.entries {
            Entries::Exact(e) => Scalar::Exact(e[k].clone()),
            Entries::Approx(e) => Scalar::Approx(e[k]),
        }
    }

    pub fn get_f64(&self, i: usize, j: usize) -> f64 {
        let k = i * self.cols + j;
        match &self.entries {
            Entries::Exact(e) => rational_to_f64(&e[k]),
            Entries::Approx(e) => e[k],
        }
    }

    /// Borrow the exact entries, if this matrix is exact.
    pub fn exact_entries(&self) -> Option<&[BigRational]> {
        match &self.entries {
            Entries::Exact(e) => Some(e),
            Entries::Approx(_) => None,
        }
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        match &self.entries {
            Entries::Exact(e) => e.iter().map(rational_to_f64).collect(),
            Entries::Approx(e) => e.clone(),
        }
    }

    pub fn to_approx(&self) -> Matrix {
        Matrix::from_f64s(self.rows, self.cols, self.to_f64_vec())
    }

    pub fn row_f64(&self, i: usize) -> Vec<f64> {
        (0..self.cols).map(|j| self.get_f64(i, j)).collect()
    }

    pub fn col_f64(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get_f64(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let (r, c) = (self.rows, self.cols);
        let idx = |k: usize| (k % r) * c + k / r;
        let entries = match &self.entries {
            Entries::Exact(e) => Entries::Exact((0..r * c).map(|k| e[idx(k)].clone()).collect()),
            Entries::Approx(e) => Entries::Approx((0..r * c).map(|k| e[idx(k)]).collect()),
        };
        Matrix {
            rows: c,
            cols: r,
            entries,
        }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        match (&self.entries, s) {
            (Entries::Exact(e), Scalar::Exact(q)) => {
                Matrix::from_rationals(self.rows, self.cols, e.iter().map(|x| x * q).collect())
            }
            _ => {
                let f = s.to_f64();
                Matrix::from_f64s(
                    self.rows,
                    self.cols,
                    self.to_f64_vec().into_iter().map(|x| x * f).collect(),
                )
            }
        }
    }

    pub fn scale_f64(&self, s: f64) -> Matrix {
        self.scale(&Scalar::Approx(s))
    }

    pub fn trace(&self) -> Scalar {
        let n = self.rows.min(self.cols);
        match &self.entries {
            Entries::Exact(e) => {
                Scalar::Exact((0..n).fold(BigRational::zero(), |acc, i| acc + &e[i * self.cols + i]))
            }
            Entries::Approx(e) => Scalar::Approx((0..n).map(|i| e[i * self.cols + i]).sum()),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.to_f64_vec().iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.to_f64_vec().iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// True when every entry is exactly zero.
    pub fn is_zero(&self) -> bool {
        match &self.entries {
            Entries::Exact(e) => e.iter().all(Zero::is_zero),
            Entries::Approx(e) => e.iter().all(|x| *x == 0.0),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (r1, c1) = self.shape();
        let (r2, c2) = other.shape();
        let rows = r1 * r2;
        let cols = c1 * c2;
        let pos = |i1: usize, j1: usize, i2: usize, j2: usize| (i1 * r2 + i2) * cols + j1 * c2 + j2;
        match (&self.entries, &other.entries) {
            (Entries::Exact(a), Entries::Exact(b)) => {
                let mut out = vec![BigRational::zero(); rows * cols];
                for i1 in 0..r1 {
                    for j1 in 0..c1 {
                        let x = &a[i1 * c1 + j1];
                        if x.is_zero() {
                            continue;
                        }
                        for i2 in 0..r2 {
                            for j2 in 0..c2 {
                                let y = &b[i2 * c2 + j2];
                                if !y.is_zero() {
                                    out[pos(i1, j1, i2, j2)] = x * y;
                                }
                            }
                        }
                    }
                }
                Matrix::from_rationals(rows, cols, out)
            }
            _ => {
                let a = self.to_f64_vec();
                let b = other.to_f64_vec();
                let mut out = vec![0.0; rows * cols];
                for i1 in 0..r1 {
                    for j1 in 0..c1 {
                        for i2 in 0..r2 {
                            for j2 in 0..c2 {
                                out[pos(i1, j1, i2, j2)] = a[i1 * c1 + j1] * b[i2 * c2 + j2];
                            }
                        }
                    }
                }
                Matrix::from_f64s(rows, cols, out)
            }
        }
    }

    /// Block-diagonal matrix `diag(blocks[0], blocks[1], ...)`.
    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// `[[a, b], [c, d]]`. Block shapes must tile.
    pub fn from_blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let mut out = Matrix::zeros(a.rows + c.rows, a.cols + b.cols);
        out.set_block(0, 0, a);
        out.set_block(0, a.cols, b);
        out.set_block(a.rows, 0, c);
        out.set_block(a.rows, a.cols, d);
        out
    }

    /// Overwrites the sub-block at `(r0, c0)`. Promotes `self` to float if
    /// `block` is float.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        if self.is_exact() && !block.is_exact() {
            *self = self.to_approx();
        }
        let cols = self.cols;
        match &mut self.entries {
            Entries::Exact(e) => {
                let src = block.exact_entries().expect("exact block");
                for i in 0..block.rows {
                    for j in 0..block.cols {
                        e[(r0 + i) * cols + c0 + j] = src[i * block.cols + j].clone();
                    }
                }
            }
            Entries::Approx(e) => {
                for i in 0..block.rows {
                    for j in 0..block.cols {
                        e[(r0 + i) * cols + c0 + j] = block.get_f64(i, j);
                    }
                }
            }
        }
    }

    /// Sub-matrix picking the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        match &self.entries {
            Entries::Exact(e) => Matrix::from_rationals(
                rows.len(),
                cols.len(),
                rows.iter()
                    .flat_map(|&i| cols.iter().map(move |&j| e[i * self.cols + j].clone()))
                    .collect(),
            ),
            Entries::Approx(e) => Matrix::from_f64s(
                rows.len(),
                cols.len(),
                rows.iter()
                    .flat_map(|&i| cols.iter().map(move |&j| e[i * self.cols + j]))
                    .collect(),
            ),
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let r: Vec<usize> = (r0..r0 + rows).collect();
        let c: Vec<usize> = (c0..c0 + cols).collect();
        self.select(&r, &c)
    }

    /// Matrix whose rows are `self` rows permuted: row `i` of the result is
    /// row `perm[i]` of `self`.
    pub fn permutation(perm: &[usize]) -> Matrix {
        let n = perm.len();
        let mut data = vec![0; n * n];
        for (i, &p) in perm.iter().enumerate() {
            data[i * n + p] = 1;
        }
        Matrix::from_ints(n, n, &data)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        let v = self.to_f64_vec();
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| v[i * self.cols + j] * x[j]).sum())
            .collect()
    }

    /// `xᵗ A x` evaluated in floating point.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let ax = self.mul_vec(x);
        ax.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, other: &Matrix) -> Matrix {
        &(self * other) + &(other * self)
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        &(self * other) - &(other * self)
    }

    fn zip_with(&self, other: &Matrix, fe: impl Fn(&BigRational, &BigRational) -> BigRational, ff: impl Fn(f64, f64) -> f64) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        match (&self.entries, &other.entries) {
            (Entries::Exact(a), Entries::Exact(b)) => Matrix::from_rationals(
                self.rows,
                self.cols,
                a.iter().zip(b).map(|(x, y)| fe(x, y)).collect(),
            ),
            _ => {
                let a = self.to_f64_vec();
                let b = other.to_f64_vec();
                Matrix::from_f64s(
                    self.rows,
                    self.cols,
                    a.iter().zip(&b).map(|(x, y)| ff(*x, *y)).collect(),
                )
            }
        }
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a + b, |a, b| a + b)
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a - b, |a, b| a - b)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(&Scalar::int(-1))
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let (n, k, m) = (self.rows, self.cols, rhs.cols);
        match (&self.entries, &rhs.entries) {
            (Entries::Exact(a), Entries::Exact(b)) => {
                // Constructed systems are signed permutations; skip zeros.
                let mut out = vec![BigRational::zero(); n * m];
                for i in 0..n {
                    for l in 0..k {
                        let x = &a[i * k + l];
                        if x.is_zero() {
                            continue;
                        }
                        for j in 0..m {
                            let y = &b[l * m + j];
                            if !y.is_zero() {
                                out[i * m + j] += x * y;
                            }
                        }
                    }
                }
                Matrix::from_rationals(n, m, out)
            }
            _ => {
                let a = self.to_f64_vec();
                let b = rhs.to_f64_vec();
                let mut out = vec![0.0; n * m];
                for i in 0..n {
                    for l in 0..k {
                        let x = a[i * k + l];
                        if x == 0.0 {
                            continue;
                        }
                        let row = &b[l * m..(l + 1) * m];
                        let dst = &mut out[i * m..(i + 1) * m];
                        for (d, y) in dst.iter_mut().zip(row) {
                            *d += x * y;
                        }
                    }
                }
                Matrix::from_f64s(n, m, out)
            }
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = if self.is_exact() { "exact" } else { "float" };
        writeln!(f, "Matrix {}x{} ({mode})", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
