use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::dense::Matrix;
use crate::error::{Error, Result};

/// Tolerances for the float path. Exact inputs never consult these.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TolerancePolicy {
    /// Relative Frobenius tolerance for matrix identities.
    pub identity_tol: f64,
    /// Relative gap below which eigenvalues are treated as one cluster, and
    /// the allowed defect when matching `±λ` pairs.
    pub eig_pair_tol: f64,
    /// Singular values below `rank_tol * σ_max` count as zero.
    pub rank_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            identity_tol: 1e-9,
            eig_pair_tol: 1e-8,
            rank_tol: 1e-9,
        }
    }
}

impl TolerancePolicy {
    pub fn new(identity_tol: f64, eig_pair_tol: f64, rank_tol: f64) -> Result<Self> {
        let ok = |t: f64| t.is_finite() && t > 0.0;
        if ok(identity_tol) && ok(eig_pair_tol) && ok(rank_tol) {
            Ok(TolerancePolicy {
                identity_tol,
                eig_pair_tol,
                rank_tol,
            })
        } else {
            Err(Error::InvalidTolerance)
        }
    }

    /// Default policy with a different identity tolerance.
    pub fn with_identity_tol(identity_tol: f64) -> Result<Self> {
        let d = Self::default();
        Self::new(identity_tol, d.eig_pair_tol, d.rank_tol)
    }

    /// Checks that `residual` vanishes: exactly for exact matrices, otherwise
    /// `‖residual‖_F ≤ identity_tol · scale`. Returns the verdict together
    /// with the residual norm.
    pub fn vanishes(&self, residual: &Matrix, scale: f64) -> (bool, f64) {
        let norm = residual.frobenius_norm();
        if residual.is_exact() {
            (residual.is_zero(), norm)
        } else {
            (norm <= self.identity_tol * scale.max(f64::MIN_POSITIVE), norm)
        }
    }

    pub(crate) fn same_cluster(&self, a: f64, b: f64, scale: f64) -> bool {
        (a - b).abs() <= self.eig_pair_tol * scale.max(1.0)
    }
}

/// Eigenvalues in descending order with matching orthonormal eigenvector
/// columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl SpectralDecomposition {
    /// `Q Λ Qᵗ`.
    pub fn reconstruct(&self) -> Matrix {
        let q = &self.eigenvectors;
        let lambda = Matrix::diag_f64s(&self.eigenvalues);
        &(q * &lambda) * &q.transpose()
    }

    /// Index ranges of eigenvalue clusters, in the stored (descending) order.
    pub fn clusters(&self, tol: &TolerancePolicy) -> Vec<std::ops::Range<usize>> {
        cluster_ranges(&self.eigenvalues, tol)
    }

    /// Eigenvector columns for indices `range`.
    pub fn columns(&self, range: std::ops::Range<usize>) -> Matrix {
        let n = self.eigenvectors.rows();
        self.eigenvectors.block(0, range.start, n, range.len())
    }
}

pub(crate) fn cluster_ranges(sorted_desc: &[f64], tol: &TolerancePolicy) -> Vec<std::ops::Range<usize>> {
    let scale = sorted_desc.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=sorted_desc.len() {
        if i == sorted_desc.len() || !tol.same_cluster(sorted_desc[i - 1], sorted_desc[i], scale) {
            out.push(start..i);
            start = i;
        }
    }
    out
}

const MAX_EIGEN_SWEEPS: usize = 10_000;

/// Symmetric eigen-decomposition with deterministic eigenvectors.
///
/// Within a cluster of (numerically) equal eigenvalues the basis returned by
/// the solver is discarded. The cluster projector is applied to the standard
/// basis vectors in index order and the images are Gram–Schmidt
/// orthonormalised, so the output only depends on the eigenspaces.
pub fn spectral_decompose(a: &Matrix, tol: &TolerancePolicy) -> Result<SpectralDecomposition> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if !is_symmetric(a, tol) {
        return Err(Error::NotSymmetric { member: 1 });
    }
    let n = a.rows();
    let m = a.to_nalgebra();
    let sym = (&m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, MAX_EIGEN_SWEEPS)
        .ok_or(Error::NoConvergence {
            iterations: MAX_EIGEN_SWEEPS,
        })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]).then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();

    let mut vectors = DMatrix::<f64>::zeros(n, n);
    for range in cluster_ranges(&eigenvalues, tol) {
        let mut v = DMatrix::<f64>::zeros(n, range.len());
        for (c, k) in range.clone().enumerate() {
            v.set_column(c, &eig.eigenvectors.column(order[k]));
        }
        let basis = canonical_basis(&(&v * v.transpose()), range.len());
        for (c, k) in range.enumerate() {
            vectors.set_column(k, &basis.column(c));
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors: Matrix::from_nalgebra(&vectors),
    })
}

/// Orthonormal basis (as columns) of the range of the orthogonal projector
/// `proj`, obtained by Gram–Schmidt on `proj·e_0, proj·e_1, …` in index order.
///
/// A candidate is accepted when its remainder exceeds `0.5/√n`; the total
/// remainder mass argument guarantees `dim` acceptances.
pub(crate) fn canonical_basis(proj: &DMatrix<f64>, dim: usize) -> DMatrix<f64> {
    let n = proj.nrows();
    let threshold = 0.5 / (n as f64).sqrt();
    let mut basis: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(dim);
    for i in 0..n {
        if basis.len() == dim {
            break;
        }
        let mut v = proj.column(i).clone_owned();
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&v);
                v -= b * c;
            }
        }
        let norm = v.norm();
        if norm > threshold {
            basis.push(v / norm);
        }
    }
    let mut out = DMatrix::<f64>::zeros(n, dim);
    for (c, b) in basis.iter().enumerate() {
        out.set_column(c, b);
    }
    out
}

pub fn is_symmetric(a: &Matrix, tol: &TolerancePolicy) -> bool {
    if !a.is_square() {
        return false;
    }
    let diff = a - &a.transpose();
    tol.vanishes(&diff, a.frobenius_norm()).0
}

/// Rank of `a`: exact Gaussian elimination for exact input, otherwise the
/// number of singular values above `rank_tol · σ_max`.
pub fn numeric_rank(a: &Matrix, tol: &TolerancePolicy) -> usize {
    if let Some(e) = a.exact_entries() {
        return exact_rank(e, a.rows(), a.cols());
    }
    let sv = SVD::new(a.to_nalgebra(), false, false).singular_values;
    let max = sv.iter().fold(0.0_f64, |m, s| m.max(*s));
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > tol.rank_tol * max).count()
}

fn exact_rank(entries: &[BigRational], rows: usize, cols: usize) -> usize {
    let mut m: Vec<Vec<BigRational>> = entries.chunks(cols).map(|r| r.to_vec()).collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in rank + 1..rows {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &pivot;
            for k in c..cols {
                let d = &f * &m[rank][k];
                m[r][k] -= d;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Seeded orthogonal matrix: QR of a Gaussian matrix with the signs of `R`'s
/// diagonal folded into `Q`, which makes the distribution Haar.
pub fn random_orthogonal(m: usize, seed: u64) -> Matrix {
    assert!(m >= 1, "dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::<f64>::from_fn(m, m, |_, _| StandardNormal.sample(&mut rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..m {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    Matrix::from_nalgebra(&q)
}

/// Orthonormal basis of the (numerical) null space of `a`, as columns. Uses
/// the right singular vectors whose singular values fall below
/// `rank_tol · max(σ_max, 1)`.
pub(crate) fn null_space(a: &DMatrix<f64>, tol: &TolerancePolicy) -> DMatrix<f64> {
    let n = a.ncols();
    // Pad to at least n rows so the SVD returns a full set of right vectors.
    let padded = if a.nrows() < n {
        let mut p = DMatrix::<f64>::zeros(n, n);
        p.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let max = svd.singular_values.iter().fold(1.0_f64, |m, s| m.max(*s));
    let cols: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= tol.rank_tol * max)
        .collect();
    let mut out = DMatrix::<f64>::zeros(n, cols.len());
    for (c, &i) in cols.iter().enumerate() {
        out.set_column(c, &v_t.row(i).transpose());
    }
    out
}

/// Orthogonal polar factor `U Vᵗ` of `x = U Σ Vᵗ`, the least-squares nearest
/// orthogonal matrix. `None` when `x` is numerically singular.
pub(crate) fn polar_factor(x: &DMatrix<f64>, tol: &TolerancePolicy) -> Option<DMatrix<f64>> {
    let svd = SVD::new(x.clone(), true, true);
    let max = svd.singular_values.iter().fold(0.0_f64, |m, s| m.max(*s));
    let min = svd.singular_values.iter().fold(f64::INFINITY, |m, s| m.min(*s));
    if max == 0.0 || min <= tol.rank_tol * max {
        return None;
    }
    Some(svd.u? * svd.v_t?)
}

/// Exact nullity of a sparse rational linear system (`rows` given as
/// `(column, coefficient)` lists over `unknowns` variables).
pub(crate) fn exact_sparse_nullity(rows: impl IntoIterator<Item = Vec<(usize, BigRational)>>, unknowns: usize) -> usize {
    use std::collections::BTreeMap;
    // pivot column -> reduced row with leading coefficient 1
    let mut pivots: BTreeMap<usize, BTreeMap<usize, BigRational>> = BTreeMap::new();
    for raw in rows {
        let mut row: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (c, v) in raw {
            let e = row.entry(c).or_insert_with(BigRational::zero);
            *e += v;
        }
        row.retain(|_, v| !v.is_zero());
        loop {
            let Some((&lead, lead_val)) = row.iter().next() else { break };
            match pivots.get(&lead) {
                Some(p) => {
                    let f = lead_val.clone();
                    for (c, v) in p {
                        let e = row.entry(*c).or_insert_with(BigRational::zero);
                        *e -= &f * v;
                        if e.is_zero() {
                            row.remove(c);
                        }
                    }
                }
                None => {
                    let inv = lead_val.recip();
                    for v in row.values_mut() {
                        *v *= &inv;
                    }
                    pivots.insert(lead, row);
                    break;
                }
            }
        }
        if pivots.len() == unknowns {
            break;
        }
    }
    unknowns - pivots.len()
}
