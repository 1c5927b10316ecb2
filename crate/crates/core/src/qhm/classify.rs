use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{direct_sum, scaled, QuadraticHarmonicMorphism};
use crate::error::{Error, Result};
use crate::matrix::{self, numeric_rank, spectral_decompose, Matrix, Scalar, TolerancePolicy};

/// Eigenvalues of `A_1` (and hence of every component).
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    /// Distinct positive eigenvalues in descending order with their
    /// multiplicities. Each `λ` is paired with a `−λ` of the same
    /// multiplicity.
    pub positive: Vec<(Scalar, usize)>,
    pub zero_count: usize,
}

impl Spectrum {
    /// The full multiset in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let pos: Vec<f64> = self
            .positive
            .iter()
            .flat_map(|(l, k)| std::iter::repeat_n(l.to_f64(), *k))
            .collect();
        let mut out = pos.clone();
        out.extend(std::iter::repeat_n(0.0, self.zero_count));
        out.extend(pos.iter().rev().map(|l| -l));
        out
    }
}

/// One umbilical piece `λ_j φ_j` of a splitting; `map` has eigenvalue 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Summand {
    pub scale: Scalar,
    pub map: QuadraticHarmonicMorphism,
}

/// Rank, spectrum and splitting of a quadratic harmonic morphism.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport {
    pub m: usize,
    pub n: usize,
    pub q_rank: usize,
    pub spectrum: Spectrum,
    pub is_q_nonsingular: bool,
    pub is_umbilical: bool,
    /// Summands in descending order of scale, one per distinct positive
    /// eigenvalue.
    pub splitting: Vec<Summand>,
    /// `C` (`q_rank × m`, orthonormal rows) with
    /// `φ(X) = (λ_1φ_1 ⊕ … ⊕ λ_kφ_k)(CX)`.
    pub coordinate_change: Matrix,
}

impl ClassificationReport {
    pub fn scales(&self) -> Vec<f64> {
        self.splitting.iter().map(|s| s.scale.to_f64()).collect()
    }

    /// `λ_1φ_1 ⊕ … ⊕ λ_kφ_k` on `ℝ^{q_rank}`; `None` for the zero map.
    pub fn reassemble(&self) -> Option<QuadraticHarmonicMorphism> {
        let mut parts = self.splitting.iter().map(|s| scaled(&s.map, &s.scale));
        let first = parts.next()?;
        Some(parts.fold(first, |acc, p| direct_sum(&acc, &p).expect("summands share the range")))
    }
}

/// `G A_1 Gᵗ = diag(D, −D)` and `G A_{α+1} Gᵗ = [[0, B_α], [B_αᵗ, 0]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm {
    pub change_of_coords: Matrix,
    /// Positive diagonal, descending.
    pub d: Matrix,
    pub b: Vec<Matrix>,
}

impl NormalForm {
    /// Largest relative residual of `DB_i = B_iD`, `B_iᵗB_i = D²` and
    /// `B_iᵗB_j = −B_jᵗB_i`, each measured against `‖D‖_F²`. Exact zero for
    /// exact normal forms of valid maps.
    pub fn relation_residual(&self) -> f64 {
        let d = &self.d;
        let d2 = d * d;
        let scale = d.frobenius_norm().powi(2).max(f64::MIN_POSITIVE);
        let mut worst = 0.0_f64;
        for (i, bi) in self.b.iter().enumerate() {
            worst = worst.max((&(d * bi) - &(bi * d)).frobenius_norm() / scale);
            let bit = bi.transpose();
            worst = worst.max((&(&bit * bi) - &d2).frobenius_norm() / scale);
            for bj in &self.b[i + 1..] {
                let r = &(&bit * bj) + &(&bj.transpose() * bi);
                worst = worst.max(r.frobenius_norm() / scale);
            }
        }
        worst
    }

    /// The components rebuilt from `(G, D, B)`.
    pub fn reassemble(&self) -> Vec<Matrix> {
        let g = &self.change_of_coords;
        let gt = g.transpose();
        let k = self.d.rows();
        let z = Matrix::zeros(k, k);
        let mut out = vec![&(&gt * &Matrix::block_diag(&[&self.d, &(-&self.d)])) * g];
        for b in &self.b {
            out.push(&(&gt * &Matrix::from_blocks(&z, b, &b.transpose(), &z)) * g);
        }
        out
    }
}

/// Eigenvalues in descending order with eigenvector columns. Exact diagonal
/// input is sorted directly (stable in index), giving an exact permutation.
fn sorted_eigen(a: &Matrix, tol: &TolerancePolicy) -> Result<(Vec<Scalar>, Matrix)> {
    if let Some(diag) = exact_diagonal(a) {
        let mut order: Vec<usize> = (0..diag.len()).collect();
        order.sort_by(|&i, &j| diag[j].cmp(&diag[i]));
        let values = order.iter().map(|&i| Scalar::Exact(diag[i].clone())).collect();
        return Ok((values, Matrix::permutation(&order).transpose()));
    }
    let sd = spectral_decompose(a, tol)?;
    Ok((sd.eigenvalues.into_iter().map(Scalar::Approx).collect(), sd.eigenvectors))
}

fn exact_diagonal(a: &Matrix) -> Option<Vec<BigRational>> {
    let e = a.exact_entries()?;
    let n = a.rows();
    for i in 0..n {
        for j in 0..n {
            if i != j && !e[i * n + j].is_zero() {
                return None;
            }
        }
    }
    Some((0..n).map(|i| e[i * n + i].clone()).collect())
}

fn cluster_scalars(values: &[Scalar], tol: &TolerancePolicy) -> Vec<std::ops::Range<usize>> {
    if values.iter().all(Scalar::is_exact) {
        let mut out = Vec::new();
        let mut start = 0;
        for i in 1..=values.len() {
            if i == values.len() || values[i] != values[i - 1] {
                out.push(start..i);
                start = i;
            }
        }
        out
    } else {
        let f: Vec<f64> = values.iter().map(Scalar::to_f64).collect();
        matrix::cluster_ranges(&f, tol)
    }
}

fn mean(values: &[Scalar]) -> Scalar {
    if values.iter().all(|v| *v == values[0]) {
        return values[0].clone();
    }
    Scalar::Approx(values.iter().map(Scalar::to_f64).sum::<f64>() / values.len() as f64)
}

fn scalars_pair(a: &Scalar, b: &Scalar, tol: &TolerancePolicy, scale: f64) -> bool {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => *x == -y.clone(),
        _ => (a.to_f64() + b.to_f64()).abs() <= tol.eig_pair_tol * scale.max(1.0),
    }
}

fn is_positive(v: &Scalar, floor: f64) -> bool {
    match v {
        Scalar::Exact(q) => q.is_positive(),
        Scalar::Approx(x) => *x > floor,
    }
}

/// [`classify_with`] under the default tolerances.
pub fn classify(phi: &QuadraticHarmonicMorphism) -> Result<ClassificationReport> {
    classify_with(phi, &TolerancePolicy::default())
}

/// Q-rank, spectrum, umbilicity and the splitting into scaled umbilical
/// summands.
///
/// The splitting works in normal-form coordinates. `DB_i = B_iD` forces each
/// `B_i` to be block diagonal along the clusters of equal eigenvalues of `D`.
/// Regrouping coordinates as (positive part of cluster 1, negative part of
/// cluster 1, positive part of cluster 2, …) then turns every component into
/// a direct sum, one block per cluster. Q-singular maps are first projected
/// onto the complement of the common kernel.
pub fn classify_with(phi: &QuadraticHarmonicMorphism, tol: &TolerancePolicy) -> Result<ClassificationReport> {
    let ranks: Vec<usize> = phi.components().iter().map(|a| numeric_rank(a, tol)).collect();
    if ranks.iter().any(|r| *r != ranks[0]) {
        return Err(Error::RankMismatch(ranks));
    }
    let q_rank = ranks[0];
    if q_rank % 2 == 1 {
        return Err(Error::OddRank(q_rank));
    }
    let m = phi.m();
    let n = phi.n();
    if q_rank == 0 {
        return Ok(ClassificationReport {
            m,
            n,
            q_rank,
            spectrum: Spectrum {
                positive: vec![],
                zero_count: m,
            },
            is_q_nonsingular: m == 0,
            is_umbilical: false,
            splitting: vec![],
            coordinate_change: Matrix::zeros(0, m),
        });
    }

    let (values, _) = sorted_eigen(&phi.components()[0], tol)?;
    let k = q_rank / 2;
    let top = values[0].to_f64().abs().max(values[m - 1].to_f64().abs());
    let floor = tol.rank_tol * top;
    if !is_positive(&values[k - 1], floor) || !is_positive(&-values[m - k].clone(), floor) {
        return Err(Error::UnpairedSpectrum);
    }
    for i in 0..k {
        if !scalars_pair(&values[i], &values[m - 1 - i], tol, top) {
            return Err(Error::UnpairedSpectrum);
        }
    }
    let positive: Vec<(Scalar, usize)> = cluster_scalars(&values[..k], tol)
        .into_iter()
        .map(|r| (mean(&values[r.clone()]), r.len()))
        .collect();
    let is_umbilical = positive.len() == 1;

    let (projection, core) = if q_rank < m {
        let (p, c) = project_nonsingular_with(phi, tol)?;
        (Some(p), c)
    } else {
        (None, phi.clone())
    };
    let nf = normal_form_with(&core, tol)?;
    let d_values: Vec<Scalar> = (0..k).map(|i| nf.d.get(i, i)).collect();
    let clusters = cluster_scalars(&d_values, tol);

    let d_scale = nf.d.frobenius_norm();
    for b in &nf.b {
        for (ci, ri) in clusters.iter().enumerate() {
            for (cj, rj) in clusters.iter().enumerate() {
                if ci == cj {
                    continue;
                }
                let block = b.block(ri.start, rj.start, ri.len(), rj.len());
                if !tol.vanishes(&block, d_scale).0 {
                    return Err(Error::InconsistentNormalForm(
                        "B is not block diagonal along the eigenvalue clusters of D".into(),
                    ));
                }
            }
        }
    }

    let mut splitting = Vec::with_capacity(clusters.len());
    let mut perm = Vec::with_capacity(2 * k);
    for r in &clusters {
        let lambda = mean(&d_values[r.clone()]);
        let inv = lambda.recip().expect("positive eigenvalue");
        let size = r.len();
        let id = Matrix::identity(size);
        let z = Matrix::zeros(size, size);
        let mut comps = vec![Matrix::block_diag(&[&id, &(-&id)])];
        for b in &nf.b {
            let bt = b.block(r.start, r.start, size, size).scale(&inv);
            comps.push(Matrix::from_blocks(&z, &bt, &bt.transpose(), &z));
        }
        splitting.push(Summand {
            scale: lambda,
            map: QuadraticHarmonicMorphism::new_unchecked(2 * size, comps),
        });
        perm.extend(r.clone());
        perm.extend(r.clone().map(|i| k + i));
    }
    let regroup = &Matrix::permutation(&perm) * &nf.change_of_coords;
    let coordinate_change = match &projection {
        Some(p) => &regroup * p,
        None => regroup,
    };

    Ok(ClassificationReport {
        m,
        n,
        q_rank,
        spectrum: Spectrum {
            positive,
            zero_count: m - q_rank,
        },
        is_q_nonsingular: q_rank == m,
        is_umbilical,
        splitting,
        coordinate_change,
    })
}

/// [`normal_form_with`] under the default tolerances.
pub fn normal_form(phi: &QuadraticHarmonicMorphism) -> Result<NormalForm> {
    normal_form_with(phi, &TolerancePolicy::default())
}

/// Normal form of a Q-nonsingular map.
///
/// `G`'s first rows are the eigenvectors of `A_1` for positive eigenvalues in
/// descending order; the remaining rows are the eigenvectors for `−λ`, in the
/// same order of `|λ|`. Any orthonormal choice within the eigenspaces gives
/// valid `(D, B)`; the canonical eigenbases make the choice deterministic.
pub fn normal_form_with(phi: &QuadraticHarmonicMorphism, tol: &TolerancePolicy) -> Result<NormalForm> {
    let a1 = &phi.components()[0];
    let m = phi.m();
    let q_rank = numeric_rank(a1, tol);
    if q_rank < m {
        return Err(Error::QSingular { q_rank, m });
    }
    if m % 2 == 1 {
        return Err(Error::OddRank(m));
    }
    let k = m / 2;
    let (values, q) = sorted_eigen(a1, tol)?;
    let floor = tol.rank_tol * values[0].to_f64().abs();
    if !is_positive(&values[k - 1], floor) || !is_positive(&-values[k].clone(), floor) {
        return Err(Error::UnpairedSpectrum);
    }
    let mut cols: Vec<usize> = (0..k).collect();
    let neg_clusters = cluster_scalars(&values[k..], tol);
    for r in neg_clusters.iter().rev() {
        cols.extend(r.clone().map(|i| k + i));
    }
    let all_rows: Vec<usize> = (0..m).collect();
    let g = q.select(&all_rows, &cols).transpose();
    let d = Matrix::from_scalars(
        k,
        k,
        (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .map(|(i, j)| if i == j { values[i].clone() } else { Scalar::zero() })
            .collect(),
    );

    let gt = g.transpose();
    let z = Matrix::zeros(k, k);
    let scale = a1.frobenius_norm();
    let mut b = Vec::with_capacity(phi.n() - 1);
    for (alpha, a) in phi.components().iter().enumerate().skip(1) {
        let nrm = &(&g * a) * &gt;
        let ba = nrm.block(0, k, k, k);
        let expected = Matrix::from_blocks(&z, &ba, &ba.transpose(), &z);
        if !tol.vanishes(&(&nrm - &expected), scale).0 {
            return Err(Error::InconsistentNormalForm(format!(
                "component {} is not off-diagonal in the eigenbasis of the first",
                alpha + 1
            )));
        }
        b.push(ba);
    }
    Ok(NormalForm {
        change_of_coords: g,
        d,
        b,
    })
}

/// Orthogonal projection `π` (`q × m`, orthonormal rows) onto the
/// complement of the common kernel, and the Q-nonsingular map `φ̃` with
/// `φ = φ̃ ∘ π`.
pub fn project_nonsingular(phi: &QuadraticHarmonicMorphism) -> Result<(Matrix, QuadraticHarmonicMorphism)> {
    project_nonsingular_with(phi, &TolerancePolicy::default())
}

pub(crate) fn project_nonsingular_with(
    phi: &QuadraticHarmonicMorphism,
    tol: &TolerancePolicy,
) -> Result<(Matrix, QuadraticHarmonicMorphism)> {
    let a1 = &phi.components()[0];
    let m = phi.m();
    let q = numeric_rank(a1, tol);
    if q == m {
        return Err(Error::QNonsingular);
    }
    let all: Vec<usize> = (0..m).collect();

    // Kernel spanned by coordinate axes: keep everything exact.
    if let Some(e) = a1.exact_entries() {
        let zero_row = |i: usize| (0..m).all(|j| e[i * m + j].is_zero());
        let keep: Vec<usize> = (0..m).filter(|&i| !zero_row(i)).collect();
        if keep.len() == q {
            let dropped: Vec<usize> = (0..m).filter(|&i| zero_row(i)).collect();
            for (alpha, a) in phi.components().iter().enumerate() {
                let rows = a.select(&dropped, &all);
                if !rows.is_zero() {
                    return Err(Error::SharedKernelViolated {
                        component: alpha + 1,
                        residual: rows.frobenius_norm(),
                    });
                }
            }
            let pi = Matrix::identity(m).select(&keep, &all);
            let comps = phi.components().iter().map(|a| a.select(&keep, &keep)).collect();
            return Ok((pi, QuadraticHarmonicMorphism::new_unchecked(q, comps)));
        }
    }

    let (values, vecs) = sorted_eigen(a1, tol)?;
    let mut by_size: Vec<usize> = (0..m).collect();
    by_size.sort_by(|&i, &j| values[i].to_f64().abs().total_cmp(&values[j].to_f64().abs()).then(i.cmp(&j)));
    let (kernel_idx, range_idx) = by_size.split_at(m - q);
    let kernel = vecs.select(&all, kernel_idx);
    for (alpha, a) in phi.components().iter().enumerate() {
        let (ok, residual) = tol.vanishes(&(a * &kernel), a.frobenius_norm());
        if !ok {
            return Err(Error::SharedKernelViolated {
                component: alpha + 1,
                residual,
            });
        }
    }
    let v = vecs.select(&all, range_idx).to_nalgebra();
    let basis: DMatrix<f64> = matrix::canonical_basis(&(&v * v.transpose()), q);
    let pi = Matrix::from_nalgebra(&basis.transpose());
    let pit = pi.transpose();
    let comps = phi.components().iter().map(|a| &(&pi * a) * &pit).collect();
    Ok((pi, QuadraticHarmonicMorphism::new_unchecked(q, comps)))
}

/// A quadratic function `F(y) = Σ_j λ_j (‖y_{j,+}‖² − ‖y_{j,−}‖²)` on
/// blocks of sizes `block_dims[j]` (each appearing twice), padded with
/// `zero_dim` coordinates on which `F` vanishes, together with orthogonal
/// maps such that `φ^α = F ∘ maps[α]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleFunction {
    pub scales: Vec<Scalar>,
    pub block_dims: Vec<usize>,
    pub zero_dim: usize,
    /// The symmetric matrix of `F`.
    pub matrix: Matrix,
    /// One orthogonal `m × m` matrix per component.
    pub maps: Vec<Matrix>,
}

impl SingleFunction {
    pub fn evaluate(&self, y: &[f64]) -> f64 {
        self.matrix.quadratic_form(y)
    }
}

/// Writes every component as the same quadratic function `F` composed with
/// an isometry: all components share the spectrum of `A_1`, so each is
/// orthogonally congruent to the diagonal matrix of `F`.
pub fn single_function_representation(phi: &QuadraticHarmonicMorphism) -> Result<SingleFunction> {
    let tol = TolerancePolicy::default();
    let report = classify_with(phi, &tol)?;
    let m = phi.m();
    let mut diag: Vec<Scalar> = Vec::with_capacity(m);
    for s in &report.splitting {
        let size = s.map.m() / 2;
        diag.extend(std::iter::repeat_n(s.scale.clone(), size));
        diag.extend(std::iter::repeat_n(-s.scale.clone(), size));
    }
    diag.extend(std::iter::repeat_n(Scalar::zero(), report.spectrum.zero_count));
    let matrix = Matrix::from_scalars(
        m,
        m,
        (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| if i == j { diag[i].clone() } else { Scalar::zero() })
            .collect(),
    );

    let (f_values, w) = sorted_eigen(&matrix, &tol)?;
    let mut maps = Vec::with_capacity(phi.n());
    for (alpha, a) in phi.components().iter().enumerate() {
        let (values, v) = sorted_eigen(a, &tol)?;
        let agree = values
            .iter()
            .zip(&f_values)
            .all(|(x, y)| (x.to_f64() - y.to_f64()).abs() <= tol.eig_pair_tol * f_values[0].to_f64().abs().max(1.0));
        if !agree {
            return Err(Error::InconsistentNormalForm(format!(
                "component {} does not share the spectrum of the first",
                alpha + 1
            )));
        }
        maps.push(&w * &v.transpose());
    }
    Ok(SingleFunction {
        scales: report.splitting.iter().map(|s| s.scale.clone()).collect(),
        block_dims: report.splitting.iter().map(|s| s.map.m() / 2).collect(),
        zero_dim: report.spectrum.zero_count,
        matrix,
        maps,
    })
}
