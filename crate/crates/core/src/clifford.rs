//! Clifford systems: tuples `(P_1, …, P_n)` of symmetric matrices on `ℝ^{2m}`
//! with `P_iP_j + P_jP_i = 2δ_ij·I`.

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{self, is_symmetric, spectral_decompose, Matrix, Scalar, TolerancePolicy};
use crate::osystem::{self, common_square_size, verify_osystem, OSystem};

/// A validated Clifford system on `ℝ^{two_m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordSystem {
    two_m: usize,
    matrices: Vec<Matrix>,
}

impl CliffordSystem {
    pub(crate) fn new_unchecked(two_m: usize, matrices: Vec<Matrix>) -> Self {
        debug_assert!(!matrices.is_empty());
        CliffordSystem { two_m, matrices }
    }

    pub fn two_m(&self) -> usize {
        self.two_m
    }

    pub fn n(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn into_matrices(self) -> Vec<Matrix> {
        self.matrices
    }

    pub fn is_exact(&self) -> bool {
        self.matrices.iter().all(Matrix::is_exact)
    }

    /// `(G P_1 Gᵗ, …, G P_n Gᵗ)`. `g` must be orthogonal for the result to be
    /// a Clifford system again; this is not re-checked.
    pub fn conjugated(&self, g: &Matrix) -> CliffordSystem {
        let gt = g.transpose();
        CliffordSystem::new_unchecked(self.two_m, self.matrices.iter().map(|p| &(g * p) * &gt).collect())
    }

    /// The system with member `i` (0-based) replaced by its negative.
    pub fn with_negated(&self, i: usize) -> CliffordSystem {
        let mut ms = self.matrices.clone();
        ms[i] = -&ms[i];
        CliffordSystem::new_unchecked(self.two_m, ms)
    }
}

/// Checks that `candidate` is a Clifford system.
pub fn verify_clifford(candidate: &[Matrix], tol: &TolerancePolicy) -> Result<CliffordSystem> {
    let size = common_square_size(candidate)?;
    if size % 2 == 1 {
        return Err(Error::OddDimension(size));
    }
    for (i, p) in candidate.iter().enumerate() {
        if !is_symmetric(p, tol) {
            return Err(Error::NotSymmetric { member: i + 1 });
        }
    }
    let two_id = Matrix::identity(size).scale(&Scalar::int(2));
    let scale = (size as f64).sqrt();
    for i in 0..candidate.len() {
        for j in i..candidate.len() {
            let mut r = candidate[i].anticommutator(&candidate[j]);
            if i == j {
                r = &r - &two_id;
            }
            let (ok, residual) = tol.vanishes(&r, scale);
            if !ok {
                return Err(Error::AnticommutationViolated {
                    i: i + 1,
                    j: j + 1,
                    residual,
                });
            }
        }
    }
    Ok(CliffordSystem::new_unchecked(size, candidate.to_vec()))
}

/// `m(n)`: the smallest `m` such that `C(2m, n+1)` is nonempty.
/// `m(1..=8) = 1, 2, 4, 4, 8, 8, 8, 8` and `m(n+8) = 16·m(n)`.
pub fn minimal_domain_dimension(n: usize) -> usize {
    assert!(n >= 1, "n must be positive");
    let mut m = 1usize;
    while osystem::hurwitz_radon(m).sigma < n {
        m *= 2;
    }
    m
}

/// An exact irreducible system in `C(2m(n), n+1)`, entries in `{0, ±1}`.
pub fn construct_irreducible(n: usize) -> CliffordSystem {
    let m = minimal_domain_dimension(n);
    let first: Vec<usize> = (0..n).collect();
    let os = osystem::sub_system(&osystem::construct_range_maximal(m), &first)
        .expect("σ(m(n)) ≥ n by definition of m(n)");
    osystem::to_clifford(&os)
}

pub fn direct_sum(a: &CliffordSystem, b: &CliffordSystem) -> Result<CliffordSystem> {
    if a.n() != b.n() {
        return Err(Error::ArityMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(CliffordSystem::new_unchecked(
        a.two_m + b.two_m,
        a.matrices
            .iter()
            .zip(&b.matrices)
            .map(|(x, y)| Matrix::block_diag(&[x, y]))
            .collect(),
    ))
}

/// Orthogonal `A` with `A P_1 Aᵗ = diag(I, −I)` and
/// `A P_{i+1} Aᵗ = [[0, τ_i], [τ_iᵗ, 0]]`, together with the O-system `(τ_i)`.
///
/// When `P_1` is an exact diagonal `±1` matrix, `A` is the permutation that
/// lists the `+1` coordinates first and everything stays exact. Otherwise `A`
/// is built from the canonical eigenbases of `P_1`.
pub fn to_standard_representation(cs: &CliffordSystem) -> Result<(Matrix, OSystem)> {
    to_standard_representation_with(cs, &TolerancePolicy::default())
}

pub(crate) fn to_standard_representation_with(
    cs: &CliffordSystem,
    tol: &TolerancePolicy,
) -> Result<(Matrix, OSystem)> {
    if cs.n() < 2 {
        // The O-system would have no members.
        return Err(Error::EmptySystem);
    }
    let a = split_basis(&cs.matrices[0], tol)?;
    let m = cs.two_m / 2;
    let at = a.transpose();
    let taus: Vec<Matrix> = cs.matrices[1..]
        .iter()
        .map(|p| (&(&a * p) * &at).block(0, m, m, m))
        .collect();
    let os = verify_osystem(&taus, tol)?;
    Ok((a, os))
}

/// Orthogonal `A` with `A P Aᵗ = diag(I, −I)` for a symmetric involution `P`
/// with balanced eigenspaces. Exact permutation when `P` is an exact signed
/// diagonal.
pub(crate) fn split_basis(p: &Matrix, tol: &TolerancePolicy) -> Result<Matrix> {
    let n = p.rows();
    let (a, plus) = match signed_diagonal_permutation(p) {
        Some((perm, plus)) => (Matrix::permutation(&perm), plus),
        None => {
            let sd = spectral_decompose(p, tol)?;
            let plus = sd.eigenvalues.iter().filter(|&&l| l > 0.0).count();
            (sd.eigenvectors.transpose(), plus)
        }
    };
    if 2 * plus != n {
        return Err(Error::UnbalancedEigenspaces {
            plus,
            minus: n - plus,
        });
    }
    Ok(a)
}

/// For an exact diagonal matrix with entries `±1`: the permutation listing
/// `+1` indices first, and the number of them.
fn signed_diagonal_permutation(p: &Matrix) -> Option<(Vec<usize>, usize)> {
    let e = p.exact_entries()?;
    let n = p.rows();
    let one = BigRational::one();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = &e[i * n + j];
            if i != j && !v.is_zero() {
                return None;
            }
        }
        let d = &e[i * n + i];
        if *d == one {
            plus.push(i);
        } else if *d == -one.clone() {
            minus.push(i);
        } else {
            return None;
        }
    }
    let k = plus.len();
    plus.extend(minus);
    Some((plus, k))
}

/// Dimension of the space of symmetric `S` commuting with every `P_i`.
pub fn commutant_dimension(cs: &CliffordSystem) -> usize {
    commutant_dimension_of(cs.matrices(), &TolerancePolicy::default())
}

pub(crate) fn commutant_dimension_of(ps: &[Matrix], tol: &TolerancePolicy) -> usize {
    let n = ps[0].rows();
    let idx = |a: usize, b: usize| {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        a * n - a * (a + 1) / 2 + b
    };
    let unknowns = n * (n + 1) / 2;
    // (SP − PS) is skew for symmetric S, P, so the i < j equations suffice:
    // Σ_k S_ik P_kj − P_ik S_kj = 0.
    if ps.iter().all(Matrix::is_exact) {
        let mut rows = Vec::new();
        for p in ps {
            let e = p.exact_entries().expect("exact");
            for i in 0..n {
                for j in i + 1..n {
                    let mut row = Vec::new();
                    for k in 0..n {
                        let pkj = &e[k * n + j];
                        if !pkj.is_zero() {
                            row.push((idx(i, k), pkj.clone()));
                        }
                        let pik = &e[i * n + k];
                        if !pik.is_zero() {
                            row.push((idx(k, j), -pik.clone()));
                        }
                    }
                    rows.push(row);
                }
            }
        }
        matrix::exact_sparse_nullity(rows, unknowns)
    } else {
        let eqs = ps.len() * n * (n - 1) / 2;
        let mut m = DMatrix::<f64>::zeros(eqs.max(1), unknowns);
        let mut r = 0;
        for p in ps {
            for i in 0..n {
                for j in i + 1..n {
                    for k in 0..n {
                        m[(r, idx(i, k))] += p.get_f64(k, j);
                        m[(r, idx(k, j))] -= p.get_f64(i, k);
                    }
                    r += 1;
                }
            }
        }
        let normal = m.transpose() * &m;
        matrix::null_space(&normal, tol).ncols()
    }
}

/// True iff `ℝ^{2m}` has no proper nonzero subspace invariant under every
/// `P_i`, i.e. the symmetric commutant is one-dimensional.
pub fn is_irreducible(cs: &CliffordSystem) -> bool {
    commutant_dimension(cs) == 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EquivalenceStatus {
    Equivalent,
    NotEquivalent,
    Unknown,
}

/// Outcome of [`algebraically_equivalent`]. When the status is
/// `Equivalent`, `certificate` holds an orthogonal `A` with
/// `Q_i = A P_i Aᵗ` for every `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceVerdict {
    pub status: EquivalenceStatus,
    pub certificate: Option<Matrix>,
}

impl EquivalenceVerdict {
    fn without_certificate(status: EquivalenceStatus) -> Self {
        EquivalenceVerdict {
            status,
            certificate: None,
        }
    }
}

/// Searches for an orthogonal `A` with `b_i = A a_i Aᵗ` for all `i`.
///
/// `NotEquivalent` is only reported when an invariant differs: the traces of
/// the members, the commutant dimension, or the trace of `P_1⋯P_n`. If the
/// invariants agree, both systems are reduced to standard form and the
/// remaining freedom `diag(θ, θ₂)` is solved for: `θ` must intertwine
/// `σ^a_k = τ^a_k τ^a_1ᵗ` with `σ^b_k`, which is a linear condition. The
/// polar factor of a generic solution is orthogonal and still intertwines.
/// A certificate is returned only after its residual has been checked.
pub fn algebraically_equivalent(a: &CliffordSystem, b: &CliffordSystem) -> Result<EquivalenceVerdict> {
    algebraically_equivalent_with(a, b, &TolerancePolicy::default())
}

pub(crate) fn algebraically_equivalent_with(
    a: &CliffordSystem,
    b: &CliffordSystem,
    tol: &TolerancePolicy,
) -> Result<EquivalenceVerdict> {
    if a.two_m != b.two_m || a.n() != b.n() {
        return Err(Error::ShapeMismatch(format!(
            "C({}, {}) vs C({}, {})",
            a.two_m,
            a.n(),
            b.two_m,
            b.n()
        )));
    }
    let scale = (a.two_m as f64).max(1.0);
    let differ = |x: &Scalar, y: &Scalar| match (x, y) {
        (Scalar::Exact(p), Scalar::Exact(q)) => p != q,
        _ => (x.to_f64() - y.to_f64()).abs() > tol.eig_pair_tol * scale,
    };
    for (p, q) in a.matrices.iter().zip(&b.matrices) {
        if differ(&p.trace(), &q.trace()) {
            return Ok(EquivalenceVerdict::without_certificate(EquivalenceStatus::NotEquivalent));
        }
    }
    let product = |cs: &CliffordSystem| {
        cs.matrices
            .iter()
            .skip(1)
            .fold(cs.matrices[0].clone(), |acc, p| &acc * p)
            .trace()
    };
    if differ(&product(a), &product(b)) {
        return Ok(EquivalenceVerdict::without_certificate(EquivalenceStatus::NotEquivalent));
    }
    if commutant_dimension_of(&a.matrices, tol) != commutant_dimension_of(&b.matrices, tol) {
        return Ok(EquivalenceVerdict::without_certificate(EquivalenceStatus::NotEquivalent));
    }

    let candidate = if a.n() == 1 {
        // Same trace, so the same ±1 multiplicities: match eigenbases.
        let qa = spectral_decompose(&a.matrices[0], tol)?.eigenvectors;
        let qb = spectral_decompose(&b.matrices[0], tol)?.eigenvectors;
        Some(&qb * &qa.transpose())
    } else {
        standard_form_certificate(a, b, tol)?
    };

    let Some(c) = candidate else {
        return Ok(EquivalenceVerdict::without_certificate(EquivalenceStatus::Unknown));
    };
    if certificate_holds(a, b, &c, tol) {
        Ok(EquivalenceVerdict {
            status: EquivalenceStatus::Equivalent,
            certificate: Some(c),
        })
    } else {
        Ok(EquivalenceVerdict::without_certificate(EquivalenceStatus::Unknown))
    }
}

fn certificate_holds(a: &CliffordSystem, b: &CliffordSystem, c: &Matrix, tol: &TolerancePolicy) -> bool {
    let ct = c.transpose();
    let scale = (a.two_m as f64).sqrt();
    let orth = &(&ct * c) - &Matrix::identity(a.two_m);
    tol.vanishes(&orth, scale).0
        && a
            .matrices
            .iter()
            .zip(&b.matrices)
            .all(|(p, q)| tol.vanishes(&(&(&(c * p) * &ct) - q), scale).0)
}

const CERTIFICATE_SEED: u64 = 0x5eed;

fn standard_form_certificate(
    a: &CliffordSystem,
    b: &CliffordSystem,
    tol: &TolerancePolicy,
) -> Result<Option<Matrix>> {
    let (aa, ta) = to_standard_representation_with(a, tol)?;
    let (ab, tb) = to_standard_representation_with(b, tol)?;
    let m = ta.m();
    let ta: Vec<DMatrix<f64>> = ta.matrices().iter().map(Matrix::to_nalgebra).collect();
    let tb: Vec<DMatrix<f64>> = tb.matrices().iter().map(Matrix::to_nalgebra).collect();

    let theta = if ta.len() == 1 {
        DMatrix::<f64>::identity(m, m)
    } else {
        let sa: Vec<DMatrix<f64>> = ta[1..].iter().map(|t| t * ta[0].transpose()).collect();
        let sb: Vec<DMatrix<f64>> = tb[1..].iter().map(|t| t * tb[0].transpose()).collect();
        match intertwiner(&sa, &sb, tol) {
            Some(x) => x,
            None => return Ok(None),
        }
    };
    let theta2 = tb[0].transpose() * &theta * &ta[0];
    let mut d = DMatrix::<f64>::zeros(2 * m, 2 * m);
    d.view_mut((0, 0), (m, m)).copy_from(&theta);
    d.view_mut((m, m), (m, m)).copy_from(&theta2);
    let c = ab.to_nalgebra().transpose() * d * aa.to_nalgebra();
    Ok(Some(Matrix::from_nalgebra(&c)))
}

/// Orthogonal `θ` with `θ sa_k = sb_k θ` for all `k`, if the linear solution
/// space contains an invertible element.
pub(crate) fn intertwiner(sa: &[DMatrix<f64>], sb: &[DMatrix<f64>], tol: &TolerancePolicy) -> Option<DMatrix<f64>> {
    let m = sa[0].nrows();
    let unknowns = m * m;
    let mut sys = DMatrix::<f64>::zeros(sa.len() * unknowns, unknowns);
    // Row (k, i, j): Σ_l X_il sa_lj − Σ_l sb_il X_lj, with X_pq at p·m + q.
    for (k, (x, y)) in sa.iter().zip(sb).enumerate() {
        for i in 0..m {
            for j in 0..m {
                let r = k * unknowns + i * m + j;
                for l in 0..m {
                    sys[(r, i * m + l)] += x[(l, j)];
                    sys[(r, l * m + j)] -= y[(i, l)];
                }
            }
        }
    }
    let kernel = matrix::null_space(&(sys.transpose() * &sys), tol);
    if kernel.ncols() == 0 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(CERTIFICATE_SEED);
    let coeffs: Vec<f64> = (0..kernel.ncols()).map(|_| StandardNormal.sample(&mut rng)).collect();
    let v = kernel * nalgebra::DVector::from_vec(coeffs);
    let x = DMatrix::<f64>::from_row_slice(m, m, v.as_slice());
    matrix::polar_factor(&x, tol)
}
