//! O-systems: tuples `(τ_1, …, τ_n)` of orthogonal `m×m` matrices with
//! `τ_iᵗτ_j + τ_jᵗτ_i = 2δ_ij·I`.

use serde::Serialize;

use crate::cayley;
use crate::clifford::{self, CliffordSystem};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, TolerancePolicy};

/// A validated O-system on `ℝ^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct OSystem {
    m: usize,
    matrices: Vec<Matrix>,
}

impl OSystem {
    pub(crate) fn new_unchecked(m: usize, matrices: Vec<Matrix>) -> Self {
        debug_assert!(!matrices.is_empty());
        OSystem { m, matrices }
    }

    pub fn m(&self) -> usize {
        self.m
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

    /// `Σ xⁱ τ_i`, which is orthogonal whenever `x` is a unit vector.
    pub fn combination(&self, x: &[f64]) -> Result<Matrix> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: x.len(),
            });
        }
        let mut acc = Matrix::from_f64s(self.m, self.m, vec![0.0; self.m * self.m]);
        for (xi, t) in x.iter().zip(&self.matrices) {
            acc = &acc + &t.scale_f64(*xi);
        }
        Ok(acc)
    }

    /// Moves the system to the representative whose first member is the
    /// identity, by right-multiplying every member with `τ_1ᵗ`.
    pub fn normalized(&self) -> OSystem {
        let t1 = self.matrices[0].transpose();
        OSystem::new_unchecked(self.m, self.matrices.iter().map(|t| t * &t1).collect())
    }
}

/// Checks that `candidate` is an O-system.
pub fn verify_osystem(candidate: &[Matrix], tol: &TolerancePolicy) -> Result<OSystem> {
    let m = common_square_size(candidate)?;
    let id = Matrix::identity(m);
    let scale = (m as f64).sqrt();
    for (i, t) in candidate.iter().enumerate() {
        let (ok, residual) = tol.vanishes(&(&(&t.transpose() * t) - &id), scale);
        if !ok {
            return Err(Error::NotOrthogonal {
                member: i + 1,
                residual,
            });
        }
    }
    for i in 0..candidate.len() {
        let ti = candidate[i].transpose();
        for j in i + 1..candidate.len() {
            let tj = candidate[j].transpose();
            let r = &(&ti * &candidate[j]) + &(&tj * &candidate[i]);
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
    Ok(OSystem::new_unchecked(m, candidate.to_vec()))
}

pub(crate) fn common_square_size(candidate: &[Matrix]) -> Result<usize> {
    let first = candidate.first().ok_or(Error::EmptySystem)?;
    if !first.is_square() {
        return Err(Error::NotSquare {
            rows: first.rows(),
            cols: first.cols(),
        });
    }
    let m = first.rows();
    for c in candidate {
        if !c.is_square() {
            return Err(Error::NotSquare {
                rows: c.rows(),
                cols: c.cols(),
            });
        }
        if c.rows() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: c.rows(),
            });
        }
    }
    Ok(m)
}

/// `m = (2r+1)·2^(c+4d)` with `0 ≤ c ≤ 3`, and the Hurwitz–Radon number
/// `σ(m) = 2^c + 8d`, the largest `n` with `O(m, n)` nonempty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaDecomposition {
    pub m: usize,
    pub r: usize,
    pub c: u32,
    pub d: u32,
    pub sigma: usize,
}

/// Panics if `m == 0`.
pub fn hurwitz_radon(m: usize) -> SigmaDecomposition {
    assert!(m >= 1, "m must be positive");
    let e = m.trailing_zeros();
    let odd = m >> e;
    let (c, d) = (e % 4, e / 4);
    SigmaDecomposition {
        m,
        r: (odd - 1) / 2,
        c,
        d,
        sigma: (1usize << c) + 8 * d as usize,
    }
}

/// `σ(2^s) − 1` skew-symmetric, pairwise anticommuting complex structures on
/// `ℝ^(2^s)` with entries in `{0, ±1}`.
///
/// The first `2^c − 1` come from the division algebra of dimension `2^c`.
/// Each further factor of 16 adds eight: if `E_1..E_8` are the structures on
/// `ℝ^16` and `ε = E_1⋯E_8` (a symmetric involution anticommuting with each
/// `E_a`), then `{J ⊗ ε} ∪ {I ⊗ E_a}` is again such a family.
pub(crate) fn complex_structures(s: u32) -> Vec<Matrix> {
    let (c, d) = (s % 4, s / 4);
    let mut family: Vec<Matrix> = cayley::left_mults(1 << c).into_iter().skip(1).collect();
    let mut dim = 1usize << c;
    if d == 0 {
        return family;
    }
    let e = sixteen_structures();
    let eps = e.iter().skip(1).fold(e[0].clone(), |acc, x| &acc * x);
    for _ in 0..d {
        let mut next: Vec<Matrix> = family.iter().map(|j| j.kron(&eps)).collect();
        let id = Matrix::identity(dim);
        next.extend(e.iter().map(|ea| id.kron(ea)));
        family = next;
        dim *= 16;
    }
    family
}

/// `E_a = [[0, −τ_aᵗ], [τ_a, 0]]` from the octonion O-system `(I, L_1, …, L_7)`.
fn sixteen_structures() -> Vec<Matrix> {
    cayley::left_mults(8)
        .iter()
        .map(|t| Matrix::from_blocks(&Matrix::zeros(8, 8), &(-&t.transpose()), t, &Matrix::zeros(8, 8)))
        .collect()
}

/// An exact O-system in `O(m, σ(m))` with first member the identity.
pub fn construct_range_maximal(m: usize) -> OSystem {
    let hr = hurwitz_radon(m);
    let s = hr.c + 4 * hr.d;
    let base_dim = 1usize << s;
    let mut members = vec![Matrix::identity(base_dim)];
    members.extend(complex_structures(s));
    let copies = 2 * hr.r + 1;
    if copies > 1 {
        let id = Matrix::identity(copies);
        members = members.iter().map(|t| id.kron(t)).collect();
    }
    debug_assert_eq!(members.len(), hr.sigma);
    OSystem::new_unchecked(m, members)
}

/// The Clifford system `(diag(I, −I), [[0, τ_i], [τ_iᵗ, 0]])` in `C(2m, n+1)`.
pub fn to_clifford(os: &OSystem) -> CliffordSystem {
    let m = os.m;
    let id = Matrix::identity(m);
    let mut ps = vec![Matrix::block_diag(&[&id, &(-&id)])];
    for t in &os.matrices {
        ps.push(Matrix::from_blocks(&Matrix::zeros(m, m), t, &t.transpose(), &Matrix::zeros(m, m)));
    }
    CliffordSystem::new_unchecked(2 * m, ps)
}

/// The O-system read off from the standard representation of `cs`.
pub fn from_clifford(cs: &CliffordSystem) -> Result<OSystem> {
    clifford::to_standard_representation(cs).map(|(_, os)| os)
}

pub fn transpose_system(os: &OSystem) -> OSystem {
    OSystem::new_unchecked(os.m, os.matrices.iter().map(Matrix::transpose).collect())
}

/// Members at the given 0-based `indices`, in the given order.
pub fn sub_system(os: &OSystem, indices: &[usize]) -> Result<OSystem> {
    if indices.is_empty() {
        return Err(Error::BadIndices("no indices given".into()));
    }
    let mut seen = vec![false; os.n()];
    for &i in indices {
        if i >= os.n() {
            return Err(Error::BadIndices(format!("index {i} out of range for {} members", os.n())));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::BadIndices(format!("index {i} repeated")));
        }
    }
    Ok(OSystem::new_unchecked(
        os.m,
        indices.iter().map(|&i| os.matrices[i].clone()).collect(),
    ))
}

pub fn direct_sum(a: &OSystem, b: &OSystem) -> Result<OSystem> {
    if a.n() != b.n() {
        return Err(Error::ArityMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(OSystem::new_unchecked(
        a.m + b.m,
        a.matrices
            .iter()
            .zip(&b.matrices)
            .map(|(x, y)| Matrix::block_diag(&[x, y]))
            .collect(),
    ))
}
