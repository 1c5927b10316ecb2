//! Orthogonal multiplications `μ: ℝ^p × ℝ^q → ℝ^n` with
//! `‖μ(x, y)‖ = ‖x‖‖y‖`, stored as slices `S_i = μ(e_i, ·)`.
//!
//! The octonion table is the Cayley–Dickson double of the quaternions with
//! `(a, b)(c, d) = (ac − d̄b, da + bc̄)`; other sign conventions give
//! equivalent but different tables.

use serde::Serialize;

use crate::cayley;
use crate::error::{Error, Result};
use crate::matrix::{Matrix, Scalar, TolerancePolicy};
use crate::osystem::{verify_osystem, OSystem};
use crate::qhm::{self, QuadraticHarmonicMorphism};
use crate::sampling::{gaussian_point, norm};

/// A bilinear map given by its slices: `μ(x, y) = Σ xⁱ S_i y`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalMultiplication {
    p: usize,
    q: usize,
    n_out: usize,
    slices: Vec<Matrix>,
}

impl OrthogonalMultiplication {
    /// Wraps `slices` after checking that they all have the same shape.
    /// Norm preservation is checked by [`verify_orthomul`].
    pub fn from_slices(slices: Vec<Matrix>) -> Result<Self> {
        let first = slices.first().ok_or(Error::EmptySystem)?;
        let (n_out, q) = first.shape();
        if let Some(bad) = slices.iter().find(|s| s.shape() != (n_out, q)) {
            return Err(Error::ShapeMismatch(format!(
                "slice of shape {:?} among slices of shape {:?}",
                bad.shape(),
                (n_out, q)
            )));
        }
        Ok(OrthogonalMultiplication {
            p: slices.len(),
            q,
            n_out,
            slices,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn slices(&self) -> &[Matrix] {
        &self.slices
    }

    pub fn apply(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.p {
            return Err(Error::DimensionMismatch {
                expected: self.p,
                found: x.len(),
            });
        }
        if y.len() != self.q {
            return Err(Error::DimensionMismatch {
                expected: self.q,
                found: y.len(),
            });
        }
        let mut out = vec![0.0; self.n_out];
        for (xi, s) in x.iter().zip(&self.slices) {
            for (o, v) in out.iter_mut().zip(s.mul_vec(y)) {
                *o += xi * v;
            }
        }
        Ok(out)
    }
}

/// `μ_τ(x, y) = Σ xⁱ τ_i y`.
pub fn from_osystem(os: &OSystem) -> OrthogonalMultiplication {
    OrthogonalMultiplication {
        p: os.n(),
        q: os.m(),
        n_out: os.m(),
        slices: os.matrices().to_vec(),
    }
}

/// The slices as an O-system; requires square slices.
pub fn to_osystem(mu: &OrthogonalMultiplication) -> Result<OSystem> {
    if mu.q != mu.n_out {
        return Err(Error::NotSquare {
            rows: mu.n_out,
            cols: mu.q,
        });
    }
    verify_osystem(&mu.slices, &TolerancePolicy::default())
}

/// Multiplication of ℝ, ℂ, ℍ or 𝕆 (`n ∈ {1, 2, 4, 8}`).
pub fn standard_multiplication(n: usize) -> Result<OrthogonalMultiplication> {
    if !matches!(n, 1 | 2 | 4 | 8) {
        return Err(Error::UnsupportedDimension(n));
    }
    OrthogonalMultiplication::from_slices(cayley::left_mults(n))
}

/// `H(x, y) = (‖x‖² − ‖y‖², 2μ(x, y))` on `ℝ^{2p}`, for `μ` with `p = q`.
///
/// The first component matrix is `diag(I_p, −I_p)`; component `k + 2` is
/// `[[0, M_k], [M_kᵗ, 0]]` with `M_k[i][j] = S_i[k][j]`. The result is
/// checked against the harmonic morphism conditions, so a non-orthogonal
/// `μ` is reported rather than returned.
pub fn hopf_construction(mu: &OrthogonalMultiplication) -> Result<QuadraticHarmonicMorphism> {
    if mu.p != mu.q {
        return Err(Error::ShapeMismatch(format!(
            "Hopf construction needs p = q, got p = {}, q = {}",
            mu.p, mu.q
        )));
    }
    let p = mu.p;
    let id = Matrix::identity(p);
    let mut components = vec![Matrix::block_diag(&[&id, &(-&id)])];
    for k in 0..mu.n_out {
        let entries: Vec<Scalar> = (0..p)
            .flat_map(|i| (0..p).map(move |j| (i, j)))
            .map(|(i, j)| mu.slices[i].get(k, j))
            .collect();
        let mk = Matrix::from_scalars(p, p, entries);
        components.push(Matrix::from_blocks(&Matrix::zeros(p, p), &mk, &mk.transpose(), &Matrix::zeros(p, p)));
    }
    qhm::check_matrix_criteria(&components, &TolerancePolicy::default())?;
    Ok(QuadraticHarmonicMorphism::new_unchecked(2 * p, components))
}

/// Outcome of [`verify_orthomul`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrthomulReport {
    /// Largest `|‖μ(x,y)‖ − ‖x‖‖y‖| / (‖x‖‖y‖)` over the sampled pairs.
    pub sampled_defect: f64,
    /// Largest `‖S_iᵗS_j + S_jᵗS_i − 2δ_ij I‖_F`. Exact zero for exact input
    /// that passes.
    pub slice_residual: f64,
    /// Whether `slice_residual` was computed in exact arithmetic.
    pub exact: bool,
    pub passed: bool,
}

/// Norm preservation of `μ`, both on `samples` seeded Gaussian pairs and via
/// the slice identity `S_iᵗS_j + S_jᵗS_i = 2δ_ij I`, which is equivalent to
/// it. The verdict comes from the slice identity.
pub fn verify_orthomul(mu: &OrthogonalMultiplication, samples: usize, seed: u64) -> OrthomulReport {
    let tol = TolerancePolicy::default();
    let mut sampled_defect = 0.0_f64;
    for s in 0..samples as u64 {
        let x = gaussian_point(mu.p, seed, 2 * s);
        let y = gaussian_point(mu.q, seed, 2 * s + 1);
        let expected = norm(&x) * norm(&y);
        if expected == 0.0 {
            continue;
        }
        let got = norm(&mu.apply(&x, &y).expect("sample dimensions match"));
        sampled_defect = sampled_defect.max((got - expected).abs() / expected);
    }

    let exact = mu.slices.iter().all(Matrix::is_exact);
    let two_id = Matrix::identity(mu.q).scale(&Scalar::int(2));
    let mut slice_residual = 0.0_f64;
    let mut passed = true;
    for i in 0..mu.p {
        let si = mu.slices[i].transpose();
        for j in i..mu.p {
            let sj = mu.slices[j].transpose();
            let mut r = &(&si * &mu.slices[j]) + &(&sj * &mu.slices[i]);
            if i == j {
                r = &r - &two_id;
            }
            let (ok, res) = tol.vanishes(&r, (mu.q as f64).sqrt());
            passed &= ok;
            slice_residual = slice_residual.max(res);
        }
    }
    OrthomulReport {
        sampled_defect,
        slice_residual,
        exact,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::osystem::construct_range_maximal;

    #[test]
    fn complex_multiplication_from_the_complex_pair() {
        let os = construct_range_maximal(2);
        let mu = from_osystem(&os);
        let (a, b, c, d) = (1.5, -2.0, 0.5, 3.0);
        let got = mu.apply(&[a, b], &[c, d]).unwrap();
        assert_eq!(got, vec![a * c - b * d, a * d + b * c]);
        assert_eq!(to_osystem(&mu).unwrap(), os);
    }

    #[test]
    fn standard_tables_are_orthogonal_exactly() {
        for n in [1, 2, 4, 8] {
            let mu = standard_multiplication(n).unwrap();
            let rep = verify_orthomul(&mu, 200, 1);
            assert!(rep.passed && rep.exact, "n = {n}");
            assert_eq!(rep.slice_residual, 0.0);
            assert!(rep.sampled_defect < 1e-12);
            assert!(to_osystem(&mu).is_ok());
        }
        assert_eq!(standard_multiplication(3), Err(Error::UnsupportedDimension(3)));
    }

    #[test]
    fn repeated_identity_slices_are_rejected() {
        let mu = OrthogonalMultiplication::from_slices(vec![Matrix::identity(2), Matrix::identity(2)]).unwrap();
        let rep = verify_orthomul(&mu, 50, 0);
        assert!(!rep.passed);
        assert!(rep.sampled_defect > 0.1);
        assert!(to_osystem(&mu).is_err());
    }

    #[test]
    fn non_square_slices_are_not_an_osystem() {
        let mu = OrthogonalMultiplication::from_slices(vec![Matrix::zeros(3, 2)]).unwrap();
        assert_eq!(to_osystem(&mu), Err(Error::NotSquare { rows: 3, cols: 2 }));
    }

    #[test]
    fn hopf_of_complex_numbers() {
        let h = hopf_construction(&standard_multiplication(2).unwrap()).unwrap();
        assert_eq!((h.m(), h.n()), (4, 3));
        assert_eq!(h.components()[0], Matrix::diag_ints(&[1, 1, -1, -1]));
        let v = h.evaluate(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        // 2μ((1,2),(3,4)) = 2(3 − 8, 4 + 6)
        assert_eq!(v, vec![1.0 + 4.0 - 9.0 - 16.0, -10.0, 20.0]);
    }

    #[test]
    fn hopf_rejects_rectangular_input() {
        let mu = OrthogonalMultiplication::from_slices(vec![Matrix::identity(2)]).unwrap();
        assert!(matches!(hopf_construction(&mu), Err(Error::ShapeMismatch(_))));
    }
}
