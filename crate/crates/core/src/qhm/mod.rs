//! Quadratic harmonic morphisms `φ(X) = (XᵗA_1X, …, XᵗA_nX)`.
//!
//! For quadratic components the harmonic morphism conditions become matrix
//! identities: `tr A_α = 0` (harmonicity) and `A_αA_β + A_βA_α = 0` for
//! `α ≠ β` together with `A_α² = A_β²` (horizontal weak conformality, since
//! `∇φ^α·∇φ^β = 4XᵗA_αA_βX`). [`verify_qhm`] checks these identities and, as
//! an independent oracle, the differential conditions at sample points.

mod checks;
mod classify;
mod extend;

pub use checks::{
    count_biequivalence_classes, sampled_criteria, sphere_restriction_check, verify_isoparametric,
    volume_trace, IsoparametricReport, SampledCriteria, SphereReport,
};
pub use classify::{
    classify, classify_with, normal_form, normal_form_with, project_nonsingular, single_function_representation,
    ClassificationReport, NormalForm, SingleFunction, Spectrum, Summand,
};
pub use extend::range_extend;

use crate::clifford::CliffordSystem;
use crate::error::{Error, Result};
use crate::matrix::{is_symmetric, Matrix, Scalar, TolerancePolicy};
use crate::osystem::common_square_size;

/// A quadratic map `ℝ^m → ℝ^n` given by symmetric component matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticHarmonicMorphism {
    m: usize,
    components: Vec<Matrix>,
}

impl QuadraticHarmonicMorphism {
    pub(crate) fn new_unchecked(m: usize, components: Vec<Matrix>) -> Self {
        debug_assert!(!components.is_empty());
        QuadraticHarmonicMorphism { m, components }
    }

    /// Domain dimension.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Range dimension.
    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Matrix] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Matrix> {
        self.components
    }

    pub fn is_exact(&self) -> bool {
        self.components.iter().all(Matrix::is_exact)
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        evaluate(self, x)
    }

    /// `φ ∘ G`, with components `Gᵗ A_α G`.
    pub fn precomposed(&self, g: &Matrix) -> QuadraticHarmonicMorphism {
        let gt = g.transpose();
        QuadraticHarmonicMorphism::new_unchecked(g.cols(), self.components.iter().map(|a| &(&gt * a) * g).collect())
    }
}

/// Floor for the sampled-criteria threshold; below this, float rounding in
/// the finite differences dominates.
const SAMPLE_TOL_FLOOR: f64 = 1e-12;

/// A matrix-criteria rejection this many times above threshold cannot be
/// missed by the sampled check unless one of the two is wrong.
const DISAGREEMENT_MARGIN: f64 = 1e3;

/// Checks that the symmetric matrices in `candidate` define a harmonic
/// morphism.
///
/// The matrix identities decide. The sampled check of the differential
/// conditions at `samples` seeded points must agree; a disagreement is
/// reported as [`Error::SampleDisagreement`]. A narrow matrix rejection that
/// the samples cannot resolve is reported as the matrix error.
pub fn verify_qhm(
    candidate: &[Matrix],
    tol: &TolerancePolicy,
    samples: usize,
    seed: u64,
) -> Result<QuadraticHarmonicMorphism> {
    let m = common_square_size(candidate)?;
    for (i, a) in candidate.iter().enumerate() {
        if !is_symmetric(a, tol) {
            return Err(Error::NotSymmetric { member: i + 1 });
        }
    }
    let matrix = matrix_defects(candidate, tol);
    let sampled = sampled_criteria(candidate, samples, seed);
    let samples_accept = sampled.passes(tol.identity_tol.max(SAMPLE_TOL_FLOOR));
    match matrix {
        Ok(()) if samples_accept => Ok(QuadraticHarmonicMorphism::new_unchecked(m, candidate.to_vec())),
        Ok(()) => Err(Error::SampleDisagreement {
            matrix_accepts: true,
            samples_accept,
        }),
        Err((_, relative)) if samples_accept && relative > DISAGREEMENT_MARGIN * tol.identity_tol => {
            Err(Error::SampleDisagreement {
                matrix_accepts: false,
                samples_accept,
            })
        }
        Err((e, _)) => Err(e),
    }
}

/// Matrix criteria only. Used for maps whose construction already
/// guarantees symmetric components.
pub(crate) fn check_matrix_criteria(components: &[Matrix], tol: &TolerancePolicy) -> Result<()> {
    matrix_defects(components, tol).map_err(|(e, _)| e)
}

/// The first violated identity, with its residual relative to the scale of
/// the components.
fn matrix_defects(components: &[Matrix], tol: &TolerancePolicy) -> std::result::Result<(), (Error, f64)> {
    let m = components[0].rows();
    let s = components.iter().map(Matrix::frobenius_norm).fold(0.0_f64, f64::max);
    if s == 0.0 {
        return Ok(());
    }
    let trace_scale = s * (m as f64).sqrt();
    for (alpha, a) in components.iter().enumerate() {
        let tr = a.trace();
        let ok = match &tr {
            Scalar::Exact(_) => tr.is_zero(),
            Scalar::Approx(t) => t.abs() <= tol.identity_tol * trace_scale,
        };
        if !ok {
            let trace = tr.to_f64();
            return Err((
                Error::NotHarmonic {
                    component: alpha + 1,
                    trace,
                },
                trace.abs() / trace_scale,
            ));
        }
    }
    let sq = s * s;
    let first_square = &components[0] * &components[0];
    for alpha in 0..components.len() {
        for beta in alpha + 1..components.len() {
            let r = components[alpha].anticommutator(&components[beta]);
            let (ok, residual) = tol.vanishes(&r, sq);
            if !ok {
                return Err((
                    Error::NotHorizontallyConformal {
                        alpha: alpha + 1,
                        beta: beta + 1,
                        residual,
                    },
                    residual / sq,
                ));
            }
        }
        if alpha > 0 {
            let r = &(&components[alpha] * &components[alpha]) - &first_square;
            let (ok, residual) = tol.vanishes(&r, sq);
            if !ok {
                return Err((
                    Error::NotHorizontallyConformal {
                        alpha: 1,
                        beta: alpha + 1,
                        residual,
                    },
                    residual / sq,
                ));
            }
        }
    }
    Ok(())
}

/// `φ(x)` componentwise.
pub fn evaluate(phi: &QuadraticHarmonicMorphism, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != phi.m {
        return Err(Error::DimensionMismatch {
            expected: phi.m,
            found: x.len(),
        });
    }
    Ok(phi.components.iter().map(|a| a.quadratic_form(x)).collect())
}

/// The map `X ↦ (XᵗP_1X, …, XᵗP_nX)` of a Clifford system. It is umbilical
/// with positive eigenvalue 1. Fails only for a one-member system whose `P_1`
/// has unequal `±1` multiplicities, which is not harmonic.
pub fn from_clifford(cs: &CliffordSystem) -> Result<QuadraticHarmonicMorphism> {
    let tol = TolerancePolicy::default();
    check_matrix_criteria(cs.matrices(), &tol)?;
    Ok(QuadraticHarmonicMorphism::new_unchecked(cs.two_m(), cs.matrices().to_vec()))
}

/// `(φ ⊕ ψ)(X, Y) = φ(X) + ψ(Y)`, components `diag(A_α, B_α)`.
pub fn direct_sum(a: &QuadraticHarmonicMorphism, b: &QuadraticHarmonicMorphism) -> Result<QuadraticHarmonicMorphism> {
    if a.n() != b.n() {
        return Err(Error::ArityMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(QuadraticHarmonicMorphism::new_unchecked(
        a.m + b.m,
        a.components
            .iter()
            .zip(&b.components)
            .map(|(x, y)| Matrix::block_diag(&[x, y]))
            .collect(),
    ))
}

/// `λφ`.
pub fn scaled(phi: &QuadraticHarmonicMorphism, lambda: &Scalar) -> QuadraticHarmonicMorphism {
    QuadraticHarmonicMorphism::new_unchecked(phi.m, phi.components.iter().map(|a| a.scale(lambda)).collect())
}

#[cfg(test)]
mod tests;
