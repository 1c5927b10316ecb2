use nalgebra::DMatrix;

use super::classify::classify_with;
use super::{verify_qhm, QuadraticHarmonicMorphism};
use crate::clifford::{intertwiner, minimal_domain_dimension, split_basis};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, TolerancePolicy};
use crate::osystem::{construct_range_maximal, hurwitz_radon, verify_osystem};

const EXTENSION_SAMPLES: usize = 64;

/// Adds component functions to a domain-minimal map `ℝ^{2m} → ℝ^n` until
/// it is range-maximal, `ℝ^{2m} → ℝ^{σ(m)+1}`.
///
/// After dividing by the eigenvalue `λ`, the map is `F` of a Clifford
/// system whose O-system is `(τ_1, …, τ_{n−1})`. The complex structures
/// `σ_k = τ_kτ_1ᵗ` are conjugated onto the first members of the canonical
/// range-maximal family; the remaining canonical members, pulled back, give
/// the new components. If no alignment exists with the canonical family, one
/// more attempt is made with its last used member negated (the other
/// algebraic class). The result is verified before it is returned.
pub fn range_extend(phi: &QuadraticHarmonicMorphism) -> Result<QuadraticHarmonicMorphism> {
    let tol = TolerancePolicy::default();
    let report = classify_with(phi, &tol)?;
    if !report.is_q_nonsingular {
        return Err(Error::NotDomainMinimal(format!(
            "Q-rank {} is below the domain dimension {}",
            report.q_rank, report.m
        )));
    }
    if !report.is_umbilical {
        return Err(Error::NotDomainMinimal(format!(
            "separable into {} summands with distinct scales",
            report.splitting.len()
        )));
    }
    let n = phi.n();
    let half = phi.m() / 2;
    let required = if n == 1 { 1 } else { minimal_domain_dimension(n - 1) };
    if half != required {
        return Err(Error::NotDomainMinimal(format!(
            "domain R^{} is larger than the minimal R^{} for {} components",
            phi.m(),
            2 * required,
            n
        )));
    }
    let sigma = hurwitz_radon(half).sigma;
    if n > sigma {
        return Err(Error::AlreadyRangeMaximal {
            m: phi.m(),
            components: n,
        });
    }

    let lambda = report.splitting[0].scale.clone();
    let inv = lambda.recip().expect("positive eigenvalue");
    let unit: Vec<Matrix> = phi.components().iter().map(|a| a.scale(&inv)).collect();
    let a = split_basis(&unit[0], &tol)?;
    let at = a.transpose();
    let taus: Vec<Matrix> = unit[1..]
        .iter()
        .map(|p| (&(&a * p) * &at).block(0, half, half, half))
        .collect();

    let canonical = construct_range_maximal(half);
    let new_taus: Vec<Matrix> = match taus.first() {
        None => canonical.matrices().to_vec(),
        Some(t1) => {
            let js = &canonical.matrices()[1..];
            let used = taus.len() - 1;
            let theta = if used == 0 {
                None
            } else {
                let t1t = t1.transpose();
                let sig: Vec<DMatrix<f64>> = taus[1..].iter().map(|t| (t * &t1t).to_nalgebra()).collect();
                let mut targets: Vec<DMatrix<f64>> = js[..used].iter().map(Matrix::to_nalgebra).collect();
                let theta = intertwiner(&sig, &targets, &tol).or_else(|| {
                    targets[used - 1] = -&targets[used - 1];
                    intertwiner(&sig, &targets, &tol)
                });
                match theta {
                    Some(t) => Some(Matrix::from_nalgebra(&t)),
                    None => {
                        return Err(Error::NotExtendable(
                            "the complex structures of the map cannot be aligned with the canonical family".into(),
                        ))
                    }
                }
            };
            js[used..]
                .iter()
                .map(|j| match &theta {
                    // σ = θᵗ J θ, τ = σ τ_1
                    Some(th) => &(&(&th.transpose() * j) * th) * t1,
                    None => j * t1,
                })
                .collect()
        }
    };

    let mut all_taus = taus.clone();
    all_taus.extend(new_taus.iter().cloned());
    verify_osystem(&all_taus, &tol).map_err(|e| Error::NotExtendable(format!("extended family is invalid: {e}")))?;

    let z = Matrix::zeros(half, half);
    let mut components = phi.components().to_vec();
    for t in &new_taus {
        let s = Matrix::from_blocks(&z, t, &t.transpose(), &z);
        components.push((&(&at * &s) * &a).scale(&lambda));
    }
    verify_qhm(&components, &tol, EXTENSION_SAMPLES, 0)
        .map_err(|e| Error::NotExtendable(format!("extended map failed verification: {e}")))
}
