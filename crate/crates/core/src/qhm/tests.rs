use super::*;
use crate::clifford::{self, construct_irreducible};
use crate::gallery::{two_scale_r8, two_scale_r8_components, z_squared, z_squared_components};
use crate::matrix::random_orthogonal;
use crate::orthomul::{hopf_construction, standard_multiplication};

fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

#[test]
fn z_squared_is_valid_and_evaluates() {
    let phi = verify_qhm(&z_squared_components(), &tol(), 64, 0).unwrap();
    assert_eq!(phi.evaluate(&[1.0, 0.0]).unwrap(), vec![1.0, 0.0]);
    assert_eq!(phi.evaluate(&[1.0, 1.0]).unwrap(), vec![0.0, 2.0]);
    assert_eq!(
        phi.evaluate(&[1.0]),
        Err(Error::DimensionMismatch { expected: 2, found: 1 })
    );
}

#[test]
fn identity_is_not_harmonic() {
    assert_eq!(
        verify_qhm(&[Matrix::identity(2)], &tol(), 16, 0),
        Err(Error::NotHarmonic {
            component: 1,
            trace: 2.0
        })
    );
}

#[test]
fn two_scale_map_is_valid() {
    let phi = verify_qhm(&two_scale_r8_components(), &tol(), 64, 0).unwrap();
    let mut e1 = vec![0.0; 8];
    e1[0] = 1.0;
    assert_eq!(phi.evaluate(&e1).unwrap(), vec![2.0, 0.0, 0.0]);
}

#[test]
fn non_conformal_pair_is_rejected() {
    let comps = vec![Matrix::diag_ints(&[1, -1]), Matrix::diag_ints(&[1, -1])];
    assert!(matches!(
        verify_qhm(&comps, &tol(), 16, 0),
        Err(Error::NotHorizontallyConformal { alpha: 1, beta: 2, .. })
    ));
    let unequal = vec![Matrix::diag_ints(&[1, -1]), Matrix::from_ints(2, 2, &[0, 2, 2, 0])];
    assert!(matches!(
        verify_qhm(&unequal, &tol(), 16, 0),
        Err(Error::NotHorizontallyConformal { alpha: 1, beta: 2, .. })
    ));
}

#[test]
fn sampled_dilation_matches_four_x_a_squared_x() {
    let crit = sampled_criteria(&z_squared_components(), 8, 3);
    for (k, l2) in crit.dilations.iter().enumerate() {
        let x = crate::sampling::gaussian_point(2, 3, k as u64);
        let r2 = x[0] * x[0] + x[1] * x[1];
        assert!((l2 - 4.0 * r2).abs() < 1e-12 * (1.0 + r2));
    }
}

#[test]
fn clifford_maps_are_umbilical_with_eigenvalue_one() {
    let phi = from_clifford(&construct_irreducible(1)).unwrap();
    assert_eq!(phi, z_squared());
    let r = classify(&from_clifford(&construct_irreducible(8)).unwrap()).unwrap();
    assert!(r.is_umbilical && r.is_q_nonsingular);
    assert_eq!(r.q_rank, 16);
    assert_eq!(r.spectrum.positive, vec![(Scalar::int(1), 8)]);
    let id = clifford::verify_clifford(&[Matrix::identity(2)], &tol()).unwrap();
    assert!(from_clifford(&id).is_err());
}

#[test]
fn classify_two_scale_map() {
    let r = classify(&two_scale_r8()).unwrap();
    assert_eq!(r.q_rank, 8);
    assert!(r.is_q_nonsingular);
    assert!(!r.is_umbilical);
    assert_eq!(r.spectrum.positive, vec![(Scalar::int(3), 2), (Scalar::int(2), 2)]);
    assert_eq!(r.scales(), vec![3.0, 2.0]);
    for s in &r.splitting {
        assert_eq!((s.map.m(), s.map.n()), (4, 3));
        assert!(s.map.is_exact());
        verify_qhm(s.map.components(), &tol(), 16, 0).unwrap();
    }
    assert!(r.coordinate_change.is_exact());
    let re = r.reassemble().unwrap();
    assert_eq!(re.precomposed(&r.coordinate_change), two_scale_r8());
}

#[test]
fn normal_form_of_two_scale_map_is_exact() {
    let nf = normal_form(&two_scale_r8()).unwrap();
    assert_eq!(nf.d, Matrix::diag_ints(&[3, 3, 2, 2]));
    assert_eq!(nf.b.len(), 2);
    assert!(nf.b.iter().all(Matrix::is_exact));
    assert_eq!(nf.relation_residual(), 0.0);
    assert_eq!(nf.reassemble(), two_scale_r8_components());
}

#[test]
fn normal_form_of_z_squared() {
    let nf = normal_form(&z_squared()).unwrap();
    assert_eq!(nf.change_of_coords, Matrix::identity(2));
    assert_eq!(nf.d, Matrix::identity(1));
    assert_eq!(nf.b, vec![Matrix::identity(1)]);
}

#[test]
fn normal_form_after_rotation() {
    let g = random_orthogonal(2, 17);
    let phi = z_squared().precomposed(&g);
    let nf = normal_form(&phi).unwrap();
    assert!((nf.d.get_f64(0, 0) - 1.0).abs() < 1e-12);
    assert!((nf.b[0].get_f64(0, 0).abs() - 1.0).abs() < 1e-12);
    assert!(nf.relation_residual() < 1e-12);
}

#[test]
fn two_distinct_scales_of_z_squared_split() {
    let phi = direct_sum(&scaled(&z_squared(), &Scalar::int(1)), &scaled(&z_squared(), &Scalar::int(4))).unwrap();
    let moved = phi.precomposed(&random_orthogonal(4, 2));
    let r = classify(&moved).unwrap();
    assert!(!r.is_umbilical);
    let s = r.scales();
    assert!((s[0] - 4.0).abs() < 1e-9 && (s[1] - 1.0).abs() < 1e-9);
    assert!(r.splitting.iter().all(|x| x.map.m() == 2));
}

#[test]
fn projection_of_padded_map() {
    let padded: Vec<Matrix> = z_squared_components()
        .iter()
        .map(|a| Matrix::block_diag(&[a, &Matrix::zeros(1, 1)]))
        .collect();
    let phi = verify_qhm(&padded, &tol(), 16, 0).unwrap();
    let (pi, core) = project_nonsingular(&phi).unwrap();
    assert_eq!(core, z_squared());
    assert_eq!(pi, Matrix::from_ints(2, 3, &[1, 0, 0, 0, 1, 0]));
    assert_eq!(project_nonsingular(&z_squared()), Err(Error::QNonsingular));
    let r = classify(&phi).unwrap();
    assert_eq!((r.q_rank, r.spectrum.zero_count), (2, 1));
    assert!(!r.is_q_nonsingular);
}

#[test]
fn projection_after_rotation() {
    let padded: Vec<Matrix> = two_scale_r8_components()
        .iter()
        .map(|a| Matrix::block_diag(&[a, &Matrix::zeros(2, 2)]))
        .collect();
    let phi = QuadraticHarmonicMorphism::new_unchecked(10, padded).precomposed(&random_orthogonal(10, 8));
    let (pi, core) = project_nonsingular(&phi).unwrap();
    assert_eq!(pi.shape(), (8, 10));
    for k in 0..10 {
        let x = crate::sampling::gaussian_point(10, 1, k);
        let a = phi.evaluate(&x).unwrap();
        let b = core.evaluate(&pi.mul_vec(&x)).unwrap();
        assert!(a.iter().zip(&b).all(|(u, v)| (u - v).abs() < 1e-9));
    }
}

#[test]
fn unshared_kernel_is_reported() {
    let comps = vec![Matrix::diag_ints(&[1, -1, 0]), Matrix::from_ints(3, 3, &[0, 0, 1, 0, 0, 0, 1, 0, 0])];
    let phi = QuadraticHarmonicMorphism::new_unchecked(3, comps);
    assert!(matches!(
        project_nonsingular(&phi),
        Err(Error::SharedKernelViolated { component: 2, .. })
    ));
}

#[test]
fn rank_mismatch_is_reported() {
    let comps = vec![Matrix::diag_ints(&[1, -1, 0, 0]), Matrix::diag_ints(&[1, -1, 1, -1])];
    let phi = QuadraticHarmonicMorphism::new_unchecked(4, comps);
    assert_eq!(classify(&phi), Err(Error::RankMismatch(vec![2, 4])));
}

#[test]
fn single_function_for_z_squared() {
    let sf = single_function_representation(&z_squared()).unwrap();
    assert_eq!(sf.matrix, Matrix::diag_ints(&[1, -1]));
    let g2 = &sf.maps[1];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for v in g2.to_f64_vec() {
        assert!((v.abs() - h).abs() < 1e-12);
    }
    for k in 0..20 {
        let x = crate::sampling::gaussian_point(2, 4, k);
        let want = 2.0 * x[0] * x[1];
        assert!((sf.evaluate(&g2.mul_vec(&x)) - want).abs() < 1e-9);
    }
}

#[test]
fn hopf_maps_extend_and_stop() {
    let hopf4 = hopf_construction(&standard_multiplication(4).unwrap()).unwrap();
    let truncated = QuadraticHarmonicMorphism::new_unchecked(8, hopf4.components()[..4].to_vec());
    let ext = range_extend(&truncated).unwrap();
    assert_eq!(ext.n(), 5);
    assert_eq!(&ext.components()[..4], truncated.components());

    let hopf8 = hopf_construction(&standard_multiplication(8).unwrap()).unwrap();
    assert_eq!(
        range_extend(&hopf8),
        Err(Error::AlreadyRangeMaximal { m: 16, components: 9 })
    );
    assert!(matches!(range_extend(&two_scale_r8()), Err(Error::NotDomainMinimal(_))));
}

#[test]
fn extension_from_a_single_component() {
    let f0 = QuadraticHarmonicMorphism::new_unchecked(2, vec![Matrix::diag_ints(&[3, -3])]);
    let ext = range_extend(&f0).unwrap();
    assert_eq!(ext.n(), 2);
    let r = classify(&ext).unwrap();
    assert_eq!(r.spectrum.positive, vec![(Scalar::int(3), 1)]);
}

#[test]
fn extension_of_rotated_small_maps() {
    for n in 2..=8usize {
        let cs = construct_irreducible(n - 1);
        let m2 = cs.two_m();
        if n - 1 >= crate::osystem::hurwitz_radon(m2 / 2).sigma {
            continue;
        }
        let phi = from_clifford(&cs).unwrap().precomposed(&random_orthogonal(m2, n as u64));
        let ext = range_extend(&phi).unwrap_or_else(|e| panic!("n = {n}: {e}"));
        assert_eq!(ext.n(), crate::osystem::hurwitz_radon(m2 / 2).sigma + 1);
    }
}

#[test]
fn isoparametric_examples() {
    let f0 = Matrix::diag_ints(&[1, 1, -1, -1]);
    let r = verify_isoparametric(&f0, 200, 0).unwrap();
    assert!(r.holds);
    assert_eq!(r.c, 0.0);
    let x1sq = Matrix::diag_ints(&[1, 0]);
    assert!(!verify_isoparametric(&x1sq, 50, 0).unwrap().holds);
    let r = verify_isoparametric(&f0.scale(&Scalar::int(5)), 100, 0).unwrap();
    assert!(r.holds && r.c == 0.0 && (r.scale - 5.0).abs() < 1e-12);
}

#[test]
fn sphere_radius() {
    let r = sphere_restriction_check(&z_squared(), 100, 0).unwrap();
    assert!(r.holds && (r.radius - 1.0).abs() < 1e-15);
    let r = sphere_restriction_check(&scaled(&z_squared(), &Scalar::int(3)), 100, 0).unwrap();
    assert!(r.holds && r.radius == 3.0);
    assert_eq!(sphere_restriction_check(&two_scale_r8(), 10, 0), Err(Error::NotUmbilical));
}

#[test]
fn class_counts() {
    use num_bigint::BigUint;
    assert_eq!(count_biequivalence_classes(3, 5), BigUint::from(1u8));
    assert_eq!(count_biequivalence_classes(4, 1), BigUint::from(1u8));
    assert_eq!(count_biequivalence_classes(4, 3), BigUint::from(4u8));
    assert_eq!(count_biequivalence_classes(8, 100), BigUint::from(1u8) << 99);
}
