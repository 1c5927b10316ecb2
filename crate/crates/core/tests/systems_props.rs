mod common;

use common::{config, dot};
use proptest::prelude::*;
use qhm_core::clifford::{
    self, algebraically_equivalent, commutant_dimension, construct_irreducible, is_irreducible, verify_clifford,
    EquivalenceStatus,
};
use qhm_core::matrix::random_orthogonal;
use qhm_core::orthomul::{from_osystem, to_osystem, verify_orthomul};
use qhm_core::osystem::{self, construct_range_maximal, hurwitz_radon, verify_osystem};
use qhm_core::sampling::{gaussian_point, unit_point};
use qhm_core::{Matrix, TolerancePolicy};

proptest! {
    #![proptest_config(config(100))]

    #[test]
    fn unit_combinations_are_orthogonal(m in 1usize..=32, seed in any::<u64>()) {
        let os = construct_range_maximal(m);
        let x = unit_point(os.n(), seed, 0);
        let t = os.combination(&x).unwrap();
        prop_assert!((&(&t.transpose() * &t) - &Matrix::identity(m)).max_abs() < 1e-12);
    }

    #[test]
    fn sub_systems_stay_valid(m in 1usize..=32, mask in any::<u16>()) {
        let os = construct_range_maximal(m);
        let idx: Vec<usize> = (0..os.n()).filter(|i| mask >> i & 1 == 1).collect();
        prop_assume!(!idx.is_empty());
        let sub = osystem::sub_system(&os, &idx).unwrap();
        prop_assert!(verify_osystem(sub.matrices(), &TolerancePolicy::default()).is_ok());
        let t = osystem::transpose_system(&sub);
        prop_assert!(verify_osystem(t.matrices(), &TolerancePolicy::default()).is_ok());
    }

    #[test]
    fn clifford_and_osystem_correspond(m in 1usize..=16, seed in any::<u64>()) {
        let os = construct_range_maximal(m);
        let cs = osystem::to_clifford(&os);
        prop_assert!(verify_clifford(cs.matrices(), &TolerancePolicy::default()).is_ok());
        prop_assert_eq!(&osystem::from_clifford(&cs).unwrap(), &os);
        // A rotated copy goes through the float path.
        let moved = cs.conjugated(&random_orthogonal(2 * m, seed));
        let back = osystem::to_clifford(&osystem::from_clifford(&moved).unwrap());
        let v = algebraically_equivalent(&back, &moved).unwrap();
        prop_assert_eq!(v.status, EquivalenceStatus::Equivalent);
    }

    #[test]
    fn irreducible_systems_are_unique_up_to_class(n in 1usize..=9, seed in any::<u64>()) {
        let cs = construct_irreducible(n);
        prop_assert!(is_irreducible(&cs));
        let g = random_orthogonal(cs.two_m(), seed);
        let moved = cs.conjugated(&g);
        let v = algebraically_equivalent(&cs, &moved).unwrap();
        prop_assert_eq!(v.status, EquivalenceStatus::Equivalent);
        let c = v.certificate.unwrap();
        let ct = c.transpose();
        for (p, q) in cs.matrices().iter().zip(moved.matrices()) {
            prop_assert!((&(&(&c * p) * &ct) - q).max_abs() < 1e-8);
        }
        let other = algebraically_equivalent(&cs, &moved.with_negated(n)).unwrap();
        let expected = if n % 4 == 0 { EquivalenceStatus::NotEquivalent } else { EquivalenceStatus::Equivalent };
        prop_assert_eq!(other.status, expected);
    }

    #[test]
    fn doubled_systems_are_reducible(n in 1usize..=6) {
        let a = construct_irreducible(n);
        prop_assert_eq!(commutant_dimension(&a), 1);
        let sum = clifford::direct_sum(&a, &a).unwrap();
        // Symmetric commutant of two copies: 2×2 Hermitian matrices over ℝ, ℂ or ℍ.
        prop_assert!([3, 4, 6].contains(&commutant_dimension(&sum)));
        prop_assert!(!is_irreducible(&sum));
    }

    #[test]
    fn orthogonal_multiplication_preserves_norms(m in 1usize..=16, seed in any::<u64>()) {
        let os = construct_range_maximal(m);
        let mu = from_osystem(&os);
        let report = verify_orthomul(&mu, 100, seed);
        prop_assert!(report.passed && report.sampled_defect < 1e-12);
        let x = gaussian_point(mu.p(), seed, 1);
        let y = gaussian_point(mu.q(), seed, 2);
        let z = mu.apply(&x, &y).unwrap();
        prop_assert!((dot(&z, &z) - dot(&x, &x) * dot(&y, &y)).abs() <= 1e-10 * (1.0 + dot(&z, &z)));
        prop_assert_eq!(&to_osystem(&mu).unwrap(), &os);
    }
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn odd_dimensions_admit_no_pairs(k in 1usize..=7, seed in any::<u64>()) {
        let m = 2 * k - 1;
        let cand = [random_orthogonal(m, seed), random_orthogonal(m, seed ^ 0xabcdef)];
        prop_assert!(verify_osystem(&cand, &TolerancePolicy::default()).is_err());
        prop_assert_eq!(hurwitz_radon(m).sigma, 1);
    }
}
