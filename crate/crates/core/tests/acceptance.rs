//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line in plain `cargo test` output.

use std::panic::{catch_unwind, AssertUnwindSafe};

use num_bigint::BigUint;
use qhm_core::clifford::{
    algebraically_equivalent, construct_irreducible, minimal_domain_dimension, EquivalenceStatus,
};
use qhm_core::gallery::two_scale_r8_components;
use qhm_core::matrix::random_orthogonal;
use qhm_core::orthomul::{hopf_construction, standard_multiplication};
use qhm_core::osystem::{self, construct_range_maximal, hurwitz_radon, verify_osystem};
use qhm_core::qhm::{
    self, classify, count_biequivalence_classes, normal_form, single_function_representation,
    sphere_restriction_check, verify_isoparametric, verify_qhm, volume_trace, QuadraticHarmonicMorphism,
};
use qhm_core::sampling::{gaussian_point, unit_point};
use qhm_core::{CliffordSystem, Matrix, Scalar, TolerancePolicy};

fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

/// Independent σ: the classical rule ρ(2^(4a+b)·odd) = 8a + 2^b, computed by
/// repeated division instead of bit tricks.
fn sigma_oracle(m: usize) -> usize {
    let mut e = 0;
    let mut k = m;
    while k % 2 == 0 {
        k /= 2;
        e += 1;
    }
    8 * (e / 4) + [1, 2, 4, 8][e % 4]
}

fn max_conjugation_residual(c: &Matrix, a: &CliffordSystem, b: &CliffordSystem) -> f64 {
    let ct = c.transpose();
    a.matrices()
        .iter()
        .zip(b.matrices())
        .map(|(p, q)| (&(&(c * p) * &ct) - q).max_abs())
        .fold(0.0, f64::max)
}

fn criterion_1() {
    let expected = [1, 2, 1, 4, 1, 2, 1, 8, 1, 2, 1, 4, 1, 2, 1, 9];
    for m in 1..=16 {
        let h = hurwitz_radon(m);
        assert_eq!(h.sigma, expected[m - 1], "σ({m})");
        assert_eq!(h.sigma, sigma_oracle(m));
        assert_eq!(m, (2 * h.r + 1) << (h.c + 4 * h.d));
        assert!(h.c <= 3);
    }
}

fn criterion_2() {
    let expected = [1, 2, 4, 4, 8, 8, 8, 8, 16, 32];
    for n in 1..=10 {
        assert_eq!(minimal_domain_dimension(n), expected[n - 1], "m({n})");
        // Oracle: the smallest power of two whose σ reaches n.
        let mut m = 1;
        while sigma_oracle(m) < n {
            m *= 2;
        }
        assert_eq!(minimal_domain_dimension(n), m);
    }
}

fn criterion_3() {
    let comps = two_scale_r8_components();
    assert!(comps.iter().all(Matrix::is_exact));
    // Zero residual in exact arithmetic, checked directly.
    for (i, a) in comps.iter().enumerate() {
        assert!(a.trace().is_zero());
        for b in &comps[i + 1..] {
            assert!(a.anticommutator(b).is_zero());
        }
        assert!((&(a * a) - &(&comps[0] * &comps[0])).is_zero());
    }
    let phi = verify_qhm(&comps, &tol(), 64, 0).expect("valid");

    let r = classify(&phi).unwrap();
    assert_eq!(r.q_rank, 8);
    assert_eq!(r.spectrum.positive, vec![(Scalar::int(3), 2), (Scalar::int(2), 2)]);
    assert_eq!(r.spectrum.zero_count, 0);
    assert_eq!(r.spectrum.eigenvalues(), vec![3.0, 3.0, 2.0, 2.0, -2.0, -2.0, -3.0, -3.0]);
    assert!(!r.is_umbilical);
    assert_eq!(r.scales(), vec![3.0, 2.0]);

    // Library representation: F = 3F₀ ⊕ 2F₀ (descending scales) with one
    // isometry per component.
    let sf = single_function_representation(&phi).unwrap();
    assert_eq!(sf.scales, vec![Scalar::int(3), Scalar::int(2)]);
    assert_eq!(sf.block_dims, vec![2, 2]);
    // Swapping the two ℝ⁴ blocks turns it into 2F₀ ⊕ 3F₀.
    let f0 = Matrix::diag_ints(&[1, 1, -1, -1]);
    let f_ref = Matrix::block_diag(&[&f0.scale(&Scalar::int(2)), &f0.scale(&Scalar::int(3))]);
    let swap = Matrix::permutation(&[4, 5, 6, 7, 0, 1, 2, 3]);
    assert_eq!(&(&swap.transpose() * &f_ref) * &swap, sf.matrix);

    // Hand-built isometries, with G₃'s first row read as (1, 0, 0, 1)/√2:
    // φ²(x) = F((G₁⊕G₃)Πx) and φ³(x) = F((G₂⊕G₁)Πx), Π = (x₁,x₂,x₅,x₆,x₃,x₄,x₇,x₈).
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    let g = |rows: [[f64; 4]; 4]| Matrix::from_f64s(4, 4, rows.iter().flatten().map(|v| v * r2).collect());
    let g1 = g([[1., 0., 1., 0.], [0., 1., 0., 1.], [-1., 0., 1., 0.], [0., -1., 0., 1.]]);
    let g2 = g([[1., 0., 0., -1.], [0., 1., 1., 0.], [0., -1., 1., 0.], [1., 0., 0., 1.]]);
    let g3 = g([[1., 0., 0., 1.], [0., 1., -1., 0.], [0., 1., 1., 0.], [-1., 0., 0., 1.]]);
    let pi = Matrix::permutation(&[0, 1, 4, 5, 2, 3, 6, 7]);
    let h2 = &Matrix::block_diag(&[&g1, &g3]) * &pi;
    let h3 = &Matrix::block_diag(&[&g2, &g1]) * &pi;

    let mut worst = 0.0_f64;
    for k in 0..100 {
        let x = gaussian_point(8, 2024, k);
        let v = phi.evaluate(&x).unwrap();
        for alpha in 0..3 {
            worst = worst.max((sf.evaluate(&sf.maps[alpha].mul_vec(&x)) - v[alpha]).abs());
        }
        worst = worst.max((f_ref.quadratic_form(&h2.mul_vec(&x)) - v[1]).abs());
        worst = worst.max((f_ref.quadratic_form(&h3.mul_vec(&x)) - v[2]).abs());
        worst = worst.max((f_ref.quadratic_form(&pi.mul_vec(&x)) - v[0]).abs());
    }
    assert!(worst < 1e-9, "worst defect {worst:e}");
}

fn criterion_4() {
    for m in 1..=16 {
        let os = construct_range_maximal(m);
        let subs: Vec<osystem::OSystem> = (1..=os.n())
            .map(|k| osystem::sub_system(&os, &(0..k).collect::<Vec<_>>()).unwrap())
            .collect();
        for s in subs {
            assert_eq!(osystem::from_clifford(&osystem::to_clifford(&s)).unwrap(), s, "m = {m}");
        }
    }
    for n in 1..=9 {
        let cs = construct_irreducible(n);
        for (seed, moved) in [(None, cs.clone()), (Some(n as u64), cs.conjugated(&random_orthogonal(cs.two_m(), n as u64)))] {
            let os = osystem::from_clifford(&moved).unwrap();
            let back = osystem::to_clifford(&os);
            let v = algebraically_equivalent(&back, &moved).unwrap();
            assert_eq!(v.status, EquivalenceStatus::Equivalent, "n = {n}, seed {seed:?}");
            let c = v.certificate.unwrap();
            let res = max_conjugation_residual(&c, &back, &moved);
            assert!(res < 1e-8, "n = {n}: residual {res:e}");
        }
    }
}

fn criterion_5() {
    for n in 1..=9 {
        let cs = construct_irreducible(n);
        let phi = qhm::from_clifford(&cs).unwrap();
        assert_eq!((phi.m(), phi.n()), (2 * minimal_domain_dimension(n), n + 1));
        assert!(phi.is_exact());
        verify_qhm(phi.components(), &tol(), 32, n as u64).unwrap();
        let r = classify(&phi).unwrap();
        assert!(r.is_umbilical && r.is_q_nonsingular);
        assert_eq!(r.spectrum.positive, vec![(Scalar::int(1), phi.m() / 2)]);
    }
    for m in [1, 2, 4, 8, 16] {
        let os = construct_range_maximal(m);
        assert!(os.is_exact());
        assert_eq!(os.n(), sigma_oracle(m));
        let checked = verify_osystem(os.matrices(), &tol()).unwrap();
        assert_eq!(checked.n(), os.n());
        // Exact zero residual, computed here.
        for (i, a) in os.matrices().iter().enumerate() {
            for (j, b) in os.matrices().iter().enumerate() {
                let mut r = &(&a.transpose() * b) + &(&b.transpose() * a);
                if i == j {
                    r = &r - &Matrix::identity(m).scale(&Scalar::int(2));
                }
                assert!(r.is_zero());
            }
        }
    }
}

fn criterion_6() {
    let mut accepted = 0;
    for m in [3, 5, 7] {
        for s in 0..1000u64 {
            let t1 = random_orthogonal(m, 2 * s + 1_000 * m as u64);
            let t2 = random_orthogonal(m, 2 * s + 1 + 1_000 * m as u64);
            if verify_osystem(&[t1, t2], &tol()).is_ok() {
                accepted += 1;
            }
        }
        // The obvious candidates too: identity with a signed permutation.
        let mut perm: Vec<usize> = (1..m).collect();
        perm.push(0);
        if verify_osystem(&[Matrix::identity(m), Matrix::permutation(&perm)], &tol()).is_ok() {
            accepted += 1;
        }
    }
    assert_eq!(accepted, 0, "false accepts");
}

fn relation_residual_abs(d: &Matrix, bs: &[Matrix]) -> f64 {
    let d2 = d * d;
    let mut worst = 0.0_f64;
    for (i, b) in bs.iter().enumerate() {
        worst = worst.max((&(d * b) - &(b * d)).max_abs());
        worst = worst.max((&(&b.transpose() * b) - &d2).max_abs());
        for c in &bs[i + 1..] {
            worst = worst.max((&(&b.transpose() * c) + &(&c.transpose() * b)).max_abs());
        }
    }
    worst
}

fn criterion_7() {
    let scales = [1i64, 2, 3, 5];
    for case in 0..200u64 {
        let n = 1 + (case % 4) as usize;
        let la = scales[(case / 4 % 4) as usize];
        let lb = scales[(case / 16 % 4) as usize];
        let base = construct_irreducible(n);
        // Alternate between equal and opposite classes for the second summand.
        let other = if case % 2 == 0 { base.clone() } else { base.with_negated(n) };
        let pa = qhm::scaled(&qhm::from_clifford(&base).unwrap(), &Scalar::int(la));
        let pb = qhm::scaled(&qhm::from_clifford(&other).unwrap(), &Scalar::int(lb));
        let sum = qhm::direct_sum(&pa, &pb).unwrap();
        let g = random_orthogonal(sum.m(), 7_000 + case);
        let phi = sum.precomposed(&g);

        let nf = normal_form(&phi).unwrap();
        let res = relation_residual_abs(&nf.d, &nf.b);
        assert!(res < 1e-8, "case {case}: relation residual {res:e}");

        let r = classify(&phi).unwrap();
        let summand_dim = 2 * minimal_domain_dimension(n);
        let mut expected: Vec<(i64, usize)> = if la == lb {
            vec![(la, 2 * summand_dim)]
        } else {
            vec![(la.max(lb), summand_dim), (la.min(lb), summand_dim)]
        };
        expected.sort_by(|a, b| b.0.cmp(&a.0));
        let got: Vec<(i64, usize)> = r
            .splitting
            .iter()
            .map(|s| {
                let l = s.scale.to_f64();
                assert!((l - l.round()).abs() < 1e-8, "case {case}: scale {l}");
                (l.round() as i64, s.map.m())
            })
            .collect();
        assert_eq!(got, expected, "case {case}");
    }
}

fn criterion_8() {
    let mut hopf4 = None;
    for n in [1, 2, 4, 8] {
        let h = hopf_construction(&standard_multiplication(n).unwrap()).unwrap();
        assert!(h.is_exact());
        let v = verify_qhm(h.components(), &tol(), 64, 0).unwrap();
        assert_eq!((v.m(), v.n()), (2 * n, n + 1));
        let s = sphere_restriction_check(&h, 1000, n as u64).unwrap();
        assert!((s.radius - 1.0).abs() <= 1e-12 && s.max_defect <= 1e-12, "n = {n}: {s:?}");
        // Oracle for the sphere identity: ‖H(x)‖ against ‖x‖² directly.
        for k in 0..50 {
            let x = unit_point(2 * n, 99, k);
            let hv = h.evaluate(&x).unwrap();
            let nrm = hv.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((nrm - 1.0).abs() < 1e-12);
        }
        if n == 4 {
            hopf4 = Some(h);
        }
    }
    let hopf4 = hopf4.unwrap();
    // 2μ on ℍ: the last four Hopf components.
    let two_mu = verify_qhm(&hopf4.components()[1..], &tol(), 64, 0).unwrap();
    assert_eq!((two_mu.m(), two_mu.n()), (8, 4));
    let ext = qhm::range_extend(&two_mu).unwrap();
    assert_eq!(ext.n(), 5);
    let re = classify(&ext).unwrap();
    let rh = classify(&hopf4).unwrap();
    assert_eq!(re.q_rank, 8);
    assert!(re.is_umbilical && re.is_q_nonsingular);
    assert_eq!((rh.q_rank, rh.is_umbilical), (re.q_rank, re.is_umbilical));
    let lam = re.splitting[0].scale.to_f64();
    assert!((lam - 1.0).abs() < 1e-12);
    assert_eq!(rh.splitting[0].scale, Scalar::int(1));
    assert_eq!(re.spectrum.positive[0].1, rh.spectrum.positive[0].1);
}

fn criterion_9() {
    for m in [1usize, 2, 4, 8] {
        let id = Matrix::identity(m);
        let f0 = Matrix::block_diag(&[&id, &(-&id)]);
        let r = verify_isoparametric(&f0, 1000, m as u64).unwrap();
        assert!(r.holds);
        assert_eq!(r.c, 0.0);
        assert_eq!(r.scale, 1.0);
        assert!(r.max_gradient_defect <= 1e-10 && r.max_laplacian_defect <= 1e-10, "{r:?}");
        // Oracle: ∇F = 2Mx, ΔF = 2 tr M.
        for k in 0..1000 {
            let x = gaussian_point(2 * m, 31 + m as u64, k);
            let grad: Vec<f64> = f0.mul_vec(&x).iter().map(|v| 2.0 * v).collect();
            let g2: f64 = grad.iter().map(|v| v * v).sum();
            let r2: f64 = x.iter().map(|v| v * v).sum();
            assert!((g2 - 4.0 * r2).abs() <= 1e-10 * (1.0 + 4.0 * r2));
        }
        assert!(f0.trace().is_zero());
    }
}

/// Signature of a sum of scaled irreducible maps for `n ≡ 0 mod 4`: the
/// sign of tr(P₁⋯P_{n+1}) of each summand, in descending order of scale.
fn class_signature(phi: &QuadraticHarmonicMorphism) -> Vec<i8> {
    classify(phi)
        .unwrap()
        .splitting
        .iter()
        .map(|s| if volume_trace(s.map.components()).to_f64() > 0.0 { 1 } else { -1 })
        .collect()
}

fn criterion_10() {
    for n in 1..=12usize {
        for k in 1..=8usize {
            let want = if n % 4 == 0 { BigUint::from(1u8) << (k - 1) } else { BigUint::from(1u8) };
            assert_eq!(count_biequivalence_classes(n, k), want, "(n, k) = ({n}, {k})");
        }
    }

    let base = construct_irreducible(4);
    let base_sign: i8 = if volume_trace(base.matrices()).to_f64() > 0.0 { 1 } else { -1 };
    assert_eq!(volume_trace(base.matrices()).abs(), Scalar::int(8));
    let flip_last = |phi: &QuadraticHarmonicMorphism| {
        let mut c = phi.components().to_vec();
        let last = c.len() - 1;
        c[last] = -&c[last];
        verify_qhm(&c, &tol(), 8, 0).unwrap()
    };
    for k in 1..=4usize {
        let mut classes = std::collections::BTreeSet::new();
        for pattern in 0..(1u32 << k) {
            let mut parts = Vec::new();
            for j in 0..k {
                let cs = if pattern >> j & 1 == 1 { base.with_negated(4) } else { base.clone() };
                let scale = Scalar::int(k as i64 + 1 - j as i64);
                parts.push(qhm::scaled(&qhm::from_clifford(&cs).unwrap(), &scale));
            }
            let sum = parts[1..].iter().fold(parts[0].clone(), |acc, p| qhm::direct_sum(&acc, p).unwrap());
            let phi = sum.precomposed(&random_orthogonal(sum.m(), 500 + pattern as u64));
            let sig = class_signature(&phi);
            let expected: Vec<i8> = (0..k).map(|j| if pattern >> j & 1 == 1 { -base_sign } else { base_sign }).collect();
            assert_eq!(sig, expected, "k = {k}, pattern {pattern:b}");
            // Negating the last range coordinate flips every summand's class.
            let flipped = class_signature(&flip_last(&phi));
            assert_eq!(flipped, sig.iter().map(|s| -s).collect::<Vec<_>>());
            let normalised: Vec<i8> = if sig[0] < 0 { sig.iter().map(|s| -s).collect() } else { sig };
            classes.insert(normalised);
        }
        assert_eq!(BigUint::from(classes.len()), count_biequivalence_classes(4, k), "k = {k}");
    }
}

fn main() {
    let criteria: [(&str, fn()); 10] = [
        ("Hurwitz–Radon numbers for m = 1..16", criterion_1),
        ("minimal domain dimensions m(1..10)", criterion_2),
        ("two-scale map on R^8: verification, classification, single function", criterion_3),
        ("Clifford / O-system correspondence round trips", criterion_4),
        ("existence sweep: irreducible systems and range-maximal families", criterion_5),
        ("no O-system pairs on R^3, R^5, R^7", criterion_6),
        ("normal form and splitting of 200 conjugated direct sums", criterion_7),
        ("Hopf constructions and range extension of 2μ on H", criterion_8),
        ("isoparametric conditions for F0", criterion_9),
        ("bi-equivalence class counts", criterion_10),
    ];
    // Keep failure output to the summary line plus the panic message.
    let default_hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|info| eprintln!("    {info}")));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let ok = catch_unwind(AssertUnwindSafe(f)).is_ok();
        if !ok {
            failed += 1;
        }
        println!("acceptance {:>2}: {} {}", i + 1, if ok { "PASS" } else { "FAIL" }, name);
    }
    std::panic::set_hook(default_hook);
    println!("acceptance: {} passed, {} failed", criteria.len() - failed, failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
