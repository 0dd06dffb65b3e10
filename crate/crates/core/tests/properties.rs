use std::sync::Arc;

use banalg_lab::algebra::RADICAL_TOL;
use banalg_lab::engine::{check_midpoint, estimate_u0, EngineError};
use banalg_lab::linalg::matrix_unit;
use banalg_lab::numrange::{mu_sup_re_estimate, numerical_radius, MONOTONE_SLACK};
use banalg_lab::oracle::{random_gln_oracle, FormTag};
use banalg_lab::sampling::{rng_from_seed, LabRng};
use banalg_lab::{AlgebraSpec, IsometryOracle, NormKind};
use num_complex::Complex64;
use proptest::prelude::*;

fn norm_kind() -> impl Strategy<Value = NormKind> {
    prop::sample::select(NormKind::ALL.to_vec())
}

fn tag() -> impl Strategy<Value = FormTag> {
    prop::sample::select(FormTag::ALL.to_vec())
}

fn builtin(k: usize, norm: NormKind) -> AlgebraSpec {
    match k {
        0 => AlgebraSpec::full_matrix(2, norm),
        1 => AlgebraSpec::full_matrix(3, norm),
        2 => AlgebraSpec::upper_triangular(2, norm),
        3 => AlgebraSpec::upper_triangular(3, norm),
        4 => AlgebraSpec::diagonal(3, norm),
        5 => AlgebraSpec::dame_a(norm),
        _ => AlgebraSpec::dame_b(norm),
    }
}

fn rng(seed: u64) -> LabRng {
    rng_from_seed(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn norms_are_submultiplicative(seed: u64, n in 1usize..=4, norm in norm_kind()) {
        let alg = AlgebraSpec::full_matrix(n, norm);
        let mut rng = rng(seed);
        let a = alg.random_element(&mut rng);
        let b = alg.random_element(&mut rng);
        prop_assert!(alg.norm(&(&a * &b)) <= alg.norm(&a) * alg.norm(&b) + 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn spectral_radius_is_symmetric_in_products(seed: u64, n in 1usize..=4) {
        let alg = AlgebraSpec::full_matrix(n, NormKind::Spectral);
        let mut rng = rng(seed);
        let a = alg.random_element(&mut rng);
        let b = alg.random_element(&mut rng);
        let ab = alg.spectral_radius(&(&a * &b)).unwrap();
        let ba = alg.spectral_radius(&(&b * &a)).unwrap();
        prop_assert!((ab - ba).abs() < 1e-7 * ab.max(1.0), "{ab} vs {ba}");
    }

    #[test]
    fn spectral_radius_is_below_every_norm(seed: u64, k in 0usize..7, norm in norm_kind()) {
        let alg = builtin(k, norm);
        let a = alg.random_element(&mut rng(seed));
        prop_assert!(alg.spectral_radius(&a).unwrap() <= alg.norm(&a) * (1.0 + 1e-9));
    }

    #[test]
    fn inverses_stay_in_the_subalgebra(seed: u64, k in 2usize..7) {
        let alg = builtin(k, NormKind::Spectral);
        let a = alg.random_invertible(&mut rng(seed));
        let inv = a.clone().try_inverse().unwrap();
        let (_, residual) = alg.project(&inv);
        prop_assert!(residual < 1e-8 * alg.norm(&inv).max(1.0), "{residual}");
    }

    #[test]
    fn radical_translates_keep_invertibility(seed: u64, k in 2usize..7) {
        let alg = builtin(k, NormKind::Spectral);
        let mut rng = rng(seed);
        let rad = alg.radical().unwrap();
        let a = alg.random_invertible(&mut rng);
        let c = banalg_lab::sampling::complex_normal(&mut rng);
        for u in &rad {
            prop_assert!(alg.is_invertible(&(&a + u * c)));
        }
    }

    #[test]
    fn sup_re_difference_quotients_are_monotone(seed: u64, n in 1usize..=3, norm in norm_kind()) {
        let alg = AlgebraSpec::full_matrix(n, norm);
        let a = alg.random_element(&mut rng(seed));
        let est = mu_sup_re_estimate(&alg, &a);
        for w in est.quotients.windows(2) {
            // t decreases along the grid
            prop_assert!(w[1].1 <= w[0].1 + MONOTONE_SLACK, "{:?}", est.quotients);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn numerical_radius_dominates_norm_over_e(seed: u64, n in 1usize..=3) {
        let alg = AlgebraSpec::full_matrix(n, NormKind::Spectral);
        let a = alg.random_element(&mut rng(seed));
        prop_assert!(std::f64::consts::E * numerical_radius(&alg, &a) >= alg.norm(&a) - 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn canonical_isometries_preserve_midpoints(seed: u64, n in 2usize..=4, norm in norm_kind(), tag in tag()) {
        let mut rng = rng(seed);
        let (oracle, _) = random_gln_oracle(tag, n, norm, &mut rng);
        for _ in 0..5 {
            let f = oracle.sample_domain(&mut rng);
            let g = oracle.sample_domain(&mut rng);
            match check_midpoint(&oracle, &f, &g) {
                Ok(r) => prop_assert!(r < 1e-8, "{r}"),
                Err(EngineError::SegmentLeavesDomain { .. }) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }

    #[test]
    fn estimated_shift_is_quasinilpotent(seed: u64, k in 2usize..7, scale in -3.0f64..3.0) {
        let alg = Arc::new(builtin(k, NormKind::Spectral));
        let rad = alg.radical().unwrap();
        let mut rng = rng(seed);
        let mut shift = alg.zero();
        for u in &rad {
            shift += u * (banalg_lab::sampling::complex_normal(&mut rng) * scale);
        }
        let oracle = IsometryOracle::identity(alg.clone()).translated(shift);
        let u0 = estimate_u0(&oracle).unwrap();
        prop_assert!(alg.radical_member_sampling(&u0, 200, seed).unwrap());
        prop_assert!(alg.in_radical(&u0, RADICAL_TOL).unwrap());
    }
}

#[test]
fn radical_criteria_agree_on_builtins() {
    for k in 0..7 {
        let alg = builtin(k, NormKind::Spectral);
        for (j, b) in alg.basis().iter().enumerate() {
            assert_eq!(
                alg.in_radical(b, RADICAL_TOL).unwrap(),
                alg.radical_member_sampling(b, 200, j as u64).unwrap(),
                "{} basis element {j}",
                alg.name()
            );
        }
    }
}

#[test]
fn e12_stays_out_of_the_radical_of_m2() {
    let m2 = AlgebraSpec::full_matrix(2, NormKind::Spectral);
    let e12 = matrix_unit(2, 0, 1);
    assert!(!m2.radical_member_sampling(&e12, 200, 0).unwrap());
    assert!(
        m2.spectral_radius(&(&e12 * Complex64::new(3.0, 1.0)))
            .unwrap()
            < 1e-12
    );
}
