mod common;

use common::c;
use num_complex::Complex64 as C64;
use semigroup_calculus::calculus::{func_calc, spec_radius};
use semigroup_calculus::measures::standard::two_point;
use semigroup_calculus::measures::CompactMeasure;
use semigroup_calculus::semigroups::{DiagonalSemigroup, MultiplicationC0, NilpotentShift, Semigroup};
use semigroup_calculus::spectral::*;

#[test]
fn character_set_of_integer_model() {
    let b = DiagonalSemigroup::integers(200);
    let cs = character_set(&b).unwrap();
    assert_eq!(cs.lambdas.len(), 200);
    assert!(cs.reconstruction_error < 1e-12);
    for m in [0u32, 1, 50, 200] {
        let s = cs.slice(m);
        assert_eq!(s, (0..m as usize).collect::<Vec<_>>());
        assert_eq!(cs.radius(m), m as f64);
    }
    for m in 0..200u32 {
        let (a, b) = (cs.slice(m), cs.slice(m + 1));
        assert!(a.iter().all(|k| b.contains(k)));
    }
    assert!(matches!(character_set(&NilpotentShift::new(4)), Err(SpectralError::NotDiagonal(_))));
}

#[test]
fn complex_characters_reconstruct_from_logarithm() {
    let l = vec![c(1.0, 7.0), c(3.5, -20.0), c(0.25, 0.0)];
    let cs = character_set(&DiagonalSemigroup::new(l)).unwrap();
    assert!(cs.reconstruction_error < 1e-12);
    assert_eq!(cs.slice(1), vec![0, 2]);
}

#[test]
fn criterion_on_integer_model() {
    let cs = CharacterSet::from_lambdas((1..=200).map(|k| c(k as f64, 0.0)).collect());
    let rows = criterion_check(&cs, &two_point(), &[1e-3]).unwrap();
    let row = &rows[0];
    // exhaustive oracle over the 200 scalars
    let oracle = (1..=200).map(|k| {
        let x = 1e-3 * k as f64;
        ((-x).exp() - (-2.0 * x).exp()).abs()
    });
    let oracle = oracle.fold(0.0, f64::max);
    assert!((row.rho - oracle).abs() < 1e-15);
    assert!(row.rho < 0.25 && row.satisfied);
    assert_eq!(row.norm, row.rho);
    assert!(row.window_m.is_some());

    // calculus agrees on the diagonal model
    let b = DiagonalSemigroup::integers(200);
    let sr = spec_radius(&func_calc(&b, &two_point(), 1e-3).operator).unwrap();
    assert!((sr.value - row.rho).abs() < 1e-8);
}

#[test]
fn degenerate_u_fails_the_strict_criterion() {
    let cs = CharacterSet::from_lambdas((1..=10).map(|k| c(k as f64, 0.0)).collect());
    let u = 2f64.ln() / 4.0;
    let row = &criterion_check(&cs, &two_point(), &[u]).unwrap()[0];
    assert!(row.margin.abs() < 1e-12);
    assert!(!row.satisfied);
    assert!(matches!(
        criterion_check(&cs, &CompactMeasure::dirac(1.0).unwrap(), &[u]),
        Err(SpectralError::MassNotZero(_))
    ));
}

#[test]
fn idempotent_chain_is_exact() {
    let cs = CharacterSet::from_lambdas((1..=200).map(|k| c(k as f64, 0.0)).collect());
    let chain = build_idempotents(&cs, &[150, 50, 200, 100]);
    assert_eq!(chain.m_list, vec![50, 100, 150, 200]);
    assert!(chain.check().all());
    let p50 = chain.operator(0);
    let p100 = chain.operator(1);
    assert_eq!(p50.compose(&p100), p50);
    assert_eq!(p50.compose(&p50), p50);

    let partial = build_idempotents(&cs, &[0, 50]);
    let chk = partial.check();
    assert!(chk.idempotent && chk.nested && !chk.exhaustive);
    assert_eq!(partial.operator(0).max_abs(), 0.0);
}

#[test]
fn bounded_generators_match_closed_form() {
    let b = DiagonalSemigroup::integers(200);
    let cs = character_set(&b).unwrap();
    let chain = build_idempotents(&cs, &[50, 100, 200]);
    let rows = bounded_generator_check(&b, &chain, &[1e-3, 1e-4, 1e-5]);
    for row in &rows {
        assert!(row.closed_form_error < 1e-12);
        // secant through (t0, g0), (t1, g1) leaves the quadratic term m^2 t0 t1 / 2
        let m = row.m as f64;
        assert!(row.limit_estimate.abs() <= 0.5 * m * m * 1e-5 * 1e-4 * (1.0 + 1e-2));
        assert_eq!(row.generator_bound, row.m as f64);
        for &(t, g) in &row.gaps {
            assert!((g - (1.0 - (-(row.m as f64) * t).exp())).abs() < 1e-12);
        }
    }
    let g100 = rows[1].gaps.iter().find(|g| g.0 == 1e-3).unwrap().1;
    assert!((g100 - (1.0 - (-0.1f64).exp())).abs() < 1e-10);
}

#[test]
fn certificate_encloses_the_slice() {
    let cs = CharacterSet::from_lambdas((1..=200).map(|k| c(k as f64, 0.0)).collect());
    let cert = separation_certificate(&cs, &two_point(), 1e-3, 50).unwrap();
    assert!(cert.passed);
    assert!(cert.radius > cert.r_m);
    assert_eq!(cert.r_m, 50.0);
    assert!((cert.alpha_k - 2f64.ln() / 1e-3).abs() < 1e-3);
    for l in cert.lambdas.iter().filter(|l| l.in_slice) {
        assert_eq!(l.winding, 1);
        assert!(l.modulus_margin > 0.0);
    }
}

#[test]
fn point_on_the_curve_breaks_the_certificate() {
    let base: Vec<C64> = (1..=50).map(|k| c(k as f64, 0.0)).collect();
    let cs = CharacterSet::from_lambdas(base.clone());
    let cert = separation_certificate(&cs, &two_point(), 1e-3, 50).unwrap();
    let on_curve = *cert.vertices.iter().find(|z| z.re > 60.0).unwrap();
    let mut lambdas = base;
    lambdas.push(on_curve);
    let cs = CharacterSet::from_lambdas(lambdas);
    match separation_certificate(&cs, &two_point(), 1e-3, 50) {
        Err(SpectralError::CertificateFailed { point, .. }) => assert_eq!(point, on_curve),
        other => panic!("expected failure, got {other:?}"),
    }
}

#[test]
fn sharpness_on_multiplication_semigroup() {
    let us = [0.1, 0.5, 1.0, 2.0];
    let reports: Vec<SharpnessReport> =
        [1_000, 10_000, 100_000].iter().map(|&n| sharpness_demo(n, &two_point(), &us).unwrap()).collect();
    for r in &reports[2].rows {
        assert!(r.gap <= 1e-4, "u={} gap={}", r.u, r.gap);
        assert!((r.norm - r.spectral_radius).abs() < 1e-15);
    }
    for (i, u) in us.iter().enumerate() {
        let gaps: Vec<f64> = reports.iter().map(|r| r.rows[i].gap).collect();
        assert!(gaps[1] <= gaps[0] + 1e-6 && gaps[2] <= gaps[1] + 1e-6, "u={u}: {gaps:?}");
    }
    let csv = sharpness_csv(&reports);
    assert_eq!(csv.lines().count(), 1 + 3 * us.len());
}

#[test]
fn multiplication_model_characters() {
    let m = MultiplicationC0::new(10);
    let cs = character_set(&m).unwrap();
    assert!(cs.reconstruction_error < 1e-12);
    // x = 1 is the trivial character
    assert_eq!(cs.lambdas[9], c(0.0, 0.0));
    assert!(m.flags().contractive);
}
