use caustics::amplitudes::{bump, AmplitudeProfile};
use caustics::catalog::{build_phase, catalog_types, Sign, SingularityType};
use caustics::oscint::{
    closed_form_oracle, evaluate, evaluate_rescaled, integrate_real, m_alpha, weighted_cauchy,
    IntegralSpec, OracleName,
};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_4, PI};

fn spec(label: &str, x: Vec<f64>, h: f64) -> IntegralSpec {
    let phase = build_phase(label.parse().unwrap());
    let amp = AmplitudeProfile::fixed(phase.k());
    IntegralSpec::new(phase, amp, x, h)
}

/// Plain trapezoid over the bump's support; spectrally accurate for smooth,
/// compactly supported integrands.
fn trapezoid(f: impl Fn(f64) -> Complex64, n: usize) -> Complex64 {
    let (a, b) = (-2.0, 2.0);
    let dx = (b - a) / n as f64;
    (1..n).map(|i| f(a + i as f64 * dx)).sum::<Complex64>() * dx
}

#[test]
fn airy_value_against_brute_force() {
    let h = 1e-2;
    let r = evaluate(&spec("A2", vec![0.0], h).with_rel_tol(1e-10)).unwrap();
    assert!(r.converged);
    let brute = trapezoid(
        |t| Complex64::from_polar(bump(t), t.powi(3) / h),
        10_000_000,
    ) * h.powf(-0.5);
    assert!((r.value - brute).norm() < 1e-8 * brute.norm(), "{} vs {brute}", r.value);
    assert!((r.abs_value - r.value.norm()).abs() < 1e-15);
}

#[test]
fn zero_amplitude_is_exactly_zero() {
    for label in ["A2", "D4-"] {
        let phase = build_phase(label.parse().unwrap());
        let k = phase.k();
        let k0 = phase.k0();
        let s = IntegralSpec::new(phase, AmplitudeProfile::zero(k), vec![0.3; k0], 0.01);
        let r = evaluate(&s).unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
        assert_eq!(r.est_error, 0.0);
    }
}

#[test]
fn fresnel() {
    let h = 1e-3;
    let s = spec("A1", vec![], h).with_prefactor(false).with_rel_tol(1e-10);
    let v = evaluate(&s).unwrap().value;
    let want = Complex64::from_polar((PI * h).sqrt(), FRAC_PI_4);
    assert!((v - want).norm() < 1e-6 * want.norm());
}

#[test]
fn unit_rescaling_is_the_identity() {
    let s = spec("A3", vec![0.2, -0.1], 1e-3);
    assert_eq!(evaluate(&s).unwrap(), evaluate_rescaled(&s, 1.0).unwrap());
}

#[test]
fn rescaling_at_lambda_h() {
    let h = 1e-3;
    let s = spec("A2", vec![0.05], h).with_rel_tol(1e-9);
    let a = evaluate(&s).unwrap().value;
    let b = evaluate_rescaled(&s, h).unwrap().value;
    assert!((a - b).norm() <= 2e-9 * a.norm() + 1e-12);
}

#[test]
fn lambda_outside_range_is_rejected() {
    let s = spec("A2", vec![0.0], 0.01);
    assert!(evaluate_rescaled(&s, 0.001).is_err());
    assert!(evaluate_rescaled(&s, 1.5).is_err());
}

#[test]
fn invalid_specs() {
    assert!(evaluate(&spec("A2", vec![0.0], 1.5)).is_err());
    assert!(evaluate(&spec("A2", vec![0.0], 0.1).with_rel_tol(1e-2)).is_err());
    assert!(evaluate(&spec("A2", vec![0.0, 1.0], 0.1)).is_err());
}

#[test]
fn budget_exhaustion_is_flagged() {
    let s = spec("A2", vec![0.0], 1e-5).with_budget(256);
    let r = evaluate(&s).unwrap();
    assert!(!r.converged);
    assert!(r.value.norm().is_finite());
}

#[test]
fn doubling_budget_never_raises_the_error_estimate() {
    let mut last = f64::INFINITY;
    for p in 8..16 {
        let s = spec("A2", vec![0.1], 1e-4).with_budget(1 << p);
        let e = evaluate(&s).unwrap().est_error;
        assert!(e <= last, "budget 2^{p}: {e} > {last}");
        last = e;
    }
}

#[test]
fn oracle_values() {
    assert!((m_alpha(0.0) - PI / 2f64.sqrt()).abs() < 1e-14);
    assert!((m_alpha(0.0) - 2.221441).abs() < 1e-6);
    assert!((weighted_cauchy(0.0, 0.1) - 15.70796).abs() < 1e-5);
    let v = closed_form_oracle(OracleName::MAlpha, &[1.0]).unwrap();
    assert!((v - 1.0109554884).abs() < 1e-9);
    assert!(closed_form_oracle(OracleName::WeightedCauchy, &[1.0]).is_err());
}

/// Independent check of the contour value: direct quadrature of the
/// defining integral.
#[test]
fn m_alpha_matches_its_integral() {
    for alpha in [-10.0, -4.0, -1.0, 0.0, 0.5, 2.5, 30.0] {
        let direct = integrate_real(
            |e: f64| 1.0 / ((e * e + alpha).powi(2) + 1.0),
            f64::NEG_INFINITY,
            f64::INFINITY,
            &[],
            1e-12,
        )
        .value;
        assert!((direct / m_alpha(alpha) - 1.0).abs() < 1e-9, "{alpha}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weighted_cauchy_bound(x in -100.0f64..100.0, eps in 1e-3f64..1.0) {
        prop_assert!(weighted_cauchy(x, eps) <= PI / eps * (1.0 + 1e-15));
    }

    #[test]
    fn sign_flip_conjugates(m in 1u32..6, log_h in -3.0f64..-1.0) {
        let h = 10f64.powf(log_h);
        let run = |sign| {
            let phase = build_phase(SingularityType::a(m, sign).unwrap());
            let s = IntegralSpec::new(phase, AmplitudeProfile::fixed(1), vec![0.0; m as usize], h)
                .with_rel_tol(1e-10);
            evaluate(&s).unwrap().value
        };
        let (p, q) = (run(Sign::Plus), run(Sign::Minus));
        prop_assert!((p - q.conj()).norm() <= 1e-8 * p.norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rescaling_consistency(
        idx in 0usize..19,
        t in 0.0f64..1.0,
        raw in prop::collection::vec(-1.0f64..1.0, 7),
    ) {
        let ty = catalog_types()[idx];
        let phase = build_phase(ty);
        let (h, rel_tol): (f64, f64) = if phase.k() == 1 { (1e-3, 1e-9) } else { (0.05, 1e-7) };
        let lambda = h.powf(t);
        let x = raw[..phase.k0()].to_vec();
        let s = IntegralSpec::new(phase.clone(), AmplitudeProfile::fixed(phase.k()), x, h)
            .with_rel_tol(rel_tol);
        let a = evaluate(&s).unwrap();
        let b = evaluate_rescaled(&s, lambda).unwrap();
        prop_assume!(a.converged && b.converged);
        prop_assert!(
            (a.value - b.value).norm() <= 4.0 * rel_tol * a.abs_value + 1e-12,
            "{ty} λ={lambda}: {} vs {}", a.value, b.value
        );
    }
}
