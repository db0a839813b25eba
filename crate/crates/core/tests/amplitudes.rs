use caustics::amplitudes::{
    bump, check_delta_regularity_torus, check_symbol_order, make_amplitude, AmplitudeKind,
    AmplitudeParams, AmplitudeProfile,
};
use caustics::scaling::geometric_grid;
use caustics::torus::{ball_points, CapQuery};
use caustics::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn kind(k: AmplitudeKind, delta: f64) -> AmplitudeProfile {
    make_amplitude(k, delta, AmplitudeParams::default()).unwrap()
}

fn builtins(delta: f64) -> Vec<AmplitudeProfile> {
    vec![
        AmplitudeProfile::fixed(1),
        AmplitudeProfile::narrow(delta, 1).unwrap(),
        kind(AmplitudeKind::ModulatedBump, delta),
        kind(AmplitudeKind::FoldSaturatorBelow, delta),
        kind(AmplitudeKind::FoldSaturatorAbove, delta),
        AmplitudeProfile::gaussian(delta).unwrap(),
    ]
}

#[test]
fn fixed_bump_values() {
    let a = AmplitudeProfile::fixed(1);
    for h in [0.1, 1e-3, 1e-6] {
        assert_eq!(a.eval(&[], &[0.0], h), Complex64::new(1.0, 0.0));
        assert_eq!(a.eval(&[], &[0.9], h), Complex64::new(1.0, 0.0));
        assert_eq!(a.eval(&[], &[2.0], h).norm(), 0.0);
        assert_eq!(a.eval(&[], &[-3.0], h).norm(), 0.0);
    }
}

#[test]
fn narrow_bump_radius() {
    let a = AmplitudeProfile::narrow(1.0 / 3.0, 1).unwrap();
    assert!((a.radius(1e-3) - 0.2).abs() < 1e-12);
}

#[test]
fn saturator_above_at_origin() {
    let a = kind(AmplitudeKind::FoldSaturatorAbove, 0.5);
    let v = a.eval(&[], &[0.0], 1e-4).norm();
    assert!((v / 10f64.powf(2.5) - 1.0).abs() < 1e-12);
}

#[test]
fn bad_parameters() {
    assert!(matches!(
        AmplitudeProfile::narrow(1.5, 1),
        Err(Error::InvalidParameter { .. })
    ));
    assert!(AmplitudeProfile::narrow(-0.1, 1).is_err());
    assert!(matches!(
        AmplitudeProfile::narrow(0.2, 3),
        Err(Error::UnsupportedDimension(3))
    ));
}

#[test]
fn symbol_order_of_narrow_bump_derivative() {
    let grid = geometric_grid(1e-1, 1e-4, 8);
    let r = check_symbol_order(&AmplitudeProfile::narrow(0.5, 1).unwrap(), &grid, 1).unwrap();
    let f = r.fit(&[1]).unwrap();
    assert!((f.fitted_order - 0.5).abs() < 0.05, "{}", f.fitted_order);
}

#[test]
fn fixed_bump_calibration() {
    let grid = geometric_grid(1e-1, 1e-4, 8);
    let r = check_symbol_order(&AmplitudeProfile::fixed(1), &grid, 3).unwrap();
    assert_eq!(r.fits.len(), 4);
    for f in &r.fits {
        assert!(f.fitted_order.abs() < 0.05, "{:?}", f.alpha);
    }
}

#[test]
fn gaussian_sharpness_family() {
    let grid = geometric_grid(1e-1, 1e-4, 8);
    let r = check_symbol_order(&AmplitudeProfile::gaussian(0.4).unwrap(), &grid, 0).unwrap();
    assert!((r.fit(&[0]).unwrap().fitted_order - 0.2).abs() < 0.05);
}

#[test]
fn symbol_checker_preconditions() {
    let a = AmplitudeProfile::fixed(1);
    assert!(check_symbol_order(&a, &geometric_grid(1e-1, 1e-3, 5), 1).is_err());
    assert!(check_symbol_order(&a, &geometric_grid(1e-1, 1e-3, 6), 5).is_err());
}

fn uniform(points: Vec<Vec<i64>>) -> Vec<(Vec<i64>, Complex64)> {
    let c = Complex64::new((points.len() as f64).powf(-0.5), 0.0);
    points.into_iter().map(|p| (p, c)).collect()
}

#[test]
fn uniform_cap_moments_are_at_most_one() {
    let omega = vec![0.6, 0.8];
    let delta = 0.5;
    let family: Vec<_> = geometric_grid(1e-2, 1e-4, 5)
        .into_iter()
        .map(|h| {
            let q = CapQuery::ball(omega.clone(), h, delta, 1.0);
            (h, uniform(ball_points(&q).unwrap()))
        })
        .collect();
    let r = check_delta_regularity_torus(&family, delta, &omega, 1.0).unwrap();
    assert!(r.all_bounded(), "{:?}", r.max_moment);
}

#[test]
fn far_single_frequency_is_unbounded() {
    // |α − ω/h| = h^{−2δ} with δ = 1/2, so the second moment is h^{−1}
    let delta = 0.5;
    let family: Vec<_> = [16i64, 64, 256, 1024]
        .iter()
        .map(|&m| {
            let h = 1.0 / m as f64;
            (h, vec![(vec![2 * m], Complex64::new(1.0, 0.0))])
        })
        .collect();
    let r = check_delta_regularity_torus(&family, delta, &[1.0], 10.0).unwrap();
    for row in &r.rows {
        assert!((row.moments[1] * row.h - 1.0).abs() < 1e-9);
    }
    assert!(!r.bounded[1]);
}

#[test]
fn extremizer_is_regular_at_its_own_scale() {
    let omega = vec![0.6, 0.8];
    let family: Vec<_> = geometric_grid(1e-2, 1e-5, 6)
        .into_iter()
        .map(|h| {
            let q = CapQuery::ball(omega.clone(), h, 0.5, 1.0);
            (h, uniform(ball_points(&q).unwrap()))
        })
        .collect();
    // checked at δ ≥ δ′ the weights stay below 1
    let at = check_delta_regularity_torus(&family, 0.55, &omega, 1.0).unwrap();
    assert!(at.all_bounded());
    // a looser δ lets the top moment grow like h^{−8·0.2}
    let loose = check_delta_regularity_torus(&family, 0.3, &omega, 10.0).unwrap();
    assert!(!loose.bounded[3]);
}

#[test]
fn regularity_rejects_unnormalized() {
    let family = vec![(0.1, vec![(vec![1], Complex64::new(2.0, 0.0))])];
    assert!(matches!(
        check_delta_regularity_torus(&family, 0.5, &[1.0], 1.0),
        Err(Error::NotNormalized(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn built_ins_vanish_outside_radius_four(
        delta in 0.0f64..1.0,
        log_h in -8.0f64..-0.5,
        t in 4.0f64..100.0,
        sign in prop::bool::ANY,
    ) {
        let h = 10f64.powf(log_h);
        let t = if sign { t } else { -t };
        for a in builtins(delta) {
            prop_assert_eq!(a.eval(&[], &[t], h).norm(), 0.0, "{:?}", a.kind());
        }
    }

    #[test]
    fn zero_width_narrow_bump_is_the_fixed_bump(t in -3.0f64..3.0, log_h in -6.0f64..-0.5) {
        let h = 10f64.powf(log_h);
        let a = AmplitudeProfile::narrow(0.0, 1).unwrap().eval(&[], &[t], h);
        prop_assert_eq!(a, AmplitudeProfile::fixed(1).eval(&[], &[t], h));
        prop_assert_eq!(a.re, bump(t));
    }
}
