use caustics::amplitudes::AmplitudeProfile;
use caustics::catalog::{build_phase, caustic_order, PhaseFunction};
use caustics::scaling::{
    boundary_directions, default_h_grid, fit_exponent, fit_log_log, geometric_grid, judge,
    random_directions, scale_invariance, shell_lambdas, supnorm_scan, threshold_sweep, ScanPlan,
    Verdict, XStrategy, TOL_1D,
};
use caustics::Error;
use num_rational::Rational64;
use proptest::prelude::*;

fn phase(label: &str) -> PhaseFunction {
    build_phase(label.parse().unwrap())
}

fn plan(label: &str) -> ScanPlan {
    let p = phase(label);
    let k = p.k();
    ScanPlan::new(p, AmplitudeProfile::fixed(k))
}

fn gauge(y: &[f64], s: &[f64]) -> f64 {
    y.iter()
        .zip(s)
        .map(|(v, sj)| v.abs().powf(1.0 / (1.0 - sj)))
        .sum()
}

#[test]
fn exact_power_law_fits_perfectly() {
    let pts: Vec<(f64, f64)> = geometric_grid(1e-1, 1e-5, 9)
        .into_iter()
        .map(|h| (h, 3.0 * h.powf(-0.25)))
        .collect();
    let f = fit_log_log(&pts, Some(Rational64::new(1, 4)), 0.25, 0.03);
    assert!((f.slope - 0.25).abs() < 1e-12);
    assert!((f.r_squared - 1.0).abs() < 1e-12);
    assert_eq!(f.verdict, Verdict::Pass);
}

#[test]
fn outlier_makes_fit_inconclusive() {
    let mut pts: Vec<(f64, f64)> = geometric_grid(1e-1, 1e-5, 9)
        .into_iter()
        .map(|h| (h, h.powf(-0.25)))
        .collect();
    pts[4].1 *= 10.0;
    let f = fit_log_log(&pts, Some(Rational64::new(1, 4)), 0.25, 0.03);
    assert_eq!(f.verdict, Verdict::Inconclusive);
}

#[test]
fn too_few_rows_is_inconclusive() {
    let pts = vec![(0.1, 1.0), (0.01, 2.0), (0.001, 4.0)];
    let f = fit_log_log(&pts, None, 0.0, 0.1);
    assert_eq!(f.verdict, Verdict::Inconclusive);
    assert_eq!(f.rows_used, 3);
}

#[test]
fn judge_thresholds() {
    assert_eq!(judge(0.17, 0.99, 1.0 / 6.0, 0.03), Verdict::Pass);
    assert_eq!(judge(0.25, 0.99, 1.0 / 6.0, 0.03), Verdict::Fail);
    assert_eq!(judge(1.0 / 6.0, 0.5, 1.0 / 6.0, 0.03), Verdict::Inconclusive);
    assert_eq!(judge(1.0 / 6.0, f64::NAN, 1.0 / 6.0, 0.03), Verdict::Inconclusive);
}

#[test]
fn fold_origin_scan() {
    let mut p = plan("A2");
    p.x_strategy = XStrategy::OriginOnly;
    let t = supnorm_scan(&p).unwrap();
    assert_eq!(t.rows.len(), 10);
    let f = fit_exponent(&t, caustic_order("A2".parse().unwrap()), TOL_1D);
    assert!(f.passed(), "{f:?}");
    assert!(f.r_squared > 0.999);
}

#[test]
fn projectable_scan_is_flat() {
    let t = supnorm_scan(&plan("A1")).unwrap();
    let f = fit_exponent(&t, Rational64::new(0, 1), TOL_1D);
    assert!(f.slope.abs() < 0.01, "{}", f.slope);
    // only the origin exists when there is no unfolding
    assert_eq!(t.points.len(), t.rows.len());
}

#[test]
fn zero_amplitude_scan() {
    let mut p = plan("A2");
    p.amplitude = AmplitudeProfile::zero(1);
    let t = supnorm_scan(&p).unwrap();
    assert!(t.rows.iter().all(|r| r.sup_abs == 0.0));
    assert_eq!(fit_exponent(&t, Rational64::new(1, 6), TOL_1D).verdict, Verdict::Inconclusive);
}

#[test]
fn fold_shell_scan() {
    let t = supnorm_scan(&plan("A2")).unwrap();
    for r in &t.rows {
        assert!(r.sup_abs >= r.origin_abs, "h = {}", r.h);
        assert!(r.converged);
    }
    let f = fit_exponent(&t, Rational64::new(1, 6), TOL_1D);
    assert!(f.passed(), "{f:?}");

    // dropping the coarsest row barely moves the slope
    let mut pts = t.fit_points();
    pts.remove(0);
    let g = fit_log_log(&pts, None, 1.0 / 6.0, TOL_1D);
    assert!((g.slope - f.slope).abs() < TOL_1D / 2.0);
}

#[test]
fn csv_has_one_line_per_point() {
    let mut p = plan("A2");
    p.h_grid = geometric_grid(1e-2, 1e-3, 5);
    p.shell_count = 2;
    p.points_per_shell = 1;
    let t = supnorm_scan(&p).unwrap();
    let csv = t.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("h,lambda,y_index,abs_I,est_error,converged"));
    assert_eq!(lines.count(), t.points.len());
}

#[test]
fn scans_do_not_depend_on_the_pool() {
    let mut p = plan("A3");
    p.h_grid = geometric_grid(2f64.powi(-4), 2f64.powi(-7), 5);
    p.shell_count = 3;
    p.points_per_shell = 1;
    p.random_points = 2;
    p.seed = 7;
    let run = |n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
            .install(|| supnorm_scan(&p).unwrap())
    };
    assert_eq!(run(1).to_csv(), run(3).to_csv());
}

#[test]
fn scale_invariance_on_the_shell() {
    let p = {
        let mut p = plan("A2");
        p.rel_tol = 1e-9;
        p
    };
    for lambda in [1e-2, 0.1, 0.5] {
        let c = scale_invariance(&p, 1e-3, lambda, &[-1.0]).unwrap();
        assert!(c.rel_diff <= 4.0 * p.rel_tol, "{c:?}");
        // no stationary point on this side: both sides sit at the rounding floor
        let c = scale_invariance(&p, 1e-3, lambda, &[1.0]).unwrap();
        assert!(c.rel_diff <= 4.0 * p.rel_tol || c.direct.max(c.predicted) < 1e-10, "{c:?}");
    }
}

#[test]
fn beyond_threshold_is_exploratory() {
    let mut p = plan("A2");
    p.x_strategy = XStrategy::OriginOnly;
    let out = threshold_sweep("A2".parse().unwrap(), &[0.2, 0.8], &p, TOL_1D).unwrap();
    assert!(!out[0].exploratory);
    assert!(out[0].fold_exponent.is_none());
    assert!(out[1].exploratory);
    assert_eq!(out[1].fit.verdict, Verdict::Exploratory);
    assert!((out[1].fold_exponent.unwrap() - 0.45).abs() < 1e-12);
}

#[test]
fn shell_lambdas_span_h_to_one() {
    let l = shell_lambdas(1e-3, 4);
    assert!((l[0] - 1e-3).abs() < 1e-15);
    assert_eq!(l[3], 1.0);
    assert!(l.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(shell_lambdas(0.01, 1), vec![0.01]);
}

#[test]
fn boundary_points_lie_on_the_unit_shell() {
    let s = phase("D4-").homogeneity().s_f64();
    let dirs = boundary_directions(3, 3, &s);
    // 10 compositions of 3 into 3 parts, with sign patterns on nonzero parts
    assert_eq!(dirs.len(), 3 * 2 + 6 * 4 + 8);
    for y in &dirs {
        assert!((gauge(y, &s) - 1.0).abs() < 1e-12, "{y:?}");
    }
    let a = random_directions(3, 5, 11, &s);
    assert_eq!(a, random_directions(3, 5, 11, &s));
    assert_ne!(a, random_directions(3, 5, 12, &s));
}

#[test]
fn geometric_grid_endpoints() {
    let g = geometric_grid(1e-1, 1e-4, 4);
    assert!((g[0] - 1e-1).abs() < 1e-15);
    assert!((g[3] - 1e-4).abs() < 1e-15);
    assert!((g[1] / g[0] - 0.1).abs() < 1e-12);
    assert_eq!(default_h_grid(1).len(), 10);
    assert!((default_h_grid(2)[9] - 2f64.powi(-10)).abs() < 1e-15);
}

#[test]
fn plan_validation() {
    let mut p = plan("A2");
    p.h_grid = vec![0.1, 0.05, 0.02, 0.01];
    assert!(matches!(p.validate(), Err(Error::InvalidParameter { .. })));
    p.h_grid = vec![0.1, 0.05, 0.05, 0.01, 0.005];
    assert!(p.validate().is_err());
    p.h_grid = vec![1.5, 0.5, 0.1, 0.01, 0.005];
    assert!(p.validate().is_err());
    let mut q = plan("A2");
    q.amplitude = AmplitudeProfile::fixed(2);
    assert!(q.validate().is_err());
    let mut r = plan("A2");
    r.rel_tol = 0.1;
    assert!(supnorm_scan(&r).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_directions_lie_on_the_shell(seed in any::<u64>(), idx in 0usize..3) {
        let label = ["A3", "D5", "E6"][idx];
        let s = phase(label).homogeneity().s_f64();
        for y in random_directions(s.len(), 4, seed, &s) {
            prop_assert!((gauge(&y, &s) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fitted_slope_recovers_a_power(p in -1.0f64..1.0, c in 0.1f64..10.0) {
        let pts: Vec<(f64, f64)> = geometric_grid(1e-1, 1e-6, 6)
            .into_iter()
            .map(|h| (h, c * h.powf(-p)))
            .collect();
        let f = fit_log_log(&pts, None, p, 1e-9);
        prop_assert!((f.slope - p).abs() < 1e-9);
    }
}
