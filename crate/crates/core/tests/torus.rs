use caustics::scaling::geometric_grid;
use caustics::torus::{
    ball_count, ball_points, ball_ratio_sweep, blocks_csv, check_normalized, count_in_ball,
    default_ball_omega, default_sphere_omega, dyadic_lower_bound_search, eval_sum, extremizer,
    naive_ball_count, naive_sphere_cap_count, ratio_exponent, selected_ratios, sphere_cap_count,
    sphere_points, CapMode, CapQuery, ExtremizerSum,
};
use caustics::Error;
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn disk_of_radius_two_and_a_half() {
    // |α|² ∈ {0, 1, 2, 4, 5}: 1 + 4 + 4 + 4 + 8
    assert_eq!(count_in_ball(&[0.0, 0.0], 2.5), 21);
    // the ball is open
    assert_eq!(count_in_ball(&[0.0, 0.0], 1.0), 1);
    assert_eq!(count_in_ball(&[0.5, 0.5], 0.0), 0);
}

#[test]
fn circle_of_radius_five() {
    let omega = vec![0.6, 0.8];
    let q = |c: f64| CapQuery::sphere(omega.clone(), 25, 0.0, c);
    // (3, 4) alone, then (4, 3) joins exactly on the boundary
    assert_eq!(sphere_cap_count(&q(1.0)).unwrap(), 1);
    assert_eq!(sphere_cap_count(&q(2f64.sqrt())).unwrap(), 2);
    // the whole circle: r₂(25) = 12
    assert_eq!(sphere_cap_count(&q(20.0)).unwrap(), 12);
    let pts = sphere_points(&q(20.0)).unwrap();
    assert!(pts.iter().all(|a| a[0] * a[0] + a[1] * a[1] == 25));
}

#[test]
fn ball_count_grows_like_the_volume() {
    let omega = default_ball_omega(2);
    let rows: Vec<(f64, f64)> = geometric_grid(1e-2, 1e-5, 7)
        .into_iter()
        .map(|h| {
            let q = CapQuery::ball(omega.clone(), h, 0.5, 1.0);
            (h, ball_count(&q).unwrap() as f64)
        })
        .collect();
    let f = ratio_exponent(&rows).unwrap();
    assert!((f.slope - 1.0).abs() < 0.1, "{}", f.slope);
}

#[test]
fn ball_extremizer_ratio() {
    let rows = ball_ratio_sweep(&default_ball_omega(2), 0.5, &geometric_grid(1e-2, 1e-5, 7)).unwrap();
    for r in &rows {
        assert!((r.ratio - (r.count as f64).sqrt()).abs() < 1e-9 * r.ratio);
    }
    let pts: Vec<_> = rows.iter().map(|r| (r.h, r.ratio)).collect();
    assert!((ratio_exponent(&pts).unwrap().slope - 0.5).abs() < 0.05);
}

#[test]
fn single_point_sum() {
    let s = ExtremizerSum::raw(vec![vec![3, -2]]).normalized();
    assert_eq!(s.ratio_at_origin(), 1.0);
    for x in [[0.3, 1.1], [-2.0, 5.0]] {
        assert!((eval_sum(&s, &x).norm() - 1.0).abs() < 1e-15);
    }
}

#[test]
fn raw_sum_at_origin_is_the_count() {
    let q = CapQuery::ball(default_ball_omega(3), 0.05, 0.5, 1.0);
    let s = ExtremizerSum::raw(ball_points(&q).unwrap());
    assert_eq!(eval_sum(&s, &[0.0; 3]), Complex64::new(s.len() as f64, 0.0));
    assert!(matches!(check_normalized(&s), Err(Error::NotNormalized(_))));
}

#[test]
fn parseval_on_a_grid() {
    for n in [1, 2] {
        let q = CapQuery::ball(default_ball_omega(n), 0.02, 0.5, 1.0);
        let s = extremizer(&q, CapMode::Ball).unwrap();
        check_normalized(&s).unwrap();
        // the ball has diameter below 64, so no two frequencies alias
        assert!((s.grid_mean_square(64) - 1.0).abs() < 1e-12);
        let want = (s.len() as f64).sqrt();
        assert!((s.grid_sup(64) - want).abs() < 1e-9 * want);
    }
}

#[test]
fn sphere_extremizer() {
    let q = CapQuery::sphere(default_sphere_omega(3), 81, 1.0, 1.0);
    let s = extremizer(&q, CapMode::Sphere).unwrap();
    check_normalized(&s).unwrap();
    assert_eq!(s.len() as u64, sphere_cap_count(&q).unwrap());
}

#[test]
fn empty_cap() {
    let q = CapQuery::ball(vec![0.5], 1.0, 0.0, 0.1);
    assert!(matches!(extremizer(&q, CapMode::Ball), Err(Error::EmptyCap)));
    let q = CapQuery::sphere(vec![0.6, 0.8], 3, 0.0, 100.0);
    assert!(matches!(extremizer(&q, CapMode::Sphere), Err(Error::EmptyCap)));
}

#[test]
fn block_sum_tracks_the_volume() {
    let blocks = dyadic_lower_bound_search(&default_sphere_omega(2), 1.0, 1024, 8192, 1.0).unwrap();
    assert_eq!(blocks.len(), 3);
    for b in &blocks {
        assert!(
            (b.block_sum as f64 / b.volume - 1.0).abs() < 0.5,
            "J = {}: {} vs {}",
            b.j_lo,
            b.block_sum,
            b.volume
        );
        assert_eq!(b.counts.iter().sum::<u64>(), b.block_sum);
        let best = b.best_j.unwrap();
        assert_eq!(b.counts[(best - b.j_lo - 1) as usize], b.best_count);
    }
    let csv = blocks_csv(&blocks);
    assert!(csv.starts_with("j,h,count,ratio,block_id\n"));
    assert_eq!(csv.lines().count(), 4);
    assert_eq!(selected_ratios(&blocks).len(), 3);
}

#[test]
fn line_caps() {
    let omega = vec![1.0];
    // only √j itself lies within C = 1
    let q = CapQuery::sphere(omega.clone(), 100, 1.0, 1.0);
    assert_eq!(sphere_cap_count(&q).unwrap(), 1);
    // ρ = 2√j reaches −√j
    let q = CapQuery::sphere(omega.clone(), 100, 1.0, 2.0);
    assert_eq!(sphere_cap_count(&q).unwrap(), 2);
    // non-squares are empty
    let q = CapQuery::sphere(omega, 99, 1.0, 2.0);
    assert_eq!(sphere_cap_count(&q).unwrap(), 0);
}

#[test]
fn enumeration_limits() {
    let lim = |r: Result<u64, Error>| matches!(r, Err(Error::EnumerationLimit { .. }));
    assert!(lim(ball_count(&CapQuery::ball(vec![1.0], 1e-5, 1.0, 1.0))));
    assert!(lim(ball_count(&CapQuery::ball(vec![0.5; 5], 0.1, 0.0, 1.0))));
    assert!(lim(ball_count(&CapQuery::ball(default_ball_omega(4), 1e-4, 1.0, 1.0))));
    assert!(lim(sphere_cap_count(&CapQuery::sphere(vec![0.5; 4], 200_000, 0.5, 1.0))));
    assert!(matches!(
        ball_points(&CapQuery::ball(default_ball_omega(4), 1e-3, 0.75, 1.0)),
        Err(Error::EnumerationLimit { .. })
    ));
}

#[test]
fn search_preconditions() {
    let w = default_sphere_omega(2);
    assert!(dyadic_lower_bound_search(&[0.6, 0.7], 0.5, 16, 64, 1.0).is_err());
    assert!(dyadic_lower_bound_search(&w, 0.5, 64, 100, 1.0).is_err());
    assert!(dyadic_lower_bound_search(&w, 1.5, 16, 64, 1.0).is_err());
    assert!(matches!(
        dyadic_lower_bound_search(&w, 0.5, 16, 1 << 24, 1.0),
        Err(Error::EnumerationLimit { .. })
    ));
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ball_count_matches_naive(
        center in prop::collection::vec(-20.0f64..20.0, 1..=3),
        radius in 0.0f64..8.0,
    ) {
        prop_assert_eq!(count_in_ball(&center, radius), naive_ball_count(&center, radius));
    }

    #[test]
    fn sphere_count_matches_naive(
        raw in prop::collection::vec(0.1f64..1.0, 2..=3),
        j in 1u64..400,
        rho in 0.0f64..30.0,
    ) {
        let omega = unit(raw);
        let q = CapQuery::sphere(omega.clone(), j, 0.0, rho);
        prop_assert_eq!(sphere_cap_count(&q).unwrap(), naive_sphere_cap_count(&omega, j, rho));
    }

    #[test]
    fn uniform_ratio_is_root_count(log_h in -2.5f64..-1.0, mu in 0.3f64..0.8) {
        let q = CapQuery::ball(default_ball_omega(2), 10f64.powf(log_h), mu, 1.0);
        if let Ok(s) = extremizer(&q, CapMode::Ball) {
            let want = (s.len() as f64).sqrt();
            prop_assert!((s.ratio_at_origin() - want).abs() < 1e-9 * want);
        }
    }
}
