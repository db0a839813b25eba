//! Exponential sums on the flat torus `ℝⁿ/2πℤⁿ`: lattice counts in balls and
//! sphere caps, uniform extremizers, and the dyadic search for rich spheres.

mod count;
mod dyadic;
mod extremizer;

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scaling::{linear_fit, LineFit};

pub use count::{
    ball_count, count_in_ball, max_sphere_j, naive_ball_count, naive_sphere_cap_count,
    sphere_cap_count, CapQuery, MAX_BALL_RADIUS, MAX_BALL_WORK, MAX_CAP_POINTS, MAX_DIM,
};
pub use dyadic::{block_counts, dyadic_lower_bound_search, omega_volume, BlockResult};
pub use extremizer::{
    ball_points, eval_sum, extremizer, sphere_points, CapMode, ExtremizerSum, Normalization,
};

/// Unit vector along `(√2 − 1, √3 − 1, √5 − 1, √7 − 1)`, truncated to `n`.
pub fn default_ball_omega(n: usize) -> Vec<f64> {
    let raw: Vec<f64> = [2.0f64, 3.0, 5.0, 7.0][..n]
        .iter()
        .map(|p| p.sqrt() - 1.0)
        .collect();
    let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
    raw.into_iter().map(|v| v / norm).collect()
}

/// Rational unit directions with lattice points on many spheres.
pub fn default_sphere_omega(n: usize) -> Vec<f64> {
    match n {
        1 => vec![1.0],
        2 => vec![0.6, 0.8],
        3 => vec![1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0],
        _ => vec![0.5; 4],
    }
}

/// `(h, count, ratio)` for ball extremizers over an h-grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallRow {
    pub h: f64,
    pub count: u64,
    pub ratio: f64,
}

/// Ball-mode extremizer ratios `|f(0)|/‖f‖₂` with radius `h^{−δ′}`.
pub fn ball_ratio_sweep(omega: &[f64], delta_prime: f64, h_grid: &[f64]) -> Result<Vec<BallRow>> {
    use rayon::prelude::*;
    h_grid
        .par_iter()
        .map(|&h| {
            let q = CapQuery::ball(omega.to_vec(), h, delta_prime, 1.0);
            let s = extremizer(&q, CapMode::Ball)?;
            Ok(BallRow {
                h,
                count: s.len() as u64,
                ratio: s.ratio_at_origin(),
            })
        })
        .collect()
}

/// Slope of `log y` against `log(1/h)`.
pub fn ratio_exponent(rows: &[(f64, f64)]) -> Result<LineFit> {
    let (x, y): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|(_, v)| *v > 0.0)
        .map(|&(h, v)| ((1.0 / h).ln(), v.ln()))
        .unzip();
    linear_fit(&x, &y)
}

/// Selected `(h = j^{−1/2}, √M(j))` of a dyadic search, empty blocks skipped.
pub fn selected_ratios(blocks: &[BlockResult]) -> Vec<(f64, f64)> {
    blocks
        .iter()
        .filter_map(|b| {
            b.best_j
                .map(|j| ((j as f64).powf(-0.5), (b.best_count as f64).sqrt()))
        })
        .collect()
}

/// CSV with columns `j,h,count,ratio,block_id`, one line per selected `j`.
pub fn blocks_csv(blocks: &[BlockResult]) -> String {
    let mut out = String::from("j,h,count,ratio,block_id\n");
    for b in blocks {
        if let Some(j) = b.best_j {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                j,
                (j as f64).powf(-0.5),
                b.best_count,
                (b.best_count as f64).sqrt(),
                b.block_id
            );
        }
    }
    out
}

/// Torus grid for sphere searches: blocks from `J = 16` to the largest
/// admissible `2J`.
pub fn default_j_range(n: usize) -> (u64, u64) {
    let end = if n >= 4 { 1 << 16 } else { 1 << 19 };
    (16, end.min(max_sphere_j(n)))
}

/// Checks that an `ExtremizerSum` is l2-normalized.
pub fn check_normalized(s: &ExtremizerSum) -> Result<()> {
    let l2 = s.l2_norm();
    if (l2 * l2 - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized(l2 * l2));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_counts_agree_with_per_sphere_counts() {
        for (omega, delta) in [(default_sphere_omega(2), 0.5), (default_sphere_omega(3), 0.75)] {
            let blocks = dyadic_lower_bound_search(&omega, delta, 64, 256, 1.0).unwrap();
            for b in &blocks {
                for (i, &m) in b.counts.iter().enumerate() {
                    let j = b.j_lo + 1 + i as u64;
                    let q = CapQuery::sphere(omega.clone(), j, delta, 1.0);
                    assert_eq!(m, sphere_cap_count(&q).unwrap(), "j = {j}");
                }
            }
        }
    }

    #[test]
    fn uniform_sum_peaks_at_origin() {
        let q = CapQuery::ball(default_ball_omega(2), 0.01, 0.5, 1.0);
        let s = extremizer(&q, CapMode::Ball).unwrap();
        check_normalized(&s).unwrap();
        let want = (s.len() as f64).sqrt();
        assert!((s.ratio_at_origin() - want).abs() < 1e-9 * want);
        assert!((s.grid_sup(64) - want).abs() < 1e-9 * want);
    }

    #[test]
    fn volume_of_full_annulus() {
        // C large: the cap is the whole sphere, volume = π(2J − J)
        let v = omega_volume(2, 1000, 1.0, 10.0);
        assert!((v - std::f64::consts::PI * 1000.0).abs() < 1e-6);
        let v = omega_volume(3, 1000, 1.0, 10.0);
        let want = 4.0 / 3.0 * std::f64::consts::PI * (2000f64.powf(1.5) - 1000f64.powf(1.5));
        assert!((v / want - 1.0).abs() < 1e-9);
    }
}
