use rayon::prelude::*;
use serde::Serialize;

use super::count::{in_cap, max_sphere_j, MAX_DIM};
use crate::error::{Error, Result};
use crate::oscint::integrate_real;

/// One dyadic block `(J, 2J]` of the lower-bound search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockResult {
    pub block_id: usize,
    pub j_lo: u64,
    pub j_hi: u64,
    /// Maximizing `j` of `M(j)`; `None` if no `j` in the block has a point.
    pub best_j: Option<u64>,
    pub best_count: u64,
    /// `Σ_{J<j≤2J} M(j)`, the lattice points of the solid cap region.
    pub block_sum: u64,
    pub representable: u64,
    pub block_average: f64,
    /// Volume of the solid region `{J < |ξ|² ≤ 2J, |ξ − |ξ|ω| ≤ C|ξ|^δ}`.
    pub volume: f64,
    /// Per-j counts, index `j − J − 1`.
    #[serde(skip)]
    pub counts: Vec<u64>,
}

impl BlockResult {
    pub fn is_empty(&self) -> bool {
        self.best_j.is_none()
    }
}

fn sphere_area(n: usize) -> f64 {
    // |S^{n−2}|
    match n {
        2 => 2.0,
        3 => 2.0 * std::f64::consts::PI,
        4 => 4.0 * std::f64::consts::PI,
        _ => 1.0,
    }
}

/// Area of the cap of angular radius `φ` on the sphere of radius `r` in ℝⁿ.
fn cap_area(n: usize, r: f64, phi: f64) -> f64 {
    let angular = match n {
        2 => phi,
        3 => 1.0 - phi.cos(),
        4 => 0.5 * (phi - phi.sin() * phi.cos()),
        _ => unreachable!(),
    };
    sphere_area(n) * r.powi(n as i32 - 1) * angular
}

/// Volume of `Ω_J`, integrating cap areas over the radius.
pub fn omega_volume(n: usize, j_lo: u64, delta: f64, cap_constant: f64) -> f64 {
    let (a, b) = ((j_lo as f64).sqrt(), (2.0 * j_lo as f64).sqrt());
    if n == 1 {
        // the far point −Rω joins once ρ ≥ 2R
        return integrate_real(
            |r| 1.0 + f64::from(cap_constant * r.powf(delta) >= 2.0 * r),
            a,
            b,
            &[],
            1e-10,
        )
        .value;
    }
    integrate_real(
        |r| {
            let rho = cap_constant * r.powf(delta);
            let phi = 2.0 * (rho / (2.0 * r)).min(1.0).asin();
            cap_area(n, r, phi)
        },
        a,
        b,
        &[],
        1e-10,
    )
    .value
}

/// Counts `M(j)` for every `j` in `(J, 2J]` by one pass over the lattice
/// points of the solid region.
pub fn block_counts(omega: &[f64], j_lo: u64, delta: f64, cap_constant: f64) -> Vec<u64> {
    let n = omega.len();
    let j_hi = 2 * j_lo;
    let (r_lo, r_hi) = ((j_lo as f64).sqrt(), (j_hi as f64).sqrt());
    let rho_max = cap_constant * r_hi.powf(delta).max(r_lo.powf(delta));
    let ranges: Vec<(i64, i64)> = omega
        .iter()
        .map(|&w| {
            let (c1, c2) = (r_lo * w, r_hi * w);
            let lo = (c1.min(c2) - rho_max).floor().max(-r_hi.ceil());
            let hi = (c1.max(c2) + rho_max).ceil().min(r_hi.ceil());
            (lo as i64, hi as i64)
        })
        .collect();
    let mut counts = vec![0u64; j_lo as usize];
    let mut alpha = vec![0i64; n];
    let mut visit = |a: &[i64], s: u64| {
        if s <= j_lo || s > j_hi {
            return;
        }
        let rj = (s as f64).sqrt();
        let rho = cap_constant * (s as f64).powf(delta / 2.0);
        if in_cap(a, omega, rj, rho * rho) {
            counts[(s - j_lo - 1) as usize] += 1;
        }
    };
    fn rec(
        i: usize,
        s: u64,
        j_hi: u64,
        ranges: &[(i64, i64)],
        alpha: &mut [i64],
        visit: &mut dyn FnMut(&[i64], u64),
    ) {
        if i == alpha.len() {
            visit(alpha, s);
            return;
        }
        for a in ranges[i].0..=ranges[i].1 {
            let s2 = s + (a * a) as u64;
            if s2 <= j_hi {
                alpha[i] = a;
                rec(i + 1, s2, j_hi, ranges, alpha, visit);
            }
        }
    }
    rec(0, 0, j_hi, &ranges, &mut alpha, &mut visit);
    counts
}

/// Dyadic blocks `(J, 2J]` for `J = j_start·2^b` while `2J ≤ j_end`; picks the
/// maximizing `j` of each block.
pub fn dyadic_lower_bound_search(
    omega: &[f64],
    delta: f64,
    j_start: u64,
    j_end: u64,
    cap_constant: f64,
) -> Result<Vec<BlockResult>> {
    let n = omega.len();
    if n == 0 || n > MAX_DIM {
        return Err(Error::EnumerationLimit {
            param: "n",
            value: n as f64,
            limit: MAX_DIM as f64,
        });
    }
    let norm: f64 = omega.iter().map(|w| w * w).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::param("omega", format!("|omega| = {norm}, expected 1")));
    }
    if j_start == 0 || 2 * j_start > j_end {
        return Err(Error::param("j_range", "need 1 ≤ J and 2J ≤ j_end"));
    }
    if j_end > max_sphere_j(n) {
        return Err(Error::EnumerationLimit {
            param: "j",
            value: j_end as f64,
            limit: max_sphere_j(n) as f64,
        });
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::param("delta", "must lie in [0, 1]"));
    }
    let mut starts = Vec::new();
    let mut j = j_start;
    while 2 * j <= j_end {
        starts.push(j);
        j *= 2;
    }
    Ok(starts
        .into_par_iter()
        .enumerate()
        .map(|(block_id, j_lo)| {
            let counts = block_counts(omega, j_lo, delta, cap_constant);
            let (mut best_j, mut best_count) = (None, 0);
            for (i, &c) in counts.iter().enumerate() {
                if c > best_count {
                    best_count = c;
                    best_j = Some(j_lo + 1 + i as u64);
                }
            }
            let block_sum: u64 = counts.iter().sum();
            BlockResult {
                block_id,
                j_lo,
                j_hi: 2 * j_lo,
                best_j,
                best_count,
                block_sum,
                representable: counts.iter().filter(|&&c| c > 0).count() as u64,
                block_average: block_sum as f64 / j_lo as f64,
                volume: omega_volume(n, j_lo, delta, cap_constant),
                counts,
            }
        })
        .collect())
}
