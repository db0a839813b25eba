//! Exact lattice-point counts in balls and on sphere caps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 4;
pub const MAX_BALL_RADIUS: f64 = 1e4;
/// Most lattice points an extremizer will materialize.
pub const MAX_CAP_POINTS: f64 = 16_777_216.0;
/// Most inner-loop iterations a ball count may take, about `(2r)^{n−1}`.
pub const MAX_BALL_WORK: f64 = 4e9;

/// Largest `j = |α|²` accepted for sphere queries in dimension `n`.
pub fn max_sphere_j(n: usize) -> u64 {
    if n >= 4 {
        100_000
    } else {
        1_000_000
    }
}

/// A ball or sphere-cap query. Ball: `|α − ω/h| < C h^{−μ}`. Sphere:
/// `|α|² = j`, `|α − √j ω| ≤ C j^{μ/2}` with `h = j^{−1/2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapQuery {
    pub n: usize,
    pub omega: Vec<f64>,
    pub h: f64,
    pub j: Option<u64>,
    pub mu: f64,
    pub cap_constant: f64,
}

impl CapQuery {
    pub fn ball(omega: Vec<f64>, h: f64, mu: f64, cap_constant: f64) -> Self {
        Self {
            n: omega.len(),
            omega,
            h,
            j: None,
            mu,
            cap_constant,
        }
    }

    pub fn sphere(omega: Vec<f64>, j: u64, mu: f64, cap_constant: f64) -> Self {
        Self {
            n: omega.len(),
            omega,
            h: (j as f64).powf(-0.5),
            j: Some(j),
            mu,
            cap_constant,
        }
    }

    /// Center `ω/h` of the ball.
    pub fn center(&self) -> Vec<f64> {
        self.omega.iter().map(|w| w / self.h).collect()
    }

    /// `C h^{−μ}`.
    pub fn radius(&self) -> f64 {
        self.cap_constant * self.h.powf(-self.mu)
    }

    fn check_common(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_DIM {
            return Err(Error::EnumerationLimit {
                param: "n",
                value: self.n as f64,
                limit: MAX_DIM as f64,
            });
        }
        if self.omega.len() != self.n {
            return Err(Error::param("omega", format!("needs {} entries", self.n)));
        }
        if !(self.cap_constant >= 0.0) || !self.mu.is_finite() {
            return Err(Error::param("cap_constant", "must be non-negative"));
        }
        Ok(())
    }

    pub(crate) fn check_ball(&self) -> Result<f64> {
        self.check_common()?;
        if !(self.h > 0.0) {
            return Err(Error::param("h", "must be positive"));
        }
        let r = self.radius();
        if !(r <= MAX_BALL_RADIUS) {
            return Err(Error::EnumerationLimit {
                param: "radius",
                value: r,
                limit: MAX_BALL_RADIUS,
            });
        }
        let work = (2.0 * r + 1.0).powi(self.n as i32 - 1);
        if work > MAX_BALL_WORK {
            return Err(Error::EnumerationLimit {
                param: "radius",
                value: r,
                limit: ((MAX_BALL_WORK.powf(1.0 / (self.n as f64 - 1.0)) - 1.0) / 2.0).floor(),
            });
        }
        Ok(r)
    }

    pub(crate) fn check_sphere(&self) -> Result<u64> {
        self.check_common()?;
        let j = self
            .j
            .ok_or_else(|| Error::param("j", "sphere queries need an integer j = h^-2"))?;
        if j == 0 {
            return Err(Error::param("j", "must be at least 1"));
        }
        let limit = max_sphere_j(self.n);
        if j > limit {
            return Err(Error::EnumerationLimit {
                param: "j",
                value: j as f64,
                limit: limit as f64,
            });
        }
        let norm: f64 = self.omega.iter().map(|w| w * w).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::param("omega", format!("|omega| = {norm}, expected 1")));
        }
        Ok(j)
    }
}

/// `#{a ∈ ℤ : (a − c)² < r2}`.
fn count_open_interval(c: f64, r2: f64) -> u64 {
    if r2 <= 0.0 {
        return 0;
    }
    let s = r2.sqrt();
    let inside = |a: i64| (a as f64 - c).powi(2) < r2;
    let mut lo = (c - s).ceil() as i64;
    while inside(lo - 1) {
        lo -= 1;
    }
    while lo as f64 <= c && !inside(lo) {
        lo += 1;
    }
    let mut hi = (c + s).floor() as i64;
    while inside(hi + 1) {
        hi += 1;
    }
    while hi as f64 >= c && !inside(hi) {
        hi -= 1;
    }
    if hi >= lo {
        (hi - lo + 1) as u64
    } else {
        0
    }
}

fn integer_range(c: f64, r: f64) -> std::ops::RangeInclusive<i64> {
    (c - r).floor() as i64..=(c + r).ceil() as i64
}

/// Lattice points strictly inside the ball `|α − c| < r`: loops over the
/// leading coordinates, solves the last one.
pub fn count_in_ball(center: &[f64], radius: f64) -> u64 {
    fn rec(center: &[f64], r2: f64, radius: f64) -> u64 {
        if center.len() == 1 {
            return count_open_interval(center[0], r2);
        }
        let c = center[0];
        let mut total = 0;
        for a in integer_range(c, radius) {
            let d = (a as f64 - c).powi(2);
            if d < r2 {
                total += rec(&center[1..], r2 - d, radius);
            }
        }
        total
    }
    if center.is_empty() {
        return 1;
    }
    rec(center, radius * radius, radius)
}

/// `N_μ(h)`: lattice points with `|α − ω/h| < C h^{−μ}`.
pub fn ball_count(q: &CapQuery) -> Result<u64> {
    let r = q.check_ball()?;
    Ok(count_in_ball(&q.center(), r))
}

/// Inclusive cap test `|α − √j ω|² ≤ ρ²`, with a relative slack of 1e−12
/// so rational directions land on the boundary reliably.
pub(crate) fn in_cap(alpha: &[i64], omega: &[f64], rj: f64, rho2: f64) -> bool {
    let d2: f64 = alpha
        .iter()
        .zip(omega)
        .map(|(&a, &w)| (a as f64 - rj * w).powi(2))
        .sum();
    d2 <= rho2 * (1.0 + 1e-12) + 1e-9
}

pub(crate) fn isqrt(v: u64) -> u64 {
    let mut r = (v as f64).sqrt() as u64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

/// Cap points on `|α|² = j` within `ρ` of `√j ω`.
pub(crate) fn cap_points(omega: &[f64], j: u64, rho: f64, mut visit: impl FnMut(&[i64])) {
    let n = omega.len();
    let rj = (j as f64).sqrt();
    let rho2 = rho * rho;
    let bound = isqrt(j) as i64;
    // box of the cap intersected with the sphere's box
    let ranges: Vec<(i64, i64)> = omega
        .iter()
        .map(|w| {
            let c = rj * w;
            (
                ((c - rho).floor() as i64).max(-bound),
                ((c + rho).ceil() as i64).min(bound),
            )
        })
        .collect();
    let mut alpha = vec![0i64; n];
    fn rec(
        i: usize,
        rest: u64,
        ranges: &[(i64, i64)],
        alpha: &mut [i64],
        omega: &[f64],
        rj: f64,
        rho2: f64,
        visit: &mut dyn FnMut(&[i64]),
    ) {
        let n = alpha.len();
        if i + 1 == n {
            let r = isqrt(rest);
            if r * r != rest {
                return;
            }
            let r = r as i64;
            for a in if r == 0 { vec![0] } else { vec![-r, r] } {
                if a >= ranges[i].0 && a <= ranges[i].1 {
                    alpha[i] = a;
                    if in_cap(alpha, omega, rj, rho2) {
                        visit(alpha);
                    }
                }
            }
            return;
        }
        for a in ranges[i].0..=ranges[i].1 {
            let sq = (a * a) as u64;
            if sq <= rest {
                alpha[i] = a;
                rec(i + 1, rest - sq, ranges, alpha, omega, rj, rho2, visit);
            }
        }
    }
    rec(0, j, &ranges, &mut alpha, omega, rj, rho2, &mut visit);
}

/// `Ñ_μ(h)`: lattice points on `|α|² = j` inside the cap.
pub fn sphere_cap_count(q: &CapQuery) -> Result<u64> {
    let j = q.check_sphere()?;
    let mut count = 0;
    cap_points(&q.omega, j, q.radius(), |_| count += 1);
    Ok(count)
}

/// Oracle: scans the full box `|α_i − c_i| ≤ r + 1` and tests every point.
pub fn naive_ball_count(center: &[f64], radius: f64) -> u64 {
    let ranges: Vec<_> = center.iter().map(|&c| integer_range(c, radius + 1.0)).collect();
    let mut count = 0;
    for_each_in_box(&ranges, |a| {
        let d2: f64 = a
            .iter()
            .zip(center)
            .map(|(&x, &c)| (x as f64 - c).powi(2))
            .sum();
        if d2 < radius * radius {
            count += 1;
        }
    });
    count
}

/// Oracle: scans the full box `|α_i| ≤ √j` and tests `|α|² = j` exactly.
pub fn naive_sphere_cap_count(omega: &[f64], j: u64, rho: f64) -> u64 {
    let b = isqrt(j) as i64;
    let ranges: Vec<_> = omega.iter().map(|_| -b..=b).collect();
    let rj = (j as f64).sqrt();
    let mut count = 0;
    for_each_in_box(&ranges, |a| {
        let s: i64 = a.iter().map(|x| x * x).sum();
        if s as u64 == j && in_cap(a, omega, rj, rho * rho) {
            count += 1;
        }
    });
    count
}

fn for_each_in_box(ranges: &[std::ops::RangeInclusive<i64>], mut f: impl FnMut(&[i64])) {
    let mut a: Vec<i64> = ranges.iter().map(|r| *r.start()).collect();
    if ranges.iter().any(|r| r.is_empty()) {
        return;
    }
    loop {
        f(&a);
        let mut i = 0;
        loop {
            if i == a.len() {
                return;
            }
            if a[i] < *ranges[i].end() {
                a[i] += 1;
                break;
            }
            a[i] = *ranges[i].start();
            i += 1;
        }
    }
}
