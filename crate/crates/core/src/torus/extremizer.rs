use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::count::{cap_points, CapQuery, MAX_CAP_POINTS};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapMode {
    Ball,
    Sphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    L2Normalized,
    Raw,
}

/// `f = Σ a_α e_α` with `e_α(x) = e^{−iα·x}`. Norms use the normalized
/// measure `dx/(2π)ⁿ`, so `‖f‖₂² = Σ |a_α|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremizerSum {
    pub points: Vec<Vec<i64>>,
    pub coeffs: Vec<Complex64>,
    pub normalization: Normalization,
}

impl ExtremizerSum {
    /// Unit coefficients on `points`.
    pub fn raw(points: Vec<Vec<i64>>) -> Self {
        let coeffs = vec![Complex64::new(1.0, 0.0); points.len()];
        Self {
            points,
            coeffs,
            normalization: Normalization::Raw,
        }
    }

    pub fn normalized(mut self) -> Self {
        let l2 = self.l2_norm();
        if l2 > 0.0 {
            for c in &mut self.coeffs {
                *c /= l2;
            }
        }
        self.normalization = Normalization::L2Normalized;
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|f(0)| / ‖f‖₂`; equals `√count` for uniform coefficients.
    pub fn ratio_at_origin(&self) -> f64 {
        eval_sum(self, &vec![0.0; self.dim()]).norm() / self.l2_norm()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    /// `(α, a_α)` pairs in the shape the regularity checker takes.
    pub fn coefficient_map(&self) -> Vec<(Vec<i64>, Complex64)> {
        self.points.iter().cloned().zip(self.coeffs.iter().copied()).collect()
    }

    /// `max |f|` over the uniform grid `x = 2πk/m`, `k ∈ {0, …, m−1}ⁿ`.
    pub fn grid_sup(&self, m: usize) -> f64 {
        let mut best: f64 = 0.0;
        grid_for_each(self.dim(), m, |x| best = best.max(eval_sum(self, x).norm()));
        best
    }

    /// Mean of `|f|²` over the same grid; equals `Σ|a|²` when the frequencies
    /// are distinct mod `m`.
    pub fn grid_mean_square(&self, m: usize) -> f64 {
        let mut total = 0.0;
        let mut count = 0usize;
        grid_for_each(self.dim(), m, |x| {
            total += eval_sum(self, x).norm_sqr();
            count += 1;
        });
        total / count as f64
    }
}

fn grid_for_each(n: usize, m: usize, mut f: impl FnMut(&[f64])) {
    let step = 2.0 * std::f64::consts::PI / m as f64;
    let mut k = vec![0usize; n];
    let mut x = vec![0.0; n];
    loop {
        for (xi, &ki) in x.iter_mut().zip(&k) {
            *xi = ki as f64 * step;
        }
        f(&x);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            k[i] += 1;
            if k[i] < m {
                break;
            }
            k[i] = 0;
            i += 1;
        }
    }
}

/// Direct summation of `Σ a_α e^{−iα·x}`.
pub fn eval_sum(s: &ExtremizerSum, x: &[f64]) -> Complex64 {
    s.points
        .iter()
        .zip(&s.coeffs)
        .map(|(a, c)| {
            let phase: f64 = a.iter().zip(x).map(|(&ai, &xi)| ai as f64 * xi).sum();
            c * Complex64::from_polar(1.0, -phase)
        })
        .sum()
}

/// Lattice points of the ball `|α − ω/h| < C h^{−μ}`.
pub fn ball_points(q: &CapQuery) -> Result<Vec<Vec<i64>>> {
    let r = q.check_ball()?;
    let c = q.center();
    // volume of the unit n-ball, n ≤ 4
    let unit = [2.0, std::f64::consts::PI, 4.0 / 3.0 * std::f64::consts::PI, 4.9348022005446793][q.n - 1];
    let estimate = unit * r.powi(q.n as i32);
    if estimate > MAX_CAP_POINTS {
        return Err(Error::EnumerationLimit {
            param: "points",
            value: estimate.round(),
            limit: MAX_CAP_POINTS,
        });
    }
    let mut out = Vec::new();
    let mut a = vec![0i64; q.n];
    fn rec(i: usize, c: &[f64], r2: f64, a: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == c.len() {
            out.push(a.clone());
            return;
        }
        let s = r2.sqrt();
        for v in (c[i] - s).floor() as i64..=(c[i] + s).ceil() as i64 {
            let d = (v as f64 - c[i]).powi(2);
            if d < r2 {
                a[i] = v;
                rec(i + 1, c, r2 - d, a, out);
            }
        }
    }
    rec(0, &c, r * r, &mut a, &mut out);
    Ok(out)
}

/// Lattice points of the sphere cap.
pub fn sphere_points(q: &CapQuery) -> Result<Vec<Vec<i64>>> {
    q.check_sphere()?;
    let mut out = Vec::new();
    cap_points(&q.omega, q.j.expect("checked"), q.radius(), |a| out.push(a.to_vec()));
    Ok(out)
}

/// Uniform, l2-normalized coefficients on the counted set.
pub fn extremizer(q: &CapQuery, mode: CapMode) -> Result<ExtremizerSum> {
    let points = match mode {
        CapMode::Ball => ball_points(q)?,
        CapMode::Sphere => sphere_points(q)?,
    };
    if points.is_empty() {
        return Err(Error::EmptyCap);
    }
    Ok(ExtremizerSum::raw(points).normalized())
}
