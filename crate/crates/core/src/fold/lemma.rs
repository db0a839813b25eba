use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oscint::{integrate_real, m_alpha, weighted_cauchy};
use crate::scaling::{fit_log_log, ExponentFit};

/// First integral `∫ dθ / ((x − θ²)² + ε²)`.
pub fn first_integral(x: f64, eps: f64, rel_tol: f64) -> f64 {
    let pts = breakpoints(x, eps);
    integrate_real(
        |t| 1.0 / ((x - t * t).powi(2) + eps * eps),
        f64::NEG_INFINITY,
        f64::INFINITY,
        &pts,
        rel_tol,
    )
    .value
}

/// Second integral `∫ |θ| / ((x − θ²)² + ε²) dθ`.
pub fn second_integral(x: f64, eps: f64, rel_tol: f64) -> f64 {
    let pts = breakpoints(x, eps);
    integrate_real(
        |t| t.abs() / ((x - t * t).powi(2) + eps * eps),
        f64::NEG_INFINITY,
        f64::INFINITY,
        &pts,
        rel_tol,
    )
    .value
}

fn breakpoints(x: f64, eps: f64) -> Vec<f64> {
    let mut p = vec![0.0];
    if x > 0.0 {
        let r = x.sqrt();
        let w = eps / (2.0 * r).max(eps.sqrt());
        p.extend([-r - w, -r, -r + w, r - w, r, r + w]);
    } else {
        let w = (eps + x.abs()).sqrt();
        p.extend([-w, w]);
    }
    p
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma62Row {
    pub eps: f64,
    pub x: f64,
    pub first: f64,
    pub first_oracle: f64,
    pub second: f64,
    pub second_oracle: f64,
}

impl Lemma62Row {
    pub fn max_rel_err(&self) -> f64 {
        ((self.first - self.first_oracle) / self.first_oracle)
            .abs()
            .max(((self.second - self.second_oracle) / self.second_oracle).abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma62Report {
    pub rows: Vec<Lemma62Row>,
    pub max_rel_err: f64,
    /// ε-exponent of `sup_x` of the first integral (expected 3/2).
    pub first_fit: ExponentFit,
    /// ε-exponent of `sup_x` of the second integral (expected 1).
    pub second_fit: ExponentFit,
}

/// Integrates both integrands on `eps_grid × x_grid` and compares with the
/// closed forms. `x_grid` is in units of ε, so `x = t·ε`.
pub fn lemma_62_suite(eps_grid: &[f64], x_grid: &[f64]) -> Result<Lemma62Report> {
    if eps_grid.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::param("eps_grid", "every ε must be positive"));
    }
    if x_grid.is_empty() {
        return Err(Error::param("x_grid", "must not be empty"));
    }
    let rows: Vec<Lemma62Row> = eps_grid
        .par_iter()
        .flat_map_iter(|&eps| {
            x_grid.iter().map(move |&t| {
                let x = t * eps;
                Lemma62Row {
                    eps,
                    x,
                    first: first_integral(x, eps, 1e-11),
                    first_oracle: eps.powf(-1.5) * m_alpha(-x / eps),
                    second: second_integral(x, eps, 1e-11),
                    second_oracle: weighted_cauchy(x, eps),
                }
            })
        })
        .collect();
    let max_rel_err = rows.iter().map(Lemma62Row::max_rel_err).fold(0.0, f64::max);
    let sup = |pick: fn(&Lemma62Row) -> f64| -> Vec<(f64, f64)> {
        eps_grid
            .iter()
            .map(|&e| {
                let m = rows
                    .iter()
                    .filter(|r| r.eps == e)
                    .map(pick)
                    .fold(0.0, f64::max);
                (e, m)
            })
            .collect()
    };
    Ok(Lemma62Report {
        first_fit: fit_log_log(&sup(|r| r.first), None, 1.5, 0.02),
        second_fit: fit_log_log(&sup(|r| r.second), None, 1.0, 0.02),
        max_rel_err,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_integral_at_origin() {
        let v = second_integral(0.0, 0.1, 1e-12);
        assert!((v - 15.707_963_267_948_966).abs() < 1e-5);
    }

    #[test]
    fn first_integral_is_scaled_contour_value() {
        for &(eps, alpha) in &[(0.01, 0.0), (0.1, 2.5), (1e-3, -4.0)] {
            let v = first_integral(-eps * alpha, eps, 1e-12);
            let want = eps.powf(-1.5) * m_alpha(alpha);
            assert!((v / want - 1.0).abs() < 1e-8, "{eps} {alpha}: {v} {want}");
        }
    }
}
