use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::AmplitudeProfile;
use crate::error::{Error, Result};
use crate::scaling::linear_fit;

/// Fitted growth of `sup |∂^α a|` for one multi-index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderFit {
    pub alpha: Vec<usize>,
    /// Slope of `log sup|∂^α a|` against `log(1/h)`.
    pub fitted_order: f64,
    /// `declared_order + δ|α|`.
    pub expected_order: f64,
    pub residual: f64,
    pub r_squared: f64,
    pub points_used: usize,
    pub sups: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolReport {
    pub kind: String,
    pub delta: f64,
    pub declared_order: f64,
    pub h_grid: Vec<f64>,
    pub fits: Vec<OrderFit>,
}

impl SymbolReport {
    pub fn fit(&self, alpha: &[usize]) -> Option<&OrderFit> {
        self.fits.iter().find(|f| f.alpha == alpha)
    }
}

/// Fourth-order central difference of order `n` (0..=4) at `t`.
fn central_difference(f: &dyn Fn(f64) -> Complex64, t: f64, step: f64, n: usize) -> Complex64 {
    let v = |k: i32| f(t + k as f64 * step);
    match n {
        0 => v(0),
        1 => (v(-2) - v(-1) * 8.0 + v(1) * 8.0 - v(2)) / (12.0 * step),
        2 => (-v(-2) + v(-1) * 16.0 - v(0) * 30.0 + v(1) * 16.0 - v(2)) / (12.0 * step * step),
        3 => {
            (v(-3) - v(-2) * 8.0 + v(-1) * 13.0 - v(1) * 13.0 + v(2) * 8.0 - v(3))
                / (8.0 * step.powi(3))
        }
        _ => {
            (-v(-3) + v(-2) * 12.0 - v(-1) * 39.0 + v(0) * 56.0 - v(1) * 39.0 + v(2) * 12.0
                - v(3))
                / (6.0 * step.powi(4))
        }
    }
}

/// Sup of `|d^n a_1/dt^n|` on a grid covering the support, for `n = 0..=alpha_max`.
fn axis_sups(a: &AmplitudeProfile, h: f64, alpha_max: usize) -> Vec<f64> {
    let step = h.powf(a.delta()).min(a.scale(h)) / 64.0;
    let (lo, hi) = a.support(0, h);
    let pad = 4.0 * step;
    let n = ((hi - lo + 2.0 * pad) / step).ceil() as usize;
    let f = |t: f64| a.eval_axis(t, h);
    let mut sups = vec![0.0f64; alpha_max + 1];
    for i in 0..=n {
        let t = lo - pad + i as f64 * step;
        for (order, s) in sups.iter_mut().enumerate() {
            let d = central_difference(&f, t, step, order).norm();
            if d > *s {
                *s = d;
            }
        }
    }
    sups
}

fn multi_indices(dim: usize, alpha_max: usize) -> Vec<Vec<usize>> {
    if dim == 1 {
        return (0..=alpha_max).map(|a| vec![a]).collect();
    }
    let mut out = Vec::new();
    for total in 0..=alpha_max {
        for a1 in (0..=total).rev() {
            out.push(vec![a1, total - a1]);
        }
    }
    out
}

/// Estimates the symbol order of `a` from finite differences over `h_grid`.
pub fn check_symbol_order(
    a: &AmplitudeProfile,
    h_grid: &[f64],
    alpha_max: usize,
) -> Result<SymbolReport> {
    if alpha_max > 4 {
        return Err(Error::param("alpha_max", format!("{alpha_max} exceeds 4")));
    }
    if h_grid.len() < 6 {
        return Err(Error::param(
            "h_grid",
            format!("{} points; at least 6 are required", h_grid.len()),
        ));
    }
    if h_grid.iter().any(|&h| !(h > 0.0 && h < 1.0)) {
        return Err(Error::param("h_grid", "every h must lie in (0, 1)"));
    }
    let per_h: Vec<Vec<f64>> = h_grid
        .par_iter()
        .map(|&h| axis_sups(a, h, alpha_max))
        .collect();
    let mut fits = Vec::new();
    for alpha in multi_indices(a.dim(), alpha_max) {
        // tensor product: the prefactor enters every axis sup once, so divide out extras
        let sups: Vec<f64> = h_grid
            .iter()
            .zip(&per_h)
            .map(|(&h, s)| {
                let mut v: f64 = alpha.iter().map(|&ai| s[ai]).product();
                v /= a.prefactor(h).abs().powi(alpha.len() as i32 - 1);
                v
            })
            .collect();
        let (xs, ys): (Vec<f64>, Vec<f64>) = h_grid
            .iter()
            .zip(&sups)
            .filter(|(_, &s)| s > 0.0 && s.is_finite())
            .map(|(&h, &s)| ((1.0 / h).ln(), s.ln()))
            .unzip();
        if xs.len() < 3 {
            return Err(Error::DegenerateFit(format!(
                "alpha {alpha:?}: {} usable points",
                xs.len()
            )));
        }
        let fit = linear_fit(&xs, &ys)?;
        let order: usize = alpha.iter().sum();
        let expected = a.declared_order() + a.delta() * order as f64;
        fits.push(OrderFit {
            alpha,
            fitted_order: fit.slope,
            expected_order: expected,
            residual: fit.slope - expected,
            r_squared: fit.r_squared,
            points_used: xs.len(),
            sups,
        });
    }
    Ok(SymbolReport {
        kind: a.custom_name().map(str::to_string).unwrap_or_else(|| a.kind().to_string()),
        delta: a.delta(),
        declared_order: a.declared_order(),
        h_grid: h_grid.to_vec(),
        fits,
    })
}
