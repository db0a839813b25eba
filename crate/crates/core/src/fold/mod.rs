//! The fold beyond its threshold: two-regime exponent, saturating families,
//! and the two exact integrals behind the upper bound.

mod lemma;

use std::fmt::Write as _;

use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amplitudes::{make_amplitude, AmplitudeKind, AmplitudeParams, AmplitudeProfile};
use crate::catalog::{build_phase, PhaseFunction, Sign, SingularityType};
use crate::error::{Error, Result};
use crate::oscint::{self, integrate_real, IntegralSpec};
use crate::scaling::{default_h_grid, fit_log_log, linear_fit, ExponentFit};

pub use lemma::{first_integral, lemma_62_suite, second_integral, Lemma62Report, Lemma62Row};

/// Sharp sup-norm exponent of the fold at regularity `δ`.
pub fn sharp_exponent(delta: f64) -> f64 {
    if delta <= 1.0 / 3.0 {
        (1.0 + 3.0 * delta) / 6.0
    } else {
        (1.0 + delta) / 4.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Below,
    Above,
    /// `δ = 1/3` with the below-threshold family.
    AtThreshold,
}

#[derive(Debug, Clone)]
pub struct FoldExperiment {
    pub delta: f64,
    pub side: Side,
    pub amplitude: AmplitudeProfile,
    pub h_grid: Vec<f64>,
    /// Half-width of the x-scan in units of `h^{2/3}`.
    pub x_window: f64,
    /// Grid points across the window (the origin is always added).
    pub x_points: usize,
    /// Golden-section steps around the best grid point.
    pub refine_steps: usize,
    pub rel_tol: f64,
}

impl FoldExperiment {
    pub fn new(delta: f64, side: Side) -> Result<Self> {
        let kind = match side {
            Side::Below | Side::AtThreshold => AmplitudeKind::FoldSaturatorBelow,
            Side::Above => AmplitudeKind::FoldSaturatorAbove,
        };
        let exp = Self {
            delta,
            side,
            amplitude: make_amplitude(kind, delta, AmplitudeParams::default())?,
            h_grid: default_h_grid(1),
            x_window: 3.0,
            x_points: 41,
            refine_steps: 16,
            rel_tol: 1e-8,
        };
        exp.validate()?;
        Ok(exp)
    }

    /// Below for `δ < 1/3`, above otherwise.
    pub fn natural(delta: f64) -> Result<Self> {
        Self::new(delta, if delta < 1.0 / 3.0 { Side::Below } else { Side::Above })
    }

    pub fn validate(&self) -> Result<()> {
        let third = 1.0 / 3.0;
        let ok = match self.side {
            Side::Below => self.delta <= third + 1e-12,
            Side::Above => self.delta >= third - 1e-12,
            Side::AtThreshold => (self.delta - third).abs() <= 1e-12,
        };
        if !ok {
            return Err(Error::param(
                "side",
                format!("{:?} does not match delta = {}", self.side, self.delta),
            ));
        }
        if self.h_grid.len() < 5 || self.h_grid.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::param("h_grid", "needs at least 5 strictly decreasing values"));
        }
        if self.h_grid.iter().any(|&h| !(h > 0.0 && h < 1.0)) {
            return Err(Error::param("h_grid", "every h must lie in (0, 1)"));
        }
        if !(self.x_window > 0.0) || self.x_points < 2 {
            return Err(Error::param("x_window", "needs a positive window and 2+ points"));
        }
        if self.amplitude.dim() != 1 {
            return Err(Error::param("amplitude", "fold amplitudes are one-dimensional"));
        }
        Ok(())
    }

    /// `xθ + θ³` below, `xθ − θ³/3` above.
    pub fn phase(&self) -> PhaseFunction {
        let a2 = build_phase(SingularityType::a(1, Sign::Plus).expect("valid"));
        match self.side {
            Side::Above => a2.with_germ_scaled(Rational64::new(-1, 3)),
            _ => a2,
        }
    }

    fn spec(&self, x: f64, h: f64) -> IntegralSpec {
        IntegralSpec::new(self.phase(), self.amplitude.clone(), vec![x], h)
            .with_rel_tol(self.rel_tol)
            .with_prefactor(false)
    }
}

/// `‖u_h‖₂ = (2πh)^{1/2} ‖a‖_{L²(θ)}`.
pub fn l2_from_coefficients(exp: &FoldExperiment, h: f64) -> f64 {
    let a = &exp.amplitude;
    if a.is_identically_zero() {
        return 0.0;
    }
    let (lo, hi) = a.support(0, h);
    let q = integrate_real(
        |t| a.eval_axis(t, h).norm_sqr(),
        lo,
        hi,
        &a.breakpoints(0, h),
        1e-12,
    );
    (2.0 * std::f64::consts::PI * h).sqrt() * q.value.sqrt()
}

/// `‖u_h‖₂` from the x side: trapezoid sum of `|u|²` over `|x| ≤ window`.
/// `u` is band-limited to `|ξ| ≤ R/h`, so a step below `πh/(2R)` is exact up
/// to the tails.
pub fn l2_direct(exp: &FoldExperiment, h: f64, window: f64) -> Result<f64> {
    let r = exp.amplitude.radius(h);
    let step = 0.5 * std::f64::consts::PI * h / (2.0 * r);
    let n = (window / step).ceil() as i64;
    let step = window / n as f64;
    let vals: Vec<f64> = (-n..=n)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 * step;
            oscint::evaluate(&exp.spec(x, h)).map(|v| v.abs_value * v.abs_value)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((vals.iter().sum::<f64>() * step).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldRow {
    pub delta: f64,
    pub h: f64,
    pub sup_abs: f64,
    pub argmax_x: f64,
    pub origin_abs: f64,
    pub l2: f64,
    pub ratio: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldReport {
    pub delta: f64,
    pub side: Side,
    pub sharp_exponent: f64,
    pub rows: Vec<FoldRow>,
    /// Fit of `sup|u| / ‖u‖₂`.
    pub fit: ExponentFit,
    /// Fit of `|u(0)| / ‖u‖₂`.
    pub origin_fit: ExponentFit,
}

impl FoldReport {
    pub fn csv_rows(&self, out: &mut String) {
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{},{}", r.delta, r.h, r.sup_abs, r.l2, r.ratio);
        }
    }
}

pub const FOLD_CSV_HEADER: &str = "delta,h,sup_abs,l2,ratio\n";
pub const FOLD_TOLERANCE: f64 = 0.04;

fn fold_row(exp: &FoldExperiment, h: f64) -> Result<FoldRow> {
    let scale = exp.x_window * h.powf(2.0 / 3.0);
    let n = exp.x_points;
    let mut xs: Vec<f64> = (0..n)
        .map(|i| scale * (-1.0 + 2.0 * i as f64 / (n - 1) as f64))
        .collect();
    xs.push(0.0);
    let mut converged = true;
    let mut eval = |x: f64| -> Result<f64> {
        let r = oscint::evaluate(&exp.spec(x, h))?;
        converged &= r.converged;
        Ok(r.abs_value)
    };
    let vals: Vec<f64> = xs.iter().map(|&x| eval(x)).collect::<Result<_>>()?;
    let origin_abs = vals[n];
    let (mut best_i, mut best) = (n, origin_abs);
    for (i, &v) in vals[..n].iter().enumerate() {
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let mut argmax = xs[best_i];
    if exp.refine_steps > 0 {
        let d = 2.0 * scale / (n - 1) as f64;
        let (mut lo, mut hi) = (argmax - d, argmax + d);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = hi - g * (hi - lo);
        let mut dd = lo + g * (hi - lo);
        let mut fc = eval(c)?;
        let mut fd = eval(dd)?;
        for _ in 2..exp.refine_steps {
            if fc > fd {
                hi = dd;
                dd = c;
                fd = fc;
                c = hi - g * (hi - lo);
                fc = eval(c)?;
            } else {
                lo = c;
                c = dd;
                fc = fd;
                dd = lo + g * (hi - lo);
                fd = eval(dd)?;
            }
            for (x, f) in [(c, fc), (dd, fd)] {
                if f > best {
                    best = f;
                    argmax = x;
                }
            }
        }
    }
    let l2 = l2_from_coefficients(exp, h);
    Ok(FoldRow {
        delta: exp.delta,
        h,
        sup_abs: best,
        argmax_x: argmax,
        origin_abs,
        l2,
        ratio: if l2 > 0.0 { best / l2 } else { 0.0 },
        converged,
    })
}

/// Scans `sup_x |u_h|/‖u_h‖₂` over the h-grid and fits against the sharp
/// exponent.
pub fn run_fold(exp: &FoldExperiment) -> Result<FoldReport> {
    exp.validate()?;
    let rows: Vec<FoldRow> = exp
        .h_grid
        .par_iter()
        .map(|&h| fold_row(exp, h))
        .collect::<Result<_>>()?;
    let sharp = sharp_exponent(exp.delta);
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.converged)
        .map(|r| (r.h, r.ratio))
        .collect();
    let origin: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.converged)
        .map(|r| (r.h, r.origin_abs / r.l2))
        .collect();
    Ok(FoldReport {
        delta: exp.delta,
        side: exp.side,
        sharp_exponent: sharp,
        fit: fit_log_log(&pts, None, sharp, FOLD_TOLERANCE),
        origin_fit: fit_log_log(&origin, None, sharp, FOLD_TOLERANCE),
        rows,
    })
}

/// Two-segment continuous fit `y = a + bδ + c·max(0, δ − β)` with `β` on a
/// 0.01 grid strictly inside the data range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Breakpoint {
    pub breakpoint: f64,
    pub left_slope: f64,
    pub right_slope: f64,
    pub sse: f64,
}

pub fn fit_breakpoint(points: &[(f64, f64)]) -> Result<Breakpoint> {
    if points.len() < 4 {
        return Err(Error::DegenerateFit(format!(
            "{} points for a two-segment fit",
            points.len()
        )));
    }
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let mut best: Option<Breakpoint> = None;
    let mut i = (lo * 100.0).floor() as i64 + 1;
    while (i as f64) / 100.0 < hi {
        let beta = i as f64 / 100.0;
        i += 1;
        let left = points.iter().filter(|p| p.0 <= beta).count();
        if left < 2 || points.len() - left < 1 {
            continue;
        }
        let Some((a, b, c)) = hinge_lsq(points, beta) else {
            continue;
        };
        let sse: f64 = points
            .iter()
            .map(|&(x, y)| (y - a - b * x - c * (x - beta).max(0.0)).powi(2))
            .sum();
        if best.map_or(true, |bp| sse < bp.sse) {
            best = Some(Breakpoint {
                breakpoint: beta,
                left_slope: b,
                right_slope: b + c,
                sse,
            });
        }
    }
    best.ok_or_else(|| Error::DegenerateFit("no admissible breakpoint".into()))
}

fn hinge_lsq(points: &[(f64, f64)], beta: f64) -> Option<(f64, f64, f64)> {
    // normal equations for three regressors
    let mut m = [[0.0f64; 4]; 3];
    for &(x, y) in points {
        let f = [1.0, x, (x - beta).max(0.0)];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] += f[r] * f[c];
            }
            m[r][3] += f[r] * y;
        }
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-14 {
            return None;
        }
        m.swap(col, piv);
        for r in 0..3 {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..4 {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    Some((m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]))
}

/// Sweep over δ with the natural construction per δ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    pub reports: Vec<FoldReport>,
    pub breakpoint: Breakpoint,
    pub max_deviation: f64,
}

pub fn regime_sweep(deltas: &[f64], h_grid: &[f64]) -> Result<RegimeReport> {
    let reports: Vec<FoldReport> = deltas
        .iter()
        .map(|&d| {
            let mut e = FoldExperiment::natural(d)?;
            e.h_grid = h_grid.to_vec();
            run_fold(&e)
        })
        .collect::<Result<_>>()?;
    let pts: Vec<(f64, f64)> = reports.iter().map(|r| (r.delta, r.fit.slope)).collect();
    let max_deviation = reports
        .iter()
        .map(|r| (r.fit.slope - r.sharp_exponent).abs())
        .fold(0.0, f64::max);
    Ok(RegimeReport {
        breakpoint: fit_breakpoint(&pts)?,
        reports,
        max_deviation,
    })
}

/// Slope of `log ‖u‖₂` against `log(1/h)` from the coefficient side.
pub fn l2_exponent(exp: &FoldExperiment) -> Result<f64> {
    let (x, y): (Vec<f64>, Vec<f64>) = exp
        .h_grid
        .iter()
        .map(|&h| ((1.0 / h).ln(), l2_from_coefficients(exp, h).ln()))
        .unzip();
    Ok(linear_fit(&x, &y)?.slope)
}
