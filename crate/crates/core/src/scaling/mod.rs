//! Sup-norm scans over quasi-homogeneous shells and exponent fits.

mod fit;
mod shells;

use std::fmt::Write as _;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amplitudes::AmplitudeProfile;
use crate::catalog::{self, PhaseFunction, SingularityType};
use crate::error::{Error, Result};
use crate::fold::sharp_exponent;
use crate::oscint::{self, IntegralResult, IntegralSpec};

pub use fit::{
    fit_log_log, judge, linear_fit, ExponentFit, LineFit, Verdict, MIN_ROWS, MIN_R_SQUARED,
};
pub use shells::{boundary_directions, random_directions, shell_lambdas};

pub(crate) fn ser_opt_rational<S: serde::Serializer>(
    v: &Option<Rational64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// Default tolerances.
pub const TOL_1D: f64 = 0.03;
pub const TOL_2D: f64 = 0.06;
pub const TOL_E_SERIES: f64 = 0.10;

/// Geometric sequence from `from` down to `to` with `n` points.
pub fn geometric_grid(from: f64, to: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![from];
    }
    let ratio = (to / from).ln() / (n - 1) as f64;
    (0..n).map(|i| from * (ratio * i as f64).exp()).collect()
}

/// Default h-grid: 10 points from 2⁻⁶ to 2⁻¹⁴ (k = 1) or 2⁻⁴ to 2⁻¹⁰ (k = 2).
pub fn default_h_grid(k: usize) -> Vec<f64> {
    if k == 1 {
        geometric_grid(2f64.powi(-6), 2f64.powi(-14), 10)
    } else {
        geometric_grid(2f64.powi(-4), 2f64.powi(-10), 10)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XStrategy {
    OriginOnly,
    OmegaShells,
    FullGrid,
}

#[derive(Debug, Clone)]
pub struct ScanPlan {
    pub phase: PhaseFunction,
    pub amplitude: AmplitudeProfile,
    /// Strictly decreasing, at least 5 points.
    pub h_grid: Vec<f64>,
    pub x_strategy: XStrategy,
    /// Number of geometric shells `λ ∈ [h, 1]`.
    pub shell_count: usize,
    pub points_per_shell: usize,
    /// Extra random directions on `∂Ω(1)` per shell, drawn from `seed`.
    pub random_points: usize,
    pub seed: u64,
    /// Golden-section steps refining the best candidate along its ray.
    pub refine_steps: usize,
    pub rel_tol: f64,
    pub budget: Option<u64>,
}

impl ScanPlan {
    /// Defaults for a phase: shells on, 8 shells, golden refinement in 1D.
    pub fn new(phase: PhaseFunction, amplitude: AmplitudeProfile) -> Self {
        let k = phase.k();
        Self {
            h_grid: default_h_grid(k),
            phase,
            amplitude,
            x_strategy: XStrategy::OmegaShells,
            shell_count: 8,
            points_per_shell: 4,
            random_points: 0,
            seed: 0,
            refine_steps: if k == 1 { 12 } else { 0 },
            rel_tol: if k == 1 { 1e-8 } else { 1e-6 },
            budget: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.h_grid.len() < 5 {
            return Err(Error::param("h_grid", "at least 5 points are required"));
        }
        if self.h_grid.iter().any(|&h| !(h > 0.0 && h < 1.0)) {
            return Err(Error::param("h_grid", "every h must lie in (0, 1)"));
        }
        if self.h_grid.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::param("h_grid", "must be strictly decreasing"));
        }
        if self.points_per_shell == 0 {
            return Err(Error::param("points_per_shell", "must be at least 1"));
        }
        if self.shell_count == 0 {
            return Err(Error::param("shell_count", "must be at least 1"));
        }
        if self.amplitude.dim() != self.phase.k() {
            return Err(Error::param(
                "amplitude",
                format!(
                    "dimension {} does not match k = {}",
                    self.amplitude.dim(),
                    self.phase.k()
                ),
            ));
        }
        if !(1e-10..=1e-3).contains(&self.rel_tol) {
            return Err(Error::param("rel_tol", "must lie in [1e-10, 1e-3]"));
        }
        Ok(())
    }

    fn spec(&self, x: Vec<f64>, h: f64) -> IntegralSpec {
        let mut s = IntegralSpec::new(self.phase.clone(), self.amplitude.clone(), x, h)
            .with_rel_tol(self.rel_tol);
        s.budget = self.budget;
        s
    }

    /// Candidate points `(λ, direction index, x)` at one `h`. The origin has
    /// `λ = 0`.
    fn candidates(&self, h: f64) -> Vec<(f64, usize, Vec<f64>)> {
        let k0 = self.phase.k0();
        let mut out = vec![(0.0, 0, vec![0.0; k0])];
        if k0 == 0 {
            return out;
        }
        let s = self.phase.homogeneity().s_f64();
        match self.x_strategy {
            XStrategy::OriginOnly => {}
            XStrategy::OmegaShells => {
                let mut dirs = boundary_directions(k0, self.points_per_shell, &s);
                dirs.extend(random_directions(k0, self.random_points, self.seed, &s));
                for lam in shell_lambdas(h, self.shell_count) {
                    for (i, y) in dirs.iter().enumerate() {
                        out.push((lam, i, shells::on_shell(y, lam, &s)));
                    }
                }
            }
            XStrategy::FullGrid => {
                let n = self.points_per_shell.max(2);
                let total = n.pow(k0 as u32);
                for idx in 0..total {
                    let mut rem = idx;
                    let x: Vec<f64> = (0..k0)
                        .map(|_| {
                            let i = rem % n;
                            rem /= n;
                            -1.0 + 2.0 * i as f64 / (n - 1) as f64
                        })
                        .collect();
                    out.push((1.0, idx, x));
                }
            }
        }
        out
    }
}

/// One evaluated point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanPoint {
    pub h: f64,
    pub lambda: f64,
    pub y_index: usize,
    pub x: Vec<f64>,
    pub abs_i: f64,
    pub est_error: f64,
    pub converged: bool,
}

/// Sup over all candidates at one `h`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupRow {
    pub h: f64,
    pub sup_abs: f64,
    pub argmax_x: Vec<f64>,
    pub argmax_lambda: f64,
    pub origin_abs: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanTable {
    pub points: Vec<ScanPoint>,
    pub rows: Vec<SupRow>,
}

impl ScanTable {
    /// CSV with columns `h,lambda,y_index,abs_I,est_error,converged`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("h,lambda,y_index,abs_I,est_error,converged\n");
        for p in &self.points {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                p.h, p.lambda, p.y_index, p.abs_i, p.est_error, p.converged
            );
        }
        out
    }

    /// `(h, sup)` pairs of converged rows.
    pub fn fit_points(&self) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.converged)
            .map(|r| (r.h, r.sup_abs))
            .collect()
    }
}

fn eval_abs(plan: &ScanPlan, x: Vec<f64>, h: f64) -> Result<IntegralResult> {
    oscint::evaluate(&plan.spec(x, h))
}

/// Evaluates `|I|` at the origin and on the shells for every `h`, then
/// refines the best candidate along its ray.
pub fn supnorm_scan(plan: &ScanPlan) -> Result<ScanTable> {
    plan.validate()?;
    let jobs: Vec<(f64, f64, usize, Vec<f64>)> = plan
        .h_grid
        .iter()
        .flat_map(|&h| {
            plan.candidates(h)
                .into_iter()
                .map(move |(l, i, x)| (h, l, i, x))
        })
        .collect();
    let evaluated: Vec<ScanPoint> = jobs
        .into_par_iter()
        .map(|(h, lambda, y_index, x)| {
            let r = eval_abs(plan, x.clone(), h)?;
            Ok(ScanPoint {
                h,
                lambda,
                y_index,
                x,
                abs_i: r.abs_value,
                est_error: r.est_error,
                converged: r.converged,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let per_h: Vec<(SupRow, Vec<ScanPoint>)> = plan
        .h_grid
        .par_iter()
        .map(|&h| {
            let pts: Vec<&ScanPoint> = evaluated.iter().filter(|p| p.h == h).collect();
            refine_row(plan, h, &pts)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut points = evaluated;
    let mut rows = Vec::new();
    for (row, extra) in per_h {
        rows.push(row);
        points.extend(extra);
    }
    // stable (h, lambda, y_index) order regardless of scheduling
    points.sort_by(|a, b| {
        b.h.total_cmp(&a.h)
            .then(a.lambda.total_cmp(&b.lambda))
            .then(a.y_index.cmp(&b.y_index))
    });
    Ok(ScanTable { points, rows })
}

const REFINED_INDEX: usize = usize::MAX / 2;

fn refine_row(plan: &ScanPlan, h: f64, pts: &[&ScanPoint]) -> Result<(SupRow, Vec<ScanPoint>)> {
    let origin = pts.iter().find(|p| p.lambda == 0.0).expect("origin evaluated");
    let best = pts
        .iter()
        .copied()
        .reduce(|a, b| if b.abs_i > a.abs_i { b } else { a })
        .expect("non-empty");
    let mut converged = pts.iter().all(|p| p.converged);
    let mut row = SupRow {
        h,
        sup_abs: best.abs_i,
        argmax_x: best.x.clone(),
        argmax_lambda: best.lambda,
        origin_abs: origin.abs_i,
        converged,
    };
    let mut extra = Vec::new();
    if plan.refine_steps == 0 || best.lambda == 0.0 || plan.x_strategy != XStrategy::OmegaShells {
        return Ok((row, extra));
    }
    // golden section in log λ between the neighbouring shells
    let s = plan.phase.homogeneity().s_f64();
    let lams = shell_lambdas(h, plan.shell_count);
    let ratio = if lams.len() > 1 { lams[1] / lams[0] } else { 2.0 };
    let y: Vec<f64> = best
        .x
        .iter()
        .zip(&s)
        .map(|(x, sj)| x / best.lambda.powf(1.0 - sj))
        .collect();
    let at = |lam: f64| shells::on_shell(&y, lam, &s);
    let mut lo = (best.lambda / ratio).ln();
    let mut hi = (best.lambda * ratio).min(1.0).ln();
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut probe = |ll: f64, extra: &mut Vec<ScanPoint>| -> Result<f64> {
        let lam = ll.exp();
        let x = at(lam);
        let r = eval_abs(plan, x.clone(), h)?;
        converged &= r.converged;
        extra.push(ScanPoint {
            h,
            lambda: lam,
            y_index: REFINED_INDEX + extra.len(),
            x,
            abs_i: r.abs_value,
            est_error: r.est_error,
            converged: r.converged,
        });
        Ok(r.abs_value)
    };
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let mut fc = probe(c, &mut extra)?;
    let mut fd = probe(d, &mut extra)?;
    for _ in 2..plan.refine_steps {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = probe(c, &mut extra)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = probe(d, &mut extra)?;
        }
    }
    for p in &extra {
        if p.abs_i > row.sup_abs {
            row.sup_abs = p.abs_i;
            row.argmax_x = p.x.clone();
            row.argmax_lambda = p.lambda;
        }
    }
    row.converged = converged;
    Ok((row, extra))
}

/// Fits the sup column of a scan.
pub fn fit_exponent(table: &ScanTable, reference: Rational64, tolerance: f64) -> ExponentFit {
    fit_log_log(
        &table.fit_points(),
        Some(reference),
        reference.to_f64().unwrap_or(f64::NAN),
        tolerance,
    )
}

/// One δ of a threshold sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    pub delta: f64,
    /// δ exceeds the tabulated threshold; the fit carries no expectation.
    pub exploratory: bool,
    /// Beyond-threshold exponent for the fold, for reference.
    pub fold_exponent: Option<f64>,
    pub fit: ExponentFit,
    pub table: ScanTable,
}

/// Runs a scan per δ with an `S⁰_δ` narrow bump and fits against `κ(t)`.
pub fn threshold_sweep(
    t: SingularityType,
    deltas: &[f64],
    plan: &ScanPlan,
    tolerance: f64,
) -> Result<Vec<SweepEntry>> {
    let kappa = catalog::caustic_order(t);
    let delta0 = catalog::threshold(t).to_f64().unwrap();
    let phase = catalog::build_phase(t);
    deltas
        .iter()
        .map(|&delta| {
            let mut p = plan.clone();
            p.phase = phase.clone();
            p.amplitude = AmplitudeProfile::narrow(delta, phase.k())?;
            let table = supnorm_scan(&p)?;
            let mut fit = fit_exponent(&table, kappa, tolerance);
            let exploratory = delta > delta0 + 1e-12;
            if exploratory {
                fit.verdict = Verdict::Exploratory;
            }
            let is_fold = t.family() == catalog::Family::A && t.index() == 1;
            Ok(SweepEntry {
                delta,
                exploratory,
                fold_exponent: (exploratory && is_fold).then(|| sharp_exponent(delta)),
                fit,
                table,
            })
        })
        .collect()
}

/// Scale-invariance check at one shell point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvarianceCheck {
    pub lambda: f64,
    pub direct: f64,
    pub predicted: f64,
    pub rel_diff: f64,
}

/// Compares `|I(λ^{1−s}y; h)|` with `λ^{|r|} h^{−k/2} |K|`, `K` the integral
/// rescaled to parameter `h/λ`.
pub fn scale_invariance(
    plan: &ScanPlan,
    h: f64,
    lambda: f64,
    y: &[f64],
) -> Result<InvarianceCheck> {
    let s = plan.phase.homogeneity().s_f64();
    let x = shells::on_shell(y, lambda, &s);
    let spec = plan.spec(x, h);
    let direct = oscint::evaluate(&spec)?.abs_value;
    let kernel = oscint::rescaled_kernel(&spec, lambda)?;
    let predicted = oscint::rescaled_gain(&spec, lambda) * kernel.abs_value;
    let rel_diff = if direct == 0.0 && predicted == 0.0 {
        0.0
    } else {
        (direct - predicted).abs() / direct.max(predicted)
    };
    Ok(InvarianceCheck {
        lambda,
        direct,
        predicted,
        rel_diff,
    })
}
