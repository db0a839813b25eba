//! Semiclassical oscillatory integrals `I(x; h) = h^{−k/2} ∫ a(x, θ; h) e^{iφ(x, θ)/h} dθ`.
//!
//! The engine integrates over tensor Gauss–Legendre panels whose widths are
//! set from a rigorous bound on the phase gradient over each panel, then
//! refines (first in rule order, then by splitting every panel) until two
//! successive levels agree.

mod cis;
mod oracles;
mod rules;

use num_complex::Complex64;
use serde::Serialize;

use crate::amplitudes::AmplitudeProfile;
use crate::catalog::{PhaseFunction, Poly1, ThetaPoly};
use crate::error::{Error, Result};

pub use oracles::{closed_form_oracle, m_alpha, weighted_cauchy, OracleName};
pub use rules::{gauss_legendre, integrate_real, RealQuad};

/// Maximum phase change across a base panel, per axis (six periods).
pub const SPAN: f64 = 12.0 * std::f64::consts::PI;

/// Default evaluation budgets.
pub const BUDGET_1D: u64 = 1 << 22;
pub const BUDGET_2D: u64 = 1 << 29;

const MAX_LEVELS: u32 = 8;

#[derive(Debug, Clone)]
pub struct IntegralSpec {
    pub phase: PhaseFunction,
    pub amplitude: AmplitudeProfile,
    pub x: Vec<f64>,
    pub h: f64,
    pub rel_tol: f64,
    /// Whether the `h^{−k/2}` normalization is applied.
    pub includes_prefactor: bool,
    /// Evaluation budget; `None` selects the per-dimension default.
    pub budget: Option<u64>,
}

impl IntegralSpec {
    pub fn new(phase: PhaseFunction, amplitude: AmplitudeProfile, x: Vec<f64>, h: f64) -> Self {
        Self {
            phase,
            amplitude,
            x,
            h,
            rel_tol: 1e-8,
            includes_prefactor: true,
            budget: None,
        }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_prefactor(mut self, on: bool) -> Self {
        self.includes_prefactor = on;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn with_x(mut self, x: Vec<f64>) -> Self {
        self.x = x;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.phase.k();
        if !(1..=2).contains(&k) {
            return Err(Error::UnsupportedDimension(k));
        }
        if !(self.h > 0.0 && self.h < 1.0) {
            return Err(Error::param("h", format!("{} is outside (0, 1)", self.h)));
        }
        if !(1e-10..=1e-3).contains(&self.rel_tol) {
            return Err(Error::param(
                "rel_tol",
                format!("{} is outside [1e-10, 1e-3]", self.rel_tol),
            ));
        }
        if self.x.len() != self.phase.k0() {
            return Err(Error::param(
                "x",
                format!("length {} but the phase has k0 = {}", self.x.len(), self.phase.k0()),
            ));
        }
        if self.amplitude.dim() != k {
            return Err(Error::param(
                "amplitude",
                format!("dimension {} but the phase has k = {k}", self.amplitude.dim()),
            ));
        }
        Ok(())
    }

    fn default_budget(&self) -> u64 {
        self.budget.unwrap_or(if self.phase.k() == 1 {
            BUDGET_1D
        } else {
            BUDGET_2D
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegralResult {
    #[serde(skip)]
    pub value: Complex64,
    pub abs_value: f64,
    pub est_error: f64,
    pub panels_used: u64,
    pub evaluations: u64,
    pub levels: u32,
    pub converged: bool,
}

impl IntegralResult {
    fn zero() -> Self {
        Self {
            value: Complex64::new(0.0, 0.0),
            abs_value: 0.0,
            est_error: 0.0,
            panels_used: 0,
            evaluations: 0,
            levels: 0,
            converged: true,
        }
    }

    fn scaled(mut self, s: f64) -> Self {
        self.value *= s;
        self.abs_value = self.value.norm();
        self.est_error *= s.abs();
        self
    }
}

/// Evaluates the integral directly in θ.
pub fn evaluate(spec: &IntegralSpec) -> Result<IntegralResult> {
    evaluate_rescaled(spec, 1.0)
}

/// Evaluates the same integral after `θ = λ^r η`, `x = λ^{1−s} y`, i.e. as
/// `λ^{|r|} h^{−k/2} ∫ a(x, λ^r η) e^{i(λ/h) φ(y, η)} dη`.
pub fn evaluate_rescaled(spec: &IntegralSpec, lambda: f64) -> Result<IntegralResult> {
    let kernel = rescaled_kernel(spec, lambda)?;
    let gain = rescaled_gain(spec, lambda);
    Ok(kernel.scaled(gain))
}

/// `λ^{|r|}` times the `h^{−k/2}` normalization when requested.
pub fn rescaled_gain(spec: &IntegralSpec, lambda: f64) -> f64 {
    let k = spec.phase.k() as f64;
    let r_sum: f64 = spec.phase.homogeneity().r_f64().iter().sum();
    let jac = if lambda == 1.0 { 1.0 } else { lambda.powf(r_sum) };
    let pre = if spec.includes_prefactor {
        spec.h.powf(-k / 2.0)
    } else {
        1.0
    };
    jac * pre
}

/// The bare rescaled integral `K = ∫ a(x, λ^r η) e^{i(λ/h) φ(y, η)} dη`.
pub fn rescaled_kernel(spec: &IntegralSpec, lambda: f64) -> Result<IntegralResult> {
    spec.validate()?;
    if !(lambda >= spec.h && lambda <= 1.0) {
        return Err(Error::param(
            "lambda",
            format!("{lambda} is outside [h, 1] = [{}, 1]", spec.h),
        ));
    }
    if spec.amplitude.is_identically_zero() {
        return Ok(IntegralResult::zero());
    }
    let prob = Problem::build(spec, lambda);
    Ok(prob.run(spec.rel_tol, spec.default_budget()))
}

struct Axis {
    lo: f64,
    hi: f64,
    breaks: Vec<f64>,
    max_width: f64,
    /// `λ^{r_i}`: η ↦ θ conversion factor.
    stretch: f64,
}

struct Problem<'a> {
    amp: &'a AmplitudeProfile,
    h: f64,
    freq: f64,
    poly: ThetaPoly,
    grads: Vec<ThetaPoly>,
    axes: Vec<Axis>,
    gain: f64,
}

impl<'a> Problem<'a> {
    fn build(spec: &'a IntegralSpec, lambda: f64) -> Self {
        let hom = spec.phase.homogeneity();
        let k = spec.phase.k();
        let (r, s) = (hom.r_f64(), hom.s_f64());
        let unit = lambda == 1.0;
        let y: Vec<f64> = if unit {
            spec.x.clone()
        } else {
            spec.x
                .iter()
                .zip(&s)
                .map(|(xj, sj)| xj / lambda.powf(1.0 - sj))
                .collect()
        };
        let stretch: Vec<f64> = r
            .iter()
            .map(|&ri| if unit { 1.0 } else { lambda.powf(ri) })
            .collect();
        let mut poly = spec.phase.collapse(&y);
        let terms = spec.amplitude.phase_terms(spec.h);
        if !terms.is_empty() {
            let mut d1 = poly.deg1();
            let mut d2 = poly.deg2();
            let maxp = terms.iter().map(|t| t.1).max().unwrap_or(0);
            d1 = d1.max(maxp);
            if k == 2 {
                d2 = d2.max(maxp);
            }
            let mut grown = ThetaPoly::zeros(d1, d2);
            for p in 0..=poly.deg1() {
                for q in 0..=poly.deg2() {
                    grown.add_monomial(poly.coeff(p, q), p, q);
                }
            }
            for &(c, p) in &terms {
                for (axis, st) in stretch.iter().enumerate() {
                    let coeff = if unit { c } else { c * st.powi(p as i32) / lambda };
                    if axis == 0 {
                        grown.add_monomial(coeff, p, 0);
                    } else {
                        grown.add_monomial(coeff, 0, p);
                    }
                }
            }
            poly = grown;
        }
        let grads = (0..k).map(|i| poly.partial(i)).collect();
        let scale = spec.amplitude.scale(spec.h);
        let axes = (0..k)
            .map(|i| {
                let (lo, hi) = spec.amplitude.support(i, spec.h);
                let st = stretch[i];
                Axis {
                    lo: lo / st,
                    hi: hi / st,
                    breaks: spec
                        .amplitude
                        .breakpoints(i, spec.h)
                        .into_iter()
                        .map(|b| b / st)
                        .collect(),
                    max_width: 0.25 * scale / st,
                    stretch: st,
                }
            })
            .collect();
        Problem {
            amp: &spec.amplitude,
            h: spec.h,
            freq: lambda / spec.h,
            poly,
            grads,
            axes,
            gain: spec.amplitude.prefactor(spec.h),
        }
    }

    #[inline]
    fn env(&self, axis: usize, eta: f64) -> f64 {
        self.amp.envelope(axis, eta * self.axes[axis].stretch, self.h)
    }

    fn segments(axis: &Axis) -> Vec<(f64, f64)> {
        let mut pts = vec![axis.lo, axis.hi];
        pts.extend(axis.breaks.iter().copied().filter(|&b| b > axis.lo && b < axis.hi));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Greedy panel partition of `segments`, where `bound(c, r)` bounds the
    /// phase derivative on `[c − r, c + r]`.
    fn schedule(
        &self,
        segments: &[(f64, f64)],
        max_width: f64,
        span: f64,
        bound: &dyn Fn(f64, f64) -> f64,
    ) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for &(a0, b0) in segments {
            let mut a = a0;
            while a < b0 {
                let rest = b0 - a;
                let mut w = max_width.min(rest);
                for _ in 0..60 {
                    let rate = self.freq * bound(a + 0.5 * w, 0.5 * w);
                    if rate * w <= span {
                        break;
                    }
                    w = (0.5 * w).min(0.95 * span / rate);
                }
                // avoid a sliver at the end of the segment
                if rest - w < 0.05 * w {
                    w = rest;
                }
                let b = if w >= rest { b0 } else { a + w };
                out.push((a, b));
                a = b;
            }
        }
        out
    }

    fn run(&self, rel_tol: f64, budget: u64) -> IntegralResult {
        if self.axes.len() == 1 {
            self.run_1d(rel_tol, budget)
        } else {
            self.run_2d(rel_tol, budget)
        }
    }

    /// Base panels on one axis for the univariate phase `phase` (unscaled),
    /// with the phase pre-multiplied by the frequency.
    fn axis_plan(&self, axis: usize, phase: &Poly1) -> (Vec<(f64, f64)>, Poly1) {
        let ax = &self.axes[axis];
        let deriv = phase.derivative();
        let base = self.schedule(&Self::segments(ax), ax.max_width, SPAN, &|c, r| {
            deriv.bound_abs(c, r)
        });
        let scaled = Poly1::new(phase.c.iter().map(|v| v * self.freq).collect());
        (base, scaled)
    }

    fn axis_level_sum(
        &self,
        axis: usize,
        base: &[(f64, f64)],
        phase: &Poly1,
        level: u32,
    ) -> (Complex64, f64) {
        let ((nodes, weights), parts) = level_rule(level);
        let mut buf = Buffers::default();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut l1 = 0.0;
        for &(a, b) in base {
            buf.axis_nodes(self, axis, a, b, parts, nodes, weights);
            l1 += buf.w.iter().map(|v| v.abs()).sum::<f64>();
            let (re, im) = buf.row_sum(&phase.c);
            acc += Complex64::new(re, im);
        }
        (acc, l1)
    }

    fn run_1d(&self, rel_tol: f64, budget: u64) -> IntegralResult {
        let (base, phase) = self.axis_plan(0, &self.poly.restrict_row(0.0));
        self.refine(base.len() as u64, 1, rel_tol, budget, |level| {
            self.axis_level_sum(0, &base, &phase, level)
        })
    }

    /// `P(θ₁, θ₂) = A(θ₁) + B(θ₂)` when there are no mixed monomials; the
    /// integral then factors into two one-dimensional ones.
    fn split_phase(&self) -> Option<(Poly1, Poly1)> {
        let p = &self.poly;
        let mut a = vec![0.0; p.deg1() + 1];
        let mut b = vec![0.0; p.deg2() + 1];
        for i in 0..=p.deg1() {
            for j in 0..=p.deg2() {
                let c = p.coeff(i, j);
                match (i, j) {
                    (_, 0) => a[i] += c,
                    (0, _) => b[j] += c,
                    _ if c != 0.0 => return None,
                    _ => {}
                }
            }
        }
        Some((Poly1::new(a), Poly1::new(b)))
    }

    fn run_separable(&self, pa: Poly1, pb: Poly1, rel_tol: f64, budget: u64) -> IntegralResult {
        let (base_a, pa) = self.axis_plan(0, &pa);
        let (base_b, pb) = self.axis_plan(1, &pb);
        let panels = (base_a.len() + base_b.len()) as u64;
        self.refine(panels, 1, rel_tol, budget, |level| {
            let (sa, la) = self.axis_level_sum(0, &base_a, &pa, level);
            let (sb, lb) = self.axis_level_sum(1, &base_b, &pb, level);
            (sa * sb, la * lb)
        })
    }

    /// Splits the support into boxes on which the phase changes by at most
    /// `SPAN` along each axis and the envelope is resolved.
    fn boxes_2d(&self) -> Vec<[f64; 4]> {
        let (ax1, ax2) = (&self.axes[0], &self.axes[1]);
        let (g1, g2) = (&self.grads[0], &self.grads[1]);
        let mut stack: Vec<[f64; 4]> = Vec::new();
        for &(a2, b2) in Self::segments(ax2).iter().rev() {
            for &(a1, b1) in Self::segments(ax1).iter().rev() {
                stack.push([a1, b1, a2, b2]);
            }
        }
        let mut out = Vec::new();
        while let Some(bx) = stack.pop() {
            let [a1, b1, a2, b2] = bx;
            let (c1, r1, c2, r2) = (0.5 * (a1 + b1), 0.5 * (b1 - a1), 0.5 * (a2 + b2), 0.5 * (b2 - a2));
            let v1 = (self.freq * g1.bound_abs(c1, r1, c2, r2) * 2.0 * r1 / SPAN)
                .max(2.0 * r1 / ax1.max_width);
            let v2 = (self.freq * g2.bound_abs(c1, r1, c2, r2) * 2.0 * r2 / SPAN)
                .max(2.0 * r2 / ax2.max_width);
            if v1 <= 1.0 && v2 <= 1.0 {
                out.push(bx);
                continue;
            }
            // split the worse axis into just enough equal pieces
            let (axis, v) = if v1 >= v2 { (0, v1) } else { (1, v2) };
            let pieces = (v.ceil() as usize).clamp(2, 64);
            let (lo, hi) = if axis == 0 { (a1, b1) } else { (a2, b2) };
            let step = (hi - lo) / pieces as f64;
            for i in (0..pieces).rev() {
                let p0 = lo + step * i as f64;
                let p1 = if i + 1 == pieces { hi } else { lo + step * (i + 1) as f64 };
                stack.push(if axis == 0 { [p0, p1, a2, b2] } else { [a1, b1, p0, p1] });
            }
        }
        out
    }

    fn run_2d(&self, rel_tol: f64, budget: u64) -> IntegralResult {
        if let Some((pa, pb)) = self.split_phase() {
            return self.run_separable(pa, pb, rel_tol, budget);
        }
        let boxes = self.boxes_2d();
        let mut poly = self.poly.clone();
        poly.scale(self.freq);
        let level_sum = |level: u32| -> (Complex64, f64) {
            let ((nodes, weights), parts) = level_rule(level);
            let mut inner = Buffers::default();
            let mut outer = Buffers::default();
            let mut row = vec![0.0; poly.deg1() + 1];
            let mut acc = Complex64::new(0.0, 0.0);
            let mut l1 = 0.0;
            let mut grid = Buffers::default();
            for &[a1, b1, a2, b2] in &boxes {
                inner.axis_nodes(self, 0, a1, b1, parts, nodes, weights);
                if inner.t.is_empty() {
                    continue;
                }
                outer.axis_nodes(self, 1, a2, b2, parts, nodes, weights);
                // evaluate the whole tensor grid in one batch
                let n1 = inner.t.len();
                grid.phase.clear();
                grid.w.clear();
                for (&t2, &w2) in outer.t.iter().zip(&outer.w) {
                    poly.restrict_row_into(t2, &mut row);
                    let start = grid.phase.len();
                    grid.phase.resize(start + n1, row[row.len() - 1]);
                    let seg = &mut grid.phase[start..];
                    for &ck in row[..row.len() - 1].iter().rev() {
                        for (v, &t) in seg.iter_mut().zip(&inner.t) {
                            *v = *v * t + ck;
                        }
                    }
                    grid.w.extend(inner.w.iter().map(|&w1| w1 * w2));
                }
                l1 += grid.w.iter().map(|v| v.abs()).sum::<f64>();
                let (re, im) = grid.cis_sum();
                acc += Complex64::new(re, im);
            }
            (acc, l1)
        };
        self.refine(boxes.len() as u64, 2, rel_tol, budget, level_sum)
    }

    /// Runs levels 0, 1, … until two successive levels agree to `rel_tol`.
    fn refine(
        &self,
        base_panels: u64,
        dim: u32,
        rel_tol: f64,
        budget: u64,
        level_sum: impl Fn(u32) -> (Complex64, f64),
    ) -> IntegralResult {
        let cost = |level: u32| {
            let ((nodes, _), parts) = level_rule(level);
            base_panels * ((nodes.len() * parts as usize) as u64).pow(dim)
        };
        let panels = |level: u32| base_panels * (level_rule(level).1 as u64).pow(dim);
        let (mut prev, l1) = level_sum(0);
        let mut spent = cost(0);
        let mut est = f64::INFINITY;
        let mut converged = false;
        let mut level = 0;
        // relative test with a floor tied to the integrand's L1 mass, so that
        // integrals cancelling to rounding level still terminate
        let floor = 1e-6 * l1;
        let rounding = 1e-13 * l1;
        while level < MAX_LEVELS {
            let next = cost(level + 1);
            if spent + next > budget {
                break;
            }
            level += 1;
            let (cur, _) = level_sum(level);
            spent += next;
            est = (cur - prev).norm();
            prev = cur;
            if est <= (rel_tol * cur.norm().max(floor)).max(rounding) {
                converged = true;
                break;
            }
        }
        let value = prev * self.gain;
        IntegralResult {
            value,
            abs_value: value.norm(),
            est_error: est * self.gain.abs(),
            panels_used: panels(level),
            evaluations: spent,
            levels: level,
            converged,
        }
    }
}

/// Scratch space for one axis of a panel: nodes, weights times envelope, and
/// the phase and `cis` values along them.
#[derive(Default)]
struct Buffers {
    t: Vec<f64>,
    w: Vec<f64>,
    phase: Vec<f64>,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Buffers {
    /// Nodes of `[a, b]` split into `parts` sub-panels, skipping points where
    /// the envelope vanishes.
    #[allow(clippy::too_many_arguments)]
    fn axis_nodes(
        &mut self,
        prob: &Problem<'_>,
        axis: usize,
        a: f64,
        b: f64,
        parts: u32,
        nodes: &[f64],
        weights: &[f64],
    ) {
        self.t.clear();
        self.w.clear();
        let w = (b - a) / parts as f64;
        for p in 0..parts {
            let c = a + w * (p as f64 + 0.5);
            let hw = 0.5 * w;
            for (x, wt) in nodes.iter().zip(weights) {
                let eta = c + hw * x;
                let g = prob.env(axis, eta);
                if g != 0.0 {
                    self.t.push(eta);
                    self.w.push(g * wt * hw);
                }
            }
        }
    }

    /// `Σ w_i e^{i P(t_i)}` for the univariate polynomial with coefficients `c`.
    fn row_sum(&mut self, c: &[f64]) -> (f64, f64) {
        let n = self.t.len();
        self.phase.clear();
        self.phase.resize(n, c[c.len() - 1]);
        for &ck in c[..c.len() - 1].iter().rev() {
            for (v, &t) in self.phase.iter_mut().zip(&self.t) {
                *v = *v * t + ck;
            }
        }
        self.cis_sum()
    }

    /// `Σ w_i e^{i phase_i}` over the filled buffers.
    fn cis_sum(&mut self) -> (f64, f64) {
        let n = self.phase.len();
        self.re.resize(n, 0.0);
        self.im.resize(n, 0.0);
        cis::sin_cos_slice(&self.phase, &mut self.re, &mut self.im);
        cis::weighted_sums(&self.w, &self.re, &self.im)
    }
}

/// Level 0 uses the coarse rule on the base panels, level 1 the fine rule on
/// the same panels, and level `ℓ ≥ 2` the fine rule on `2^{ℓ−1}` sub-panels
/// per axis.
fn level_rule(level: u32) -> (&'static (Vec<f64>, Vec<f64>), u32) {
    match level {
        0 => (rules::coarse_rule(), 1),
        l => (rules::fine_rule(), 1 << (l - 1)),
    }
}

