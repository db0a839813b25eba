//! δ-dependent amplitude families and symbol-class diagnostics.

mod regularity;
mod symbol;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use regularity::{check_delta_regularity_torus, MomentRow, RegularityReport};
pub use symbol::{check_symbol_order, OrderFit, SymbolReport};

fn psi(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth step: 0 for `t ≤ 0`, 1 for `t ≥ 1`.
pub fn smoothstep(t: f64) -> f64 {
    let a = psi(t);
    let b = psi(1.0 - t);
    a / (a + b)
}

/// The fixed cutoff: `χ = 1` on `[−1, 1]`, `χ = 0` outside `(−2, 2)`.
pub fn bump(t: f64) -> f64 {
    smoothstep(2.0 - t.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmplitudeKind {
    FixedBump,
    NarrowBump,
    ModulatedBump,
    FoldSaturatorBelow,
    FoldSaturatorAbove,
    Custom,
}

impl fmt::Display for AmplitudeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AmplitudeKind::FixedBump => "fixed_bump",
            AmplitudeKind::NarrowBump => "narrow_bump",
            AmplitudeKind::ModulatedBump => "modulated_bump",
            AmplitudeKind::FoldSaturatorBelow => "fold_saturator_below",
            AmplitudeKind::FoldSaturatorAbove => "fold_saturator_above",
            AmplitudeKind::Custom => "custom",
        };
        f.write_str(s)
    }
}

type Envelope = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A user-supplied real envelope `g(t, h)` for one axis.
#[derive(Clone)]
pub struct CustomShape {
    pub name: String,
    /// `g(t, h)` where `t` is the offset from the center.
    pub envelope: Envelope,
    /// Support half-width `R(h)`; the envelope is treated as zero beyond it.
    pub radius: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub declared_order: f64,
    /// Length scale exponent used for panel sizing and difference steps.
    pub width_exponent: f64,
}

impl fmt::Debug for CustomShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomShape")
            .field("name", &self.name)
            .field("declared_order", &self.declared_order)
            .finish_non_exhaustive()
    }
}

/// Optional inputs to [`make_amplitude`].
#[derive(Debug, Clone, Default)]
pub struct AmplitudeParams {
    /// Overrides the scale exponent of narrow and modulated bumps.
    pub width_exponent: Option<f64>,
    /// Concentration point in θ, one entry per axis (missing entries are 0).
    pub center: Vec<f64>,
    /// Number of θ axes of the tensor product (default 1).
    pub dim: Option<usize>,
    pub custom: Option<CustomShape>,
}

/// Tensor-product amplitude `a(θ; h) = c(h) Π_i g(θ_i − center_i, h) e^{iψ(θ_i)/h}`.
#[derive(Debug, Clone)]
pub struct AmplitudeProfile {
    kind: AmplitudeKind,
    delta: f64,
    declared_order: f64,
    center: Vec<f64>,
    width_exponent: f64,
    dim: usize,
    custom: Option<CustomShape>,
}

pub fn make_amplitude(
    kind: AmplitudeKind,
    delta: f64,
    params: AmplitudeParams,
) -> Result<AmplitudeProfile> {
    if !(0.0..=1.0).contains(&delta) || delta.is_nan() {
        return Err(Error::param("delta", format!("{delta} is outside [0, 1]")));
    }
    let dim = params.dim.unwrap_or(1);
    if !(1..=2).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    if params.center.len() > dim {
        return Err(Error::param(
            "center",
            format!("{} entries for a {dim}-dimensional amplitude", params.center.len()),
        ));
    }
    if let Some(w) = params.width_exponent {
        if !matches!(kind, AmplitudeKind::NarrowBump | AmplitudeKind::ModulatedBump) {
            return Err(Error::param(
                "width_exponent",
                format!("not adjustable for {kind}"),
            ));
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::param("width_exponent", format!("{w} is outside [0, 1]")));
        }
    }
    let mut center = params.center.clone();
    center.resize(dim, 0.0);
    let (declared_order, width_exponent) = match kind {
        AmplitudeKind::FixedBump => (0.0, 0.0),
        AmplitudeKind::NarrowBump | AmplitudeKind::ModulatedBump => {
            (0.0, params.width_exponent.unwrap_or(delta))
        }
        AmplitudeKind::FoldSaturatorBelow => (0.0, delta),
        AmplitudeKind::FoldSaturatorAbove => ((3.0 - delta) / 4.0, (1.0 - delta) / 2.0),
        AmplitudeKind::Custom => {
            let c = params
                .custom
                .as_ref()
                .ok_or_else(|| Error::param("custom", "custom kind needs a shape"))?;
            (c.declared_order, c.width_exponent)
        }
    };
    if matches!(
        kind,
        AmplitudeKind::FoldSaturatorBelow | AmplitudeKind::FoldSaturatorAbove
    ) && dim != 1
    {
        return Err(Error::param("dim", "fold saturators are one-dimensional"));
    }
    Ok(AmplitudeProfile {
        kind,
        delta,
        declared_order,
        center,
        width_exponent,
        dim,
        custom: if kind == AmplitudeKind::Custom {
            params.custom
        } else {
            None
        },
    })
}

impl AmplitudeProfile {
    pub fn fixed(dim: usize) -> Self {
        make_amplitude(
            AmplitudeKind::FixedBump,
            0.0,
            AmplitudeParams {
                dim: Some(dim),
                ..Default::default()
            },
        )
        .expect("valid")
    }

    pub fn narrow(delta: f64, dim: usize) -> Result<Self> {
        make_amplitude(
            AmplitudeKind::NarrowBump,
            delta,
            AmplitudeParams {
                dim: Some(dim),
                ..Default::default()
            },
        )
    }

    /// `h^{−δ/2} e^{−θ²/h^{2δ}}`, truncated at `|θ| = 4h^δ`.
    pub fn gaussian(delta: f64) -> Result<Self> {
        let shape = CustomShape {
            name: "gaussian".into(),
            envelope: Arc::new(move |t, h| {
                let w = h.powf(delta);
                h.powf(-delta / 2.0) * (-(t / w).powi(2)).exp()
            }),
            radius: Arc::new(move |h| 4.0 * h.powf(delta)),
            declared_order: delta / 2.0,
            width_exponent: delta,
        };
        make_amplitude(
            AmplitudeKind::Custom,
            delta,
            AmplitudeParams {
                custom: Some(shape),
                ..Default::default()
            },
        )
    }

    /// The identically vanishing amplitude.
    pub fn zero(dim: usize) -> Self {
        let shape = CustomShape {
            name: "zero".into(),
            envelope: Arc::new(|_, _| 0.0),
            radius: Arc::new(|_| 2.0),
            declared_order: 0.0,
            width_exponent: 0.0,
        };
        make_amplitude(
            AmplitudeKind::Custom,
            0.0,
            AmplitudeParams {
                dim: Some(dim),
                custom: Some(shape),
                ..Default::default()
            },
        )
        .expect("valid")
    }

    pub fn kind(&self) -> AmplitudeKind {
        self.kind
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn declared_order(&self) -> f64 {
        self.declared_order
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn width_exponent(&self) -> f64 {
        self.width_exponent
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Name of the custom shape, if any.
    pub fn custom_name(&self) -> Option<&str> {
        self.custom.as_ref().map(|c| c.name.as_str())
    }

    pub fn is_identically_zero(&self) -> bool {
        self.custom_name() == Some("zero")
    }

    /// Length scale `h^{width_exponent}`.
    pub fn scale(&self, h: f64) -> f64 {
        h.powf(self.width_exponent)
    }

    /// Overall factor `c(h)` applied once to the tensor product.
    pub fn prefactor(&self, h: f64) -> f64 {
        match self.kind {
            AmplitudeKind::FoldSaturatorAbove => h.powf((self.delta - 3.0) / 4.0),
            _ => 1.0,
        }
    }

    /// Half-width of the support on each axis.
    pub fn radius(&self, h: f64) -> f64 {
        match &self.custom {
            Some(c) => (c.radius)(h),
            None => 2.0 * self.scale(h),
        }
    }

    /// Support interval on `axis`.
    pub fn support(&self, axis: usize, h: f64) -> (f64, f64) {
        let c = self.center[axis];
        let r = self.radius(h);
        (c - r, c + r)
    }

    /// Points where the envelope stops being analytic (plateau edges and
    /// support ends), sorted.
    pub fn breakpoints(&self, axis: usize, h: f64) -> Vec<f64> {
        let c = self.center[axis];
        let r = self.radius(h);
        match self.kind {
            AmplitudeKind::Custom => vec![c - r, c + r],
            _ => {
                let s = self.scale(h);
                vec![c - 2.0 * s, c - s, c + s, c + 2.0 * s]
            }
        }
    }

    /// Real envelope `g` on one axis at absolute coordinate `t`.
    #[inline]
    pub fn envelope(&self, axis: usize, t: f64, h: f64) -> f64 {
        let u = t - self.center[axis];
        match &self.custom {
            Some(c) => {
                if u.abs() > (c.radius)(h) {
                    0.0
                } else {
                    (c.envelope)(u, h)
                }
            }
            None => bump(u / self.scale(h)),
        }
    }

    /// Polynomial phase carried by the amplitude on one axis, as
    /// `(coefficient, power)` pairs of `ψ` in `e^{iψ(θ)/h}`.
    pub fn phase_terms(&self, h: f64) -> Vec<(f64, usize)> {
        match self.kind {
            AmplitudeKind::ModulatedBump => vec![(h.powf(1.0 - self.width_exponent), 1)],
            AmplitudeKind::FoldSaturatorAbove => vec![(1.0 / 3.0, 3)],
            _ => Vec::new(),
        }
    }

    /// Full complex value `a(x, θ; h)`.
    pub fn eval(&self, _x: &[f64], theta: &[f64], h: f64) -> Complex64 {
        let mut g = self.prefactor(h);
        let mut psi = 0.0;
        let terms = self.phase_terms(h);
        for (axis, &t) in theta.iter().enumerate().take(self.dim) {
            g *= self.envelope(axis, t, h);
            for &(c, p) in &terms {
                psi += c * t.powi(p as i32);
            }
        }
        if g == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(g, psi / h)
    }

    /// One-axis value `a_1(t; h)` including the prefactor; the tensor product
    /// of these (with the prefactor taken once) is [`eval`](Self::eval).
    pub fn eval_axis(&self, t: f64, h: f64) -> Complex64 {
        let g = self.prefactor(h) * self.envelope(0, t, h);
        let psi: f64 = self
            .phase_terms(h)
            .iter()
            .map(|&(c, p)| c * t.powi(p as i32))
            .sum();
        Complex64::from_polar(g, psi / h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_plateau_and_support() {
        assert_eq!(bump(0.0), 1.0);
        assert_eq!(bump(1.0), 1.0);
        assert_eq!(bump(-0.999), 1.0);
        assert_eq!(bump(2.0), 0.0);
        assert_eq!(bump(-3.0), 0.0);
        assert!(bump(1.5) > 0.0 && bump(1.5) < 1.0);
        assert!((bump(1.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(make_amplitude(AmplitudeKind::NarrowBump, 1.5, Default::default()).is_err());
        assert!(make_amplitude(AmplitudeKind::Custom, 0.5, Default::default()).is_err());
        let p = AmplitudeParams {
            width_exponent: Some(0.2),
            ..Default::default()
        };
        assert!(make_amplitude(AmplitudeKind::FixedBump, 0.5, p).is_err());
    }

    #[test]
    fn above_saturator_peak() {
        let a = make_amplitude(AmplitudeKind::FoldSaturatorAbove, 0.5, Default::default()).unwrap();
        let v = a.eval(&[0.0], &[0.0], 1e-4).norm();
        assert!((v / 10f64.powf(2.5) - 1.0).abs() < 1e-12);
    }
}
