use serde::Serialize;

use crate::error::{Error, Result};

/// Ordinary least-squares line `y = intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LineFit> {
    let n = x.len();
    if n != y.len() || n < 2 {
        return Err(Error::DegenerateFit(format!("{n} points")));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    // a perfectly flat series is fitted exactly
    let r_squared = if syy <= 1e-300 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(LineFit {
        slope,
        intercept,
        r_squared,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    /// Beyond the proven range; reported without expectation.
    Exploratory,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Exploratory => "exploratory",
        })
    }
}

/// Minimum coefficient of determination for a usable fit.
pub const MIN_R_SQUARED: f64 = 0.98;
/// Minimum number of converged rows for a fit.
pub const MIN_ROWS: usize = 4;

/// Slope of `log sup|I|` against `log(1/h)` compared with a reference exponent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Exact reference rendered as `p/q` when it is rational.
    #[serde(serialize_with = "crate::scaling::ser_opt_rational")]
    pub reference: Option<num_rational::Rational64>,
    pub reference_value: f64,
    pub tolerance: f64,
    pub rows_used: usize,
    pub verdict: Verdict,
}

impl ExponentFit {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Verdict for a fitted slope.
pub fn judge(slope: f64, r_squared: f64, reference: f64, tolerance: f64) -> Verdict {
    if !(r_squared >= MIN_R_SQUARED) {
        Verdict::Inconclusive
    } else if (slope - reference).abs() <= tolerance {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Fits `log y` against `log(1/h)` over `(h, y)` pairs.
pub fn fit_log_log(
    points: &[(f64, f64)],
    reference: Option<num_rational::Rational64>,
    reference_value: f64,
    tolerance: f64,
) -> ExponentFit {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(h, y)| *h > 0.0 && *y > 0.0 && y.is_finite())
        .map(|&(h, y)| ((1.0 / h).ln(), y.ln()))
        .collect();
    let empty = |n| ExponentFit {
        slope: f64::NAN,
        intercept: f64::NAN,
        r_squared: f64::NAN,
        reference,
        reference_value,
        tolerance,
        rows_used: n,
        verdict: Verdict::Inconclusive,
    };
    if usable.len() < MIN_ROWS {
        return empty(usable.len());
    }
    let (x, y): (Vec<f64>, Vec<f64>) = usable.iter().copied().unzip();
    match linear_fit(&x, &y) {
        Ok(f) => ExponentFit {
            slope: f.slope,
            intercept: f.intercept,
            r_squared: f.r_squared,
            reference,
            reference_value,
            tolerance,
            rows_used: usable.len(),
            verdict: judge(f.slope, f.r_squared, reference_value, tolerance),
        },
        Err(_) => empty(usable.len()),
    }
}
