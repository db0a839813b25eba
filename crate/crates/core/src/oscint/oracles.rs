use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleName {
    MAlpha,
    WeightedCauchy,
}

/// `∫ dη / ((η² + α)² + 1) = −π Im (α + i)^{−1/2}`, by partial fractions in
/// `η² + α ∓ i`. At `α = 0` this is `π/√2`, where real and imaginary parts of
/// `i^{−1/2}` have equal size.
pub fn m_alpha(alpha: f64) -> f64 {
    -std::f64::consts::PI * Complex64::new(alpha, 1.0).powf(-0.5).im
}

/// `∫ |θ| / ((x − θ²)² + ε²) dθ = ε^{−1} (π/2 + arctan(x/ε))`.
pub fn weighted_cauchy(x: f64, eps: f64) -> f64 {
    (std::f64::consts::FRAC_PI_2 + (x / eps).atan()) / eps
}

/// Closed forms by name: `m_alpha` takes `[α]`, `weighted_cauchy` takes `[x, ε]`.
pub fn closed_form_oracle(name: OracleName, params: &[f64]) -> Result<f64> {
    match (name, params) {
        (OracleName::MAlpha, [a]) => Ok(m_alpha(*a)),
        (OracleName::WeightedCauchy, [x, eps]) => {
            if *eps > 0.0 {
                Ok(weighted_cauchy(*x, *eps))
            } else {
                Err(Error::param("eps", "must be positive"))
            }
        }
        (OracleName::MAlpha, _) => Err(Error::param("params", "m_alpha takes one value")),
        (OracleName::WeightedCauchy, _) => {
            Err(Error::param("params", "weighted_cauchy takes two values"))
        }
    }
}
