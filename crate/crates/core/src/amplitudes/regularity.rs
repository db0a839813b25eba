use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub const MOMENT_ORDERS: [u32; 4] = [1, 2, 4, 8];

/// Weighted moments `Σ [h^δ |α − ω/h|]^N |a_α|²` at one `h`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentRow {
    pub h: f64,
    pub moments: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityReport {
    pub delta: f64,
    pub bound: f64,
    pub orders: Vec<u32>,
    pub rows: Vec<MomentRow>,
    /// Largest moment over the h-grid, per order.
    pub max_moment: Vec<f64>,
    /// Whether each order stays below `bound` across the grid.
    pub bounded: Vec<bool>,
}

impl RegularityReport {
    pub fn all_bounded(&self) -> bool {
        self.bounded.iter().all(|&b| b)
    }
}

/// Checks the weighted-coefficient criterion for δ-regularity of a family of
/// torus sums `Σ a_α e_α`, one coefficient list per `h`.
pub fn check_delta_regularity_torus(
    family: &[(f64, Vec<(Vec<i64>, Complex64)>)],
    delta: f64,
    omega: &[f64],
    bound: f64,
) -> Result<RegularityReport> {
    let mut rows = Vec::with_capacity(family.len());
    for (h, coeffs) in family {
        let h = *h;
        if !(h > 0.0) {
            return Err(Error::param("h", format!("{h} must be positive")));
        }
        let norm: f64 = coeffs.iter().map(|(_, a)| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(norm));
        }
        let mut moments = vec![0.0; MOMENT_ORDERS.len()];
        for (alpha, a) in coeffs {
            if alpha.len() != omega.len() {
                return Err(Error::param(
                    "coeffs",
                    format!("lattice point of dimension {} vs omega {}", alpha.len(), omega.len()),
                ));
            }
            let dist = alpha
                .iter()
                .zip(omega)
                .map(|(&ai, &wi)| (ai as f64 - wi / h).powi(2))
                .sum::<f64>()
                .sqrt();
            let w = h.powf(delta) * dist;
            for (m, &n) in moments.iter_mut().zip(&MOMENT_ORDERS) {
                *m += w.powi(n as i32) * a.norm_sqr();
            }
        }
        rows.push(MomentRow { h, moments });
    }
    let max_moment: Vec<f64> = (0..MOMENT_ORDERS.len())
        .map(|i| rows.iter().map(|r| r.moments[i]).fold(0.0, f64::max))
        .collect();
    let bounded = max_moment.iter().map(|&m| m <= bound).collect();
    Ok(RegularityReport {
        delta,
        bound,
        orders: MOMENT_ORDERS.to_vec(),
        rows,
        max_moment,
        bounded,
    })
}
