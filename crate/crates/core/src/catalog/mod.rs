//! Stable simple singularities: normal forms, weights, orders and thresholds.

mod dag;
pub mod poly;
mod types;

use std::fmt::Write as _;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::Serialize;

pub use dag::{dag_min_homogeneity, subordinates, SubordinationDag};
pub use poly::{Monomial, Poly1, ThetaPoly};
pub use types::{Family, Sign, SingularityType};

fn q(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// Weights of the quasi-homogeneous scaling `φ(λ^{1−s}x, λ^r θ) = λ φ(x, θ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomogeneityProfile {
    #[serde(serialize_with = "ser_rationals")]
    pub r: Vec<Rational64>,
    #[serde(serialize_with = "ser_rationals")]
    pub s: Vec<Rational64>,
    pub k: usize,
    pub k0: usize,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

impl HomogeneityProfile {
    pub fn r_f64(&self) -> Vec<f64> {
        self.r.iter().map(|v| v.to_f64().unwrap()).collect()
    }

    pub fn s_f64(&self) -> Vec<f64> {
        self.s.iter().map(|v| v.to_f64().unwrap()).collect()
    }

    /// `|r| = Σ r_j`.
    pub fn r_sum(&self) -> Rational64 {
        self.r.iter().copied().sum()
    }
}

/// `φ(x, θ) = Σ_j x_j f_j(θ) + c·f(θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFunction {
    singularity: SingularityType,
    profile: HomogeneityProfile,
    f: Vec<Monomial>,
    fj: Vec<Monomial>,
}

impl PhaseFunction {
    pub fn singularity(&self) -> SingularityType {
        self.singularity
    }

    pub fn homogeneity(&self) -> &HomogeneityProfile {
        &self.profile
    }

    pub fn k(&self) -> usize {
        self.profile.k
    }

    pub fn k0(&self) -> usize {
        self.profile.k0
    }

    /// Monomials of the germ `f`.
    pub fn germ(&self) -> &[Monomial] {
        &self.f
    }

    /// The unfolding monomials `f_1, …, f_{k₀}` (each a single monomial).
    pub fn unfolding(&self) -> &[Monomial] {
        &self.fj
    }

    pub fn eval(&self, x: &[f64], theta: &[f64]) -> f64 {
        let mut v = poly::eval_sum(&self.f, theta);
        for (xj, m) in x.iter().zip(&self.fj) {
            v += xj * m.eval(theta);
        }
        v
    }

    pub fn grad_theta(&self, x: &[f64], theta: &[f64]) -> Vec<f64> {
        (0..self.k())
            .map(|i| {
                let mut v: f64 = self.f.iter().map(|m| m.eval_partial(i, theta)).sum();
                for (xj, m) in x.iter().zip(&self.fj) {
                    v += xj * m.eval_partial(i, theta);
                }
                v
            })
            .collect()
    }

    /// `∂φ/∂x_j = f_j(θ)`.
    pub fn grad_x(&self, theta: &[f64]) -> Vec<f64> {
        self.fj.iter().map(|m| m.eval(theta)).collect()
    }

    /// Multiplies the germ `f` by `c` (keeps the weights). `c = −1` flips the
    /// sign of the normal form.
    pub fn with_germ_scaled(&self, c: Rational64) -> PhaseFunction {
        let mut out = self.clone();
        for m in &mut out.f {
            m.coeff *= c;
        }
        out
    }

    fn degrees(&self) -> (usize, usize) {
        let all = self.f.iter().chain(&self.fj);
        let d1 = all.clone().map(|m| m.exps[0]).max().unwrap_or(0) as usize;
        let d2 = all.map(|m| m.exps[1]).max().unwrap_or(0) as usize;
        (d1, d2)
    }

    /// Dense polynomial in θ of `φ(x, ·)` for a fixed base point.
    pub fn collapse(&self, x: &[f64]) -> ThetaPoly {
        let (d1, d2) = self.degrees();
        let mut p = ThetaPoly::zeros(d1, d2);
        for m in &self.f {
            p.add_monomial(m.coeff.to_f64().unwrap(), m.exps[0] as usize, m.exps[1] as usize);
        }
        for (xj, m) in x.iter().zip(&self.fj) {
            p.add_monomial(
                xj * m.coeff.to_f64().unwrap(),
                m.exps[0] as usize,
                m.exps[1] as usize,
            );
        }
        p
    }

    /// Whether `∇_θ f` vanishes at `θ` up to `tol`.
    pub fn germ_critical(&self, theta: &[f64], tol: f64) -> bool {
        let zero = vec![0.0; self.k0()];
        self.grad_theta(&zero, theta).iter().all(|g| g.abs() <= tol)
    }
}

fn mono(c: i64, e1: u32, e2: u32) -> Monomial {
    Monomial::new(c, e1, e2)
}

/// Normal form with the minimal number of phase variables.
pub fn build_phase(t: SingularityType) -> PhaseFunction {
    let sg = t.sign().as_i64();
    let m = t.index();
    let (r, f, fj): (Vec<Rational64>, Vec<Monomial>, Vec<Monomial>) = match t.family() {
        Family::A => (
            vec![q(1, m as i64 + 2)],
            vec![mono(sg, m + 2, 0)],
            (1..=m).map(|j| mono(1, j, 0)).collect(),
        ),
        Family::D | Family::DMinus | Family::DPlus => {
            let mi = m as i64;
            let mut fj = vec![mono(1, 1, 0)];
            fj.extend((1..m).map(|j| mono(1, 0, j)));
            (
                vec![q(1, 2) - q(1, 2 * mi), q(1, mi)],
                vec![mono(1, 2, 1), mono(sg, 0, m)],
                fj,
            )
        }
        Family::E => match m {
            6 => (
                vec![q(1, 3), q(1, 4)],
                vec![mono(1, 3, 0), mono(sg, 0, 4)],
                vec![mono(1, 1, 0), mono(1, 0, 1), mono(1, 0, 2), mono(1, 1, 1), mono(1, 1, 2)],
            ),
            7 => (
                vec![q(1, 3), q(2, 9)],
                vec![mono(1, 3, 0), mono(1, 1, 3)],
                vec![
                    mono(1, 1, 0),
                    mono(1, 0, 1),
                    mono(1, 0, 2),
                    mono(1, 0, 3),
                    mono(1, 0, 4),
                    mono(1, 1, 1),
                ],
            ),
            _ => (
                vec![q(1, 3), q(1, 5)],
                vec![mono(1, 3, 0), mono(1, 0, 5)],
                vec![
                    mono(1, 1, 0),
                    mono(1, 0, 1),
                    mono(1, 0, 2),
                    mono(1, 0, 3),
                    mono(1, 1, 1),
                    mono(1, 1, 2),
                    mono(1, 1, 3),
                ],
            ),
        },
    };
    let s: Vec<Rational64> = fj.iter().map(|mo| mo.weighted_degree(&r)).collect();
    debug_assert!(f.iter().all(|mo| mo.weighted_degree(&r) == Rational64::from_integer(1)));
    let profile = HomogeneityProfile {
        k: r.len(),
        k0: s.len(),
        r,
        s,
    };
    PhaseFunction {
        singularity: t,
        profile,
        f,
        fj,
    }
}

/// Order `κ = k/2 − Σ r_j` with the minimal `k`.
pub fn caustic_order(t: SingularityType) -> Rational64 {
    let p = build_phase(t);
    let h = p.homogeneity();
    Rational64::new(h.k as i64, 2) - h.r_sum()
}

/// Regularity threshold `δ₀` as tabulated.
pub fn threshold(t: SingularityType) -> Rational64 {
    let m = t.index() as i64;
    match t.family() {
        Family::A if m == 0 => Rational64::from_integer(1),
        Family::A => q(1, m + 2),
        Family::D | Family::DMinus => q(1, m + 1),
        Family::DPlus => q(1, m),
        Family::E => q(1, m),
    }
}

/// All catalog entries: A₁…A₈, the D-series up to D₈ (both variants for odd m),
/// and E₆, E₇, E₈.
pub fn catalog_types() -> Vec<SingularityType> {
    let mut out = Vec::new();
    for m in 0..=7 {
        out.push(SingularityType::a(m, Sign::Plus).unwrap());
    }
    for m in 3..=7 {
        if m % 2 == 1 {
            out.push(SingularityType::d(m, Sign::Minus).unwrap());
            out.push(SingularityType::d(m, Sign::Plus).unwrap());
        } else {
            out.push(SingularityType::d(m, Sign::Plus).unwrap());
        }
    }
    for e in 6..=8 {
        out.push(SingularityType::e(e, Sign::Plus).unwrap());
    }
    out
}

fn family_label(f: Family) -> &'static str {
    match f {
        Family::A => "A",
        Family::DMinus => "Dminus",
        Family::DPlus => "Dplus",
        Family::D => "D",
        Family::E => "E",
    }
}

fn join(v: &[Rational64]) -> String {
    v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(";")
}

/// CSV table of the catalog: `family,index,sign,k,k0,r,s,kappa,delta0`.
pub fn catalog_csv() -> String {
    let mut out = String::from("family,index,sign,k,k0,r,s,kappa,delta0\n");
    for t in catalog_types() {
        let p = build_phase(t);
        let h = p.homogeneity();
        let sign = match t.sign() {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            family_label(t.family()),
            t.index(),
            sign,
            h.k,
            h.k0,
            join(&h.r),
            join(&h.s),
            caustic_order(t),
            threshold(t)
        );
    }
    out
}

/// Smallest weight among `r`.
pub fn min_weight(t: SingularityType) -> Rational64 {
    build_phase(t)
        .homogeneity()
        .r
        .iter()
        .copied()
        .fold(Rational64::from_integer(1), |a, b| if b < a { b } else { a })
}

/// Quasi-homogeneity residual `|φ(λ^{1−s}x, λ^r θ) − λ φ(x, θ)|`.
pub fn homogeneity_residual(p: &PhaseFunction, lambda: f64, x: &[f64], theta: &[f64]) -> f64 {
    let h = p.homogeneity();
    let xs: Vec<f64> = x
        .iter()
        .zip(h.s_f64())
        .map(|(xj, sj)| xj * lambda.powf(1.0 - sj))
        .collect();
    let ts: Vec<f64> = theta
        .iter()
        .zip(h.r_f64())
        .map(|(tj, rj)| tj * lambda.powf(rj))
        .collect();
    (p.eval(&xs, &ts) - lambda * p.eval(x, theta)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_normal_form() {
        let p = build_phase("A2".parse().unwrap());
        assert_eq!(p.k0(), 1);
        assert_eq!(p.homogeneity().r, vec![q(1, 3)]);
        assert_eq!(p.homogeneity().s, vec![q(1, 3)]);
        assert_eq!(p.eval(&[2.0], &[0.5]), 1.0 + 0.125);
    }

    #[test]
    fn collapse_matches_eval() {
        for t in catalog_types() {
            let p = build_phase(t);
            let x: Vec<f64> = (0..p.k0()).map(|j| 0.3 - 0.17 * j as f64).collect();
            let th = [0.41, -0.77];
            let d = p.collapse(&x);
            let a = p.eval(&x, &th[..p.k()]);
            let b = d.eval(th[0], if p.k() == 2 { th[1] } else { 0.0 });
            assert!((a - b).abs() < 1e-13, "{t}");
        }
    }

    #[test]
    fn csv_has_all_rows() {
        let csv = catalog_csv();
        assert_eq!(csv.lines().count(), 1 + catalog_types().len());
        assert!(csv.contains("E,8,plus,2,7,1/3;1/5,1/3;1/5;2/5;3/5;8/15;11/15;14/15,7/15,1/8"));
    }
}
