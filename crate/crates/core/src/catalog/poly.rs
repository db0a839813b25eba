//! Small polynomial toolkit in at most two phase variables.
//!
//! Normal forms are stored exactly as rational monomials; at evaluation time a
//! phase restricted to a fixed base point collapses into a dense `f64`
//! polynomial in θ, which the quadrature evaluates by Horner's rule and bounds
//! on boxes by re-expanding around the box center.

use num_rational::Rational64;
use num_traits::ToPrimitive;

/// `coeff · θ₁^e₁ · θ₂^e₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: Rational64,
    pub exps: [u32; 2],
}

impl Monomial {
    pub fn new(coeff: i64, e1: u32, e2: u32) -> Self {
        Self {
            coeff: Rational64::from_integer(coeff),
            exps: [e1, e2],
        }
    }

    pub fn eval(&self, theta: &[f64]) -> f64 {
        let mut v = self.coeff.to_f64().unwrap_or(f64::NAN);
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                v *= theta[i].powi(e as i32);
            }
        }
        v
    }

    /// Partial derivative in θ_i.
    pub fn eval_partial(&self, i: usize, theta: &[f64]) -> f64 {
        let e = self.exps[i];
        if e == 0 {
            return 0.0;
        }
        let mut exps = self.exps;
        exps[i] -= 1;
        let m = Monomial {
            coeff: self.coeff * Rational64::from_integer(e as i64),
            exps,
        };
        m.eval(theta)
    }

    /// Weighted degree `Σ e_i r_i`.
    pub fn weighted_degree(&self, r: &[Rational64]) -> Rational64 {
        self.exps
            .iter()
            .zip(r.iter().chain(std::iter::repeat(&Rational64::from_integer(0))))
            .map(|(&e, &w)| w * Rational64::from_integer(e as i64))
            .sum()
    }
}

pub fn eval_sum(monomials: &[Monomial], theta: &[f64]) -> f64 {
    monomials.iter().map(|m| m.eval(theta)).sum()
}

/// Univariate polynomial, coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly1 {
    pub c: Vec<f64>,
}

impl Poly1 {
    pub fn new(c: Vec<f64>) -> Self {
        Self { c }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, &a| acc * t + a)
    }

    pub fn derivative(&self) -> Poly1 {
        if self.c.len() <= 1 {
            return Poly1::new(vec![0.0]);
        }
        Poly1::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| a * i as f64)
                .collect(),
        )
    }

    /// Upper bound for `|p|` on `[center - radius, center + radius]`.
    pub fn bound_abs(&self, center: f64, radius: f64) -> f64 {
        let shifted = taylor_shift(&self.c, center);
        let mut r = 1.0;
        let mut acc = 0.0;
        for a in shifted {
            acc += a.abs() * r;
            r *= radius;
        }
        acc
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut b = 1.0;
    for i in 0..k {
        b = b * (n - i) as f64 / (i + 1) as f64;
    }
    b
}

/// Coefficients of `p(center + t)` in powers of `t`.
fn taylor_shift(c: &[f64], center: f64) -> Vec<f64> {
    let n = c.len();
    let mut out = vec![0.0; n];
    for (j, &cj) in c.iter().enumerate() {
        if cj == 0.0 {
            continue;
        }
        let mut pw = 1.0;
        for i in (0..=j).rev() {
            out[i] += cj * binomial(j, i) * pw;
            pw *= center;
        }
    }
    out
}

/// Dense bivariate polynomial `Σ c[p][q] θ₁^p θ₂^q`; with `deg2 == 0` it is
/// univariate in θ₁.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaPoly {
    deg1: usize,
    deg2: usize,
    c: Vec<f64>,
}

impl ThetaPoly {
    pub fn zeros(deg1: usize, deg2: usize) -> Self {
        Self {
            deg1,
            deg2,
            c: vec![0.0; (deg1 + 1) * (deg2 + 1)],
        }
    }

    pub fn deg1(&self) -> usize {
        self.deg1
    }

    pub fn deg2(&self) -> usize {
        self.deg2
    }

    #[inline]
    pub fn coeff(&self, p: usize, q: usize) -> f64 {
        self.c[p * (self.deg2 + 1) + q]
    }

    #[inline]
    fn coeff_mut(&mut self, p: usize, q: usize) -> &mut f64 {
        let d2 = self.deg2;
        &mut self.c[p * (d2 + 1) + q]
    }

    pub fn add_monomial(&mut self, coeff: f64, p: usize, q: usize) {
        *self.coeff_mut(p, q) += coeff;
    }

    pub fn scale(&mut self, s: f64) {
        for v in &mut self.c {
            *v *= s;
        }
    }

    pub fn eval(&self, t1: f64, t2: f64) -> f64 {
        self.restrict_row(t2).eval(t1)
    }

    /// Univariate polynomial in θ₁ with θ₂ fixed.
    pub fn restrict_row(&self, t2: f64) -> Poly1 {
        let mut out = vec![0.0; self.deg1 + 1];
        for (p, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for q in (0..=self.deg2).rev() {
                acc = acc * t2 + self.coeff(p, q);
            }
            *o = acc;
        }
        Poly1::new(out)
    }

    /// Like [`restrict_row`](Self::restrict_row), writing into `out`
    /// (length `deg1 + 1`).
    pub fn restrict_row_into(&self, t2: f64, out: &mut [f64]) {
        for (p, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for q in (0..=self.deg2).rev() {
                acc = acc * t2 + self.coeff(p, q);
            }
            *o = acc;
        }
    }

    /// Partial derivative in θ₁ (`axis == 0`) or θ₂ (`axis == 1`).
    pub fn partial(&self, axis: usize) -> ThetaPoly {
        let mut out = ThetaPoly::zeros(self.deg1, self.deg2);
        for p in 0..=self.deg1 {
            for q in 0..=self.deg2 {
                let v = self.coeff(p, q);
                if v == 0.0 {
                    continue;
                }
                match axis {
                    0 if p > 0 => out.add_monomial(v * p as f64, p - 1, q),
                    1 if q > 0 => out.add_monomial(v * q as f64, p, q - 1),
                    _ => {}
                }
            }
        }
        out
    }

    /// Upper bound for `|P|` on the box `[c1 ± r1] × [c2 ± r2]`.
    pub fn bound_abs(&self, c1: f64, r1: f64, c2: f64, r2: f64) -> f64 {
        // shift in θ₂ for every θ₁ power, then in θ₁ for every θ₂ power
        let mut shifted = ThetaPoly::zeros(self.deg1, self.deg2);
        for p in 0..=self.deg1 {
            let row: Vec<f64> = (0..=self.deg2).map(|q| self.coeff(p, q)).collect();
            for (q, v) in taylor_shift(&row, c2).into_iter().enumerate() {
                *shifted.coeff_mut(p, q) = v;
            }
        }
        let mut acc = 0.0;
        for q in 0..=self.deg2 {
            let col: Vec<f64> = (0..=self.deg1).map(|p| shifted.coeff(p, q)).collect();
            let rq = r2.powi(q as i32);
            for (p, v) in taylor_shift(&col, c1).into_iter().enumerate() {
                acc += v.abs() * r1.powi(p as i32) * rq;
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_and_derivative() {
        let p = Poly1::new(vec![1.0, -2.0, 0.0, 3.0]);
        assert_eq!(p.eval(2.0), 1.0 - 4.0 + 24.0);
        assert_eq!(p.derivative().eval(2.0), -2.0 + 36.0);
    }

    #[test]
    fn box_bound_dominates_samples() {
        let mut p = ThetaPoly::zeros(2, 3);
        p.add_monomial(1.0, 2, 1);
        p.add_monomial(-1.0, 0, 3);
        p.add_monomial(0.3, 1, 0);
        let (c1, r1, c2, r2) = (0.4, 0.3, -0.7, 0.2);
        let b = p.bound_abs(c1, r1, c2, r2);
        for i in 0..=20 {
            for j in 0..=20 {
                let t1 = c1 - r1 + 2.0 * r1 * i as f64 / 20.0;
                let t2 = c2 - r2 + 2.0 * r2 * j as f64 / 20.0;
                assert!(p.eval(t1, t2).abs() <= b + 1e-12);
            }
        }
        let q = Poly1::new(vec![0.5, 0.0, -3.0, 1.0]);
        let b1 = q.bound_abs(1.0, 0.5);
        for i in 0..=50 {
            let t = 0.5 + i as f64 / 50.0;
            assert!(q.eval(t).abs() <= b1 + 1e-12);
        }
    }

    #[test]
    fn restrict_row_matches_eval() {
        let mut p = ThetaPoly::zeros(3, 2);
        p.add_monomial(2.0, 3, 0);
        p.add_monomial(-1.5, 1, 2);
        p.add_monomial(0.25, 0, 1);
        let row = p.restrict_row(0.7);
        assert!((row.eval(-1.1) - p.eval(-1.1, 0.7)).abs() < 1e-14);
        let d2 = p.partial(1);
        assert!((d2.eval(0.3, 0.7) - (-1.5 * 0.3 * 2.0 * 0.7 + 0.25)).abs() < 1e-14);
    }
}
