//! Points on the quasi-homogeneous unit shell `Σ |y_j|^{1/(1−s_j)} = 1`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Geometric `λ` values from `h` up to 1. A single shell sits at `λ = h`.
pub fn shell_lambdas(h: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![h];
    }
    (0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            if i + 1 == count {
                1.0
            } else {
                h.powf(1.0 - t)
            }
        })
        .collect()
}

fn from_simplex(u: &[f64], signs: u32, s: &[f64]) -> Vec<f64> {
    u.iter()
        .zip(s)
        .enumerate()
        .map(|(j, (&uj, &sj))| {
            let v = uj.powf(1.0 - sj);
            if signs >> j & 1 == 1 {
                -v
            } else {
                v
            }
        })
        .collect()
}

/// Sign patterns times the simplex grid `u = c/p`, `Σ c_j = p`. Patterns that
/// flip only zero coordinates are dropped, so every point is distinct.
pub fn boundary_directions(k0: usize, points: usize, s: &[f64]) -> Vec<Vec<f64>> {
    let p = points.max(1);
    let mut comps = Vec::new();
    let mut cur = vec![0usize; k0];
    compositions(p, 0, &mut cur, &mut comps);
    let mut out = Vec::new();
    for c in &comps {
        let u: Vec<f64> = c.iter().map(|&ci| ci as f64 / p as f64).collect();
        let zero_mask: u32 = c
            .iter()
            .enumerate()
            .filter(|(_, &ci)| ci == 0)
            .fold(0, |m, (j, _)| m | 1 << j);
        for signs in 0..(1u32 << k0) {
            if signs & zero_mask == 0 {
                out.push(from_simplex(&u, signs, s));
            }
        }
    }
    out
}

fn compositions(left: usize, j: usize, cur: &mut [usize], out: &mut Vec<Vec<usize>>) {
    if j + 1 == cur.len() {
        cur[j] = left;
        out.push(cur.to_vec());
        return;
    }
    for v in (0..=left).rev() {
        cur[j] = v;
        compositions(left - v, j + 1, cur, out);
    }
}

/// Uniform simplex samples with random signs, fully determined by `seed`.
pub fn random_directions(k0: usize, count: usize, seed: u64, s: &[f64]) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let e: Vec<f64> = (0..k0)
                .map(|_| -(1.0 - rng.random::<f64>()).ln())
                .collect();
            let total: f64 = e.iter().sum();
            let u: Vec<f64> = e.iter().map(|v| v / total).collect();
            let signs: u32 = rng.random::<u32>() & ((1u32 << k0) - 1);
            from_simplex(&u, signs, s)
        })
        .collect()
}

/// `x_j = λ^{1−s_j} y_j`.
pub fn on_shell(y: &[f64], lambda: f64, s: &[f64]) -> Vec<f64> {
    y.iter()
        .zip(s)
        .map(|(yj, sj)| lambda.powf(1.0 - sj) * yj)
        .collect()
}
