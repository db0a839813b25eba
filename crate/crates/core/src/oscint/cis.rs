//! Fast `(sin x, cos x)` for the quadrature inner loops.
//!
//! Three-part Cody–Waite reduction by π/2 followed by the classic minimax
//! kernels on `[−π/4, π/4]`. Accurate to a few ulp for `|x| < 2^20 · π/2`;
//! larger arguments fall back to the standard library.

const PIO2_1: f64 = 1.570_796_326_734_125_6e0;
const PIO2_2: f64 = 6.077_100_506_303_966e-11;
const PIO2_3: f64 = 2.022_266_248_711_166_5e-21;
const LIMIT: f64 = 1_647_099.0;

const S1: f64 = -1.666_666_666_666_663_2e-1;
const S2: f64 = 8.333_333_333_322_49e-3;
const S3: f64 = -1.984_126_982_985_795e-4;
const S4: f64 = 2.755_731_370_707_006_8e-6;
const S5: f64 = -2.505_076_025_340_686_3e-8;
const S6: f64 = 1.589_690_995_211_55e-10;

const C1: f64 = 4.166_666_666_666_66e-2;
const C2: f64 = -1.388_888_888_887_411e-3;
const C3: f64 = 2.480_158_728_947_673e-5;
const C4: f64 = -2.755_731_435_139_066_3e-7;
const C5: f64 = 2.087_572_321_298_175e-9;
const C6: f64 = -1.135_964_755_778_819_5e-11;

#[cfg(test)]
fn sin_cos(x: f64) -> (f64, f64) {
    if !(x.abs() < LIMIT) {
        return x.sin_cos();
    }
    kernel(x)
}

#[inline(always)]
fn kernel(x: f64) -> (f64, f64) {
    // round to nearest via the 1.5·2^52 trick (no SSE4.1 rounding needed)
    const MAGIC: f64 = 6_755_399_441_055_744.0;
    let q = (x * std::f64::consts::FRAC_2_PI + MAGIC) - MAGIC;
    let r = ((x - q * PIO2_1) - q * PIO2_2) - q * PIO2_3;
    let z = r * r;
    let s = r + r * z * (S1 + z * (S2 + z * (S3 + z * (S4 + z * (S5 + z * S6)))));
    let c = 1.0 - 0.5 * z + z * z * (C1 + z * (C2 + z * (C3 + z * (C4 + z * (C5 + z * C6)))));
    // quadrant fix-up without branches: odd quadrants swap, and the sign
    // bits follow bit 1 of n (sine) and of n + 1 (cosine)
    let n = q as i64 as u64;
    let swap = (n & 1).wrapping_neg();
    let (sb, cb) = (s.to_bits(), c.to_bits());
    let so = (sb & !swap) | (cb & swap);
    let co = (cb & !swap) | (sb & swap);
    (
        f64::from_bits(so ^ ((n & 2) << 62)),
        f64::from_bits(co ^ ((n.wrapping_add(1) & 2) << 62)),
    )
}

/// Writes `cos` and `sin` of every phase into `re` and `im`. The loop body is
/// branch-free so it vectorizes.
pub fn sin_cos_slice(phases: &[f64], re: &mut [f64], im: &mut [f64]) {
    let big = phases.iter().fold(0.0f64, |m, p| m.max(p.abs()));
    if !(big < LIMIT) {
        for ((p, c), s) in phases.iter().zip(re.iter_mut()).zip(im.iter_mut()) {
            (*s, *c) = p.sin_cos();
        }
        return;
    }
    for ((p, c), s) in phases.iter().zip(re.iter_mut()).zip(im.iter_mut()) {
        (*s, *c) = kernel(*p);
    }
}

/// `(Σ w·re, Σ w·im)` with independent partial sums in fixed order.
pub fn weighted_sums(w: &[f64], re: &[f64], im: &[f64]) -> (f64, f64) {
    let mut a = [0.0f64; 4];
    let mut b = [0.0f64; 4];
    let n = w.len() / 4 * 4;
    for ((wc, rc), ic) in w[..n]
        .chunks_exact(4)
        .zip(re[..n].chunks_exact(4))
        .zip(im[..n].chunks_exact(4))
    {
        for j in 0..4 {
            a[j] += wc[j] * rc[j];
            b[j] += wc[j] * ic[j];
        }
    }
    let mut sa = (a[0] + a[1]) + (a[2] + a[3]);
    let mut sb = (b[0] + b[1]) + (b[2] + b[3]);
    for i in n..w.len() {
        sa += w[i] * re[i];
        sb += w[i] * im[i];
    }
    (sa, sb)
}
