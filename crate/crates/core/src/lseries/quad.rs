//! Adaptive Simpson quadrature over a fixed partition.

use rayon::prelude::*;

const MAX_DEPTH: u32 = 48;

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth >= MAX_DEPTH || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * eps, depth + 1)
        + refine(f, m, b, fm, frm, fb, right, 0.5 * eps, depth + 1)
}

/// `∫_a^b f` to absolute tolerance `eps` (heuristic, Richardson-corrected).
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, eps: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(fa, fm, fb, b - a);
    refine(f, a, b, fa, fm, fb, whole, eps, 0)
}

/// Splits `[a, b]` into pieces no wider than `width`, integrates each in
/// parallel with its share of `eps`, and sums the pieces left to right.
pub fn integrate_partitioned<F: Fn(f64) -> f64 + Sync>(f: &F, a: f64, b: f64, width: f64, eps: f64) -> f64 {
    let pieces = (((b - a) / width).ceil() as usize).max(1);
    let step = (b - a) / pieces as f64;
    let share = eps / pieces as f64;
    let parts: Vec<f64> = (0..pieces)
        .into_par_iter()
        .map(|i| {
            let lo = a + i as f64 * step;
            let hi = if i + 1 == pieces { b } else { lo + step };
            adaptive_simpson(f, lo, hi, share)
        })
        .collect();
    parts.iter().sum()
}
