//! Batch evaluation of `Σ_{n≤X} a_n n^{-σ-it}` for many `t`.
//!
//! `log n` is cut into blocks of width `h`. Within a block centred at `c`,
//! `n^{-it} = e^{-itc} e^{-itδ}` with `|δ| ≤ h/2`, and the second factor is
//! expanded to a fixed order. Each block then costs `ORDER + 1` complex
//! multiply-adds per `t` instead of one exponential per `n`.

use num_complex::Complex64;
use rayon::prelude::*;

const ORDER: usize = 18;
const CHUNK: usize = 1 << 16;

#[derive(Debug, Clone)]
pub struct BlockedSeries {
    width: f64,
    t_max: f64,
    centers: Vec<f64>,
    moments: Vec<[Complex64; ORDER + 1]>,
}

impl BlockedSeries {
    /// `coeffs[n]` is `a_n` (`coeffs[0]` ignored); accurate for `|t| ≤ t_max`.
    pub fn new(coeffs: &[Complex64], sigma: f64, t_max: f64) -> Self {
        let t_max = t_max.abs().max(1.0);
        let width = 1.0 / t_max;
        let x = coeffs.len().saturating_sub(1).max(1);
        let nblocks = ((x as f64).ln() / width).floor() as usize + 1;
        let centers: Vec<f64> = (0..nblocks).map(|b| (b as f64 + 0.5) * width).collect();

        let n_chunks = x.div_ceil(CHUNK);
        let partials: Vec<Vec<(usize, [Complex64; ORDER + 1])>> = (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let lo = c * CHUNK + 1;
                let hi = ((c + 1) * CHUNK).min(x);
                let mut out: Vec<(usize, [Complex64; ORDER + 1])> = Vec::new();
                for (n, &a) in coeffs.iter().enumerate().take(hi + 1).skip(lo) {
                    if a == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let ln = (n as f64).ln();
                    let b = ((ln / width).floor() as usize).min(nblocks - 1);
                    let delta = ln - centers[b];
                    let w = a * (-sigma * ln).exp();
                    if out.last().map(|e| e.0) != Some(b) {
                        out.push((b, [Complex64::new(0.0, 0.0); ORDER + 1]));
                    }
                    let slot = &mut out.last_mut().unwrap().1;
                    let mut term = w;
                    slot[0] += term;
                    for (k, m) in slot.iter_mut().enumerate().skip(1) {
                        term *= delta / k as f64;
                        *m += term;
                    }
                }
                out
            })
            .collect();

        let mut moments = vec![[Complex64::new(0.0, 0.0); ORDER + 1]; nblocks];
        for part in partials {
            for (b, m) in part {
                for (acc, v) in moments[b].iter_mut().zip(m.iter()) {
                    *acc += v;
                }
            }
        }
        Self { width, t_max, centers, moments }
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn block_width(&self) -> f64 {
        self.width
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        let z = Complex64::new(0.0, -t);
        let mut total = Complex64::new(0.0, 0.0);
        for (c, m) in self.centers.iter().zip(&self.moments) {
            let mut inner = m[ORDER];
            for k in (0..ORDER).rev() {
                inner = inner * z + m[k];
            }
            total += Complex64::from_polar(1.0, -t * c) * inner;
        }
        total
    }
}
