//! Inequality-style checks. None of these assert an implied constant; each
//! returns the measured quantities so callers can fit one.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::{check_grid, trial_prime_factors};
use crate::error::{check_range, Error, Result};
use crate::multfun::{eval_range, MultiplicativeSpec, ValueTable};
use crate::primes::{mertens_product, FactorTable};

const LATTICE_BRUTE_FORCE_CAP: f64 = 1e7;

/// Counts `(ν_1, …, ν_k)` with every `ν_j ≥ 1` and `Σ a_j ν_j ≤ y`, and
/// returns it with the bound `(y + Σ a_j)^k / (k! Π a_j)`.
pub fn lattice_count_bound(a: &[f64], y: f64) -> Result<(u64, f64)> {
    if a.is_empty() || a.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidArgument("lattice weights must be positive".into()));
    }
    if !(y >= 0.0) {
        return Err(Error::InvalidArgument("y must be non-negative".into()));
    }
    let volume: f64 = a.iter().map(|&v| (y / v).max(1.0)).product();
    if volume > LATTICE_BRUTE_FORCE_CAP {
        return Err(Error::Infeasible(format!(
            "enumeration volume {volume:.3e} exceeds {LATTICE_BRUTE_FORCE_CAP:e}"
        )));
    }
    fn count(a: &[f64], rem: f64) -> u64 {
        match a.split_first() {
            None => 1,
            Some((&w, rest)) => {
                let mut total = 0;
                let mut left = rem - w;
                while left >= 0.0 {
                    total += count(rest, left);
                    left -= w;
                }
                total
            }
        }
    }
    let k = a.len() as i32;
    let sum_a: f64 = a.iter().sum();
    let prod_a: f64 = a.iter().product();
    let factorial: f64 = (1..=k).map(|i| i as f64).product();
    Ok((count(a, y), (y + sum_a).powi(k) / (factorial * prod_a)))
}

/// `Σ_{n≤x} f(n) / (x · exp(Σ_{p≤x} (f(p) − 1)/p))` for real `f ≥ 0`.
pub fn halasz_ratio(spec: &MultiplicativeSpec, x: u64, table: &FactorTable) -> Result<f64> {
    let vals = eval_range(spec, x, table)?;
    let mut total = 0.0;
    for n in 1..=x {
        let v = vals.value(n);
        if v.im.abs() > 1e-12 || v.re < -1e-12 {
            return Err(Error::Domain(format!(
                "{} is not real and non-negative at n = {n} (value {v})",
                spec.name()
            )));
        }
        total += v.re;
    }
    let exponent: f64 = table
        .primes_up_to(x)
        .iter()
        .map(|&p| (vals.value(p as u64).re - 1.0) / p as f64)
        .sum();
    Ok(total / (x as f64 * exponent.exp()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SiftedPowerCheck {
    pub lhs: Complex64,
    pub main: Complex64,
    pub relerr: f64,
}

/// Compares `Σ_{n≤x, P^-(n)>z} n^{it}` with `x^{1+it}/(1+it) · Π_{p≤z}(1 − 1/p)`.
pub fn sifted_power_sum_check(t: f64, z: f64, x: u64, table: &FactorTable) -> Result<SiftedPowerCheck> {
    check_range("x", x, table.limit())?;
    if !(z >= 2.0) || (x as f64) < z {
        return Err(Error::InvalidArgument(format!("need x >= z >= 2, got x = {x}, z = {z}")));
    }
    let mut lhs = Complex64::new(1.0, 0.0);
    for n in 2..=x {
        if table.lpf(n) as f64 > z {
            lhs += Complex64::from_polar(1.0, t * (n as f64).ln());
        }
    }
    let s = Complex64::new(1.0, t);
    let xf = x as f64;
    let main = Complex64::from_polar(xf, t * xf.ln()) / s * mertens_product(z);
    Ok(SiftedPowerCheck { lhs, main, relerr: (lhs - main).norm() / main.norm() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DkOmegaFit {
    pub d: u32,
    /// `k_D = Π_{p ≤ D³} p`; `None` when it overflows 64 bits.
    pub k_d: Option<u64>,
    pub x_grid: Vec<u64>,
    pub sums: Vec<f64>,
    /// `a_{0,D}, …, a_{D−1,D}`.
    pub coefficients: Vec<f64>,
    /// `(S(x) − x·Σ a_i (log x)^i) / x` per grid point.
    pub residuals: Vec<f64>,
}

/// Fits `S(x)/x ≈ Σ_{i<D} a_i (log x)^i` for `S(x) = Σ_{n≤x, (n,k_D)=1} D^{Ω(n)}`.
pub fn dk_omega_fit(d: u32, x_grid: &[u64], table: &FactorTable) -> Result<DkOmegaFit> {
    if d == 0 {
        return Err(Error::InvalidArgument("D must be at least 1".into()));
    }
    check_grid(x_grid)?;
    let x_max = *x_grid.last().unwrap();
    check_range("x", x_max, table.limit())?;
    let cutoff = (d as u64).pow(3);
    if cutoff > table.limit() {
        return Err(Error::OutOfRange { what: "D^3", value: cutoff, limit: table.limit() });
    }
    if x_grid.len() < d as usize {
        return Err(Error::InvalidArgument(format!("need at least {d} grid points to fit {d} coefficients")));
    }
    let k_d = table
        .primes_up_to(cutoff)
        .iter()
        .try_fold(1u64, |acc, &p| acc.checked_mul(p as u64));

    let base = d as f64;
    let mut sums = Vec::with_capacity(x_grid.len());
    let mut acc = 0.0;
    let mut next = x_grid.iter().peekable();
    for n in 1..=x_max {
        if n == 1 || table.lpf(n) > cutoff {
            let omega: u32 = table.factors(n).map(|(_, a)| a).sum();
            acc += base.powi(omega as i32);
        }
        if next.peek() == Some(&&n) {
            sums.push(acc);
            next.next();
        }
    }

    let rows = x_grid.len();
    let cols = d as usize;
    let design = DMatrix::from_fn(rows, cols, |r, c| (x_grid[r] as f64).ln().powi(c as i32));
    let target = DVector::from_iterator(rows, x_grid.iter().zip(&sums).map(|(&x, &s)| s / x as f64));
    let coefficients = design
        .clone()
        .svd(true, true)
        .solve(&target, 1e-14)
        .map_err(|e| Error::Domain(format!("least squares failed: {e}")))?;
    let fitted = &design * &coefficients;
    let residuals = (0..rows).map(|r| target[r] - fitted[r]).collect();
    Ok(DkOmegaFit {
        d,
        k_d,
        x_grid: x_grid.to_vec(),
        sums,
        coefficients: coefficients.iter().copied().collect(),
        residuals,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoprimeDecayRow {
    pub modulus: u64,
    pub x: u64,
    pub sum: Complex64,
    /// `|Σ_{n≤x,(n,d)=1} f(n)| · (log x)^A · (φ(d)/d)^D / x`.
    pub scaled: f64,
}

/// Scaled coprime partial sums for each modulus and grid point.
pub fn coprime_decay_profile(
    f: &ValueTable,
    moduli: &[u64],
    a_exp: f64,
    d_exp: u32,
    x_grid: &[u64],
) -> Result<Vec<CoprimeDecayRow>> {
    check_grid(x_grid)?;
    let x_max = *x_grid.last().unwrap();
    check_range("x", x_max, f.limit())?;
    let mut rows = Vec::new();
    for &d in moduli {
        if d == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let primes = trial_prime_factors(d);
        let density: f64 = primes.iter().map(|&p| 1.0 - 1.0 / p as f64).product();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut next = x_grid.iter().peekable();
        for n in 1..=x_max {
            if primes.iter().all(|p| n % p != 0) {
                acc += f.value(n);
            }
            if next.peek() == Some(&&n) {
                let xf = n as f64;
                rows.push(CoprimeDecayRow {
                    modulus: d,
                    x: n,
                    sum: acc,
                    scaled: acc.norm() * xf.ln().powf(a_exp) * density.powi(d_exp as i32) / xf,
                });
                next.next();
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SiftedEnvelopeRow {
    pub z: f64,
    pub x: u64,
    pub sum: Complex64,
    pub envelope: f64,
    pub ratio: f64,
}

/// `|Σ_{n≤x, P^-(n)>z} f(n)|` against
/// `x (log z)^{D−m} / (log x)^{A−m} + x^{1−α/log z} / log z`.
#[allow(clippy::too_many_arguments)]
pub fn sifted_envelope_ratios(
    f: &ValueTable,
    d: u32,
    a_exp: f64,
    m: u32,
    alpha: f64,
    z_values: &[f64],
    x_grid: &[u64],
    table: &FactorTable,
) -> Result<Vec<SiftedEnvelopeRow>> {
    check_grid(x_grid)?;
    let x_max = *x_grid.last().unwrap();
    check_range("x", x_max, f.limit().min(table.limit()))?;
    let mut rows = Vec::new();
    for &z in z_values {
        if !(z >= 2.0) {
            return Err(Error::InvalidArgument(format!("z must be at least 2, got {z}")));
        }
        let lz = z.ln();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut next = x_grid.iter().peekable();
        for n in 1..=x_max {
            if n == 1 || table.lpf(n) as f64 > z {
                acc += f.value(n);
            }
            if next.peek() == Some(&&n) {
                let xf = n as f64;
                let lx = xf.ln();
                let envelope = xf * lz.powi(d as i32 - m as i32) / lx.powf(a_exp - m as f64)
                    + xf.powf(1.0 - alpha / lz) / lz;
                rows.push(SiftedEnvelopeRow { z, x: n, sum: acc, envelope, ratio: acc.norm() / envelope });
                next.next();
            }
        }
    }
    Ok(rows)
}
