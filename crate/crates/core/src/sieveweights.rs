//! Upper and lower combinatorial sieve weights `λ±` for a set of primes
//! `P ⊆ [2, z]` at level `z^u`, and exact checks of
//! `(1∗λ⁻)(n) ≤ 1_{(n, P)=1} ≤ (1∗λ⁺)(n)`.
//!
//! Weights follow the β-sieve truncation: write `d = p_1 ⋯ p_r` with
//! `p_1 > ⋯ > p_r`; `λ⁺(d) = μ(d)` when `p_m^{β+1} p_{m−1} ⋯ p_1 ≤ z^u` for
//! every odd `m`, `λ⁻(d) = μ(d)` when it holds for every even `m`, and both
//! vanish otherwise.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_range, Error, Result};
use crate::multfun::{is_prime_trial, MultiplicativeSpec};
use crate::primes::FactorTable;

pub const DEFAULT_BETA: f64 = 2.0;
pub const DEFAULT_SUPPORT_CAP: usize = 5_000_000;
const CHUNK: u64 = 1 << 16;

/// One squarefree `d` in the support of `λ⁺` or `λ⁻`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Weight {
    pub d: u64,
    pub plus: i8,
    pub minus: i8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SieveSystem {
    z: f64,
    u: f64,
    beta: f64,
    primes: Vec<u64>,
    weights: Vec<Weight>,
}

impl SieveSystem {
    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn level(&self) -> f64 {
        self.z.powf(self.u)
    }

    /// The sieving primes, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Support of `λ⁺ ∪ λ⁻`, sorted by `d`.
    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    fn lookup(&self, d: u64) -> Option<&Weight> {
        self.weights.binary_search_by_key(&d, |w| w.d).ok().map(|i| &self.weights[i])
    }

    pub fn lambda_plus(&self, d: u64) -> i8 {
        self.lookup(d).map_or(0, |w| w.plus)
    }

    pub fn lambda_minus(&self, d: u64) -> i8 {
        self.lookup(d).map_or(0, |w| w.minus)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("d,lambda_plus,lambda_minus\n");
        for w in &self.weights {
            let _ = writeln!(out, "{},{},{}", w.d, w.plus, w.minus);
        }
        out
    }
}

/// [`build_weights_with`] with `β = 2` and the default support cap.
pub fn build_weights(z: f64, u: f64, primes: &[u64]) -> Result<SieveSystem> {
    build_weights_with(z, u, primes, DEFAULT_BETA, DEFAULT_SUPPORT_CAP)
}

pub fn build_weights_with(z: f64, u: f64, primes: &[u64], beta: f64, cap: usize) -> Result<SieveSystem> {
    if !(z >= 2.0) {
        return Err(Error::InvalidArgument(format!("z must be at least 2, got {z}")));
    }
    if !(u >= 1.0) {
        return Err(Error::InvalidArgument(format!("u must be at least 1, got {u}")));
    }
    if !(beta >= 1.0) {
        return Err(Error::InvalidArgument(format!("beta must be at least 1, got {beta}")));
    }
    let mut ps = primes.to_vec();
    ps.sort_unstable();
    ps.dedup();
    if let Some(&bad) = ps.iter().find(|&&p| !is_prime_trial(p) || p as f64 > z) {
        return Err(Error::InvalidArgument(format!("{bad} is not a prime at most z = {z}")));
    }
    let level = z.powf(u);
    let ln_level = level.ln();

    // descending-prime DFS; `idx` is the position of the last prime used,
    // so extensions draw from ps[..idx]
    let mut weights = vec![Weight { d: 1, plus: 1, minus: 1 }];
    struct Frame {
        d: u64,
        ln_d: f64,
        idx: usize,
        m: u32,
        plus: bool,
        minus: bool,
    }
    let mut stack = vec![Frame { d: 1, ln_d: 0.0, idx: ps.len(), m: 0, plus: true, minus: true }];
    while let Some(f) = stack.pop() {
        for j in (0..f.idx).rev() {
            let p = ps[j];
            let lp = (p as f64).ln();
            let m = f.m + 1;
            let ok = f.ln_d + (beta + 1.0) * lp <= ln_level + 1e-12;
            let plus = f.plus && (m % 2 == 0 || ok);
            let minus = f.minus && (m % 2 == 1 || ok);
            if !plus && !minus {
                continue;
            }
            let d = f.d * p;
            assert!((d as f64) <= level * (1.0 + 1e-12), "support element {d} above level {level}");
            let sign: i8 = if m % 2 == 1 { -1 } else { 1 };
            weights.push(Weight { d, plus: if plus { sign } else { 0 }, minus: if minus { sign } else { 0 } });
            if weights.len() > cap {
                return Err(Error::Infeasible(format!(
                    "sieve support exceeds {cap} entries; use a smaller u or z"
                )));
            }
            stack.push(Frame { d, ln_d: f.ln_d + lp, idx: j, m, plus, minus });
        }
    }
    weights.sort_unstable_by_key(|w| w.d);
    Ok(SieveSystem { z, u, beta, primes: ps, weights })
}

/// All primes up to `z`.
pub fn primes_up_to(z: f64) -> Vec<u64> {
    (2..=z.floor() as u64).filter(|&p| is_prime_trial(p)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SandwichViolation {
    pub n: u64,
    pub lower: i64,
    pub indicator: i64,
    pub upper: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    pub n_checked: u64,
    pub violation_count: u64,
    /// The first few violations, ascending in `n`.
    pub violations: Vec<SandwichViolation>,
}

impl SandwichReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

const KEPT_VIOLATIONS: usize = 32;

fn coprime_to(n: u64, primes: &[u64]) -> bool {
    primes.iter().all(|&p| n % p != 0)
}

/// `(1∗λ⁻)(n)`, `(1∗λ⁺)(n)` for `n` in `[lo, hi]`.
fn convolutions(sys: &SieveSystem, lo: u64, hi: u64) -> (Vec<i64>, Vec<i64>) {
    let len = (hi - lo + 1) as usize;
    let mut lower = vec![0i64; len];
    let mut upper = vec![0i64; len];
    for w in sys.weights.iter().take_while(|w| w.d <= hi) {
        let mut n = lo.div_ceil(w.d) * w.d;
        while n <= hi {
            let i = (n - lo) as usize;
            lower[i] += w.minus as i64;
            upper[i] += w.plus as i64;
            n += w.d;
        }
    }
    (lower, upper)
}

/// Checks the sandwich inequality for every `n ≤ N` in exact integer arithmetic.
pub fn sandwich_check(sys: &SieveSystem, n_max: u64, table: &FactorTable) -> Result<SandwichReport> {
    check_range("N", n_max, table.limit())?;
    let chunks = n_max.div_ceil(CHUNK);
    let parts: Vec<(u64, Vec<SandwichViolation>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK + 1;
            let hi = ((c + 1) * CHUNK).min(n_max);
            let (lower, upper) = convolutions(sys, lo, hi);
            let mut count = 0;
            let mut kept = Vec::new();
            for n in lo..=hi {
                let i = (n - lo) as usize;
                let indicator = coprime_to(n, &sys.primes) as i64;
                if lower[i] > indicator || indicator > upper[i] {
                    count += 1;
                    if kept.len() < KEPT_VIOLATIONS {
                        kept.push(SandwichViolation { n, lower: lower[i], indicator, upper: upper[i] });
                    }
                }
            }
            (count, kept)
        })
        .collect();
    let mut violations = Vec::new();
    let mut violation_count = 0;
    for (count, kept) in parts {
        violation_count += count;
        violations.extend(kept);
    }
    violations.truncate(KEPT_VIOLATIONS);
    Ok(SandwichReport { n_checked: n_max, violation_count, violations })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RoughCountBracket {
    /// `Σ_d λ⁻(d) ⌊N/d⌋`.
    pub lower: i64,
    /// `#{n ≤ N : (n, P) = 1}`.
    pub count: i64,
    /// `Σ_d λ⁺(d) ⌊N/d⌋`.
    pub upper: i64,
}

impl RoughCountBracket {
    pub fn holds(&self) -> bool {
        self.lower <= self.count && self.count <= self.upper
    }
}

pub fn rough_count_bracket(sys: &SieveSystem, n_max: u64) -> RoughCountBracket {
    let (mut lower, mut upper) = (0i64, 0i64);
    for w in sys.weights.iter().take_while(|w| w.d <= n_max) {
        let q = (n_max / w.d) as i64;
        lower += w.minus as i64 * q;
        upper += w.plus as i64 * q;
    }
    let count = (1..=n_max).filter(|&n| coprime_to(n, &sys.primes)).count() as i64;
    RoughCountBracket { lower, count, upper }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentComparison {
    /// `Σ λ⁺(d) ν(d) (log d)^r / d`.
    pub sieved_plus: f64,
    /// `Σ λ⁻(d) ν(d) (log d)^r / d`.
    pub sieved_minus: f64,
    /// `Σ_{d | Π P} μ(d) ν(d) (log d)^r / d`.
    pub mobius: f64,
    /// `(log z)^r u^{−u/2} Π_{p∈P} (1 − ν(p)/p)`.
    pub scale: f64,
    /// `max |sieved± − mobius| / scale`.
    pub c_fit: f64,
}

impl MomentComparison {
    pub fn diff_plus(&self) -> f64 {
        (self.sieved_plus - self.mobius).abs()
    }

    pub fn diff_minus(&self) -> f64 {
        (self.sieved_minus - self.mobius).abs()
    }
}

/// Compares the truncated sums `Σ λ±(d) ν(d) (log d)^r / d` with the full
/// Möbius sum over divisors of `Π P`.
pub fn moment_compare(sys: &SieveSystem, nu: &MultiplicativeSpec, r: u32) -> Result<MomentComparison> {
    let mut nu_p = Vec::with_capacity(sys.primes.len());
    for &p in &sys.primes {
        let v = nu.at(p, 1);
        if v.im.abs() > 1e-12 || v.re < 0.0 || v.re >= p as f64 {
            return Err(Error::Domain(format!("ν({p}) = {v} must be real in [0, {p})")));
        }
        nu_p.push(v.re);
    }

    // Taylor coefficients of Π_p (1 − (ν(p)/p) e^{x log p}) up to x^r
    let r = r as usize;
    let mut coeff = vec![0.0; r + 1];
    coeff[0] = 1.0;
    for (&p, &v) in sys.primes.iter().zip(&nu_p) {
        let lp = (p as f64).ln();
        let w = v / p as f64;
        let mut factor = vec![0.0; r + 1];
        let mut term = 1.0;
        for (j, f) in factor.iter_mut().enumerate() {
            if j > 0 {
                term *= lp / j as f64;
            }
            *f = -w * term;
        }
        factor[0] += 1.0;
        let mut next = vec![0.0; r + 1];
        for i in 0..=r {
            for j in 0..=r - i {
                next[i + j] += coeff[i] * factor[j];
            }
        }
        coeff = next;
    }
    let r_fact: f64 = (1..=r).map(|i| i as f64).product();
    let mobius = coeff[r] * r_fact;

    let index = |p: u64| sys.primes.binary_search(&p).expect("support uses sieving primes");
    let (mut plus, mut minus) = (0.0, 0.0);
    for w in &sys.weights {
        let mut nu_d = 1.0;
        let mut rest = w.d;
        for &p in &sys.primes {
            if rest % p == 0 {
                nu_d *= nu_p[index(p)];
                rest /= p;
            }
        }
        let ld = (w.d as f64).ln();
        let term = nu_d * ld.powi(r as i32) / w.d as f64;
        plus += w.plus as f64 * term;
        minus += w.minus as f64 * term;
    }

    let density: f64 = sys.primes.iter().zip(&nu_p).map(|(&p, &v)| 1.0 - v / p as f64).product();
    let scale = sys.z.ln().powi(r as i32) * sys.u.powf(-sys.u / 2.0) * density;
    let worst = (plus - mobius).abs().max((minus - mobius).abs());
    let c_fit = if worst == 0.0 { 0.0 } else { worst / scale };
    Ok(MomentComparison { sieved_plus: plus, sieved_minus: minus, mobius, scale, c_fit })
}
