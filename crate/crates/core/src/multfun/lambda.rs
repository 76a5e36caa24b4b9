use std::collections::BTreeMap;

use num_complex::Complex64;

use super::MultiplicativeSpec;
use crate::error::{check_range, Result};
use crate::primes::{simple_primes, FactorTable};

/// `Λ_f` stored on prime powers, keyed by `(p, k)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PrimePowerMap {
    entries: BTreeMap<(u64, u32), Complex64>,
}

impl PrimePowerMap {
    pub fn get(&self, p: u64, k: u32) -> Option<Complex64> {
        self.entries.get(&(p, k)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u64, u32), Complex64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `Λ_f(p^k)` for `k = 0..=a_max` (index 0 is zero), from
/// `Λ_f(p^k) = k f(p^k) log p − Σ_{j=1}^{k−1} Λ_f(p^j) f(p^{k−j})`.
pub fn lambda_prime_powers(spec: &MultiplicativeSpec, p: u64, a_max: u32) -> Vec<Complex64> {
    let f = spec.prime_power_values(p, a_max);
    lambda_from_values(&f, (p as f64).ln())
}

pub(crate) fn lambda_from_values(f: &[Complex64], log_p: f64) -> Vec<Complex64> {
    let mut lam = vec![Complex64::new(0.0, 0.0); f.len()];
    for k in 1..f.len() {
        let mut acc = f[k] * (k as f64 * log_p);
        for j in 1..k {
            acc -= lam[j] * f[k - j];
        }
        lam[k] = acc;
    }
    lam
}

/// `Λ_f` on every `p^k` with `p ≤ p_max` and `1 ≤ k ≤ a_max`.
pub fn lambda_of(spec: &MultiplicativeSpec, p_max: u64, a_max: u32) -> PrimePowerMap {
    let mut entries = BTreeMap::new();
    for p in simple_primes(p_max as usize) {
        let p = p as u64;
        let lam = lambda_prime_powers(spec, p, a_max);
        for (k, v) in lam.into_iter().enumerate().skip(1) {
            entries.insert((p, k as u32), v);
        }
    }
    PrimePowerMap { entries }
}

/// One prime power `q = p^k ≤ x` together with `Λ_f(q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimePowerTerm {
    pub q: u64,
    pub p: u64,
    pub k: u32,
    pub value: Complex64,
}

/// Largest `k` with `p^k ≤ x`.
pub(crate) fn max_exponent(p: u64, x: u64) -> u32 {
    let mut k = 0;
    let mut q = 1u64;
    while let Some(next) = q.checked_mul(p) {
        if next > x {
            break;
        }
        q = next;
        k += 1;
    }
    k
}

/// `Λ_f(q)` for all prime powers `q ≤ x`, ascending in `q`.
pub fn lambda_terms(spec: &MultiplicativeSpec, x: u64, table: &FactorTable) -> Result<Vec<PrimePowerTerm>> {
    check_range("x", x, table.limit())?;
    let mut out = Vec::new();
    for &p in table.primes_up_to(x) {
        let p = p as u64;
        let a_max = max_exponent(p, x);
        let lam = lambda_prime_powers(spec, p, a_max);
        let mut q = 1u64;
        for (k, v) in lam.into_iter().enumerate().skip(1) {
            q *= p;
            out.push(PrimePowerTerm { q, p, k: k as u32, value: v });
        }
    }
    out.sort_by_key(|t| t.q);
    Ok(out)
}
