//! Smallest-prime-factor table and the prime sums built on it.
//!
//! The table is built by a segmented sieve: base primes up to `sqrt(limit)`
//! are found first, then every segment of the range is marked independently
//! (in parallel when a rayon pool is available). Each entry is written by the
//! smallest base prime that divides it, so the result does not depend on the
//! number of worker threads.

use rayon::prelude::*;

use crate::error::{check_range, Error, Result};

/// Default range limit for command-line runs.
pub const DEFAULT_LIMIT: u64 = 100_000_000;

/// Default memory budget for a table, in bytes.
pub const DEFAULT_BUDGET_BYTES: u64 = 2 << 30;

/// Stand-in for `P^-(1) = +inf`: larger than any prime the table can hold.
pub const ROUGH_SENTINEL: u64 = u64::MAX;

const SEGMENT_LEN: usize = 1 << 18;

/// Smallest prime factor for every integer in `[2, limit]`.
#[derive(Debug, Clone)]
pub struct FactorTable {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl FactorTable {
    /// Builds the table with the default memory budget.
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_budget(limit, DEFAULT_BUDGET_BYTES)
    }

    pub fn with_budget(limit: u64, budget_bytes: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidArgument(format!(
                "factor table limit must be at least 2, got {limit}"
            )));
        }
        let bytes = (limit + 1).saturating_mul(4);
        if bytes > budget_bytes || limit >= u32::MAX as u64 {
            return Err(Error::Capacity {
                requested: limit,
                bytes,
                budget: budget_bytes,
            });
        }
        let n = limit as usize;
        let base = simple_primes(isqrt(limit) as usize);

        let mut spf = vec![0u32; n + 1];
        spf.par_chunks_mut(SEGMENT_LEN)
            .enumerate()
            .for_each(|(seg, chunk)| {
                let lo = seg * SEGMENT_LEN;
                let hi = lo + chunk.len();
                for &p in &base {
                    let p = p as usize;
                    if p * p >= hi {
                        break;
                    }
                    let mut m = (p * p).max(lo.div_ceil(p) * p);
                    while m < hi {
                        let slot = &mut chunk[m - lo];
                        if *slot == 0 {
                            *slot = p as u32;
                        }
                        m += p;
                    }
                }
                for (i, slot) in chunk.iter_mut().enumerate() {
                    if *slot == 0 && lo + i >= 2 {
                        *slot = (lo + i) as u32;
                    }
                }
            });

        let primes = spf
            .iter()
            .enumerate()
            .skip(2)
            .filter(|&(i, &s)| s as usize == i)
            .map(|(i, _)| i as u32)
            .collect();

        Ok(Self { limit, spf, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `P^-(n)`, with `P^-(1)` reported as [`ROUGH_SENTINEL`].
    pub fn least_prime_factor(&self, n: u64) -> Result<u64> {
        self.check(n)?;
        Ok(self.lpf(n))
    }

    #[inline]
    pub(crate) fn lpf(&self, n: u64) -> u64 {
        if n < 2 {
            ROUGH_SENTINEL
        } else {
            self.spf[n as usize] as u64
        }
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.spf[n as usize] as u64 == n
    }

    /// All primes up to the table limit, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn primes_up_to(&self, x: u64) -> &[u32] {
        let end = self.primes.partition_point(|&p| (p as u64) <= x);
        &self.primes[..end]
    }

    /// Prime factorization of `n` as `(p, a)` pairs with ascending `p`.
    pub fn factorize(&self, n: u64) -> Result<Factors<'_>> {
        if n == 0 {
            return Err(Error::InvalidArgument("cannot factor 0".into()));
        }
        self.check(n)?;
        Ok(Factors { table: self, rest: n })
    }

    #[inline]
    pub(crate) fn factors(&self, n: u64) -> Factors<'_> {
        Factors { table: self, rest: n }
    }

    /// `(p, k)` when `n = p^k` with `k >= 1`.
    pub fn prime_power(&self, n: u64) -> Result<Option<(u64, u32)>> {
        self.check(n)?;
        if n < 2 {
            return Ok(None);
        }
        let mut it = self.factors(n);
        let first = it.next();
        Ok(match (first, it.next()) {
            (Some(pp), None) => Some(pp),
            _ => None,
        })
    }

    fn check(&self, n: u64) -> Result<()> {
        check_range("n", n, self.limit)
    }
}

/// Iterator over the prime factorization of an integer.
pub struct Factors<'a> {
    table: &'a FactorTable,
    rest: u64,
}

impl Iterator for Factors<'_> {
    type Item = (u64, u32);

    fn next(&mut self) -> Option<(u64, u32)> {
        if self.rest < 2 {
            return None;
        }
        let p = self.table.lpf(self.rest);
        let mut a = 0;
        while self.rest % p == 0 {
            self.rest /= p;
            a += 1;
        }
        Some((p, a))
    }
}

/// `Λ(n)`: `log p` when `n = p^k`, else 0.
pub fn von_mangoldt(n: u64, table: &FactorTable) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("von Mangoldt is defined for n >= 1".into()));
    }
    Ok(match table.prime_power(n)? {
        Some((p, _)) => (p as f64).ln(),
        None => 0.0,
    })
}

/// `ψ(x) = Σ_{n≤x} Λ(n)`.
pub fn chebyshev_psi(x: u64, table: &FactorTable) -> Result<f64> {
    check_range("x", x, table.limit())?;
    let mut acc = 0.0;
    for &p in table.primes_up_to(x) {
        let p = p as u64;
        let mut k = 0u32;
        let mut q = p;
        loop {
            k += 1;
            match q.checked_mul(p) {
                Some(next) if next <= x => q = next,
                _ => break,
            }
        }
        acc += k as f64 * (p as f64).ln();
    }
    Ok(acc)
}

/// `θ(x) = Σ_{p≤x} log p`.
pub fn chebyshev_theta(x: u64, table: &FactorTable) -> Result<f64> {
    check_range("x", x, table.limit())?;
    Ok(table
        .primes_up_to(x)
        .iter()
        .map(|&p| (p as f64).ln())
        .sum())
}

/// `Π_{p≤z} (1 − 1/p)`; 1 for `z < 2`.
pub fn mertens_product(z: f64) -> f64 {
    if !(z >= 2.0) {
        return 1.0;
    }
    simple_primes(z.floor() as usize)
        .into_iter()
        .map(|p| 1.0 - 1.0 / p as f64)
        .product()
}

/// True iff `P^-(n) > z`; always true for `n = 1`.
pub fn sifted_indicator(n: u64, z: f64, table: &FactorTable) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let lpf = table.least_prime_factor(n)?;
    Ok(n == 1 || lpf as f64 > z)
}

/// Plain sieve of Eratosthenes, for the small prime lists the table is seeded with.
pub(crate) fn simple_primes(n: usize) -> Vec<u32> {
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u32);
            let mut m = i * i;
            while m <= n {
                composite[m] = true;
                m += i;
            }
        }
    }
    out
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}
