use num_complex::Complex64;
use rayon::prelude::*;

use super::MultiplicativeSpec;
use crate::error::{check_range, Error, Result};
use crate::primes::FactorTable;

const CHUNK: usize = 1 << 16;

/// Dense values `f(1..=limit)` with prefix sums `S(n) = Σ_{m≤n} f(m)`.
///
/// Index 0 is unused and holds zero in both arrays.
#[derive(Debug, Clone)]
pub struct ValueTable {
    values: Vec<Complex64>,
    prefix: Vec<Complex64>,
}

impl ValueTable {
    /// Wraps raw values (`values[0]` is ignored) and builds prefix sums.
    pub fn from_values(mut values: Vec<Complex64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidArgument("value table needs at least n = 1".into()));
        }
        values[0] = Complex64::new(0.0, 0.0);
        let mut prefix = Vec::with_capacity(values.len());
        let mut acc = Complex64::new(0.0, 0.0);
        for v in &values {
            acc += v;
            prefix.push(acc);
        }
        Ok(Self { values, prefix })
    }

    pub fn from_fn(limit: u64, f: impl Fn(u64) -> Complex64) -> Result<Self> {
        let values = (0..=limit).map(|n| if n == 0 { Complex64::new(0.0, 0.0) } else { f(n) }).collect();
        Self::from_values(values)
    }

    pub fn limit(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    #[inline]
    pub fn value(&self, n: u64) -> Complex64 {
        self.values[n as usize]
    }

    /// `S(x)` for integer `x`; `S(0) = 0`.
    #[inline]
    pub fn prefix(&self, x: u64) -> Complex64 {
        self.prefix[x as usize]
    }

    /// `S(t)` for real `t`, zero below 1 and clamped at the table limit.
    pub fn prefix_at(&self, t: f64) -> Complex64 {
        if t < 1.0 {
            Complex64::new(0.0, 0.0)
        } else {
            let n = (t.floor() as u64).min(self.limit());
            self.prefix[n as usize]
        }
    }

    /// Raw value slice, 1-based (`values()[0]` is a zero placeholder).
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn prefix_sums(&self) -> &[Complex64] {
        &self.prefix
    }
}

/// Tabulates `f(n) = Π_{p^a ∥ n} f(p^a)` for `n ≤ x`.
///
/// Each entry is the product over its factorization in ascending-prime
/// order, so entries are independent and chunks can be filled in parallel.
pub fn eval_range(spec: &MultiplicativeSpec, x: u64, table: &FactorTable) -> Result<ValueTable> {
    check_range("x", x, table.limit())?;
    if x < 1 {
        return Err(Error::InvalidArgument("x must be at least 1".into()));
    }
    let mut values = vec![Complex64::new(0.0, 0.0); x as usize + 1];
    values.par_chunks_mut(CHUNK).enumerate().for_each(|(c, chunk)| {
        let base = (c * CHUNK) as u64;
        for (i, slot) in chunk.iter_mut().enumerate() {
            let n = base + i as u64;
            if n == 0 {
                continue;
            }
            let mut acc = Complex64::new(1.0, 0.0);
            for (p, a) in table.factors(n) {
                acc *= spec.at(p, a);
            }
            *slot = acc;
        }
    });
    ValueTable::from_values(values)
}

/// `(F ∗ G)(n) = Σ_{d|n} F(d)·G(n/d)` by the divisor-lattice double loop.
///
/// Each output entry accumulates its terms in ascending `d`.
pub fn dirichlet_convolve(f: &ValueTable, g: &ValueTable) -> Result<ValueTable> {
    if f.limit() != g.limit() {
        return Err(Error::LimitMismatch {
            left: f.limit() as usize,
            right: g.limit() as usize,
        });
    }
    let x = f.limit() as usize;
    let mut out = vec![Complex64::new(0.0, 0.0); x + 1];
    for d in 1..=x {
        let fd = f.values[d];
        if fd == Complex64::new(0.0, 0.0) {
            continue;
        }
        for m in 1..=x / d {
            out[d * m] += fd * g.values[m];
        }
    }
    ValueTable::from_values(out)
}
