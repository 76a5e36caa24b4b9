//! `L(s, f) = Σ f(n) n^{-s}` and `−L'/L(s, f) = Σ Λ_f(n) n^{-s}`: evaluation
//! for `Re(s) > 1` with rigorous tails, on `Re(s) = 1` by partial summation,
//! zero location on the line, and mean-value quadrature.

mod blocked;
mod mean_value;
mod quad;
mod zeros;
#[cfg(test)]
pub(crate) mod zeta_oracle;

pub use blocked::BlockedSeries;
pub use mean_value::{montgomery_check, parseval_ratio, MontgomeryCheck, ParsevalReport};
pub use quad::{adaptive_simpson, integrate_partitioned};
pub use zeros::{zero_scan, zero_scan_with, ZeroCandidate, ZeroReport, ZeroScanConfig, ZeroStatus};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_range, Error, Result};
use crate::multfun::{eval_range, f_gamma, lambda_terms, MultiplicativeSpec, OrdinateMultiset, ValueTable};
use crate::primes::FactorTable;

/// Upper bound for `ψ(x)/x` over all `x > 0`.
const PSI_RATIO_MAX: f64 = 1.03883;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: Complex64,
    pub truncation: u64,
    pub tail_bound: f64,
    /// `false` on the line `σ = 1`, where the tail is only an estimate.
    pub rigorous: bool,
}

/// `n^{-s}`.
#[inline]
pub(crate) fn npow(n: u64, s: Complex64) -> Complex64 {
    (-s * (n as f64).ln()).exp()
}

fn require_right_half(s: Complex64) -> Result<()> {
    if s.re > 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("Re(s) = {} must exceed 1; use evaluate_l_on_line", s.re)))
    }
}

/// `Σ_{n>N} τ_D(n) n^{-σ}` bounded via `Σ_{n≤x} τ_D(n) ≤ x (log x + D − 1)^{D−1}/(D−1)!`:
/// `σ N^{1−σ} Σ_{j<D} L^{D−1−j} / ((D−1−j)! (σ−1)^{j+1})` with `L = log N + D − 1`.
pub fn divisor_tail_bound(d: u32, sigma: f64, n: u64) -> f64 {
    if d == 0 {
        return 0.0;
    }
    let nf = n.max(1) as f64;
    let l = nf.ln() + d as f64 - 1.0;
    let mut sum = 0.0;
    for j in 0..d {
        let e = d - 1 - j;
        let fact: f64 = (1..=e).map(|i| i as f64).product();
        sum += l.powi(e as i32) / (fact * (sigma - 1.0).powi(j as i32 + 1));
    }
    sigma * nf.powf(1.0 - sigma) * sum
}

fn sum_table(vals: &ValueTable, s: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..=vals.limit() {
        let v = vals.value(n);
        if v != Complex64::new(0.0, 0.0) {
            acc += v * npow(n, s);
        }
    }
    acc
}

/// `Σ_{n≤N} f(n) n^{-s}` for `Re(s) > 1`. The tail bound assumes
/// `|f| ≤ τ_D` with `D = spec.declared_d()`.
pub fn evaluate_l(spec: &MultiplicativeSpec, s: Complex64, n: u64, table: &FactorTable) -> Result<EvalResult> {
    require_right_half(s)?;
    check_range("N", n, table.limit())?;
    let vals = eval_range(spec, n.max(1), table)?;
    Ok(EvalResult {
        value: sum_table(&vals, s),
        truncation: n,
        tail_bound: divisor_tail_bound(spec.declared_d(), s.re, n),
        rigorous: true,
    })
}

/// `L(s)` on `Re(s) = 1` from prefix sums, by partial summation:
/// `S(X) X^{-s} + Σ_{n<X} S(n) (n^{-s} − (n+1)^{-s})`, which is the exact
/// per-interval integral of `s ∫ S(u) u^{-s-1} du`.
#[derive(Debug, Clone)]
pub struct LineEvaluator {
    values: ValueTable,
}

impl LineEvaluator {
    pub fn new(values: ValueTable) -> Self {
        Self { values }
    }

    pub fn from_spec(
        spec: &MultiplicativeSpec,
        gammas: &OrdinateMultiset,
        x: u64,
        table: &FactorTable,
    ) -> Result<Self> {
        Ok(Self::new(f_gamma(spec, gammas, x, table)?))
    }

    pub fn truncation(&self) -> u64 {
        self.values.limit()
    }

    pub fn values(&self) -> &ValueTable {
        &self.values
    }

    pub fn at(&self, t: f64) -> EvalResult {
        let s = Complex64::new(1.0, t);
        let x = self.values.limit();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut cur = npow(1, s);
        for n in 1..x {
            let next = npow(n + 1, s);
            acc += self.values.prefix(n) * (cur - next);
            cur = next;
        }
        let sx = self.values.prefix(x);
        acc += sx * cur;
        EvalResult {
            value: acc,
            truncation: x,
            tail_bound: sx.norm() * (1.0 + t.abs()) / x as f64,
            rigorous: false,
        }
    }
}

/// `L(1 + it, f_Γ)` truncated at `X`; the tail is a heuristic estimate.
pub fn evaluate_l_on_line(
    spec: &MultiplicativeSpec,
    gammas: &OrdinateMultiset,
    t: f64,
    x: u64,
    table: &FactorTable,
) -> Result<EvalResult> {
    Ok(LineEvaluator::from_spec(spec, gammas, x, table)?.at(t))
}

/// `−L'/L(s, f) = Σ_{p^k ≤ N} Λ_f(p^k) p^{-ks}` for `Re(s) > 1`; the tail
/// uses `|Λ_f| ≤ D Λ` and `ψ(x) < 1.03883 x`.
pub fn log_deriv(spec: &MultiplicativeSpec, s: Complex64, n: u64, table: &FactorTable) -> Result<EvalResult> {
    require_right_half(s)?;
    check_range("N", n, table.limit())?;
    let terms = lambda_terms(spec, n, table)?;
    let value = terms.iter().map(|t| t.value * npow(t.q, s)).sum();
    let sigma = s.re;
    let tail = spec.declared_d() as f64 * PSI_RATIO_MAX * sigma * (n.max(1) as f64).powf(1.0 - sigma) / (sigma - 1.0);
    Ok(EvalResult { value, truncation: n, tail_bound: tail, rigorous: true })
}

#[cfg(test)]
mod tests {
    use super::zeta_oracle::{zeta, zeta_prime};
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn oracle_sanity() {
        assert!((zeta(c(2.0, 0.0)).re - PI * PI / 6.0).abs() < 1e-13);
        assert!((zeta(c(4.0, 0.0)).re - PI.powi(4) / 90.0).abs() < 1e-13);
        let r = -zeta_prime(c(2.0, 0.0)) / zeta(c(2.0, 0.0));
        assert!((r.re - 0.569961).abs() < 1e-6);
    }

    #[test]
    fn evaluate_examples() {
        let t = FactorTable::new(1_000_000).unwrap();
        let e = evaluate_l(&MultiplicativeSpec::identity(), c(1.3, 4.0), 1000, &t).unwrap();
        assert_eq!(e.value, c(1.0, 0.0));
        assert_eq!(e.tail_bound, 0.0);

        let z2 = PI * PI / 6.0;
        let e = evaluate_l(&MultiplicativeSpec::ones(), c(2.0, 0.0), 1_000_000, &t).unwrap();
        assert!((e.value.re - z2).abs() <= e.tail_bound);
        assert!(e.tail_bound < 1e-5);
        let e = evaluate_l(&MultiplicativeSpec::moebius(), c(2.0, 0.0), 1_000_000, &t).unwrap();
        assert!((e.value.re - 1.0 / z2).abs() <= e.tail_bound);

        assert!(matches!(
            evaluate_l(&MultiplicativeSpec::ones(), c(1.0, 0.0), 10, &t),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn tails_bracket_oracle() {
        let t = FactorTable::new(20_000).unwrap();
        let specs = [
            (MultiplicativeSpec::ones(), 1i32),
            (MultiplicativeSpec::moebius(), -1),
            (MultiplicativeSpec::tau_k(2), 2),
        ];
        let mut count = 0;
        for (spec, power) in &specs {
            for (sigma, tt) in [(1.5, 0.0), (1.5, 3.0), (1.7, -2.0), (2.0, 10.0), (2.5, 1.0), (3.0, -7.0), (1.6, 0.5)] {
                let s = c(sigma, tt);
                let e = evaluate_l(spec, s, 20_000, &t).unwrap();
                let truth = zeta(s).powi(*power);
                assert!((e.value - truth).norm() <= e.tail_bound, "{} at {s}", spec.name());
                count += 1;
            }
        }
        assert!(count >= 20);
    }

    #[test]
    fn log_deriv_examples() {
        let t = FactorTable::new(100_000).unwrap();
        let s = c(2.0, 0.0);
        let one = log_deriv(&MultiplicativeSpec::ones(), s, 100_000, &t).unwrap();
        let truth = -zeta_prime(s) / zeta(s);
        assert!((one.value - truth).norm() <= one.tail_bound);
        let mu = log_deriv(&MultiplicativeSpec::moebius(), s, 100_000, &t).unwrap();
        assert!((mu.value + one.value).norm() < 1e-12);
        let t2 = log_deriv(&MultiplicativeSpec::tau_k(2), s, 100_000, &t).unwrap();
        assert!((t2.value - one.value * 2.0).norm() < 1e-12);
        let s = c(1.5, 2.0);
        let one = log_deriv(&MultiplicativeSpec::ones(), s, 100_000, &t).unwrap();
        assert!((one.value + zeta_prime(s) / zeta(s)).norm() <= one.tail_bound);
    }

    #[test]
    fn line_evaluator_matches_truncated_sum() {
        let t = FactorTable::new(50_000).unwrap();
        let mu = eval_range(&MultiplicativeSpec::moebius(), 50_000, &t).unwrap();
        let line = LineEvaluator::new(mu.clone());
        let blocked = BlockedSeries::new(mu.values(), 1.0, 10.0);
        for tt in [0.0, 1.0, -4.5, 10.0] {
            let direct = sum_table(&mu, c(1.0, tt));
            assert!((line.at(tt).value - direct).norm() < 1e-9);
            assert!((blocked.eval(tt) - direct).norm() < 1e-9);
        }
    }

    #[test]
    fn on_line_examples() {
        let t = FactorTable::new(10_000_000).unwrap();
        let none = OrdinateMultiset::new();
        let line = LineEvaluator::from_spec(&MultiplicativeSpec::moebius(), &none, 10_000_000, &t).unwrap();
        assert!(line.at(0.0).value.norm() <= 0.02);
        let inv = c(1.0, 0.0) / zeta(c(1.0, 5.0));
        assert!((line.at(5.0).value - inv).norm() <= 0.05);
        assert!(!line.at(5.0).rigorous);
        let lam = evaluate_l_on_line(&MultiplicativeSpec::liouville(), &none, 0.0, 10_000_000, &t).unwrap();
        assert!(lam.value.norm() <= 0.02);
    }

    #[test]
    fn divisor_tail_examples() {
        assert_eq!(divisor_tail_bound(0, 2.0, 10), 0.0);
        // D = 1: σ N^{1−σ}/(σ−1)
        assert!((divisor_tail_bound(1, 2.0, 100) - 0.02).abs() < 1e-15);
    }
}
