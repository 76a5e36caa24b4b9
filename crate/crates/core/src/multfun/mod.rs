//! Multiplicative functions: prime-power rules, dense tabulation,
//! Dirichlet convolution and inversion, the `Λ_f` recursion and class checks.

mod lambda;
mod ordinates;
mod spec;
mod table;

pub use lambda::{lambda_of, lambda_prime_powers, lambda_terms, PrimePowerMap, PrimePowerTerm};
pub(crate) use lambda::max_exponent;
pub use ordinates::{Ordinate, OrdinateMultiset, DEFAULT_RESOLUTION};
pub(crate) use spec::{is_prime_trial, prime_phase};
pub use spec::MultiplicativeSpec;
pub use table::{dirichlet_convolve, eval_range, ValueTable};

use serde::Serialize;

use crate::error::Result;
use crate::primes::{simple_primes, FactorTable};

/// Dirichlet inverse as a spec.
pub fn dirichlet_inverse(spec: &MultiplicativeSpec) -> MultiplicativeSpec {
    spec.inverse()
}

pub fn tau_gamma_spec(gammas: &OrdinateMultiset) -> MultiplicativeSpec {
    MultiplicativeSpec::tau_gamma(gammas)
}

pub fn twist(spec: &MultiplicativeSpec, gamma: f64) -> MultiplicativeSpec {
    spec.twist(gamma)
}

/// `f_Γ = f ∗ τ_Γ` as a spec.
pub fn f_gamma_spec(spec: &MultiplicativeSpec, gammas: &OrdinateMultiset) -> MultiplicativeSpec {
    if gammas.is_empty() {
        return spec.clone();
    }
    spec.convolve(&MultiplicativeSpec::tau_gamma(gammas))
}

/// `f_Γ` on `[1, x]`, convolved at the prime-power level and then tabulated.
pub fn f_gamma(
    spec: &MultiplicativeSpec,
    gammas: &OrdinateMultiset,
    x: u64,
    table: &FactorTable,
) -> Result<ValueTable> {
    eval_range(&f_gamma_spec(spec, gammas), x, table)
}

/// `f_Γ` on `[1, x]` by convolving the two dense tables.
pub fn f_gamma_by_tables(
    spec: &MultiplicativeSpec,
    gammas: &OrdinateMultiset,
    x: u64,
    table: &FactorTable,
) -> Result<ValueTable> {
    let f = eval_range(spec, x, table)?;
    let t = eval_range(&MultiplicativeSpec::tau_gamma(gammas), x, table)?;
    dirichlet_convolve(&f, &t)
}

/// Worst ratio found by [`verify_class`] and where it occurred.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WorstRatio {
    pub ratio: f64,
    pub at: u64,
    pub exponent: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassReport {
    pub d: u32,
    pub lambda_ratio: WorstRatio,
    pub value_ratio: WorstRatio,
    pub inverse_ratio: WorstRatio,
    pub pass: bool,
}

const CLASS_SLACK: f64 = 1e-9;

fn bounded_ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// Numerical membership test for `F(D)`: `|Λ_f| ≤ D·Λ` on prime powers with
/// `p ≤ p_max`, `k ≤ a_max`, and `|f|, |f^{-1}| ≤ τ_D` on `n ≤ x`.
pub fn verify_class(
    spec: &MultiplicativeSpec,
    d: u32,
    p_max: u64,
    a_max: u32,
    x: u64,
    table: &FactorTable,
) -> Result<ClassReport> {
    let mut lambda_ratio = WorstRatio { ratio: 0.0, at: 0, exponent: 0 };
    for p in simple_primes(p_max as usize) {
        let p = p as u64;
        let lam = lambda_prime_powers(spec, p, a_max);
        for (k, v) in lam.iter().enumerate().skip(1) {
            let r = v.norm() / (p as f64).ln();
            if r > lambda_ratio.ratio {
                lambda_ratio = WorstRatio { ratio: r, at: p, exponent: k as u32 };
            }
        }
    }

    let bound = eval_range(&MultiplicativeSpec::tau_k(d), x, table)?;
    let worst = |vals: &ValueTable| {
        let mut w = WorstRatio { ratio: 0.0, at: 0, exponent: 0 };
        for n in 1..=x {
            let r = bounded_ratio(vals.value(n).norm(), bound.value(n).re);
            if r > w.ratio {
                w = WorstRatio { ratio: r, at: n, exponent: 0 };
            }
        }
        w
    };
    let value_ratio = worst(&eval_range(spec, x, table)?);
    let inverse_ratio = worst(&eval_range(&spec.inverse(), x, table)?);

    // the Λ ratio is compared against D, the τ_D ratios against 1
    let pass = lambda_ratio.ratio <= d as f64 * (1.0 + CLASS_SLACK)
        && value_ratio.ratio <= 1.0 + CLASS_SLACK
        && inverse_ratio.ratio <= 1.0 + CLASS_SLACK;
    Ok(ClassReport { d, lambda_ratio, value_ratio, inverse_ratio, pass })
}
