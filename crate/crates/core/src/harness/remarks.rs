//! Two small demonstrations around the main pipeline: prime sums twisted
//! by `p^{iγ}`, and the `τ_{−κ}` example where no decay occurs.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_range, Error, Result};
use crate::multfun::{MultiplicativeSpec, OrdinateMultiset};
use crate::primes::{chebyshev_theta, FactorTable};
use crate::sums::discrepancy;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwistedPrimeSum {
    pub gamma: f64,
    pub x: u64,
    /// `Σ_{p≤x} p^{iγ} log p`.
    pub lhs: Complex64,
    /// `x^{1+iγ} / (1+iγ)`.
    pub main: Complex64,
    /// `|lhs − main| · log x / x`.
    pub err_scale: f64,
}

pub fn twisted_prime_sum_check(gamma: f64, x: u64, table: &FactorTable) -> Result<TwistedPrimeSum> {
    Ok(twisted_prime_sum_grid(&[gamma], &[x], table)?.remove(0))
}

/// [`twisted_prime_sum_check`] for every `(γ, x)`, one pass over the primes per `γ`.
pub fn twisted_prime_sum_grid(gammas: &[f64], xs: &[u64], table: &FactorTable) -> Result<Vec<TwistedPrimeSum>> {
    if xs.is_empty() || xs.windows(2).any(|w| w[0] >= w[1]) || xs[0] < 2 {
        return Err(Error::InvalidArgument("x grid must be strictly ascending and start at 2 or more".into()));
    }
    let x_max = *xs.last().unwrap();
    check_range("x", x_max, table.limit())?;
    let primes = table.primes_up_to(x_max);
    let mut out = Vec::with_capacity(gammas.len() * xs.len());
    for &gamma in gammas {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut it = primes.iter().peekable();
        for &x in xs {
            while let Some(&&p) = it.peek() {
                if p as u64 > x {
                    break;
                }
                let lp = (p as f64).ln();
                acc += Complex64::from_polar(lp, gamma * lp);
                it.next();
            }
            let xf = x as f64;
            let s = Complex64::new(1.0, gamma);
            let main = Complex64::from_polar(xf, gamma * xf.ln()) / s;
            out.push(TwistedPrimeSum { gamma, x, lhs: acc, main, err_scale: (acc - main).norm() * xf.ln() / xf });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaCounterexample {
    pub kappa: f64,
    pub x: u64,
    /// `|E(x)| / x` with `Γ = ∅`.
    pub scaled_discrepancy: f64,
    pub theta: f64,
    /// `κ θ(x) / x`.
    pub target: f64,
}

/// For `f = τ_{−κ}` (so `f(p) = −κ`) with empty `Γ`, `E(x) = −κ θ(x)` and
/// `|E(x)|/x` tends to `κ` instead of zero.
pub fn kappa_counterexample(kappa: f64, x: u64, table: &FactorTable) -> Result<KappaCounterexample> {
    let spec = MultiplicativeSpec::tau_minus_kappa(kappa);
    let e = discrepancy(&spec, &OrdinateMultiset::new(), x, table)?;
    let theta = chebyshev_theta(x, table)?;
    Ok(KappaCounterexample {
        kappa,
        x,
        scaled_discrepancy: e.norm() / x as f64,
        theta,
        target: kappa * theta / x as f64,
    })
}
