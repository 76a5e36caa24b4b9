//! Partial sums over integers and primes, the exact identities relating
//! them, and fitted-constant inequality checks.

mod bounds;
mod identities;

pub use bounds::{
    coprime_decay_profile, dk_omega_fit, halasz_ratio, lattice_count_bound, sifted_envelope_ratios,
    sifted_power_sum_check, CoprimeDecayRow, DkOmegaFit, SiftedEnvelopeRow, SiftedPowerCheck,
};
pub use identities::{hyperbola_sum, hyperbolic_transform, inversion_recover, recursion_check};

use num_complex::Complex64;

use crate::error::{check_range, Error, Result};
use crate::format::sci17;
use crate::multfun::{lambda_prime_powers, max_exponent, prime_phase, MultiplicativeSpec, OrdinateMultiset, ValueTable};
use crate::primes::FactorTable;

/// A complex-valued sum sampled on an increasing grid of `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct SumGrid {
    pub x_points: Vec<u64>,
    pub values: Vec<Complex64>,
    pub label: String,
}

impl SumGrid {
    pub fn new(label: impl Into<String>, x_points: Vec<u64>, values: Vec<Complex64>) -> Result<Self> {
        if x_points.len() != values.len() {
            return Err(Error::InvalidArgument("grid and values differ in length".into()));
        }
        if x_points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("grid points must increase strictly".into()));
        }
        Ok(Self { x_points, values, label: label.into() })
    }

    /// CSV with header `x,re,im,abs`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,re,im,abs\n");
        for (x, v) in self.x_points.iter().zip(&self.values) {
            out.push_str(&format!("{x},{},{},{}\n", sci17(v.re), sci17(v.im), sci17(v.norm())));
        }
        out
    }
}

fn check_grid(xs: &[u64]) -> Result<()> {
    if xs.is_empty() || xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("x grid must be non-empty and strictly increasing".into()));
    }
    Ok(())
}

/// `S(x, F) = Σ_{n≤x} F(n)`.
pub fn partial_sum(f: &ValueTable, x: u64) -> Result<Complex64> {
    check_range("x", x, f.limit())?;
    Ok(f.prefix(x))
}

/// `Σ_{n≤x, P^-(n)>z} F(n)`, including `n = 1`.
pub fn sifted_sum(f: &ValueTable, z: f64, x: u64, table: &FactorTable) -> Result<Complex64> {
    check_range("x", x, f.limit().min(table.limit()))?;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..=x {
        if n == 1 || table.lpf(n) as f64 > z {
            acc += f.value(n);
        }
    }
    Ok(acc)
}

/// `Σ_{n≤x, (n,d)=1} F(n)`.
pub fn coprime_sum(f: &ValueTable, d: u64, x: u64) -> Result<Complex64> {
    check_range("x", x, f.limit())?;
    let primes = trial_prime_factors(d);
    Ok((1..=x)
        .filter(|n| primes.iter().all(|p| n % p != 0))
        .map(|n| f.value(n))
        .sum())
}

pub(crate) fn trial_prime_factors(mut d: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= d {
        if d % p == 0 {
            out.push(p);
            while d % p == 0 {
                d /= p;
            }
        }
        p += 1;
    }
    if d > 1 {
        out.push(d);
    }
    out
}

/// `Σ_{p≤x} f(p) log p`.
pub fn prime_log_sum(spec: &MultiplicativeSpec, x: u64, table: &FactorTable) -> Result<Complex64> {
    check_range("x", x, table.limit())?;
    Ok(table
        .primes_up_to(x)
        .iter()
        .map(|&p| spec.at(p as u64, 1) * (p as f64).ln())
        .fold(Complex64::new(0.0, 0.0), |a, b| a + b))
}

#[inline]
fn discrepancy_term(spec: &MultiplicativeSpec, gammas: &[f64], p: u64) -> Complex64 {
    let mut v = spec.at(p, 1);
    for &g in gammas {
        v += prime_phase(p, g);
    }
    v * (p as f64).ln()
}

/// `E(x) = Σ_{p≤x} (f(p) + Σ_{γ∈Γ} p^{iγ}) log p`.
pub fn discrepancy(
    spec: &MultiplicativeSpec,
    gammas: &OrdinateMultiset,
    x: u64,
    table: &FactorTable,
) -> Result<Complex64> {
    Ok(discrepancy_grid(spec, gammas, &[x], table)?.values[0])
}

/// `E(x)` at every grid point, in one pass over the primes.
pub fn discrepancy_grid(
    spec: &MultiplicativeSpec,
    gammas: &OrdinateMultiset,
    xs: &[u64],
    table: &FactorTable,
) -> Result<SumGrid> {
    check_grid(xs)?;
    check_range("x", *xs.last().unwrap(), table.limit())?;
    let g: Vec<f64> = gammas.expanded().collect();
    let mut values = Vec::with_capacity(xs.len());
    let mut acc = Complex64::new(0.0, 0.0);
    let mut primes = table.primes_up_to(*xs.last().unwrap()).iter().peekable();
    for &x in xs {
        while let Some(&&p) = primes.peek() {
            if p as u64 > x {
                break;
            }
            acc += discrepancy_term(spec, &g, p as u64);
            primes.next();
        }
        values.push(acc);
    }
    SumGrid::new(format!("discrepancy:{}", spec.name()), xs.to_vec(), values)
}

/// `Σ_{n≤x} Λ_{f_Γ}(n)` using `Λ_{f_Γ}(p^k) = Λ_f(p^k) + Σ_γ p^{ikγ} log p`.
pub fn lambda_partial_sum(
    spec: &MultiplicativeSpec,
    gammas: &OrdinateMultiset,
    x: u64,
    table: &FactorTable,
) -> Result<Complex64> {
    check_range("x", x, table.limit())?;
    let g: Vec<f64> = gammas.expanded().collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for &p in table.primes_up_to(x) {
        let p = p as u64;
        let lp = (p as f64).ln();
        let a_max = max_exponent(p, x);
        let lam = lambda_prime_powers(spec, p, a_max);
        for (k, v) in lam.iter().enumerate().skip(1) {
            let mut term = *v;
            for &gm in &g {
                term += prime_phase(p, k as f64 * gm) * lp;
            }
            acc += term;
        }
    }
    Ok(acc)
}

/// Number of prime powers `p^k ≤ x` with `k ≥ 2`.
pub fn higher_prime_power_count(x: u64, table: &FactorTable) -> Result<u64> {
    check_range("x", x, table.limit())?;
    Ok(table
        .primes_up_to(crate::primes::isqrt(x))
        .iter()
        .map(|&p| max_exponent(p as u64, x).saturating_sub(1) as u64)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multfun::eval_range;
    use crate::primes::chebyshev_theta;

    #[test]
    fn partial_sum_examples() {
        let t = FactorTable::new(100).unwrap();
        let mu = eval_range(&MultiplicativeSpec::moebius(), 100, &t).unwrap();
        // brute-force Mertens sum
        let brute: f64 = [1., -1., -1., 0., -1., 1., -1., 0., 0., 1.].iter().sum();
        assert_eq!(partial_sum(&mu, 10).unwrap().re, brute);
        assert_eq!(brute, -1.0);
        let one = eval_range(&MultiplicativeSpec::ones(), 100, &t).unwrap();
        assert_eq!(partial_sum(&one, 10).unwrap().re, 10.0);
        assert_eq!(partial_sum(&mu, 1).unwrap().re, 1.0);
        assert!(partial_sum(&mu, 101).is_err());
    }

    #[test]
    fn sifted_sum_examples() {
        let t = FactorTable::new(100).unwrap();
        let one = eval_range(&MultiplicativeSpec::ones(), 100, &t).unwrap();
        let brute = (1..=30u64).filter(|n| n % 2 != 0 && n % 3 != 0).count() as f64;
        assert_eq!(brute, 10.0);
        assert_eq!(sifted_sum(&one, 3.0, 30, &t).unwrap().re, brute);
        assert_eq!(sifted_sum(&one, 40.0, 30, &t).unwrap().re, 1.0);
        let mu = eval_range(&MultiplicativeSpec::moebius(), 100, &t).unwrap();
        assert_eq!(sifted_sum(&mu, 1.0, 10, &t).unwrap(), partial_sum(&mu, 10).unwrap());
    }

    #[test]
    fn prime_log_sum_examples() {
        let t = FactorTable::new(100).unwrap();
        let theta10 = 2f64.ln() + 3f64.ln() + 5f64.ln() + 7f64.ln();
        assert!((theta10 - 5.3471).abs() < 1e-4);
        let one = prime_log_sum(&MultiplicativeSpec::ones(), 10, &t).unwrap();
        assert!((one.re - theta10).abs() < 1e-12);
        let mu = prime_log_sum(&MultiplicativeSpec::moebius(), 10, &t).unwrap();
        assert!((mu.re + theta10).abs() < 1e-12);
        let zero = MultiplicativeSpec::new("zero_at_primes", 1, "", |_, _| Complex64::new(0.0, 0.0));
        assert_eq!(prime_log_sum(&zero, 100, &t).unwrap().norm(), 0.0);
    }

    #[test]
    fn discrepancy_cancels_exactly() {
        let t = FactorTable::new(100_000).unwrap();
        let zero = OrdinateMultiset::from_ordinates(&[0.0]);
        let d = discrepancy(&MultiplicativeSpec::moebius(), &zero, 100_000, &t).unwrap();
        assert_eq!(d.norm(), 0.0);
        let g = 2.3;
        let tw = MultiplicativeSpec::moebius().twist(g);
        let d = discrepancy(&tw, &OrdinateMultiset::from_ordinates(&[g]), 100_000, &t).unwrap();
        assert_eq!(d.norm(), 0.0);
    }

    #[test]
    fn discrepancy_of_minus_kappa_is_scaled_theta() {
        let t = FactorTable::new(1_000_000).unwrap();
        let kappa = std::f64::consts::SQRT_2;
        let d = discrepancy(&MultiplicativeSpec::tau_minus_kappa(kappa), &OrdinateMultiset::new(), 1_000_000, &t)
            .unwrap();
        let theta = chebyshev_theta(1_000_000, &t).unwrap();
        assert!((theta - 998_484.18).abs() < 0.01, "{theta}");
        assert!((d.re + kappa * theta).abs() < 1e-6 * theta);
    }

    #[test]
    fn grid_matches_pointwise() {
        let t = FactorTable::new(10_000).unwrap();
        let spec = MultiplicativeSpec::legendre_chi(5).unwrap();
        let xs = [10, 100, 1000, 10_000];
        let grid = discrepancy_grid(&spec, &OrdinateMultiset::new(), &xs, &t).unwrap();
        for (x, v) in xs.iter().zip(&grid.values) {
            assert_eq!(*v, prime_log_sum(&spec, *x, &t).unwrap());
        }
        assert!(discrepancy_grid(&spec, &OrdinateMultiset::new(), &[10, 10], &t).is_err());
        let csv = grid.to_csv();
        assert!(csv.starts_with("x,re,im,abs\n10,"));
        assert_eq!(csv.lines().count(), 5);
    }

    #[test]
    fn lambda_partial_sum_examples() {
        let t = FactorTable::new(10_000).unwrap();
        let psi10 = crate::primes::chebyshev_psi(10, &t).unwrap();
        let mu = lambda_partial_sum(&MultiplicativeSpec::moebius(), &OrdinateMultiset::new(), 10, &t).unwrap();
        assert!((mu.re + psi10).abs() < 1e-12);
        let one = lambda_partial_sum(&MultiplicativeSpec::ones(), &OrdinateMultiset::new(), 10_000, &t).unwrap();
        assert!((one.re - crate::primes::chebyshev_psi(10_000, &t).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn lambda_sum_close_to_prime_sum() {
        let t = FactorTable::new(10_000).unwrap();
        let x = 10_000;
        let extra = higher_prime_power_count(x, &t).unwrap() as f64;
        assert_eq!(higher_prime_power_count(10, &t).unwrap(), 3); // 4, 8, 9
        let gammas = OrdinateMultiset::from_ordinates(&[1.0]);
        for spec in [
            MultiplicativeSpec::moebius(),
            MultiplicativeSpec::liouville(),
            MultiplicativeSpec::tau_k(2),
        ] {
            let a = lambda_partial_sum(&spec, &gammas, x, &t).unwrap();
            let b = discrepancy(&spec, &gammas, x, &t).unwrap();
            let m = gammas.total_multiplicity() as f64;
            let bound = (spec.declared_d() as f64 + m) * extra * (x as f64).ln();
            assert!((a - b).norm() <= bound);
        }
    }

    #[test]
    fn coprime_sum_filters() {
        let t = FactorTable::new(100).unwrap();
        let one = eval_range(&MultiplicativeSpec::ones(), 100, &t).unwrap();
        assert_eq!(coprime_sum(&one, 6, 30).unwrap().re, 10.0);
        assert_eq!(coprime_sum(&one, 1, 30).unwrap().re, 30.0);
        assert_eq!(trial_prime_factors(210), vec![2, 3, 5, 7]);
    }
}
