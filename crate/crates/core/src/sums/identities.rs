use num_complex::Complex64;

use crate::error::{check_range, Error, Result};
use crate::multfun::{eval_range, f_gamma, f_gamma_spec, lambda_terms, MultiplicativeSpec, OrdinateMultiset, ValueTable};
use crate::primes::FactorTable;

/// `Σ_{n≤x} (F ∗ G)(n)` by splitting the divisor lattice at `split`:
/// `Σ_{a≤U} F(a) S_G(x/a) + Σ_{b≤x/U} G(b) S_F(x/b) − S_F(U) S_G(x/U)`.
pub fn hyperbola_sum(f: &ValueTable, g: &ValueTable, x: u64, split: u64) -> Result<Complex64> {
    check_range("x", x, f.limit().min(g.limit()))?;
    if split < 1 || split > x {
        return Err(Error::InvalidArgument(format!("split must lie in [1, {x}], got {split}")));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 1..=split {
        acc += f.value(a) * g.prefix(x / a);
    }
    let v = x / split;
    for b in 1..=v {
        acc += g.value(b) * f.prefix(x / b);
    }
    Ok(acc - f.prefix(split) * g.prefix(v))
}

/// `Σ_{n≤t} h(n)·F₀(t/n)`.
pub fn hyperbolic_transform(h: &ValueTable, f0: impl Fn(f64) -> Complex64, t: f64) -> Complex64 {
    if t < 1.0 {
        return Complex64::new(0.0, 0.0);
    }
    let n_max = (t.floor() as u64).min(h.limit());
    (1..=n_max)
        .map(|n| h.value(n) * f0(t / n as f64))
        .fold(Complex64::new(0.0, 0.0), |a, b| a + b)
}

/// Recovers `F(x) = Σ_{n≤x} h^{-1}(n)·G(x/n)` from `G = Σ_{n≤t} h(n) F(t/n)`.
pub fn inversion_recover(g: impl Fn(f64) -> Complex64, h: &MultiplicativeSpec, x: f64) -> Result<Complex64> {
    if !(x >= 1.0) {
        return Err(Error::InvalidArgument(format!("x must be at least 1, got {x}")));
    }
    let n_max = x.floor() as u64;
    let table = FactorTable::new(n_max.max(2))?;
    let inv = eval_range(&h.inverse(), n_max, &table)?;
    Ok(hyperbolic_transform(&inv, g, x))
}

/// Sample points used by [`recursion_check`]: every `x' ≤ 200`, then a
/// geometric ladder up to `x`, and `x` itself.
fn recursion_samples(x: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=x.min(200)).collect();
    if x > 200 {
        let steps = 64;
        let ratio = (x as f64 / 200.0).powf(1.0 / steps as f64);
        for i in 1..=steps {
            out.push(((200.0 * ratio.powi(i)).round() as u64).min(x));
        }
        out.push(x);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Largest error in `Σ_{n≤x'} f_Γ(n) log n = Σ_{n≤x'} Λ_{f_Γ}(n) S(x'/n, f_Γ)`
/// over sampled `x' ≤ x`. The identity is exact, so this measures rounding.
pub fn recursion_check(
    spec: &MultiplicativeSpec,
    gammas: &OrdinateMultiset,
    x: u64,
    table: &FactorTable,
) -> Result<f64> {
    let fg = f_gamma(spec, gammas, x, table)?;
    let terms = lambda_terms(&f_gamma_spec(spec, gammas), x, table)?;
    let mut weighted = vec![Complex64::new(0.0, 0.0); x as usize + 1];
    for n in 1..=x as usize {
        weighted[n] = weighted[n - 1] + fg.value(n as u64) * (n as f64).ln();
    }
    let mut worst = 0.0f64;
    for xp in recursion_samples(x) {
        let mut rhs = Complex64::new(0.0, 0.0);
        for t in terms.iter().take_while(|t| t.q <= xp) {
            rhs += t.value * fg.prefix(xp / t.q);
        }
        worst = worst.max((weighted[xp as usize] - rhs).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(n: u64) -> FactorTable {
        FactorTable::new(n).unwrap()
    }

    fn direct_divisor_sum(x: u64) -> u64 {
        (1..=x).map(|n| (1..=n).filter(|d| n % d == 0).count() as u64).sum()
    }

    #[test]
    fn hyperbola_examples() {
        let t = table(10_000);
        let one = eval_range(&MultiplicativeSpec::ones(), 10_000, &t).unwrap();
        let mu = eval_range(&MultiplicativeSpec::moebius(), 10_000, &t).unwrap();
        assert_eq!(direct_divisor_sum(100), 482);
        assert_eq!(hyperbola_sum(&one, &one, 100, 10).unwrap().re, 482.0);
        for x in [1, 17, 100, 9999] {
            let s = (x as f64).sqrt() as u64;
            assert!((hyperbola_sum(&mu, &one, x, s.max(1)).unwrap().re - 1.0).abs() < 1e-9);
        }
        // split = 1 against the brute-force convolution sum
        let conv = crate::multfun::dirichlet_convolve(&mu, &one).unwrap();
        let tau2 = crate::multfun::dirichlet_convolve(&one, &one).unwrap();
        for x in [1u64, 10, 500, 10_000] {
            assert!((hyperbola_sum(&mu, &one, x, 1).unwrap() - conv.prefix(x)).norm() < 1e-9);
            assert!((hyperbola_sum(&one, &one, x, 1).unwrap() - tau2.prefix(x)).norm() < 1e-9);
        }
        assert!(hyperbola_sum(&one, &one, 100, 0).is_err());
        assert!(hyperbola_sum(&one, &one, 100, 101).is_err());
    }

    #[test]
    fn inversion_examples() {
        let floor = |t: f64| Complex64::new(if t < 1.0 { 0.0 } else { t.floor() }, 0.0);
        for x in [1.0, 2.5, 10.0, 123.4, 1000.0] {
            let f = inversion_recover(floor, &MultiplicativeSpec::ones(), x).unwrap();
            assert!((f.re - 1.0).abs() < 1e-9, "x = {x}");
        }
        let g = |t: f64| Complex64::new(if t < 1.0 { 0.0 } else { t.sin() + 2.0 }, 0.0);
        let f = inversion_recover(g, &MultiplicativeSpec::identity(), 37.5).unwrap();
        assert!((f - g(37.5)).norm() < 1e-12);
    }

    #[test]
    fn inversion_round_trip_linear() {
        let t = table(1000);
        let h = MultiplicativeSpec::moebius();
        let hv = eval_range(&h, 1000, &t).unwrap();
        let f0 = |u: f64| Complex64::new(u, 0.0);
        for x in [1.0, 7.0, 99.5, 1000.0] {
            let g = |s: f64| hyperbolic_transform(&hv, f0, s);
            let back = inversion_recover(g, &h, x).unwrap();
            assert!((back - f0(x)).norm() < 1e-7, "x = {x}");
        }
    }

    #[test]
    fn recursion_examples() {
        let t = table(10_000);
        let x = 10_000;
        let tol = 1e-6 * x as f64;
        assert!(recursion_check(&MultiplicativeSpec::moebius(), &OrdinateMultiset::new(), x, &t).unwrap() <= tol);
        let zero = OrdinateMultiset::from_ordinates(&[0.0]);
        assert!(recursion_check(&MultiplicativeSpec::liouville(), &zero, x, &t).unwrap() <= tol);
        let k = MultiplicativeSpec::tau_minus_kappa(std::f64::consts::SQRT_2);
        assert!(recursion_check(&k, &OrdinateMultiset::new(), x, &t).unwrap() <= 1e-5 * x as f64);
    }

    #[test]
    fn samples_cover_endpoints() {
        let s = recursion_samples(100_000);
        assert_eq!(s[0], 1);
        assert_eq!(*s.last().unwrap(), 100_000);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }
}
