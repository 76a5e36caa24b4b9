use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::OrdinateMultiset;
use crate::error::{Error, Result};

type Rule = dyn Fn(u64, u32) -> Complex64 + Send + Sync;

/// A multiplicative function given by its values on prime powers.
///
/// `f(p^0) = 1` is implied for every prime; the rule is only consulted for
/// exponents `a >= 1`. `declared_d` is the `D` for which the function is
/// claimed to satisfy `|Λ_f| ≤ D·Λ`.
#[derive(Clone)]
pub struct MultiplicativeSpec {
    name: String,
    declared_d: u32,
    description: String,
    rule: Arc<Rule>,
}

impl fmt::Debug for MultiplicativeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplicativeSpec")
            .field("name", &self.name)
            .field("declared_d", &self.declared_d)
            .finish()
    }
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// `p^{iθ}` as `exp(iθ log p)`.
#[inline]
pub(crate) fn prime_phase(p: u64, theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta * (p as f64).ln())
}

impl MultiplicativeSpec {
    pub fn new<F>(name: impl Into<String>, declared_d: u32, description: impl Into<String>, rule: F) -> Self
    where
        F: Fn(u64, u32) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            declared_d,
            description: description.into(),
            rule: Arc::new(rule),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn declared_d(&self) -> u32 {
        self.declared_d
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_declared_d(mut self, d: u32) -> Self {
        self.declared_d = d;
        self
    }

    /// `f(p^a)`.
    #[inline]
    pub fn at(&self, p: u64, a: u32) -> Complex64 {
        if a == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            (self.rule)(p, a)
        }
    }

    /// `f(p^0), …, f(p^a_max)`.
    pub fn prime_power_values(&self, p: u64, a_max: u32) -> Vec<Complex64> {
        (0..=a_max).map(|a| self.at(p, a)).collect()
    }

    /// The convolution identity ε.
    pub fn identity() -> Self {
        Self::new("identity", 0, "convolution identity", |_, _| real(0.0))
    }

    /// The constant function 1 (= τ_1).
    pub fn ones() -> Self {
        Self::new("tau_k:1", 1, "constant function 1", |_, _| real(1.0))
    }

    pub fn moebius() -> Self {
        Self::new("moebius", 1, "Moebius function", |_, a| {
            real(if a == 1 { -1.0 } else { 0.0 })
        })
    }

    pub fn liouville() -> Self {
        Self::new("liouville", 1, "Liouville function", |_, a| {
            real(if a % 2 == 1 { -1.0 } else { 1.0 })
        })
    }

    /// k-fold divisor function, `τ_k(p^a) = C(a+k−1, k−1)`.
    pub fn tau_k(k: u32) -> Self {
        Self::new(format!("tau_k:{k}"), k, format!("{k}-fold divisor function"), move |_, a| {
            real(binomial(a as u64 + k as u64 - 1, a as u64))
        })
    }

    /// `τ_{−κ}`: the coefficients of `ζ(s)^{−κ} = Π_p (1 − p^{−s})^κ`.
    pub fn tau_minus_kappa(kappa: f64) -> Self {
        let d = kappa.abs().ceil() as u32;
        Self::new(
            format!("tau_minus_kappa:{kappa}"),
            d,
            format!("Dirichlet coefficients of zeta^(-{kappa})"),
            move |_, a| real(minus_kappa_coefficient(kappa, a)),
        )
    }

    /// Completely multiplicative extension of the Legendre symbol mod an odd prime `q`.
    pub fn legendre_chi(q: u64) -> Result<Self> {
        if q < 3 || !is_prime_trial(q) {
            return Err(Error::MalformedParameter {
                name: "legendre_chi".into(),
                value: q.to_string(),
            });
        }
        Ok(Self::new(
            format!("legendre_chi:{q}"),
            1,
            format!("quadratic character mod {q}"),
            move |p, a| {
                let chi = legendre_symbol(p, q) as f64;
                real(chi.powi(a as i32))
            },
        ))
    }

    /// `n ↦ f(n)·n^{iγ}`.
    pub fn twist(&self, gamma: f64) -> Self {
        let inner = self.clone();
        Self::new(
            format!("twist:{}:{gamma}", self.name),
            self.declared_d,
            format!("{} twisted by n^(i*{gamma})", self.name),
            move |p, a| inner.at(p, a) * prime_phase(p, a as f64 * gamma),
        )
    }

    /// Dirichlet inverse: `g(p^k) = −Σ_{j=1}^{k} f(p^j)·g(p^{k−j})`.
    pub fn inverse(&self) -> Self {
        let inner = self.clone();
        Self::new(
            format!("inverse:{}", self.name),
            self.declared_d,
            format!("Dirichlet inverse of {}", self.name),
            move |p, a| {
                let f = inner.prime_power_values(p, a);
                let g = inverse_series(&f);
                g[a as usize]
            },
        )
    }

    /// Dirichlet convolution of two specs; the declared bounds add.
    pub fn convolve(&self, other: &Self) -> Self {
        let (f, g) = (self.clone(), other.clone());
        Self::new(
            format!("product:{}:{}", self.name, other.name),
            self.declared_d + other.declared_d,
            format!("{} * {}", self.name, other.name),
            move |p, a| {
                (0..=a)
                    .map(|j| f.at(p, j) * g.at(p, a - j))
                    .fold(Complex64::new(0.0, 0.0), |acc, v| acc + v)
            },
        )
    }

    /// `τ_Γ(p^j) = h_j(p^{iγ_1}, …, p^{iγ_m})`, counted with multiplicity.
    pub fn tau_gamma(gammas: &OrdinateMultiset) -> Self {
        let expanded: Vec<f64> = gammas.expanded().collect();
        let m = expanded.len() as u32;
        let label = expanded
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join(",");
        Self::new(
            format!("tau_gamma:{{{label}}}"),
            m,
            format!("generalized divisor function for ordinates {{{label}}}"),
            move |p, a| complete_homogeneous(&expanded, p, a),
        )
    }
}

/// Power series inverse of `1 + f_1 X + f_2 X^2 + …`.
pub(crate) fn inverse_series(f: &[Complex64]) -> Vec<Complex64> {
    let mut g = vec![Complex64::new(0.0, 0.0); f.len()];
    g[0] = Complex64::new(1.0, 0.0);
    for k in 1..f.len() {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=k {
            acc += f[j] * g[k - j];
        }
        g[k] = -acc;
    }
    g
}

/// `h_a(x_1, …, x_m)` with `x_i = p^{iγ_i}`, by multiplying geometric series.
fn complete_homogeneous(gammas: &[f64], p: u64, a: u32) -> Complex64 {
    let a = a as usize;
    let mut c = vec![Complex64::new(0.0, 0.0); a + 1];
    c[0] = Complex64::new(1.0, 0.0);
    for &g in gammas {
        let x = prime_phase(p, g);
        for j in 1..=a {
            let prev = c[j - 1];
            c[j] += x * prev;
        }
    }
    c[a]
}

fn minus_kappa_coefficient(kappa: f64, a: u32) -> f64 {
    let mut c = 1.0;
    for j in 1..=a {
        c *= (j as f64 - 1.0 - kappa) / j as f64;
    }
    c
}

fn binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

pub(crate) fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Legendre symbol `(a/q)` via Euler's criterion.
pub(crate) fn legendre_symbol(a: u64, q: u64) -> i32 {
    let r = a % q;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (q - 1) / 2, q) == 1 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn basic_values() {
        assert_eq!(MultiplicativeSpec::moebius().at(3, 1).re, -1.0);
        assert_eq!(MultiplicativeSpec::moebius().at(3, 2).re, 0.0);
        assert_eq!(MultiplicativeSpec::liouville().at(2, 3).re, -1.0);
        assert_eq!(MultiplicativeSpec::tau_k(2).at(2, 5).re, 6.0);
        assert_eq!(MultiplicativeSpec::tau_k(3).at(2, 2).re, 6.0);
        assert_eq!(MultiplicativeSpec::identity().at(5, 0).re, 1.0);
        assert_eq!(MultiplicativeSpec::identity().at(5, 1).re, 0.0);
    }

    #[test]
    fn minus_kappa_matches_binomial_series() {
        // (1 − X)^κ = Σ C(κ, a) (−X)^a
        let kappa = std::f64::consts::SQRT_2;
        let spec = MultiplicativeSpec::tau_minus_kappa(kappa);
        assert!((spec.at(2, 1).re + kappa).abs() < 1e-15);
        assert!((spec.at(2, 2).re - kappa * (kappa - 1.0) / 2.0).abs() < 1e-15);
        let c3 = -kappa * (kappa - 1.0) * (kappa - 2.0) / 6.0;
        assert!((spec.at(7, 3).re - c3).abs() < 1e-15);
        assert_eq!(spec.declared_d(), 2);
        // integer κ recovers the Moebius function
        let mu_like = MultiplicativeSpec::tau_minus_kappa(1.0);
        assert_eq!(mu_like.at(3, 1).re, -1.0);
        assert_eq!(mu_like.at(3, 2).re, 0.0);
    }

    #[test]
    fn legendre_mod_5() {
        let chi = MultiplicativeSpec::legendre_chi(5).unwrap();
        assert_eq!(chi.at(2, 1).re, -1.0);
        assert_eq!(chi.at(11, 1).re, 1.0);
        assert_eq!(chi.at(5, 1).re, 0.0);
        assert_eq!(chi.at(2, 2).re, 1.0);
        assert!(MultiplicativeSpec::legendre_chi(9).is_err());
        assert!(MultiplicativeSpec::legendre_chi(2).is_err());
    }

    #[test]
    fn inverse_examples() {
        let inv = MultiplicativeSpec::ones().inverse();
        assert_eq!(inv.at(2, 1).re, -1.0);
        assert_eq!(inv.at(2, 2).re, 0.0);
        let inv_mu = MultiplicativeSpec::moebius().inverse();
        for k in 1..6 {
            assert_eq!(inv_mu.at(3, k).re, 1.0);
        }
        let gamma = 0.7;
        let tg = MultiplicativeSpec::tau_gamma(&OrdinateMultiset::from_ordinates(&[gamma]));
        assert!(close(tg.inverse().at(5, 1), -prime_phase(5, gamma)));
    }

    #[test]
    fn tau_gamma_examples() {
        let empty = MultiplicativeSpec::tau_gamma(&OrdinateMultiset::new());
        assert_eq!(empty.at(2, 0).re, 1.0);
        assert_eq!(empty.at(2, 3).norm(), 0.0);
        let double_zero = MultiplicativeSpec::tau_gamma(&OrdinateMultiset::from_pairs([(0.0, 2)]));
        for j in 0..6 {
            assert!(close(double_zero.at(3, j), Complex64::new(j as f64 + 1.0, 0.0)));
        }
        let g = 1.3;
        let single = MultiplicativeSpec::tau_gamma(&OrdinateMultiset::from_ordinates(&[g]));
        for j in 0..5 {
            assert!(close(single.at(7, j), prime_phase(7, j as f64 * g)));
        }
    }

    #[test]
    fn twist_examples() {
        let mu = MultiplicativeSpec::moebius();
        assert!(close(mu.twist(0.0).at(3, 1), mu.at(3, 1)));
        let g = 2.5;
        assert!(close(MultiplicativeSpec::ones().twist(g).at(11, 1), prime_phase(11, g)));
        let back = MultiplicativeSpec::liouville().twist(g).twist(-g);
        for a in 0..5 {
            assert!(close(back.at(13, a), MultiplicativeSpec::liouville().at(13, a)));
        }
    }

    #[test]
    fn product_at_primes_and_declared_d() {
        let mu = MultiplicativeSpec::moebius();
        let prod = mu.convolve(&mu.twist(1.0));
        assert_eq!(prod.declared_d(), 2);
        let expected = Complex64::new(-1.0, 0.0) - prime_phase(7, 1.0);
        assert!(close(prod.at(7, 1), expected));
    }
}
