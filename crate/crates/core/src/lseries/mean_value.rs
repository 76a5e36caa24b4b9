//! Mean values of Dirichlet polynomials on vertical segments.

use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use serde::Serialize;

use super::{integrate_partitioned, npow};
use crate::error::{check_range, Error, Result};
use crate::multfun::{f_gamma_spec, lambda_terms, MultiplicativeSpec, OrdinateMultiset};
use crate::primes::FactorTable;

const PIECE_WIDTH: f64 = 1.0;

/// A Dirichlet polynomial `Σ w_n e^{-it log n}` with the `n^{-σ}` already folded in.
struct Poly {
    weights: Vec<Complex64>,
    logs: Vec<f64>,
}

impl Poly {
    fn new(terms: impl Iterator<Item = (u64, Complex64)>, sigma: f64) -> Self {
        let (mut weights, mut logs) = (Vec::new(), Vec::new());
        for (n, a) in terms {
            if a != Complex64::new(0.0, 0.0) {
                weights.push(a * npow(n, Complex64::new(sigma, 0.0)));
                logs.push((n as f64).ln());
            }
        }
        Self { weights, logs }
    }

    fn norm_sqr_at(&self, t: f64) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, l) in self.weights.iter().zip(&self.logs) {
            acc += w * Complex64::from_polar(1.0, -t * l);
        }
        acc.norm_sqr()
    }

    fn diagonal(&self) -> f64 {
        self.weights.iter().map(|w| w.norm_sqr()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MontgomeryCheck {
    /// `∫_{-T}^{T} |Σ a_n n^{-σ-it}|² dt`.
    pub lhs: f64,
    /// `3 ∫_{-T}^{T} |Σ b_n n^{-σ-it}|² dt`.
    pub rhs: f64,
    /// Allowance for quadrature error.
    pub slack: f64,
}

impl MontgomeryCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + self.slack
    }
}

/// Compares `∫|A|²` with `3∫|B|²` over `[-T, T]` on `Re(s) = σ`, where
/// `a[i]`, `b[i]` are the coefficients of `n = i + 1`. Requires `|a_n| ≤ b_n`.
pub fn montgomery_check(a: &[Complex64], b: &[f64], sigma: f64, t: f64) -> Result<MontgomeryCheck> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("T must be positive, got {t}")));
    }
    for i in 0..a.len().max(b.len()) {
        let an = a.get(i).map_or(0.0, |v| v.norm());
        let bn = b.get(i).copied().unwrap_or(0.0);
        if an > bn * (1.0 + 1e-12) {
            return Err(Error::Domain(format!("|a_{}| = {an} exceeds b_{} = {bn}", i + 1, i + 1)));
        }
    }
    let pa = Poly::new(a.iter().enumerate().map(|(i, &v)| (i as u64 + 1, v)), sigma);
    let pb = Poly::new(b.iter().enumerate().map(|(i, &v)| (i as u64 + 1, Complex64::new(v, 0.0))), sigma);
    // the diagonal term dominates the mean value and sets the tolerance scale
    let scale = (6.0 * t * pb.diagonal()).max(f64::MIN_POSITIVE);
    let eps = 1e-7 * scale;
    let lhs = integrate_partitioned(&|u| pa.norm_sqr_at(u), -t, t, PIECE_WIDTH, eps);
    let rhs = 3.0 * integrate_partitioned(&|u| pb.norm_sqr_at(u), -t, t, PIECE_WIDTH, eps);
    Ok(MontgomeryCheck { lhs, rhs, slack: 1e-6 * rhs.max(scale) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParsevalReport {
    /// `∫_1^X |S(t, Λ_{f_Γ})|² t^{-2c-1} dt`.
    pub lhs: f64,
    /// `(1/2π) ∫_{-T}^{T} |L'/L(c+it, f_Γ)|² / (c² + t²) dt`.
    pub rhs: f64,
    /// `lhs / rhs`; `None` when both vanish.
    pub ratio: Option<f64>,
    pub c: f64,
    /// Largest `|L'/L(c+it)|` met at a quadrature node.
    pub max_abs_log_deriv: f64,
}

/// Both sides of the Parseval identity for the Mellin pair
/// `S(t, Λ_{f_Γ}) ↔ −L'/L(s, f_Γ)/s` at `c = 1 + 1/log x`, with the
/// prime-power sum truncated at `X` and the integral at `±T`.
pub fn parseval_ratio(
    spec: &MultiplicativeSpec,
    gammas: &OrdinateMultiset,
    x: u64,
    t_big: f64,
    big_x: u64,
    table: &FactorTable,
) -> Result<ParsevalReport> {
    if x < 3 {
        return Err(Error::InvalidArgument(format!("x must be at least 3, got {x}")));
    }
    if !(t_big > 0.0) {
        return Err(Error::InvalidArgument(format!("T must be positive, got {t_big}")));
    }
    check_range("X", big_x, table.limit())?;
    let c = 1.0 + 1.0 / (x as f64).ln();
    let alpha = 2.0 * c;
    let terms = lambda_terms(&f_gamma_spec(spec, gammas), big_x, table)?;

    let mut lhs = 0.0;
    let mut s = Complex64::new(0.0, 0.0);
    for (i, term) in terms.iter().enumerate() {
        s += term.value;
        let a = term.q as f64;
        let b = terms.get(i + 1).map_or(big_x as f64, |n| n.q as f64);
        lhs += s.norm_sqr() * (a.powf(-alpha) - b.powf(-alpha)) / alpha;
    }

    let poly = Poly::new(terms.iter().map(|t| (t.q, t.value)), c);
    if poly.weights.is_empty() {
        return Ok(ParsevalReport { lhs: 0.0, rhs: 0.0, ratio: None, c, max_abs_log_deriv: 0.0 });
    }
    let max_bits = AtomicU64::new(0);
    let integrand = |t: f64| {
        let g = poly.norm_sqr_at(t);
        max_bits.fetch_max(g.to_bits(), Ordering::Relaxed);
        g / (c * c + t * t)
    };
    let eps = 1e-6 * lhs.max(poly.diagonal() / c);
    let rhs = integrate_partitioned(&integrand, -t_big, t_big, PIECE_WIDTH, eps) / (2.0 * std::f64::consts::PI);
    let max_sq = f64::from_bits(max_bits.load(Ordering::Relaxed));
    Ok(ParsevalReport { lhs, rhs, ratio: Some(lhs / rhs), c, max_abs_log_deriv: max_sq.sqrt() })
}
