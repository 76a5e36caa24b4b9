#![allow(dead_code)]

#[path = "../../src/lseries/zeta_oracle.rs"]
pub mod zeta;

use smallsums::harness::catalog;
use smallsums::{Complex64, MultiplicativeSpec, OrdinateMultiset};

/// The eight functions the identity suites run over, with their known `Γ`.
pub fn catalog8() -> Vec<(MultiplicativeSpec, OrdinateMultiset)> {
    [
        ("moebius", vec![0.0]),
        ("liouville", vec![0.0]),
        ("tau_k:2", vec![]),
        ("tau_k:3", vec![]),
        ("tau_minus_kappa:1.4142135623730951", vec![]),
        ("legendre_chi:5", vec![]),
        ("twist:moebius:1", vec![1.0]),
        ("product:moebius:twist:moebius:1", vec![0.0, 1.0]),
    ]
    .into_iter()
    .map(|(name, g)| (catalog(name).unwrap(), OrdinateMultiset::from_ordinates(&g)))
    .collect()
}

/// A multiplicative function with pseudo-random values at prime powers,
/// bounded by `scale` in modulus.
pub fn random_spec(seed: u64, scale: f64) -> MultiplicativeSpec {
    MultiplicativeSpec::new(format!("random:{seed}"), 1, "pseudo-random prime-power values", move |p, a| {
        let mut h = seed ^ p.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (a as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
        h ^= h >> 33;
        h = h.wrapping_mul(0xFF51_AFD7_ED55_8CCD);
        h ^= h >> 33;
        let r = (h >> 11) as f64 / (1u64 << 53) as f64;
        let th = ((h & 0x7FF) as f64 / 2048.0) * std::f64::consts::TAU;
        Complex64::from_polar(scale * r, th)
    })
}

/// Direct `Σ_{d | n} f(d) g(n/d)` by trial division.
pub fn convolve_at(f: impl Fn(u64) -> Complex64, g: impl Fn(u64) -> Complex64, n: u64) -> Complex64 {
    (1..=n).filter(|d| n % d == 0).map(|d| f(d) * g(n / d)).sum()
}
