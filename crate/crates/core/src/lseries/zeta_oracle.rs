//! Euler–Maclaurin `ζ(s)` used as an independent reference in tests.

use num_complex::Complex64;

const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// `ζ(s)` for `s ≠ 1`, with `N = 64` terms and ten correction terms.
pub fn zeta(s: Complex64) -> Complex64 {
    let n = 64.0f64;
    let pow = |x: f64, e: Complex64| (e * x.ln()).exp();
    let mut acc: Complex64 = (1..64).map(|k| pow(k as f64, -s)).sum();
    acc += pow(n, Complex64::new(1.0, 0.0) - s) / (s - 1.0);
    acc += pow(n, -s) * 0.5;
    let mut rising = s;
    let mut fact = 2.0;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let j = (2 * k + 2) as f64;
        if k > 0 {
            rising = rising * (s + j - 3.0) * (s + j - 2.0);
            fact *= (j - 1.0) * j;
        }
        acc += rising * *b / fact * pow(n, -s - j + 1.0);
    }
    acc
}

/// `ζ'(s)` by a central difference of [`zeta`].
pub fn zeta_prime(s: Complex64) -> Complex64 {
    let h = 1e-5;
    (zeta(s + h) - zeta(s - h)) / (2.0 * h)
}
