//! Computational toolkit for multiplicative functions with small partial sums.
//!
//! The crate tabulates multiplicative functions from their prime-power
//! values, computes the von Mangoldt-type function `Λ_f` defined by
//! `f·log = Λ_f ∗ f`, evaluates Dirichlet series on and to the right of the
//! line `Re(s) = 1`, locates the zeros on that line, builds combinatorial
//! sieve weights, and runs an end-to-end check of the prediction
//! `f(p) ≈ −Σ_{γ∈Γ} p^{iγ}` on average over primes.
//!
//! Modules, bottom-up:
//!
//! * [`primes`]: smallest-prime-factor table, `Λ`, `ψ`, `θ`, Mertens products.
//! * [`multfun`]: specs, value tables, convolution, inversion, `Λ_f`, `τ_Γ`.
//! * [`sums`]: partial, sifted, prime and log-weighted sums; exact identities
//!   and inequality checks.
//! * [`lseries`]: `L(s, f)`, `−L'/L`, zero scanning, mean-value quadrature.
//! * [`sieveweights`]: upper and lower sieve weights and their checks.
//! * [`harness`]: function catalog, experiment pipeline and report output.

pub mod error;
pub mod format;
pub mod harness;
pub mod lseries;
pub mod multfun;
pub mod primes;
pub mod sieveweights;
pub mod sums;

pub use error::{Error, Result};
pub use multfun::{MultiplicativeSpec, OrdinateMultiset, ValueTable};
pub use num_complex::Complex64;
pub use primes::FactorTable;
