//! Single-mode Wigner kernels of `|n⟩⟨m|`.
//!
//! Phase-space coordinates follow the convention where the vacuum is
//! `(2/π) e^{-2(x² + p²)}`, i.e. `x = (a + a†)/2`.

use std::f64::consts::FRAC_2_PI;

use num_complex::Complex64;

use crate::special::{laguerre, ln_factorial};

/// Wigner function of `|n⟩`: `(2/π)(−1)^n L_n(4q²) e^{−2q²}`.
pub fn wigner_fock_diagonal(n: usize, q_sq: f64) -> f64 {
    assert!(q_sq >= 0.0, "q² must be non-negative");
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    FRAC_2_PI * sign * laguerre(n, 0.0, 4.0 * q_sq) * (-2.0 * q_sq).exp()
}

/// Wigner transform of `|n⟩⟨m|` at `(x, p)`.
///
/// For `n ≥ m`: `(2/π)(−1)^m √(m!/n!) (2ᾱ)^{n−m} L_m^{(n−m)}(4|α|²) e^{−2|α|²}`
/// with `α = x + ip`; the `n < m` case is the complex conjugate.
pub fn wigner_fock_cross(n: usize, m: usize, x: f64, p: f64) -> Complex64 {
    let r2 = x * x + p * p;
    kernel_polynomial(n, m, x, p) * (-2.0 * r2).exp()
}

/// [`wigner_fock_cross`] without the `e^{−2|α|²}` envelope.
pub(crate) fn kernel_polynomial(n: usize, m: usize, x: f64, p: f64) -> Complex64 {
    if n < m {
        return kernel_polynomial(m, n, x, p).conj();
    }
    let d = n - m;
    let r2 = x * x + p * p;
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let ratio = (0.5 * (ln_factorial(m) - ln_factorial(n))).exp();
    let lag = laguerre(m, d as f64, 4.0 * r2);
    let alpha_bar2 = Complex64::new(2.0 * x, -2.0 * p);
    alpha_bar2.powu(d as u32) * (FRAC_2_PI * sign * ratio * lag)
}
