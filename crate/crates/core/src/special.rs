//! Orthogonal-polynomial building blocks.
//!
//! Hermite functions and Laguerre polynomials are evaluated by three-term
//! recurrences. Factorials only ever appear as logarithms.

use std::f64::consts::PI;
use std::sync::OnceLock;

const LN_FACTORIAL_TABLE: usize = 1024;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACTORIAL_TABLE + 1);
        t.push(0.0);
        let mut acc = 0.0;
        for k in 1..=LN_FACTORIAL_TABLE {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    })
}

/// `ln(n!)`.
pub fn ln_factorial(n: usize) -> f64 {
    let table = ln_factorial_table();
    if n <= LN_FACTORIAL_TABLE {
        table[n]
    } else {
        table[LN_FACTORIAL_TABLE]
            + ((LN_FACTORIAL_TABLE + 1)..=n)
                .map(|k| (k as f64).ln())
                .sum::<f64>()
    }
}

/// `ln C(n, k)`; `k <= n` is required.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Normalized Hermite function `ψ_n(x) = (2^n n! √π)^{-1/2} e^{-x²/2} H_n(x)`.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `ψ_0(x) ..= ψ_n_max(x)` in one pass of the recurrence.
pub fn hermite_functions(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(cur);
    for k in 0..n_max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// Generalized Laguerre polynomial `L_n^{(α)}(x)`.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    // Explicit power-series form, used as an independent check on the recurrence.
    fn laguerre_series(n: usize, alpha: usize, x: f64) -> f64 {
        (0..=n)
            .map(|i| {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                let ln_c = ln_factorial(n + alpha)
                    - ln_factorial(n - i)
                    - ln_factorial(alpha + i)
                    - ln_factorial(i);
                sign * ln_c.exp() * x.powi(i as i32)
            })
            .sum()
    }

    // H_n via the physicists' recurrence, then normalized explicitly.
    fn hermite_explicit(n: usize, x: f64) -> f64 {
        let (mut h0, mut h1) = (1.0, 2.0 * x);
        if n == 0 {
            h1 = h0;
        } else {
            for k in 1..n {
                let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
                h0 = h1;
                h1 = h2;
            }
        }
        let norm = (n as f64 * 2f64.ln() + ln_factorial(n) + 0.5 * PI.ln())
            .exp()
            .sqrt();
        h1 * (-0.5 * x * x).exp() / norm
    }

    #[test]
    fn ground_state_value() {
        assert!((hermite_function(0, 0.0) - 0.751_125_544_464_942_5).abs() < 1e-15);
        assert_eq!(hermite_function(1, 0.0), 0.0);
    }

    #[test]
    fn high_order_matches_multiprecision_reference() {
        // 50-digit evaluations of the explicit formula.
        let cases = [
            (50, 3.7, -0.051_686_678_508_137_066_62),
            (5, 0.3, 0.368_004_839_778_071_682_08),
            (5, -2.1, -0.103_104_252_277_353_872_62),
            (5, 6.5, 2.661_496_494_975_968_548_6e-6),
            (12, 0.3, 0.025_365_255_687_101_455_27),
            (12, -2.1, -0.270_548_719_823_957_214_03),
            (12, 6.5, 0.003_385_388_233_892_367_406_6),
        ];
        for (n, x, want) in cases {
            let got = hermite_function(n, x);
            assert!((got - want).abs() < 1e-10, "n={n} x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn recurrence_agrees_with_explicit_form_at_low_order() {
        for n in 0..12 {
            for &x in &[-3.0, -0.7, 0.0, 0.4, 2.2] {
                let a = hermite_function(n, x);
                let b = hermite_explicit(n, x);
                assert!((a - b).abs() < 1e-12, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn table_matches_single_evaluations() {
        let t = hermite_functions(20, 1.3);
        for (n, v) in t.iter().enumerate() {
            assert_eq!(*v, hermite_function(n, 1.3));
        }
    }

    #[test]
    fn laguerre_matches_series() {
        for n in 0..10 {
            for alpha in 0..4 {
                for &x in &[0.0, 0.5, 2.8, 7.0] {
                    let a = laguerre(n, alpha as f64, x);
                    let b = laguerre_series(n, alpha, x);
                    assert!(
                        (a - b).abs() < 1e-9 * b.abs().max(1.0),
                        "n={n} a={alpha} x={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn ln_factorial_beyond_table() {
        let direct: f64 = (1..=1500).map(|k| (k as f64).ln()).sum();
        assert!((ln_factorial(1500) - direct).abs() < 1e-8);
        assert!((ln_binomial(6, 3) - 20f64.ln()).abs() < 1e-14);
    }
}
