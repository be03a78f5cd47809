//! Gauss-Hermite nodes and weights.
//!
//! Nodes are refined by Newton iteration on normalized Hermite *functions*
//! rather than polynomials, which hands back `w·e^{t²}` directly. Tail
//! weights below `1e-300` are still resolved to full relative precision in
//! that scaled form.

use std::f64::consts::PI;

/// Rule for `∫ f(t) e^{-t²} dt ≈ Σ w_i f(t_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermiteRule {
    /// Ascending nodes.
    pub nodes: Vec<f64>,
    /// Classical weights `w_i` (may underflow for very high orders).
    pub weights: Vec<f64>,
    /// `w_i · e^{t_i²}`: weights for integrating `f` with no weight function.
    pub scaled_weights: Vec<f64>,
}

impl GaussHermiteRule {
    /// Builds the `order`-point rule. Exact for polynomials of degree `2·order − 1`.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Hermite order must be positive");
        let n = order;
        let nf = n as f64;
        let half = n.div_ceil(2);
        let mut pos = vec![0.0; half];
        let mut scaled = vec![0.0; half];
        let mut z = 0.0_f64;
        for i in 0..half {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-0.16667),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * pos[0],
                3 => 1.91 * z - 0.91 * pos[1],
                _ => 2.0 * z - pos[i - 2],
            };
            for _ in 0..100 {
                let (psi_n, psi_nm1) = hermite_pair(n, z);
                let deriv = (2.0 * nf).sqrt() * psi_nm1 - z * psi_n;
                let step = psi_n / deriv;
                z -= step;
                if step.abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            let (_, psi_nm1) = hermite_pair(n, z);
            // At a root of ψ_n the derivative is √(2n) ψ_{n-1}.
            let d = (2.0 * nf).sqrt() * psi_nm1;
            pos[i] = z;
            scaled[i] = 2.0 / (d * d);
        }

        let mut nodes = Vec::with_capacity(n);
        let mut scaled_weights = Vec::with_capacity(n);
        for i in 0..half {
            nodes.push(-pos[i]);
            scaled_weights.push(scaled[i]);
        }
        let mirror = if n % 2 == 1 { half - 1 } else { half };
        for i in (0..mirror).rev() {
            nodes.push(pos[i]);
            scaled_weights.push(scaled[i]);
        }
        if n % 2 == 1 {
            // the innermost root is zero for odd orders
            nodes[half - 1] = 0.0;
        }
        let weights = nodes
            .iter()
            .zip(&scaled_weights)
            .map(|(t, s)| s * (-t * t).exp())
            .collect();
        GaussHermiteRule {
            nodes,
            weights,
            scaled_weights,
        }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `∫ f(t) e^{-t²} dt`.
    pub fn integrate_weighted(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(t, w)| w * f(*t))
            .sum()
    }

    /// `∫ f(t) dt` for `f` decaying like a Gaussian.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.scaled_weights)
            .map(|(t, w)| w * f(*t))
            .sum()
    }
}

fn hermite_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_are_exact() {
        for order in [1, 2, 5, 24, 48, 96, 192] {
            let rule = GaussHermiteRule::new(order);
            assert_eq!(rule.order(), order);
            let m0 = rule.integrate_weighted(|_| 1.0);
            assert!((m0 - PI.sqrt()).abs() < 1e-12, "order {order}: {m0}");
            if order >= 2 {
                let m2 = rule.integrate_weighted(|t| t * t);
                assert!((m2 - PI.sqrt() / 2.0).abs() < 1e-12, "order {order}");
            }
            if order >= 3 {
                let m4 = rule.integrate_weighted(|t| t.powi(4));
                assert!((m4 - 0.75 * PI.sqrt()).abs() < 1e-11, "order {order}");
            }
        }
    }

    #[test]
    fn nodes_symmetric_and_sorted() {
        for order in [7, 24, 97] {
            let rule = GaussHermiteRule::new(order);
            for i in 0..order {
                assert!((rule.nodes[i] + rule.nodes[order - 1 - i]).abs() < 1e-12);
                if i > 0 {
                    assert!(rule.nodes[i] > rule.nodes[i - 1]);
                }
            }
        }
    }

    #[test]
    fn unweighted_gaussian_integral() {
        // ∫ e^{-2x²} dx = √(π/2)
        let rule = GaussHermiteRule::new(48);
        let v = rule.integrate(|x| (-2.0 * x * x).exp());
        assert!((v - (PI / 2.0).sqrt()).abs() < 1e-8);
    }

    #[test]
    fn scaled_tail_weights_stay_finite() {
        let rule = GaussHermiteRule::new(384);
        assert!(rule
            .scaled_weights
            .iter()
            .all(|w| w.is_finite() && *w > 0.0));
        let v = rule.integrate(|x| (-x * x).exp());
        assert!((v - PI.sqrt()).abs() < 1e-10, "{v}");
    }
}
