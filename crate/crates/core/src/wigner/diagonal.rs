//! The diagonal `(Q₀, Q₁)` form of the vortex-state Wigner function.
//!
//! Keeps only `|C_{k,l}|²` weights for `m = l − k ≥ 0`, so it cannot carry
//! the interference between different `j`. It is a comparison view; the
//! operator expansion in the parent module is the reference.

use std::f64::consts::PI;

use serde::Serialize;

use crate::beamsplitter::{apply_beam_splitter, BsCoefficient};
use crate::error::Result;
use crate::fock::{make_tmss, SqueezeParams};
use crate::gauss_hermite::GaussHermiteRule;
use crate::special::laguerre;

use super::{PhasePoint, WignerOperator};

/// Evaluator for the diagonal form with its numerical normalization.
#[derive(Debug, Clone)]
pub struct DiagonalForm {
    pub params: SqueezeParams,
    /// `(j, m, weight)`.
    pub terms: Vec<(usize, usize, f64)>,
    /// Multiplier making `∫W = 1` in the kernel's coordinates.
    pub scale: f64,
}

fn term(j: usize, m: usize, q: &PhasePoint) -> f64 {
    let (q0, q1) = (q.q0(), q.q1());
    laguerre(j + m, 0.0, 4.0 * (q0 + q1))
        * laguerre(j - m, 0.0, 4.0 * (q0 - q1))
        * (-4.0 * q0).exp()
        / PI
}

impl DiagonalForm {
    pub fn new(params: SqueezeParams) -> Result<Self> {
        params.validate()?;
        let t2 = params.r.tanh().powi(2);
        let mut terms = Vec::new();
        for j in 0..=params.n_max {
            let tj = t2.powi(j as i32);
            for m in 0..=j {
                let w: f64 = (0..=j - m)
                    .map(|k| BsCoefficient::new(j, k, k + m).value.norm_sqr())
                    .sum();
                if tj * w > 0.0 {
                    terms.push((j, m, tj * w));
                }
            }
        }
        let total: f64 = terms.iter().map(|t| t.2).sum();
        for t in &mut terms {
            t.2 /= total;
        }
        let form = DiagonalForm {
            params,
            terms,
            scale: 1.0,
        };
        // e^{−4Q₀} = e^{−Σ v²}: classical Gauss-Hermite is exact here.
        let gh = GaussHermiteRule::new(2 * params.n_max + 2);
        let n = gh.nodes.len();
        let mut integral = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let q = PhasePoint::new(gh.nodes[a], gh.nodes[b], gh.nodes[c], gh.nodes[d]);
                        let w = gh.weights[a] * gh.weights[b] * gh.weights[c] * gh.weights[d];
                        integral += w * form.raw(&q) * q.radius_sq().exp();
                    }
                }
            }
        }
        // The form's Gaussian is e^{−|v|²}; the kernels use e^{−2|q|²}, so
        // v = √2·q and the Jacobian contributes 4.
        Ok(DiagonalForm {
            scale: 4.0 / integral,
            ..form
        })
    }

    fn raw(&self, v: &PhasePoint) -> f64 {
        self.terms.iter().map(|(j, m, w)| w * term(*j, *m, v)).sum()
    }

    pub fn eval(&self, q: &PhasePoint) -> f64 {
        let s = std::f64::consts::SQRT_2;
        self.scale * self.raw(&PhasePoint::new(s * q.x, s * q.px, s * q.y, s * q.py))
    }
}

/// Diagonal-form Wigner function at one point.
pub fn wigner_diagonal_form(params: SqueezeParams, point: &PhasePoint) -> Result<f64> {
    Ok(DiagonalForm::new(params)?.eval(point))
}

/// Pointwise comparison of the diagonal form against the full expansion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalComparison {
    pub r: f64,
    pub n_max: usize,
    pub lattice_per_axis: usize,
    pub half_width: f64,
    pub max_abs_difference: f64,
    pub rms_difference: f64,
    pub worst_point: PhasePoint,
    /// Largest change of the full `W` under a common phase rotation of both
    /// modes, which leaves `Q₀` and `Q₁` fixed.
    pub q_invariance_defect: f64,
}

pub fn diagonal_form_comparison(
    params: SqueezeParams,
    lattice_per_axis: usize,
    half_width: f64,
) -> Result<DiagonalComparison> {
    let form = DiagonalForm::new(params)?;
    let op = WignerOperator::from_state(&apply_beam_splitter(&make_tmss(params)?));
    let n = lattice_per_axis.max(2);
    let coord = |i: usize| -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64;
    let mut max_abs = 0.0;
    let mut sum_sq = 0.0;
    let mut worst = PhasePoint::ORIGIN;
    let mut defect: f64 = 0.0;
    let (s, c) = 0.9f64.sin_cos();
    for idx in 0..n.pow(4) {
        let q = PhasePoint::new(
            coord(idx / (n * n * n)),
            coord((idx / (n * n)) % n),
            coord((idx / n) % n),
            coord(idx % n),
        );
        let full = op.eval(&q);
        let d = (form.eval(&q) - full).abs();
        sum_sq += d * d;
        if d > max_abs {
            max_abs = d;
            worst = q;
        }
        let rotated = PhasePoint::new(
            c * q.x - s * q.px,
            s * q.x + c * q.px,
            c * q.y - s * q.py,
            s * q.y + c * q.py,
        );
        defect = defect.max((op.eval(&rotated) - full).abs());
    }
    Ok(DiagonalComparison {
        r: params.r,
        n_max: params.n_max,
        lattice_per_axis: n,
        half_width,
        max_abs_difference: max_abs,
        rms_difference: (sum_sq / n.pow(4) as f64).sqrt(),
        worst_point: worst,
        q_invariance_defect: defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::TwoModeState;
    use crate::wigner::wigner_state;

    #[test]
    fn rotation_keeps_q_invariants() {
        let q = PhasePoint::new(0.3, -0.7, 1.1, 0.2);
        let (s, c) = 0.9f64.sin_cos();
        let r = PhasePoint::new(
            c * q.x - s * q.px,
            s * q.x + c * q.px,
            c * q.y - s * q.py,
            s * q.y + c * q.py,
        );
        assert!((q.q0() - r.q0()).abs() < 1e-15);
        assert!((q.q1() - r.q1()).abs() < 1e-15);
    }

    #[test]
    fn weights_are_normalized() {
        let form = DiagonalForm::new(SqueezeParams::new(0.5, 3).unwrap()).unwrap();
        let total: f64 = form.terms.iter().map(|t| t.2).sum();
        assert!((total - 1.0).abs() < 1e-14);
        assert!(form.terms.iter().all(|&(j, m, _)| m <= j));
    }

    #[test]
    fn vacuum_limit_matches_full_expansion() {
        let form = DiagonalForm::new(SqueezeParams::new(0.4, 0).unwrap()).unwrap();
        assert_eq!(form.terms, vec![(0, 0, 1.0)]);
        let vac = TwoModeState::fock(0, 0);
        for q in [
            PhasePoint::ORIGIN,
            PhasePoint::new(0.2, 0.1, -0.3, 0.4),
            PhasePoint::new(-1.0, 0.5, 0.7, 0.0),
        ] {
            assert!((form.eval(&q) - wigner_state(&vac, &q)).abs() < 1e-13);
        }
    }

    #[test]
    fn comparison_reports_common_rotation_defect() {
        let cmp = diagonal_form_comparison(SqueezeParams::new(0.5, 2).unwrap(), 5, 2.0).unwrap();
        assert!(cmp.max_abs_difference.is_finite());
        // different j interfere, so W is not a function of (Q₀, Q₁) alone
        assert!(cmp.q_invariance_defect > 1e-6);
    }
}
