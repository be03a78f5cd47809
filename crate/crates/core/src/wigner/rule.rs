use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::gauss_hermite::GaussHermiteRule;

use super::PhasePoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureScheme {
    TensorGaussHermite,
    UniformBox,
}

/// Descriptor of a 4-D tensor quadrature rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WignerRule {
    pub scheme: QuadratureScheme,
    pub order_per_axis: usize,
    /// Half-width of the integration box; `None` picks
    /// `1.2·√(2·cutoff + 2)` for the state being integrated.
    pub box_half_width: Option<f64>,
}

/// Uniform box, 24 points per axis.
impl Default for WignerRule {
    fn default() -> Self {
        WignerRule::uniform_box(24, None)
    }
}

impl WignerRule {
    pub fn gauss_hermite(order: usize) -> Self {
        WignerRule {
            scheme: QuadratureScheme::TensorGaussHermite,
            order_per_axis: order,
            box_half_width: None,
        }
    }

    pub fn uniform_box(points: usize, half_width: Option<f64>) -> Self {
        WignerRule {
            scheme: QuadratureScheme::UniformBox,
            order_per_axis: points,
            box_half_width: half_width,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.order_per_axis == 0 {
            return Err(invalid("rule.order_per_axis", "must be positive"));
        }
        if let Some(h) = self.box_half_width {
            if !(h > 0.0 && h.is_finite()) {
                return Err(invalid("rule.box_half_width", "must be positive"));
            }
        }
        Ok(())
    }

    pub fn with_order(self, order: usize) -> Self {
        WignerRule {
            order_per_axis: order,
            ..self
        }
    }

    pub fn default_half_width(cutoff: usize) -> f64 {
        1.2 * (2.0 * cutoff as f64 + 2.0).sqrt()
    }

    /// Per-axis nodes and envelope-free weights for a state with `cutoff`.
    pub fn axis(&self, cutoff: usize) -> AxisRule {
        match self.scheme {
            QuadratureScheme::TensorGaussHermite => {
                let gh = GaussHermiteRule::new(self.order_per_axis);
                let s = std::f64::consts::FRAC_1_SQRT_2;
                AxisRule {
                    nodes: gh.nodes.iter().map(|t| t * s).collect(),
                    weights: gh.scaled_weights.iter().map(|w| w * s).collect(),
                    enveloped_weights: gh.weights.iter().map(|w| w * s).collect(),
                }
            }
            QuadratureScheme::UniformBox => {
                let h = self
                    .box_half_width
                    .unwrap_or_else(|| Self::default_half_width(cutoff));
                let n = self.order_per_axis;
                let dx = 2.0 * h / n as f64;
                let nodes: Vec<f64> = (0..n).map(|i| -h + (i as f64 + 0.5) * dx).collect();
                let enveloped_weights = nodes.iter().map(|x| dx * (-2.0 * x * x).exp()).collect();
                AxisRule {
                    weights: vec![dx; n],
                    nodes,
                    enveloped_weights,
                }
            }
        }
    }

    /// Materialized tensor grid for a state with `cutoff`.
    pub fn grid(&self, cutoff: usize) -> WignerGrid {
        WignerGrid {
            rule: *self,
            axis: self.axis(cutoff),
        }
    }
}

/// One-dimensional factor of the tensor rule.
///
/// `∫ g(x) e^{−2x²} dx ≈ Σ enveloped_weights[i] · g(nodes[i])`. Folding the
/// Gaussian envelope into the weight keeps high-order Gauss-Hermite tails
/// finite.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisRule {
    pub nodes: Vec<f64>,
    /// Plain weights: `∫ g(x) dx ≈ Σ weights[i] · g(nodes[i])`.
    pub weights: Vec<f64>,
    pub enveloped_weights: Vec<f64>,
}

impl AxisRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Tensor-product node set over `(x, p_x, y, p_y)`, indexed lazily.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub rule: WignerRule,
    pub axis: AxisRule,
}

impl WignerGrid {
    pub fn len(&self) -> usize {
        self.axis.len().pow(4)
    }

    pub fn is_empty(&self) -> bool {
        self.axis.is_empty()
    }

    fn split(&self, idx: usize) -> [usize; 4] {
        let n = self.axis.len();
        [
            idx / (n * n * n),
            (idx / (n * n)) % n,
            (idx / n) % n,
            idx % n,
        ]
    }

    pub fn node(&self, idx: usize) -> PhasePoint {
        let [a, b, c, d] = self.split(idx);
        let ax = &self.axis.nodes;
        PhasePoint::new(ax[a], ax[b], ax[c], ax[d])
    }

    pub fn weight(&self, idx: usize) -> f64 {
        self.split(idx)
            .iter()
            .map(|i| self.axis.weights[*i])
            .product()
    }

    /// `Σ w_i f(node_i)`.
    pub fn integrate(&self, f: impl Fn(PhasePoint) -> f64) -> f64 {
        (0..self.len())
            .map(|i| self.weight(i) * f(self.node(i)))
            .sum()
    }
}
