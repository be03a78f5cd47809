//! Shared numerical tolerances.

use serde::{Deserialize, Serialize};

/// One record holding every tolerance knob in the engine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Unit-norm check on constructed and transformed states.
    pub norm: f64,
    /// Hermiticity of density matrices and partial transposes.
    pub hermitian: f64,
    /// Trace of physical density matrices.
    pub trace: f64,
    /// Per-amplitude agreement between closed form and operator expansion.
    pub oracle_amplitude: f64,
    /// Eigenvalues in `(-eigen_zero, 0)` count as zero.
    pub eigen_zero: f64,
    /// Relative residual `||Av - λv|| / ||A||` accepted from the eigensolver.
    pub eigen_residual: f64,
    /// Imaginary residue tolerated (then discarded) in real-valued Wigner sums.
    pub wigner_imag: f64,
    /// Default convergence tolerance on the negativity volume.
    pub negativity_volume: f64,
    /// Absolute amplitude below which the phase of a field is noise.
    pub amplitude_floor: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        norm: 1e-12,
        hermitian: 1e-12,
        trace: 1e-10,
        oracle_amplitude: 1e-10,
        eigen_zero: 1e-12,
        eigen_residual: 1e-10,
        wigner_imag: 1e-10,
        negativity_volume: 1e-3,
        amplitude_floor: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
