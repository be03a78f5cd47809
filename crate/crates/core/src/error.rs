use thiserror::Error;

/// Errors raised by the numerical engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The closed-form vortex state disagrees with the direct beam-splitter
    /// expansion. This points at a coefficient transcription error.
    #[error("closed-form coefficients disagree with the operator expansion (max amplitude deviation {max_deviation:e})")]
    CoefficientMismatch { max_deviation: f64 },

    #[error("grid too coarse: plaquette at ({x:.4}, {y:.4}) has winding {winding}")]
    GridTooCoarse { x: f64, y: f64, winding: i64 },

    #[error(
        "Hermitian eigensolver did not converge (dimension {dimension}, residual {residual:e})"
    )]
    EigenNonConvergence { dimension: usize, residual: f64 },

    /// Both log-negativities vanish at r = 0, so their ratio is undefined.
    #[error("entanglement ratio undefined at r = 0")]
    UndefinedRatio,

    #[error("malformed state: {0}")]
    MalformedState(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> CoreError {
    CoreError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
