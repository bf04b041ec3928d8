use thiserror::Error;

/// Error type shared by all estimation and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("sample is empty")]
    EmptySample,

    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    #[error("probability {value} outside [0, 1]")]
    InvalidProbability { value: f64 },

    #[error("paired sample columns have unequal lengths ({first} vs {other})")]
    ColumnLengthMismatch { first: usize, other: usize },

    #[error("marker index {index} out of range for {markers} markers")]
    MarkerIndex { index: usize, markers: usize },

    #[error("{group} group needs at least 2 subjects, got {size}")]
    GroupTooSmall { group: &'static str, size: usize },

    #[error("groups disagree on marker count ({nondiseased} vs {diseased})")]
    MarkerCountMismatch { nondiseased: usize, diseased: usize },

    #[error("invalid trim (p, q) = ({p}, {q}): requires 0 < p <= 1 and 0 <= q < 1")]
    InvalidTrim { p: f64, q: f64 },

    #[error("estimate was computed for a different dataset shape")]
    EstimateShapeMismatch,

    #[error("dependent-group covariance requires equal group sizes, got {alpha} and {beta}")]
    UnpairedGroups { alpha: usize, beta: usize },

    #[error("contrast row {row} {reason}")]
    InvalidContrast { row: usize, reason: &'static str },

    #[error("contrast matrix has {contrast} columns but data has {markers} markers")]
    ContrastWidthMismatch { contrast: usize, markers: usize },

    #[error("interaction design needs at least 2 levels per factor, got {a} x {b}")]
    InvalidInteraction { a: usize, b: usize },

    #[error("bootstrap replication count {got} too small, need at least {min}")]
    BootstrapTooSmall { got: usize, min: usize },

    #[error("level {value} outside (0, 1]")]
    InvalidLevel { value: f64 },

    #[error("test level delta = {value} outside (0, 1)")]
    InvalidDelta { value: f64 },

    #[error("quadrature resolution {got} too coarse, need at least {min}")]
    ResolutionTooCoarse { got: usize, min: usize },

    #[error("scale parameter must be positive, got {value}")]
    InvalidScale { value: f64 },

    #[error("correlation matrix {reason}")]
    InvalidCorrelation { reason: String },

    #[error("correlation matrix could not be factorized for sampling")]
    FactorizationFailed,

    #[error("scenario invalid: {reason}")]
    InvalidScenario { reason: String },

    #[error("effect calibration failed: {reason}")]
    CalibrationFailed { reason: String },
}
