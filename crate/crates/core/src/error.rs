use thiserror::Error;

/// Errors shared by the signal, vitals, ippg, stats and suggest modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside its documented domain (bad cutoff, even
    /// window, negative noise level, out-of-range context value, ...).
    #[error("invalid-parameter: {0}")]
    InvalidParameter(String),

    /// The signal is too short for the requested operation.
    #[error("too-short: {0}")]
    TooShort(String),

    /// Fewer peaks or retained intervals than a rate estimate needs.
    #[error("insufficient-peaks: {0}")]
    InsufficientPeaks(String),

    /// A pipeline ran but produced a rate outside its physiological window.
    #[error("estimation-failed: {0}")]
    EstimationFailed(String),

    /// A statistical test cannot be computed (zero variance input).
    #[error("degenerate-input: {0}")]
    DegenerateInput(String),

    /// Not enough observations for a descriptive statistic.
    #[error("insufficient-data: {0}")]
    InsufficientData(String),

    /// A region of interest does not satisfy the frame-geometry invariants.
    #[error("invalid-roi: {0}")]
    InvalidRoi(String),
}

pub type Result<T> = std::result::Result<T, Error>;
