use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = QuftiError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum QuftiError {
    #[error("number of modes must be at least 1 (got {0})")]
    EmptyInterferometer(usize),

    #[error("weight factor f_{index} is not finite ({value})")]
    NonFiniteWeight { index: usize, value: f64 },

    #[error("phase must be finite (got {0})")]
    NonFinitePhase(f64),

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("{method} permanent supports n <= {max}, got n = {n}")]
    SizeLimit {
        method: &'static str,
        n: usize,
        max: usize,
    },

    #[error("moments describe {moments} modes but the interferometer has {unitary}")]
    MomentMismatch { moments: usize, unitary: usize },

    #[error("probability {value} lies outside [0, 1] beyond rounding tolerance")]
    ProbabilityOutOfRange { value: f64 },

    #[error("small-phase approximation left its validity range at phi = {phi} (value {value})")]
    OutsideSmallPhaseRegime { phi: f64, value: f64 },

    #[error("distinguishable permanent has imaginary part {imag}")]
    ComplexDistinguishablePermanent { imag: f64 },

    #[error("weights are degenerate (B - A^2/n = {spread}); phase sensitivity is undefined")]
    DegenerateWeights { spread: f64 },

    #[error("numerical sensitivity is undefined at phi = 0")]
    ZeroPhase,

    #[error("sensitivity diverges for the {model} model at phi = {phi}")]
    DivergentSensitivity { model: &'static str, phi: f64 },

    #[error("weight file lists {found} factors but --n is {expected}")]
    WeightCountMismatch { expected: usize, found: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("failed to read weight file {path}: {source}")]
    WeightFile {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed weight file {path}: {source}")]
    WeightFileFormat {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl QuftiError {
    /// True for failures caused by the filesystem or output streams rather
    /// than by the requested computation.
    pub fn is_io(&self) -> bool {
        match self {
            QuftiError::Io(_) | QuftiError::WeightFile { .. } => true,
            QuftiError::Csv(e) => e.is_io_error(),
            _ => false,
        }
    }
}
