use thiserror::Error;

use crate::grid::Method;

pub type Result<T> = std::result::Result<T, NftError>;

#[derive(Debug, Error)]
pub enum NftError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("boundary {name} = {value} is not an integer multiple of the step h = {h}")]
    NonIntegerBoundary {
        name: &'static str,
        value: f64,
        h: f64,
    },

    #[error("kappa must be +1 or -1, got {0}")]
    InvalidKappa(i32),

    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite sample at index {index}")]
    NonFiniteSample { index: usize },

    #[error("FFT length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("{nodes} evaluation nodes cannot resolve a polynomial of degree {degree}")]
    TooFewNodes { nodes: usize, degree: usize },

    #[error("cannot multiply an empty list of factors")]
    EmptyProduct,

    #[error("matrix is not traceless (|trace| = {trace:e}, norm = {norm:e})")]
    NotTraceless { trace: f64, norm: f64 },

    #[error("step {step}: Lobatto IIIA stage system is degenerate (|theta| = {theta:e})")]
    StepSingularity { step: usize, theta: f64 },

    #[error("step {step}: splitting normalization vanishes (|theta| = {theta:e})")]
    SplittingSingularity { step: usize, theta: f64 },

    #[error("method {0} has no polynomial transfer matrix")]
    NotPolynomial(Method),

    #[error("spectral grids differ: {0}")]
    GridMismatch(String),

    #[error("reference norm vanishes on the comparison domain")]
    ZeroReference,

    #[error("refine factor must be at least 8, got {0}")]
    RefineTooSmall(usize),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl NftError {
    /// Attach the step index to a singularity raised by a step builder.
    pub(crate) fn at_step(self, k: usize) -> Self {
        match self {
            NftError::StepSingularity { theta, .. } => NftError::StepSingularity { step: k, theta },
            NftError::SplittingSingularity { theta, .. } => {
                NftError::SplittingSingularity { step: k, theta }
            }
            other => other,
        }
    }
}
