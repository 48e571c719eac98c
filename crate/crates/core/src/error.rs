use thiserror::Error;

/// Errors raised by the library. Each variant maps to one failure contract of
/// a public operation; [`Error::name`] gives the stable identifier printed by
/// the command-line tool.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e}, allowed {allowed:e})")]
    NotHermitian { asymmetry: f64, allowed: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("wrong dimension: expected {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("angle {name} = {value} outside [{lo}, {hi}]")]
    AngleOutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("order k = {k} outside 2..={n}")]
    BadOrder { k: usize, n: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("target vector is not majorized by the source vector")]
    NotMajorized,

    #[error("vector is not sorted in descending order")]
    NotSorted,

    #[error("size {n} exceeds the limit {limit} for {what}")]
    TooLarge {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("{name} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Variant name, used as the error tag on stderr by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::WrongDimension { .. } => "WrongDimension",
            Error::AngleOutOfRange { .. } => "AngleOutOfRange",
            Error::BadOrder { .. } => "BadOrder",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::NotMajorized => "NotMajorized",
            Error::NotSorted => "NotSorted",
            Error::TooLarge { .. } => "TooLarge",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }

    pub(crate) fn dims(expected: impl ToString, got: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
