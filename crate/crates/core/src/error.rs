use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid datum: non-finite sample {value} at index {index}")]
    InvalidDatum { index: usize, value: f64 },

    #[error("format error in {path}, line {line}: {message}")]
    Format {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("config parse error, line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    #[error("config validation failed: {0}")]
    Validation(String),

    #[error("CFL violation: Courant number {courant} exceeds {limit}")]
    CflViolation { courant: f64, limit: f64 },

    #[error("no crossing: characteristic value {value} does not reach the end of the damping zone (threshold {epsilon})")]
    NoCrossing { value: f64, epsilon: f64 },

    #[error("oracle input rejected: {0}")]
    OracleInput(String),

    #[error("record too sparse: snapshot spacing {spacing} exceeds {limit}")]
    SparseRecord { spacing: f64, limit: f64 },

    #[error("empty trace")]
    EmptyTrace,

    #[error("time {t} outside the validity range (must exceed {lower})")]
    OutOfRange { t: f64, lower: f64 },

    #[error("series has non-positive value {value} at t = {t}")]
    NonPositiveValues { t: f64, value: f64 },

    #[error("mismatched grids: {0}")]
    MismatchedGrids(String),

    #[error("flux violates the transport condition: inf |f'| on [-{k}, {k}] is {inf}")]
    FluxViolatesTransport { k: f64, inf: f64 },

    #[error("singular tridiagonal system at row {0}")]
    SingularSystem(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
