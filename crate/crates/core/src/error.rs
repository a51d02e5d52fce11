use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("bitstring length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("non-finite amplitude at index {index}")]
    NonFinite { index: usize },

    #[error("fixed columns {first} and {second} are not orthonormal (inner product {inner})")]
    NotOrthonormal {
        first: usize,
        second: usize,
        inner: Complex64,
    },

    #[error("column {index} fixed more than once")]
    DuplicateColumn { index: usize },

    #[error("operator is not unitary: |U^dag U - I| = {max_deviation:e} at ({row}, {col})")]
    NotUnitary {
        max_deviation: f64,
        row: usize,
        col: usize,
    },

    #[error("invalid n = {n}: {reason}")]
    InvalidN { n: usize, reason: &'static str },

    #[error("{op}: n = {n} exceeds the cost guard (max {limit})")]
    CostGuard {
        op: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("input violates the promise: {0}")]
    PromiseViolation(String),

    #[error("impossible outcome {outcome} observed with probability {prob:e}")]
    ImpossibleOutcome { outcome: String, prob: f64 },

    #[error("malformed measurement: {0}")]
    MalformedMeasurement(String),

    #[error("malformed oracle map: {0}")]
    MalformedOracle(String),

    #[error("transition undefined for reachable pair ({state}, {symbol})")]
    UndefinedTransition { state: String, symbol: String },

    #[error("run ended in non-halting classical state {state}")]
    NonHaltingEnd { state: String },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
