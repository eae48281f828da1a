use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("not admissible: {0}")]
    NotAdmissible(String),

    #[error("position {index} out of range 1..={len}")]
    PositionOutOfRange { index: usize, len: usize },

    #[error("shift {k} out of range 0..={len}")]
    ShiftOutOfRange { k: usize, len: usize },

    /// An L-run after the R at 0-based `position` is longer than the leading run.
    #[error("L-run of length {run} after position {position} exceeds q={q}")]
    Lemma1Violation { position: usize, run: usize, q: usize },

    #[error("{0} is not an MSS-sequence")]
    NotMss(String),

    #[error("S-block {word} violates the cap of {cap} consecutive Ls")]
    CapViolation { word: String, cap: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("bisection failed for {sequence} after {iterations} iterations (best residual {residual:e})")]
    NotFound {
        sequence: String,
        iterations: usize,
        residual: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
