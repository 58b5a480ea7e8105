use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graded space must have r + s >= 1")]
    EmptyBasis,

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("index {index} out of range (size {len})")]
    IndexOutOfRange { index: u64, len: u64 },

    #[error("resource cap exceeded: {needed} basis elements requested, cap is {cap}")]
    CapExceeded { needed: u64, cap: u64 },

    #[error("cochain is not homogeneous: {0}")]
    Inhomogeneous(String),

    #[error("expected a cochain of degree {degree} and parity {parity}, got degree {got_degree} parity {got_parity}")]
    WrongShape { degree: usize, parity: u8, got_degree: usize, got_parity: u8 },

    #[error("[d,d] does not vanish: [d,d] = {0}")]
    NotCodifferential(String),

    #[error("term target {target} lies outside the swapped pair {{{first}, {second}}}")]
    TargetOutsidePair { target: String, first: String, second: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid theorem parameters: {0}")]
    InvalidVariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
