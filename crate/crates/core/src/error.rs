use thiserror::Error;

use crate::pairs::ValidationResult;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("letter index {index} is outside the signature of rank {rank}")]
    SignatureMismatch { index: u32, rank: u32 },

    #[error("rank must be at least 1")]
    ZeroRank,

    #[error("malformed word {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("transversal must contain at least one word")]
    EmptyTransversal,

    #[error("tensor product of an empty list of factors")]
    EmptyFactorList,

    #[error("invalid pair: {0}")]
    InvalidPair(ValidationResult),

    #[error("prefix index {l} is outside 1..={len}")]
    IndexOutOfRange { l: usize, len: usize },

    #[error("generator of length {len} exceeds the cutoff {cutoff}")]
    GeneratorExceedsCutoff { len: usize, cutoff: usize },

    #[error("radius {radius} exceeds the cutoff {cutoff}")]
    RadiusExceedsCutoff { radius: usize, cutoff: usize },

    #[error("closure exceeded the set-size cap of {cap} words")]
    SetCapExceeded { cap: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
