use thiserror::Error;

use crate::algebra::Diagnostic;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("malformed algebra: {}", join(.0))]
    Malformed(Vec<Diagnostic>),

    #[error("algebra is not nilpotent: lower central series stabilizes at a nonzero term of dimension {dim}")]
    NotNilpotent { dim: usize },

    #[error("subspace is not an ideal: {0}")]
    NotAnIdeal(String),

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("sampled mode needs at least one sample")]
    ZeroSamples,

    #[error("strata do not contain the character label")]
    MissingCharacterLabel,

    #[error("family is a character for every t: the form has rank 0")]
    IdenticallyCharacter,

    #[error("Plücker vector vanishes identically; re-parameterize the family")]
    DegeneratePlucker,

    #[error("family is not generically flat at t = {0}")]
    NotFlat(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),
}

fn join(ds: &[Diagnostic]) -> String {
    ds.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
