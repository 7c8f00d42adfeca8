use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("operands belong to different structures: {0}")]
    SpecMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("polynomial {0} is not irreducible")]
    NotIrreducible(String),

    #[error("character index {k} out of range (must be < {bound})")]
    InvalidIndex { k: u64, bound: u64 },

    #[error(
        "truncation insufficient for j = {j}: nonzero coefficient in the top margin at d_max = {d_max}; raise --dmax"
    )]
    TruncationInsufficient { j: u64, d_max: usize },

    #[error("p-adic exponent has {have} digits but precision N = {precision} needs {need}")]
    PrecisionExceedsDigits {
        have: usize,
        need: usize,
        precision: usize,
    },

    #[error("j = {j} is not a trivial-zero exponent: {reason}")]
    NotATrivialZero { j: u64, reason: String },

    #[error("place {0} divides the character modulus")]
    RamifiedPlace(String),

    #[error("v-adic trivial-zero orders need a degree-1 place, got degree {0}")]
    UnsupportedPlaceDegree(usize),

    #[error("invalid congruence pair (j1 = {j1}, j2 = {j2}): need j1 = j2 mod {modulus}")]
    InvalidPair { j1: u64, j2: u64, modulus: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad parameters rather than by a computation
    /// that could not complete.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::NotIrreducible(_)
                | Error::InvalidIndex { .. }
                | Error::NotATrivialZero { .. }
                | Error::RamifiedPlace(_)
                | Error::UnsupportedPlaceDegree(_)
                | Error::InvalidPair { .. }
                | Error::Parse(_)
                | Error::SpecMismatch(_)
                | Error::PrecisionExceedsDigits { .. }
        )
    }
}
