//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ring already carries a homogenizing variable")]
    AlreadyHomogenized,

    #[error("expected a homogenized ring")]
    NotHomogenized,

    #[error("exponent vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("zero polynomial has no initial term")]
    ZeroPolynomial,

    #[error("point does not lie on the variety: residual {residual:.3e} exceeds {tol:.3e}")]
    NotOnVariety { residual: f64, tol: f64 },

    #[error("dual basis is numerically dependent (rank {rank} < {count} functionals)")]
    DependentBasis { rank: usize, count: usize },

    #[error("staircase incomplete at degree {reached}: corners found so far: {partial:?}")]
    IncompleteStaircase {
        reached: usize,
        partial: Vec<String>,
    },

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("sampling failed: {0}")]
    SamplingFailed(String),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("problem file error: {0}")]
    Problem(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code the CLI maps this error to (2 = inconclusive, 1 = everything else).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Inconclusive(_) | Error::IncompleteStaircase { .. } => 2,
            _ => 1,
        }
    }
}
