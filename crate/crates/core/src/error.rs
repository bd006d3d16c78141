use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("entry ({row}, {col}) outside a {n}x{n} matrix")]
    IndexOutOfBounds { row: usize, col: usize, n: usize },

    #[error("non-finite value at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("error tolerance {tol:e} is below the smallest supported tolerance {floor:e}")]
    ToleranceBelowRoundoff { tol: f64, floor: f64 },

    #[error("no (M, N) in the search window meets tolerance {eps_tol:e} for norm {norm:e}")]
    Infeasible { norm: f64, eps_tol: f64 },

    #[error("predicted storage of {needed} bytes exceeds the cap of {cap} bytes")]
    ResourceCap { needed: u128, cap: u128 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
