//! Reference methods used to check the sparse engine: truncated Taylor,
//! scaling-and-squaring on the full matrix, unfiltered incremental
//! squaring, closed-form exponentials of small matrices, and the Toeplitz
//! reference column.
//!
//! The dense routines are generic over [`Field`], so the same code runs in
//! `f64` and in exact rational arithmetic.

mod closed_form;
mod dense;
pub mod exact;
pub mod fixtures;
mod pim;
mod toeplitz;

pub use closed_form::{closed_form_exact, closed_form_small, SmallMatrix};
pub use dense::{pim_expm_dense, relative_error, ssat_expm, tse_expm, DenseMatrix, Field};
pub use pim::{pim_expm_sparse, PimOptions, PimResult, PimStep, DEFAULT_MEM_CAP};
pub use toeplitz::{toeplitz_coefficients, toeplitz_reference_column};

/// Largest dimension the dense oracles accept.
pub const DENSE_ORACLE_LIMIT: usize = 512;
