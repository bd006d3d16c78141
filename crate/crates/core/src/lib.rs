//! Exponentials of large sparse matrices by filtered incremental scaling
//! and squaring.
//!
//! `e^H` is approximated as `I + T̂`, where `T̂` comes from a truncated
//! Taylor series of `H·2^{-N}` followed by `N` steps of `T ← 2T + T²`. After
//! every product, entries whose combined Frobenius mass fits inside a share
//! of the forward-error budget are dropped, which keeps `T̂` banded when the
//! true exponential decays away from the diagonal.
//!
//! The numerical core is generic over [`Scalar`] (`f32`, `f64`); the dense
//! oracles in [`baselines`] are generic over [`baselines::Field`] and also run
//! in exact rational arithmetic.

pub mod baselines;
pub mod engine;
pub mod error;
pub mod error_model;
pub mod filter;
pub mod io;
pub mod scalar;
pub mod sparse;

pub use engine::{expm, ExpmOptions, ExpmResult, IterationTrace, Normality, ThresholdMode};
pub use error::{Error, Result};
pub use error_model::{alpha_bound, make_plan, propagate_error, select_params, taylor_remainder_bound, ExpmPlan};
pub use filter::{filter_matrix, FilterReport};
pub use scalar::Scalar;
pub use sparse::{add, is_normal, spgemm, BandwidthProfile, Permutation, SparseMatrix};

/// Double-precision sparse matrix.
pub type Csr = SparseMatrix<f64>;
/// Single-precision sparse matrix.
pub type Csr32 = SparseMatrix<f32>;
/// Double-precision dense oracle matrix.
pub type Dense = baselines::DenseMatrix<f64>;
/// Exact rational dense matrix.
pub type ExactDense = baselines::DenseMatrix<num_rational::BigRational>;
pub type Expm = ExpmResult<f64>;
pub type Plan = ExpmPlan<f64>;
