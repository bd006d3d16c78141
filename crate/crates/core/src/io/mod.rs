//! Matrix Market input/output and the built-in matrix generators.

mod generate;
mod matrix_market;

pub use generate::{generate, GeneratorSpec};
pub use matrix_market::{
    parse_matrix_market, read_matrix_market, write_matrix_market, MatrixMarketFile, INCREMENTAL_FLAG,
};
