//! Plain-text oracle fixtures.
//!
//! Layout: lines starting with `#` are comments; every other non-empty line
//! holds one decimal value with at least 20 significant digits. Matrices are
//! stored row-major after a `# shape <rows> <cols>` comment.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_rational::BigRational;

use super::exact::to_decimal;
use crate::error::{Error, Result};

/// Significant digits written for every fixture value.
pub const FIXTURE_DIGITS: u32 = 25;

pub fn write_fixture(path: &Path, comments: &[String], values: &[BigRational]) -> Result<()> {
    let mut f = fs::File::create(path)?;
    for c in comments {
        writeln!(f, "# {c}")?;
    }
    for v in values {
        writeln!(f, "{}", to_decimal(v, FIXTURE_DIGITS))?;
    }
    Ok(())
}

/// Values and comment lines (without the leading `#`).
pub fn read_fixture(path: &Path) -> Result<(Vec<f64>, Vec<String>)> {
    let text = fs::read_to_string(path)?;
    let mut values = Vec::new();
    let mut comments = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.trim().to_string());
            continue;
        }
        let v: f64 = line.parse().map_err(|_| Error::Parse {
            line: k + 1,
            msg: format!("not a decimal value: '{line}'"),
        })?;
        values.push(v);
    }
    Ok((values, comments))
}
