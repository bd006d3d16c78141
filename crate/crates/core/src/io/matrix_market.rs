use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::SparseMatrix;

/// Comment line marking a file that stores only the incremental part `T̂`
/// of an exponential `I + T̂`.
pub const INCREMENTAL_FLAG: &str = "%%incremental";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
}

#[derive(Clone, Debug)]
pub struct MatrixMarketFile<T> {
    pub matrix: SparseMatrix<T>,
    /// The file carried the [`INCREMENTAL_FLAG`] line.
    pub incremental: bool,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_header(line: &str) -> Result<Symmetry> {
    let fields: Vec<String> = line.split_whitespace().map(str::to_ascii_lowercase).collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(parse_err(1, "expected '%%MatrixMarket matrix <format> <field> <symmetry>'"));
    }
    if fields[2] != "coordinate" {
        return Err(Error::Unsupported(format!("'{}' format (only coordinate)", fields[2])));
    }
    match fields[3].as_str() {
        "real" | "double" | "integer" => {}
        other => {
            return Err(Error::Unsupported(format!("'{other}' field (only real and integer)")));
        }
    }
    match fields[4].as_str() {
        "general" => Ok(Symmetry::General),
        "symmetric" => Ok(Symmetry::Symmetric),
        "skew-symmetric" => Ok(Symmetry::SkewSymmetric),
        other => Err(Error::Unsupported(format!("'{other}' symmetry"))),
    }
}

/// Parses a coordinate Matrix Market stream. Symmetric and skew-symmetric
/// storage is expanded to the full pattern; duplicate entries are summed.
pub fn parse_matrix_market<T: Scalar, R: BufRead>(reader: R) -> Result<MatrixMarketFile<T>> {
    let mut lines = reader.lines().enumerate();
    let header = match lines.next() {
        Some((_, l)) => l?,
        None => return Err(parse_err(1, "empty file")),
    };
    let symmetry = parse_header(&header)?;

    let mut incremental = false;
    let mut size: Option<(usize, usize)> = None;
    let mut triplets: Vec<(usize, usize, T)> = Vec::new();
    let mut seen = 0usize;
    let mut last_line = 1;

    for (k, line) in lines {
        let lineno = k + 1;
        last_line = lineno;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.starts_with('%') {
            if trimmed.eq_ignore_ascii_case(INCREMENTAL_FLAG) {
                incremental = true;
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let Some((n, expected)) = size else {
            if fields.len() != 3 {
                return Err(parse_err(lineno, "size line must hold 'rows cols entries'"));
            }
            let nums: Vec<usize> = fields
                .iter()
                .map(|f| f.parse::<usize>().map_err(|_| parse_err(lineno, format!("bad integer '{f}'"))))
                .collect::<Result<_>>()?;
            if nums[0] != nums[1] {
                return Err(parse_err(lineno, format!("matrix is {}x{}, expected square", nums[0], nums[1])));
            }
            size = Some((nums[0], nums[2]));
            triplets.reserve(nums[2]);
            continue;
        };
        if fields.len() != 3 {
            return Err(parse_err(lineno, "entry must hold 'row col value'"));
        }
        if seen == expected {
            return Err(parse_err(lineno, format!("more entries than the declared {expected}")));
        }
        let idx = |f: &str| -> Result<usize> {
            let v: usize = f.parse().map_err(|_| parse_err(lineno, format!("bad index '{f}'")))?;
            if v == 0 || v > n {
                return Err(parse_err(lineno, format!("index {v} outside 1..={n}")));
            }
            Ok(v - 1)
        };
        let (i, j) = (idx(fields[0])?, idx(fields[1])?);
        let value: f64 = fields[2]
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad value '{}'", fields[2])))?;
        if !value.is_finite() {
            return Err(Error::NonFinite { row: i, col: j });
        }
        let v = T::of(value);
        seen += 1;
        match symmetry {
            Symmetry::General => triplets.push((i, j, v)),
            Symmetry::Symmetric => {
                triplets.push((i, j, v));
                if i != j {
                    triplets.push((j, i, v));
                }
            }
            Symmetry::SkewSymmetric => {
                if i == j {
                    return Err(parse_err(lineno, "diagonal entry in a skew-symmetric file"));
                }
                triplets.push((i, j, v));
                triplets.push((j, i, -v));
            }
        }
    }

    let Some((n, expected)) = size else {
        return Err(parse_err(last_line, "missing size line"));
    };
    if seen != expected {
        return Err(parse_err(
            last_line,
            format!("declared {expected} entries but found {seen}"),
        ));
    }
    let matrix = SparseMatrix::from_triplets(n, triplets)?;
    Ok(MatrixMarketFile { matrix, incremental })
}

pub fn read_matrix_market<T: Scalar>(path: &Path) -> Result<MatrixMarketFile<T>> {
    parse_matrix_market(BufReader::new(File::open(path)?))
}

/// Writes coordinate/real/general Matrix Market with 17 significant digits.
///
/// With `incremental` set, the [`INCREMENTAL_FLAG`] line is emitted after
/// the header.
pub fn write_matrix_market<T: Scalar, W: Write>(
    mut w: W,
    matrix: &SparseMatrix<T>,
    incremental: bool,
) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    if incremental {
        writeln!(w, "{INCREMENTAL_FLAG}")?;
    }
    writeln!(w, "{} {} {}", matrix.n(), matrix.n(), matrix.nnz())?;
    for (i, j, v) in matrix.iter() {
        let v = v.to_f64().expect("finite scalar");
        writeln!(w, "{} {} {:.16e}", i + 1, j + 1, v)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<MatrixMarketFile<f64>> {
        parse_matrix_market(text.as_bytes())
    }

    #[test]
    fn diagonal_file() {
        let f = parse("%%MatrixMarket matrix coordinate real general\n% c\n2 2 2\n1 1 1.0\n2 2 2.0\n").unwrap();
        assert_eq!(f.matrix, SparseMatrix::diagonal(&[1.0, 2.0]));
        assert!(!f.incremental);
    }

    #[test]
    fn symmetric_expansion() {
        let f = parse(
            "%%MatrixMarket matrix coordinate real symmetric\n3 3 5\n1 1 -2\n2 1 1\n2 2 -2\n3 2 1\n3 3 -2\n",
        )
        .unwrap();
        assert_eq!(f.matrix.nnz(), 7);
        assert_eq!(f.matrix.get(0, 1), 1.0);
        assert_eq!(f.matrix.get(1, 2), 1.0);
    }

    #[test]
    fn skew_expansion() {
        let f = parse("%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 3.5\n").unwrap();
        assert_eq!(f.matrix.get(1, 0), 3.5);
        assert_eq!(f.matrix.get(0, 1), -3.5);
    }

    #[test]
    fn duplicates_are_summed() {
        let f = parse("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 1.5\n1 2 2.5\n").unwrap();
        assert_eq!(f.matrix.get(0, 1), 4.0);
    }

    #[test]
    fn count_mismatch_is_reported() {
        let err = parse("%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1\n2 2 1\n").unwrap_err();
        match err {
            Error::Parse { msg, .. } => assert!(msg.contains("declared 3") && msg.contains("found 2"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_unsupported_fields() {
        assert!(matches!(
            parse("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n"),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            parse("%%MatrixMarket matrix coordinate pattern general\n1 1 1\n1 1\n"),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(parse("hello\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn bad_entry_has_line_number() {
        let err = parse("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn incremental_flag_round_trip() {
        let m = SparseMatrix::from_dense(&[vec![0.1, 0.0], vec![1.0 / 3.0, -2e-300]]).unwrap();
        let mut buf = Vec::new();
        write_matrix_market(&mut buf, &m, true).unwrap();
        let back = parse(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert!(back.incremental);
        assert_eq!(back.matrix, m);
    }
}
