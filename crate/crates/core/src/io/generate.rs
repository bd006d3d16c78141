use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::baselines::SmallMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::SparseMatrix;

/// Built-in test matrices.
///
/// Textual forms: `tridiag:n:a:b:c`, `randsym:n:density`, `randn:n:density`,
/// `scaled-laplacian:n`, `small:k`.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec {
    /// `a` on the superdiagonal, `b` on the diagonal, `c` on the subdiagonal.
    Tridiag { n: usize, a: f64, b: f64, c: f64 },
    /// Random symmetric pattern with standard normal values.
    RandSym { n: usize, density: f64 },
    /// Random unsymmetric pattern with standard normal values.
    RandN { n: usize, density: f64 },
    /// `tridiag(−1, 2, −1) / (n + 1)`.
    ScaledLaplacian { n: usize },
    /// One of the five small ill-conditioned matrices.
    Small(SmallMatrix),
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = |why: &str| Error::InvalidSpec(format!("'{s}': {why}"));
        let dim = |f: &str| -> Result<usize> {
            match f.parse::<usize>() {
                Ok(n) if n > 0 => Ok(n),
                _ => Err(bad("dimension must be a positive integer")),
            }
        };
        let real = |f: &str| -> Result<f64> {
            f.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| bad("bad number"))
        };
        let density = |f: &str| -> Result<f64> {
            let d = real(f)?;
            if d > 0.0 && d <= 1.0 {
                Ok(d)
            } else {
                Err(bad("density must lie in (0, 1]"))
            }
        };
        match parts.as_slice() {
            ["tridiag", n, a, b, c] => Ok(Self::Tridiag { n: dim(n)?, a: real(a)?, b: real(b)?, c: real(c)? }),
            ["randsym", n, d] => Ok(Self::RandSym { n: dim(n)?, density: density(d)? }),
            ["randn", n, d] => Ok(Self::RandN { n: dim(n)?, density: density(d)? }),
            ["scaled-laplacian", n] => Ok(Self::ScaledLaplacian { n: dim(n)? }),
            ["small", k] => Ok(Self::Small(k.parse()?)),
            _ => Err(bad("unknown generator")),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Tridiag { n, a, b, c } => write!(f, "tridiag:{n}:{a}:{b}:{c}"),
            Self::RandSym { n, density } => write!(f, "randsym:{n}:{density}"),
            Self::RandN { n, density } => write!(f, "randn:{n}:{density}"),
            Self::ScaledLaplacian { n } => write!(f, "scaled-laplacian:{n}"),
            Self::Small(k) => write!(f, "small:{}", k.index()),
        }
    }
}

fn tridiag<T: Scalar>(n: usize, a: T, b: T, c: T) -> Result<SparseMatrix<T>> {
    let mut t = Vec::with_capacity(3 * n);
    for i in 0..n {
        t.push((i, i, b));
        if i + 1 < n {
            t.push((i, i + 1, a));
            t.push((i + 1, i, c));
        }
    }
    SparseMatrix::from_triplets(n, t)
}

fn random_entries(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize, f64)> {
    (0..count)
        .map(|_| {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            (i, j, rng.sample(StandardNormal))
        })
        .collect()
}

/// Builds the matrix described by `spec`. Random generators are
/// deterministic in `seed`.
pub fn generate<T: Scalar>(spec: &GeneratorSpec, seed: u64) -> Result<SparseMatrix<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match *spec {
        GeneratorSpec::Tridiag { n, a, b, c } => tridiag(n, T::of(a), T::of(b), T::of(c)),
        GeneratorSpec::ScaledLaplacian { n } => {
            let s = T::one() / T::of(n as f64 + 1.0);
            tridiag(n, -s, T::two() * s, -s)
        }
        GeneratorSpec::RandSym { n, density } => {
            let count = ((density * (n * n) as f64) / 2.0).round().max(1.0) as usize;
            let mut t = Vec::with_capacity(2 * count);
            for (i, j, v) in random_entries(n, count, &mut rng) {
                let (lo, hi) = (i.min(j), i.max(j));
                t.push((lo, hi, T::of(v)));
                if lo != hi {
                    t.push((hi, lo, T::of(v)));
                }
            }
            SparseMatrix::from_triplets(n, t)
        }
        GeneratorSpec::RandN { n, density } => {
            let count = (density * (n * n) as f64).round().max(1.0) as usize;
            SparseMatrix::from_triplets(
                n,
                random_entries(n, count, &mut rng).into_iter().map(|(i, j, v)| (i, j, T::of(v))),
            )
        }
        GeneratorSpec::Small(which) => {
            let h = which.input();
            let n = h.rows();
            SparseMatrix::from_triplets(
                n,
                (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (i, j, T::of(*h.get(i, j)))),
            )
        }
    }
}
