use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::exact::{self, from_f64, from_int};
use super::DenseMatrix;
use crate::error::Error;

/// The five small ill-conditioned test matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SmallMatrix {
    /// Jordan block `[[6.1, 1e6], [0, 6.1]]`.
    H1,
    /// Unipotent `I + N` with `N = [[0, 1e6, 0.5e12], [0, 0, 1e6], [0, 0, 0]]`.
    H2,
    /// `[[1, √3·1e6], [0, 0.9]]`.
    H3,
    /// `[[-49, 24], [-64, 31]]`, eigenvalues −1 and −17.
    H4,
    /// `[[1 + 1e-5, 1], [0, 1 − 1e-5]]`.
    H5,
}

impl SmallMatrix {
    pub const ALL: [SmallMatrix; 5] = [Self::H1, Self::H2, Self::H3, Self::H4, Self::H5];

    pub fn index(self) -> usize {
        self as usize + 1
    }

    pub fn from_index(k: usize) -> Option<Self> {
        Self::ALL.get(k.checked_sub(1)?).copied()
    }

    /// The matrix as stored in double precision.
    pub fn input(self) -> DenseMatrix<f64> {
        let rows = match self {
            Self::H1 => vec![vec![6.1, 1e6], vec![0.0, 6.1]],
            Self::H2 => vec![vec![1.0, 1e6, 0.5e12], vec![0.0, 1.0, 1e6], vec![0.0, 0.0, 1.0]],
            Self::H3 => vec![vec![1.0, 3f64.sqrt() * 1e6], vec![0.0, 0.9]],
            Self::H4 => vec![vec![-49.0, 24.0], vec![-64.0, 31.0]],
            Self::H5 => vec![vec![1.0 + 1e-5, 1.0], vec![0.0, 1.0 - 1e-5]],
        };
        DenseMatrix::from_rows(rows).expect("rectangular literal")
    }
}

impl FromStr for SmallMatrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let k = s.trim_start_matches(['h', 'H']);
        k.parse::<usize>()
            .ok()
            .and_then(Self::from_index)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown small matrix '{s}' (expected 1..5)")))
    }
}

/// `e^{[[a, b], [0, d]]}` for `a ≠ d`.
fn upper_triangular_2x2(a: &BigRational, b: &BigRational, d: &BigRational) -> Vec<Vec<BigRational>> {
    let (ea, ed) = (exact::exp(a), exact::exp(d));
    let off = b * (&ea - &ed) / (a - d);
    vec![vec![ea, off], vec![BigRational::zero(), ed]]
}

/// Closed-form exponential of the double-precision input, evaluated in
/// high precision.
pub fn closed_form_exact(which: SmallMatrix) -> DenseMatrix<BigRational> {
    let h = which.input().map(|&v| from_f64(v));
    let g = |i, j| h.get(i, j).clone();
    let rows = match which {
        SmallMatrix::H1 => {
            // e^{λI + N} = e^λ (I + N), N² = 0
            let e = exact::exp(&g(0, 0));
            vec![vec![e.clone(), &e * g(0, 1)], vec![BigRational::zero(), e]]
        }
        SmallMatrix::H2 => {
            // e^{I + N} = e (I + N + N²/2), N³ = 0
            let e = exact::exp(&BigRational::one());
            let half = BigRational::new(1.into(), 2.into());
            let top_right = g(0, 2) + half * g(0, 1) * g(1, 2);
            let z = BigRational::zero();
            vec![
                vec![e.clone(), &e * g(0, 1), &e * top_right],
                vec![z.clone(), e.clone(), &e * g(1, 2)],
                vec![z.clone(), z, e],
            ]
        }
        SmallMatrix::H3 | SmallMatrix::H5 => upper_triangular_2x2(&g(0, 0), &g(0, 1), &g(1, 1)),
        SmallMatrix::H4 => {
            // Sylvester with λ₁ = −1, λ₂ = −17:
            // e^H = (e^{-1}(H + 17I) − e^{-17}(H + I)) / 16
            let e1 = exact::exp(&from_int(-1));
            let e17 = exact::exp(&from_int(-17));
            let sixteen = from_int(16);
            let id = |i: usize, j: usize| if i == j { BigRational::one() } else { BigRational::zero() };
            (0..2)
                .map(|i| {
                    (0..2)
                        .map(|j| {
                            (&e1 * (g(i, j) + from_int(17) * id(i, j)) - &e17 * (g(i, j) + id(i, j)))
                                / &sixteen
                        })
                        .collect()
                })
                .collect()
        }
    };
    DenseMatrix::from_rows(rows).expect("square")
}

/// `(H, e^H)` in double precision; `e^H` is the correctly rounded closed form.
pub fn closed_form_small(which: SmallMatrix) -> (DenseMatrix<f64>, DenseMatrix<f64>) {
    (which.input(), closed_form_exact(which).map(exact::to_f64))
}
