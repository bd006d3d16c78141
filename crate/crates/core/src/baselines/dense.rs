use std::ops::{Add, Mul};

use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

use super::DENSE_ORACLE_LIMIT;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::SparseMatrix;

/// Element type for the dense oracles: `f64`, `f32`, or an exact rational.
pub trait Field: Clone + Num + Signed + FromPrimitive + PartialOrd {}
impl<T> Field for T where T: Clone + Num + Signed + FromPrimitive + PartialOrd {}

/// Row-major dense matrix. Square for the exponential routines, any shape
/// when used as a block of vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { left: c, right: row.len() });
            }
            data.extend(row);
        }
        Ok(Self { rows: r, cols: c, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> DenseMatrix<U> {
        DenseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { left: self.cols, right: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    let slot = &mut out.data[i * other.cols + j];
                    *slot = slot.clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    /// `alpha·self + beta·other`.
    pub fn combine(&self, other: &Self, alpha: &T, beta: &T) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch { left: self.rows, right: other.rows });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| alpha.clone() * a.clone() + beta.clone() * b.clone())
            .collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, alpha: &T) -> Self {
        self.map(|v| alpha.clone() * v.clone())
    }

    pub fn div_scalar(&self, d: &T) -> Self {
        self.map(|v| v.clone() / d.clone())
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| {
            let a = v.abs();
            if a > m {
                a
            } else {
                m
            }
        })
    }
}

impl<T: Field> Add for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;
    fn add(self, rhs: Self) -> DenseMatrix<T> {
        self.combine(rhs, &T::one(), &T::one()).expect("matching shapes")
    }
}

impl<T: Field> Mul for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;
    fn mul(self, rhs: Self) -> DenseMatrix<T> {
        self.matmul(rhs).expect("matching shapes")
    }
}

impl<T: Field + ToPrimitive> DenseMatrix<T> {
    pub fn frobenius_norm(&self) -> f64 {
        self.data
            .iter()
            .map(|v| v.to_f64().unwrap_or(f64::NAN).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn from_sparse(a: &SparseMatrix<T>) -> Self {
        let mut m = Self::zeros(a.n(), a.n());
        for (i, j, v) in a.iter() {
            m.set(i, j, v);
        }
        m
    }

    pub fn to_sparse(&self) -> Result<SparseMatrix<T>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { left: self.rows, right: self.cols });
        }
        let n = self.rows;
        SparseMatrix::from_triplets(
            n,
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (i, j, *self.get(i, j))),
        )
    }
}

/// `‖approx − exact‖_F / ‖exact‖_F` evaluated in `f64`.
pub fn relative_error<A, B>(approx: &DenseMatrix<A>, exact: &DenseMatrix<B>) -> f64
where
    A: Field + ToPrimitive,
    B: Field + ToPrimitive,
{
    assert_eq!((approx.rows, approx.cols), (exact.rows, exact.cols));
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for (a, b) in approx.data.iter().zip(&exact.data) {
        let (a, b) = (a.to_f64().unwrap_or(f64::NAN), b.to_f64().unwrap_or(f64::NAN));
        num += (a - b) * (a - b);
        den += b * b;
    }
    if den == 0.0 {
        num.sqrt()
    } else {
        (num / den).sqrt()
    }
}

fn check_oracle_input<T: Field>(h: &DenseMatrix<T>) -> Result<()> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch { left: h.rows, right: h.cols });
    }
    if h.rows > DENSE_ORACLE_LIMIT {
        return Err(Error::Unsupported(format!(
            "dense oracle limited to n <= {DENSE_ORACLE_LIMIT}, got {}",
            h.rows
        )));
    }
    Ok(())
}

fn from_usize<T: Field>(k: usize) -> T {
    T::from_usize(k).expect("small integer is representable")
}

fn halve_n_times<T: Field>(h: &DenseMatrix<T>, n: usize) -> DenseMatrix<T> {
    let two = from_usize::<T>(2);
    let mut out = h.clone();
    for _ in 0..n {
        out = out.div_scalar(&two);
    }
    out
}

/// Order-`m` Taylor polynomial of `e^H`, evaluated by Horner's rule.
pub fn tse_expm<T: Field>(h: &DenseMatrix<T>, m: usize) -> Result<DenseMatrix<T>> {
    check_oracle_input(h)?;
    let id = DenseMatrix::identity(h.rows);
    let mut p = id.clone();
    for k in (1..=m).rev() {
        p = &id + &(h * &p).div_scalar(&from_usize(k));
    }
    Ok(p)
}

/// Scaling and squaring on the full matrix: `F₀ = Taylor_m(H/2^n)`, then
/// `F ← F·F` `n` times.
pub fn ssat_expm<T: Field>(h: &DenseMatrix<T>, m: usize, n: usize) -> Result<DenseMatrix<T>> {
    let mut f = tse_expm(&halve_n_times(h, n), m)?;
    for _ in 0..n {
        f = &f * &f;
    }
    Ok(f)
}

/// Incremental-part scaling and squaring without filtering. Returns `T_N`
/// with `e^H ≈ I + T_N`.
pub fn pim_expm_dense<T: Field>(h: &DenseMatrix<T>, m: usize, n: usize) -> Result<DenseMatrix<T>> {
    check_oracle_input(h)?;
    let h0 = halve_n_times(h, n);
    let mut t = DenseMatrix::zeros(h.rows, h.rows);
    if m >= 1 {
        let mut term = h0.clone();
        t = h0.clone();
        for i in 2..=m {
            term = (&term * &h0).div_scalar(&from_usize(i));
            t = &t + &term;
        }
    }
    let two = from_usize::<T>(2);
    for _ in 0..n {
        let sq = &t * &t;
        t = t.combine(&sq, &two, &T::one())?;
    }
    Ok(t)
}
