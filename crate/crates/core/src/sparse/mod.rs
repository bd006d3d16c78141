//! Row-compressed sparse storage and the arithmetic the exponential needs.
//!
//! Matrices are square, immutable once built, and kept in canonical form:
//! rows in order, columns strictly increasing within a row, and no stored
//! value equal to zero.

mod bandwidth;
mod pattern;
mod reorder;

pub use bandwidth::{BandwidthProfile, Permutation};
pub use pattern::SparsityPattern;
pub use reorder::real_bandwidth_estimate;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<T> {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> SparseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            row_ptr: vec![0; n + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![T::one(); n])
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            if v != T::zero() {
                m.col_idx.push(i);
                m.values.push(v);
            }
            m.row_ptr[i + 1] = m.col_idx.len();
        }
        m
    }

    /// Builds a matrix from 0-based `(row, col, value)` triplets.
    ///
    /// Duplicates are summed, zeros (including cancelled duplicates) are
    /// dropped, and non-finite values are rejected.
    pub fn from_triplets<I>(n: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, T)>,
    {
        let mut entries: Vec<(usize, usize, T)> = Vec::new();
        for (r, c, v) in triplets {
            if r >= n || c >= n {
                return Err(Error::IndexOutOfBounds { row: r, col: c, n });
            }
            if !v.is_finite() {
                return Err(Error::NonFinite { row: r, col: c });
            }
            entries.push((r, c, v));
        }
        entries.sort_by_key(|e| (e.0, e.1));

        let mut m = Self::zeros(n);
        let mut row = 0;
        let mut i = 0;
        while i < entries.len() {
            let (r, c, mut v) = entries[i];
            i += 1;
            while i < entries.len() && entries[i].0 == r && entries[i].1 == c {
                v = v + entries[i].2;
                i += 1;
            }
            while row < r {
                row += 1;
                m.row_ptr[row] = m.col_idx.len();
            }
            if v != T::zero() {
                m.col_idx.push(c);
                m.values.push(v);
            }
        }
        while row < n {
            row += 1;
            m.row_ptr[row] = m.col_idx.len();
        }
        Ok(m)
    }

    /// Row-major dense input, mostly for tests and small fixtures.
    pub fn from_dense(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        let mut triplets = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { left: n, right: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                triplets.push((i, j, v));
            }
        }
        Self::from_triplets(n, triplets)
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.n]; self.n];
        for (i, j, v) in self.iter() {
            out[i][j] = v;
        }
        out
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Ratio of stored entries to `n²`.
    pub fn sparsity(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        self.nnz() as f64 / (self.n as f64 * self.n as f64)
    }

    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let (s, e) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.col_idx[s..e], &self.values[s..e])
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => T::zero(),
        }
    }

    /// Iterates over `(row, col, value)` in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.n).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// First non-finite entry, if any.
    pub fn find_non_finite(&self) -> Option<(usize, usize)> {
        self.iter().find(|(_, _, v)| !v.is_finite()).map(|(i, j, _)| (i, j))
    }

    /// Applies `f` to every stored value, purging results that are exactly zero.
    pub fn map_values(&self, f: impl Fn(T) -> T) -> Self {
        let mut out = Self::zeros(self.n);
        out.col_idx.reserve(self.nnz());
        out.values.reserve(self.nnz());
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                let w = f(v);
                if w != T::zero() {
                    out.col_idx.push(j);
                    out.values.push(w);
                }
            }
            out.row_ptr[i + 1] = out.col_idx.len();
        }
        out
    }

    pub fn scale(&self, alpha: T) -> Self {
        self.map_values(|v| alpha * v)
    }

    /// Keeps the entries for which `keep` returns true. Kept values are copied verbatim.
    pub fn retain(&self, mut keep: impl FnMut(usize, usize, T) -> bool) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if keep(i, j, v) {
                    out.col_idx.push(j);
                    out.values.push(v);
                }
            }
            out.row_ptr[i + 1] = out.col_idx.len();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut counts = vec![0usize; n + 1];
        for &j in &self.col_idx {
            counts[j + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let row_ptr = counts.clone();
        let mut next = counts;
        let mut col_idx = vec![0; self.nnz()];
        let mut values = vec![T::zero(); self.nnz()];
        for (i, j, v) in self.iter() {
            let p = next[j];
            col_idx[p] = i;
            values[p] = v;
            next[j] += 1;
        }
        Self { n, row_ptr, col_idx, values }
    }

    /// Sum of the diagonal.
    pub fn trace(&self) -> T {
        (0..self.n).map(|i| self.get(i, i)).fold(T::zero(), |a, b| a + b)
    }

    pub fn frobenius_norm(&self) -> T {
        scaled_norm2(&self.values)
    }

    /// `‖I + self‖_F` without materializing the identity.
    pub fn frobenius_norm_plus_identity(&self) -> T {
        let mut diag_seen = vec![false; self.n];
        let mut terms: Vec<T> = Vec::with_capacity(self.nnz() + self.n);
        for (i, j, v) in self.iter() {
            if i == j {
                diag_seen[i] = true;
                terms.push(T::one() + v);
            } else {
                terms.push(v);
            }
        }
        terms.extend(diag_seen.iter().filter(|s| !**s).map(|_| T::one()));
        scaled_norm2(&terms)
    }

    /// `self · x` for a dense vector.
    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: x.len() });
        }
        Ok((0..self.n)
            .map(|i| {
                let (cols, vals) = self.row(i);
                cols.iter().zip(vals).fold(T::zero(), |acc, (&j, &v)| acc + v * x[j])
            })
            .collect())
    }

    pub fn bandwidth(&self) -> BandwidthProfile {
        BandwidthProfile::of(self)
    }

    pub fn permute_symmetric(&self, p: &Permutation) -> Result<Self> {
        if p.len() != self.n {
            return Err(Error::InvalidPermutation(format!(
                "size {} for a {}x{} matrix",
                p.len(),
                self.n,
                self.n
            )));
        }
        Self::from_triplets(self.n, self.iter().map(|(i, j, v)| (p.apply(i), p.apply(j), v)))
    }
}

/// Euclidean norm of a slice. Magnitudes are sorted before summation, so
/// the result does not depend on the order of the entries, and they are
/// scaled by the largest one so squares neither underflow nor overflow.
pub(crate) fn scaled_norm2<T: Scalar>(xs: &[T]) -> T {
    let mut mags: Vec<T> = xs.iter().map(|x| x.abs()).filter(|a| *a != T::zero()).collect();
    let Some(&first) = mags.first() else {
        return T::zero();
    };
    let mut largest = first;
    for &a in &mags {
        if a > largest {
            largest = a;
        }
    }
    mags.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite magnitudes"));
    let ssq = mags.iter().fold(T::zero(), |acc, &a| {
        let r = a / largest;
        acc + r * r
    });
    largest * ssq.sqrt()
}

/// `alpha·A + beta·B`, exact-zero results purged.
pub fn add<T: Scalar>(
    a: &SparseMatrix<T>,
    b: &SparseMatrix<T>,
    alpha: T,
    beta: T,
) -> Result<SparseMatrix<T>> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch { left: a.n, right: b.n });
    }
    let n = a.n;
    let mut out = SparseMatrix::zeros(n);
    out.col_idx.reserve(a.nnz().max(b.nnz()));
    out.values.reserve(a.nnz().max(b.nnz()));
    let push = |out: &mut SparseMatrix<T>, j: usize, v: T| {
        if v != T::zero() {
            out.col_idx.push(j);
            out.values.push(v);
        }
    };
    for i in 0..n {
        let (ca, va) = a.row(i);
        let (cb, vb) = b.row(i);
        let (mut p, mut q) = (0, 0);
        while p < ca.len() || q < cb.len() {
            if q == cb.len() || (p < ca.len() && ca[p] < cb[q]) {
                push(&mut out, ca[p], alpha * va[p]);
                p += 1;
            } else if p == ca.len() || cb[q] < ca[p] {
                push(&mut out, cb[q], beta * vb[q]);
                q += 1;
            } else {
                push(&mut out, ca[p], alpha * va[p] + beta * vb[q]);
                p += 1;
                q += 1;
            }
        }
        out.row_ptr[i + 1] = out.col_idx.len();
    }
    Ok(out)
}

/// Sparse × sparse product by row-wise accumulation into a dense scatter
/// workspace. Each output row is independent; contributions are added in
/// the order of `A`'s row then `B`'s row, so the result is deterministic.
pub fn spgemm<T: Scalar>(a: &SparseMatrix<T>, b: &SparseMatrix<T>) -> Result<SparseMatrix<T>> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch { left: a.n, right: b.n });
    }
    let n = a.n;
    let mut out = SparseMatrix::zeros(n);
    let mut acc = vec![T::zero(); n];
    let mut marker = vec![usize::MAX; n];
    let mut cols: Vec<usize> = Vec::new();
    for i in 0..n {
        cols.clear();
        let (ca, va) = a.row(i);
        for (&k, &aik) in ca.iter().zip(va) {
            let (cb, vb) = b.row(k);
            for (&j, &bkj) in cb.iter().zip(vb) {
                if marker[j] != i {
                    marker[j] = i;
                    acc[j] = aik * bkj;
                    cols.push(j);
                } else {
                    acc[j] = acc[j] + aik * bkj;
                }
            }
        }
        cols.sort_unstable();
        for &j in &cols {
            let v = acc[j];
            if v != T::zero() {
                out.col_idx.push(j);
                out.values.push(v);
            }
        }
        out.row_ptr[i + 1] = out.col_idx.len();
    }
    Ok(out)
}

/// Normality test: `‖AAᵀ − AᵀA‖_F ≤ tol·‖A‖_F²`.
pub fn is_normal<T: Scalar>(a: &SparseMatrix<T>, tol: T) -> bool {
    if a.is_zero() {
        return true;
    }
    let at = a.transpose();
    let left = spgemm(a, &at).expect("square");
    let right = spgemm(&at, a).expect("square");
    let comm = add(&left, &right, T::one(), -T::one()).expect("square");
    let na = a.frobenius_norm();
    comm.frobenius_norm() <= tol * na * na
}
