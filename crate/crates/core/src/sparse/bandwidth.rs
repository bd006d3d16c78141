use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::SparseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Upper, lower and total bandwidth of a nonzero pattern.
///
/// The zero matrix has profile `(0, 0, 0)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BandwidthProfile {
    /// max(col − row) over stored entries, at least 0.
    pub upper: usize,
    /// max(row − col) over stored entries, at least 0.
    pub lower: usize,
    pub total: usize,
}

impl BandwidthProfile {
    pub fn new(upper: usize, lower: usize) -> Self {
        Self { upper, lower, total: upper + lower }
    }

    /// Profile of a product of `factor` matrices with this profile, clipped
    /// to an `n × n` matrix.
    pub fn scaled(self, factor: usize, n: usize) -> Self {
        let cap = n.saturating_sub(1);
        Self::new(self.upper.saturating_mul(factor).min(cap), self.lower.saturating_mul(factor).min(cap))
    }

    /// Profile of the product of a matrix with this profile and one with
    /// `other`, clipped to an `n × n` matrix.
    pub fn product(self, other: Self, n: usize) -> Self {
        let cap = n.saturating_sub(1);
        Self::new((self.upper + other.upper).min(cap), (self.lower + other.lower).min(cap))
    }

    /// Largest number of entries an `n × n` matrix with this profile can hold.
    pub fn max_entries(self, n: usize) -> u128 {
        (0..n)
            .map(|i| {
                let lo = i.saturating_sub(self.lower);
                let hi = (i + self.upper).min(n.saturating_sub(1));
                (hi - lo + 1) as u128
            })
            .sum()
    }

    /// Upper bound on CSR storage in bytes for an `n × n` matrix with this
    /// profile and entries of type `T`.
    pub fn storage_bytes<T>(self, n: usize) -> u128 {
        let per_entry = (std::mem::size_of::<T>() + std::mem::size_of::<usize>()) as u128;
        self.max_entries(n) * per_entry + (n as u128 + 1) * std::mem::size_of::<usize>() as u128
    }

    pub fn of<T: Scalar>(a: &SparseMatrix<T>) -> Self {
        let (mut upper, mut lower) = (0, 0);
        for i in 0..a.n() {
            let (cols, _) = a.row(i);
            if let (Some(&first), Some(&last)) = (cols.first(), cols.last()) {
                if first < i {
                    lower = lower.max(i - first);
                }
                if last > i {
                    upper = upper.max(last - i);
                }
            }
        }
        Self::new(upper, lower)
    }
}

/// A bijection on `0..n`; `apply(i)` is the new position of index `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &p in &map {
            if p >= n {
                return Err(Error::InvalidPermutation(format!("index {p} out of range 0..{n}")));
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidPermutation(format!("index {p} repeated")));
            }
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect() }
    }

    pub fn reversal(n: usize) -> Self {
        Self { map: (0..n).rev().collect() }
    }

    pub fn random(n: usize, seed: u64) -> Self {
        let mut map: Vec<usize> = (0..n).collect();
        map.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Self { map }
    }

    /// Permutation placing `order[k]` at position `k`.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let mut map = vec![usize::MAX; order.len()];
        for (k, &old) in order.iter().enumerate() {
            if old >= order.len() {
                return Err(Error::InvalidPermutation(format!("index {old} out of range")));
            }
            map[old] = k;
        }
        Self::new(map)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &p) in self.map.iter().enumerate() {
            inv[p] = i;
        }
        Self { map: inv }
    }
}
