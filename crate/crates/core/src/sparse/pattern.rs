use super::{BandwidthProfile, SparseMatrix};
use crate::scalar::Scalar;

/// Structural nonzero pattern stored as one bitset per row.
///
/// Used to follow fill-in symbolically, where floating-point underflow would
/// otherwise hide structurally nonzero positions. Storage is `n²/8` bytes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsityPattern {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl SparsityPattern {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64);
        Self { n, words, bits: vec![0; n * words] }
    }

    pub fn of<T: Scalar>(a: &SparseMatrix<T>) -> Self {
        let mut p = Self::empty(a.n());
        for (i, j, _) in a.iter() {
            p.insert(i, j);
        }
        p
    }

    /// Bytes needed for an `n×n` pattern.
    pub fn storage_bytes(n: usize) -> u128 {
        n as u128 * n.div_ceil(64) as u128 * 8
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn insert(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1u64 << (j % 64);
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] & (1u64 << (j % 64)) != 0
    }

    fn row_bits(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn row_cols(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_bits(i).iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + b)
            })
        })
    }

    /// Pattern of `A + A·A` (the structure of one incremental squaring step).
    pub fn square_step(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            let cols: Vec<usize> = self.row_cols(i).collect();
            let dst = i * self.words;
            for k in cols {
                let src = k * self.words;
                for w in 0..self.words {
                    out.bits[dst + w] |= self.bits[src + w];
                }
            }
        }
        out
    }

    pub fn bandwidth(&self) -> BandwidthProfile {
        let (mut upper, mut lower) = (0, 0);
        for i in 0..self.n {
            let row = self.row_bits(i);
            let first = row.iter().position(|&w| w != 0);
            let last = row.iter().rposition(|&w| w != 0);
            if let (Some(f), Some(l)) = (first, last) {
                let fc = f * 64 + row[f].trailing_zeros() as usize;
                let lc = l * 64 + 63 - row[l].leading_zeros() as usize;
                if fc < i {
                    lower = lower.max(i - fc);
                }
                if lc > i {
                    upper = upper.max(lc - i);
                }
            }
        }
        BandwidthProfile::new(upper, lower)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_step_doubles_band() {
        let mut t = Vec::new();
        for i in 0..200usize {
            for d in 0..=3usize {
                if i + d < 200 {
                    t.push((i, i + d, 1.0));
                    t.push((i + d, i, 1.0));
                }
            }
        }
        let a = SparseMatrix::<f64>::from_triplets(200, t).unwrap();
        let p = SparsityPattern::of(&a);
        assert_eq!(p.bandwidth(), a.bandwidth());
        assert_eq!(p.count(), a.nnz());
        let q = p.square_step();
        assert_eq!(q.bandwidth(), BandwidthProfile::new(6, 6));
        assert!(q.contains(100, 106) && !q.contains(100, 107));
    }
}
