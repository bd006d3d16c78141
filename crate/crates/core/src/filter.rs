//! Adaptive drop-tolerance filtering with a certified bound on the
//! Frobenius norm of what is dropped.

use crate::scalar::Scalar;
use crate::sparse::{scaled_norm2, SparseMatrix};

/// Limit on passes that scan the residual. Termination is guaranteed well
/// before this; if it were ever reached, everything still in the residual is
/// kept.
pub const MAX_FILTER_PASSES: usize = 64;
/// Limit on threshold updates, which stops a stalled threshold sequence when
/// `eps_g / b` rounds to one.
pub const MAX_THRESHOLD_UPDATES: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq)]
pub struct FilterReport<T> {
    /// Threshold updates, including passes replayed without a scan.
    pub iterations: usize,
    /// Passes that actually scanned the residual entries.
    pub sweeps: usize,
    /// Per-pass drop thresholds.
    pub thresholds: Vec<T>,
    /// `‖A − Ã‖_F`.
    pub dropped_norm: T,
    pub dropped_count: usize,
    pub kept_count: usize,
    /// A pass limit was hit and the remaining residual was kept.
    pub capped: bool,
}

impl<T: Scalar> FilterReport<T> {
    fn untouched(nnz: usize) -> Self {
        Self {
            iterations: 0,
            sweeps: 0,
            thresholds: Vec::new(),
            dropped_norm: T::zero(),
            dropped_count: 0,
            kept_count: nnz,
            capped: false,
        }
    }

    pub fn final_threshold(&self) -> Option<T> {
        self.thresholds.last().copied()
    }
}

/// Drops small entries of `a` while guaranteeing `‖A − Ã‖_F ≤ eps_g(1 + e_r)`.
///
/// Each pass moves every residual entry with magnitude strictly above
/// `eps_g / m` into the kept set, recomputes the residual norm `b`, and sets
/// `m = b / threshold`. The loop runs while `b > eps_g(1 + e_r)`, starting
/// from `b = ‖A‖_F`. Kept entries are copied bit-for-bit.
pub fn filter_matrix<T: Scalar>(a: &SparseMatrix<T>, eps_g: T, e_r: T) -> (SparseMatrix<T>, FilterReport<T>) {
    assert!(e_r > T::zero(), "e_r must be positive");
    assert!(eps_g >= T::zero(), "eps_g must be nonnegative");
    if eps_g == T::zero() {
        return (a.clone(), FilterReport::untouched(a.nnz()));
    }

    let values = a.values();
    let mut kept = vec![false; values.len()];
    let mut residual: Vec<usize> = (0..values.len()).collect();
    let limit = eps_g * (T::one() + e_r);
    let mut b = a.frobenius_norm();
    let mut m = T::one();
    let mut thresholds = Vec::new();
    let mut scratch: Vec<T> = Vec::new();
    let mut sweeps = 0;
    let mut capped = false;

    while b > limit {
        if sweeps == MAX_FILTER_PASSES || thresholds.len() >= MAX_THRESHOLD_UPDATES {
            for &k in &residual {
                kept[k] = true;
            }
            residual.clear();
            b = T::zero();
            capped = true;
            break;
        }
        let threshold = eps_g / m;
        thresholds.push(threshold);
        residual.retain(|&k| {
            if values[k].abs() > threshold {
                kept[k] = true;
                false
            } else {
                true
            }
        });
        scratch.clear();
        scratch.extend(residual.iter().map(|&k| values[k]));
        b = scaled_norm2(&scratch);
        m = b / threshold;
        sweeps += 1;

        // Passes that cannot move any entry leave b unchanged and only
        // rescale the threshold, so they are replayed without a sweep.
        let largest = scratch.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
        while b > limit && eps_g / m >= largest && thresholds.len() < MAX_THRESHOLD_UPDATES {
            let threshold = eps_g / m;
            thresholds.push(threshold);
            m = b / threshold;
        }
    }

    let mut idx = 0;
    let filtered = a.retain(|_, _, _| {
        let keep = kept[idx];
        idx += 1;
        keep
    });
    let report = FilterReport {
        iterations: thresholds.len(),
        sweeps,
        thresholds,
        dropped_norm: b,
        dropped_count: residual.len(),
        kept_count: filtered.nnz(),
        capped,
    };
    (filtered, report)
}
