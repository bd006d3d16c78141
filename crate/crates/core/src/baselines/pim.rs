use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::{add, spgemm, BandwidthProfile, SparseMatrix, SparsityPattern};

/// Default storage cap for unfiltered runs: 8 GiB.
pub const DEFAULT_MEM_CAP: u128 = 8 << 30;

#[derive(Clone, Debug)]
pub struct PimOptions {
    /// Refuse a step whose predicted storage exceeds this many bytes.
    pub mem_cap_bytes: u128,
    /// Also follow the structural pattern with bitsets, which ignores
    /// cancellation and underflow.
    pub track_structure: bool,
}

impl Default for PimOptions {
    fn default() -> Self {
        Self { mem_cap_bytes: DEFAULT_MEM_CAP, track_structure: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PimStep {
    pub step: usize,
    pub nnz: usize,
    pub bandwidth: BandwidthProfile,
    pub structural_bandwidth: Option<BandwidthProfile>,
}

#[derive(Clone, Debug)]
pub struct PimResult<T> {
    /// `T_N` with `e^H ≈ I + T_N`.
    pub t: SparseMatrix<T>,
    /// Bandwidth of `T_0`.
    pub initial_bandwidth: BandwidthProfile,
    pub steps: Vec<PimStep>,
}

fn check_cap<T>(n: usize, bw: BandwidthProfile, opts: &PimOptions) -> Result<()> {
    let mut needed = bw.storage_bytes::<T>(n);
    if opts.track_structure {
        needed += SparsityPattern::storage_bytes(n);
    }
    if needed > opts.mem_cap_bytes {
        return Err(Error::ResourceCap { needed, cap: opts.mem_cap_bytes });
    }
    Ok(())
}

/// Unfiltered incremental scaling and squaring on sparse storage.
///
/// Performs the same arithmetic, in the same order, as the engine with all
/// drop thresholds at zero.
pub fn pim_expm_sparse<T: Scalar>(
    h: &SparseMatrix<T>,
    m: usize,
    n_squarings: usize,
    opts: &PimOptions,
) -> Result<PimResult<T>> {
    let n = h.n();
    if let Some((row, col)) = h.find_non_finite() {
        return Err(Error::NonFinite { row, col });
    }
    check_cap::<T>(n, h.bandwidth().scaled(m.max(1), n), opts)?;

    let h0 = h.scale(T::pow2(-(n_squarings as i32)));
    let mut t = SparseMatrix::zeros(n);
    if m >= 1 && !h0.is_zero() {
        let mut term = h0.clone();
        t = h0.clone();
        for i in 2..=m {
            let divisor = T::of(i as f64);
            term = spgemm(&term, &h0)?.map_values(|v| v / divisor);
            if term.is_zero() {
                break;
            }
            t = add(&t, &term, T::one(), T::one())?;
        }
    }

    let initial_bandwidth = t.bandwidth();
    let mut pattern = opts.track_structure.then(|| SparsityPattern::of(&t));
    let mut steps = Vec::with_capacity(n_squarings);
    let mut structural = initial_bandwidth;
    for step in 1..=n_squarings {
        let predicted = pattern.as_ref().map_or(t.bandwidth(), |_| structural).scaled(2, n);
        check_cap::<T>(n, predicted, opts)?;
        t = add(&t, &spgemm(&t, &t)?, T::two(), T::one())?;
        if let Some(p) = pattern.as_mut() {
            *p = p.square_step();
            structural = p.bandwidth();
        }
        steps.push(PimStep {
            step,
            nnz: t.nnz(),
            bandwidth: t.bandwidth(),
            structural_bandwidth: pattern.as_ref().map(|_| structural),
        });
    }
    Ok(PimResult { t, initial_bandwidth, steps })
}
