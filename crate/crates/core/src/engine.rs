//! Filtered Taylor phase and filtered incremental squaring.
//!
//! The result is held as the incremental part `T̂` with `e^H ≈ I + T̂`; the
//! identity is never added to the stored matrix, so small increments are not
//! rounded away against ones on the diagonal.

use crate::error::{Error, Result};
use crate::error_model::{make_plan, ExpmPlan};
use crate::filter::{filter_matrix, FilterReport};
use crate::scalar::Scalar;
use crate::sparse::{add, is_normal, spgemm, BandwidthProfile, SparseMatrix};

/// How drop thresholds are turned into filter budgets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ThresholdMode {
    /// Thresholds are absolute Frobenius-norm budgets for the dropped mass.
    #[default]
    Absolute,
    /// Thresholds are multiplied by `‖I + X‖_F`, where `X` is the running
    /// Taylor sum or the unfiltered squaring iterate.
    NormScaled,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Normality {
    #[default]
    Auto,
    Normal,
    NonNormal,
}

#[derive(Clone, Debug)]
pub struct ExpmOptions<T> {
    /// Tolerance for the filter certificate `‖A − Ã‖ ≤ ε_g(1 + e_r)`.
    pub e_r: T,
    pub normality: Normality,
    /// Relative commutator tolerance used when `normality` is `Auto`.
    pub normality_tol: T,
    pub threshold_mode: ThresholdMode,
    /// Run the same schedule with every threshold forced to zero.
    pub disable_filtering: bool,
    /// Refuse any product whose predicted storage exceeds this many bytes.
    pub mem_cap_bytes: Option<u128>,
}

impl<T: Scalar> Default for ExpmOptions<T> {
    fn default() -> Self {
        Self {
            e_r: T::of(0.1),
            normality: Normality::Auto,
            normality_tol: T::of(1e-12),
            threshold_mode: ThresholdMode::Absolute,
            disable_filtering: false,
            mem_cap_bytes: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaylorStep<T> {
    /// Term index `i` of `Ŝᵢ = Ŝᵢ₋₁H₀/i`.
    pub term: usize,
    pub nnz: usize,
    pub bandwidth: BandwidthProfile,
    pub threshold: T,
    /// `None` for the first term (never filtered) and for skipped terms.
    pub filter: Option<FilterReport<T>>,
    pub is_zero: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SquaringStep<T> {
    pub step: usize,
    pub nnz: usize,
    pub bandwidth: BandwidthProfile,
    pub threshold: T,
    pub filter: FilterReport<T>,
    pub norm: T,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct IterationTrace<T> {
    pub taylor: Vec<TaylorStep<T>>,
    pub squaring: Vec<SquaringStep<T>>,
}

impl<T> IterationTrace<T> {
    /// Last Taylor term that survived filtering (0 if none did).
    pub fn effective_taylor_order(&self) -> usize {
        self.taylor.iter().filter(|s| !s.is_zero).map(|s| s.term).max().unwrap_or(0)
    }

    /// Number of sparse products actually performed in the Taylor phase.
    pub fn taylor_products(&self) -> usize {
        self.taylor.iter().filter(|s| s.filter.is_some()).count()
    }
}

#[derive(Clone, Debug)]
pub struct ExpmResult<T> {
    /// Incremental part `T̂_N`; the exponential is `I + t_hat`.
    pub t_hat: SparseMatrix<T>,
    pub plan: ExpmPlan<T>,
    pub trace: IterationTrace<T>,
    pub normal: bool,
    pub norm: T,
}

fn check_storage<T>(n: usize, predicted: BandwidthProfile, cap: Option<u128>) -> Result<()> {
    let Some(cap) = cap else { return Ok(()) };
    let needed = predicted.storage_bytes::<T>(n);
    if needed > cap {
        return Err(Error::ResourceCap { needed, cap });
    }
    Ok(())
}

fn scaled_threshold<T: Scalar>(base: T, mode: ThresholdMode, reference: &SparseMatrix<T>) -> T {
    match mode {
        ThresholdMode::Absolute => base,
        ThresholdMode::NormScaled => base * reference.frobenius_norm_plus_identity(),
    }
}

/// Computes `T̂₀ = Σ Ŝᵢ`, stopping early once a filtered term is zero.
pub fn taylor_phase<T: Scalar>(
    h0: &SparseMatrix<T>,
    plan: &ExpmPlan<T>,
    opts: &ExpmOptions<T>,
) -> Result<(SparseMatrix<T>, Vec<TaylorStep<T>>)> {
    let order = plan.taylor_order;
    let mut steps = Vec::with_capacity(order);
    if order == 0 || h0.is_zero() {
        for term in 1..=order {
            steps.push(TaylorStep {
                term,
                nnz: 0,
                bandwidth: BandwidthProfile::default(),
                threshold: plan.eps_g_taylor,
                filter: None,
                is_zero: true,
            });
        }
        return Ok((SparseMatrix::zeros(h0.n()), steps));
    }

    let mut term_mat = h0.clone();
    let mut sum = h0.clone();
    steps.push(TaylorStep {
        term: 1,
        nnz: term_mat.nnz(),
        bandwidth: term_mat.bandwidth(),
        threshold: plan.eps_g_taylor,
        filter: None,
        is_zero: false,
    });
    let mut vanished = false;
    for term in 2..=order {
        if vanished {
            steps.push(TaylorStep {
                term,
                nnz: 0,
                bandwidth: BandwidthProfile::default(),
                threshold: plan.eps_g_taylor,
                filter: None,
                is_zero: true,
            });
            continue;
        }
        check_storage::<T>(h0.n(), term_mat.bandwidth().product(h0.bandwidth(), h0.n()), opts.mem_cap_bytes)?;
        let divisor = T::of(term as f64);
        let raw = spgemm(&term_mat, h0)?.map_values(|v| v / divisor);
        let threshold = scaled_threshold(plan.eps_g_taylor, opts.threshold_mode, &sum);
        let (filtered, report) = filter_matrix(&raw, threshold, opts.e_r);
        vanished = filtered.is_zero();
        steps.push(TaylorStep {
            term,
            nnz: filtered.nnz(),
            bandwidth: filtered.bandwidth(),
            threshold,
            filter: Some(report),
            is_zero: vanished,
        });
        if !vanished {
            sum = add(&sum, &filtered, T::one(), T::one())?;
        }
        term_mat = filtered;
    }
    Ok((sum, steps))
}

/// Runs `T̃ᵢ = 2T̂ᵢ₋₁ + T̂ᵢ₋₁²`, `T̂ᵢ = filter(T̃ᵢ)` for `i = 1..=N`.
pub fn squaring_phase<T: Scalar>(
    t0: &SparseMatrix<T>,
    plan: &ExpmPlan<T>,
    opts: &ExpmOptions<T>,
) -> Result<(SparseMatrix<T>, Vec<SquaringStep<T>>)> {
    let mut t = t0.clone();
    let mut steps = Vec::with_capacity(plan.squarings);
    for step in 1..=plan.squarings {
        check_storage::<T>(t.n(), t.bandwidth().scaled(2, t.n()), opts.mem_cap_bytes)?;
        let raw = add(&t, &spgemm(&t, &t)?, T::two(), T::one())?;
        let threshold = scaled_threshold(plan.eps_g_squaring[step - 1], opts.threshold_mode, &raw);
        let (filtered, report) = filter_matrix(&raw, threshold, opts.e_r);
        steps.push(SquaringStep {
            step,
            nnz: filtered.nnz(),
            bandwidth: filtered.bandwidth(),
            threshold,
            filter: report,
            norm: filtered.frobenius_norm(),
        });
        t = filtered;
    }
    Ok((t, steps))
}

/// `e^H ≈ I + T̂_N` with forward relative error budget `eps_tol`.
pub fn expm<T: Scalar>(h: &SparseMatrix<T>, eps_tol: T, opts: &ExpmOptions<T>) -> Result<ExpmResult<T>> {
    if let Some((row, col)) = h.find_non_finite() {
        return Err(Error::NonFinite { row, col });
    }
    let norm = h.frobenius_norm();
    let normal = match opts.normality {
        Normality::Normal => true,
        Normality::NonNormal => false,
        Normality::Auto => is_normal(h, opts.normality_tol),
    };
    let mut plan = make_plan(norm, eps_tol, normal)?;
    if opts.disable_filtering {
        plan = plan.without_filtering();
    }
    let h0 = h.scale(T::pow2(-(plan.squarings as i32)));
    let (t0, taylor) = taylor_phase(&h0, &plan, opts)?;
    let (t_hat, squaring) = squaring_phase(&t0, &plan, opts)?;
    Ok(ExpmResult {
        t_hat,
        plan,
        trace: IterationTrace { taylor, squaring },
        normal,
        norm,
    })
}

impl<T: Scalar> ExpmResult<T> {
    pub fn n(&self) -> usize {
        self.t_hat.n()
    }

    /// `(I + T̂)·x` for one vector.
    pub fn apply(&self, x: &[T]) -> Result<Vec<T>> {
        let tx = self.t_hat.mul_vec(x)?;
        Ok(x.iter().zip(tx).map(|(&a, b)| a + b).collect())
    }

    /// `(I + T̂)·X` for a block stored as columns.
    pub fn apply_block(&self, columns: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
        columns.iter().map(|c| self.apply(c)).collect()
    }

    /// Materializes `I + T̂`.
    pub fn to_full(&self) -> SparseMatrix<T> {
        add(&SparseMatrix::identity(self.n()), &self.t_hat, T::one(), T::one()).expect("same size")
    }

    /// Column `j` of `I + T̂`.
    pub fn column(&self, j: usize) -> Vec<T> {
        let mut e = vec![T::zero(); self.n()];
        e[j] = T::one();
        self.apply(&e).expect("sized to matrix")
    }
}
