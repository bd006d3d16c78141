//! Forward-error bounds for the truncated Taylor / incremental squaring
//! scheme, the choice of Taylor order and squaring count, and the drop
//! thresholds handed to the filter at every step.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest Taylor order considered before declaring a problem infeasible.
pub const MAX_TAYLOR_ORDER: usize = 120;
/// Width of the squaring-count search window above the minimal count.
pub const SQUARING_WINDOW: usize = 50;

/// A Taylor order `M` and a squaring count `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParamChoice {
    pub taylor_order: usize,
    pub squarings: usize,
}

impl ParamChoice {
    /// `M·2^N`, or `None` if it does not fit in a `u128`.
    pub fn cost(&self) -> Option<u128> {
        if self.taylor_order == 0 {
            return Some(0);
        }
        if self.squarings >= 121 {
            return None;
        }
        (self.taylor_order as u128).checked_mul(1u128 << self.squarings)
    }
}

/// Upper bound on `‖F₀⁻¹R₀‖` for an order-`m` Taylor polynomial of a matrix
/// with norm `x`:
///
/// `(1/m!) Σ_{i≥0} x^{m+1+i} / (i!·(i+m+1))`
///
/// Terms follow `t₀ = x^{m+1}/(m+1)!`,
/// `t_{i+1} = t_i · x(i+m+1) / ((i+1)(i+m+2))`, and summation stops once a
/// term falls below the unit roundoff times the partial sum.
pub fn taylor_remainder_bound<T: Scalar>(x: T, m: usize) -> T {
    if x <= T::zero() {
        return T::zero();
    }
    let mut term = T::one();
    for k in 1..=m + 1 {
        term = term * x / T::of(k as f64);
    }
    let u = T::unit_roundoff();
    let mut sum = T::zero();
    for i in 0..10_000usize {
        sum = sum + term;
        if term <= u * sum || term == T::zero() {
            break;
        }
        let (fi, fm) = (T::of(i as f64), T::of(m as f64));
        term = term * x * (fi + fm + T::one()) / ((fi + T::one()) * (fi + fm + T::two()));
    }
    sum
}

/// Relative error bounds after each squaring, `r_i = 2^i r₀` for `i = 0..=n`.
pub fn propagate_error<T: Scalar>(r0: T, n: usize) -> Vec<T> {
    let mut r = Vec::with_capacity(n + 1);
    let mut cur = r0;
    r.push(cur);
    for _ in 0..n {
        cur = cur * T::two();
        r.push(cur);
    }
    r
}

fn check_tolerance<T: Scalar>(eps_tol: T) -> Result<()> {
    let floor = T::min_tolerance();
    if eps_tol.is_nan() || eps_tol < floor {
        return Err(Error::ToleranceBelowRoundoff {
            tol: eps_tol.to_f64().unwrap_or(f64::NAN),
            floor: floor.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

/// Smallest `N ≥ 0` with `norm·2^{-N} ≤ 1`.
fn min_squarings<T: Scalar>(norm: T) -> usize {
    let mut x = norm;
    let mut n = 0;
    while x > T::one() {
        x = x / T::two();
        n += 1;
    }
    n
}

/// Minimal `M` meeting `2^N · bound(norm·2^{-N}, M) ≤ eps_tol`, if any within the cap.
fn min_order<T: Scalar>(norm: T, squarings: usize, eps_tol: T) -> Option<usize> {
    let x = norm * T::pow2(-(squarings as i32));
    let amplification = T::pow2(squarings as i32);
    (0..=MAX_TAYLOR_ORDER).find(|&m| amplification * taylor_remainder_bound(x, m) <= eps_tol)
}

/// Chooses `(M, N)` minimizing `M·2^N` subject to `‖H‖2^{-N} ≤ 1` and the
/// forward-error bound `2^N·bound(‖H‖2^{-N}, M) ≤ eps_tol`. `N` is searched in
/// `[N₀, N₀ + 50]`; ties go to the smaller `N`.
pub fn select_params<T: Scalar>(norm: T, eps_tol: T) -> Result<ParamChoice> {
    check_tolerance(eps_tol)?;
    let infeasible = || Error::Infeasible {
        norm: norm.to_f64().unwrap_or(f64::NAN),
        eps_tol: eps_tol.to_f64().unwrap_or(f64::NAN),
    };
    if !norm.is_finite() || norm < T::zero() {
        return Err(infeasible());
    }
    if norm == T::zero() {
        return Ok(ParamChoice { taylor_order: 0, squarings: 0 });
    }
    let n0 = min_squarings(norm);
    // costs are compared relative to the common factor 2^N₀
    let mut best: Option<(u128, ParamChoice)> = None;
    for squarings in n0..=n0 + SQUARING_WINDOW {
        let Some(m) = min_order(norm, squarings, eps_tol) else {
            continue;
        };
        let rel_cost = (m as u128) << (squarings - n0);
        if best.is_none_or(|(c, _)| rel_cost < c) {
            best = Some((rel_cost, ParamChoice { taylor_order: m, squarings }));
        }
    }
    best.map(|(_, p)| p).ok_or_else(infeasible)
}

/// Minimal `M₁·2^{N₁}` over the same feasible set as [`select_params`].
///
/// Multiplied by a bandwidth bound of `H`, this bounds the bandwidth of a
/// sparse approximation to `e^H` within relative error `eps`.
pub fn alpha_bound<T: Scalar>(norm: T, eps: T) -> Result<u128> {
    let choice = select_params(norm, eps)?;
    choice.cost().ok_or(Error::Infeasible {
        norm: norm.to_f64().unwrap_or(f64::NAN),
        eps_tol: eps.to_f64().unwrap_or(f64::NAN),
    })
}

/// Everything the engine needs before touching the matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpmPlan<T> {
    pub taylor_order: usize,
    pub squarings: usize,
    /// `‖H‖·2^{-N}`.
    pub scaled_norm: T,
    pub r0: T,
    /// `r[i] = 2^i r₀`, length `N + 1`.
    pub r: Vec<T>,
    pub eps_tol: T,
    /// Fraction of the error budget given to filtering.
    pub budget_fraction: T,
    pub eps_g_taylor: T,
    /// Threshold for squaring step `i` stored at index `i − 1`.
    pub eps_g_squaring: Vec<T>,
}

impl<T: Scalar> ExpmPlan<T> {
    pub fn final_bound(&self) -> T {
        *self.r.last().expect("r has N + 1 entries")
    }

    /// Same schedule with every drop threshold set to zero.
    pub fn without_filtering(&self) -> Self {
        Self {
            eps_g_taylor: T::zero(),
            eps_g_squaring: vec![T::zero(); self.squarings],
            ..self.clone()
        }
    }
}

/// Builds the full plan: `(M, N)`, the budget fraction
/// `a = 1/(N+1)` for normal `H` and `a = min(1, 1/‖H‖)` otherwise,
/// `r₀`, the doubling error sequence, and the drop thresholds
/// `ε_g⁽⁰⁾ = a·r₀ / (M·e^{2‖H₀‖})`, `ε_g⁽ⁱ⁾ = a·rᵢ`.
pub fn make_plan<T: Scalar>(norm: T, eps_tol: T, normal: bool) -> Result<ExpmPlan<T>> {
    let ParamChoice { taylor_order, squarings } = select_params(norm, eps_tol)?;
    let scaled_norm = norm * T::pow2(-(squarings as i32));
    let budget_fraction = if normal {
        T::one() / T::of((squarings + 1) as f64)
    } else if norm > T::one() {
        T::one() / norm
    } else {
        T::one()
    };
    let r0 = taylor_remainder_bound(scaled_norm, taylor_order);
    let r = propagate_error(r0, squarings);
    let eps_g_taylor = if taylor_order == 0 {
        T::zero()
    } else {
        budget_fraction * r0 / (T::of(taylor_order as f64) * (T::two() * scaled_norm).exp())
    };
    let eps_g_squaring = r[1..].iter().map(|&ri| budget_fraction * ri).collect();
    Ok(ExpmPlan {
        taylor_order,
        squarings,
        scaled_norm,
        r0,
        r,
        eps_tol,
        budget_fraction,
        eps_g_taylor,
        eps_g_squaring,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remainder_bound_trivial_values() {
        assert_eq!(taylor_remainder_bound(0.0f64, 5), 0.0);
        let v = taylor_remainder_bound(1.0f64, 0);
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn remainder_bound_no_overflow() {
        for m in 0..=60 {
            let v = taylor_remainder_bound(4.0f64, m);
            assert!(v.is_finite() && v > 0.0, "m = {m}");
        }
    }

    #[test]
    fn remainder_bound_monotone() {
        for &x in &[0.1f64, 0.5, 1.0] {
            for m in 0..30 {
                let a = taylor_remainder_bound(x, m);
                let b = taylor_remainder_bound(x, m + 1);
                assert!(b < a, "x = {x}, m = {m}");
            }
        }
        for m in 0..=30 {
            assert!(taylor_remainder_bound(0.1f64, m) < taylor_remainder_bound(0.5, m));
            assert!(taylor_remainder_bound(0.5f64, m) < taylor_remainder_bound(1.0, m));
        }
    }

    #[test]
    fn remainder_bound_below_coarse_majorant() {
        for &x in &[0.01f64, 0.1, 0.5, 1.0, 2.0] {
            let mut fact = 1.0f64;
            for m in 0..30usize {
                fact *= (m + 1) as f64;
                let majorant = x.exp() * x.powi(m as i32 + 1) / fact;
                assert!(taylor_remainder_bound(x, m) <= majorant * (1.0 + 1e-14));
            }
        }
    }

    #[test]
    fn doubling() {
        assert_eq!(propagate_error(0.0f64, 8), vec![0.0; 9]);
        let r = propagate_error(1e-20f64, 8);
        assert_eq!(r.len(), 9);
        assert_eq!(r[8], 2.56e-18);
        for w in r.windows(2) {
            assert_eq!(w[1] / w[0], 2.0);
        }
    }

    #[test]
    fn toeplitz_parameters() {
        let p = select_params(244.9f64, 1e-16).unwrap();
        assert_eq!((p.taylor_order, p.squarings), (20, 8));
        assert_eq!(alpha_bound(244.9f64, 1e-16).unwrap(), 5120);
        let r0 = taylor_remainder_bound(244.9f64 / 256.0, 20);
        assert!(*propagate_error(r0, 8).last().unwrap() <= 1e-16);
    }

    #[test]
    fn zero_norm_and_tolerance_checks() {
        let p = select_params(0.0f64, 1e-16).unwrap();
        assert_eq!((p.taylor_order, p.squarings), (0, 0));
        assert_eq!(alpha_bound(0.0f64, 1e-3).unwrap(), 0);
        assert!(matches!(select_params(1.0f64, 1e-17), Err(Error::ToleranceBelowRoundoff { .. })));
        assert!(matches!(select_params(1.0f32, 1e-16), Err(Error::ToleranceBelowRoundoff { .. })));
        assert!(matches!(select_params(f64::INFINITY, 1e-8), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn relaxing_tolerance_cannot_raise_alpha() {
        assert!(alpha_bound(2.0f64, 1e-8).unwrap() <= alpha_bound(2.0f64, 1e-16).unwrap());
    }

    #[test]
    fn selection_is_minimal_at_chosen_n() {
        for &(norm, eps) in &[(244.9f64, 1e-16), (3.0, 1e-10), (0.3, 1e-12), (1e6, 1e-14)] {
            let p = select_params(norm, eps).unwrap();
            let x = norm * 2f64.powi(-(p.squarings as i32));
            assert!(x <= 1.0);
            let amp = 2f64.powi(p.squarings as i32);
            assert!(amp * taylor_remainder_bound(x, p.taylor_order) <= eps);
            if p.taylor_order > 0 {
                assert!(amp * taylor_remainder_bound(x, p.taylor_order - 1) > eps);
            }
        }
    }

    #[test]
    fn plans() {
        let p = make_plan(244.9f64, 1e-16, true).unwrap();
        assert_eq!((p.taylor_order, p.squarings), (20, 8));
        assert!((p.budget_fraction - 1.0 / 9.0).abs() < 1e-17);
        assert_eq!(p.r.len(), 9);
        assert_eq!(p.eps_g_squaring.len(), 8);
        assert!(p.final_bound() <= 1e-16);
        let expected = p.budget_fraction * p.r0 / (20.0 * (2.0 * p.scaled_norm).exp());
        assert_eq!(p.eps_g_taylor, expected);
        assert_eq!(p.eps_g_squaring[7], p.budget_fraction * p.r[8]);

        let q = make_plan(1000.0f64, 1e-16, false).unwrap();
        assert!((q.budget_fraction - 1e-3).abs() < 1e-18);
        let small = make_plan(0.5f64, 1e-10, false).unwrap();
        assert_eq!(small.budget_fraction, 1.0);

        let z = make_plan(0.0f64, 1e-16, true).unwrap();
        assert_eq!((z.taylor_order, z.squarings), (0, 0));
        assert_eq!(z.r, vec![0.0]);
        assert_eq!(z.eps_g_taylor, 0.0);
        assert!(z.eps_g_squaring.is_empty());
    }

    #[test]
    fn single_precision_plan() {
        let p = make_plan(10.0f32, 1e-6, true).unwrap();
        assert!(p.final_bound() <= 1e-6);
        assert!(p.scaled_norm <= 1.0);
    }
}
