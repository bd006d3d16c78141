use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::exact::{pow10, to_f64};

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Coefficients `G_0 … G_{count−1}` of the Toeplitz part of
/// `exp(tridiag(−1, 2, −1)/(n+1))`:
///
/// `G_s = (−1)^s Σ_{i≥s} C(2i, i+s) / (i!·(n+1)^i)`
///
/// The inner series is summed exactly until a term drops below `1e-40` of
/// the partial sum.
pub fn toeplitz_coefficients(n: usize, count: usize) -> Vec<BigRational> {
    let base = BigInt::from(n as u64 + 1);
    let tol = BigRational::new(BigInt::one(), pow10(40));
    (0..count as u64)
        .map(|s| {
            let mut sum = BigRational::zero();
            // 1 / (i! (n+1)^i), updated incrementally
            let mut weight = BigRational::one();
            for i in 1..=s {
                weight /= BigRational::from_integer(BigInt::from(i) * &base);
            }
            let mut i = s;
            loop {
                let term = &weight * BigRational::from_integer(binomial(2 * i, i + s));
                sum += &term;
                if term.is_zero() || term < &sum * &tol {
                    break;
                }
                i += 1;
                weight /= BigRational::from_integer(BigInt::from(i) * &base);
            }
            if s % 2 == 1 {
                -sum
            } else {
                sum
            }
        })
        .collect()
}

/// Column `n/2` (0-based) of `toeplitz(G_0, …, G_{count−1}, 0, …)`, the
/// reference for the middle column of `exp(tridiag(−1, 2, −1)/(n+1))`
/// when `n` is large enough that the corner corrections vanish there.
pub fn toeplitz_reference_column(n: usize, count: usize) -> Vec<f64> {
    let g: Vec<f64> = toeplitz_coefficients(n, count).iter().map(to_f64).collect();
    let mid = n / 2;
    (0..n).map(|r| g.get(r.abs_diff(mid)).copied().unwrap_or(0.0)).collect()
}
