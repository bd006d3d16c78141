//! End-to-end behaviour of the filtered engine.

use spexpm::baselines::{pim_expm_sparse, relative_error, ssat_expm, DenseMatrix, PimOptions};
use spexpm::io::{generate, GeneratorSpec};
use spexpm::{expm, Csr, Csr32, ExpmOptions, Normality, SparseMatrix, ThresholdMode};

fn randsym(n: usize, density: f64, target_norm: f64, seed: u64) -> Csr {
    let h: Csr = generate(&GeneratorSpec::RandSym { n, density }, seed).unwrap();
    h.scale(target_norm / h.frobenius_norm())
}

fn randn(n: usize, density: f64, target_norm: f64, seed: u64) -> Csr {
    let h: Csr = generate(&GeneratorSpec::RandN { n, density }, seed).unwrap();
    h.scale(target_norm / h.frobenius_norm())
}

fn dense_oracle(h: &Csr) -> DenseMatrix<f64> {
    let p = spexpm::select_params(h.frobenius_norm(), 1e-16).unwrap();
    ssat_expm(&DenseMatrix::from_sparse(h), p.taylor_order + 4, p.squarings).unwrap()
}

#[test]
fn unfiltered_run_is_bitwise_the_plain_incremental_method() {
    for seed in 0..6 {
        let h = randn(60, 0.05, 8.0, seed);
        let opts = ExpmOptions { disable_filtering: true, ..ExpmOptions::default() };
        let r = expm(&h, 1e-12, &opts).unwrap();
        let pim = pim_expm_sparse(&h, r.plan.taylor_order, r.plan.squarings, &PimOptions::default()).unwrap();
        assert_eq!(r.t_hat, pim.t);
        assert!(r.trace.squaring.iter().all(|s| s.filter.dropped_count == 0));
    }
}

#[test]
fn semigroup() {
    for seed in 0..4 {
        let h = randsym(50, 0.08, 3.0, seed);
        let v: Vec<f64> = (0..50).map(|i| ((i * 7 + 3) % 11) as f64 - 5.0).collect();
        let e1 = expm(&h, 1e-14, &ExpmOptions::default()).unwrap();
        let e2 = expm(&h.scale(2.0), 1e-14, &ExpmOptions::default()).unwrap();
        let twice = e1.apply(&e1.apply(&v).unwrap()).unwrap();
        let direct = e2.apply(&v).unwrap();
        let diff: f64 = twice.iter().zip(&direct).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let size: f64 = direct.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!(diff <= 1e-10 * size, "seed {seed}: {:e}", diff / size);
    }
}

#[test]
fn symmetric_input_gives_symmetric_output() {
    for seed in 0..4 {
        let h = randsym(120, 0.03, 15.0, seed);
        let r = expm(&h, 1e-12, &ExpmOptions::default()).unwrap();
        assert!(r.normal);
        let asym = spexpm::add(&r.t_hat, &r.t_hat.transpose(), 1.0, -1.0).unwrap().frobenius_norm();
        assert!(asym <= 1e-12 * r.t_hat.frobenius_norm());
    }
}

#[test]
fn trace_shape_and_effective_order() {
    let h: Csr = generate(&"tridiag:500:1:-2:1".parse().unwrap(), 0).unwrap();
    let r = expm(&h, 1e-16, &ExpmOptions::default()).unwrap();
    assert_eq!(r.trace.taylor.len(), r.plan.taylor_order);
    assert_eq!(r.trace.squaring.len(), r.plan.squarings);
    let m_eff = r.trace.effective_taylor_order();
    assert!(m_eff < r.plan.taylor_order);
    assert!(r.trace.taylor[m_eff..].iter().all(|s| s.is_zero && s.nnz == 0));
    assert_eq!(r.trace.taylor_products(), m_eff);
}

#[test]
fn accuracy_against_dense_oracle() {
    for seed in 0..5 {
        let h = randn(40, 0.1, 6.0, seed);
        let r = expm(&h, 1e-12, &ExpmOptions::default()).unwrap();
        assert!(!r.normal);
        assert!((r.plan.budget_fraction - 1.0 / 6.0).abs() < 1e-12);
        let got = DenseMatrix::from_sparse(&r.to_full());
        let err = relative_error(&got, &dense_oracle(&h));
        assert!(err <= 2.0 * r.plan.final_bound().max(1e-15), "seed {seed}: {err:e}");
    }
}

#[test]
fn norm_scaled_thresholds_stay_accurate() {
    let h = randsym(80, 0.05, 10.0, 3);
    let opts = ExpmOptions { threshold_mode: ThresholdMode::NormScaled, ..ExpmOptions::default() };
    let r = expm(&h, 1e-10, &opts).unwrap();
    let got = DenseMatrix::from_sparse(&r.to_full());
    assert!(relative_error(&got, &dense_oracle(&h)) <= 1e-9);
}

#[test]
fn forced_normality_changes_only_the_budget() {
    let h = randsym(30, 0.1, 4.0, 1);
    let normal = expm(&h, 1e-10, &ExpmOptions { normality: Normality::Normal, ..ExpmOptions::default() }).unwrap();
    let skewed = expm(&h, 1e-10, &ExpmOptions { normality: Normality::NonNormal, ..ExpmOptions::default() }).unwrap();
    assert_eq!(normal.plan.taylor_order, skewed.plan.taylor_order);
    assert_eq!(normal.plan.squarings, skewed.plan.squarings);
    assert!(normal.plan.budget_fraction > skewed.plan.budget_fraction);
}

#[test]
fn single_precision_run() {
    let h: Csr32 = generate(&"tridiag:200:0.5:-1:0.5".parse().unwrap(), 0).unwrap();
    let r = expm(&h, 1e-6f32, &ExpmOptions::default()).unwrap();
    let h64: Csr = generate(&"tridiag:200:0.5:-1:0.5".parse().unwrap(), 0).unwrap();
    let want = dense_oracle(&h64);
    let got = DenseMatrix::from_sparse(&r.to_full()).map(|&v| v as f64);
    assert!(relative_error(&got, &want) <= 1e-5);
}

#[test]
fn block_application() {
    let h = randsym(20, 0.2, 2.0, 9);
    let r = expm(&h, 1e-14, &ExpmOptions::default()).unwrap();
    let full = r.to_full();
    let cols: Vec<Vec<f64>> = (0..3).map(|j| (0..20).map(|i| ((i + j) % 5) as f64).collect()).collect();
    let out = r.apply_block(&cols).unwrap();
    for (c, o) in cols.iter().zip(&out) {
        let want = full.mul_vec(c).unwrap();
        for (a, b) in o.iter().zip(&want) {
            assert!((a - b).abs() <= 1e-13 * b.abs().max(1.0));
        }
    }
    assert_eq!(r.column(4), full.transpose().row_dense(4));
}

trait RowDense {
    fn row_dense(&self, i: usize) -> Vec<f64>;
}

impl RowDense for SparseMatrix<f64> {
    fn row_dense(&self, i: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.n()];
        let (cols, vals) = self.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            out[j] = v;
        }
        out
    }
}
