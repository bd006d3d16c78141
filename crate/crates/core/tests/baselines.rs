//! Behaviour of the reference methods on the small ill-conditioned matrices
//! and agreement between them on benign inputs.

use spexpm::baselines::{
    closed_form_small, pim_expm_dense, pim_expm_sparse, relative_error, ssat_expm, tse_expm, DenseMatrix,
    PimOptions, SmallMatrix,
};
use spexpm::io::{generate, GeneratorSpec};
use spexpm::{expm, select_params, Csr, ExpmOptions};

fn plus_identity(t: &DenseMatrix<f64>) -> DenseMatrix<f64> {
    t + &DenseMatrix::identity(t.rows())
}

#[test]
fn incremental_methods_track_small_increments() {
    for which in SmallMatrix::ALL {
        let (h, exact) = closed_form_small(which);
        let p = select_params(h.frobenius_norm(), 1e-16).unwrap();
        let pim = plus_identity(&pim_expm_dense(&h, p.taylor_order, p.squarings).unwrap());
        assert!(relative_error(&pim, &exact) <= 1e-13, "H{}", which.index());
    }
}

#[test]
fn full_matrix_squaring_loses_accuracy_on_defective_inputs() {
    let mut bad = 0;
    for which in [SmallMatrix::H1, SmallMatrix::H2, SmallMatrix::H3] {
        let (h, exact) = closed_form_small(which);
        let p = select_params(h.frobenius_norm(), 1e-16).unwrap();
        let ssat = ssat_expm(&h, p.taylor_order, p.squarings).unwrap();
        if relative_error(&ssat, &exact) >= 1e-12 {
            bad += 1;
        }
    }
    assert!(bad >= 2);

    let (h2, exact) = closed_form_small(SmallMatrix::H2);
    let p = select_params(h2.frobenius_norm(), 1e-16).unwrap();
    let err = relative_error(&ssat_expm(&h2, p.taylor_order, p.squarings).unwrap(), &exact);
    assert!((1e-10..1e-7).contains(&err), "{err:e}");
}

#[test]
fn plain_taylor_cancels_on_stiff_input() {
    let (h4, exact) = closed_form_small(SmallMatrix::H4);
    let err = relative_error(&tse_expm(&h4, 200).unwrap(), &exact);
    assert!((1e-12..1e-6).contains(&err), "{err:e}");
}

#[test]
fn engine_and_dense_incremental_agree() {
    for which in SmallMatrix::ALL {
        let (h, _) = closed_form_small(which);
        let r = expm(&h.to_sparse().unwrap(), 1e-16, &ExpmOptions::default()).unwrap();
        let dense = pim_expm_dense(&h, r.plan.taylor_order, r.plan.squarings).unwrap();
        let engine = DenseMatrix::from_sparse(&r.t_hat);
        assert!(relative_error(&engine, &dense) <= 1e-14, "H{}", which.index());
    }
}

#[test]
fn reference_methods_agree_on_benign_input() {
    for seed in 0..5 {
        let h: Csr = generate(&GeneratorSpec::RandSym { n: 40, density: 0.1 }, seed).unwrap();
        let hd = DenseMatrix::from_sparse(&h);
        let p = select_params(h.frobenius_norm(), 1e-16).unwrap();
        let (m, n) = (p.taylor_order, p.squarings);
        let ssat = ssat_expm(&hd, m, n).unwrap();
        let pim = plus_identity(&pim_expm_dense(&hd, m, n).unwrap());
        assert!(relative_error(&pim, &ssat) <= 1e-13, "seed {seed}");

        let sparse = pim_expm_sparse(&h, m, n, &PimOptions::default()).unwrap();
        let sparse = plus_identity(&DenseMatrix::from_sparse(&sparse.t));
        assert!(relative_error(&sparse, &pim) <= 1e-13, "seed {seed}");
    }
}

#[test]
fn structural_bandwidth_doubles_without_filtering() {
    let h: Csr = generate(&"tridiag:300:1:-2:1".parse().unwrap(), 0).unwrap();
    let opts = PimOptions { track_structure: true, ..PimOptions::default() };
    let r = pim_expm_sparse(&h, 6, 4, &opts).unwrap();
    assert_eq!(r.initial_bandwidth.total, 12);
    for s in &r.steps {
        let expected = (12usize << s.step).min(2 * 299);
        assert_eq!(s.structural_bandwidth.unwrap().total, expected);
        assert!(s.bandwidth.total <= expected);
    }
}
