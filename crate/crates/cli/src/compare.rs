use std::time::Instant;

use clap::Args;
use spexpm::baselines::{
    closed_form_small, pim_expm_sparse, relative_error, ssat_expm, toeplitz_reference_column, tse_expm, DenseMatrix,
    PimOptions, DENSE_ORACLE_LIMIT,
};
use spexpm::io::GeneratorSpec;
use spexpm::{expm, taylor_remainder_bound, Csr, Result};

use crate::args::{EngineArgs, InputArgs};

/// Highest order tried for the plain Taylor baseline.
const TSE_MAX_ORDER: usize = 400;
/// Coefficients kept in the Toeplitz reference column.
const TOEPLITZ_TERMS: usize = 24;

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[command(flatten)]
    pub engine: EngineArgs,
}

enum Oracle {
    Full(DenseMatrix<f64>),
    Column { index: usize, values: Vec<f64> },
    Missing,
}

impl Oracle {
    fn name(&self) -> &'static str {
        match self {
            Self::Full(_) => "closed form",
            Self::Column { .. } => "reference column",
            Self::Missing => "none",
        }
    }
}

/// A method's result, kept in whichever form is cheap to produce.
enum Computed {
    Sparse(Csr),
    Dense(DenseMatrix<f64>),
}

impl Computed {
    fn nnz(&self) -> usize {
        match self {
            Self::Sparse(m) => m.nnz(),
            Self::Dense(d) => d.entries().iter().filter(|v| **v != 0.0).count(),
        }
    }

    fn column(&self, j: usize) -> Vec<f64> {
        match self {
            Self::Sparse(m) => {
                let mut e = vec![0.0; m.n()];
                e[j] = 1.0;
                m.mul_vec(&e).expect("sized to matrix")
            }
            Self::Dense(d) => d.column(j),
        }
    }

    fn error(&self, oracle: &Oracle) -> Option<f64> {
        match oracle {
            Oracle::Full(exact) => Some(match self {
                Self::Sparse(m) => relative_error(&DenseMatrix::from_sparse(m), exact),
                Self::Dense(d) => relative_error(d, exact),
            }),
            Oracle::Column { index, values } => {
                let got = self.column(*index);
                let diff = got.iter().zip(values).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                let size = values.iter().map(|v| v * v).sum::<f64>().sqrt();
                Some(diff / size)
            }
            Oracle::Missing => None,
        }
    }
}

fn oracle_for(h: &Csr, spec: Option<&GeneratorSpec>) -> Oracle {
    match spec {
        Some(GeneratorSpec::Small(which)) => Oracle::Full(closed_form_small(*which).1),
        Some(GeneratorSpec::ScaledLaplacian { n }) => {
            Oracle::Column { index: n / 2, values: toeplitz_reference_column(*n, TOEPLITZ_TERMS) }
        }
        _ if h.is_zero() => {
            let mut values = vec![0.0; h.n()];
            values[0] = 1.0;
            Oracle::Column { index: 0, values }
        }
        _ => Oracle::Missing,
    }
}

struct Row {
    method: &'static str,
    outcome: std::result::Result<(Computed, f64), String>,
}

fn timed(f: impl FnOnce() -> Result<Computed>) -> std::result::Result<(Computed, f64), String> {
    let start = Instant::now();
    f().map(|c| (c, start.elapsed().as_secs_f64())).map_err(|e| e.to_string())
}

fn plus_identity(t: &Csr) -> Result<Csr> {
    spexpm::add(&Csr::identity(t.n()), t, 1.0, 1.0)
}

pub fn execute(args: &CompareArgs) -> Result<()> {
    let input = args.input.load()?;
    let h = &input.matrix;
    let n = h.n();
    let opts = args.engine.options()?;
    let tol = args.engine.tol;

    let start = Instant::now();
    let engine = expm(h, tol, &opts)?;
    let engine_time = start.elapsed().as_secs_f64();
    let (m, squarings) = (engine.plan.taylor_order, engine.plan.squarings);

    let mut rows = vec![Row { method: "engine", outcome: Ok((Computed::Sparse(engine.to_full()), engine_time)) }];
    let pim_opts = PimOptions { mem_cap_bytes: args.engine.mem_cap, track_structure: false };
    rows.push(Row {
        method: "pim",
        outcome: timed(|| Ok(Computed::Sparse(plus_identity(&pim_expm_sparse(h, m, squarings, &pim_opts)?.t)?))),
    });

    let dense_skip = || Err(format!("skipped: dense methods need n <= {DENSE_ORACLE_LIMIT}"));
    if n <= DENSE_ORACLE_LIMIT {
        let hd = DenseMatrix::from_sparse(h);
        let norm = h.frobenius_norm();
        let tse_order = (0..=TSE_MAX_ORDER).find(|&k| taylor_remainder_bound(norm, k) <= tol).unwrap_or(TSE_MAX_ORDER);
        rows.push(Row { method: "ssat", outcome: timed(|| Ok(Computed::Dense(ssat_expm(&hd, m, squarings)?))) });
        rows.push(Row { method: "tse", outcome: timed(|| Ok(Computed::Dense(tse_expm(&hd, tse_order)?))) });
    } else {
        rows.push(Row { method: "ssat", outcome: dense_skip() });
        rows.push(Row { method: "tse", outcome: dense_skip() });
    }

    let oracle = oracle_for(h, input.spec.as_ref());
    if matches!(oracle, Oracle::Missing) {
        eprintln!("warning: no reference solution for this input; error column omitted");
    }

    println!("input = {}", input.label);
    println!("n = {n}");
    println!("M = {m}");
    println!("N = {squarings}");
    println!("oracle = {}", oracle.name());
    println!("{:<8} {:>12} {:>12} {:>12}", "method", "rel_error", "time_s", "nnz");
    for row in &rows {
        match &row.outcome {
            Ok((computed, time)) => {
                let err = computed.error(&oracle).map_or_else(|| "-".to_string(), |e| format!("{e:.3e}"));
                println!("{:<8} {:>12} {:>12.6} {:>12}", row.method, err, time, computed.nnz());
            }
            Err(why) => println!("{:<8} {why}", row.method),
        }
    }
    Ok(())
}
