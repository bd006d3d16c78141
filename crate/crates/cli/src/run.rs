use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Args;
use spexpm::io::write_matrix_market;
use spexpm::{expm, Expm, ExpmOptions, Result};

use crate::args::{EngineArgs, InputArgs};

#[derive(Args, Debug)]
pub struct ExpmArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[command(flatten)]
    pub engine: EngineArgs,

    /// Write the result as Matrix Market. By default only the incremental
    /// part T is written, flagged with a `%%incremental` line; e^H = I + T.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Run the same schedule with filtering switched off.
    #[arg(long)]
    pub unfiltered: bool,

    /// Write I + T instead of T.
    #[arg(long)]
    pub materialize_identity: bool,

    /// Write per-iteration diagnostics as CSV.
    #[arg(long, value_name = "PATH")]
    pub diag: Option<PathBuf>,

    /// Write the run summary here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub summary: Option<PathBuf>,
}

pub fn execute(args: &ExpmArgs) -> Result<()> {
    let input = args.input.load()?;
    let opts = ExpmOptions { disable_filtering: args.unfiltered, ..args.engine.options()? };
    let start = Instant::now();
    let result = expm(&input.matrix, args.engine.tol, &opts)?;
    let elapsed = start.elapsed().as_secs_f64();

    let output = if args.materialize_identity { result.to_full() } else { result.t_hat.clone() };
    if let Some(path) = &args.out {
        let mut w = BufWriter::new(File::create(path)?);
        write_matrix_market(&mut w, &output, !args.materialize_identity)?;
    }
    if let Some(path) = &args.diag {
        write_diagnostics(path, &result)?;
    }

    let plan = &result.plan;
    let lines = [
        ("input", input.label),
        ("n", input.matrix.n().to_string()),
        ("nnz_in", input.matrix.nnz().to_string()),
        ("norm_f", format!("{:e}", result.norm)),
        ("normal", result.normal.to_string()),
        ("eps_tol", format!("{:e}", plan.eps_tol)),
        ("e_r", format!("{:e}", opts.e_r)),
        ("filtering", (!args.unfiltered).to_string()),
        ("M", plan.taylor_order.to_string()),
        ("N", plan.squarings.to_string()),
        ("M_eff", result.trace.effective_taylor_order().to_string()),
        ("budget_fraction", format!("{:e}", plan.budget_fraction)),
        ("r_0", format!("{:e}", plan.r0)),
        ("r_N", format!("{:e}", plan.final_bound())),
        ("output", if args.materialize_identity { "full" } else { "incremental" }.to_string()),
        ("nnz_out", output.nnz().to_string()),
        ("sparsity_out", format!("{:e}", output.sparsity())),
        ("wall_time_s", format!("{elapsed:.6}")),
    ];

    match &args.summary {
        Some(path) => write_summary(BufWriter::new(File::create(path)?), &lines)?,
        None => write_summary(io::stdout().lock(), &lines)?,
    }
    Ok(())
}

fn write_summary<W: Write>(mut w: W, lines: &[(&str, String)]) -> Result<()> {
    for (key, value) in lines {
        writeln!(w, "{key} = {value}")?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

fn write_diagnostics(path: &Path, result: &Expm) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    w.write_record(["phase", "step", "nnz", "bandwidth_l", "filter_threshold", "dropped_norm", "filter_iterations"])
        .map_err(csv_error)?;
    for s in &result.trace.taylor {
        let (dropped, iterations) = s.filter.as_ref().map_or((0.0, 0), |f| (f.dropped_norm, f.iterations));
        w.write_record([
            "taylor".to_string(),
            s.term.to_string(),
            s.nnz.to_string(),
            s.bandwidth.total.to_string(),
            format!("{:e}", s.threshold),
            format!("{dropped:e}"),
            iterations.to_string(),
        ])
        .map_err(csv_error)?;
    }
    for s in &result.trace.squaring {
        w.write_record([
            "squaring".to_string(),
            s.step.to_string(),
            s.nnz.to_string(),
            s.bandwidth.total.to_string(),
            format!("{:e}", s.threshold),
            format!("{:e}", s.filter.dropped_norm),
            s.filter.iterations.to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}
