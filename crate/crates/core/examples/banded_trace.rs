//! Prints the per-step trace of the filtered engine on a banded matrix.
//!
//! ```text
//! cargo run --release --example banded_trace -- tridiag:10000:1:-2:1 1e-16
//! ```

use std::time::Instant;

use spexpm::io::{generate, GeneratorSpec};
use spexpm::{expm, Csr, ExpmOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let spec: GeneratorSpec = args.next().as_deref().unwrap_or("tridiag:10000:1:-2:1").parse()?;
    let tol: f64 = args.next().as_deref().unwrap_or("1e-16").parse()?;
    let h: Csr = generate(&spec, 0)?;

    let start = Instant::now();
    let r = expm(&h, tol, &ExpmOptions::default())?;
    let elapsed = start.elapsed();

    println!("n = {}  ||H||_F = {:.4}  normal = {}", h.n(), r.norm, r.normal);
    println!("M = {}  N = {}  a = {:.4e}", r.plan.taylor_order, r.plan.squarings, r.plan.budget_fraction);
    println!("eps_g (taylor) = {:.3e}", r.plan.eps_g_taylor);
    for s in &r.trace.taylor {
        println!("  S{:<3} nnz {:>8}  band {:>3}  zero {}", s.term, s.nnz, s.bandwidth.total, s.is_zero);
    }
    for s in &r.trace.squaring {
        println!(
            "  T{:<3} nnz {:>8}  band {:>3}  threshold {:.3e}  dropped {:.3e}",
            s.step, s.nnz, s.bandwidth.total, s.threshold, s.filter.dropped_norm
        );
    }
    println!("M_eff = {}  nnz = {}  time = {:.3?}", r.trace.effective_taylor_order(), r.t_hat.nnz(), elapsed);
    Ok(())
}
