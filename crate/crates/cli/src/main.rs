//! `spexpm`: sparse matrix exponentials from the command line.
//!
//! Exit codes:
//!
//! | code | meaning                                         |
//! |------|-------------------------------------------------|
//! | 0    | success                                         |
//! | 1    | internal error                                  |
//! | 2    | invalid command line                            |
//! | 3    | malformed or unsupported input, bad generator   |
//! | 4    | tolerance below roundoff or infeasible plan     |
//! | 5    | memory cap exceeded                             |
//! | 6    | I/O failure                                     |
//! | 7    | non-finite matrix entry                         |

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spexpm::Error;

mod args;
mod bandwidth;
mod compare;
mod run;

#[derive(Parser)]
#[command(name = "spexpm", version, about = "Sparse matrix exponential with filtered incremental scaling and squaring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute e^H and write the result, a run summary and diagnostics.
    Expm(run::ExpmArgs),
    /// Run the engine and the reference methods side by side.
    Compare(compare::CompareArgs),
    /// Report bandwidth, reordered bandwidth estimate and sparsity.
    Bandwidth(bandwidth::BandwidthArgs),
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse { .. }
        | Error::Unsupported(_)
        | Error::InvalidSpec(_)
        | Error::DimensionMismatch { .. }
        | Error::IndexOutOfBounds { .. } => 3,
        Error::ToleranceBelowRoundoff { .. } | Error::Infeasible { .. } => 4,
        Error::ResourceCap { .. } => 5,
        Error::Io(_) => 6,
        Error::NonFinite { .. } => 7,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Expm(a) => run::execute(&a),
        Command::Compare(a) => compare::execute(&a),
        Command::Bandwidth(a) => bandwidth::execute(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
