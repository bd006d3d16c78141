use std::io;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use spexpm::baselines::DEFAULT_MEM_CAP;
use spexpm::io::{generate, read_matrix_market, GeneratorSpec};
use spexpm::{Csr, Error, ExpmOptions, Normality, Result, ThresholdMode};

/// Where the matrix comes from: a Matrix Market file or a generator.
#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Matrix Market file (coordinate, real).
    #[arg(required_unless_present = "gen", conflicts_with = "gen")]
    pub input: Option<PathBuf>,

    /// Built-in generator: tridiag:n:a:b:c, randsym:n:density, randn:n:density,
    /// scaled-laplacian:n or small:k (k = 1..5).
    #[arg(long, value_name = "SPEC")]
    pub gen: Option<String>,

    /// Seed for random generators.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub struct Input {
    pub matrix: Csr,
    pub label: String,
    pub spec: Option<GeneratorSpec>,
}

impl InputArgs {
    pub fn load(&self) -> Result<Input> {
        match (&self.input, &self.gen) {
            (Some(path), None) => Ok(Input {
                matrix: read_matrix_market(path).map_err(|e| with_path(e, path))?.matrix,
                label: path.display().to_string(),
                spec: None,
            }),
            (None, Some(text)) => {
                let spec: GeneratorSpec = text.parse()?;
                Ok(Input { matrix: generate(&spec, self.seed)?, label: spec.to_string(), spec: Some(spec) })
            }
            _ => Err(Error::InvalidSpec("give exactly one of an input file or --gen".into())),
        }
    }
}

fn with_path(err: Error, path: &Path) -> Error {
    match err {
        Error::Io(e) => Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))),
        other => other,
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, Default)]
pub enum NormalArg {
    #[default]
    Auto,
    Yes,
    No,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default)]
pub enum ThresholdArg {
    #[default]
    Absolute,
    Scaled,
}

/// Engine tolerances and switches shared by the computing subcommands.
#[derive(Args, Debug, Clone)]
pub struct EngineArgs {
    /// Relative error tolerance.
    #[arg(long, default_value = "1e-16")]
    pub tol: f64,

    /// Filter slack: each filter may drop mass up to eps_g (1 + er).
    #[arg(long, default_value = "0.1")]
    pub er: f64,

    /// Treat the input as normal, non-normal, or test it.
    #[arg(long, value_enum, default_value_t = NormalArg::Auto)]
    pub normal: NormalArg,

    /// Absolute drop budgets, or budgets scaled by the Frobenius norm of I plus the current iterate.
    #[arg(long, value_enum, default_value_t = ThresholdArg::Absolute)]
    pub threshold_mode: ThresholdArg,

    /// Refuse any step whose predicted storage exceeds this many bytes.
    #[arg(long, value_name = "BYTES", default_value_t = DEFAULT_MEM_CAP)]
    pub mem_cap: u128,
}

impl EngineArgs {
    pub fn options(&self) -> Result<ExpmOptions<f64>> {
        if !(self.er > 0.0 && self.er.is_finite()) {
            return Err(Error::InvalidSpec(format!("--er must be positive, got {}", self.er)));
        }
        Ok(ExpmOptions {
            e_r: self.er,
            normality: match self.normal {
                NormalArg::Auto => Normality::Auto,
                NormalArg::Yes => Normality::Normal,
                NormalArg::No => Normality::NonNormal,
            },
            threshold_mode: match self.threshold_mode {
                ThresholdArg::Absolute => ThresholdMode::Absolute,
                ThresholdArg::Scaled => ThresholdMode::NormScaled,
            },
            mem_cap_bytes: Some(self.mem_cap),
            ..ExpmOptions::default()
        })
    }
}
