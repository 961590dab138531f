//! Command-line front end for `guespec`.
//!
//! Every run echoes its resolved configuration as a JSON comment line so the
//! output file records how it was produced. Tables are written as CSV (the
//! default) or as a JSON document described by `docs/output-schema.json`.

pub mod commands;
pub mod grid;
pub mod table;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

pub use grid::Grid;

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Environment variable that caps the number of worker threads.
pub const THREADS_ENV: &str = "GUESPEC_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numerics(#[from] guespec::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numerics(guespec::Error::NonConvergence { .. }) => EXIT_NONCONVERGENCE,
            CliError::Numerics(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HoleKernelArg {
    Sine,
    FiniteN,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerArg {
    Dense,
    Tridiagonal,
}

impl From<SamplerArg> for guespec::ensemble::Sampler {
    fn from(s: SamplerArg) -> Self {
        match s {
            SamplerArg::Dense => Self::Dense,
            SamplerArg::Tridiagonal => Self::Tridiagonal,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "guespec", version, about = "GUE kernels, scaling limits, gap probabilities and Monte Carlo checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Master seed for all Monte Carlo streams.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite-N mean density (normalized) next to the semicircle.
    Density {
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "-2.5:2.5:0.05")]
        grid: Grid,
    },
    /// Rescaled finite-N density at the spectral edge against the Airy density.
    Edge {
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "-4:2:0.1")]
        xi: Grid,
    },
    /// Bulk-scaled finite-N kernel against the sine kernel.
    Kernel {
        #[arg(long, default_value_t = 400)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "0:3:0.05")]
        r: Grid,
    },
    /// Number variance of the unfolded bulk spectrum.
    Numvar {
        #[arg(long, default_value = "0.5:20:0.5")]
        s: Grid,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Probability of an empty window of `s` mean spacings.
    Hole {
        #[arg(long, default_value = "0:3:0.1")]
        s: Grid,
        #[arg(long, value_enum, default_value_t = HoleKernelArg::Sine)]
        kernel: HoleKernelArg,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Averages of characteristic polynomials: analytic against Monte Carlo.
    Charpoly {
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Numerator points, comma separated; complex values as `a+bi`.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',', default_value = "0")]
        mu: Vec<Complex64>,
        /// Denominator points for ratio averages (must be off the real axis).
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        nu: Vec<Complex64>,
        /// Monte Carlo samples; 0 skips the simulation.
        #[arg(long, default_value_t = 0)]
        mc_samples: usize,
        #[arg(long, value_enum, default_value_t = SamplerArg::Tridiagonal)]
        sampler: SamplerArg,
    },
    /// Dump eigenvalues of sampled matrices.
    Sample {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Binary dump (needs --output).
        #[arg(long)]
        binary: bool,
        #[arg(long, value_enum, default_value_t = SamplerArg::Dense)]
        sampler: SamplerArg,
    },
    /// Relaxation of matrix OU paths toward the stationary ensemble.
    Ou {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 10.0)]
        t_max: f64,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, default_value_t = 10_000)]
        paths: usize,
        /// The start is diag(c, ..., -c) with linearly spaced entries.
        #[arg(long, allow_hyphen_values = true, default_value_t = 3.0)]
        start_scale: f64,
    },
}

#[derive(Debug, Args, Clone, Copy, Serialize)]
pub struct McArgs {
    /// Add a Monte Carlo estimate.
    #[arg(long)]
    pub mc: bool,
    /// Matrix size for Monte Carlo and finite-N kernels.
    #[arg(long, default_value_t = 400)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
}

/// Resolved configuration echoed in every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub n: Option<usize>,
    pub seed: u64,
    pub grid: Option<Grid>,
    pub samples: Option<usize>,
    pub output: Option<String>,
    pub format: Format,
    pub options: serde_json::Map<String, serde_json::Value>,
}

/// Bytes produced by a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub bytes: Vec<u8>,
}

/// Runs a parsed command and renders its output.
pub fn run(cli: &Cli) -> Result<RunOutput, CliError> {
    commands::execute(cli)
}

/// Parses `args`, runs, writes the output and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    let result = run(&cli).and_then(|out| write_output(cli.global.output.as_deref(), &out.bytes));
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    // Fails only if a pool already exists, which cannot happen in the binary.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn write_output(path: Option<&std::path::Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
    }
    Ok(())
}
