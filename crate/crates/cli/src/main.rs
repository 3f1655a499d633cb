//! `rkha` — reproducible experiments over weighted Fourier algebras.
//!
//! One binary, six subcommands.  Reports (`weight-report`, `algebra`,
//! `spectrum`) print pretty JSON; sweeps (`kernel`, `markov`, `mmd`) print
//! CSV with `#`-prefixed header comments.  Output goes to stdout or, with
//! `--out`, to a file.  Exit codes are stable: 0 on success, 2 for usage
//! and config errors, 3 when a computation would exceed a resource cap.
//!
//! Every command reads an optional JSON config (`--config`); a handful of
//! global flags override the corresponding config fields.  For a fixed
//! config and seed the output is byte-identical across runs.

mod commands;
mod config;

use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// A command failure carrying its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    /// Usage or config problem: exit code 2.
    pub fn config(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    /// A computation hit a resource cap: exit code 3.
    pub fn resource(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }
}

impl From<rkha::error::Error> for Failure {
    fn from(e: rkha::error::Error) -> Self {
        match e {
            rkha::error::Error::ResourceCap(_) => Self::resource(e.to_string()),
            _ => Self::config(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "rkha",
    version,
    about = "Certified experiments over weighted Fourier algebras on the torus",
    after_help = "Exit codes: 0 success, 2 usage or config error, 3 resource cap exceeded."
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// JSON experiment config; built-in defaults are used when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Seed for randomized candidates (algebra); overrides the config.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    /// Window radius for measured constants (weight-report, algebra,
    /// markov); overrides the config.
    #[arg(long, global = true, value_name = "RADIUS")]
    window: Option<i64>,

    /// Tail tolerance; replaces configured truncation radii (kernel, mmd,
    /// and the solver radius in algebra and spectrum) by the smallest
    /// radius whose certified tail mass is below this value.
    #[arg(long, global = true, value_name = "EPS")]
    trunc_eps: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Subconvolutivity, subadditivity, and submultiplicativity constants
    /// for one weight (JSON).
    WeightReport,
    /// Multiplicative norm bound, random product pairs, inversion and
    /// square-root residuals, and resolvent probes (JSON).
    Algebra,
    /// Certified kernel shape-function sweep along the first axis (CSV).
    Kernel,
    /// Markov semigroup sweep over times: constants, density minimum,
    /// mass and semigroup defects (CSV).
    Markov,
    /// Discrepancy between two unit point masses vs separation (CSV).
    Mmd,
    /// Resolvent probes for one element at chosen complex points (JSON).
    Spectrum,
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let overrides = config::Overrides {
        seed: cli.seed,
        window: cli.window,
        trunc_eps: cli.trunc_eps,
    };
    let path = cli.config.as_deref();
    match cli.command {
        Cmd::WeightReport => commands::weight_report(config::load(path)?, &overrides),
        Cmd::Algebra => commands::algebra(config::load(path)?, &overrides),
        Cmd::Kernel => commands::kernel(config::load(path)?, &overrides),
        Cmd::Markov => commands::markov(config::load(path)?, &overrides),
        Cmd::Mmd => commands::mmd(config::load(path)?, &overrides),
        Cmd::Spectrum => commands::spectrum(config::load(path)?, &overrides),
    }
}

fn write_output(target: Option<&Path>, rendered: &str) -> Result<(), Failure> {
    match target {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| Failure::config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|rendered| write_output(cli.out.as_deref(), &rendered)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("rkha: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
