//! Command-line front end.
//!
//! Every subcommand returns the text it prints on standard output, so the
//! binary stays a thin wrapper and tests can drive commands in-process.

mod commands;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::io::FormatError;

pub use commands::run;

#[derive(Debug, Parser)]
#[command(name = "cavity-emission", version, about = "Coupled threshold-crossing emitter simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one cavity or a coupled pair and write an events CSV.
    Simulate(SimulateArgs),
    /// Run a coupled pair at each separation of a grid and write a sweep CSV.
    Sweep(SweepArgs),
    /// Rates, interval fits, histograms, correlation and spectral flatness of
    /// an events CSV.
    Analyze(AnalyzeArgs),
    /// Fit the `A cos²(2kd)` rate law to a sweep CSV.
    Fit(FitArgs),
    /// Solve for a configuration that reproduces target rate, shape and peak
    /// amplification.
    Calibrate(CalibrateArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub stream: Option<u64>,
    /// Observation window, seconds.
    #[arg(long)]
    pub duration: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Separation, mm (pair mode).
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long, conflicts_with = "single")]
    pub pair: bool,
    #[arg(long)]
    pub single: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub d_min: Option<f64>,
    #[arg(long)]
    pub d_max: Option<f64>,
    #[arg(long)]
    pub d_step: Option<f64>,
    /// Seconds per separation.
    #[arg(long)]
    pub duration: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Correlation bin width, seconds.
    #[arg(long)]
    pub bin: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub events: PathBuf,
    /// Bin width for correlation and spectral flatness, seconds.
    #[arg(long, default_value_t = 0.5)]
    pub bin: f64,
    #[arg(long, default_value_t = 40)]
    pub hist_bins: usize,
    /// Observation window; defaults to the last event time.
    #[arg(long)]
    pub duration: Option<f64>,
    /// Isolated single-cavity rate, enables the anomalous rate of pair files.
    #[arg(long)]
    pub gamma0: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Cos2,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    pub sweep: PathBuf,
    #[arg(long, value_enum, default_value_t = Model::Cos2)]
    pub model: Model,
    #[arg(long, default_value_t = 0.5)]
    pub k_min: f64,
    #[arg(long, default_value_t = 1.2)]
    pub k_max: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[arg(long, default_value_t = 1.47)]
    pub gamma0: f64,
    /// Target inverse Gaussian shape of the intervals, seconds.
    #[arg(long = "lambda", default_value_t = 3.3)]
    pub shape: f64,
    #[arg(long, default_value_t = 0.46)]
    pub peak_gn: f64,
    #[arg(long, default_value_t = 0.85)]
    pub k: f64,
    #[arg(long, default_value_t = 0.2)]
    pub drain_ratio: f64,
    #[arg(long)]
    pub decay_length: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub threshold: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// First passages per drift evaluation.
    #[arg(long, default_value_t = 100_000)]
    pub intervals: usize,
    /// Pair run length per coupling evaluation, seconds.
    #[arg(long, default_value_t = 3000.0)]
    pub pair_duration: f64,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        use crate::Error::*;
        let numerical = {
            let mut inner = &e;
            while let SweepPoint { source, .. } = inner {
                inner = source;
            }
            !matches!(inner, InvalidParameter { .. } | Domain(_))
        };
        if numerical {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Io(io) => CliError::Io(io.to_string()),
            malformed => CliError::Config(malformed.to_string()),
        }
    }
}
