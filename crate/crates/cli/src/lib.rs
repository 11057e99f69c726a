//! `simulate`: runs the two-band relaxation pipelines from a JSON
//! configuration and writes a CSV table plus a JSON metadata sidecar.
//!
//! ```text
//! simulate <mc|tcl|exact|compare> --config <path> [--out <path>] [--seed <u64>]
//!          [--coupling weak|strong] [--convention printed|hazard] [--realizations <n>]
//! ```
//!
//! Exit status: 0 on success, 1 for configuration or usage errors, 2 for
//! numerical failures, 3 for I/O failures.

pub mod config;
pub mod error;
pub mod output;
pub mod pipeline;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lindblad_pdp::two_band::SamplerConvention;

use crate::config::{Coupling, Overrides, RunConfig};
use crate::error::CliError;
use crate::output::{sidecar_path, Metadata, VERSION};
use crate::pipeline::Pipeline;

#[derive(Debug, Parser)]
#[command(name = "simulate", version = VERSION, about = "Two-band relaxation: Monte Carlo, master equation and exact curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte Carlo ensemble of the configured coupling regime.
    Mc(RunArgs),
    /// Closed-form master-equation curves.
    Tcl(RunArgs),
    /// Exact Schrödinger evolution.
    Exact(RunArgs),
    /// All methods on a shared grid.
    Compare(RunArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConventionArg {
    Printed,
    Hazard,
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// JSON configuration document.
    #[arg(long)]
    config: PathBuf,
    /// CSV output path (overrides output.path).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Base random seed (overrides run.seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Coupling regime (overrides run.coupling).
    #[arg(long, value_enum)]
    coupling: Option<Coupling>,
    /// Strong-coupling waiting-time law (overrides run.convention).
    #[arg(long, value_enum)]
    convention: Option<ConventionArg>,
    /// Number of exact-solver realizations to average (overrides run.realizations).
    #[arg(long)]
    realizations: Option<usize>,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            coupling: self.coupling,
            convention: self.convention.map(|c| match c {
                ConventionArg::Printed => SamplerConvention::PrintedF,
                ConventionArg::Hazard => SamplerConvention::HazardConsistent,
            }),
            out: self.out.clone(),
            realizations: self.realizations,
        }
    }
}

/// Paths written by a successful run.
#[derive(Debug, Clone)]
pub struct Written {
    pub csv: PathBuf,
    pub metadata: PathBuf,
    pub rows: usize,
}

/// Loads the configuration, runs `pipeline` and writes the CSV and sidecar.
pub fn execute(
    pipeline: Pipeline,
    config_path: &PathBuf,
    overrides: &Overrides,
) -> Result<Written, CliError> {
    let bytes = fs::read(config_path).map_err(|source| CliError::Io {
        action: "read",
        path: config_path.clone(),
        source,
    })?;
    let text = String::from_utf8(bytes).map_err(|_| {
        CliError::Config(config::ConfigError::Invalid {
            path: "config".into(),
            message: "document is not valid UTF-8".into(),
        })
    })?;
    let config = RunConfig::from_document(&text, overrides)?;
    let table = pipeline::run(pipeline, &config)?;

    let csv = config.output.path.clone();
    let metadata = sidecar_path(&csv);
    let write = |path: &PathBuf, contents: String| {
        fs::write(path, contents).map_err(|source| CliError::Io {
            action: "write",
            path: path.clone(),
            source,
        })
    };
    write(&csv, table.to_csv())?;
    write(
        &metadata,
        Metadata::new(pipeline, &config, &table).to_json(),
    )?;
    Ok(Written {
        csv,
        metadata,
        rows: config.run.n_points,
    })
}

/// Entry point of the `simulate` binary.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (pipeline, args) = match &cli.command {
        Command::Mc(a) => (Pipeline::Mc, a),
        Command::Tcl(a) => (Pipeline::Tcl, a),
        Command::Exact(a) => (Pipeline::Exact, a),
        Command::Compare(a) => (Pipeline::Compare, a),
    };
    match execute(pipeline, &args.config, &args.overrides()) {
        Ok(w) => {
            eprintln!(
                "simulate {}: wrote {} rows to {} (metadata {})",
                pipeline.name(),
                w.rows,
                w.csv.display(),
                w.metadata.display()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("simulate {}: {e}", pipeline.name());
            ExitCode::from(e.exit_code())
        }
    }
}
