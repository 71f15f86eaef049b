//! `qcl` — command-line harness over the core laboratory: validate
//! mixers and phase separators, sweep interpolation spectra, run
//! quasi-adiabatic and Trotterized-circuit experiments, search for
//! convergence witnesses, and emit plot scripts for the result CSVs.
//!
//! Exit codes: 0 ok, 2 config error, 3 validation failure, 4 budget
//! exhausted, 5 I/O error.

mod config;
mod plot;
mod runner;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{ExperimentConfig, Mode};
use runner::CliError;

#[derive(Parser)]
#[command(name = "qcl", version, about = "Quantum-schedule convergence laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct RunArgs {
    /// Experiment configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: config `output`, then $QCL_OUT_DIR,
    /// then ./qcl-out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed recorded in the manifest and used by randomized checks.
    #[arg(long)]
    seed: Option<u64>,
    /// Tolerance override NAME=VALUE (repeatable), e.g. zero_entry=1e-10.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tol: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check mixer/mixing-family/phase-separator structure; always exits 0
    /// with the verdict written to verdict.json.
    Validate(RunArgs),
    /// Sweep the interpolation spectrum and write eigenvalue-curve CSV.
    Spectrum(RunArgs),
    /// Quasi-adiabatic convergence sweep over evolution times.
    Anneal(RunArgs),
    /// Trotterized-circuit error scaling against the adiabatic reference.
    Qaoa(RunArgs),
    /// Escalate (T, m, n) until the trial state reaches the target
    /// distance; exits 4 when the caps run out first.
    End2end(RunArgs),
    /// Emit a matplotlib script rendering the given result CSVs.
    Plot {
        /// Result CSV files.
        files: Vec<String>,
        /// Directory for plot.py (default: alongside the first file).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn resolve_out_dir(cli_out: Option<PathBuf>, config_out: &Option<String>) -> PathBuf {
    if let Some(dir) = cli_out {
        return dir;
    }
    if let Some(dir) = config_out {
        return PathBuf::from(dir);
    }
    if let Ok(dir) = std::env::var("QCL_OUT_DIR") {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    PathBuf::from("qcl-out")
}

fn apply_overrides(config: &mut ExperimentConfig, args: &RunArgs) -> Result<(), CliError> {
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    for pair in &args.tol {
        let (name, value) = pair
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("--tol expects NAME=VALUE, got {pair}")))?;
        let parsed: f64 = value
            .parse()
            .map_err(|e| CliError::config(format!("--tol {name}: bad value {value}: {e}")))?;
        config
            .tolerances
            .set_by_name(name.trim(), parsed)
            .map_err(CliError::config)?;
    }
    Ok(())
}

fn run_mode(mode: Mode, args: RunArgs) -> Result<(), CliError> {
    let mut config = ExperimentConfig::load(&args.config).map_err(CliError::config)?;
    apply_overrides(&mut config, &args)?;
    let base = args
        .config
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    config.resolve_problem(&base).map_err(CliError::config)?;
    let out_dir = resolve_out_dir(args.out.clone(), &config.output);
    let outputs = runner::run(mode, &config, &out_dir)?;
    println!("wrote {} file(s) to {}", outputs.len() + 1, out_dir.display());
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate(args) => run_mode(Mode::Validate, args),
        Command::Spectrum(args) => run_mode(Mode::Spectrum, args),
        Command::Anneal(args) => run_mode(Mode::Anneal, args),
        Command::Qaoa(args) => run_mode(Mode::Qaoa, args),
        Command::End2end(args) => run_mode(Mode::End2end, args),
        Command::Plot { files, out } => {
            let out_dir = match (&out, files.first()) {
                (Some(dir), _) => dir.clone(),
                (None, Some(first)) => Path::new(first)
                    .parent()
                    .map(Path::to_path_buf)
                    .unwrap_or_else(|| PathBuf::from(".")),
                (None, None) => return Err(CliError::config("plot needs at least one CSV file")),
            };
            let path = plot::emit_plot_script(&files, &out_dir)?;
            println!("wrote {path}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
