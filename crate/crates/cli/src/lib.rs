//! Command-line driver: subcommands `sweep`, `evolve`, `compare`,
//! `spectrum`, `oracle`, each reading a TOML config and writing CSV.
//!
//! Exit codes: 0 success, 1 configuration/usage error, 2 numeric or i/o
//! failure during the run. Diagnostics go to standard error.

pub mod config;
pub mod csvio;

use std::path::{Path, PathBuf};
use std::sync::Once;

use clap::{Args, Parser, Subcommand};

use defectchain::chain::{full_hamiltonian, sector_hamiltonian};
use defectchain::experiments::{compare_numeric_analytic, evolve_registers, sweep_cmax};
use defectchain::spectral::eigh;

use config::{parse_config, Mode, RunConfig};
use csvio::SpectrumRow;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

/// Relative spectral-mismatch threshold for a passing oracle run.
const ORACLE_RTOL: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(
    name = "defectchain",
    about = "XXZ defect-pair chain: concurrence sweeps, register dynamics, analytics, spectra",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Maximum defect-pair concurrence over an anisotropy grid.
    Sweep(RunArgs),
    /// Real-time register dynamics from an initial register.
    Evolve(RunArgs),
    /// Numeric-vs-analytic defect-band comparison (two excitations).
    Compare(RunArgs),
    /// Sector eigenvalues.
    Spectrum(RunArgs),
    /// Full-space vs sector-blocked spectral consistency check.
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
pub struct RunArgs {
    /// TOML run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output CSV path (overrides `output_path` from the config).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    /// TOML run configuration.
    #[arg(long)]
    pub config: PathBuf,
}

enum RunError {
    Config(String),
    Numeric(String),
}

impl From<config::ConfigError> for RunError {
    fn from(e: config::ConfigError) -> Self {
        RunError::Config(e.to_string())
    }
}

impl From<defectchain::Error> for RunError {
    fn from(e: defectchain::Error) -> Self {
        RunError::Numeric(e.to_string())
    }
}

impl From<csvio::CsvError> for RunError {
    fn from(e: csvio::CsvError) -> Self {
        RunError::Numeric(e.to_string())
    }
}

static THREAD_POOL: Once = Once::new();

fn init_threads(threads: Option<usize>) {
    if let Some(n) = threads {
        THREAD_POOL.call_once(|| {
            if let Err(e) = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
            {
                eprintln!("warning: thread pool already initialized: {e}");
            }
        });
    }
}

fn load_config(path: &Path, expected: Mode) -> Result<RunConfig, RunError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        RunError::Config(format!("cannot read config {}: {e}", path.display()))
    })?;
    let config = parse_config(&text)?;
    if config.mode != expected {
        return Err(RunError::Config(format!(
            "config mode \"{}\" does not match subcommand \"{}\"",
            config.mode.as_str(),
            expected.as_str()
        )));
    }
    Ok(config)
}

fn output_path(args_out: Option<PathBuf>, config: &RunConfig) -> Result<PathBuf, RunError> {
    args_out
        .or_else(|| config.output_path.clone())
        .ok_or_else(|| {
            RunError::Config("no output path: pass --out or set output_path in the config".into())
        })
}

fn run_sweep(args: RunArgs) -> Result<(), RunError> {
    let config = load_config(&args.config, Mode::Sweep)?;
    let out = output_path(args.out, &config)?;
    let rows = sweep_cmax(
        &config.chain,
        &config.delta_grid,
        &config.n_list,
        config.chain.defect_sites,
    )?;
    csvio::write_sweep_csv(&out, &rows)?;
    Ok(())
}

fn run_evolve(args: RunArgs) -> Result<(), RunError> {
    let config = load_config(&args.config, Mode::Evolve)?;
    let out = output_path(args.out, &config)?;
    let rows = evolve_registers(
        &config.chain,
        &config.initial_register,
        &config.t_grid,
        &config.tracked_registers,
    )?;
    csvio::write_dynamics_csv(&out, &rows)?;
    Ok(())
}

fn run_compare(args: RunArgs) -> Result<(), RunError> {
    let config = load_config(&args.config, Mode::Compare)?;
    let out = output_path(args.out, &config)?;
    // The analytic branch is built for a nearest-neighbor pair with J = 1
    // and epsilon = 0 (the defaults); reject configs that contradict it.
    let (a, b) = config.chain.defect_sites;
    if a % config.chain.length + 1 != b && b % config.chain.length + 1 != a {
        return Err(RunError::Config(
            "compare mode needs nearest-neighbor defect sites".into(),
        ));
    }
    if config.chain.hopping != 1.0 || config.chain.level_spacing != 0.0 {
        return Err(RunError::Config(
            "compare mode assumes J = 1 and epsilon = 0 (energies in units of J)".into(),
        ));
    }
    let rows = compare_numeric_analytic(
        config.chain.length,
        &config.delta_list,
        config.chain.defect_shift,
    )?;
    csvio::write_compare_csv(&out, &rows)?;
    Ok(())
}

fn run_spectrum(args: RunArgs) -> Result<(), RunError> {
    let config = load_config(&args.config, Mode::Spectrum)?;
    let out = output_path(args.out, &config)?;
    let mut rows = Vec::new();
    for &n in &config.n_list {
        let h = sector_hamiltonian(&config.chain, n)?;
        let decomp = eigh(h.matrix())?;
        let flags = decomp.degenerate_flags();
        for (k, (&energy, &degenerate)) in decomp.values().iter().zip(&flags).enumerate() {
            rows.push(SpectrumRow {
                length: config.chain.length,
                excitations: n,
                eig_index: k,
                energy,
                degenerate,
            });
        }
    }
    csvio::write_spectrum_csv(&out, &rows)?;
    Ok(())
}

fn run_oracle(args: OracleArgs) -> Result<(), RunError> {
    let config = load_config(&args.config, Mode::Oracle)?;
    let discrepancy = defectchain::experiments::oracle_full_vs_sector(&config.chain)?;
    let norm = full_hamiltonian(&config.chain)?
        .iter()
        .fold(0.0f64, |acc, &x| acc.max(x.abs()));
    let threshold = ORACLE_RTOL * norm.max(1.0);
    println!(
        "max spectral discrepancy {} (threshold {})",
        csvio::format_float(discrepancy),
        csvio::format_float(threshold)
    );
    if discrepancy > threshold {
        return Err(RunError::Numeric(format!(
            "full-vs-sector spectra disagree by {discrepancy:e} (threshold {threshold:e})"
        )));
    }
    Ok(())
}

/// Execute a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    init_threads(cli.threads);
    let outcome = match cli.command {
        Command::Sweep(args) => run_sweep(args),
        Command::Evolve(args) => run_evolve(args),
        Command::Compare(args) => run_compare(args),
        Command::Spectrum(args) => run_spectrum(args),
        Command::Oracle(args) => run_oracle(args),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(RunError::Config(msg)) => {
            eprintln!("error: {msg}");
            EXIT_CONFIG
        }
        Err(RunError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            EXIT_NUMERIC
        }
    }
}
