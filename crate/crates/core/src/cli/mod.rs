//! Batch front-end behind the `ris-outage` binary.
//!
//! `ris-outage run <scenario> -o <dir> [--svg] [--mc] [--selftest]` writes
//! `curve.csv` (and `curve.svg`) atomically; `ris-outage report <scenario>`
//! prints the derived parameters. Exit codes: 2 parse error, 3 numeric
//! failure, 4 I/O error. `RIS_OUTAGE_THREADS` sets the worker count.

pub mod report;
pub mod scenario;
pub mod selftest;
pub mod svg;
pub mod sweep;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use scenario::ScenarioFile;

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "RIS_OUTAGE_THREADS";

/// A front-end failure, classified by exit code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ris-outage", version, about = "Outage probability of RIS-assisted UAV links")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a scenario sweep and write curve.csv (and curve.svg).
    Run {
        /// Scenario file (TOML).
        #[arg(required_unless_present = "selftest")]
        scenario: Option<PathBuf>,
        /// Output directory.
        #[arg(short, long, required_unless_present = "selftest")]
        output: Option<PathBuf>,
        /// Also write a log-y SVG plot.
        #[arg(long)]
        svg: bool,
        /// Add Monte Carlo estimates (configured by the [mc] block).
        #[arg(long)]
        mc: bool,
        /// Run the built-in oracle suite first; exit 3 if any check fails.
        #[arg(long)]
        selftest: bool,
        /// Spectral-efficiency target r; sets gamma_th = 2^r - 1.
        #[arg(long, value_name = "R", allow_negative_numbers = true)]
        rate_threshold: Option<f64>,
    },
    /// Print derived quantities (B_o, zeta, k_A, m_A, Xi, gamma_th^m, floor validity).
    Report {
        scenario: PathBuf,
        /// Spectral-efficiency target r; sets gamma_th = 2^r - 1.
        #[arg(long, value_name = "R", allow_negative_numbers = true)]
        rate_threshold: Option<f64>,
    },
}

/// Worker count from `RIS_OUTAGE_THREADS`, if set.
pub fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Parse(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        },
    }
}

/// Reads and validates a scenario file, applying `--rate-threshold`.
pub fn load_scenario(path: &Path, rate_threshold: Option<f64>) -> Result<ScenarioFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut s = ScenarioFile::parse(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    if let Some(r) = rate_threshold {
        s.set_rate_threshold(r).map_err(|e| CliError::Parse(e.0))?;
    }
    Ok(s)
}

/// Writes `bytes` to `path` through a temporary sibling and a rename, so
/// readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("output");
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    let result = fs::write(&tmp, bytes).and_then(|()| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

fn x_label(s: &ScenarioFile) -> &'static str {
    use scenario::SweepVariable::*;
    match s.sweep.variable {
        GammaOverGammaThDb => "gamma/gamma_th (dB)",
        GammaTh => "gamma_th",
        SigmaP => "sigma_p",
        L2 => "L2 (m)",
        Alpha => "alpha (m)",
        Phi => "phi (rad)",
        Kappa => "kappa_s = kappa_d",
    }
}

/// `run`: evaluates the whole curve before touching the output directory.
pub fn run_scenario(
    path: &Path,
    output: &Path,
    svg: bool,
    mc: bool,
    rate_threshold: Option<f64>,
) -> Result<(), CliError> {
    let s = load_scenario(path, rate_threshold)?;
    let rows = sweep::evaluate(&s, mc, threads_from_env()?)?;
    let csv = sweep::to_csv(&rows);
    let plot = svg.then(|| svg::render(&rows, x_label(&s)));
    let io = |e: io::Error| CliError::Io(format!("{}: {e}", output.display()));
    fs::create_dir_all(output).map_err(io)?;
    write_atomic(&output.join("curve.csv"), csv.as_bytes()).map_err(io)?;
    if let Some(plot) = plot {
        write_atomic(&output.join("curve.svg"), plot.as_bytes()).map_err(io)?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { scenario, output, svg, mc, selftest, rate_threshold } => {
            if selftest {
                let mut stdout = io::stdout().lock();
                let ok = selftest::run(&mut stdout).map_err(|e| CliError::Io(e.to_string()))?;
                if !ok {
                    return Err(CliError::Numeric("self-test failed".into()));
                }
            }
            match (scenario, output) {
                (Some(scenario), Some(output)) => run_scenario(&scenario, &output, svg, mc, rate_threshold),
                (Some(_), None) => Err(CliError::Parse("missing --output directory".into())),
                _ => Ok(()),
            }
        }
        Command::Report { scenario, rate_threshold } => {
            let s = load_scenario(&scenario, rate_threshold)?;
            let text = report::report(&s)?;
            io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

/// Entry point of the binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ris-outage: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
