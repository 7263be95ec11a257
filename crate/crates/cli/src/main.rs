//! `paramod`: parafermion modular data, branching functions and identity
//! checks from the command line.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage error,
//! 3 a resource cap was hit.

mod commands;
mod config;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use paramod::rootsys::{weyl_cap, Series};
use paramod::Error;
use serde::Serialize;

use commands::Check;
use config::{parse_ints, parse_series, parse_tau, Format, IntList, RunConfig, UsageError};

#[derive(Parser)]
#[command(name = "paramod", version, about = "Modular data of parafermion vertex operator algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Level k
    #[arg(long, short = 'k', default_value_t = 1)]
    level: i64,
    /// Number of q-expansion terms
    #[arg(long)]
    depth: Option<usize>,
    /// Point in the upper half-plane, e.g. 0.1+1.05i
    #[arg(long, default_value = "0.1+1.05i", value_parser = parse_tau, allow_hyphen_values = true)]
    tau: Complex64,
    /// Pass threshold for residuals
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write here instead of stdout; a `.meta.json` sidecar is written next to it
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Labels, T-exponents and S-matrix of the parafermion algebra
    ModularData {
        #[arg(value_parser = parse_series)]
        series: Series,
        rank: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Character of M^{Λ,λ} as a q-series
    Branching {
        #[arg(value_parser = parse_series)]
        series: Series,
        rank: usize,
        /// Highest weight Λ in fundamental-weight coordinates, e.g. 1,0
        #[arg(long, value_parser = parse_ints, allow_hyphen_values = true)]
        lambda: IntList,
        /// Weight λ in fundamental-weight coordinates
        #[arg(long, value_parser = parse_ints, allow_hyphen_values = true)]
        weight: IntList,
        #[command(flatten)]
        common: Common,
    },
    /// Numerical check of an identity; exits 1 if any residual exceeds the tolerance
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[arg(value_parser = parse_series)]
        series: Option<Series>,
        rank: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Serialize)]
struct Sidecar<'a> {
    tool: &'static str,
    version: &'static str,
    arguments: Vec<String>,
    weyl_cap: String,
    created_unix: u64,
    output: &'a str,
}

fn config(common: &Common, algebra: Option<(Series, usize)>, depth: usize, tolerance: f64) -> Result<RunConfig, UsageError> {
    RunConfig {
        algebra,
        level: common.level,
        depth: common.depth.unwrap_or(depth),
        tau: common.tau,
        tolerance: common.tolerance.unwrap_or(tolerance),
        format: common.format,
        output: common.output.clone(),
    }
    .validate()
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::WeylCapExceeded { .. } | Error::DepthBudget { .. } | Error::Overflow(_) => 3,
        Error::InvalidType { .. }
        | Error::DimensionMismatch { .. }
        | Error::InvalidTau(_)
        | Error::NotInAlcove { .. }
        | Error::NonIntegralWeight(_)
        | Error::NonPositiveScale(_) => 2,
        _ => 1,
    }
}

fn write_output(path: &Path, body: &str) -> std::io::Result<()> {
    std::fs::write(path, body)?;
    let sidecar = Sidecar {
        tool: "paramod",
        version: env!("CARGO_PKG_VERSION"),
        arguments: std::env::args().skip(1).collect(),
        weyl_cap: weyl_cap().to_string(),
        created_unix: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        output: path.to_str().unwrap_or(""),
    };
    let mut meta = path.as_os_str().to_owned();
    meta.push(".meta.json");
    std::fs::write(meta, serde_json::to_string_pretty(&sidecar).expect("sidecar serializes") + "\n")
}

fn run(cli: Cli) -> Result<u8, (u8, String)> {
    let usage = |e: UsageError| (2u8, e.0);
    let (cfg, outcome) = match &cli.command {
        Command::ModularData { series, rank, common } => {
            let cfg = config(common, Some((*series, *rank)), 20, 1e-8).map_err(usage)?;
            let out = commands::modular_data(&cfg);
            (cfg, out)
        }
        Command::Branching {
            series,
            rank,
            lambda,
            weight,
            common,
        } => {
            let cfg = config(common, Some((*series, *rank)), 20, 1e-8).map_err(usage)?;
            let out = commands::branching(&cfg, &lambda.0, &weight.0);
            (cfg, out)
        }
        Command::Verify {
            check,
            series,
            rank,
            common,
        } => {
            let algebra = match (series, rank) {
                (Some(s), Some(r)) => Some((*s, *r)),
                (None, None) if matches!(check, Check::Eta) => None,
                (None, None) if matches!(check, Check::Theta) => Some((Series::A, 1)),
                _ => return Err((2, format!("verify {} needs SERIES and RANK", check.name()))),
            };
            let cfg = config(common, algebra, check.default_depth(), check.default_tolerance()).map_err(usage)?;
            let out = commands::verify(&cfg, *check);
            (cfg, out)
        }
    };
    let (report, pass) = outcome.map_err(|e| (exit_code(&e), e.to_string()))?;
    let body = report.render(cfg.format);
    match &cfg.output {
        Some(path) => write_output(path, &body).map_err(|e| (1, format!("cannot write {}: {e}", path.display())))?,
        None => print!("{body}"),
    }
    Ok(if pass { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
