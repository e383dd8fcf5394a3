//! `calkin-spectra`: classification, coset arithmetic, Fredholm decisions and
//! essential spectra for linear-fractional composition operators.
//!
//! Exit codes: 0 success (and `Fredholm`), 1 `NotFredholm`, 2 parse or
//! configuration error, 3 non-self-map or failed precondition, 4 non-triangular
//! element without `--inclusion`, 5 `Inconclusive`, 6 I/O error.

mod commands;
mod config;
mod output;
mod svg;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::JobConfig;

#[derive(Debug, Parser)]
#[command(name = "calkin-spectra", version, about = "Composition-operator C*-algebras modulo the compacts")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Numerical tolerance, in (0, 1e-3).
    #[arg(long, global = true, default_value_t = calkin_core::DEFAULT_TOL)]
    tol: f64,

    /// Truncation sizes ν, comma separated.
    #[arg(long, global = true, value_delimiter = ',', default_values_t = vec![20usize, 40, 80, 160])]
    nu: Vec<usize>,

    /// Number of x samples; x = k/(n+1) for k = 1..n.
    #[arg(long, global = true, default_value_t = 9)]
    xgrid: usize,

    /// λ samples per axis for shading and scans; 0 gives an empty grid.
    #[arg(long, global = true, default_value_t = 41)]
    lgrid: usize,

    /// Output directory for file-producing commands.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Base t of the crossed product used when embedding cosets.
    #[arg(long, global = true)]
    base: Option<f64>,

    /// Fall back to the inclusion region for non-triangular elements.
    #[arg(long, global = true)]
    inclusion: bool,

    /// Read the JSON input from this file instead of stdin.
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a map: interior contact, automorphism, or boundary contact.
    Classify,
    /// Canonical decomposition φ = Ψ_{ζ,t} ∘ ρ_{ζ,a}, printed as a map.
    Decompose,
    /// Coset of C_φ (or of C_φ*) as a crossed-product element.
    Coset {
        #[arg(long)]
        adjoint: bool,
    },
    /// Product of {"left": element, "right": element}.
    Mul,
    /// Adjoint of an element.
    Adj,
    /// Whether C_ψ ∈ C*(C_φ, K) for {"phi": map, "psi": map}.
    Membership,
    /// Structure of C*(T_z, C_φ)/K.
    Structure,
    /// Fredholm conditions of an element.
    Fredholm,
    /// Essential spectrum: region.json, boundary.csv, spectrum.svg.
    Spectrum,
    /// σ_min of truncated trajectorial matrices: sigma_min.csv, convergence.csv.
    OracleScan,
    /// Lower bounds for the essential norm of Σ c_j C_{φ_j}.
    Bounds,
}

/// Failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl From<calkin_core::Error> for Failure {
    fn from(e: calkin_core::Error) -> Self {
        use calkin_core::Error::*;
        let code = match e {
            Parse(_) | Degenerate | InvalidArgument(_) => 2,
            NotTriangular => 4,
            _ => 3,
        };
        Failure::new(code, e.to_string())
    }
}

fn read_input(path: Option<&PathBuf>) -> Result<String, Failure> {
    let mut text = String::new();
    match path {
        Some(p) => {
            text = std::fs::read_to_string(p).map_err(|e| Failure::new(6, format!("{}: {e}", p.display())))?
        }
        None => {
            std::io::stdin().read_to_string(&mut text).map_err(|e| Failure::new(6, format!("stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn limit_threads() {
    let Ok(v) = std::env::var("CALKIN_SPECTRA_THREADS") else { return };
    match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        _ => eprintln!("warning: ignoring CALKIN_SPECTRA_THREADS={v:?}"),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let config = JobConfig::new(cli.tol, cli.nu, cli.xgrid, cli.lgrid, cli.out, cli.base, cli.inclusion)?;
    let input = read_input(cli.input.as_ref())?;
    match cli.command {
        Command::Classify => commands::classify(&input, &config),
        Command::Decompose => commands::decompose(&input, &config),
        Command::Coset { adjoint } => commands::coset(&input, &config, adjoint),
        Command::Mul => commands::mul(&input, &config),
        Command::Adj => commands::adj(&input, &config),
        Command::Membership => commands::membership(&input, &config),
        Command::Structure => commands::structure(&input, &config),
        Command::Fredholm => commands::fredholm(&input, &config),
        Command::Spectrum => commands::spectrum(&input, &config),
        Command::OracleScan => commands::oracle_scan(&input, &config),
        Command::Bounds => commands::bounds(&input, &config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    limit_threads();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
