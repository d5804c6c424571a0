//! Command-line front end.
//!
//! ```text
//! strongdrive <command> [--delta Δ] [--g g] [--omega ω] [--alpha re+imi] [--beta re+imi]
//!             [--psi0 c0,c1] [--equal-superposition --theta θ] [--t-max T] [--samples N]
//!             [--rel-tol r] [--abs-tol a] [--max-step h] [--quad-tol q] [--order k]
//!             [--deltas d1,d2,..] [--omegas w1,w2,..] [--out file.csv] [--config run.json]
//! ```
//!
//! Settings are resolved as defaults, then the config file, then flags.
//! Exit codes: 0 success, 1 numerical or I/O failure, 2 usage error.

mod complex;
mod config_file;
mod csv;
mod run;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hamiltonians::DriveParams;
use crate::linalg::{Complex2Vector, StateVector};
use crate::propagator::IntegratorConfig;
use crate::strong_coupling::FrameAmplitudes;

pub use complex::{format_complex, parse_complex};
pub use config_file::Settings;
pub use csv::format_number;
pub use run::{execute, run};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Tolerance on `|α|² + |β|² = 1` for user-supplied amplitudes.
pub const AMPLITUDE_NORM_TOL: f64 = 1e-9;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "STRONGDRIVE_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Exact propagation of the full model
    Simulate,
    /// Strong-coupling approximation (order set by --order)
    Approx,
    /// Approximation against the exact propagator
    Compare,
    /// Max infidelity of the lowest-order solution versus Δ
    ScanDelta,
    /// Full-versus-RWA discrepancy versus ω
    ScanRwa,
    /// Quadrature and Bessel-series phase integrals side by side
    PhaseIntegral,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Approx => "approx",
            Command::Compare => "compare",
            Command::ScanDelta => "scan-delta",
            Command::ScanRwa => "scan-rwa",
            Command::PhaseIntegral => "phase-integral",
        }
    }
}

/// How the initial condition was specified.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialState {
    /// Lab-frame amplitudes `ψ(0)`.
    Amplitudes(StateVector),
    /// Rotated-frame constants `(α, β)`; `ψ(0) = W (α, β)ᵗ`.
    Frame(FrameAmplitudes),
    /// `α = β = e^{iθ}/√2`.
    EqualSuperposition { theta: f64 },
}

impl InitialState {
    pub fn frame_amplitudes(&self) -> FrameAmplitudes {
        match self {
            InitialState::Amplitudes(psi) => FrameAmplitudes::from_initial_state(psi),
            InitialState::Frame(a) => *a,
            InitialState::EqualSuperposition { theta } => {
                FrameAmplitudes::equal_superposition(*theta)
            }
        }
    }

    pub fn lab_state(&self) -> StateVector {
        match self {
            InitialState::Amplitudes(psi) => *psi,
            other => other.frame_amplitudes().initial_state(),
        }
    }
}

/// Fully resolved settings of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: DriveParams,
    pub initial: InitialState,
    pub horizon: f64,
    pub samples: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Integrator step cap; `None` means a twentieth of the drive period.
    pub max_step: Option<f64>,
    pub quad_tol: f64,
    pub order: usize,
    pub deltas: Vec<f64>,
    pub omegas: Vec<f64>,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn integrator(&self) -> IntegratorConfig {
        self.integrator_for(&self.params)
    }

    pub fn integrator_for(&self, p: &DriveParams) -> IntegratorConfig {
        let mut cfg = IntegratorConfig::for_params(p)
            .with_rel_tol(self.rel_tol)
            .with_abs_tol(self.abs_tol);
        if let Some(h) = self.max_step {
            cfg.max_step = h;
            cfg.initial_step = cfg.initial_step.min(h);
        }
        cfg
    }

    /// Serializes to the config-file format; [`RunConfig::from_config_text`]
    /// reproduces `self` exactly.
    pub fn to_config_text(&self) -> String {
        Settings::from_run_config(self).to_text()
    }

    /// Builds a config from file text alone (defaults for absent keys).
    /// `command` overrides the file's `command` key.
    pub fn from_config_text(text: &str, command: Option<Command>) -> Result<RunConfig, CliError> {
        let file = Settings::from_text(text)?;
        let cmd = command
            .or(file.command)
            .ok_or_else(|| CliError::Usage("no command given".into()))?;
        Settings::default().resolve(cmd, file)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// `--help` / `--version` output.
    #[error("{0}")]
    Info(String),
    #[error(transparent)]
    Numerical(#[from] crate::error::Error),
    /// Some points of a scan failed; the CSV was still written.
    #[error("{0}")]
    PartialFailure(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Info(_) => EXIT_OK,
            CliError::Numerical(_) | CliError::PartialFailure(_) | CliError::Io { .. } => {
                EXIT_NUMERICAL
            }
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "strongdrive",
    version,
    about = "Driven two-level system beyond the rotating-wave approximation"
)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Level splitting Δ
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Coupling g
    #[arg(long, allow_negative_numbers = true)]
    g: Option<f64>,
    /// Drive frequency ω
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    /// Rotated-frame amplitude α, as re+imi
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    alpha: Option<C64>,
    /// Rotated-frame amplitude β, as re+imi
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    beta: Option<C64>,
    /// Lab-frame initial state "c0,c1"
    #[arg(long, allow_hyphen_values = true)]
    psi0: Option<String>,
    /// Use α = β = e^{iθ}/√2
    #[arg(long)]
    equal_superposition: bool,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// Time horizon
    #[arg(long = "t-max", allow_negative_numbers = true)]
    t_max: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long = "rel-tol")]
    rel_tol: Option<f64>,
    #[arg(long = "abs-tol")]
    abs_tol: Option<f64>,
    #[arg(long = "max-step")]
    max_step: Option<f64>,
    #[arg(long = "quad-tol")]
    quad_tol: Option<f64>,
    /// Picard order of the approximation
    #[arg(long)]
    order: Option<usize>,
    /// Comma-separated Δ values for scan-delta
    #[arg(long)]
    deltas: Option<String>,
    /// Comma-separated ω values for scan-rwa
    #[arg(long)]
    omegas: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file; flags take precedence over its values
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Parses a full argument vector (without the program name).
pub fn parse_args<I, S>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = Args::try_parse_from(
        std::iter::once(std::ffi::OsString::from("strongdrive"))
            .chain(argv.into_iter().map(Into::into)),
    )
    .map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            CliError::Info(e.to_string())
        }
        _ => CliError::Usage(e.to_string()),
    })?;

    let file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read config file {}: {e}", path.display()))
            })?;
            Settings::from_text(&text)?
        }
        None => Settings::default(),
    };
    let flags = Settings::from_flags(&args)?;
    file.resolve(args.command, flags)
}

pub(crate) fn parse_list(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("invalid number {s:?} in --{what}")))
        })
        .collect()
}

pub(crate) fn parse_psi0(text: &str) -> Result<Complex2Vector, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!(
            "--psi0 expects two comma-separated amplitudes, got {text:?}"
        )));
    }
    let c0 = parse_complex(parts[0]).map_err(CliError::Usage)?;
    let c1 = parse_complex(parts[1]).map_err(CliError::Usage)?;
    Ok(Complex2Vector::new(c0, c1))
}

/// Checks `|c0|² + |c1|² = 1` within [`AMPLITUDE_NORM_TOL`] and rescales
/// to unit norm. Already-unit pairs (within rounding) are left untouched so
/// the operation is idempotent.
pub(crate) fn normalize_pair(v: Complex2Vector, what: &str) -> Result<Complex2Vector, CliError> {
    let n2 = v.norm_sqr();
    if !v.is_finite() || (n2 - 1.0).abs() > AMPLITUDE_NORM_TOL {
        return Err(CliError::Usage(format!(
            "{what}: squared amplitudes sum to {n2}, expected 1 (tolerance {AMPLITUDE_NORM_TOL:e})"
        )));
    }
    if (n2 - 1.0).abs() <= 4.0 * f64::EPSILON {
        Ok(v)
    } else {
        Ok(v * (1.0 / n2.sqrt()))
    }
}
