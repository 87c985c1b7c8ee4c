//! The `csl-heat` command line.
//!
//! [`run`] does all the work and reports an exit code, so the binary is a
//! thin wrapper and tests can drive the same path in-process.
//!
//! | exit | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | internal error |
//! | 2 | usage or validation error |
//! | 3 | no convergence (best estimate still printed) |
//! | 4 | oracle check failed |

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use csl_heating::constants::{ATOMIC_MASS_UNIT, PROTON_MASS};
use csl_heating::{Error, Method, PhysicalConstants, QuadratureOptions, ScanParam};

mod commands;
pub mod envelope;
pub mod model;

pub use envelope::{OracleReport, ResultEnvelope};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_CHECK: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Adaptive radial quadrature
    Quad,
    /// Monte Carlo over the full 3D weight
    Mc,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Quad => Method::RadialQuadrature,
            MethodArg::Mc => Method::MonteCarlo,
        }
    }
}

/// Heating of solids by colored collapse noise.
#[derive(Debug, Parser)]
#[command(name = "csl-heat", version)]
pub struct Cli {
    /// Output format for single results (scans are always CSV)
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,

    /// Relative tolerance of the radial quadrature
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub rel_tol: f64,

    /// Seed for Monte Carlo sampling
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Reduced Planck constant override, J s
    #[arg(long, global = true)]
    pub hbar: Option<f64>,

    /// Reference nucleon mass: `proton`, `amu`, or a value in kg
    #[arg(long = "m-n", global = true)]
    pub m_n: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Effective collapse rate seen by longitudinal phonons
    LambdaEff(EvalArgs),
    /// Heating power, total or per kilogram
    Rate(RateArgs),
    /// Sweep one parameter and tabulate the results as CSV
    Scan(ScanArgs),
    /// Compare against a finite-lattice sum and check the diatomic cell
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Noise spectrum: white:LAMBDA0 | hardcutoff:LAMBDA0,OMEGA_C | expcutoff:LAMBDA0,OMEGA_C |
    /// lorentzian:LAMBDA0,OMEGA_C | csv:PATH  (LAMBDA0 in 1/s, OMEGA_C in rad/s)
    #[arg(long)]
    pub spectrum: String,

    /// Phonon dispersion: linear:C_S | debye:C_S,OMEGA_D | sine:OMEGA_MAX,Q_EDGE | csv:PATH
    /// (C_S in m/s, OMEGA in rad/s, Q_EDGE in rad/m)
    #[arg(long)]
    pub dispersion: String,

    /// Correlation length r_c, m
    #[arg(long = "rc")]
    pub r_c: f64,

    /// Radial truncation w_max = r_c q_max
    #[arg(long, default_value_t = 8.0)]
    pub w_max: f64,

    /// Subdivision budget of the adaptive quadrature
    #[arg(long, default_value_t = 200)]
    pub max_subdivisions: usize,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    #[arg(long, value_enum, default_value_t = MethodArg::Quad)]
    pub method: MethodArg,

    /// Monte Carlo sample count
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[command(flatten)]
    pub eval: EvalArgs,

    /// Body mass, kg (per-kilogram rate only when omitted)
    #[arg(long)]
    pub mass: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    /// Parameter to vary: omega_c (rad/s), r_c (m) or c_s (m/s)
    #[arg(long)]
    pub param: ScanParam,

    #[arg(long)]
    pub from: f64,

    #[arg(long)]
    pub to: f64,

    #[arg(long)]
    pub points: usize,

    /// Geometric instead of linear spacing
    #[arg(long)]
    pub log: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub model: ModelArgs,

    /// Cells per edge of the periodic cube (even, at least 4)
    #[arg(long)]
    pub lattice: usize,

    /// pi r_c / a, which fixes the lattice constant
    #[arg(long, default_value_t = 6.0)]
    pub ratio: f64,

    /// Atom mass of the cubic lattice, kg
    #[arg(long, default_value_t = 28.0 * ATOMIC_MASS_UNIT)]
    pub atom_mass: f64,

    /// First mass of the diatomic check cell
    #[arg(long, default_value_t = 1.0)]
    pub m1: f64,

    /// Second mass of the diatomic check cell
    #[arg(long, default_value_t = 2.0)]
    pub m2: f64,

    /// Spring constant of the diatomic check cell
    #[arg(long, default_value_t = 1.0)]
    pub spring: f64,
}

impl Cli {
    pub fn constants(&self) -> csl_heating::Result<PhysicalConstants> {
        let m_n = match self.m_n.as_deref().map(str::trim) {
            None | Some("proton") => PROTON_MASS,
            Some("amu") => ATOMIC_MASS_UNIT,
            Some(v) => v.parse().map_err(|_| {
                Error::InvalidArgument(format!("--m-n: expected proton, amu or kg, got '{v}'"))
            })?,
        };
        PhysicalConstants::new(self.hbar.unwrap_or(csl_heating::constants::HBAR), m_n)
    }

    pub fn quadrature(&self, model: &ModelArgs) -> csl_heating::Result<QuadratureOptions> {
        let opts = QuadratureOptions {
            rel_tol: self.rel_tol,
            w_max: model.w_max,
            max_subdivisions: model.max_subdivisions,
            ..QuadratureOptions::default()
        };
        opts.validate()?;
        Ok(opts)
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Convergence { .. } => EXIT_CONVERGENCE,
        Error::CheckFailure { .. } => EXIT_CHECK,
        Error::InternalConsistency(_) => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match commands::dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
