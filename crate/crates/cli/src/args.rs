use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use exact_series::Backend;

#[derive(Debug, Parser)]
#[command(name = "exact-series", version, about = "Truncated power-series solvers with exact residual checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Float => Backend::Float,
        }
    }
}

#[derive(Debug, Args)]
pub struct PviParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: String,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: String,
}

#[derive(Debug, Args)]
pub struct PviSeedArgs {
    /// y(0) in the shifted variable (original x = -1).
    #[arg(long, allow_hyphen_values = true)]
    pub a0: String,
    /// y'(0) in the shifted variable.
    #[arg(long, allow_hyphen_values = true)]
    pub a1: String,
}

#[derive(Debug, Args)]
pub struct OutputArg {
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve Painleve VI about shifted x = 0 and write a coefficient document.
    PviSolve {
        #[command(flatten)]
        params: PviParamArgs,
        #[command(flatten)]
        seed: PviSeedArgs,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "exact")]
        backend: BackendArg,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Substitute a PVI document into the equation and report the residual.
    PviVerify {
        #[arg(long, short)]
        input: PathBuf,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Compare the series against a fixed-step RK4 integration (CSV).
    PviOracle {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        x_end: f64,
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
        /// Largest acceptable |series - numeric|.
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Check the 65-member table against direct residual extraction.
    PviCrosscheck {
        #[command(flatten)]
        params: PviParamArgs,
        #[command(flatten)]
        seed: PviSeedArgs,
        #[arg(long, default_value_t = 15)]
        i_max: usize,
        #[arg(long, value_enum, default_value = "exact")]
        backend: BackendArg,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Check momentum and continuity for a Navier-Stokes document.
    NsVerify {
        #[arg(long, short)]
        input: PathBuf,
        #[command(flatten)]
        out: OutputArg,
    },
    /// March u, v, w in time from their t^0 slice, with P taken as given.
    NsMarch {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long)]
        levels: usize,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Write the Taylor-Green vortex series as a Navier-Stokes document.
    NsTaylorGreen {
        /// Caps as `x,y,z,t`.
        #[arg(long, value_delimiter = ',', required = true)]
        caps: Vec<usize>,
        #[arg(long, default_value = "1")]
        rho: String,
        #[arg(long)]
        nu: String,
        #[arg(long, value_enum, default_value = "exact")]
        backend: BackendArg,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Build the boundary-layer series from external flow and wall slope documents.
    PrandtlSolve {
        #[arg(long)]
        external: PathBuf,
        #[arg(long)]
        wall: PathBuf,
        #[arg(long)]
        nu: String,
        #[arg(long, default_value = "1")]
        rho: String,
        /// Output caps as `I,J,K`.
        #[arg(long, value_delimiter = ',', required = true)]
        caps: Vec<usize>,
        /// Treat both inputs as polynomials: missing higher coefficients are zero.
        #[arg(long)]
        polynomial_inputs: bool,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Check momentum and continuity for a Prandtl document.
    PrandtlVerify {
        #[arg(long, short)]
        input: PathBuf,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Wall shear along x at fixed t, with bracketed sign changes.
    PrandtlShear {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, allow_hyphen_values = true)]
        x_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        x_max: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Evaluate one field of any document on a rectangular grid (CSV).
    Profile {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long)]
        field: String,
        /// One `axis=lo:hi:n` per document axis.
        #[arg(long = "grid", required = true, allow_hyphen_values = true)]
        grids: Vec<String>,
        #[command(flatten)]
        out: OutputArg,
    },
}
