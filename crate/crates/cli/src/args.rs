use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "schmidt-osc",
    version,
    about = "Schmidt modes and entanglement of two coupled quantum oscillators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decouple a system into normal modes.
    Diagonalize {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Schmidt spectrum and entanglement of one eigenstate.
    Stationary {
        #[arg(long, allow_negative_numbers = true)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        m: u32,
        #[command(flatten)]
        mixing: MixingArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Entropy and Schmidt parameter of one eigenstate over a range of mu.
    SweepMu {
        #[arg(long, allow_negative_numbers = true)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        m: u32,
        #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
        mu_min: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        mu_max: f64,
        #[arg(long, default_value_t = 20, allow_negative_numbers = true)]
        steps: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Time-dependent Schmidt modes of an uncoupled product state.
    Evolve {
        #[arg(long, allow_negative_numbers = true)]
        s1: u32,
        #[arg(long, allow_negative_numbers = true)]
        s2: u32,
        #[command(flatten)]
        mixing: MixingArgs,
        #[arg(long, default_value_t = 256, allow_negative_numbers = true)]
        steps: usize,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        periods: f64,
        /// Use the exact level gaps instead of delta * n (needs --A --B --C).
        #[arg(long)]
        exact: bool,
        /// Emit physical time t instead of delta * t (needs --A --B --C).
        #[arg(long)]
        absolute_time: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare the closed forms against the numerical oracles.
    Verify {
        #[arg(long, default_value_t = 12, allow_negative_numbers = true)]
        max_order: u32,
        #[arg(long, default_value_t = 1e-8, allow_negative_numbers = true)]
        tolerance: f64,
        /// Gauss-Hermite order for the overlap integrals (default: n + m + 8).
        #[arg(long, allow_negative_numbers = true)]
        quad_points: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Physical parameters of the coupled system.
#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    #[arg(long = "A", id = "A", allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long = "B", id = "B", allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long = "C", id = "C", allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub m1: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub m2: f64,
    /// Read a, b, c from the JSON written by `diagonalize`.
    #[arg(long, conflicts_with_all = ["A", "B", "C", "m1", "m2"])]
    pub from_json: Option<PathBuf>,
}

impl SystemArgs {
    pub fn is_given(&self) -> bool {
        self.a.is_some() || self.b.is_some() || self.c.is_some() || self.from_json.is_some()
    }
}

/// Either `--mu` directly or a system to derive it from.
#[derive(Debug, Clone, Args)]
pub struct MixingArgs {
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["A", "B", "C", "from_json"])]
    pub mu: Option<f64>,
    #[command(flatten)]
    pub system: SystemArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}
