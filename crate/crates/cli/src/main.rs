//! `redlab`: schedules, deciders, reductions, verification sweeps and the
//! reducibility registry from the command line.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "redlab",
    version,
    about = "Finite-truncation Borel reductions into sequence spaces"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Master seed for randomized sweeps.
    #[arg(long, global = true, env = "REDLAB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Relative tolerance of floating comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Number of blocks in generated schedules.
    #[arg(long, global = true, default_value_t = 12)]
    pub n_max: usize,
    /// Fraction of the exponent budget a generated schedule may use.
    #[arg(long, global = true, default_value_t = 0.5)]
    pub margin: f64,
    /// Write the main output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate and validate a parameter schedule.
    GenParams {
        #[arg(long, value_enum, default_value_t = FlavorArg::Lp)]
        flavor: FlavorArg,
        #[arg(long, allow_negative_numbers = true)]
        base_p: f64,
    },
    /// Decide a relation between two points given as JSON files.
    Decide {
        /// H0, E0, E1, =+, or a product such as H0x=+.
        #[arg(long)]
        relation: String,
        a: PathBuf,
        b: PathBuf,
    },
    /// Map points to sequence-space descriptors.
    Reduce {
        #[arg(long, value_enum)]
        map: MapArg,
        /// Schedule JSON; generated from --base-p, --n-max and --margin when absent.
        #[arg(long)]
        schedule: Option<PathBuf>,
        /// Base exponent: of the generated schedule for lp/c0, of the sum for Lp, and p for h.
        #[arg(long, default_value = "1")]
        base_p: String,
        /// The point, or for `h` the X0 point followed by the cycle-list point.
        #[arg(required = true, num_args = 1..=2)]
        points: Vec<PathBuf>,
    },
    /// Run a seeded property sweep and write a CSV report.
    Verify {
        #[arg(long)]
        suite: String,
        /// Random cases per suite.
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 64)]
        oracle_bound: u64,
        /// Use this schedule instead of generated ones.
        #[arg(long)]
        schedule: Option<PathBuf>,
    },
    /// Query or export the reducibility registry.
    Hierarchy {
        #[command(subcommand)]
        action: HierarchyAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum HierarchyAction {
    Export {
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
    },
    /// Whether the first relation Borel reduces to the second.
    Query { from: String, to: String },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlavorArg {
    Lp,
    C0,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapArg {
    #[value(name = "lp")]
    LpSchedule,
    #[value(name = "c0")]
    C0Schedule,
    #[value(name = "Lp")]
    LpSum,
    #[value(name = "h")]
    DirectSum,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    Json,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", e.report());
            ExitCode::from(e.exit_code())
        }
    }
}
