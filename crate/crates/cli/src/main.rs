//! `diophant`: batch front end for heights, distances, derivations, approximant search and the
//! criterion harnesses. Every command prints (or writes) one JSON report.

mod commands;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "diophant", version, about = "Heights, algebraic distances and transcendence criteria at desk scale")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Working precision in bits (overrides the configuration file).
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Seed for every randomized step (overrides the configuration file).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Configuration file; `DIOPHANT_CONFIG` takes precedence when set.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// L2 norm, sup norm and Mahler integral of a polynomial.
    Norm {
        #[arg(long)]
        poly: PathBuf,
        /// Monte Carlo samples for the Mahler integral.
        #[arg(long, default_value_t = 1 << 17)]
        samples: usize,
    },
    /// Derivated algebraic distance of a polynomial or a cycle to a point.
    Dist {
        #[arg(long)]
        point: PathBuf,
        #[arg(long, conflicts_with = "cycle", required_unless_present = "cycle")]
        poly: Option<PathBuf>,
        #[arg(long)]
        cycle: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        order: u32,
        /// Weight `a` for the weighted distance of a cycle.
        #[arg(long)]
        weight: Option<f64>,
    },
    /// Derivative polynomial `f_I` on a presented variety, optionally evaluated at a point.
    Derive {
        #[arg(long)]
        variety: PathBuf,
        #[arg(long)]
        poly: PathBuf,
        /// Multi-index, comma separated, one entry per base coordinate.
        #[arg(long, value_delimiter = ',')]
        index: Vec<u32>,
        #[arg(long)]
        point: Option<PathBuf>,
        /// Linear form used as denominator (default `x0`).
        #[arg(long)]
        g: Option<PathBuf>,
    },
    /// Vanishing order at a point, and local Bezout against a second plane curve.
    Mult {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        point: PathBuf,
        #[arg(long)]
        with: Option<PathBuf>,
    },
    /// Algebraic approximant of a decimal number (or a point given by several).
    FindApprox {
        /// Text file with one decimal number per line: the affine coordinates.
        #[arg(long)]
        digits: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        /// Bound on the log coefficient norm of the minimal polynomial.
        #[arg(long, default_value_t = 60.0)]
        max_height: f64,
    },
    /// Integral subspace keeping away from a sampled variety.
    AvoidSubspace {
        #[arg(long)]
        variety: PathBuf,
        #[arg(long)]
        codim: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Approximation exponents over a grid of degrees and height bounds.
    ExponentScan {
        #[arg(long)]
        digits: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![10.0, 20.0, 40.0])]
        heights: Vec<f64>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Hypothesis harness for one of the two criteria.
    CheckCriterion {
        #[arg(long, conflicts_with = "example", required_unless_present = "example")]
        instance: Option<PathBuf>,
        /// Use a constructed instance instead of a file.
        #[arg(long, value_enum)]
        example: Option<commands::Example>,
        #[arg(long, value_enum, default_value = "algind1")]
        criterion: commands::Criterion,
        /// Also write the instance as JSON.
        #[arg(long)]
        save_instance: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Re-runs the calibration suites.
    Calibrate {
        /// Write the calibrated constants (in the shipped format) here.
        #[arg(long)]
        write: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
