mod budget;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use machin_core::SeriesKernel;

#[derive(Parser, Debug)]
#[command(name = "machin", version, about = "Machin-like formulas for pi by iterated integer-reciprocal splitting")]
pub struct Cli {
    /// Worker threads for term evaluation (default: all cores). Results do
    /// not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the formula for (k, M) and print it.
    Generate(GenerateArgs),
    /// Evaluate the truncated formula and count correct digits of pi.
    Pi(PiArgs),
    /// Check that a formula file is an exact identity for pi/4.
    Verify(VerifyArgs),
    /// Expand arctan(1/z) into integer reciprocals.
    Decompose(DecomposeArgs),
    /// Run a named experiment and write CSV.
    Experiments(ExperimentArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Standard,
    Alternative,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Floor,
    Ceiling,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
    pub k: u32,
    /// Number of splitting steps.
    #[arg(long = "M", alias = "m", default_value_t = 0, value_parser = clap::value_parser!(u32).range(0..=64))]
    pub m: u32,
    #[arg(long, value_enum, default_value_t = Variant::Standard)]
    pub variant: Variant,
    /// Decimal places kept in the scaled seed (alternative variant only).
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=18))]
    pub ell: Option<u32>,
    #[arg(long, value_enum, conflicts_with = "beta1")]
    pub mode: Option<Mode>,
    /// Use this integer as the leading constant instead of the radical floor.
    #[arg(long)]
    pub beta1: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Refuse runs predicted to take longer than this many seconds.
    #[arg(long, default_value_t = budget::DEFAULT_BUDGET_SECS)]
    pub budget: f64,
}

#[derive(Args, Debug)]
pub struct PiArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
    pub k: u32,
    #[arg(long = "M", alias = "m", default_value_t = 0, value_parser = clap::value_parser!(u32).range(0..=64))]
    pub m: u32,
    /// Decimals to print.
    #[arg(long, default_value_t = 50)]
    pub digits: u32,
    /// Use the scaled-seed variant with this many seed decimals.
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=18))]
    pub ell: Option<u32>,
    #[arg(long, default_value = "iterative_gh", value_parser = parse_kernel)]
    pub kernel: SeriesKernel,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the digits here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = budget::DEFAULT_BUDGET_SECS)]
    pub budget: f64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Formula JSON file.
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    /// The quotient z, as "p/q" or an integer.
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    #[arg(long, default_value_t = machin_core::formula_gen::DEFAULT_MAX_STEPS)]
    pub max_steps: usize,
    /// Formula JSON whose `z` terms are replaced; prints its new measure.
    #[arg(long)]
    pub formula: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Table1,
    LehmerStabilization,
    SeriesBench,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub name: Experiment,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
    pub k: Option<u32>,
    #[arg(long = "M", alias = "m", value_parser = clap::value_parser!(u32).range(0..=64))]
    pub m: Option<u32>,
    /// Comma-separated quotients for series-bench.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub betas: Option<Vec<String>>,
    #[arg(long)]
    pub precision: Option<u32>,
    /// Fill the wall_time_ms column of series-bench (makes output vary).
    #[arg(long)]
    pub timing: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn parse_kernel(s: &str) -> Result<SeriesKernel, String> {
    s.parse().map_err(|e: machin_core::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    commands::run(cli.command)
}
