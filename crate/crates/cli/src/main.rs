use std::path::PathBuf;
use std::process::ExitCode;

use assess_core::report::Format;
use assess_core::{IndicatorKind, SelectionStrategy};
use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod manifest;

#[derive(Debug, Parser)]
#[command(
    name = "assess",
    version,
    about = "Peer-review and bibliometric research assessment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load and validate a corpus directory.
    Validate(Common),
    /// Sector indicators O, FO, SS, FSS and their per-staff productivities.
    Indicators(Common),
    /// Peer-review quality index and ranks per area.
    VtrScore(Common),
    /// Staff-weighted area productivity for one indicator.
    Aggregate(Common),
    /// Correlations and rank variations between peer-review and bibliometric rankings.
    Compare(Common),
    /// Position of submitted articles within each portfolio.
    Audit(Common),
    /// Generate a synthetic corpus.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Args)]
struct Output {
    /// Report path; sibling reports and the manifest are written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Record the wall-clock time in the manifest.
    #[arg(long)]
    stamp: bool,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// Corpus directory.
    #[arg(long)]
    input: PathBuf,
    /// Restrict to publication years Y1:Y2.
    #[arg(long, value_parser = parse_period)]
    period: Option<(i32, i32)>,
    /// Universities with fewer outputs in an area are left out of rankings.
    #[arg(long, default_value_t = 3)]
    min_outputs: u32,
    #[arg(long, default_value_t = 0.05, value_parser = parse_alpha)]
    alpha: f64,
    #[arg(long, default_value = "FQP", value_parser = parse_indicator)]
    indicator: IndicatorKind,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Clone, Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "random", value_parser = parse_strategy)]
    strategy: SelectionStrategy,
    #[arg(long, default_value_t = 6)]
    universities: usize,
    #[arg(long, default_value_t = 2)]
    areas: usize,
    #[arg(long, default_value_t = 3)]
    sectors_per_area: usize,
    #[arg(long, default_value_t = 12)]
    journals_per_sector: usize,
    #[arg(long, default_value_t = 120)]
    researchers: usize,
    /// Mean publications per researcher per year.
    #[arg(long, default_value_t = 1.0)]
    rate: f64,
    /// Submissions per university and area as a share of its researchers.
    #[arg(long, default_value_t = 0.5)]
    fraction: f64,
    #[arg(long, value_parser = parse_period)]
    period: Option<(i32, i32)>,
    /// Directory for the corpus files.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    stamp: bool,
}

fn parse_period(s: &str) -> Result<(i32, i32), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected Y1:Y2, got `{s}`"))?;
    let a: i32 = a.trim().parse().map_err(|_| format!("bad year `{a}`"))?;
    let b: i32 = b.trim().parse().map_err(|_| format!("bad year `{b}`"))?;
    if a > b {
        return Err(format!("period {a}:{b} is empty"));
    }
    Ok((a, b))
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let a: f64 = s.parse().map_err(|_| format!("bad alpha `{s}`"))?;
    if a > 0.0 && a < 1.0 {
        Ok(a)
    } else {
        Err(format!("alpha must be in (0, 1), got {a}"))
    }
}

fn parse_indicator(s: &str) -> Result<IndicatorKind, String> {
    s.parse()
}

fn parse_strategy(s: &str) -> Result<SelectionStrategy, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
