//! `polycast` command-line front end.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_GEOMETRY: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, Parser)]
#[command(name = "polycast", version, about = "Castability and fatness analysis of convex polyhedra")]
pub struct Cli {
    /// Emit single-line JSON.
    #[arg(long, global = true)]
    pub compact: bool,

    /// Require an explicit --seed for randomized commands.
    #[arg(long, global = true)]
    pub strict: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fatness, per-facet castability and the edge/area/volume checks.
    Analyze(AnalyzeArgs),
    /// Search for a plane cut into two castable halves.
    CutSearch(CutSearchArgs),
    /// Case bounds on the fatness ratio and the resulting threshold.
    Bounds(BoundsArgs),
    /// Generate a test polyhedron as OFF plus a JSON manifest.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub file: PathBuf,
    /// `auto` to search for the best center, or `x,y,z`.
    #[arg(long, default_value = "auto")]
    pub center: String,
    /// Iterations of the center search.
    #[arg(long, default_value_t = polycast::fatness::DEFAULT_CENTER_ITERS)]
    pub iters: usize,
}

#[derive(Debug, Args)]
pub struct CutSearchArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated: mixed, vertex-triple, facet-parallel[:k], random.
    #[arg(long, default_value = "mixed", value_delimiter = ',')]
    pub strategies: Vec<String>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Print a plain-text table instead of JSON.
    #[arg(long)]
    pub text: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    SphereHull,
    TargetRatio,
    Platonic,
    Prism,
    Perturbed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Solid {
    Tetrahedron,
    Cube,
    Octahedron,
    Dodecahedron,
    Icosahedron,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Defaults to `target-ratio` when --ratio is given, else `sphere-hull`.
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    #[arg(long)]
    pub ratio: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 800)]
    pub cap: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "cube")]
    pub solid: Solid,
    #[arg(long, default_value_t = 6)]
    pub sides: usize,
    #[arg(long, default_value_t = 1.0)]
    pub height: f64,
    /// Perturbation magnitude for `perturbed`.
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    /// OFF output path; the manifest goes next to it with a `.json` extension.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match commands::run(&cli) {
        Ok(commands::Output::Text(text)) => {
            print!("{text}");
            ExitCode::from(EXIT_OK)
        }
        Ok(commands::Output::Report(report, code)) => {
            let text = if cli.compact {
                serde_json::to_string(&report)
            } else {
                serde_json::to_string_pretty(&report)
            };
            match text {
                Ok(t) => println!("{t}"),
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_NEGATIVE);
                }
            }
            ExitCode::from(code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
