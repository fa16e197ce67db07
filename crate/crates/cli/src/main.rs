//! `rh`: expand branches, classify connections and replay the non-tame
//! example from the command line.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "rh", version, about = "Parallel frames of flat connections on plane curve singularities")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
pub struct Common {
    /// Truncation order N of branch series (default 40, or the problem file's value).
    #[arg(short = 'n', long = "order", global = true)]
    order: Option<usize>,
    /// Degree cap D for membership tests (default 8, or the problem file's value).
    #[arg(long = "cap", global = true)]
    cap: Option<u32>,
    /// Emit canonical JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed echoed into reports.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Newton–Puiseux branches of a curve file.
    Puiseux { curve: PathBuf },
    /// Flatness, parallel frame and tameness verdict for a problem file.
    Classify { problem: PathBuf },
    /// Checklist for the connection d + α on x⁴ + xy⁴ + y⁵.
    PaperExample,
    /// Truncated ideal membership of a polynomial.
    Membership { target: PathBuf, generators: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.command {
        Command::Puiseux { curve } => commands::puiseux(&curve, cli.common),
        Command::Classify { problem } => commands::classify(&problem, cli.common),
        Command::PaperExample => commands::paper_example(cli.common),
        Command::Membership { target, generators } => commands::membership(&target, &generators, cli.common),
    };
    ExitCode::from(out)
}
