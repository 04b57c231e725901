use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Abelian knot invariants from diagrams and tower data.
#[derive(Parser, Debug)]
#[command(name = "accessory", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the accessory-loop pipeline on one diagram.
    Compute {
        #[command(flatten)]
        input: DiagramInput,
        #[command(flatten)]
        choice: ChoiceArgs,
        #[arg(long)]
        json: bool,
    },
    /// Alexander polynomial and Arf invariant by Fox calculus.
    Oracle {
        #[command(flatten)]
        input: DiagramInput,
        #[arg(long)]
        json: bool,
    },
    /// Run the pipeline under several seeds and compare with the oracle.
    Compare {
        #[command(flatten)]
        input: DiagramInput,
        #[command(flatten)]
        choice: ChoiceArgs,
        /// Number of seeds, counting up from --seed (default 0).
        #[arg(long, default_value_t = 10)]
        trials: u64,
        #[arg(long)]
        json: bool,
    },
    /// Assemble Ω from tower intersection data.
    Omega {
        #[arg(long, value_name = "FILE")]
        tower: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check every diagram in a directory against its sidecar expectations.
    Corpus {
        #[arg(long, value_name = "DIR")]
        dir: PathBuf,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Seeded runs per knot in addition to the unseeded one.
        #[arg(long, default_value_t = 0)]
        trials: u64,
        #[arg(long, default_value_t = accessory::unknotting::DEFAULT_R3_BUDGET)]
        r3_budget: usize,
        #[arg(long)]
        json: bool,
    },
    /// Pair two generators of the module presented by Ψ.
    Blanchfield {
        #[command(flatten)]
        input: OptionalDiagramInput,
        /// A matrix or a `compute --json` report to read Ψ from.
        #[arg(long, value_name = "FILE", conflicts_with_all = ["pd", "gauss"])]
        psi: Option<PathBuf>,
        #[command(flatten)]
        choice: ChoiceArgs,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct DiagramInput {
    /// File holding a PD code.
    #[arg(long, value_name = "FILE")]
    pd: Option<PathBuf>,
    /// File holding a signed Gauss code.
    #[arg(long, value_name = "FILE")]
    gauss: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OptionalDiagramInput {
    #[arg(long, value_name = "FILE")]
    pd: Option<PathBuf>,
    #[arg(long, value_name = "FILE", conflicts_with = "pd")]
    gauss: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AutoUnknot {
    Descending,
    Minimal,
}

#[derive(Args, Debug)]
struct ChoiceArgs {
    /// Comma-separated crossing ids to change.
    #[arg(long, value_delimiter = ',', conflicts_with = "auto_unknot")]
    marked: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    auto_unknot: Option<AutoUnknot>,
    #[arg(long, default_value_t = accessory::unknotting::DEFAULT_R3_BUDGET)]
    r3_budget: usize,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(commands::dispatch(cli.command))
}
