//! `atlas`: exact torus-valued cohomology computations from JSON problem files.
//!
//! Exit codes: 0 success, 2 input error, 3 precondition error, 4 property failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use atlas_cli::run::{run_file, run_verify, Command, Flags, Outcome};
use atlas_cli::CliError;

#[derive(Parser, Debug)]
#[command(name = "atlas", version, about = "Exact torus-valued cohomology of free abelian groups and their extensions")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// Emit an atlas-report/1 JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Include coboundary witnesses (coboundary) or run the witness oracle (class).
    #[arg(long, global = true)]
    witness: bool,
    /// Exhaustively evaluate on the integer box [-N, N] (coboundary).
    #[arg(long, global = true, value_name = "N")]
    grid_bound: Option<u32>,
    /// Random seed for sampled checks.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Sample count for sampled checks.
    #[arg(long, global = true, value_name = "N")]
    samples: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Cocycle test, class and coboundary decision for a cochain (or c_a).
    Coboundary { file: PathBuf },
    /// Class coordinates, modular obstruction and rank-one record of (a, b).
    Invariants { file: PathBuf },
    /// Resolution b_a of c_a on the Heisenberg group, with its check.
    Resolve { file: PathBuf },
    /// Second cohomology of H, Res, the HJR map and its boundary.
    Hjr { file: PathBuf },
    /// Lattice membership and class coordinates of (a, b).
    Class { file: PathBuf },
    /// Run a verification suite.
    Verify { suite: String },
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    let flags = Flags { witness: g.witness, grid_bound: g.grid_bound, seed: g.seed, samples: g.samples };
    let (cmd, file) = match &cli.command {
        Cmd::Verify { suite } => return run_verify(suite, g.seed.unwrap_or(0), g.samples),
        Cmd::Coboundary { file } => (Command::Coboundary, file),
        Cmd::Invariants { file } => (Command::Invariants, file),
        Cmd::Resolve { file } => (Command::Resolve, file),
        Cmd::Hjr { file } => (Command::Hjr, file),
        Cmd::Class { file } => (Command::Class, file),
    };
    run_file(cmd, file, &flags)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(out) => {
            let text = if cli.global.json { out.report.to_json() } else { out.report.to_text() };
            print!("{text}");
            match out.failure {
                Some(e) => {
                    eprintln!("atlas: {e}");
                    ExitCode::from(e.exit_code())
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("atlas: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
