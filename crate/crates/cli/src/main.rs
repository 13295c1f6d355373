mod args;
mod commands;
mod report;
mod reproduce;

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use args::{Cli, Command, ReproduceTarget};

/// Usage errors exit with 2, computation errors with 1.
pub enum CliError {
    Usage(String),
    Compute(anyhow::Error),
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let seed = cli.seed;
    match &cli.command {
        Command::Algebra(c) => commands::algebra(c, seed),
        Command::Casimir(c) => commands::casimir(c, seed),
        Command::Rank(c) => commands::rank(c, seed),
        Command::Orbit(c) => commands::orbit(c, seed),
        Command::Flow(c) => commands::flow(c, seed),
        Command::Forms(c) => commands::forms(c, seed),
        Command::Group(c) => commands::group(c, seed),
        Command::Reproduce(c) => match c.target {
            ReproduceTarget::PaperTables => reproduce::paper_tables(c, seed),
        },
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on its own usage errors.
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(e)) => {
            let causes: Vec<String> = e.chain().map(ToString::to_string).collect();
            eprintln!(
                "{}",
                json!({ "error": { "kind": "computation", "message": causes.join(": ") } })
            );
            ExitCode::from(1)
        }
    }
}
