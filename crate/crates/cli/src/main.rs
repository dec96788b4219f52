//! `typetoken` command-line interface.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 refusal of an
//! infeasible exact computation.

mod args;
mod dist;
mod estimate;
mod output;
mod simulate;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "typetoken",
    version,
    about = "Type-token distributions and latent vocabulary estimators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the distribution of the observed-type count for a Zipf corpus.
    Dist(dist::DistArgs),
    /// Estimate the latent number of types from a text, spectrum or observations.
    Estimate(estimate::EstimateArgs),
    /// Run the synthetic estimator comparison.
    Simulate(simulate::SimulateArgs),
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
    let result = match cli.command {
        Command::Dist(a) => dist::run(a),
        Command::Estimate(a) => estimate::run(a),
        Command::Simulate(a) => simulate::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let infeasible = e
                .downcast_ref::<typetoken::Error>()
                .is_some_and(|e| matches!(e, typetoken::Error::Infeasible { .. }));
            ExitCode::from(if infeasible { 2 } else { 1 })
        }
    }
}
