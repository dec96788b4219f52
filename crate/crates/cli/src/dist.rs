use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, ValueEnum};
use serde::Serialize;
use typetoken::{
    exact_type_token_pmf, pb_pmf, pb_success_probs, poisson_unseen_approx, zipf_distribution,
    TypeCountPmf, ZipfParams,
};

use crate::args::Format;
use crate::output::emit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Exact inclusion-exclusion distribution (N <= 20).
    Exact,
    /// Poisson-binomial approximation.
    Pb,
    /// Poisson approximation of the unseen-type count.
    Lecam,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Zipf exponent.
    #[arg(long)]
    a: f64,
    /// Number of latent types.
    #[arg(long)]
    n: usize,
    /// Number of tokens.
    #[arg(long)]
    m: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write `pmf.csv` / `pmf.json` into this directory instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Row {
    #[serde(rename = "K")]
    k: usize,
    prob: f64,
}

pub fn run(args: DistArgs) -> Result<()> {
    let dist = zipf_distribution(ZipfParams::new(args.a, args.n)?);
    let pmf: TypeCountPmf = match args.family {
        Family::Exact => exact_type_token_pmf(&dist, args.m)?,
        Family::Pb => pb_pmf(&pb_success_probs(&dist, args.m)?)?,
        Family::Lecam => poisson_unseen_approx(&dist, args.m)?.pmf()?,
    };
    match args.format {
        Format::Csv => {
            let mut buf = Vec::new();
            pmf.write_csv(&mut buf)?;
            emit(args.out.as_deref(), "pmf.csv", &buf)
        }
        Format::Json => {
            let rows: Vec<Row> = pmf.iter().map(|(k, prob)| Row { k, prob }).collect();
            let mut buf = serde_json::to_vec_pretty(&rows)?;
            buf.push(b'\n');
            emit(args.out.as_deref(), "pmf.json", &buf)
        }
    }
}
