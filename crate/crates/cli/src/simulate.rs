use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, ValueEnum};
use typetoken::experiment::{run_experiment, ExperimentConfig};

use crate::args::{parse_grid, Format, Grid};
use crate::output::emit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// 300 types, a = 1, 1200 tokens, 30 replicates, N <= 600.
    Desk,
    /// 1000 types, a in {0, 0.5, 1}, M in {1000, 1500, 2000}, 100 replicates, N <= 2000.
    Full,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Starting configuration; individual flags override its fields.
    #[arg(long, value_enum, default_value = "desk")]
    preset: Preset,
    #[arg(long)]
    n_types: Option<usize>,
    /// Comma-separated Zipf exponents.
    #[arg(long, value_delimiter = ',')]
    exponents: Option<Vec<f64>>,
    /// Comma-separated sample sizes M.
    #[arg(long, value_delimiter = ',')]
    token_counts: Option<Vec<usize>>,
    #[arg(long)]
    replicates: Option<usize>,
    /// Prefix datasets per sample (default M/50).
    #[arg(long)]
    prefixes: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Exponent grid, `start:step:end` or a comma list.
    #[arg(long, value_parser = parse_grid)]
    a_grid: Option<Grid>,
    /// Format of the summary printed on stdout.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Directory for `replicates.csv` and `summary.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SimulateArgs {
    fn config(&self) -> ExperimentConfig {
        let mut c = match self.preset {
            Preset::Desk => ExperimentConfig::desk_scale(),
            Preset::Full => ExperimentConfig::full_scale(),
        };
        if let Some(v) = self.n_types {
            c.n_types = v;
        }
        if let Some(v) = &self.exponents {
            c.exponents = v.clone();
        }
        if let Some(v) = &self.token_counts {
            c.token_counts = v.clone();
        }
        if let Some(v) = self.replicates {
            c.replicates = v;
        }
        if self.prefixes.is_some() {
            c.prefixes_per_dataset = self.prefixes;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.n_max {
            c.n_max = v;
        }
        if let Some(v) = &self.a_grid {
            c.a_grid = v.0.clone();
        }
        c
    }
}

pub fn run(args: SimulateArgs) -> Result<()> {
    let config = args.config();
    let report = run_experiment(&config, |s| {
        eprintln!(
            "cell M={} a={}: K={:.1} gt={:.1} ht={:.1} pb-grid={:.1}",
            s.tokens,
            s.exponent,
            s.mean_observed_types,
            s.good_turing_mean,
            s.horvitz_thompson_mean,
            s.pb_grid_mean
        );
    })?;
    let mut summary = Vec::new();
    report.write_summary_csv(&mut summary)?;
    if let Some(dir) = args.out.as_deref() {
        let mut replicates = Vec::new();
        report.write_replicates_csv(&mut replicates)?;
        emit(Some(dir), "replicates.csv", &replicates)?;
        emit(Some(dir), "summary.csv", &summary)?;
    }
    match args.format {
        Format::Csv => emit(None, "", &summary),
        Format::Json => {
            let mut buf = serde_json::to_vec_pretty(&report.summaries)?;
            buf.push(b'\n');
            emit(None, "", &buf)
        }
    }
}
