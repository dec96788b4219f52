//! Monte-Carlo comparison of the Good–Turing, Horvitz–Thompson and
//! Poisson-binomial grid estimators on synthetic Zipf corpora.
//!
//! Each `(M, a)` cell draws `replicates` independent samples of `M` tokens
//! from `Zipf(a, n_types)`, reduces each to its spectrum (for GT/HT) and to
//! successive-prefix observations (for the likelihood estimator), and records
//! every estimate. Replicate `r` of cell `c` uses the seed
//! `mix_seed(seed, (c << 32) | r)` (a SplitMix64 finalizer).

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{frequency_spectrum, sample_tokens, successive_prefixes};
use crate::error::{Error, Result};
use crate::estimators::{default_a_grid, good_turing, horvitz_thompson, mle_grid};
use crate::numerics::mix_seed;
use crate::zipf::{zipf_distribution, ZipfParams};

/// Tokens per prefix dataset when no explicit prefix count is configured.
pub const TOKENS_PER_PREFIX: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub n_types: usize,
    pub exponents: Vec<f64>,
    pub token_counts: Vec<usize>,
    pub replicates: usize,
    /// Prefix datasets per sample; `None` uses `M / 50`.
    pub prefixes_per_dataset: Option<usize>,
    pub seed: u64,
    pub n_max: usize,
    pub a_grid: Vec<f64>,
}

impl ExperimentConfig {
    /// 300 types, `a = 1`, 1200 tokens, 30 replicates, `N <= 600`.
    pub fn desk_scale() -> Self {
        Self {
            n_types: 300,
            exponents: vec![1.0],
            token_counts: vec![1200],
            replicates: 30,
            prefixes_per_dataset: None,
            seed: 20_140_101,
            n_max: 600,
            a_grid: default_a_grid(),
        }
    }

    /// 1000 types, `a` in {0, 0.5, 1}, `M` in {1000, 1500, 2000}, 100
    /// replicates, `N <= 2000`.
    pub fn full_scale() -> Self {
        Self {
            n_types: 1000,
            exponents: vec![0.0, 0.5, 1.0],
            token_counts: vec![1000, 1500, 2000],
            replicates: 100,
            prefixes_per_dataset: None,
            seed: 20_140_101,
            n_max: 2000,
            a_grid: default_a_grid(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_types == 0 {
            return Err(Error::domain("n_types must be at least 1"));
        }
        if self.replicates == 0 {
            return Err(Error::domain("replicates must be at least 1"));
        }
        if self.token_counts.is_empty() || self.token_counts.contains(&0) {
            return Err(Error::domain("token counts must be nonempty and positive"));
        }
        if self.exponents.is_empty() {
            return Err(Error::domain("at least one exponent is required"));
        }
        for &a in &self.exponents {
            ZipfParams::new(a, self.n_types)?;
        }
        if self.n_max < self.n_types {
            return Err(Error::domain(format!(
                "n_max = {} is below n_types = {}",
                self.n_max, self.n_types
            )));
        }
        if self.a_grid.is_empty() {
            return Err(Error::domain("exponent grid is empty"));
        }
        if let Some(n) = self.prefixes_per_dataset {
            if let Some(&m) = self.token_counts.iter().find(|&&m| n == 0 || n > m) {
                return Err(Error::domain(format!(
                    "prefix count {n} must lie in 1..={m}"
                )));
            }
        }
        Ok(())
    }

    /// `(M, a)` cells in output order: token counts outer, exponents inner.
    pub fn cells(&self) -> Vec<(usize, f64)> {
        self.token_counts
            .iter()
            .flat_map(|&m| self.exponents.iter().map(move |&a| (m, a)))
            .collect()
    }

    fn prefixes_for(&self, tokens: usize) -> usize {
        self.prefixes_per_dataset
            .unwrap_or((tokens / TOKENS_PER_PREFIX).max(1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicateRecord {
    pub tokens: usize,
    pub exponent: f64,
    pub replicate: usize,
    pub seed: u64,
    pub observed_types: u64,
    pub good_turing: f64,
    pub horvitz_thompson: f64,
    pub pb_grid: f64,
    pub pb_exponent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub tokens: usize,
    pub exponent: f64,
    pub replicates: usize,
    pub mean_observed_types: f64,
    pub good_turing_mean: f64,
    pub good_turing_sd: f64,
    pub horvitz_thompson_mean: f64,
    pub horvitz_thompson_sd: f64,
    pub pb_grid_mean: f64,
    pub pb_grid_sd: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub records: Vec<ReplicateRecord>,
    pub summaries: Vec<CellSummary>,
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

impl CellSummary {
    fn from_records(tokens: usize, exponent: f64, records: &[ReplicateRecord]) -> Self {
        let column =
            |f: fn(&ReplicateRecord) -> f64| -> Vec<f64> { records.iter().map(f).collect() };
        let (gt_mean, gt_sd) = mean_sd(&column(|r| r.good_turing));
        let (ht_mean, ht_sd) = mean_sd(&column(|r| r.horvitz_thompson));
        let (pb_mean, pb_sd) = mean_sd(&column(|r| r.pb_grid));
        let (k_mean, _) = mean_sd(&column(|r| r.observed_types as f64));
        Self {
            tokens,
            exponent,
            replicates: records.len(),
            mean_observed_types: k_mean,
            good_turing_mean: gt_mean,
            good_turing_sd: gt_sd,
            horvitz_thompson_mean: ht_mean,
            horvitz_thompson_sd: ht_sd,
            pb_grid_mean: pb_mean,
            pb_grid_sd: pb_sd,
        }
    }
}

/// Runs one replicate: sample, estimate, record.
pub fn run_replicate(
    config: &ExperimentConfig,
    tokens: usize,
    exponent: f64,
    replicate: usize,
    seed: u64,
) -> Result<ReplicateRecord> {
    let dist = zipf_distribution(ZipfParams::new(exponent, config.n_types)?);
    let sample = sample_tokens(&dist, tokens, seed)?;
    let spectrum = frequency_spectrum(&sample)?;
    let observations = successive_prefixes(&sample, config.prefixes_for(tokens))?;
    let pb = mle_grid(&observations, &config.a_grid, config.n_max)?;
    Ok(ReplicateRecord {
        tokens,
        exponent,
        replicate,
        seed,
        observed_types: spectrum.types(),
        good_turing: good_turing(&spectrum)?.n_hat,
        horvitz_thompson: horvitz_thompson(&spectrum)?.n_hat,
        pb_grid: pb.n_hat,
        pb_exponent: pb.a_hat.unwrap_or(f64::NAN),
    })
}

/// Runs every cell; `on_cell` is called once per finished cell, in order.
pub fn run_experiment<F: FnMut(&CellSummary)>(
    config: &ExperimentConfig,
    mut on_cell: F,
) -> Result<ExperimentReport> {
    config.validate()?;
    let mut records = Vec::new();
    let mut summaries = Vec::new();
    for (cell, (tokens, exponent)) in config.cells().into_iter().enumerate() {
        let cell_records = (0..config.replicates)
            .into_par_iter()
            .map(|r| {
                let seed = mix_seed(config.seed, ((cell as u64) << 32) | r as u64);
                run_replicate(config, tokens, exponent, r, seed)
            })
            .collect::<Result<Vec<_>>>()?;
        let summary = CellSummary::from_records(tokens, exponent, &cell_records);
        on_cell(&summary);
        summaries.push(summary);
        records.extend(cell_records);
    }
    Ok(ExperimentReport { records, summaries })
}

fn write_rows<W: Write, T: Serialize>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

impl ExperimentReport {
    pub fn write_replicates_csv<W: Write>(&self, out: W) -> Result<()> {
        write_rows(&self.records, out)
    }

    pub fn write_summary_csv<W: Write>(&self, out: W) -> Result<()> {
        write_rows(&self.summaries, out)
    }
}
