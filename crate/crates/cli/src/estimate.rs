use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args};
use typetoken::corpus::read_observations_csv;
use typetoken::estimators::{default_a_grid, EmOptions};
use typetoken::experiment::TOKENS_PER_PREFIX;
use typetoken::{
    frequency_spectrum, good_turing, horvitz_thompson, mle_em_poisson, mle_grid,
    successive_prefixes, tokenize, EstimateResult, EstimatorKind, FrequencySpectrum, Observation,
};

use crate::args::{parse_grid, Format, Grid};
use crate::output::emit;

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["text", "spectrum", "observations"])))]
pub struct EstimateArgs {
    /// UTF-8 text file, tokenized by lowercasing and splitting on non-alphanumerics.
    #[arg(long)]
    text: Option<PathBuf>,
    /// Spectrum CSV with header `k,f_k`.
    #[arg(long)]
    spectrum: Option<PathBuf>,
    /// Observation CSV with header `K,M`.
    #[arg(long)]
    observations: Option<PathBuf>,
    /// Comma-separated estimators: gt, ht, pb-grid, pb-em.
    #[arg(long, default_value = "gt,ht,pb-grid", value_delimiter = ',')]
    estimators: Vec<EstimatorKind>,
    /// Number of successive-prefix datasets built from a text (default M/50).
    #[arg(long)]
    prefixes: Option<usize>,
    /// Largest support size tried by pb-grid (default 2 * max K).
    #[arg(long)]
    n_max: Option<usize>,
    /// Exponent grid, `start:step:end` or a comma list.
    #[arg(long, value_parser = parse_grid)]
    a_grid: Option<Grid>,
    /// Initial exponent for pb-em.
    #[arg(long, default_value_t = 1.0)]
    a_init: f64,
    /// Initial Poisson mean for pb-em (default 1.5 * max K).
    #[arg(long)]
    lambda_init: Option<f64>,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write `estimates.json` / `estimates.csv` into this directory instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Inputs {
    spectrum: Option<FrequencySpectrum>,
    observations: Option<Vec<Observation>>,
}

fn load(args: &EstimateArgs) -> Result<Inputs> {
    if let Some(path) = &args.text {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let seq = tokenize(&text);
        let spectrum = frequency_spectrum(&seq)?;
        let n = args
            .prefixes
            .unwrap_or((seq.len() / TOKENS_PER_PREFIX).max(1));
        let observations = successive_prefixes(&seq, n)?;
        return Ok(Inputs {
            spectrum: Some(spectrum),
            observations: Some(observations),
        });
    }
    if let Some(path) = &args.spectrum {
        let file = fs::File::open(path).with_context(|| format!("reading {}", path.display()))?;
        return Ok(Inputs {
            spectrum: Some(FrequencySpectrum::read_csv(file)?),
            observations: None,
        });
    }
    let path = args.observations.as_ref().expect("clap enforces one input");
    let file = fs::File::open(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Inputs {
        spectrum: None,
        observations: Some(read_observations_csv(file)?),
    })
}

fn need<'a, T>(value: &'a Option<T>, kind: EstimatorKind, what: &str) -> Result<&'a T> {
    match value {
        Some(v) => Ok(v),
        None => bail!("estimator {kind} needs {what}; pass --text or a matching input file"),
    }
}

pub fn run(args: EstimateArgs) -> Result<()> {
    let inputs = load(&args)?;
    let grid = args.a_grid.clone().map_or_else(default_a_grid, |g| g.0);
    let mut results: BTreeMap<&'static str, EstimateResult> = BTreeMap::new();
    for &kind in &args.estimators {
        let result = match kind {
            EstimatorKind::GoodTuring => good_turing(need(&inputs.spectrum, kind, "a spectrum")?)?,
            EstimatorKind::HorvitzThompson => {
                horvitz_thompson(need(&inputs.spectrum, kind, "a spectrum")?)?
            }
            EstimatorKind::PbGrid => {
                let obs = need(&inputs.observations, kind, "observations")?;
                let max_k = obs.iter().map(Observation::types).max().unwrap_or(0) as usize;
                mle_grid(obs, &grid, args.n_max.unwrap_or(2 * max_k))?
            }
            EstimatorKind::PbEm => {
                let obs = need(&inputs.observations, kind, "observations")?;
                let max_k = obs.iter().map(Observation::types).max().unwrap_or(0) as f64;
                let options = EmOptions {
                    a_init: args.a_init,
                    lambda_init: args.lambda_init.unwrap_or(1.5 * max_k),
                    tol: args.tol,
                    max_iter: args.max_iter,
                    a_grid: grid.clone(),
                    fixed_exponent: false,
                };
                mle_em_poisson(obs, &options)?.estimate
            }
        };
        results.insert(kind.tag(), result);
    }

    match args.format {
        Format::Json => {
            let mut buf = serde_json::to_vec_pretty(&results)?;
            buf.push(b'\n');
            emit(args.out.as_deref(), "estimates.json", &buf)
        }
        Format::Csv => {
            let mut buf =
                String::from("estimator,n_hat,a_hat,lambda_hat,log_likelihood,std_err,converged\n");
            let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            for (tag, r) in &results {
                buf.push_str(&format!(
                    "{tag},{},{},{},{},{},{}\n",
                    r.n_hat,
                    opt(r.a_hat),
                    opt(r.lambda_hat),
                    opt(r.log_likelihood),
                    opt(r.std_err),
                    r.converged.map(|c| c.to_string()).unwrap_or_default()
                ));
            }
            emit(args.out.as_deref(), "estimates.csv", buf.as_bytes())
        }
    }
}
