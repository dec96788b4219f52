//! Estimators of the latent number of types.
//!
//! [`good_turing`] and [`horvitz_thompson`] work from a frequency spectrum.
//! [`mle_grid`] and [`mle_em_poisson`] maximize the Poisson-binomial
//! likelihood of `(K, M)` observations over the Zipf family.

mod baseline;
mod em;
mod grid;
mod likelihood;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use baseline::{good_turing, horvitz_thompson};
pub use em::{log_marginal_likelihood, mle_em_poisson, EmFit, EmOptions, EmStep};
pub use grid::{default_a_grid, mle_grid, profile_likelihood, ProfilePoint, REFINE_TOL, TIE_TOL};
pub use likelihood::{pb_log_likelihood, PbLikelihood};

/// A `(K, M)` pair: `K` distinct types among `M` tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Observation {
    #[serde(rename = "K")]
    types: u64,
    #[serde(rename = "M")]
    tokens: u64,
}

impl Observation {
    /// Requires `1 <= types <= tokens`.
    pub fn new(types: u64, tokens: u64) -> Result<Self> {
        if types == 0 || types > tokens {
            return Err(Error::domain(format!(
                "observation needs 1 <= K <= M, got K = {types}, M = {tokens}"
            )));
        }
        Ok(Self { types, tokens })
    }

    pub fn types(&self) -> u64 {
        self.types
    }

    pub fn tokens(&self) -> u64 {
        self.tokens
    }
}

pub(crate) fn max_observed_types(observations: &[Observation]) -> u64 {
    observations
        .iter()
        .map(Observation::types)
        .max()
        .unwrap_or(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EstimatorKind {
    #[serde(rename = "gt")]
    GoodTuring,
    #[serde(rename = "ht")]
    HorvitzThompson,
    #[serde(rename = "pb-grid")]
    PbGrid,
    #[serde(rename = "pb-em")]
    PbEm,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 4] = [
        EstimatorKind::GoodTuring,
        EstimatorKind::HorvitzThompson,
        EstimatorKind::PbGrid,
        EstimatorKind::PbEm,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            EstimatorKind::GoodTuring => "gt",
            EstimatorKind::HorvitzThompson => "ht",
            EstimatorKind::PbGrid => "pb-grid",
            EstimatorKind::PbEm => "pb-em",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| Error::Parse(format!("unknown estimator `{s}`")))
    }
}

/// Output of any estimator. Optional fields are filled only by the
/// estimators that produce them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateResult {
    pub estimator: EstimatorKind,
    /// Point estimate of the latent number of types.
    pub n_hat: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_likelihood: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_err: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
}

impl EstimateResult {
    pub(crate) fn point(estimator: EstimatorKind, n_hat: f64) -> Self {
        Self {
            estimator,
            n_hat,
            a_hat: None,
            lambda_hat: None,
            log_likelihood: None,
            std_err: None,
            converged: None,
            iterations: None,
        }
    }
}
