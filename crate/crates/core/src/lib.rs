//! Type-token statistics: the exact and Poisson-binomial distributions of
//! the number of distinct types among `M` tokens, and estimators of the
//! latent number of types built on them.
//!
//! ```
//! use typetoken::{pb_pmf, pb_success_probs, WordDistribution};
//!
//! let dist = WordDistribution::uniform(2).unwrap();
//! let pmf = pb_pmf(&pb_success_probs(&dist, 2).unwrap()).unwrap();
//! assert_eq!(pmf.masses(), &[0.0625, 0.375, 0.5625]);
//! ```

pub mod corpus;
pub mod dist;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod numerics;
pub mod zipf;

pub use corpus::{
    frequency_spectrum, sample_tokens, successive_prefixes, tokenize, FrequencySpectrum,
    TokenSequence,
};
pub use dist::{
    exact_mgf, exact_subset_prob, exact_type_token_pmf, pb_moments, pb_pmf, pb_success_probs,
    poisson_unseen_approx, LeCamApprox, SuccessProbs, TypeCountPmf, WordDistribution,
};
pub use error::{Error, Result};
pub use estimators::{
    good_turing, horvitz_thompson, mle_em_poisson, mle_grid, pb_log_likelihood, EmOptions,
    EstimateResult, EstimatorKind, Observation,
};
pub use experiment::{run_experiment, ExperimentConfig};
pub use zipf::{zipf_distribution, ZipfParams};
