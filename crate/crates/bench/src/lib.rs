//! Shared fixtures for the benchmarks.

use typetoken::{sample_tokens, successive_prefixes, zipf_distribution, Observation, ZipfParams};

/// Successive-prefix observations from one seeded Zipf sample.
pub fn zipf_observations(
    exponent: f64,
    types: usize,
    tokens: usize,
    prefixes: usize,
) -> Vec<Observation> {
    let dist = zipf_distribution(ZipfParams::new(exponent, types).expect("valid parameters"));
    let seq = sample_tokens(&dist, tokens, 42).expect("valid sample size");
    successive_prefixes(&seq, prefixes).expect("valid prefix count")
}
