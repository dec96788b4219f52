use rayon::prelude::*;
use serde::Serialize;

use super::likelihood::PbLikelihood;
use super::{EstimateResult, EstimatorKind, Observation};
use crate::error::{Error, Result};
use crate::numerics::maximize_on_grid;

/// Width below which the golden-section refinement of the exponent stops.
pub const REFINE_TOL: f64 = 1e-3;

/// Log-likelihoods within this distance are treated as tied.
pub const TIE_TOL: f64 = 1e-9;

/// Exponent grid `0, 0.1, ..., 2.0`.
pub fn default_a_grid() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 10.0).collect()
}

/// Best exponent and log-likelihood for one support size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub types: usize,
    pub exponent: f64,
    pub log_likelihood: f64,
}

pub(crate) fn validated_grid(a_grid: &[f64]) -> Result<Vec<f64>> {
    if a_grid.is_empty() {
        return Err(Error::domain("exponent grid is empty"));
    }
    if let Some(bad) = a_grid.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
        return Err(Error::domain(format!(
            "exponent grid values must be finite and >= 0, got {bad}"
        )));
    }
    let mut grid = a_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid)
}

/// Profile log-likelihood over `N` in `types`, maximizing over the exponent
/// at each `N` (grid scan, then golden-section refinement around the best
/// grid point).
pub fn profile_likelihood(
    observations: &[Observation],
    a_grid: &[f64],
    types: std::ops::RangeInclusive<usize>,
) -> Result<Vec<ProfilePoint>> {
    let grid = validated_grid(a_grid)?;
    let engine = PbLikelihood::new(observations);
    Ok(profile_with(&engine, &grid, types))
}

fn profile_with(
    engine: &PbLikelihood,
    grid: &[f64],
    types: std::ops::RangeInclusive<usize>,
) -> Vec<ProfilePoint> {
    types
        .into_par_iter()
        .map(|n| {
            let (exponent, log_likelihood) =
                maximize_on_grid(|a| engine.log_likelihood(a, n), grid, REFINE_TOL);
            ProfilePoint {
                types: n,
                exponent,
                log_likelihood,
            }
        })
        .collect()
}

/// Scans in increasing `N`; a later point wins only if it beats the current
/// best by more than [`TIE_TOL`].
fn select_best(profile: &[ProfilePoint]) -> ProfilePoint {
    let mut best = profile[0];
    for p in &profile[1..] {
        if p.log_likelihood > best.log_likelihood + TIE_TOL {
            best = *p;
        }
    }
    best
}

/// Maximum-likelihood estimate of `(a, N)` by brute force over
/// `N = max K_i ..= n_max`.
///
/// Log-likelihoods within [`TIE_TOL`] are resolved toward the smaller `N`.
pub fn mle_grid(
    observations: &[Observation],
    a_grid: &[f64],
    n_max: usize,
) -> Result<EstimateResult> {
    if observations.is_empty() {
        return Err(Error::domain("no observations"));
    }
    let grid = validated_grid(a_grid)?;
    let engine = PbLikelihood::new(observations);
    let n_min = engine.max_types() as usize;
    if n_max < n_min {
        return Err(Error::domain(format!(
            "n_max = {n_max} is below the largest observed type count {n_min}"
        )));
    }
    let profile = profile_with(&engine, &grid, n_min..=n_max);
    let best = select_best(&profile);
    Ok(EstimateResult {
        a_hat: Some(best.exponent),
        log_likelihood: Some(best.log_likelihood),
        ..EstimateResult::point(EstimatorKind::PbGrid, best.types as f64)
    })
}
