//! Expectation-maximization for the Zipf exponent and a Poisson prior on the
//! support size.
//!
//! The latent variable is `N ~ Poisson(lambda)`. The marginal likelihood
//! `L(a, lambda) = sum_N Pois(N; lambda) prod_i Q(K_i | M_i, Zipf(a, N))` is
//! evaluated on the truncated support `[max K_i, lambda + 10 sqrt(lambda) + 10]`,
//! re-truncated at every iteration.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::grid::{default_a_grid, validated_grid, REFINE_TOL};
use super::likelihood::PbLikelihood;
use super::{EstimateResult, EstimatorKind, Observation};
use crate::error::{Error, Result};
use crate::numerics::{ln_poisson_pmf, log_sum_exp, maximize_on_grid};

/// Posterior weights below this fraction of the total are left out of the
/// exponent update.
const NEGLIGIBLE_WEIGHT: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct EmOptions {
    pub a_init: f64,
    pub lambda_init: f64,
    /// Relative tolerance on the change in `lambda`.
    pub tol: f64,
    pub max_iter: usize,
    /// Grid scanned before the golden-section refinement in the exponent step.
    pub a_grid: Vec<f64>,
    /// Keep the exponent at `a_init` and only update `lambda`.
    pub fixed_exponent: bool,
}

impl Default for EmOptions {
    fn default() -> Self {
        Self {
            a_init: 1.0,
            lambda_init: 100.0,
            tol: 1e-6,
            max_iter: 500,
            a_grid: default_a_grid(),
            fixed_exponent: false,
        }
    }
}

/// Parameters and marginal log-likelihood at the start of one iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmStep {
    pub exponent: f64,
    pub lambda: f64,
    pub log_marginal: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmFit {
    pub estimate: EstimateResult,
    /// One entry per evaluated parameter pair, ending with the returned one.
    pub history: Vec<EmStep>,
}

/// Conditional log-likelihoods `log prod_i Q(K_i | M_i, Zipf(a, N))`, memoized.
struct Conditional {
    engine: PbLikelihood,
    cache: HashMap<(u64, usize), f64>,
}

impl Conditional {
    fn new(observations: &[Observation]) -> Self {
        Self {
            engine: PbLikelihood::new(observations),
            cache: HashMap::new(),
        }
    }

    fn n_min(&self) -> usize {
        self.engine.max_types() as usize
    }

    fn support(&self, lambda: f64) -> std::ops::RangeInclusive<usize> {
        let upper = (lambda + 10.0 * lambda.sqrt() + 10.0).ceil() as usize;
        self.n_min()..=upper.max(self.n_min())
    }

    fn values(&mut self, exponent: f64, support: std::ops::RangeInclusive<usize>) -> Vec<f64> {
        let key = exponent.to_bits();
        let missing: Vec<usize> = support
            .clone()
            .filter(|n| !self.cache.contains_key(&(key, *n)))
            .collect();
        let engine = &self.engine;
        let fresh: Vec<(usize, f64)> = missing
            .into_par_iter()
            .map(|n| (n, engine.log_likelihood(exponent, n)))
            .collect();
        for (n, v) in fresh {
            self.cache.insert((key, n), v);
        }
        support.map(|n| self.cache[&(key, n)]).collect()
    }

    /// Log joint `log Pois(N; lambda) + log L_N(a)` over the support of `lambda`.
    fn log_joint(&mut self, exponent: f64, lambda: f64) -> (usize, Vec<f64>) {
        let support = self.support(lambda);
        let start = *support.start();
        let conditional = self.values(exponent, support);
        let joint = conditional
            .iter()
            .enumerate()
            .map(|(j, &c)| ln_poisson_pmf((start + j) as u64, lambda) + c)
            .collect();
        (start, joint)
    }

    fn log_marginal(&mut self, exponent: f64, lambda: f64) -> f64 {
        log_sum_exp(&self.log_joint(exponent, lambda).1)
    }

    /// Best exponent for fixed `lambda`, never worse than `incumbent`.
    fn profile_exponent(&mut self, lambda: f64, grid: &[f64], incumbent: f64) -> (f64, f64) {
        let mut best = (incumbent, self.log_marginal(incumbent, lambda));
        let found = maximize_on_grid(|a| self.log_marginal(a, lambda), grid, REFINE_TOL);
        if found.1 > best.1 {
            best = found;
        }
        best
    }
}

/// Marginal log-likelihood `log L(a, lambda)` on the truncated support.
pub fn log_marginal_likelihood(
    observations: &[Observation],
    exponent: f64,
    lambda: f64,
) -> Result<f64> {
    validate(observations, exponent, lambda)?;
    Ok(Conditional::new(observations).log_marginal(exponent, lambda))
}

fn validate(observations: &[Observation], exponent: f64, lambda: f64) -> Result<()> {
    if observations.is_empty() {
        return Err(Error::domain("no observations"));
    }
    if !(exponent.is_finite() && exponent >= 0.0) {
        return Err(Error::domain(format!(
            "exponent must be finite and >= 0, got {exponent}"
        )));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::domain(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    Ok(())
}

/// Fits `(a, lambda)` by EM and reports `n_hat = lambda_hat`.
///
/// E-step: posterior `w(N) ∝ Pois(N; lambda) L_N(a)` on the truncated support.
/// M-step: `lambda <- sum_N N w(N)`, then `a` maximizes
/// `sum_N w(N) log L_N(a)` (grid plus golden-section; the previous `a` is kept
/// if nothing better is found). Iteration stops once
/// `|lambda_new - lambda| < tol * lambda`.
///
/// `std_err` is `1 / sqrt(-d2)` where `d2` is the central second difference
/// of the profile log-likelihood `max_a log L(a, lambda)` with step
/// `max(1, lambda / 100)`; it is absent when the curvature is not negative.
pub fn mle_em_poisson(observations: &[Observation], options: &EmOptions) -> Result<EmFit> {
    validate(observations, options.a_init, options.lambda_init)?;
    if options.tol.is_nan() || options.tol <= 0.0 {
        return Err(Error::domain("tolerance must be positive"));
    }
    let grid = validated_grid(&options.a_grid)?;
    let mut model = Conditional::new(observations);

    let mut exponent = options.a_init;
    let mut lambda = options.lambda_init;
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < options.max_iter {
        iterations += 1;
        let (start, joint) = model.log_joint(exponent, lambda);
        let log_marginal = log_sum_exp(&joint);
        history.push(EmStep {
            exponent,
            lambda,
            log_marginal,
        });
        if log_marginal == f64::NEG_INFINITY {
            return Err(Error::Numerical(
                "marginal likelihood underflowed on the truncated support".into(),
            ));
        }
        let weights: Vec<f64> = joint.iter().map(|&j| (j - log_marginal).exp()).collect();
        let next_lambda: f64 = weights
            .iter()
            .enumerate()
            .map(|(j, w)| (start + j) as f64 * w)
            .sum();

        if !options.fixed_exponent {
            let relevant: Vec<(usize, f64)> = weights
                .iter()
                .enumerate()
                .filter(|(_, &w)| w > NEGLIGIBLE_WEIGHT)
                .map(|(j, &w)| (start + j, w))
                .collect();
            let lo = relevant.first().map_or(start, |r| r.0);
            let hi = relevant.last().map_or(start, |r| r.0);
            let mut expected = |a: f64| {
                let values = model.values(a, lo..=hi);
                relevant
                    .iter()
                    .map(|&(n, w)| w * values[n - lo])
                    .sum::<f64>()
            };
            let current = expected(exponent);
            let (a, value) = maximize_on_grid(&mut expected, &grid, REFINE_TOL);
            if value > current {
                exponent = a;
            }
        }

        let change = (next_lambda - lambda).abs();
        lambda = next_lambda;
        if change < options.tol * lambda {
            converged = true;
            break;
        }
    }

    let log_marginal = model.log_marginal(exponent, lambda);
    history.push(EmStep {
        exponent,
        lambda,
        log_marginal,
    });

    let std_err = {
        let mut profile = |l: f64| {
            if options.fixed_exponent {
                model.log_marginal(exponent, l)
            } else {
                model.profile_exponent(l, &grid, exponent).1
            }
        };
        let mut h = (lambda / 100.0).max(1.0);
        if lambda - h <= 0.0 {
            h = lambda / 2.0;
        }
        let centre = profile(lambda).max(log_marginal);
        let d2 = (profile(lambda + h) - 2.0 * centre + profile(lambda - h)) / (h * h);
        (d2 < 0.0 && d2.is_finite()).then(|| 1.0 / (-d2).sqrt())
    };

    Ok(EmFit {
        estimate: EstimateResult {
            a_hat: Some(exponent),
            lambda_hat: Some(lambda),
            log_likelihood: Some(log_marginal),
            std_err,
            converged: Some(converged),
            iterations: Some(iterations),
            ..EstimateResult::point(EstimatorKind::PbEm, lambda)
        },
        history,
    })
}
