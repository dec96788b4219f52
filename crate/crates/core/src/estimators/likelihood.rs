use std::collections::BTreeMap;

use super::{max_observed_types, Observation};
use crate::dist::poisson_binomial::PbWorkspace;
use crate::zipf::{ln_ranks, zipf_probs_into, ZipfParams};

/// Observations sharing one token count; they share one Poisson-binomial PMF.
#[derive(Debug, Clone)]
struct TokenGroup {
    tokens: u64,
    types: Vec<u64>,
    k_lo: usize,
    k_hi: usize,
}

/// Poisson-binomial log-likelihood of a fixed set of observations,
/// evaluated over the Zipf family.
///
/// Observations are grouped by token count so that each distinct `M` costs
/// one convolution per `(a, N)`; only the band of `K` values that can reach an
/// observed `K` is carried through the recursion.
#[derive(Debug, Clone)]
pub struct PbLikelihood {
    groups: Vec<TokenGroup>,
    max_types: u64,
}

impl PbLikelihood {
    pub fn new(observations: &[Observation]) -> Self {
        let mut by_tokens: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for o in observations {
            by_tokens.entry(o.tokens()).or_default().push(o.types());
        }
        let groups = by_tokens
            .into_iter()
            .map(|(tokens, types)| {
                let k_lo = *types.iter().min().expect("nonempty group") as usize;
                let k_hi = *types.iter().max().expect("nonempty group") as usize;
                TokenGroup {
                    tokens,
                    types,
                    k_lo,
                    k_hi,
                }
            })
            .collect();
        Self {
            groups,
            max_types: max_observed_types(observations),
        }
    }

    /// Largest observed `K`; any `N` below it has zero likelihood.
    pub fn max_types(&self) -> u64 {
        self.max_types
    }

    /// `sum_i log Q(K_i | M_i, Zipf(a, N))`; `-inf` when some `K_i > N`.
    pub fn log_likelihood(&self, exponent: f64, types: usize) -> f64 {
        if self.max_types > types as u64 {
            return f64::NEG_INFINITY;
        }
        let mut probs = Vec::with_capacity(types);
        zipf_probs_into(exponent, &ln_ranks(types), &mut probs);
        let log_unseen_per_token: Vec<f64> = probs.iter().map(|&p| (-p).ln_1p()).collect();

        // Observation and non-observation probabilities after `m_prev` tokens,
        // advanced group to group with `q' = q + u * q_d` and `u' = u * u_d`
        // (both exact identities, free of cancellation) so that only one
        // `exp`/`expm1` pair per type and distinct increment is needed.
        let mut seen = vec![0.0; types];
        let mut unseen = vec![1.0; types];
        let mut increments: Vec<(u64, Vec<f64>, Vec<f64>)> = Vec::new();
        let mut m_prev = 0;
        let mut ws = PbWorkspace::default();
        let mut total = 0.0;
        for g in &self.groups {
            let d = g.tokens - m_prev;
            m_prev = g.tokens;
            let idx = match increments.iter().position(|(inc, _, _)| *inc == d) {
                Some(i) => i,
                None => {
                    let (qd, ud) = log_unseen_per_token
                        .iter()
                        .map(|&l| {
                            let x = d as f64 * l;
                            (-x.exp_m1(), x.exp())
                        })
                        .unzip();
                    increments.push((d, qd, ud));
                    increments.len() - 1
                }
            };
            let (_, qd, ud) = &increments[idx];
            for (((q, u), &a), &b) in seen.iter_mut().zip(unseen.iter_mut()).zip(qd).zip(ud) {
                *q += *u * a;
                *u *= b;
            }
            let dp = ws.run(
                seen.iter().copied().zip(unseen.iter().copied()),
                types,
                g.k_lo,
                g.k_hi,
            );
            for &k in &g.types {
                let mass = dp[k as usize];
                if mass <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                total += mass.ln();
            }
        }
        total
    }
}

/// Poisson-binomial log-likelihood of `observations` under `Zipf(a, N)`.
///
/// An empty observation list has log-likelihood 0.
pub fn pb_log_likelihood(observations: &[Observation], params: ZipfParams) -> f64 {
    PbLikelihood::new(observations).log_likelihood(params.exponent(), params.types())
}
