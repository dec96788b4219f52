//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's distribution code.

#![allow(dead_code)]

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic uniform generator for test fixtures.
pub struct Fixture(ChaCha8Rng);

impl Fixture {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        lo + (self.0.next_u64() % (hi_inclusive - lo + 1) as u64) as usize
    }

    /// Positive weights in [0.05, 1.05), normalized.
    pub fn distribution(&mut self, n: usize) -> Vec<f64> {
        let w: Vec<f64> = (0..n).map(|_| 0.05 + self.uniform()).collect();
        let total: f64 = w.iter().sum();
        w.iter().map(|x| x / total).collect()
    }
}

/// `P(K = k)` for `k = 0..=N` by walking all `N^M` token sequences.
pub fn enumerate_type_counts(probs: &[f64], m: usize) -> Vec<f64> {
    let n = probs.len();
    let mut out = vec![0.0; n + 1];
    let mut seq = vec![0usize; m];
    loop {
        let mut mass = 1.0;
        let mut seen = 0u64;
        for &t in &seq {
            mass *= probs[t];
            seen |= 1 << t;
        }
        out[seen.count_ones() as usize] += mass;
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == m {
                return out;
            }
            seq[pos] += 1;
            if seq[pos] < n {
                break;
            }
            seq[pos] = 0;
            pos += 1;
        }
    }
}

/// Probability that the observed type set is exactly `mask`, by enumeration.
pub fn enumerate_subset_prob(probs: &[f64], mask: u64, m: usize) -> f64 {
    let n = probs.len();
    let mut total = 0.0;
    let mut seq = vec![0usize; m];
    loop {
        let mut mass = 1.0;
        let mut seen = 0u64;
        for &t in &seq {
            mass *= probs[t];
            seen |= 1 << t;
        }
        if seen == mask {
            total += mass;
        }
        let mut pos = 0;
        loop {
            if pos == m {
                return total;
            }
            seq[pos] += 1;
            if seq[pos] < n {
                break;
            }
            seq[pos] = 0;
            pos += 1;
        }
    }
}

/// Chapman–Kolmogorov forward recursion over token count: table of
/// `P(observed set = s | m)` indexed by bitmask, for every `m = 0..=max_m`.
pub fn chapman_kolmogorov(probs: &[f64], max_m: usize) -> Vec<Vec<f64>> {
    let n = probs.len();
    let size = 1usize << n;
    let set_mass: Vec<f64> = (0..size)
        .map(|mask| {
            (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| probs[i])
                .sum()
        })
        .collect();
    let mut tables = vec![vec![0.0; size]];
    tables[0][0] = 1.0;
    for m in 1..=max_m {
        let prev = &tables[m - 1];
        let next: Vec<f64> = (0..size)
            .map(|mask| {
                let mut v = prev[mask] * set_mass[mask];
                for i in 0..n {
                    if mask >> i & 1 == 1 {
                        v += prev[mask & !(1 << i)] * probs[i];
                    }
                }
                v
            })
            .collect();
        tables.push(next);
    }
    tables
}

fn stirling2(m: usize, k: usize) -> u128 {
    let mut s = vec![vec![0u128; k + 1]; m + 1];
    s[0][0] = 1;
    for i in 1..=m {
        for j in 1..=k.min(i) {
            s[i][j] = j as u128 * s[i - 1][j] + s[i - 1][j - 1];
        }
    }
    s[m][k]
}

/// Occupancy law for uniform sampling: `C(N,K) S(M,K) K! / N^M`, with the
/// numerator and denominator formed exactly in integers.
pub fn uniform_occupancy(n: usize, m: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    // C(N, K) K! is the falling factorial N (N-1) ... (N-K+1).
    let falling: u128 = (0..k).map(|i| (n - i) as u128).product();
    let numerator = falling * stirling2(m, k);
    let denominator = (n as u128).pow(m as u32);
    let g = gcd(numerator, denominator);
    (numerator / g) as f64 / (denominator / g) as f64
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Poisson-binomial PMF by summing the product over all `2^N` subsets.
pub fn enumerate_poisson_binomial(q: &[f64]) -> Vec<f64> {
    let n = q.len();
    let mut out = vec![0.0; n + 1];
    for mask in 0u64..(1u64 << n) {
        let mut mass = 1.0;
        for (i, &qi) in q.iter().enumerate() {
            mass *= if mask >> i & 1 == 1 { qi } else { 1.0 - qi };
        }
        out[mask.count_ones() as usize] += mass;
    }
    out
}

/// Plain Poisson-binomial recursion, used where enumeration is too large.
pub fn direct_poisson_binomial(q: &[f64]) -> Vec<f64> {
    let mut dp = vec![1.0];
    for &qi in q {
        let mut next = vec![0.0; dp.len() + 1];
        for (k, &v) in dp.iter().enumerate() {
            next[k] += v * (1.0 - qi);
            next[k + 1] += v * qi;
        }
        dp = next;
    }
    dp
}

/// Zipf probabilities computed naively (for oracles, not production).
pub fn zipf_probs(a: f64, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (1..=n).map(|k| (k as f64).powf(-a)).collect();
    let total: f64 = w.iter().sum();
    w.iter().map(|x| x / total).collect()
}

/// Log-likelihood of `(K, M)` pairs under `Zipf(a, N)`, via the plain
/// recursion with `q = 1 - (1 - p)^M`.
pub fn oracle_log_likelihood(obs: &[(usize, usize)], a: f64, n: usize) -> f64 {
    let p = zipf_probs(a, n);
    obs.iter()
        .map(|&(k, m)| {
            if k > n {
                return f64::NEG_INFINITY;
            }
            let q: Vec<f64> = p.iter().map(|pi| 1.0 - (1.0 - pi).powi(m as i32)).collect();
            direct_poisson_binomial(&q)[k].ln()
        })
        .sum()
}

/// `log sum_N Pois(N; lambda) prod_i Q(K_i | M_i, Zipf(a, N))` with the sum
/// taken over `N` in `n_lo..=n_hi`.
pub fn oracle_log_marginal(
    obs: &[(usize, usize)],
    a: f64,
    lambda: f64,
    n_lo: usize,
    n_hi: usize,
) -> f64 {
    let terms: Vec<f64> = (n_lo..=n_hi)
        .map(|n| {
            let ln_fact: f64 = (1..=n).map(|i| (i as f64).ln()).sum();
            n as f64 * lambda.ln() - lambda - ln_fact + oracle_log_likelihood(obs, a, n)
        })
        .collect();
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// Median of a slice (mean of the middle pair for even lengths).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
