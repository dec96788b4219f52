//! Zipf family `p_k ∝ k^{-a}` on `{1, ..., N}`.

use serde::Serialize;

use crate::dist::WordDistribution;
use crate::error::{Error, Result};
use crate::numerics::CompensatedSum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZipfParams {
    exponent: f64,
    types: usize,
}

impl ZipfParams {
    /// `exponent` must be finite and non-negative, `types >= 1`.
    pub fn new(exponent: f64, types: usize) -> Result<Self> {
        if !(exponent.is_finite() && exponent >= 0.0) {
            return Err(Error::domain(format!(
                "Zipf exponent must be finite and >= 0, got {exponent}"
            )));
        }
        if types == 0 {
            return Err(Error::domain("Zipf support size must be at least 1"));
        }
        Ok(Self { exponent, types })
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn types(&self) -> usize {
        self.types
    }
}

/// Fills `out` with normalized Zipf probabilities, reusing precomputed
/// `ln k` values (`ln_ranks[k - 1] = ln k`).
pub(crate) fn zipf_probs_into(exponent: f64, ln_ranks: &[f64], out: &mut Vec<f64>) {
    out.clear();
    if exponent == 0.0 {
        let p = 1.0 / ln_ranks.len() as f64;
        out.resize(ln_ranks.len(), p);
        return;
    }
    let mut total = CompensatedSum::new();
    out.extend(ln_ranks.iter().map(|&l| {
        let w = (-exponent * l).exp();
        total.add(w);
        w
    }));
    let total = total.value();
    for p in out.iter_mut() {
        *p /= total;
    }
}

pub(crate) fn ln_ranks(types: usize) -> Vec<f64> {
    (1..=types).map(|k| (k as f64).ln()).collect()
}

/// Builds the Zipf word distribution for `params`.
pub fn zipf_distribution(params: ZipfParams) -> WordDistribution {
    let mut probs = Vec::with_capacity(params.types);
    zipf_probs_into(params.exponent, &ln_ranks(params.types), &mut probs);
    WordDistribution::from_normalized(probs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_when_exponent_is_zero() {
        let d = zipf_distribution(ZipfParams::new(0.0, 4).unwrap());
        assert_eq!(d.probs(), &[0.25; 4]);
    }

    #[test]
    fn harmonic_three() {
        let d = zipf_distribution(ZipfParams::new(1.0, 3).unwrap());
        let expected = [6.0 / 11.0, 3.0 / 11.0, 2.0 / 11.0];
        for (p, e) in d.probs().iter().zip(expected) {
            assert!((p - e).abs() < 1e-15);
        }
    }

    #[test]
    fn first_mass_is_inverse_harmonic_number() {
        // H_1000 to 20 digits, from an arbitrary-precision sum.
        let h_1000 = 7.485_470_860_550_345_f64;
        let d = zipf_distribution(ZipfParams::new(1.0, 1000).unwrap());
        assert!((d.probs()[0] - 1.0 / h_1000).abs() < 1e-15);
    }

    #[test]
    fn normalized_and_monotone() {
        for &(a, n) in &[(0.5, 10usize), (1.0, 1000), (2.3, 50_000), (1.0, 1_000_000)] {
            let d = zipf_distribution(ZipfParams::new(a, n).unwrap());
            let total: f64 = crate::numerics::compensated_sum(d.probs().iter().copied());
            assert!((total - 1.0).abs() < 1e-14, "a={a} n={n}: {total}");
            assert!(d.probs().windows(2).all(|w| w[0] > w[1]));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ZipfParams::new(-0.5, 10).is_err());
        assert!(ZipfParams::new(f64::NAN, 10).is_err());
        assert!(ZipfParams::new(f64::INFINITY, 10).is_err());
        assert!(ZipfParams::new(1.0, 0).is_err());
    }
}
