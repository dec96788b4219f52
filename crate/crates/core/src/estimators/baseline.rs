use super::{EstimateResult, EstimatorKind};
use crate::corpus::FrequencySpectrum;
use crate::error::{Error, Result};
use crate::numerics::{one_minus_pow_complement, CompensatedSum};

fn require_nonempty(spectrum: &FrequencySpectrum) -> Result<()> {
    if spectrum.is_empty() {
        return Err(Error::domain("frequency spectrum is empty"));
    }
    Ok(())
}

/// Good–Turing estimate `f_1 + K`.
pub fn good_turing(spectrum: &FrequencySpectrum) -> Result<EstimateResult> {
    require_nonempty(spectrum)?;
    let n_hat = (spectrum.singletons() + spectrum.types()) as f64;
    Ok(EstimateResult::point(EstimatorKind::GoodTuring, n_hat))
}

/// Horvitz–Thompson estimate `sum_k f_k / (1 - (1 - k/M)^M)`.
///
/// Each type seen `k` times is weighted by the inverse of the probability
/// that a type of frequency `k/M` shows up in `M` draws.
pub fn horvitz_thompson(spectrum: &FrequencySpectrum) -> Result<EstimateResult> {
    require_nonempty(spectrum)?;
    let m = spectrum.tokens();
    let mut acc = CompensatedSum::new();
    for (k, f) in spectrum.iter() {
        let inclusion = one_minus_pow_complement(k as f64 / m as f64, m);
        acc.add(f as f64 / inclusion);
    }
    Ok(EstimateResult::point(
        EstimatorKind::HorvitzThompson,
        acc.value(),
    ))
}
