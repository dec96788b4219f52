//! Token sequences, frequency spectra, successive-prefix datasets and
//! synthetic sampling.
//!
//! Type IDs are 1-based. [`tokenize`] assigns IDs in order of first
//! appearance; [`sample_tokens`] uses the rank in the sampling distribution.
//!
//! Synthetic sampling draws from ChaCha20 (`rand_chacha::ChaCha20Rng`) seeded
//! with `seed_from_u64`; each uniform variate is the top 53 bits of one
//! `next_u64` output scaled by `2^-53`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{Read, Write};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::dist::WordDistribution;
use crate::error::{Error, Result};
use crate::estimators::Observation;
use crate::numerics::CompensatedSum;

/// Version tag of the tokenization rule implemented by [`tokenize`].
pub const TOKENIZER_VERSION: &str = "lower-alnum-v1";

/// An ordered sequence of tokens, stored as 1-based type IDs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSequence {
    ids: Vec<u32>,
    vocab: Option<Vec<String>>,
}

impl TokenSequence {
    pub fn from_ids(ids: Vec<u32>) -> Result<Self> {
        if ids.contains(&0) {
            return Err(Error::domain("type IDs are 1-based"));
        }
        Ok(Self { ids, vocab: None })
    }

    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// The word behind each token, when the sequence came from text.
    pub fn words(&self) -> Option<impl Iterator<Item = &str> + '_> {
        let vocab = self.vocab.as_ref()?;
        Some(
            self.ids
                .iter()
                .map(move |&id| vocab[id as usize - 1].as_str()),
        )
    }

    /// Distinct words in order of first appearance.
    pub fn vocabulary(&self) -> Option<&[String]> {
        self.vocab.as_deref()
    }
}

/// Lowercases `text` and splits it on every maximal run of characters that
/// are not alphanumeric. Empty pieces are dropped.
pub fn tokenize(text: &str) -> TokenSequence {
    let lowered = text.to_lowercase();
    let mut index: HashMap<&str, u32> = HashMap::new();
    let mut vocab: Vec<String> = Vec::new();
    let mut ids = Vec::new();
    for word in lowered
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
    {
        let id = *index.entry(word).or_insert_with(|| {
            vocab.push(word.to_owned());
            vocab.len() as u32
        });
        ids.push(id);
    }
    TokenSequence {
        ids,
        vocab: Some(vocab),
    }
}

/// Counts `f_k` of types seen exactly `k` times.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FrequencySpectrum {
    counts: BTreeMap<u64, u64>,
}

impl FrequencySpectrum {
    /// Builds from `(k, f_k)` pairs. Zero counts are dropped; `k = 0` and
    /// repeated `k` are rejected.
    pub fn from_counts<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for (k, f) in pairs {
            if k == 0 {
                return Err(Error::domain("occurrence count k must be at least 1"));
            }
            if counts.contains_key(&k) {
                return Err(Error::domain(format!("occurrence count {k} listed twice")));
            }
            if f > 0 {
                counts.insert(k, f);
            }
        }
        Ok(Self { counts })
    }

    /// `f_k`, zero when absent.
    pub fn count(&self, k: u64) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// Number of singletons `f_1`.
    pub fn singletons(&self) -> u64 {
        self.count(1)
    }

    /// Observed types `K = sum f_k`.
    pub fn types(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Tokens `M = sum k f_k`.
    pub fn tokens(&self) -> u64 {
        self.counts.iter().map(|(k, f)| k * f).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Nonzero `(k, f_k)` pairs in increasing `k`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&k, &f)| (k, f))
    }

    /// Writes CSV with header `k,f_k`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv_writer(out);
        w.write_record(["k", "f_k"])?;
        for (k, f) in self.iter() {
            w.write_record([k.to_string(), f.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            k: u64,
            f_k: u64,
        }
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(input);
        expect_headers(&mut reader, &["k", "f_k"])?;
        let mut pairs = Vec::new();
        for row in reader.deserialize() {
            let row: Row = row?;
            pairs.push((row.k, row.f_k));
        }
        Self::from_counts(pairs)
    }
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn expect_headers<R: Read>(reader: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let headers = reader.headers()?;
    if headers.iter().ne(expected.iter().copied()) {
        return Err(Error::Parse(format!(
            "expected header `{}`, found `{}`",
            expected.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    Ok(())
}

/// Census of how many types occur exactly `k` times.
pub fn frequency_spectrum(seq: &TokenSequence) -> Result<FrequencySpectrum> {
    if seq.is_empty() {
        return Err(Error::domain(
            "cannot build a spectrum from an empty sequence",
        ));
    }
    let mut per_type: HashMap<u32, u64> = HashMap::new();
    for &id in seq.ids() {
        *per_type.entry(id).or_default() += 1;
    }
    let mut counts = BTreeMap::new();
    for occurrences in per_type.into_values() {
        *counts.entry(occurrences).or_default() += 1;
    }
    Ok(FrequencySpectrum { counts })
}

/// Nested datasets `D_i` made of the first `floor(M / n) * i` tokens,
/// `i = 1..=n`, each reduced to its `(K_i, M_i)` pair.
pub fn successive_prefixes(seq: &TokenSequence, n: usize) -> Result<Vec<Observation>> {
    let total = seq.len();
    if n == 0 || n > total {
        return Err(Error::domain(format!(
            "prefix count {n} must lie in 1..={total}"
        )));
    }
    let step = total / n;
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n);
    for (pos, &id) in seq.ids().iter().enumerate() {
        seen.insert(id);
        let len = pos + 1;
        if len % step == 0 {
            out.push(Observation::new(seen.len() as u64, len as u64)?);
            if out.len() == n {
                break;
            }
        }
    }
    Ok(out)
}

/// `m` i.i.d. draws from `dist` by inverse-CDF lookup on a seeded ChaCha20
/// stream.
pub fn sample_tokens(dist: &WordDistribution, m: usize, seed: u64) -> Result<TokenSequence> {
    if m == 0 {
        return Err(Error::domain("token count M must be at least 1"));
    }
    let mut acc = CompensatedSum::new();
    let cdf: Vec<f64> = dist
        .probs()
        .iter()
        .map(|&p| {
            acc.add(p);
            acc.value()
        })
        .collect();
    let last = cdf.len() - 1;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let ids = (0..m)
        .map(|_| {
            let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            let idx = cdf.partition_point(|&c| c <= u).min(last);
            idx as u32 + 1
        })
        .collect();
    Ok(TokenSequence { ids, vocab: None })
}

/// Writes observations as CSV with header `K,M`.
pub fn write_observations_csv<W: Write>(observations: &[Observation], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["K", "M"])?;
    for o in observations {
        w.write_record([o.types().to_string(), o.tokens().to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_observations_csv<R: Read>(input: R) -> Result<Vec<Observation>> {
    #[derive(Deserialize)]
    struct Row {
        #[serde(rename = "K")]
        k: u64,
        #[serde(rename = "M")]
        m: u64,
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    expect_headers(&mut reader, &["K", "M"])?;
    let mut out = Vec::new();
    for row in reader.deserialize() {
        let row: Row = row?;
        out.push(Observation::new(row.k, row.m)?);
    }
    Ok(out)
}

/// Summary of a token sequence handy for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SequenceSummary {
    pub tokens: u64,
    pub types: u64,
    pub singletons: u64,
}

impl From<&FrequencySpectrum> for SequenceSummary {
    fn from(s: &FrequencySpectrum) -> Self {
        Self {
            tokens: s.tokens(),
            types: s.types(),
            singletons: s.singletons(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(seq: &TokenSequence) -> Vec<&str> {
        seq.words().unwrap().collect()
    }

    #[test]
    fn tokenizer_examples() {
        assert_eq!(
            words(&tokenize("The cat the CAT")),
            ["the", "cat", "the", "cat"]
        );
        assert_eq!(
            words(&tokenize("Alice's\u{2014}Adventures!")),
            ["alice", "s", "adventures"]
        );
        assert!(tokenize("").is_empty());
        assert!(tokenize(" -- ,,, ").is_empty());
    }

    #[test]
    fn tokenizer_ids_follow_first_appearance() {
        let seq = tokenize("b a b c");
        assert_eq!(seq.ids(), &[1, 2, 1, 3]);
        assert_eq!(seq.vocabulary().unwrap(), ["b", "a", "c"]);
    }

    #[test]
    fn spectrum_examples() {
        let s = frequency_spectrum(&tokenize("a b a c")).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), [(1, 2), (2, 1)]);
        assert_eq!((s.tokens(), s.types()), (4, 3));

        let same = TokenSequence::from_ids(vec![4; 9]).unwrap();
        let s = frequency_spectrum(&same).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), [(9, 1)]);
        assert_eq!(s.types(), 1);

        assert!(frequency_spectrum(&tokenize("")).is_err());
    }

    #[test]
    fn spectrum_from_counts_validation() {
        assert!(FrequencySpectrum::from_counts([(0, 1)]).is_err());
        assert!(FrequencySpectrum::from_counts([(1, 1), (1, 2)]).is_err());
        let s = FrequencySpectrum::from_counts([(1, 0), (2, 3)]).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), [(2, 3)]);
    }

    #[test]
    fn prefix_lengths() {
        let seq = TokenSequence::from_ids((1..=10).collect()).unwrap();
        let obs = successive_prefixes(&seq, 3).unwrap();
        let lens: Vec<u64> = obs.iter().map(|o| o.tokens()).collect();
        assert_eq!(lens, [3, 6, 9]);
        assert_eq!(obs.iter().map(|o| o.types()).collect::<Vec<_>>(), [3, 6, 9]);

        let one = successive_prefixes(&seq, 1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].tokens(), 10);

        assert!(successive_prefixes(&seq, 11).is_err());
        assert!(successive_prefixes(&seq, 0).is_err());
    }

    #[test]
    fn prefix_lengths_alice_scale() {
        let seq = TokenSequence::from_ids(vec![1; 24_168]).unwrap();
        let obs = successive_prefixes(&seq, 48).unwrap();
        assert_eq!(obs.len(), 48);
        assert_eq!(obs.last().unwrap().tokens(), 24_144);
    }

    #[test]
    fn single_type_sampling() {
        let d = WordDistribution::uniform(1).unwrap();
        for seed in [0, 1, 99] {
            let seq = sample_tokens(&d, 50, seed).unwrap();
            assert!(seq.ids().iter().all(|&id| id == 1));
        }
        assert!(sample_tokens(&d, 0, 1).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let d = WordDistribution::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let a = sample_tokens(&d, 1000, 42).unwrap();
        let b = sample_tokens(&d, 1000, 42).unwrap();
        let c = sample_tokens(&d, 1000, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.ids().iter().all(|&id| (1..=4).contains(&id)));
    }

    #[test]
    fn csv_round_trips() {
        let s = FrequencySpectrum::from_counts([(1, 2), (2, 1)]).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        assert_eq!(std::str::from_utf8(&buf).unwrap(), "k,f_k\n1,2\n2,1\n");
        assert_eq!(FrequencySpectrum::read_csv(buf.as_slice()).unwrap(), s);

        let obs = vec![
            Observation::new(2, 3).unwrap(),
            Observation::new(4, 9).unwrap(),
        ];
        let mut buf = Vec::new();
        write_observations_csv(&obs, &mut buf).unwrap();
        assert_eq!(std::str::from_utf8(&buf).unwrap(), "K,M\n2,3\n4,9\n");
        assert_eq!(read_observations_csv(buf.as_slice()).unwrap(), obs);
    }

    #[test]
    fn csv_rejects_wrong_headers_and_values() {
        assert!(FrequencySpectrum::read_csv("K,M\n1,2\n".as_bytes()).is_err());
        assert!(read_observations_csv("K,M\n5,2\n".as_bytes()).is_err());
        assert!(read_observations_csv("K,M\nx,2\n".as_bytes()).is_err());
    }
}
