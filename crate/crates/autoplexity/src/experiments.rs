//! Batch sweeps: the positive-deficiency probability table, hereditary
//! deficiency counts, theorem suites over power-free corpora, and
//! per-prefix dimension profiles.
//!
//! Exhaustive sweeps deduplicate work over the reversal/complement
//! symmetry group (deficiency is invariant under both) and fan out over
//! words with rayon.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::search::{
    deficiency_exceeds, dfa_complexity_with_limit, nfa_complexity, state_bound,
};
use crate::store::{CacheEntry, Store};
use crate::words::{
    enumerate_words, is_almost_square_free, is_square_free, is_strongly_cube_free, square_lengths,
    ternary_square_free_prefix, thue_prefix, Word,
};

fn word_from_bits(bits: u64, n: usize) -> Word {
    let letters = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
    Word::new(letters, 2).unwrap()
}

fn reverse_bits(bits: u64, n: usize) -> u64 {
    let mut out = 0u64;
    for i in 0..n {
        if bits >> i & 1 == 1 {
            out |= 1 << (n - 1 - i);
        }
    }
    out
}

/// Orbit of a word under {identity, reverse, complement, both}.
fn orbit(bits: u64, n: usize) -> [u64; 4] {
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let rev = reverse_bits(bits, n);
    [bits, rev, bits ^ mask, rev ^ mask]
}

fn orbit_representative(bits: u64, n: usize) -> (u64, u64) {
    let orb = orbit(bits, n);
    let rep = orb.iter().copied().min().unwrap();
    let mut distinct = orb.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    (rep, distinct.len() as u64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum TableMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64, ci_low: f64, ci_high: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub total: u64,
    pub positive: u64,
    /// `P(D_n > 0)` truncated (not rounded) to three decimal digits.
    pub probability: String,
    pub mode: TableMode,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeficiencyTable {
    pub rows: Vec<TableRow>,
}

fn truncate_3(numerator: u64, denominator: u64) -> String {
    let thousandths = numerator * 1000 / denominator;
    format!("{}.{:03}", thousandths / 1000, thousandths % 1000)
}

/// Exact number of binary length-`n` words with positive deficiency.
pub fn count_positive_deficiency(n: usize, store: Option<&Store>) -> u64 {
    if n == 0 {
        return 0;
    }
    let reps: Vec<(u64, u64)> = (0..1u64 << n)
        .filter_map(|bits| {
            let (rep, size) = orbit_representative(bits, n);
            (rep == bits).then_some((bits, size))
        })
        .collect();
    reps.par_iter()
        .map(|&(bits, size)| {
            let word = word_from_bits(bits, n);
            let positive = match store {
                Some(store) => positive_via_store(store, &word),
                None => deficiency_exceeds(&word, 0),
            };
            if positive {
                size
            } else {
                0
            }
        })
        .sum()
}

/// Store-backed positive-deficiency decision: hits answer immediately,
/// misses are recorded so interrupted sweeps can resume.
fn positive_via_store(store: &Store, word: &Word) -> bool {
    let b = state_bound(word.len());
    let key = word.to_string();
    if let Some(entry) = store.get(&key) {
        return entry.a_n < b;
    }
    let result = nfa_complexity(word);
    let entry = CacheEntry {
        word: key,
        n: word.len(),
        a_n: result.value,
        code: result.witness.code.to_string(),
    };
    let _ = store.put(entry);
    result.value < b
}

/// Exact table row over all `2^n` binary words.
pub fn exhaustive_table_row(n: usize) -> TableRow {
    let total = 1u64 << n;
    let positive = count_positive_deficiency(n, None);
    TableRow {
        n,
        total,
        positive,
        probability: truncate_3(positive, total),
        mode: TableMode::Exhaustive,
    }
}

/// Monte-Carlo row with a 99% normal-approximation confidence interval;
/// the generator is seeded so reports can be replayed.
pub fn sampled_table_row(n: usize, samples: u64, seed: u64) -> TableRow {
    let words: Vec<Word> = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
        (0..samples)
            .map(|_| word_from_bits(rng.random_range(0..1u64 << n), n))
            .collect()
    };
    let positive: u64 = words
        .par_iter()
        .map(|word| u64::from(deficiency_exceeds(word, 0)))
        .sum();
    let p = positive as f64 / samples as f64;
    let half = 2.5758 * (p * (1.0 - p) / samples as f64).sqrt();
    TableRow {
        n,
        total: samples,
        positive,
        probability: truncate_3(positive, samples),
        mode: TableMode::Sampled {
            samples,
            seed,
            ci_low: (p - half).max(0.0),
            ci_high: (p + half).min(1.0),
        },
    }
}

/// Rows `0..=n_max_exhaustive` computed exactly, then sampled rows up
/// to `n_max_sampled`.
pub fn deficiency_table(
    n_max_exhaustive: usize,
    n_max_sampled: usize,
    samples: u64,
    seed: u64,
) -> DeficiencyTable {
    let mut rows = Vec::new();
    for n in 0..=n_max_exhaustive {
        rows.push(exhaustive_table_row(n));
    }
    for n in n_max_exhaustive + 1..=n_max_sampled {
        rows.push(sampled_table_row(n, samples, seed));
    }
    DeficiencyTable { rows }
}

/// Number of binary words of each length `1..=max_len` all of whose
/// prefixes have deficiency zero.
///
/// The property is prefix-closed, so survivors at length `L+1` are
/// single-letter extensions of survivors at length `L`; the sweep keeps
/// only words starting with 0 and doubles counts (complementation
/// preserves deficiency of every prefix).
pub fn hereditary_count(max_len: usize) -> Vec<u64> {
    let mut counts = Vec::with_capacity(max_len);
    if max_len == 0 {
        return counts;
    }
    // Length 1: both single letters have deficiency 0.
    let mut frontier: Vec<u64> = vec![0b0];
    counts.push(2);
    for len in 2..=max_len {
        frontier = frontier
            .par_iter()
            .flat_map_iter(|&bits| {
                [bits, bits | 1 << (len - 1)].into_iter().filter(move |&ext| {
                    !deficiency_exceeds(&word_from_bits(ext, len), 0)
                })
            })
            .collect();
        frontier.sort_unstable();
        counts.push(2 * frontier.len() as u64);
    }
    counts
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TheoremSuite {
    /// Square-free ternary words have deficiency 0.
    SquareFreeDeficiencyZero,
    /// Strongly cube-free binary words have deficiency at most 1.
    StronglyCubeFreeDeficiencyOne,
    /// Almost square-free binary words have deficiency at most 1.
    AlmostSquareFreeDeficiencyOne,
    /// Squares in strongly cube-free binary words have lengths
    /// `2^a` or `3·2^a`.
    SoniCensus,
}

impl TheoremSuite {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "square_free_d0" => Some(Self::SquareFreeDeficiencyZero),
            "strongly_cube_free_d1" => Some(Self::StronglyCubeFreeDeficiencyOne),
            "almost_square_free_d1" => Some(Self::AlmostSquareFreeDeficiencyOne),
            "soni_census" => Some(Self::SoniCensus),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::SquareFreeDeficiencyZero => "square_free_d0",
            Self::StronglyCubeFreeDeficiencyOne => "strongly_cube_free_d1",
            Self::AlmostSquareFreeDeficiencyOne => "almost_square_free_d1",
            Self::SoniCensus => "soni_census",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub suite: TheoremSuite,
    pub max_length: usize,
    /// (length, corpus size) per swept length.
    pub corpus_sizes: Vec<(usize, usize)>,
    /// Words violating the asserted bound (expected empty).
    pub counterexamples: Vec<String>,
    /// A word attaining the largest deficiency seen, with that value.
    pub extremal: Option<(String, usize)>,
    pub passed: bool,
}

/// Sweeps every word of the suite's corpus up to `max_length` and
/// checks the theorem's bound on each.
pub fn verify_theorem(suite: TheoremSuite, max_length: usize) -> TheoremReport {
    let (sigma, predicate): (u8, fn(&Word) -> bool) = match suite {
        TheoremSuite::SquareFreeDeficiencyZero => (3, is_square_free),
        TheoremSuite::StronglyCubeFreeDeficiencyOne | TheoremSuite::SoniCensus => {
            (2, is_strongly_cube_free)
        }
        TheoremSuite::AlmostSquareFreeDeficiencyOne => {
            (2, |w: &Word| is_almost_square_free(w) == Ok(true))
        }
    };
    let mut corpus_sizes = Vec::new();
    let mut counterexamples = Vec::new();
    let mut extremal: Option<(String, usize)> = None;
    for len in 1..=max_length {
        let corpus = enumerate_words(predicate, sigma, len, true);
        corpus_sizes.push((len, corpus.len()));
        let results: Vec<(String, bool, usize)> = corpus
            .par_iter()
            .map(|word| match suite {
                TheoremSuite::SquareFreeDeficiencyZero => {
                    let bad = deficiency_exceeds(word, 0);
                    (word.to_string(), bad, 0)
                }
                TheoremSuite::StronglyCubeFreeDeficiencyOne
                | TheoremSuite::AlmostSquareFreeDeficiencyOne => {
                    let bad = deficiency_exceeds(word, 1);
                    let d = usize::from(deficiency_exceeds(word, 0));
                    (word.to_string(), bad, d)
                }
                TheoremSuite::SoniCensus => {
                    let bad = square_lengths(word)
                        .lengths
                        .iter()
                        .any(|&l| !soni_length(l));
                    (word.to_string(), bad, 0)
                }
            })
            .collect();
        for (text, bad, d) in results {
            if bad {
                counterexamples.push(text.clone());
            }
            if extremal.as_ref().is_none_or(|(_, best)| d > *best) {
                extremal = Some((text, d));
            }
        }
    }
    TheoremReport {
        suite,
        max_length,
        corpus_sizes,
        passed: counterexamples.is_empty(),
        counterexamples,
        extremal,
    }
}

/// True iff `len` is `2^a` or `3·2^a` with `a ≥ 1`.
fn soni_length(len: usize) -> bool {
    if len < 2 {
        return false;
    }
    let odd = len >> len.trailing_zeros();
    (odd == 1 || odd == 3) && len.is_multiple_of(2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StreamKind {
    Thue,
    TernarySquareFree,
}

impl StreamKind {
    pub fn prefix(&self, m: usize) -> Word {
        match self {
            StreamKind::Thue => thue_prefix(m),
            StreamKind::TernarySquareFree => ternary_square_free_prefix(m),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileRow {
    pub m: usize,
    pub a_n: usize,
    pub d: usize,
    /// `A_N(u) / (|u|/2)`, the quantity whose liminf/limsup define the
    /// nondeterministic automatic dimensions.
    pub ratio: f64,
    pub a_d: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionProfile {
    pub stream: StreamKind,
    pub rows: Vec<ProfileRow>,
}

/// Per-prefix complexities of an infinite stream. The deterministic
/// column is filled for prefixes up to `dfa_limit` when requested.
pub fn dimension_profile(stream: StreamKind, m_max: usize, dfa_limit: Option<usize>) -> DimensionProfile {
    let rows = (1..=m_max)
        .into_par_iter()
        .map(|m| {
            let word = stream.prefix(m);
            let a_n = nfa_complexity(&word).value;
            let d = state_bound(m) - a_n;
            let a_d = dfa_limit
                .filter(|&limit| m <= limit)
                .and_then(|limit| dfa_complexity_with_limit(&word, limit).ok());
            ProfileRow { m, a_n, d, ratio: a_n as f64 / (m as f64 / 2.0), a_d }
        })
        .collect();
    DimensionProfile { stream, rows }
}
