#![allow(dead_code)]

use std::path::PathBuf;

use pairprobe::corpus::{Corpus, Label, SentencePair, SourceFormat};
use pairprobe::scorer::{Score, ScoreError, Scorer};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn stub_scorer_bin() -> &'static str {
    env!("CARGO_BIN_EXE_pairprobe-stub-scorer")
}

fn fnv1a(bytes: impl IntoIterator<Item = u8>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    h
}

/// The stub scorer binary's function, re-derived here as the oracle.
pub fn stub_process_score(s1: &str, s2: &str) -> f64 {
    let h = fnv1a(s1.bytes().chain([0x1f]).chain(s2.bytes()));
    (h % 10001) as f64 / 10000.0
}

/// Seeded, asymmetric in-process stub with dyadic outputs (multiples of
/// 1/16), so sums are exact in any order and values land on bin edges.
pub struct DyadicStub {
    pub seed: u64,
}

impl DyadicStub {
    pub fn f(&self, s1: &str, s2: &str) -> f64 {
        let h = fnv1a(
            self.seed
                .to_le_bytes()
                .into_iter()
                .chain(s1.bytes())
                .chain([0xff])
                .chain(s2.bytes()),
        );
        (h % 17) as f64 / 16.0
    }
}

impl Scorer for DyadicStub {
    fn score_batch(&mut self, pairs: &[SentencePair]) -> Result<Vec<Score>, ScoreError> {
        Ok(pairs
            .iter()
            .map(|p| Score::new(self.f(p.s1.as_str(), p.s2.as_str())).unwrap())
            .collect())
    }

    fn name(&self) -> &str {
        "dyadic-stub"
    }
}

const POOL: &[&str] = &[
    "how do i cook rice",
    "how to cook rice",
    "what is the capital of france",
    "where is paris",
    "why is the sky blue",
    "the sky is blue because of scattering",
    "is rust hard to learn",
    "learning rust is hard",
];

/// Up to `max_pairs` labeled pairs over a small sentence pool, so repeats,
/// shared queries and self-pairs all occur.
pub fn random_corpus(rng: &mut impl Rng, max_pairs: usize) -> Corpus {
    let n = rng.gen_range(0..=max_pairs);
    let pairs = (0..n)
        .map(|i| {
            let a = *POOL.choose(rng).unwrap();
            let b = if rng.gen_bool(0.1) { a } else { *POOL.choose(rng).unwrap() };
            let label = if rng.gen_bool(0.5) {
                Label::Paraphrase
            } else {
                Label::NonParaphrase
            };
            SentencePair::new(format!("r{i}"), a, b, Some(label))
        })
        .collect();
    Corpus::new("random", SourceFormat::Canonical, pairs)
}

const WORDS: &[&str] = &[
    "the", "a", "cat", "dog", "sat", "on", "mat", "Rust", "rice", "cook", "how", "why", "is", "blue", "sky", "paris",
    "France", "learn", "to", "of",
];

/// Random tokens, possibly with punctuation attached, `min..=max` tokens long.
pub fn random_sentence(rng: &mut impl Rng, min: usize, max: usize) -> String {
    let len = rng.gen_range(min..=max);
    (0..len)
        .map(|_| {
            let w = *WORDS.choose(rng).unwrap();
            match rng.gen_range(0..6) {
                0 => format!("{w}?"),
                1 => format!("\"{w},"),
                2 => w.to_uppercase(),
                _ => w.to_owned(),
            }
        })
        .collect::<Vec<_>>()
        .join(if rng.gen_bool(0.2) { "  " } else { " " })
}
