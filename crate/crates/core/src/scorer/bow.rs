//! Bag-of-words cosine baseline over joint unigram + bigram counts.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Score, ScoreError, Scorer};
use crate::corpus::SentencePair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TokenizerConfig {
    pub lowercase: bool,
    pub strip_punctuation: bool,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig {
            lowercase: true,
            strip_punctuation: true,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    #[default]
    Counts,
    Binary,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BowConfig {
    pub tokenizer: TokenizerConfig,
    pub weighting: Weighting,
}

fn is_punctuation(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '\u{00A1}' | '\u{00AB}' | '\u{00BB}' | '\u{00BF}' | '\u{2010}'..='\u{201F}' | '\u{2026}'
        )
}

pub fn tokenize_with(sentence: &str, config: TokenizerConfig) -> Vec<String> {
    sentence
        .split_whitespace()
        .filter_map(|raw| {
            let token = if config.strip_punctuation {
                raw.trim_matches(is_punctuation)
            } else {
                raw
            };
            if token.is_empty() {
                None
            } else if config.lowercase {
                Some(token.to_lowercase())
            } else {
                Some(token.to_owned())
            }
        })
        .collect()
}

/// Lowercase, split on Unicode whitespace, trim punctuation from token ends.
pub fn tokenize(sentence: &str) -> Vec<String> {
    tokenize_with(sentence, TokenizerConfig::default())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Gram {
    Uni(String),
    Bi(String, String),
}

/// Sparse gram counts. Every stored count is at least 1.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BowEncoding {
    counts: HashMap<Gram, u32>,
}

impl BowEncoding {
    pub fn get(&self, gram: &Gram) -> u32 {
        self.counts.get(gram).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Gram, u32)> {
        self.counts.iter().map(|(g, &c)| (g, c))
    }

    fn squared_norm(&self) -> u64 {
        self.counts.values().map(|&c| u64::from(c) * u64::from(c)).sum()
    }

    fn dot(&self, other: &BowEncoding) -> u64 {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .counts
            .iter()
            .map(|(g, &c)| u64::from(c) * u64::from(large.get(g)))
            .sum()
    }

    /// Cosine similarity; 0 when either side is empty.
    ///
    /// Dot product and norms are exact integers, so the result is symmetric
    /// bit-for-bit, and parallel vectors score exactly 1.
    pub fn cosine(&self, other: &BowEncoding) -> f64 {
        let n1 = self.squared_norm();
        let n2 = other.squared_norm();
        if n1 == 0 || n2 == 0 {
            return 0.0;
        }
        let dot = self.dot(other);
        if u128::from(dot) * u128::from(dot) == u128::from(n1) * u128::from(n2) {
            return 1.0;
        }
        (dot as f64 / ((n1 as f64).sqrt() * (n2 as f64).sqrt())).min(1.0)
    }
}

pub fn bow_encode_with(sentence: &str, config: BowConfig) -> BowEncoding {
    let tokens = tokenize_with(sentence, config.tokenizer);
    let mut counts: HashMap<Gram, u32> = HashMap::new();
    for pair in tokens.windows(2) {
        *counts
            .entry(Gram::Bi(pair[0].clone(), pair[1].clone()))
            .or_insert(0) += 1;
    }
    for token in tokens {
        *counts.entry(Gram::Uni(token)).or_insert(0) += 1;
    }
    if config.weighting == Weighting::Binary {
        counts.values_mut().for_each(|c| *c = 1);
    }
    BowEncoding { counts }
}

pub fn bow_encode(sentence: &str) -> BowEncoding {
    bow_encode_with(sentence, BowConfig::default())
}

pub fn bow_score(s1: &str, s2: &str) -> Score {
    BowScorer::default().score(s1, s2)
}

#[derive(Debug, Clone, Default)]
pub struct BowScorer {
    config: BowConfig,
}

impl BowScorer {
    pub fn new(config: BowConfig) -> Self {
        BowScorer { config }
    }

    pub fn config(&self) -> BowConfig {
        self.config
    }

    pub fn score(&self, s1: &str, s2: &str) -> Score {
        let v1 = bow_encode_with(s1, self.config);
        let v2 = bow_encode_with(s2, self.config);
        Score::new(v1.cosine(&v2)).expect("cosine of count vectors lies in [0, 1]")
    }
}

impl Scorer for BowScorer {
    fn score_batch(&mut self, pairs: &[SentencePair]) -> Result<Vec<Score>, ScoreError> {
        Ok(pairs
            .iter()
            .map(|p| self.score(p.s1.as_str(), p.s2.as_str()))
            .collect())
    }

    fn name(&self) -> &str {
        "bow"
    }
}
