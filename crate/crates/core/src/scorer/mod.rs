//! Paraphrase score functions and thresholded classification.

mod bow;
mod external;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Label, Sentence, SentencePair};

pub use bow::{bow_encode, bow_score, tokenize, BowConfig, BowEncoding, BowScorer, Gram, TokenizerConfig, Weighting};
pub use external::{ExternalScorer, DEFAULT_TIMEOUT};

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("protocol violation{}: {detail}", at_pair(.pair_id))]
    Protocol {
        pair_id: Option<String>,
        detail: String,
    },
    #[error("external scorer timed out waiting for pair {pair_id}")]
    Timeout { pair_id: String },
    #[error("external scorer reported an error for pair {pair_id}: {message}")]
    Remote { pair_id: String, message: String },
    #[error("external scorer closed the connection{}", at_pair(.pair_id))]
    Disconnected { pair_id: Option<String> },
    #[error("cannot reach external scorer: {0}")]
    Io(#[from] std::io::Error),
}

fn at_pair(id: &Option<String>) -> String {
    id.as_ref()
        .map(|id| format!(" at pair {id}"))
        .unwrap_or_default()
}

/// A paraphrase score in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Score(f64);

impl Score {
    pub const ZERO: Score = Score(0.0);
    pub const ONE: Score = Score(1.0);

    /// `None` for NaN or anything outside `[0, 1]`.
    pub fn new(value: f64) -> Option<Score> {
        (0.0..=1.0).contains(&value).then_some(Score(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Score {
    type Error = String;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Score::new(value).ok_or_else(|| format!("score {value} outside [0, 1]"))
    }
}

impl From<Score> for f64 {
    fn from(s: Score) -> f64 {
        s.0
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Decision threshold in `[0, 1]`; a pair is a paraphrase when its score is strictly above it.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Threshold(f64);

impl Threshold {
    pub fn new(value: f64) -> Option<Threshold> {
        (0.0..=1.0).contains(&value).then_some(Threshold(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Threshold {
    fn default() -> Self {
        Threshold(0.5)
    }
}

impl TryFrom<f64> for Threshold {
    type Error = String;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Threshold::new(value).ok_or_else(|| format!("threshold {value} outside [0, 1]"))
    }
}

impl From<Threshold> for f64 {
    fn from(t: Threshold) -> f64 {
        t.0
    }
}

pub fn classify(score: Score, threshold: Threshold) -> Label {
    if score.0 > threshold.0 {
        Label::Paraphrase
    } else {
        Label::NonParaphrase
    }
}

/// Anything that maps sentence pairs to paraphrase scores.
///
/// Implementations return exactly one score per input pair, in input order.
pub trait Scorer {
    fn score_batch(&mut self, pairs: &[SentencePair]) -> Result<Vec<Score>, ScoreError>;

    fn name(&self) -> &str;
}

impl<S: Scorer + ?Sized> Scorer for &mut S {
    fn score_batch(&mut self, pairs: &[SentencePair]) -> Result<Vec<Score>, ScoreError> {
        (**self).score_batch(pairs)
    }

    fn name(&self) -> &str {
        (**self).name()
    }
}

impl<S: Scorer + ?Sized> Scorer for Box<S> {
    fn score_batch(&mut self, pairs: &[SentencePair]) -> Result<Vec<Score>, ScoreError> {
        (**self).score_batch(pairs)
    }

    fn name(&self) -> &str {
        (**self).name()
    }
}

pub fn score_batch(scorer: &mut dyn Scorer, pairs: &[SentencePair]) -> Result<Vec<Score>, ScoreError> {
    let scores = scorer.score_batch(pairs)?;
    if scores.len() != pairs.len() {
        return Err(ScoreError::Protocol {
            pair_id: None,
            detail: format!("expected {} scores, got {}", pairs.len(), scores.len()),
        });
    }
    Ok(scores)
}

/// Memoizes an inner scorer on the exact `(s1, s2)` text, so probes that
/// revisit the same pairs only pay for each ordered pair once.
pub struct CachingScorer<S> {
    inner: S,
    cache: HashMap<(Sentence, Sentence), Score>,
}

impl<S: Scorer> CachingScorer<S> {
    pub fn new(inner: S) -> Self {
        CachingScorer {
            inner,
            cache: HashMap::new(),
        }
    }

    pub fn into_inner(self) -> S {
        self.inner
    }

    pub fn cached(&self) -> usize {
        self.cache.len()
    }
}

impl<S: Scorer> Scorer for CachingScorer<S> {
    fn score_batch(&mut self, pairs: &[SentencePair]) -> Result<Vec<Score>, ScoreError> {
        let mut missing = Vec::new();
        let mut queued = std::collections::HashSet::new();
        for pair in pairs {
            let key = (pair.s1.clone(), pair.s2.clone());
            if !self.cache.contains_key(&key) && queued.insert(key) {
                missing.push(pair.clone());
            }
        }
        if !missing.is_empty() {
            let scores = score_batch(&mut self.inner, &missing)?;
            for (pair, score) in missing.into_iter().zip(scores) {
                self.cache.insert((pair.s1, pair.s2), score);
            }
        }
        Ok(pairs
            .iter()
            .map(|p| self.cache[&(p.s1.clone(), p.s2.clone())])
            .collect())
    }

    fn name(&self) -> &str {
        self.inner.name()
    }
}
