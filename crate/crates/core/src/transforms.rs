//! Probe and augmentation sets derived from a corpus.

use std::collections::HashMap;

use indexmap::IndexMap;

use crate::corpus::{distinct_sentences, Corpus, Label, Sentence, SentencePair};

pub const REVERSE_SUFFIX: &str = ":rev";

fn derived(corpus: &Corpus, suffix: &str, pairs: Vec<SentencePair>) -> Corpus {
    Corpus::new(format!("{}{suffix}", corpus.name), corpus.source_format, pairs)
}

fn identical_id(ordinal: usize) -> String {
    format!("identical:{ordinal}")
}

fn reverse_pair(pair: &SentencePair) -> SentencePair {
    SentencePair {
        id: format!("{}{REVERSE_SUFFIX}", pair.id),
        s1: pair.s2.clone(),
        s2: pair.s1.clone(),
        label: pair.label,
    }
}

/// Every pair with its sentences swapped; ids gain a `:rev` suffix.
pub fn reverse_pairs(corpus: &Corpus) -> Corpus {
    derived(
        corpus,
        "+reversed",
        corpus.pairs.iter().map(reverse_pair).collect(),
    )
}

/// One `(s, s, paraphrase)` pair per distinct sentence, in first-occurrence order.
pub fn identical_pairs(corpus: &Corpus) -> Corpus {
    let pairs = distinct_sentences(corpus)
        .into_iter()
        .enumerate()
        .map(|(i, s)| SentencePair {
            id: identical_id(i),
            s1: s.clone(),
            s2: s,
            label: Some(Label::Paraphrase),
        })
        .collect();
    derived(corpus, "+identical", pairs)
}

/// Original pairs followed by their reversals.
pub fn augment_reverse(corpus: &Corpus) -> Corpus {
    let mut pairs = corpus.pairs.clone();
    pairs.extend(corpus.pairs.iter().map(reverse_pair));
    derived(corpus, "+reverse_augmented", pairs)
}

/// Original pairs followed by the identical pair of every distinct sentence.
pub fn augment_identical(corpus: &Corpus) -> Corpus {
    let mut pairs = corpus.pairs.clone();
    pairs.extend(identical_pairs(corpus).pairs);
    derived(corpus, "+identical_augmented", pairs)
}

/// Candidates sharing one query sentence, with the `(query, query)` reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankComparisonGroup {
    pub query: Sentence,
    pub identical_pair: SentencePair,
    /// Each candidate is `(query, s')` with `s' != query`, carrying its gold label.
    pub candidates: Vec<SentencePair>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankComparison {
    pub groups: Vec<RankComparisonGroup>,
    /// Pairs of the augmented set with `s1 == s2`, left out of the candidates.
    pub excluded_self_pairs: usize,
}

impl RankComparison {
    pub fn candidate_count(&self) -> usize {
        self.groups.iter().map(|g| g.candidates.len()).sum()
    }
}

/// Groups the both-orders augmentation of `corpus` by first sentence.
///
/// Groups appear in first-occurrence order of their query within the
/// augmented set. Every query gets a group, even one whose only pairs are
/// self-pairs.
pub fn build_rank_comparison(corpus: &Corpus) -> RankComparison {
    let ordinals: HashMap<Sentence, usize> = distinct_sentences(corpus)
        .into_iter()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();

    let augmented = augment_reverse(corpus);
    let mut groups: IndexMap<&Sentence, Vec<SentencePair>> = IndexMap::new();
    let mut excluded_self_pairs = 0;
    for pair in &augmented.pairs {
        let candidates = groups.entry(&pair.s1).or_default();
        if pair.is_self_pair() {
            excluded_self_pairs += 1;
        } else {
            candidates.push(pair.clone());
        }
    }

    let groups = groups
        .into_iter()
        .map(|(query, candidates)| RankComparisonGroup {
            query: query.clone(),
            identical_pair: SentencePair {
                id: identical_id(ordinals[query]),
                s1: query.clone(),
                s2: query.clone(),
                label: Some(Label::Paraphrase),
            },
            candidates,
        })
        .collect();

    RankComparison {
        groups,
        excluded_self_pairs,
    }
}
