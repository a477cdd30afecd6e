//! Metrics computed from a corpus, a scorer and the derived probe sets.
//!
//! Each probe has two halves: a scoring step that talks to the [`Scorer`],
//! and a pure aggregation step over the resulting scores. The aggregation
//! types (`from_outcomes`, `from_scored`, `from_values`) are public so
//! precomputed scores can be summarized without a scorer.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, Label, Sentence, SentencePair};
use crate::scorer::{classify, score_batch, Score, ScoreError, Scorer, Threshold};
use crate::transforms::{augment_reverse, identical_pairs, reverse_pairs, RankComparisonGroup};

#[derive(Debug, Error)]
pub enum ProbeError {
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error("pair {pair_id} has no gold label")]
    Unlabeled { pair_id: String },
    #[error("invalid histogram edges: {0}")]
    Edges(String),
}

fn ratio(flagged: usize, evaluated: usize) -> f64 {
    if evaluated == 0 {
        0.0
    } else {
        flagged as f64 / evaluated as f64
    }
}

/// Binary confusion matrix with paraphrase as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub accuracy: f64,
    pub f1: f64,
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ClassificationReport {
    pub fn from_outcomes(outcomes: impl IntoIterator<Item = (Label, Label)>) -> Self {
        let mut r = ClassificationReport::default();
        for (gold, predicted) in outcomes {
            match (gold.is_paraphrase(), predicted.is_paraphrase()) {
                (true, true) => r.tp += 1,
                (false, true) => r.fp += 1,
                (false, false) => r.tn += 1,
                (true, false) => r.fn_ += 1,
            }
        }
        r.accuracy = ratio(r.tp + r.tn, r.total());
        r.f1 = ratio(2 * r.tp, 2 * r.tp + r.fp + r.fn_);
        r
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

pub fn classification_metrics(
    corpus: &Corpus,
    scorer: &mut dyn Scorer,
    threshold: Threshold,
) -> Result<ClassificationReport, ProbeError> {
    let gold = corpus
        .pairs
        .iter()
        .map(|p| {
            p.label.ok_or_else(|| ProbeError::Unlabeled {
                pair_id: p.id.clone(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let scores = score_batch(scorer, &corpus.pairs)?;
    Ok(ClassificationReport::from_outcomes(
        gold.into_iter()
            .zip(scores.into_iter().map(|s| classify(s, threshold))),
    ))
}

/// `flagged / evaluated`, defined as 0 when nothing was evaluated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Ratio {
    pub flagged: usize,
    pub evaluated: usize,
    pub value: f64,
}

impl Ratio {
    pub fn new(flagged: usize, evaluated: usize) -> Self {
        Ratio {
            flagged,
            evaluated,
            value: ratio(flagged, evaluated),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReverseDisagreement {
    pub ratio: Ratio,
    /// Ids of pairs whose predicted label flips under reversal.
    pub flagged_ids: Vec<String>,
}

pub fn reverse_disagreement(
    corpus: &Corpus,
    scorer: &mut dyn Scorer,
    threshold: Threshold,
) -> Result<ReverseDisagreement, ProbeError> {
    let forward = score_batch(scorer, &corpus.pairs)?;
    let backward = score_batch(scorer, &reverse_pairs(corpus).pairs)?;
    let flagged_ids: Vec<String> = corpus
        .pairs
        .iter()
        .zip(forward.iter().zip(&backward))
        .filter(|(_, (f, b))| classify(**f, threshold) != classify(**b, threshold))
        .map(|(p, _)| p.id.clone())
        .collect();
    Ok(ReverseDisagreement {
        ratio: Ratio::new(flagged_ids.len(), corpus.len()),
        flagged_ids,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdenticalError {
    pub ratio: Ratio,
    /// Sentences whose `(s, s)` pair was classified non-paraphrase.
    pub flagged_sentences: Vec<Sentence>,
}

pub fn identical_error_rate(
    corpus: &Corpus,
    scorer: &mut dyn Scorer,
    threshold: Threshold,
) -> Result<IdenticalError, ProbeError> {
    let identical = identical_pairs(corpus);
    let scores = score_batch(scorer, &identical.pairs)?;
    let flagged_sentences: Vec<Sentence> = identical
        .pairs
        .iter()
        .zip(scores)
        .filter(|(_, s)| classify(*s, threshold) == Label::NonParaphrase)
        .map(|(p, _)| p.s1.clone())
        .collect();
    Ok(IdenticalError {
        ratio: Ratio::new(flagged_sentences.len(), identical.len()),
        flagged_sentences,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryReport {
    pub reverse_disagreement: Ratio,
    pub identical_error: Ratio,
}

/// One `(s, s')` candidate scored next to its `(s, s)` reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredCandidate {
    pub pair_id: String,
    pub label: Option<Label>,
    pub candidate: Score,
    pub identical: Score,
}

impl ScoredCandidate {
    /// `f(s, s') - f(s, s)`.
    pub fn difference(&self) -> f64 {
        self.candidate.value() - self.identical.value()
    }

    pub fn is_violation(&self) -> bool {
        self.candidate.value() > self.identical.value()
    }
}

/// Scores every candidate and every group's identical reference.
pub fn score_rank_comparison(
    groups: &[RankComparisonGroup],
    scorer: &mut dyn Scorer,
) -> Result<Vec<ScoredCandidate>, ProbeError> {
    let references: Vec<SentencePair> = groups.iter().map(|g| g.identical_pair.clone()).collect();
    let reference_scores = score_batch(scorer, &references)?;
    let candidates: Vec<SentencePair> = groups
        .iter()
        .flat_map(|g| g.candidates.iter().cloned())
        .collect();
    let candidate_scores = score_batch(scorer, &candidates)?;

    let mut scored = Vec::with_capacity(candidates.len());
    let mut next = candidates.into_iter().zip(candidate_scores);
    for (group, identical) in groups.iter().zip(reference_scores) {
        for (pair, candidate) in next.by_ref().take(group.candidates.len()) {
            scored.push(ScoredCandidate {
                pair_id: pair.id,
                label: pair.label,
                candidate,
                identical,
            });
        }
    }
    Ok(scored)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ViolationStats {
    pub candidates: usize,
    pub violations: usize,
    pub fraction: f64,
    /// Mean of `f(s, s') - f(s, s)` over violating candidates only; 0 without violations.
    pub avg_diff: f64,
}

impl ViolationStats {
    fn from_candidates<'a>(scored: impl Iterator<Item = &'a ScoredCandidate>) -> Self {
        let mut stats = ViolationStats::default();
        let mut diff_sum = 0.0;
        for c in scored {
            stats.candidates += 1;
            if c.is_violation() {
                stats.violations += 1;
                diff_sum += c.difference();
            }
        }
        stats.fraction = ratio(stats.violations, stats.candidates);
        stats.avg_diff = if stats.violations == 0 {
            0.0
        } else {
            diff_sum / stats.violations as f64
        };
        stats
    }
}

/// Candidates that beat the identical reference, split by gold label.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RankViolationReport {
    pub paraphrase: ViolationStats,
    pub non_paraphrase: ViolationStats,
    /// Candidates without a gold label; counted here, in neither split.
    pub unlabeled_candidates: usize,
}

impl RankViolationReport {
    pub fn from_scored(scored: &[ScoredCandidate]) -> Self {
        RankViolationReport {
            paraphrase: ViolationStats::from_candidates(
                scored.iter().filter(|c| c.label == Some(Label::Paraphrase)),
            ),
            non_paraphrase: ViolationStats::from_candidates(
                scored.iter().filter(|c| c.label == Some(Label::NonParaphrase)),
            ),
            unlabeled_candidates: scored.iter().filter(|c| c.label.is_none()).count(),
        }
    }
}

pub fn rank_violations(
    groups: &[RankComparisonGroup],
    scorer: &mut dyn Scorer,
) -> Result<RankViolationReport, ProbeError> {
    Ok(RankViolationReport::from_scored(&score_rank_comparison(groups, scorer)?))
}

/// Strictly ascending bin edges. A value on an interior edge belongs to the
/// bin above it; a value equal to the last edge belongs to the last bin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinEdges(Vec<f64>);

impl BinEdges {
    pub fn new(edges: Vec<f64>) -> Result<Self, ProbeError> {
        if edges.len() < 2 {
            return Err(ProbeError::Edges("need at least two edges".into()));
        }
        if edges.iter().any(|e| !e.is_finite()) {
            return Err(ProbeError::Edges("edges must be finite".into()));
        }
        if edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ProbeError::Edges(format!("edges not ascending: {edges:?}")));
        }
        Ok(BinEdges(edges))
    }

    /// `bins` equal-width bins spanning `[lo, hi]`.
    pub fn uniform(bins: usize, lo: f64, hi: f64) -> Result<Self, ProbeError> {
        if bins == 0 {
            return Err(ProbeError::Edges("need at least one bin".into()));
        }
        let mut edges: Vec<f64> = (0..=bins)
            .map(|i| lo + (hi - lo) * i as f64 / bins as f64)
            .collect();
        edges[bins] = hi;
        Self::new(edges)
    }

    /// Errors unless the edges span `[lo, hi]`.
    pub fn require_cover(&self, lo: f64, hi: f64) -> Result<(), ProbeError> {
        if self.0[0] <= lo && self.0[self.0.len() - 1] >= hi {
            Ok(())
        } else {
            Err(ProbeError::Edges(format!(
                "edges [{}, {}] do not cover [{lo}, {hi}]",
                self.0[0],
                self.0[self.0.len() - 1]
            )))
        }
    }

    pub fn edges(&self) -> &[f64] {
        &self.0
    }

    pub fn bins(&self) -> usize {
        self.0.len() - 1
    }

    /// Bin index for `value`; values outside the edges clamp to the end bins.
    pub fn bin_of(&self, value: f64) -> usize {
        let above = self.0.partition_point(|&e| e <= value);
        above.saturating_sub(1).min(self.bins() - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HistCategory {
    Random,
    Paraphrase,
    NonParaphrase,
    Identical,
}

impl HistCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            HistCategory::Random => "random",
            HistCategory::Paraphrase => "paraphrase",
            HistCategory::NonParaphrase => "non_paraphrase",
            HistCategory::Identical => "identical",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBins {
    pub category: HistCategory,
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl HistogramBins {
    pub fn from_values(category: HistCategory, edges: &BinEdges, values: impl IntoIterator<Item = f64>) -> Self {
        let mut counts = vec![0u64; edges.bins()];
        for v in values {
            counts[edges.bin_of(v)] += 1;
        }
        HistogramBins {
            category,
            bin_edges: edges.edges().to_vec(),
            counts,
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// The score-distribution categories: both-order dataset pairs as `random`,
/// their label-filtered subsets, and the identical pairs.
pub fn histogram_categories(corpus: &Corpus) -> Vec<(HistCategory, Vec<SentencePair>)> {
    let augmented = augment_reverse(corpus).pairs;
    let with_label = |label: Label| -> Vec<SentencePair> {
        augmented
            .iter()
            .filter(|p| p.label == Some(label))
            .cloned()
            .collect()
    };
    let paraphrase = with_label(Label::Paraphrase);
    let non_paraphrase = with_label(Label::NonParaphrase);
    vec![
        (HistCategory::Random, augmented),
        (HistCategory::Paraphrase, paraphrase),
        (HistCategory::NonParaphrase, non_paraphrase),
        (HistCategory::Identical, identical_pairs(corpus).pairs),
    ]
}

pub fn score_histogram(
    categories: &[(HistCategory, Vec<SentencePair>)],
    scorer: &mut dyn Scorer,
    edges: &BinEdges,
) -> Result<Vec<HistogramBins>, ProbeError> {
    edges.require_cover(0.0, 1.0)?;
    categories
        .iter()
        .map(|(category, pairs)| {
            let scores = score_batch(scorer, pairs)?;
            Ok(HistogramBins::from_values(
                *category,
                edges,
                scores.into_iter().map(Score::value),
            ))
        })
        .collect()
}

/// Histograms of `f(s, s') - f(s, s)` for all, paraphrase and non-paraphrase candidates.
pub fn difference_histogram(
    scored: &[ScoredCandidate],
    edges: &BinEdges,
) -> Result<Vec<HistogramBins>, ProbeError> {
    edges.require_cover(-1.0, 1.0)?;
    let of = |category, filter: &dyn Fn(&ScoredCandidate) -> bool| {
        HistogramBins::from_values(
            category,
            edges,
            scored.iter().filter(|c| filter(c)).map(ScoredCandidate::difference),
        )
    };
    Ok(vec![
        of(HistCategory::Random, &|_| true),
        of(HistCategory::Paraphrase, &|c| c.label == Some(Label::Paraphrase)),
        of(HistCategory::NonParaphrase, &|c| {
            c.label == Some(Label::NonParaphrase)
        }),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::SourceFormat;
    use crate::scorer::BowScorer;
    use crate::transforms::build_rank_comparison;
    use std::collections::HashMap;

    const P: Label = Label::Paraphrase;
    const N: Label = Label::NonParaphrase;

    /// Looks up `(s1, s2)` in a table, defaulting to `fallback`.
    struct TableScorer {
        table: HashMap<(String, String), f64>,
        fallback: f64,
    }

    impl TableScorer {
        fn new(entries: &[((&str, &str), f64)], fallback: f64) -> Self {
            TableScorer {
                table: entries
                    .iter()
                    .map(|((a, b), s)| ((a.to_string(), b.to_string()), *s))
                    .collect(),
                fallback,
            }
        }
    }

    impl Scorer for TableScorer {
        fn score_batch(&mut self, pairs: &[SentencePair]) -> Result<Vec<Score>, ScoreError> {
            Ok(pairs
                .iter()
                .map(|p| {
                    let key = (p.s1.as_str().to_owned(), p.s2.as_str().to_owned());
                    Score::new(*self.table.get(&key).unwrap_or(&self.fallback)).unwrap()
                })
                .collect())
        }

        fn name(&self) -> &str {
            "table"
        }
    }

    fn corpus(pairs: &[(&str, &str, Option<Label>)]) -> Corpus {
        Corpus::new(
            "t",
            SourceFormat::Canonical,
            pairs
                .iter()
                .enumerate()
                .map(|(i, (a, b, l))| SentencePair::new(format!("p{i}"), *a, *b, *l))
                .collect(),
        )
    }

    #[test]
    fn confusion_matrix_hand_values() {
        let r = ClassificationReport::from_outcomes([(P, P), (P, N), (N, P), (N, N)]);
        assert_eq!((r.tp, r.fp, r.tn, r.fn_), (1, 1, 1, 1));
        assert_eq!(r.accuracy, 0.5);
        assert_eq!(r.f1, 0.5);

        let r = ClassificationReport::from_outcomes([(P, P), (N, N)]);
        assert_eq!((r.accuracy, r.f1), (1.0, 1.0));

        let r = ClassificationReport::from_outcomes([(N, N), (N, N)]);
        assert_eq!(r.f1, 0.0);
        assert_eq!(r.accuracy, 1.0);

        let r = ClassificationReport::from_outcomes([]);
        assert_eq!((r.accuracy, r.f1, r.total()), (0.0, 0.0, 0));
    }

    #[test]
    fn classification_via_scorer() {
        let c = corpus(&[("a", "b", Some(P)), ("c", "d", Some(P)), ("e", "f", Some(N)), ("g", "h", Some(N))]);
        let mut s = TableScorer::new(&[(("a", "b"), 0.9), (("e", "f"), 0.7)], 0.1);
        let r = classification_metrics(&c, &mut s, Threshold::default()).unwrap();
        assert_eq!((r.tp, r.fp, r.tn, r.fn_), (1, 1, 1, 1));
    }

    #[test]
    fn classification_requires_labels() {
        let c = corpus(&[("a", "b", Some(P)), ("c", "d", None)]);
        let err = classification_metrics(&c, &mut BowScorer::default(), Threshold::default()).unwrap_err();
        assert!(matches!(err, ProbeError::Unlabeled { pair_id } if pair_id == "p1"));
    }

    #[test]
    fn reverse_disagreement_stub() {
        let c = corpus(&[("x", "y", Some(P))]);
        let mut s = TableScorer::new(&[(("x", "y"), 0.6), (("y", "x"), 0.4)], 0.0);
        let r = reverse_disagreement(&c, &mut s, Threshold::default()).unwrap();
        assert_eq!(r.ratio, Ratio { flagged: 1, evaluated: 1, value: 1.0 });
        assert_eq!(r.flagged_ids, ["p0"]);

        let r = reverse_disagreement(&corpus(&[]), &mut s, Threshold::default()).unwrap();
        assert_eq!(r.ratio, Ratio { flagged: 0, evaluated: 0, value: 0.0 });
    }

    #[test]
    fn reverse_disagreement_bow_is_zero() {
        let c = corpus(&[("a b c", "c b a", None), ("the cat sat", "a cat", None), ("x", "", None)]);
        let r = reverse_disagreement(&c, &mut BowScorer::default(), Threshold::default()).unwrap();
        assert_eq!(r.ratio.value, 0.0);
        assert_eq!(r.ratio.evaluated, 3);
    }

    #[test]
    fn identical_error_examples() {
        let c = corpus(&[("a b", "c", Some(N))]);
        let r = identical_error_rate(&c, &mut BowScorer::default(), Threshold::default()).unwrap();
        assert_eq!(r.ratio, Ratio { flagged: 0, evaluated: 2, value: 0.0 });

        let mut low = TableScorer::new(&[], 0.3);
        let r = identical_error_rate(&c, &mut low, Threshold::default()).unwrap();
        assert_eq!(r.ratio.value, 1.0);
        assert_eq!(r.flagged_sentences, vec![Sentence::from("a b"), Sentence::from("c")]);

        let r = identical_error_rate(&corpus(&[]), &mut low, Threshold::default()).unwrap();
        assert_eq!(r.ratio, Ratio::default());
    }

    #[test]
    fn rank_violation_stub() {
        let c = corpus(&[("s", "t", Some(P))]);
        let rc = build_rank_comparison(&c);
        let mut s = TableScorer::new(
            &[(("s", "s"), 0.4), (("s", "t"), 0.9), (("t", "t"), 1.0), (("t", "s"), 0.2)],
            0.0,
        );
        let r = rank_violations(&rc.groups, &mut s).unwrap();
        assert_eq!(r.paraphrase.candidates, 2);
        assert_eq!(r.paraphrase.violations, 1);
        assert_eq!(r.paraphrase.fraction, 0.5);
        assert!((r.paraphrase.avg_diff - 0.5).abs() < 1e-15);
        assert_eq!(r.non_paraphrase, ViolationStats::default());
    }

    #[test]
    fn rank_violation_single_candidate_and_ties() {
        // only the forward candidate exists when the reverse query sees a tie
        let c = corpus(&[("s", "t", Some(P))]);
        let rc = build_rank_comparison(&c);
        let mut s = TableScorer::new(&[(("s", "s"), 0.4), (("s", "t"), 0.9), (("t", "s"), 0.7)], 0.7);
        let scored = score_rank_comparison(&rc.groups, &mut s).unwrap();
        assert_eq!(scored.len(), 2);
        assert!(scored[0].is_violation());
        assert!(!scored[1].is_violation(), "ties are not violations");
    }

    #[test]
    fn rank_violation_bow_is_zero() {
        let c = corpus(&[
            ("a b", "A b!", Some(P)),
            ("a b", "b a", Some(N)),
            ("", "x", Some(N)),
            ("q", "q", Some(P)),
        ]);
        let rc = build_rank_comparison(&c);
        let r = rank_violations(&rc.groups, &mut BowScorer::default()).unwrap();
        assert_eq!(r.paraphrase.fraction, 0.0);
        assert_eq!(r.non_paraphrase.fraction, 0.0);
        assert_eq!(r.paraphrase.candidates + r.non_paraphrase.candidates, 6);
    }

    #[test]
    fn empty_groups_contribute_nothing() {
        let rc = build_rank_comparison(&corpus(&[("a", "a", Some(P))]));
        let r = rank_violations(&rc.groups, &mut BowScorer::default()).unwrap();
        assert_eq!(r, RankViolationReport::default());
    }

    #[test]
    fn binning_rule() {
        let edges = BinEdges::new(vec![0.0, 0.5, 1.0]).unwrap();
        let h = HistogramBins::from_values(HistCategory::Random, &edges, [0.1, 0.55, 0.9]);
        assert_eq!(h.counts, [1, 2]);
        let h = HistogramBins::from_values(HistCategory::Random, &edges, [0.5, 1.0, 0.0]);
        assert_eq!(h.counts, [1, 2]);
        let h = HistogramBins::from_values(HistCategory::Random, &edges, []);
        assert_eq!(h.counts, [0, 0]);
    }

    #[test]
    fn edges_validation() {
        assert!(BinEdges::new(vec![0.0, 0.5, 0.5, 1.0]).is_err());
        assert!(BinEdges::new(vec![1.0, 0.0]).is_err());
        assert!(BinEdges::new(vec![0.0]).is_err());
        assert!(BinEdges::new(vec![0.0, f64::NAN]).is_err());
        assert!(BinEdges::uniform(0, 0.0, 1.0).is_err());
        let u = BinEdges::uniform(50, 0.0, 1.0).unwrap();
        assert_eq!(u.bins(), 50);
        assert_eq!(u.edges()[50], 1.0);
        assert!(u.require_cover(-1.0, 1.0).is_err());
        let narrow = BinEdges::new(vec![0.2, 1.0]).unwrap();
        let err = score_histogram(&[], &mut BowScorer::default(), &narrow).unwrap_err();
        assert!(matches!(err, ProbeError::Edges(_)));
    }

    #[test]
    fn bow_identical_mass_in_top_bin() {
        let c = corpus(&[("a b", "c d", Some(N)), ("a b", "a c", Some(P))]);
        let edges = BinEdges::uniform(10, 0.0, 1.0).unwrap();
        let hists = score_histogram(&histogram_categories(&c), &mut BowScorer::default(), &edges).unwrap();
        let cats: Vec<_> = hists.iter().map(|h| h.category).collect();
        assert_eq!(
            cats,
            [HistCategory::Random, HistCategory::Paraphrase, HistCategory::NonParaphrase, HistCategory::Identical]
        );
        let identical = &hists[3];
        assert_eq!(identical.total(), 3);
        assert_eq!(identical.counts[9], 3);
        assert_eq!(hists[0].total(), 4);
        assert_eq!(hists[2].counts[0], 2);
        assert_eq!(hists[1].counts[3], 2); // 1/3
    }

    #[test]
    fn difference_histogram_bow_nonpositive() {
        let c = corpus(&[("a b", "c d", Some(N)), ("a b", "a c", Some(P)), ("x y", "X y", Some(P))]);
        let rc = build_rank_comparison(&c);
        let scored = score_rank_comparison(&rc.groups, &mut BowScorer::default()).unwrap();
        let edges = BinEdges::uniform(20, -1.0, 1.0).unwrap();
        let hists = difference_histogram(&scored, &edges).unwrap();
        assert_eq!(hists[0].total(), 6);
        for h in &hists {
            for (i, count) in h.counts.iter().enumerate() {
                if *count > 0 {
                    assert!(h.bin_edges[i] <= 0.0);
                }
            }
        }
        assert!(difference_histogram(&scored, &BinEdges::uniform(5, 0.0, 1.0).unwrap()).is_err());
    }
}
