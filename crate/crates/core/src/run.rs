//! End-to-end runs: ingest, transform, score, probe, emit.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::corpus::{self, Corpus, CorpusError, ParseOptions, Parsed, SourceFormat};
use crate::probes::{
    self, BinEdges, ProbeError,
};
use crate::report::{self, CorpusMeta, HistogramSection, ProbeReport, RankSection, Scale};
use crate::scorer::{BowConfig, BowScorer, CachingScorer, ExternalScorer, ScoreError, Scorer, Threshold};
use crate::transforms;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Probe {
    Classification,
    Reverse,
    Identical,
    Rank,
    Hist,
}

impl Probe {
    pub const ALL: [Probe; 5] = [
        Probe::Classification,
        Probe::Reverse,
        Probe::Identical,
        Probe::Rank,
        Probe::Hist,
    ];
}

impl FromStr for Probe {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "classification" | "classify" => Ok(Probe::Classification),
            "reverse" => Ok(Probe::Reverse),
            "identical" => Ok(Probe::Identical),
            "rank" => Ok(Probe::Rank),
            "hist" => Ok(Probe::Hist),
            other => Err(format!("unknown probe `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ScorerSpec {
    Bow(BowConfig),
    ExternalCmd { command: String },
    ExternalAddr { addr: String },
}

impl ScorerSpec {
    pub fn model_name(&self) -> &'static str {
        match self {
            ScorerSpec::Bow(_) => "bow",
            _ => "external",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    /// Parse and write the canonical TSV.
    Ingest,
    /// Write reverse- and identical-augmented training files.
    Augment,
    /// Score and probe.
    Probe,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::Ingest => "ingest",
            Task::Augment => "augment",
            Task::Probe => "probe",
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub task: Task,
    pub data: PathBuf,
    pub format: SourceFormat,
    pub has_header: Option<bool>,
    pub name: Option<String>,
    pub scorer: ScorerSpec,
    pub threshold: Threshold,
    pub probes: BTreeSet<Probe>,
    pub bins: usize,
    pub scale: Scale,
    /// Reserved for sampling probes; every current probe is deterministic.
    pub seed: u64,
    #[serde(skip)]
    pub out: PathBuf,
    #[serde(skip)]
    pub timeout: Option<Duration>,
}

impl RunConfig {
    pub fn new(task: Task, data: impl Into<PathBuf>, format: SourceFormat, out: impl Into<PathBuf>) -> Self {
        RunConfig {
            task,
            data: data.into(),
            format,
            has_header: None,
            name: None,
            scorer: ScorerSpec::Bow(BowConfig::default()),
            threshold: Threshold::default(),
            probes: Probe::ALL.into_iter().collect(),
            bins: 50,
            scale: Scale::Percent,
            seed: 0,
            out: out.into(),
            timeout: None,
        }
    }

    /// SHA-256 of the canonical JSON form. Output location and timeout are excluded.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(canonical))
    }

    fn validate(&self) -> Result<(), RunError> {
        if self.task == Task::Probe && self.probes.is_empty() {
            return Err(RunError::Config("select at least one probe".into()));
        }
        if self.bins == 0 {
            return Err(RunError::Config("--bins must be at least 1".into()));
        }
        Ok(())
    }

    fn corpus_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| {
            self.data
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "corpus".to_owned())
        })
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cannot read {path}: {source}")]
    DataRead { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    DataFormat { path: PathBuf, source: CorpusError },
    #[error("{0}")]
    Precondition(String),
    #[error("scorer error: {0}")]
    Scorer(#[from] ScoreError),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::DataRead { .. } | RunError::DataFormat { .. } | RunError::Precondition(_) => 3,
            RunError::Scorer(_) => 4,
            RunError::Output(_) => 5,
        }
    }
}

impl From<ProbeError> for RunError {
    fn from(e: ProbeError) -> Self {
        match e {
            ProbeError::Score(e) => RunError::Scorer(e),
            ProbeError::Edges(msg) => RunError::Config(msg),
            e @ ProbeError::Unlabeled { .. } => RunError::Precondition(e.to_string()),
        }
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub report: ProbeReport,
    pub written: Vec<PathBuf>,
}

pub fn load_corpus(config: &RunConfig) -> Result<(Parsed, String), RunError> {
    let bytes = fs::read(&config.data).map_err(|source| RunError::DataRead {
        path: config.data.clone(),
        source,
    })?;
    let sha = hex::encode(Sha256::digest(&bytes));
    let options = ParseOptions {
        name: config.corpus_name(),
        has_header: config.has_header,
    };
    let reader = BufReader::new(bytes.as_slice());
    let parsed = match config.format {
        SourceFormat::Paws => corpus::parse_paws(reader, &options),
        format => corpus::parse(reader, format, &options),
    }
    .map_err(|source| RunError::DataFormat {
        path: config.data.clone(),
        source,
    })?;
    Ok((parsed, sha))
}

fn build_scorer(config: &RunConfig) -> Result<Box<dyn Scorer>, RunError> {
    let timeout = config.timeout.unwrap_or(crate::scorer::DEFAULT_TIMEOUT);
    Ok(match &config.scorer {
        ScorerSpec::Bow(bow) => Box::new(BowScorer::new(*bow)),
        ScorerSpec::ExternalCmd { command } => Box::new(ExternalScorer::spawn(command, timeout)?),
        ScorerSpec::ExternalAddr { addr } => Box::new(ExternalScorer::connect(addr, timeout)?),
    })
}

fn write_tsv(corpus: &Corpus, path: &Path) -> Result<(), RunError> {
    let mut buf = Vec::new();
    corpus::write_canonical(corpus, &mut buf).map_err(|e| match e {
        CorpusError::Io(e) => RunError::Output(e),
        other => RunError::Precondition(other.to_string()),
    })?;
    Ok(fs::write(path, buf)?)
}

/// Executes one run. Nothing is written to `config.out` unless every
/// ingest and scoring step succeeded.
pub fn run(config: &RunConfig) -> Result<RunOutcome, RunError> {
    config.validate()?;
    let digest = config.digest();
    let (parsed, data_sha256) = load_corpus(config)?;
    let Parsed { corpus, tally } = parsed;

    let mut report = ProbeReport {
        config_digest: digest.clone(),
        config: serde_json::to_value(config).expect("config serializes"),
        corpus: CorpusMeta {
            name: corpus.name.clone(),
            format: corpus.source_format,
            data_path: config.data.display().to_string(),
            data_sha256,
            data_rows: tally.data_rows,
            emitted: tally.emitted,
            skipped: tally.skipped_count(),
            discarded: tally.discarded,
            stats: corpus.stats(),
            skipped_rows: tally.skipped,
        },
        scorer: None,
        metrics: Vec::new(),
        classification: None,
        reverse_disagreement: None,
        identical_error: None,
        rank: None,
        histograms: None,
    };

    let out = &config.out;
    let mut written = Vec::new();
    match config.task {
        Task::Ingest => {
            let canonical = corpus.clone();
            fs::create_dir_all(out)?;
            let path = out.join("corpus.tsv");
            write_tsv(&canonical, &path)?;
            written.push(path);
        }
        Task::Augment => {
            let dir = out.join("augmented");
            let reverse = transforms::augment_reverse(&corpus);
            let identical = transforms::augment_identical(&corpus);
            fs::create_dir_all(&dir)?;
            for (file, set) in [("reverse_augmented.tsv", &reverse), ("identical_augmented.tsv", &identical)] {
                let path = dir.join(file);
                write_tsv(set, &path)?;
                written.push(path);
            }
        }
        Task::Probe => {
            probe(config, &corpus, &mut report)?;
            if report.classification.is_some() || report.reverse_disagreement.is_some()
                || report.identical_error.is_some() || report.rank.is_some()
            {
                written.extend(report::emit_tables(&report, config.scale, out)?);
            }
            if let Some(section) = &report.histograms {
                written.extend(report::emit_histograms(section, &digest, out)?);
            }
        }
    }
    written.push(report::emit_json(&report, out)?);
    Ok(RunOutcome { report, written })
}

fn probe(config: &RunConfig, corpus: &Corpus, report: &mut ProbeReport) -> Result<(), RunError> {
    let wants = |p: Probe| config.probes.contains(&p);
    if wants(Probe::Classification) {
        if let Some(pair) = corpus.pairs.iter().find(|p| p.label.is_none()) {
            return Err(RunError::Precondition(format!(
                "classification needs gold labels; pair {} has none",
                pair.id
            )));
        }
    }
    let score_edges = BinEdges::uniform(config.bins, 0.0, 1.0)?;
    let diff_edges = BinEdges::uniform(2 * config.bins, -1.0, 1.0)?;

    let mut scorer = CachingScorer::new(build_scorer(config)?);
    report.scorer = Some(config.scorer.model_name().to_owned());
    let threshold = config.threshold;

    if wants(Probe::Classification) {
        report.classification = Some(probes::classification_metrics(corpus, &mut scorer, threshold)?);
    }
    if wants(Probe::Reverse) {
        report.reverse_disagreement = Some(probes::reverse_disagreement(corpus, &mut scorer, threshold)?);
    }
    if wants(Probe::Identical) {
        report.identical_error = Some(probes::identical_error_rate(corpus, &mut scorer, threshold)?);
    }
    if wants(Probe::Rank) || wants(Probe::Hist) {
        let comparison = transforms::build_rank_comparison(corpus);
        let scored = probes::score_rank_comparison(&comparison.groups, &mut scorer)?;
        if wants(Probe::Rank) {
            report.rank = Some(RankSection {
                groups: comparison.groups.len(),
                excluded_self_pairs: comparison.excluded_self_pairs,
                report: probes::RankViolationReport::from_scored(&scored),
            });
        }
        if wants(Probe::Hist) {
            let categories = probes::histogram_categories(corpus);
            report.histograms = Some(HistogramSection {
                score: probes::score_histogram(&categories, &mut scorer, &score_edges)?,
                difference: probes::difference_histogram(&scored, &diff_edges)?,
            });
        }
    }
    report.collect_metrics();
    Ok(())
}
