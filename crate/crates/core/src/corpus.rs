//! Corpus ingestion for the paraphrase datasets.
//!
//! Every supported file layout is parsed in one streaming pass into a
//! [`Corpus`]. Rows that cannot be mapped onto a [`SentencePair`] are never
//! dropped silently: they are recorded in a [`ParseTally`] returned next to
//! the corpus, so that `emitted + skipped + discarded == data_rows` holds for
//! every parse.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("i/o error while reading corpus: {0}")]
    Io(#[from] std::io::Error),
    #[error("missing or unexpected header for {format} input: found {found:?}")]
    MissingHeader { format: SourceFormat, found: String },
    #[error("cannot serialize pair {id}: field contains a tab or newline")]
    Unserializable { id: String },
}

/// A raw, untokenized sentence. Stored byte-exact as read.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Sentence(String);

impl Sentence {
    pub fn new(text: impl Into<String>) -> Self {
        Sentence(text.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Sentence {
    fn from(s: &str) -> Self {
        Sentence(s.to_owned())
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Paraphrase,
    NonParaphrase,
}

impl Label {
    pub fn is_paraphrase(self) -> bool {
        self == Label::Paraphrase
    }

    fn from_binary_field(field: &str) -> Option<Label> {
        match field {
            "1" => Some(Label::Paraphrase),
            "0" => Some(Label::NonParaphrase),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentencePair {
    pub id: String,
    pub s1: Sentence,
    pub s2: Sentence,
    pub label: Option<Label>,
}

impl SentencePair {
    pub fn new(
        id: impl Into<String>,
        s1: impl Into<Sentence>,
        s2: impl Into<Sentence>,
        label: Option<Label>,
    ) -> Self {
        SentencePair {
            id: id.into(),
            s1: s1.into(),
            s2: s2.into(),
            label,
        }
    }

    pub fn is_self_pair(&self) -> bool {
        self.s1 == self.s2
    }
}

impl From<String> for Sentence {
    fn from(s: String) -> Self {
        Sentence(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceFormat {
    Qqp,
    Paws,
    Mrpc,
    TwitterUrl,
    Canonical,
}

impl SourceFormat {
    fn expected_header(self) -> Option<&'static [&'static str]> {
        match self {
            SourceFormat::Qqp => Some(&[
                "id",
                "qid1",
                "qid2",
                "question1",
                "question2",
                "is_duplicate",
            ]),
            SourceFormat::Paws => Some(&["id", "sentence1", "sentence2", "label"]),
            SourceFormat::Mrpc => Some(&["Quality", "#1 ID", "#2 ID", "#1 String", "#2 String"]),
            SourceFormat::TwitterUrl => None,
            SourceFormat::Canonical => Some(&["id", "s1", "s2", "label"]),
        }
    }

    /// Header presence of the published file layout.
    pub fn has_header_by_default(self) -> bool {
        self.expected_header().is_some()
    }
}

impl fmt::Display for SourceFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SourceFormat::Qqp => "qqp",
            SourceFormat::Paws => "paws",
            SourceFormat::Mrpc => "mrpc",
            SourceFormat::TwitterUrl => "twitter",
            SourceFormat::Canonical => "canonical",
        })
    }
}

impl FromStr for SourceFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "qqp" => Ok(SourceFormat::Qqp),
            "paws" => Ok(SourceFormat::Paws),
            "mrpc" => Ok(SourceFormat::Mrpc),
            "twitter" | "twitter_url" => Ok(SourceFormat::TwitterUrl),
            "canonical" => Ok(SourceFormat::Canonical),
            other => Err(format!("unknown corpus format `{other}`")),
        }
    }
}

/// A named, ordered collection of sentence pairs. Order is source file order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub name: String,
    pub source_format: SourceFormat,
    pub pairs: Vec<SentencePair>,
}

impl Corpus {
    pub fn new(name: impl Into<String>, source_format: SourceFormat, pairs: Vec<SentencePair>) -> Self {
        Corpus {
            name: name.into(),
            source_format,
            pairs,
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn stats(&self) -> CorpusStats {
        let mut stats = CorpusStats {
            pairs: self.pairs.len(),
            distinct_sentences: distinct_sentences(self).len(),
            ..CorpusStats::default()
        };
        for pair in &self.pairs {
            match pair.label {
                Some(Label::Paraphrase) => stats.paraphrase += 1,
                Some(Label::NonParaphrase) => stats.non_paraphrase += 1,
                None => stats.unlabeled += 1,
            }
            if pair.is_self_pair() {
                stats.self_pairs += 1;
            }
        }
        stats
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub pairs: usize,
    pub paraphrase: usize,
    pub non_paraphrase: usize,
    pub unlabeled: usize,
    pub distinct_sentences: usize,
    pub self_pairs: usize,
}

/// Annotator agreement for a Twitter URL pair: `agree` of `total` said paraphrase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwitterLabel {
    agree: u8,
}

impl TwitterLabel {
    pub const TOTAL: u8 = 6;

    pub fn new(agree: u8) -> Option<Self> {
        (agree <= Self::TOTAL).then_some(TwitterLabel { agree })
    }

    pub fn agree(self) -> u8 {
        self.agree
    }

    /// Parses the `(k, 6)` field. Whitespace inside the parentheses is ignored.
    pub fn parse(field: &str) -> Option<Self> {
        let inner = field.trim().strip_prefix('(')?.strip_suffix(')')?;
        let (k, n) = inner.split_once(',')?;
        let k: u8 = k.trim().parse().ok()?;
        let n: u8 = n.trim().parse().ok()?;
        if n != Self::TOTAL {
            return None;
        }
        Self::new(k)
    }

    /// Majority mapping; `None` for the neutral 3-of-6 split, which is discarded.
    pub fn to_label(self) -> Option<Label> {
        match self.agree {
            0..=2 => Some(Label::NonParaphrase),
            3 => None,
            _ => Some(Label::Paraphrase),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedRow {
    /// 1-based physical line number in the input.
    pub line: usize,
    pub reason: String,
}

/// Row accounting for one parse. Blank lines are not data rows.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseTally {
    pub data_rows: usize,
    pub emitted: usize,
    pub discarded: usize,
    pub skipped: Vec<SkippedRow>,
}

impl ParseTally {
    pub fn skipped_count(&self) -> usize {
        self.skipped.len()
    }

    pub fn is_balanced(&self) -> bool {
        self.emitted + self.skipped.len() + self.discarded == self.data_rows
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub corpus: Corpus,
    pub tally: ParseTally,
}

#[derive(Debug, Clone)]
pub struct ParseOptions {
    pub name: String,
    /// `None` means the published layout for the format.
    pub has_header: Option<bool>,
}

impl ParseOptions {
    pub fn named(name: impl Into<String>) -> Self {
        ParseOptions {
            name: name.into(),
            has_header: None,
        }
    }

    pub fn with_header(mut self, has_header: bool) -> Self {
        self.has_header = Some(has_header);
        self
    }
}

enum RowOutcome {
    Pair(SentencePair),
    Discard,
    Malformed(String),
}

fn expect_columns(fields: &[&str], n: usize) -> Result<(), String> {
    if fields.len() == n {
        Ok(())
    } else {
        Err(format!("expected {n} columns, found {}", fields.len()))
    }
}

fn binary_label(field: &str) -> Result<Label, String> {
    Label::from_binary_field(field).ok_or_else(|| format!("label field {field:?} is not 0 or 1"))
}

fn map_row(format: SourceFormat, fields: &[&str], ordinal: usize) -> RowOutcome {
    let result = match format {
        SourceFormat::Qqp => expect_columns(fields, 6).and_then(|_| {
            Ok(RowOutcome::Pair(SentencePair::new(
                fields[0],
                fields[3],
                fields[4],
                Some(binary_label(fields[5])?),
            )))
        }),
        SourceFormat::Paws => expect_columns(fields, 4).and_then(|_| {
            Ok(RowOutcome::Pair(SentencePair::new(
                fields[0],
                fields[1],
                fields[2],
                Some(binary_label(fields[3])?),
            )))
        }),
        SourceFormat::Mrpc => expect_columns(fields, 5).and_then(|_| {
            Ok(RowOutcome::Pair(SentencePair::new(
                ordinal.to_string(),
                fields[3],
                fields[4],
                Some(binary_label(fields[0])?),
            )))
        }),
        SourceFormat::TwitterUrl => {
            // Some releases append the shared URL as a fourth column.
            if fields.len() != 3 && fields.len() != 4 {
                Err(format!("expected 3 or 4 columns, found {}", fields.len()))
            } else {
                match TwitterLabel::parse(fields[2]) {
                    None => Err(format!("unparseable annotator field {:?}", fields[2])),
                    Some(tl) => Ok(match tl.to_label() {
                        None => RowOutcome::Discard,
                        Some(label) => RowOutcome::Pair(SentencePair::new(
                            ordinal.to_string(),
                            fields[0],
                            fields[1],
                            Some(label),
                        )),
                    }),
                }
            }
        }
        SourceFormat::Canonical => expect_columns(fields, 4).and_then(|_| {
            let label = match fields[3] {
                "-" => None,
                other => Some(binary_label(other)?),
            };
            Ok(RowOutcome::Pair(SentencePair::new(
                fields[0], fields[1], fields[2], label,
            )))
        }),
    };
    result.unwrap_or_else(RowOutcome::Malformed)
}

fn header_matches(format: SourceFormat, line: &str) -> bool {
    let Some(expected) = format.expected_header() else {
        return true;
    };
    let line = line.strip_prefix('\u{feff}').unwrap_or(line);
    let fields: Vec<&str> = line.split('\t').collect();
    fields.len() == expected.len()
        && fields
            .iter()
            .zip(expected)
            .all(|(got, want)| got.trim().eq_ignore_ascii_case(want))
}

/// Reads one `\n`-terminated record, stripping the delimiter and one trailing `\r`.
fn next_record(reader: &mut impl BufRead, buf: &mut Vec<u8>) -> std::io::Result<bool> {
    buf.clear();
    if reader.read_until(b'\n', buf)? == 0 {
        return Ok(false);
    }
    if buf.last() == Some(&b'\n') {
        buf.pop();
    }
    if buf.last() == Some(&b'\r') {
        buf.pop();
    }
    Ok(true)
}

/// Parses any supported layout into a corpus plus its row tally.
pub fn parse(
    reader: impl BufRead,
    format: SourceFormat,
    options: &ParseOptions,
) -> Result<Parsed, CorpusError> {
    let mut reader = reader;
    let mut buf = Vec::new();
    let mut line_no = 0usize;
    let has_header = options
        .has_header
        .unwrap_or_else(|| format.has_header_by_default());

    if has_header {
        let found = if next_record(&mut reader, &mut buf)? {
            line_no += 1;
            String::from_utf8_lossy(&buf).into_owned()
        } else {
            String::new()
        };
        if !header_matches(format, &found) || found.is_empty() {
            return Err(CorpusError::MissingHeader { format, found });
        }
    }

    let mut pairs = Vec::new();
    let mut seen_ids = HashSet::new();
    let mut tally = ParseTally::default();

    while next_record(&mut reader, &mut buf)? {
        line_no += 1;
        if buf.is_empty() {
            continue;
        }
        tally.data_rows += 1;
        let outcome = match std::str::from_utf8(&buf) {
            Err(_) => RowOutcome::Malformed("invalid UTF-8".to_owned()),
            Ok(line) => {
                let fields: Vec<&str> = line.split('\t').collect();
                map_row(format, &fields, tally.data_rows)
            }
        };
        match outcome {
            RowOutcome::Pair(pair) => {
                if seen_ids.insert(pair.id.clone()) {
                    pairs.push(pair);
                    tally.emitted += 1;
                } else {
                    tally.skipped.push(SkippedRow {
                        line: line_no,
                        reason: format!("duplicate id {:?}", pair.id),
                    });
                }
            }
            RowOutcome::Discard => tally.discarded += 1,
            RowOutcome::Malformed(reason) => tally.skipped.push(SkippedRow {
                line: line_no,
                reason,
            }),
        }
    }

    Ok(Parsed {
        corpus: Corpus::new(options.name.clone(), format, pairs),
        tally,
    })
}

/// QQP: `id, qid1, qid2, question1, question2, is_duplicate`.
pub fn parse_qqp(reader: impl BufRead, options: &ParseOptions) -> Result<Parsed, CorpusError> {
    parse(reader, SourceFormat::Qqp, options)
}

/// PAWS-QQP: `id, sentence1, sentence2, label`. The corpus name is
/// `paws_qqp/<split>`, where the split is taken from `options.name`.
pub fn parse_paws(reader: impl BufRead, options: &ParseOptions) -> Result<Parsed, CorpusError> {
    let mut parsed = parse(reader, SourceFormat::Paws, options)?;
    if !parsed.corpus.name.starts_with("paws_qqp") {
        parsed.corpus.name = format!("paws_qqp/{}", parsed.corpus.name);
    }
    Ok(parsed)
}

/// MRPC: `Quality, #1 ID, #2 ID, #1 String, #2 String`. Pair ids are the
/// 1-based data row ordinal, since the sentence ids are not unique per pair.
pub fn parse_mrpc(reader: impl BufRead, options: &ParseOptions) -> Result<Parsed, CorpusError> {
    parse(reader, SourceFormat::Mrpc, options)
}

/// Twitter URL corpus: `sentence1, sentence2, (k, 6)`; headerless.
pub fn parse_twitter_url(reader: impl BufRead, options: &ParseOptions) -> Result<Parsed, CorpusError> {
    parse(reader, SourceFormat::TwitterUrl, options)
}

pub fn parse_canonical(reader: impl BufRead, options: &ParseOptions) -> Result<Parsed, CorpusError> {
    parse(reader, SourceFormat::Canonical, options)
}

/// Writes `id\ts1\ts2\tlabel` with a header row; label is `1`, `0` or `-`.
pub fn write_canonical(corpus: &Corpus, mut out: impl Write) -> Result<(), CorpusError> {
    out.write_all(b"id\ts1\ts2\tlabel\n")?;
    for pair in &corpus.pairs {
        let fields = [pair.id.as_str(), pair.s1.as_str(), pair.s2.as_str()];
        if fields.iter().any(|f| f.contains(['\t', '\n', '\r'])) {
            return Err(CorpusError::Unserializable {
                id: pair.id.clone(),
            });
        }
        let label = match pair.label {
            Some(Label::Paraphrase) => "1",
            Some(Label::NonParaphrase) => "0",
            None => "-",
        };
        writeln!(out, "{}\t{}\t{}\t{}", fields[0], fields[1], fields[2], label)?;
    }
    out.flush()?;
    Ok(())
}

/// Every sentence appearing in either slot, once, in first-occurrence order.
pub fn distinct_sentences(corpus: &Corpus) -> Vec<Sentence> {
    let mut seen: IndexSet<&Sentence> = IndexSet::new();
    for pair in &corpus.pairs {
        seen.insert(&pair.s1);
        seen.insert(&pair.s2);
    }
    seen.into_iter().cloned().collect()
}
