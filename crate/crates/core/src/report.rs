//! Report records and their CSV / JSON emission.
//!
//! Table CSVs start with a `# config_digest: <hex>` comment line, followed by
//! a header row. `report.json` always carries unscaled values.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{CorpusStats, SkippedRow, SourceFormat};
use crate::probes::{
    ClassificationReport, HistogramBins, IdenticalError, RankViolationReport, ReverseDisagreement,
};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Unit,
    #[default]
    Percent,
}

impl FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unit" => Ok(Scale::Unit),
            "percent" => Ok(Scale::Percent),
            other => Err(format!("unknown scale `{other}`")),
        }
    }
}

/// Renders `value` for a table cell.
///
/// Percent scale multiplies by 100 and rounds to two decimals, half away
/// from zero, on the shortest decimal representation of `value` (so 0.9010
/// becomes `90.10`, never `90.09`). Unit scale prints the shortest
/// round-tripping representation unrounded.
pub fn format_scaled(value: f64, scale: Scale) -> String {
    match scale {
        Scale::Unit => format!("{value}"),
        Scale::Percent => format_percent(value),
    }
}

fn format_percent(value: f64) -> String {
    if !value.is_finite() {
        return format!("{value}");
    }
    // shortest digits: value = mantissa * 10^(exp - digits + 1)
    let sci = format!("{:e}", value.abs());
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let mantissa: u128 = digits.parse().expect("mantissa digits");
    // hundredths of a percent = value * 10^4
    let shift = exp - (digits.len() as i32 - 1) + 4;
    let hundredths = if shift >= 0 {
        match 10u128.checked_pow(shift as u32).and_then(|p| mantissa.checked_mul(p)) {
            Some(v) => v,
            None => return format!("{:.2}", value * 100.0),
        }
    } else if -shift > 38 {
        0
    } else {
        let div = 10u128.pow((-shift) as u32);
        let (q, r) = (mantissa / div, mantissa % div);
        if r * 2 >= div {
            q + 1
        } else {
            q
        }
    };
    let sign = if value < 0.0 && hundredths != 0 { "-" } else { "" };
    format!("{sign}{}.{:02}", hundredths / 100, hundredths % 100)
}

/// One named number produced by a probe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    pub probe: String,
    pub name: String,
    pub value: f64,
    /// Items the value was computed over.
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flagged: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusMeta {
    pub name: String,
    pub format: SourceFormat,
    pub data_path: String,
    pub data_sha256: String,
    pub data_rows: usize,
    pub emitted: usize,
    pub skipped: usize,
    pub discarded: usize,
    pub stats: CorpusStats,
    pub skipped_rows: Vec<SkippedRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankSection {
    pub groups: usize,
    pub excluded_self_pairs: usize,
    #[serde(flatten)]
    pub report: RankViolationReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramSection {
    pub score: Vec<HistogramBins>,
    pub difference: Vec<HistogramBins>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub config_digest: String,
    pub config: serde_json::Value,
    pub corpus: CorpusMeta,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scorer: Option<String>,
    pub metrics: Vec<MetricRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reverse_disagreement: Option<ReverseDisagreement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identical_error: Option<IdenticalError>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<RankSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub histograms: Option<HistogramSection>,
}

impl ProbeReport {
    pub fn metric(&self, name: &str) -> Option<&MetricRecord> {
        self.metrics.iter().find(|m| m.name == name)
    }

    /// Appends the flat metric records for every probe section present.
    pub fn collect_metrics(&mut self) {
        let mut out = Vec::new();
        let mut push = |probe: &str, name: &str, value: f64, count: usize, flagged: Option<usize>| {
            out.push(MetricRecord {
                probe: probe.to_owned(),
                name: name.to_owned(),
                value,
                count,
                flagged,
            })
        };
        if let Some(c) = &self.classification {
            push("classification", "accuracy", c.accuracy, c.total(), None);
            push("classification", "f1", c.f1, c.total(), None);
        }
        if let Some(r) = &self.reverse_disagreement {
            push("reverse", "reverse_disagreement", r.ratio.value, r.ratio.evaluated, Some(r.ratio.flagged));
        }
        if let Some(r) = &self.identical_error {
            push("identical", "identical_error", r.ratio.value, r.ratio.evaluated, Some(r.ratio.flagged));
        }
        if let Some(rank) = &self.rank {
            let (p, n) = (rank.report.paraphrase, rank.report.non_paraphrase);
            push("rank", "paraphrase_gt_identical", p.fraction, p.candidates, Some(p.violations));
            push("rank", "paraphrase_avg_diff", p.avg_diff, p.violations, None);
            push("rank", "non_paraphrase_gt_identical", n.fraction, n.candidates, Some(n.violations));
            push("rank", "non_paraphrase_avg_diff", n.avg_diff, n.violations, None);
        }
        self.metrics = out;
    }
}

fn csv_error(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    }
}

fn write_csv(path: &Path, digest: &str, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut buf = Vec::new();
    writeln!(buf, "# config_digest: {digest}")?;
    {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut buf);
        w.write_record(header).map_err(csv_error)?;
        for row in rows {
            w.write_record(row).map_err(csv_error)?;
        }
        w.flush()?;
    }
    fs::write(path, buf)
}

/// Writes one CSV per table family present in `report` under `dir/tables`.
pub fn emit_tables(report: &ProbeReport, scale: Scale, dir: &Path) -> io::Result<Vec<PathBuf>> {
    let tables = dir.join("tables");
    fs::create_dir_all(&tables)?;
    let dataset = report.corpus.name.clone();
    let model = report.scorer.clone().unwrap_or_default();
    let cell = |name: &str| {
        report
            .metric(name)
            .map(|m| format_scaled(m.value, scale))
            .unwrap_or_default()
    };
    let count = |name: &str| report.metric(name).map(|m| m.count.to_string()).unwrap_or_default();
    let mut written = Vec::new();

    if report.classification.is_some() {
        let path = tables.join("classification.csv");
        write_csv(
            &path,
            &report.config_digest,
            &["dataset", "model", "acc", "f1", "n"],
            &[vec![dataset.clone(), model.clone(), cell("accuracy"), cell("f1"), count("accuracy")]],
        )?;
        written.push(path);
    }

    if report.reverse_disagreement.is_some() || report.identical_error.is_some() {
        let path = tables.join("asymmetry.csv");
        write_csv(
            &path,
            &report.config_digest,
            &["dataset", "model", "reverse_order", "identical", "reverse_n", "identical_n"],
            &[vec![
                dataset.clone(),
                model.clone(),
                cell("reverse_disagreement"),
                cell("identical_error"),
                count("reverse_disagreement"),
                count("identical_error"),
            ]],
        )?;
        written.push(path);
    }

    if report.rank.is_some() {
        let path = tables.join("rank_violation.csv");
        write_csv(
            &path,
            &report.config_digest,
            &[
                "dataset",
                "model",
                "paraphrase_gt_identical",
                "paraphrase_avg_diff",
                "non_paraphrase_gt_identical",
                "non_paraphrase_avg_diff",
                "paraphrase_n",
                "non_paraphrase_n",
            ],
            &[vec![
                dataset,
                model,
                cell("paraphrase_gt_identical"),
                cell("paraphrase_avg_diff"),
                cell("non_paraphrase_gt_identical"),
                cell("non_paraphrase_avg_diff"),
                count("paraphrase_gt_identical"),
                count("non_paraphrase_gt_identical"),
            ]],
        )?;
        written.push(path);
    }
    Ok(written)
}

fn histogram_rows(bins: &[HistogramBins]) -> Vec<Vec<String>> {
    bins.iter()
        .flat_map(|h| {
            h.counts.iter().enumerate().map(move |(i, count)| {
                vec![
                    h.category.as_str().to_owned(),
                    format!("{}", h.bin_edges[i]),
                    format!("{}", h.bin_edges[i + 1]),
                    count.to_string(),
                ]
            })
        })
        .collect()
}

/// Writes `hist/score.csv` and `hist/score_diff.csv`, one row per (category, bin).
pub fn emit_histograms(section: &HistogramSection, digest: &str, dir: &Path) -> io::Result<Vec<PathBuf>> {
    let hist = dir.join("hist");
    fs::create_dir_all(&hist)?;
    let header = ["category", "bin_lo", "bin_hi", "count"];
    let score = hist.join("score.csv");
    write_csv(&score, digest, &header, &histogram_rows(&section.score))?;
    let diff = hist.join("score_diff.csv");
    write_csv(&diff, digest, &header, &histogram_rows(&section.difference))?;
    Ok(vec![score, diff])
}

pub fn emit_json(report: &ProbeReport, dir: &Path) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join("report.json");
    let mut body = serde_json::to_vec_pretty(report).map_err(io::Error::other)?;
    body.push(b'\n');
    fs::write(&path, body)?;
    Ok(path)
}
