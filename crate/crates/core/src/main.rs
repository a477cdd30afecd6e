use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pairprobe::report::{format_scaled, Scale};
use pairprobe::run::{run, Probe, RunConfig, ScorerSpec, Task};
use pairprobe::scorer::{BowConfig, TokenizerConfig, Weighting};
use pairprobe::{SourceFormat, Threshold};

#[derive(Parser)]
#[command(name = "pairprobe", version, about = "Probe paraphrase scorers for order, identity and ranking failures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a dataset and write it as canonical TSV
    Ingest(DataArgs),
    /// Run the selected probes (all by default)
    Probe {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        scoring: ScoringArgs,
        /// Comma-separated: classification,reverse,identical,rank,hist
        #[arg(long, value_delimiter = ',', default_value = "classification,reverse,identical,rank,hist")]
        probes: Vec<Probe>,
    },
    /// Identical-vs-candidate rank violations
    Rank {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        scoring: ScoringArgs,
    },
    /// Score and score-difference histograms
    Hist {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        scoring: ScoringArgs,
    },
    /// Write reverse- and identical-augmented training files
    Augment(DataArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Qqp,
    Paws,
    Mrpc,
    Twitter,
    Canonical,
}

impl From<FormatArg> for SourceFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Qqp => SourceFormat::Qqp,
            FormatArg::Paws => SourceFormat::Paws,
            FormatArg::Mrpc => SourceFormat::Mrpc,
            FormatArg::Twitter => SourceFormat::TwitterUrl,
            FormatArg::Canonical => SourceFormat::Canonical,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ScorerKind {
    Bow,
    External,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Unit,
    Percent,
}

#[derive(Args)]
struct DataArgs {
    /// Dataset file
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum)]
    format: FormatArg,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
    /// Corpus name (defaults to the file stem)
    #[arg(long)]
    name: Option<String>,
    /// Treat the first line as data even for formats published with a header
    #[arg(long, conflicts_with = "header")]
    no_header: bool,
    /// Expect a header line even for headerless formats
    #[arg(long)]
    header: bool,
}

#[derive(Args)]
struct ScoringArgs {
    #[arg(long, value_enum, default_value = "bow")]
    scorer: ScorerKind,
    /// Command line of an external scorer speaking NDJSON on stdin/stdout
    #[arg(long, conflicts_with = "external_addr")]
    external_cmd: Option<String>,
    /// HOST:PORT of an external scorer speaking NDJSON over TCP
    #[arg(long)]
    external_addr: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    /// Histogram bins over [0, 1]; the difference histogram uses twice as many over [-1, 1]
    #[arg(long, default_value_t = 50)]
    bins: usize,
    #[arg(long, value_enum, default_value = "percent")]
    scale: ScaleArg,
    /// Reserved; current probes are deterministic
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seconds to wait for each external scorer response
    #[arg(long, default_value_t = 60)]
    timeout_secs: u64,
    /// BOW: binary indicators instead of counts
    #[arg(long)]
    bow_binary: bool,
    /// BOW: keep original letter case
    #[arg(long)]
    bow_keep_case: bool,
    /// BOW: keep punctuation attached to tokens
    #[arg(long)]
    bow_keep_punct: bool,
}

fn base_config(task: Task, data: DataArgs) -> RunConfig {
    let mut config = RunConfig::new(task, data.data, data.format.into(), data.out);
    config.name = data.name;
    config.has_header = if data.no_header {
        Some(false)
    } else if data.header {
        Some(true)
    } else {
        None
    };
    config
}

fn apply_scoring(config: &mut RunConfig, s: ScoringArgs) -> Result<(), String> {
    config.threshold =
        Threshold::new(s.threshold).ok_or_else(|| format!("--threshold {} outside [0, 1]", s.threshold))?;
    config.bins = s.bins;
    config.seed = s.seed;
    config.timeout = Some(Duration::from_secs(s.timeout_secs));
    config.scale = match s.scale {
        ScaleArg::Unit => Scale::Unit,
        ScaleArg::Percent => Scale::Percent,
    };
    config.scorer = match s.scorer {
        ScorerKind::Bow => {
            if s.external_cmd.is_some() || s.external_addr.is_some() {
                return Err("--external-cmd/--external-addr need --scorer external".into());
            }
            ScorerSpec::Bow(BowConfig {
                tokenizer: TokenizerConfig {
                    lowercase: !s.bow_keep_case,
                    strip_punctuation: !s.bow_keep_punct,
                },
                weighting: if s.bow_binary { Weighting::Binary } else { Weighting::Counts },
            })
        }
        ScorerKind::External => match (s.external_cmd, s.external_addr) {
            (Some(command), None) => ScorerSpec::ExternalCmd { command },
            (None, Some(addr)) => ScorerSpec::ExternalAddr { addr },
            _ => return Err("--scorer external needs exactly one of --external-cmd or --external-addr".into()),
        },
    };
    Ok(())
}

fn build_config(command: Command) -> Result<RunConfig, String> {
    Ok(match command {
        Command::Ingest(data) => base_config(Task::Ingest, data),
        Command::Augment(data) => base_config(Task::Augment, data),
        Command::Probe { data, scoring, probes } => {
            let mut config = base_config(Task::Probe, data);
            apply_scoring(&mut config, scoring)?;
            config.probes = probes.into_iter().collect::<BTreeSet<_>>();
            config
        }
        Command::Rank { data, scoring } => {
            let mut config = base_config(Task::Probe, data);
            apply_scoring(&mut config, scoring)?;
            config.probes = [Probe::Rank].into();
            config
        }
        Command::Hist { data, scoring } => {
            let mut config = base_config(Task::Probe, data);
            apply_scoring(&mut config, scoring)?;
            config.probes = [Probe::Hist].into();
            config
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match build_config(cli.command) {
        Ok(config) => config,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match run(&config) {
        Ok(outcome) => {
            let report = &outcome.report;
            println!(
                "{}: {} pairs ({} skipped, {} discarded)",
                report.corpus.name, report.corpus.emitted, report.corpus.skipped, report.corpus.discarded
            );
            for m in &report.metrics {
                println!(
                    "  {:<28} {:>10}  n={}",
                    m.name,
                    format_scaled(m.value, config.scale),
                    m.count
                );
            }
            for path in &outcome.written {
                println!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
