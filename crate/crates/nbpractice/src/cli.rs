//! Command-line front end: argument parsing, config resolution, and the
//! four subcommands (`lint`, `stats`, `extract`, `check-list`).
//!
//! Everything here is a thin shell over the library: parse flags, load
//! configuration, run the corpus pipeline, render. `run` returns the
//! process exit code instead of exiting so tests can drive it directly.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

use crate::checks::{analyze_notebook, AnalyzeError};
use crate::config::{Config, ConfigError, FailSeverity, Overrides};
use crate::extract::extract_script;
use crate::ingest::{ingest, IngestError};
use crate::notebook::{parse_notebook, ParseError};
use crate::registry;
use crate::report::{
    render_findings_text, render_histograms_csv, render_markdown_summary, FailureReport,
    NotebookReport, RunReport,
};
use crate::scan::MatchScope;
use crate::stats::{subset_compare, StatsAccumulator, SubsetError};

/// Environment variable consulted when `--config` is absent.
pub const CONFIG_ENV: &str = "NBPRACTICE_CONFIG";

#[derive(Debug, Parser)]
#[command(
    name = "nbpractice",
    version,
    about = "Audit Jupyter notebooks against collaboration best practices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML config file (falls back to $NBPRACTICE_CONFIG).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Worker threads for notebook analysis (default: all logical CPUs).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Run code-level checks even on non-Python kernels.
    #[arg(long, global = true)]
    allow_any_kernel: bool,

    /// Treat null execution counters as out-of-order.
    #[arg(long, global = true)]
    strict_bp5: bool,

    /// Test-import matching scope: full | top.
    #[arg(long, global = true, value_name = "SCOPE", value_parser = parse_scope)]
    test_match_scope: Option<MatchScope>,

    /// Lowest finding severity that fails the run: none | info | warning | error.
    #[arg(long, global = true, value_name = "SEV", value_parser = parse_fail_severity)]
    fail_severity: Option<FailSeverity>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check notebooks and report findings.
    Lint {
        /// Notebook files or directories to scan recursively.
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Emit the full run report as JSON instead of finding lines.
        #[arg(long)]
        json: bool,
    },
    /// Aggregate statistics over a notebook corpus.
    Stats {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Emit the full run report as JSON instead of a summary table.
        #[arg(long)]
        json: bool,
        /// Write position histograms as CSV to this file.
        #[arg(long, value_name = "FILE")]
        csv_hist: Option<PathBuf>,
        /// CSV of external quality scores (`path,score` with header) for
        /// subset comparison at the configured percentiles.
        #[arg(long, value_name = "FILE")]
        scores: Option<PathBuf>,
    },
    /// Print the Python script extracted from one notebook.
    Extract {
        notebook: PathBuf,
        /// Write the script-line → notebook-cell map as JSON to this file.
        #[arg(long, value_name = "FILE")]
        map_out: Option<PathBuf>,
    },
    /// List the best-practice catalog.
    CheckList {
        /// Emit the catalog as JSON.
        #[arg(long)]
        json: bool,
    },
}

fn parse_scope(s: &str) -> Result<MatchScope, String> {
    match s {
        "full" => Ok(MatchScope::Full),
        "top" => Ok(MatchScope::Top),
        other => Err(format!("unknown scope {other:?}, expected full or top")),
    }
}

fn parse_fail_severity(s: &str) -> Result<FailSeverity, String> {
    match s {
        "none" => Ok(FailSeverity::None),
        "info" => Ok(FailSeverity::Info),
        "warning" => Ok(FailSeverity::Warning),
        "error" => Ok(FailSeverity::Error),
        other => Err(format!(
            "unknown severity {other:?}, expected none, info, warning or error"
        )),
    }
}

/// Anything that stops a subcommand, mapped onto the exit-code contract:
/// 2 for usage/config/environment problems, 3 for an unparseable notebook
/// given directly to `extract`.
#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Ingest(#[from] IngestError),
    #[error("{0}")]
    Notebook(#[from] ParseError),
    #[error("{0}")]
    Analyze(#[from] AnalyzeError),
    #[error("{path}: {detail}")]
    Io { path: String, detail: String },
    #[error("{path}: bad scores file: {detail}")]
    Scores { path: String, detail: String },
    #[error("{0}")]
    Subset(#[from] SubsetError),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Notebook(_) => 3,
            _ => 2,
        }
    }
}

/// Parse `args` (including argv[0]) and run. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("nbpractice: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    let overrides = Overrides {
        allow_any_kernel: cli.allow_any_kernel,
        strict_bp5: cli.strict_bp5,
        test_match_scope: cli.test_match_scope,
        fail_severity: cli.fail_severity,
    };
    let config_path = cli
        .config
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let config = Config::load(config_path.as_deref(), &overrides)?;

    match cli.command {
        Command::Lint { paths, json } => {
            let report = with_pool(cli.jobs, || analyze_corpus(&paths, &config))?;
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", render_findings_text(&report));
            }
            Ok(report.exit_code(config.fail_severity))
        }
        Command::Stats {
            paths,
            json,
            csv_hist,
            scores,
        } => {
            let mut report = with_pool(cli.jobs, || analyze_corpus(&paths, &config))?;
            attach_summaries(&mut report, &config, scores.as_deref())?;
            if let Some(csv_path) = csv_hist {
                let summary = report.summary.as_ref().expect("stats always aggregates");
                write_file(&csv_path, &render_histograms_csv(summary))?;
            }
            if json {
                println!("{}", report.to_json());
            } else {
                let mut tables = Vec::new();
                tables.extend(report.summary.clone());
                tables.extend(report.subset_summaries.iter().cloned());
                print!("{}", render_markdown_summary(&tables));
                for path in &report.unscored {
                    eprintln!("nbpractice: no score for {path}");
                }
            }
            Ok(report.exit_code(config.fail_severity))
        }
        Command::Extract { notebook, map_out } => {
            let nb = parse_notebook(&notebook)?;
            let script = extract_script(&nb, config.strip);
            if let Some(map_path) = map_out {
                let map_json = serde_json::to_string_pretty(&script.map_entries)
                    .expect("map serializes");
                write_file(&map_path, &map_json)?;
            }
            print!("{}", script.text());
            Ok(0)
        }
        Command::CheckList { json } => {
            if json {
                let entries: Vec<serde_json::Value> =
                    registry::registry().iter().map(|e| e.to_json()).collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&entries).expect("registry serializes")
                );
            } else {
                for entry in registry::registry() {
                    let tag = if entry.operationalized {
                        " [checked]"
                    } else {
                        ""
                    };
                    println!(
                        "{:<4} {}{tag}\n     theme: {} | sources: {}",
                        entry.bp_id(),
                        entry.title,
                        entry.theme,
                        entry.support_count(),
                    );
                }
            }
            Ok(0)
        }
    }
}

/// Run `f` inside a rayon pool sized by `--jobs`, or the global pool.
fn with_pool<R: Send>(
    jobs: Option<usize>,
    f: impl FnOnce() -> Result<R, CliError> + Send,
) -> Result<R, CliError> {
    match jobs {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Io {
                path: "<thread pool>".to_owned(),
                detail: e.to_string(),
            })?
            .install(f),
    }
}

/// Ingest, analyze in parallel, and assemble a sorted report.
fn analyze_corpus(paths: &[PathBuf], config: &Config) -> Result<RunReport, CliError> {
    let corpus = ingest(paths)?;
    let notebooks: Vec<NotebookReport> = corpus
        .notebooks
        .par_iter()
        .map(|nb| {
            analyze_notebook(nb, config, Some(&corpus.index)).map(|(metrics, findings)| {
                NotebookReport {
                    path: nb.path.clone(),
                    content_hash: nb.content_hash.clone(),
                    metrics,
                    findings,
                }
            })
        })
        .collect::<Result<_, _>>()?;

    let mut report = RunReport::new(config);
    report.notebooks = notebooks;
    report.failures = corpus
        .failures
        .iter()
        .map(|e| FailureReport {
            path: e.path().to_owned(),
            error: e.to_string(),
        })
        .collect();
    report.dedup_log = corpus.dedup_log;
    report.sort();
    Ok(report)
}

/// Compute the corpus summary and, with a scores file, the subset
/// comparison at the configured percentiles.
fn attach_summaries(
    report: &mut RunReport,
    config: &Config,
    scores_path: Option<&Path>,
) -> Result<(), CliError> {
    let digest = config.digest();
    let mut acc = StatsAccumulator::new("ALL", &digest, config.md_denominator);
    for nb in &report.notebooks {
        acc.add(&nb.metrics);
    }
    report.summary = Some(acc.finalize());

    let Some(scores_path) = scores_path else {
        return Ok(());
    };
    let raw_scores = read_scores(scores_path)?;
    // Score rows may address notebooks by full reported path or by file
    // name; resolve to the reported path, exact match winning.
    let mut resolved: BTreeMap<String, f64> = BTreeMap::new();
    for nb in &report.notebooks {
        let by_name = Path::new(&nb.path)
            .file_name()
            .and_then(|n| n.to_str())
            .and_then(|n| raw_scores.get(n));
        if let Some(&score) = raw_scores.get(&nb.path).or(by_name) {
            resolved.insert(nb.path.clone(), score);
        }
    }
    let items: Vec<(String, crate::checks::NotebookMetrics)> = report
        .notebooks
        .iter()
        .map(|nb| (nb.path.clone(), nb.metrics.clone()))
        .collect();
    let cmp = subset_compare(
        &items,
        &resolved,
        &config.percentiles,
        &digest,
        config.md_denominator,
    )?;
    // The ALL column is already in `summary`.
    report.subset_summaries = cmp.summaries.into_iter().skip(1).collect();
    report.unscored = cmp.unscored;
    report.sort();
    Ok(())
}

/// Read a `path,score` CSV (header required).
fn read_scores(path: &Path) -> Result<BTreeMap<String, f64>, CliError> {
    let bad = |detail: String| CliError::Scores {
        path: path.display().to_string(),
        detail,
    };
    let mut reader = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    if headers.len() < 2 || &headers[0] != "path" || &headers[1] != "score" {
        return Err(bad(format!(
            "expected header `path,score`, found {:?}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut scores = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let score: f64 = record[1]
            .trim()
            .parse()
            .map_err(|e| bad(format!("score {:?}: {e}", &record[1])))?;
        scores.insert(record[0].to_owned(), score);
    }
    if scores.is_empty() {
        return Err(bad("no score rows".to_owned()));
    }
    Ok(scores)
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        detail: e.to_string(),
    })
}
