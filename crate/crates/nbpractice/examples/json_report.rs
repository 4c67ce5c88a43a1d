//! Produce the machine-readable run report a CI pipeline would consume:
//! per-notebook metrics and findings, the corpus summary, and an exit code
//! derived from the worst finding.
//!
//! ```sh
//! cargo run --example json_report [directory]
//! ```

use std::path::{Path, PathBuf};

use nbpractice::checks::analyze_notebook;
use nbpractice::config::{Config, FailSeverity};
use nbpractice::ingest::ingest;
use nbpractice::report::{FailureReport, NotebookReport, RunReport};
use nbpractice::stats::StatsAccumulator;

fn main() {
    let root = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus")
    });
    let corpus = ingest(&[root]).expect("at least one input");
    let config = Config::default();
    let digest = config.digest();

    let mut report = RunReport::new(&config);
    let mut acc = StatsAccumulator::new("ALL", &digest, config.md_denominator);
    for nb in &corpus.notebooks {
        let (metrics, findings) = analyze_notebook(nb, &config, Some(&corpus.index))
            .expect("no external linter configured");
        acc.add(&metrics);
        report.notebooks.push(NotebookReport {
            path: nb.path.clone(),
            content_hash: nb.content_hash.clone(),
            metrics,
            findings,
        });
    }
    report.summary = Some(acc.finalize());
    report.dedup_log = corpus.dedup_log.clone();
    report.failures = corpus
        .failures
        .iter()
        .map(|e| FailureReport {
            path: e.path().to_owned(),
            error: e.to_string(),
        })
        .collect();
    report.sort();

    println!("{}", report.to_json());
    eprintln!(
        "exit code under --fail-severity=warning: {}",
        report.exit_code(FailSeverity::Warning)
    );
}
