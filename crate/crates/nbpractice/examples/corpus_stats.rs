//! Walk a directory of notebooks, analyze each one, and print the
//! corpus-level adoption table.
//!
//! ```sh
//! cargo run --example corpus_stats [directory]
//! ```

use std::path::{Path, PathBuf};

use nbpractice::checks::analyze_notebook;
use nbpractice::config::Config;
use nbpractice::ingest::ingest;
use nbpractice::report::render_markdown_summary;
use nbpractice::stats::aggregate;

fn main() {
    let root = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus")
    });
    let corpus = ingest(&[root]).expect("at least one input");
    let config = Config::default();

    println!(
        "ingested {} notebook(s), {} parse failure(s), {} duplicate(s) dropped\n",
        corpus.notebooks.len(),
        corpus.failures.len(),
        corpus.dedup_log.len()
    );

    let metrics: Vec<_> = corpus
        .notebooks
        .iter()
        .map(|nb| {
            analyze_notebook(nb, &config, Some(&corpus.index))
                .expect("no external linter configured")
                .0
        })
        .collect();

    let summary = aggregate("ALL", &config.digest(), config.md_denominator, &metrics);
    print!("{}", render_markdown_summary(&[summary]));
}
