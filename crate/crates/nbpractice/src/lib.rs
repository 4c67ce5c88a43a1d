//! Static analysis for Jupyter notebooks, focused on collaboration hygiene.
//!
//! The library parses `.ipynb` files (nbformat 4), extracts their Python code
//! into a linear script with a bidirectional line map, scans that script for
//! imports and definitions, runs a small native lint pass (optionally bridged
//! to an external linter), and evaluates a catalog of notebook best practices.
//! Per-notebook results can be aggregated into corpus-level statistics:
//! adoption rates, five-number summaries, and positional histograms.
//!
//! The typical flow is:
//!
//! 1. [`notebook::parse_notebook`] — read one `.ipynb` into [`notebook::Notebook`]
//! 2. [`extract::extract_script`] — flatten code cells into a script + line map
//! 3. [`checks::analyze_notebook`] — per-notebook metrics and findings
//! 4. [`stats::aggregate`] / [`stats::StatsAccumulator`] — corpus summaries
//! 5. [`report`] / [`cli`] — JSON and human-readable output
//!
//! Runnable demonstrations live under `examples/`; each one exercises a major
//! capability end to end against the bundled fixtures (try
//! `cargo run --example analyze_notebook`). The `nbpractice` binary is a thin
//! wrapper over [`cli::run`].

pub mod checks;
pub mod cli;
pub mod config;
pub mod extract;
pub mod ingest;
pub mod lint;
pub mod markdown;
pub mod notebook;
pub mod registry;
pub mod report;
pub mod scan;
pub mod stats;
