//! Corpus-level aggregation: rates, five-number summaries, and position
//! histograms over many notebooks' metrics.
//!
//! Aggregation runs through [`StatsAccumulator`], which stores raw counts
//! and value vectors so that accumulators can be merged (for parallel or
//! sharded runs) before a single `finalize` computes the summaries. Two
//! accumulators only merge when they were produced under the same
//! configuration digest.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::checks::NotebookMetrics;
use crate::config::MdDenominator;
use crate::lint::LintCategory;

/// Minimum, quartiles, and maximum of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiveNumber {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// The p-th quantile of sorted values by linear interpolation at rank
/// (n − 1)·p. Panics on an empty slice or unsorted input is undetected;
/// callers sort first.
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "percentile of empty sample");
    let rank = (sorted.len() - 1) as f64 * p;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let frac = rank - lo as f64;
        sorted[lo] * (1.0 - frac) + sorted[hi] * frac
    }
}

/// Five-number summary of an unsorted sample; `None` when empty.
pub fn five_number_summary(values: &[f64]) -> Option<FiveNumber> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("no NaN in samples"));
    Some(FiveNumber {
        min: sorted[0],
        q1: percentile(&sorted, 0.25),
        median: percentile(&sorted, 0.5),
        q3: percentile(&sorted, 0.75),
        max: *sorted.last().unwrap(),
    })
}

/// Counts of position fractions rolled into thirds of the document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Thirds {
    pub first: usize,
    pub middle: usize,
    pub last: usize,
}

/// Ten equal bins over [0, 1] plus the thirds roll-up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Histogram {
    pub bins: [usize; 10],
    pub thirds: Thirds,
    pub total: usize,
}

/// Bin index for a fraction in [0, 1]: bins are left-closed, the last is
/// closed on both ends so 1.0 lands in bin 9.
fn bin_index(p: f64) -> usize {
    ((p * 10.0).floor() as usize).min(9)
}

/// Histogram of position fractions. Values outside [0, 1] are a caller bug
/// and panic in debug builds; release builds clamp.
pub fn position_histogram(positions: &[f64]) -> Histogram {
    let mut bins = [0usize; 10];
    let mut thirds = Thirds::default();
    for &p in positions {
        debug_assert!((0.0..=1.0).contains(&p), "position {p} outside [0,1]");
        let p = p.clamp(0.0, 1.0);
        bins[bin_index(p)] += 1;
        if p <= 1.0 / 3.0 {
            thirds.first += 1;
        } else if p <= 2.0 / 3.0 {
            thirds.middle += 1;
        } else {
            thirds.last += 1;
        }
    }
    Histogram {
        bins,
        thirds,
        total: positions.len(),
    }
}

/// A proportion that keeps its raw counts. `value` is `None` when the
/// denominator is zero, with `reason` saying why.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rate {
    pub numerator: usize,
    pub denominator: usize,
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl Rate {
    pub fn new(numerator: usize, denominator: usize, empty_reason: &str) -> Self {
        if denominator == 0 {
            Rate {
                numerator,
                denominator,
                value: None,
                reason: Some(empty_reason.to_owned()),
            }
        } else {
            Rate {
                numerator,
                denominator,
                value: Some(numerator as f64 / denominator as f64),
                reason: None,
            }
        }
    }
}

/// Aggregated statistics for one set of notebooks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusSummary {
    pub label: String,
    pub n_notebooks: usize,
    pub n_executed: usize,
    /// Over executed notebooks only.
    pub rate_top_to_bottom: Rate,
    pub rate_function_def: Rate,
    pub rate_class_def: Rate,
    pub rate_local_import: Rate,
    pub rate_test_import: Rate,
    /// Over all notebooks.
    pub rate_md: Rate,
    /// Over notebooks that have markdown at all.
    pub rate_md_headings: Rate,
    /// Per category, the share of lint-checked notebooks where at least one
    /// finding of that category fired.
    pub lint_category_rates: BTreeMap<String, Rate>,
    /// Five-number summaries of per-notebook size and documentation counts.
    pub fives: BTreeMap<String, Option<FiveNumber>>,
    /// Position histograms across all contributing notebooks.
    pub histograms: BTreeMap<String, Histogram>,
}

/// Two accumulators disagreeing about how their numbers were produced.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MergeError {
    #[error("config digest mismatch: {left} vs {right}")]
    ConfigMismatch { left: String, right: String },
}

/// Raw counts and value vectors, mergeable, finalized into a summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsAccumulator {
    pub label: String,
    pub config_digest: String,
    md_denominator: MdDenominator,
    n_notebooks: usize,
    n_executed: usize,
    counts: BTreeMap<String, usize>,
    values: BTreeMap<String, Vec<f64>>,
    positions: BTreeMap<String, Vec<f64>>,
}

/// The `fives` keys that average over every contributing notebook.
const FIVES_KEYS: [&str; 13] = [
    "cells_per_notebook",
    "code_cells_per_notebook",
    "md_cells_per_notebook",
    "meaningful_md_words_per_notebook",
    "meaningful_md_lines_per_notebook",
    "md_heading_words_per_notebook",
    "words_per_md_heading",
    "empty_cells_per_notebook",
    "lines_per_notebook",
    "code_lines_per_notebook",
    "lines_per_cell",
    "lines_per_code_cell",
    "lines_per_md_cell",
];

const HISTOGRAM_KEYS: [&str; 6] = [
    "import_positions",
    "code_cell_positions",
    "md_cell_positions",
    "executed_cell_positions",
    "non_executed_cell_positions",
    "empty_cell_positions",
];

impl StatsAccumulator {
    pub fn new(label: &str, config_digest: &str, md_denominator: MdDenominator) -> Self {
        StatsAccumulator {
            label: label.to_owned(),
            config_digest: config_digest.to_owned(),
            md_denominator,
            n_notebooks: 0,
            n_executed: 0,
            counts: BTreeMap::new(),
            values: BTreeMap::new(),
            positions: BTreeMap::new(),
        }
    }

    fn bump(&mut self, key: &str) {
        *self.counts.entry(key.to_owned()).or_insert(0) += 1;
    }

    fn push_value(&mut self, key: &str, v: f64) {
        self.values.entry(key.to_owned()).or_default().push(v);
    }

    fn push_positions(&mut self, key: &str, ps: impl IntoIterator<Item = f64>) {
        self.positions.entry(key.to_owned()).or_default().extend(ps);
    }

    /// Fold one notebook's metrics in. Practices the notebook skipped stay
    /// out of both numerator and denominator.
    pub fn add(&mut self, m: &NotebookMetrics) {
        use crate::notebook::CellStatus;

        self.n_notebooks += 1;
        if m.executed {
            self.n_executed += 1;
        }

        // BP5: execution order, over executed notebooks.
        if m.contributes_to(5) && m.executed {
            self.bump("executed_checked");
            if m.top_to_bottom {
                self.bump("top_to_bottom");
            }
        }

        // BP4: import placement.
        if m.contributes_to(4) {
            self.push_positions("import_positions", m.import_positions.iter().copied());
        }

        // BP6 / BP7: code structure existence rates.
        if m.contributes_to(6) {
            self.bump("modularity_checked");
            if m.has_function_def {
                self.bump("has_function_def");
            }
            if m.has_class_def {
                self.bump("has_class_def");
            }
            if m.has_local_import {
                self.bump("has_local_import");
            }
        }
        if m.contributes_to(7) {
            self.bump("test_checked");
            if m.has_test_import {
                self.bump("has_test_import");
            }
        }

        // BP9: lint categories.
        if m.contributes_to(9) {
            self.bump("lint_checked");
            for (cat, failed) in &m.lint_category_failed {
                if *failed {
                    self.bump(&format!("lint_failed_{}", cat.as_str()));
                }
            }
        }

        // BP11: documentation presence and volume.
        if m.contributes_to(11) {
            self.bump("md_checked");
            if m.has_markdown {
                self.bump("has_markdown");
            }
            let include_volume =
                self.md_denominator == MdDenominator::All || m.has_markdown;
            if include_volume {
                self.push_value("meaningful_md_words_per_notebook", m.meaningful_md_words as f64);
                self.push_value("meaningful_md_lines_per_notebook", m.meaningful_md_lines as f64);
            }
        }

        // BP12: headings, over markdown-bearing notebooks.
        if m.contributes_to(12) && m.has_markdown {
            self.bump("heading_checked");
            if m.md_heading_count > 0 {
                self.bump("has_md_headings");
            }
            self.push_value("md_heading_words_per_notebook", m.md_heading_words as f64);
            for &w in &m.md_heading_word_counts {
                self.push_value("words_per_md_heading", w as f64);
            }
        }

        // BP13: cleanliness positions and counts.
        if m.contributes_to(13) {
            self.push_value("empty_cells_per_notebook", m.empty_cells as f64);
            for &(pos, status) in &m.cell_status_positions {
                let key = match status {
                    CellStatus::Executed => "executed_cell_positions",
                    CellStatus::NotExecuted => "non_executed_cell_positions",
                    CellStatus::Empty => "empty_cell_positions",
                };
                self.push_positions(key, [pos]);
            }
        }

        // BP14: size and shape, always present.
        let n_cells = m.code_cells + m.md_cells + m.raw_cells;
        self.push_value("cells_per_notebook", n_cells as f64);
        self.push_value("code_cells_per_notebook", m.code_cells as f64);
        self.push_value("md_cells_per_notebook", m.md_cells as f64);
        self.push_value("lines_per_notebook", m.total_lines as f64);
        self.push_value("code_lines_per_notebook", m.code_lines as f64);
        for &n in &m.lines_per_cell {
            self.push_value("lines_per_cell", n as f64);
        }
        for &n in &m.lines_per_code_cell {
            self.push_value("lines_per_code_cell", n as f64);
        }
        for &n in &m.lines_per_md_cell {
            self.push_value("lines_per_md_cell", n as f64);
        }
        self.push_positions("code_cell_positions", m.code_cell_positions.iter().copied());
        self.push_positions("md_cell_positions", m.md_cell_positions.iter().copied());
    }

    /// Combine another accumulator into this one. Labels may differ (the
    /// left label wins); configurations may not.
    pub fn merge(&mut self, other: &StatsAccumulator) -> Result<(), MergeError> {
        if self.config_digest != other.config_digest {
            return Err(MergeError::ConfigMismatch {
                left: self.config_digest.clone(),
                right: other.config_digest.clone(),
            });
        }
        self.n_notebooks += other.n_notebooks;
        self.n_executed += other.n_executed;
        for (k, v) in &other.counts {
            *self.counts.entry(k.clone()).or_insert(0) += v;
        }
        for (k, v) in &other.values {
            self.values.entry(k.clone()).or_default().extend(v);
        }
        for (k, v) in &other.positions {
            self.positions.entry(k.clone()).or_default().extend(v);
        }
        Ok(())
    }

    fn count(&self, key: &str) -> usize {
        self.counts.get(key).copied().unwrap_or(0)
    }

    /// Compute every summary. The accumulator is unchanged and may keep
    /// absorbing notebooks afterwards.
    pub fn finalize(&self) -> CorpusSummary {
        let rate = |num: &str, den: &str, why: &str| Rate::new(self.count(num), self.count(den), why);

        let mut lint_category_rates = BTreeMap::new();
        for cat in LintCategory::all() {
            lint_category_rates.insert(
                cat.as_str().to_owned(),
                Rate::new(
                    self.count(&format!("lint_failed_{}", cat.as_str())),
                    self.count("lint_checked"),
                    "no notebooks were lint-checked",
                ),
            );
        }

        let mut fives = BTreeMap::new();
        for key in FIVES_KEYS {
            let summary = self
                .values
                .get(key)
                .and_then(|v| five_number_summary(v));
            fives.insert(key.to_owned(), summary);
        }

        let mut histograms = BTreeMap::new();
        for key in HISTOGRAM_KEYS {
            let empty = Vec::new();
            let ps = self.positions.get(key).unwrap_or(&empty);
            histograms.insert(key.to_owned(), position_histogram(ps));
        }

        CorpusSummary {
            label: self.label.clone(),
            n_notebooks: self.n_notebooks,
            n_executed: self.n_executed,
            rate_top_to_bottom: rate(
                "top_to_bottom",
                "executed_checked",
                "no executed notebooks",
            ),
            rate_function_def: rate(
                "has_function_def",
                "modularity_checked",
                "no notebooks were scanned for definitions",
            ),
            rate_class_def: rate(
                "has_class_def",
                "modularity_checked",
                "no notebooks were scanned for definitions",
            ),
            rate_local_import: rate(
                "has_local_import",
                "modularity_checked",
                "no notebooks were scanned for definitions",
            ),
            rate_test_import: rate(
                "has_test_import",
                "test_checked",
                "no notebooks were scanned for test imports",
            ),
            rate_md: rate("has_markdown", "md_checked", "no notebooks were checked"),
            rate_md_headings: rate(
                "has_md_headings",
                "heading_checked",
                "no notebooks contain markdown",
            ),
            lint_category_rates,
            fives,
            histograms,
        }
    }
}

/// Aggregate a batch of metrics in one call.
pub fn aggregate(
    label: &str,
    config_digest: &str,
    md_denominator: MdDenominator,
    metrics: &[NotebookMetrics],
) -> CorpusSummary {
    let mut acc = StatsAccumulator::new(label, config_digest, md_denominator);
    for m in metrics {
        acc.add(m);
    }
    acc.finalize()
}

/// No usable scores for a subset comparison.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubsetError {
    #[error("no notebook in the run carries a score")]
    NoScores,
}

/// Result of comparing score-ranked subsets against the full corpus.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetComparison {
    pub summaries: Vec<CorpusSummary>,
    /// Paths present in the run but missing from the score table.
    pub unscored: Vec<String>,
}

/// Compare the whole corpus against its top-scored slices. `scores` maps
/// notebook path → external quality score; `percentiles` are cut points
/// like 0.75 and 0.90. A notebook enters the `P<k>` slice when its score
/// is at or above that percentile of the scored population.
pub fn subset_compare(
    items: &[(String, NotebookMetrics)],
    scores: &BTreeMap<String, f64>,
    percentiles: &[f64],
    config_digest: &str,
    md_denominator: MdDenominator,
) -> Result<SubsetComparison, SubsetError> {
    let scored: Vec<(&String, f64, &NotebookMetrics)> = items
        .iter()
        .filter_map(|(path, m)| scores.get(path).map(|&s| (path, s, m)))
        .collect();
    if scored.is_empty() {
        return Err(SubsetError::NoScores);
    }
    let unscored: Vec<String> = items
        .iter()
        .filter(|(path, _)| !scores.contains_key(path))
        .map(|(path, _)| path.clone())
        .collect();

    let mut sorted_scores: Vec<f64> = scored.iter().map(|&(_, s, _)| s).collect();
    sorted_scores.sort_by(|a, b| a.partial_cmp(b).expect("no NaN scores"));

    let mut summaries = Vec::new();
    let mut all = StatsAccumulator::new("ALL", config_digest, md_denominator);
    for (_, m) in items {
        all.add(m);
    }
    summaries.push(all.finalize());

    for &p in percentiles {
        let threshold = percentile(&sorted_scores, p);
        let label = format!("P{:.0}", p * 100.0);
        let mut acc = StatsAccumulator::new(&label, config_digest, md_denominator);
        for &(_, s, m) in &scored {
            if s >= threshold {
                acc.add(m);
            }
        }
        summaries.push(acc.finalize());
    }

    Ok(SubsetComparison { summaries, unscored })
}
