//! Run reports: the JSON document a lint/stats run emits, plus the
//! human-readable renderings.
//!
//! The JSON layout is versioned and deterministic: notebooks sort by
//! path, maps are ordered, and wall-clock timing stays out of the
//! serialized form so identical inputs produce identical bytes.

use serde::Serialize;

use crate::checks::{Finding, NotebookMetrics};
use crate::config::{Config, FailSeverity};
use crate::ingest::DedupEntry;
use crate::stats::{CorpusSummary, FiveNumber, Rate};

/// Bumped when the serialized shape changes incompatibly.
pub const SCHEMA_VERSION: u32 = 1;

/// Fixed measurement conventions, stated in every report so numbers can
/// be compared across runs and releases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conventions {
    /// Version tag of the markdown stripping rules.
    pub md_stripping: &'static str,
    /// How quartiles are computed.
    pub quartiles: &'static str,
    /// How cell positions are normalized.
    pub positions: &'static str,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            md_stripping: crate::markdown::STRIPPING_RULES_VERSION,
            quartiles: "linear interpolation at rank (n-1)*p",
            positions: "index/(n-1), single cell at 0.0",
        }
    }
}

/// One analyzed notebook in the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NotebookReport {
    pub path: String,
    pub content_hash: String,
    pub metrics: NotebookMetrics,
    pub findings: Vec<Finding>,
}

/// A file that failed to parse, kept in the report for exit-code and
/// audit purposes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailureReport {
    pub path: String,
    pub error: String,
}

/// The complete result of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub config_digest: String,
    pub conventions: Conventions,
    pub notebooks: Vec<NotebookReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<CorpusSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub subset_summaries: Vec<CorpusSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub unscored: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub dedup_log: Vec<DedupEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<FailureReport>,
}

impl RunReport {
    pub fn new(config: &Config) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            config_digest: config.digest(),
            conventions: Conventions::default(),
            notebooks: Vec::new(),
            summary: None,
            subset_summaries: Vec::new(),
            unscored: Vec::new(),
            dedup_log: Vec::new(),
            failures: Vec::new(),
        }
    }

    /// Keep the document deterministic regardless of analysis order.
    pub fn sort(&mut self) {
        self.notebooks.sort_by(|a, b| a.path.cmp(&b.path));
        self.failures.sort_by(|a, b| a.path.cmp(&b.path));
        self.dedup_log.sort_by(|a, b| a.dropped.cmp(&b.dropped));
        self.unscored.sort();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Exit status for the run: parse failures dominate, then findings at
    /// or above the configured threshold, then success.
    pub fn exit_code(&self, fail: FailSeverity) -> i32 {
        if !self.failures.is_empty() {
            return 3;
        }
        if let Some(threshold) = fail.threshold() {
            let tripped = self
                .notebooks
                .iter()
                .flat_map(|nb| &nb.findings)
                .any(|f| f.severity >= threshold);
            if tripped {
                return 1;
            }
        }
        0
    }
}

/// `1234567` → `1,234,567`.
pub fn format_count(n: usize) -> String {
    let digits = n.to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

/// Numbers in tables: integers render bare, fractions keep two decimals.
fn fmt_num(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format_count(v as usize)
    } else {
        format!("{v:.2}")
    }
}

/// `Some(0.9435)` with counts → `1,103 (94.35%)`.
fn fmt_rate(r: &Rate) -> String {
    match r.value {
        Some(v) => format!("{} ({:.2}%)", format_count(r.numerator), v * 100.0),
        None => format!(
            "n/a ({})",
            r.reason.as_deref().unwrap_or("empty denominator")
        ),
    }
}

/// `[min, q1, median, q3, max]`.
fn fmt_five(f: &Option<FiveNumber>) -> String {
    match f {
        Some(f) => format!(
            "[{}, {}, {}, {}, {}]",
            fmt_num(f.min),
            fmt_num(f.q1),
            fmt_num(f.median),
            fmt_num(f.q3),
            fmt_num(f.max)
        ),
        None => "n/a".to_owned(),
    }
}

/// Markdown table of one or more summaries side by side: one row per
/// measure, one column per subset.
pub fn render_markdown_summary(summaries: &[CorpusSummary]) -> String {
    let mut out = String::new();
    let push_row = |out: &mut String, name: &str, cells: Vec<String>| {
        out.push_str("| ");
        out.push_str(name);
        for c in cells {
            out.push_str(" | ");
            out.push_str(&c);
        }
        out.push_str(" |\n");
    };

    out.push_str("| measure");
    for s in summaries {
        out.push_str(" | ");
        out.push_str(&s.label);
    }
    out.push_str(" |\n|---");
    for _ in summaries {
        out.push_str("|---");
    }
    out.push_str("|\n");

    push_row(
        &mut out,
        "notebooks",
        summaries.iter().map(|s| format_count(s.n_notebooks)).collect(),
    );
    push_row(
        &mut out,
        "executed",
        summaries.iter().map(|s| format_count(s.n_executed)).collect(),
    );
    type RateGetter = fn(&CorpusSummary) -> &Rate;
    let rate_rows: [(&str, RateGetter); 7] = [
        ("top-to-bottom execution", |s| &s.rate_top_to_bottom),
        ("defines a function", |s| &s.rate_function_def),
        ("defines a class", |s| &s.rate_class_def),
        ("imports a local module", |s| &s.rate_local_import),
        ("imports a testing module", |s| &s.rate_test_import),
        ("has markdown", |s| &s.rate_md),
        ("has markdown headings", |s| &s.rate_md_headings),
    ];
    for (name, get) in rate_rows {
        push_row(
            &mut out,
            name,
            summaries.iter().map(|s| fmt_rate(get(s))).collect(),
        );
    }
    for cat in ["convention", "refactor", "warning", "error"] {
        push_row(
            &mut out,
            &format!("lint: any {cat}"),
            summaries
                .iter()
                .map(|s| {
                    s.lint_category_rates
                        .get(cat)
                        .map(fmt_rate)
                        .unwrap_or_else(|| "n/a".to_owned())
                })
                .collect(),
        );
    }
    if let Some(first) = summaries.first() {
        for key in first.fives.keys() {
            push_row(
                &mut out,
                key,
                summaries
                    .iter()
                    .map(|s| fmt_five(s.fives.get(key).unwrap_or(&None)))
                    .collect(),
            );
        }
    }
    out
}

/// Histograms as CSV: `measure,bin_lo,bin_hi,count`.
pub fn render_histograms_csv(summary: &CorpusSummary) -> String {
    let mut out = String::from("measure,bin_lo,bin_hi,count\n");
    for (key, hist) in &summary.histograms {
        for (i, count) in hist.bins.iter().enumerate() {
            out.push_str(&format!(
                "{key},{:.1},{:.1},{count}\n",
                i as f64 / 10.0,
                (i + 1) as f64 / 10.0
            ));
        }
    }
    out
}

/// Compiler-style finding lines for terminal use:
/// `path:cell:line: severity BP4/import-not-at-beginning: message`.
pub fn render_findings_text(report: &RunReport) -> String {
    let mut out = String::new();
    for nb in &report.notebooks {
        for f in &nb.findings {
            let location = match (f.cell_index, f.cell_line) {
                (Some(c), Some(l)) => format!("{}:cell {c}:{l}", nb.path),
                (Some(c), None) => format!("{}:cell {c}", nb.path),
                _ => nb.path.clone(),
            };
            out.push_str(&format!(
                "{location}: {} {}/{}: {}\n",
                f.severity, f.bp_id, f.check_id, f.message
            ));
        }
    }
    for fail in &report.failures {
        out.push_str(&format!("{}: error parse: {}\n", fail.path, fail.error));
    }
    out
}
