//! The best-practice engine: per-notebook metrics and findings.
//!
//! Each operationalized practice contributes metrics fields and, where a
//! violation is actionable, findings. Non-Python notebooks skip the checks
//! that read Python source (imports, definitions, tests, lint); disabled
//! checks are skipped everywhere. Skipped practices are listed in
//! `NotebookMetrics::skipped` so downstream aggregation can keep its
//! denominators honest.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::config::{Config, Severity};
use crate::extract::{extract_script, map_line, ExtractedScript};
use crate::lint::{lint_native, run_external_linter, BridgeError, LintCategory, LintConfig};
use crate::markdown::{detect_headings, heading_word_count, meaningful_md_tokens};
use crate::notebook::{
    cell_position_fraction, cell_status, execution_sequence, CellKind, CellStatus, Notebook,
};
use crate::scan::{
    classify_import_origin, detect_test_imports, scan_defs, scan_imports, CorpusIndex, DefKind,
    DefRecord, ImportOrigin, ImportRecord,
};

/// Everything measured about one notebook.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NotebookMetrics {
    pub kernel_language: Option<String>,
    pub code_cells: usize,
    pub md_cells: usize,
    pub raw_cells: usize,
    /// At least one code cell carries an execution counter.
    pub executed: bool,
    /// Counters of non-empty code cells form 1..n in document order.
    pub top_to_bottom: bool,
    /// Some code cell has outputs but a null counter — execution evidence
    /// the counter rule deliberately ignores.
    pub outputs_without_counter: bool,
    /// Document-position fraction of each import, over non-empty code cells.
    pub import_positions: Vec<f64>,
    /// Share of imports in the first third; 1.0 when there are no imports.
    pub imports_first_third_fraction: f64,
    pub bp4_compliant: bool,
    pub has_function_def: bool,
    pub has_class_def: bool,
    pub has_local_import: bool,
    pub has_test_import: bool,
    /// Per lint category: did at least one finding of that category fire?
    pub lint_category_failed: BTreeMap<LintCategory, bool>,
    /// Findings per check id (native and `ext:` bridged).
    pub lint_counts: BTreeMap<String, usize>,
    pub has_markdown: bool,
    pub meaningful_md_words: usize,
    pub meaningful_md_lines: usize,
    pub md_heading_count: usize,
    /// Total meaningful words across all heading texts.
    pub md_heading_words: usize,
    /// Meaningful words of each heading, in document order.
    pub md_heading_word_counts: Vec<usize>,
    pub empty_cells: usize,
    pub non_executed_cells: usize,
    /// (position fraction, status) per code cell, positions over code cells.
    pub cell_status_positions: Vec<(f64, CellStatus)>,
    /// Position fractions over all cells, by kind.
    pub code_cell_positions: Vec<f64>,
    pub md_cell_positions: Vec<f64>,
    pub total_lines: usize,
    /// Source lines in code cells only.
    pub code_lines: usize,
    pub lines_per_cell: Vec<usize>,
    pub lines_per_code_cell: Vec<usize>,
    pub lines_per_md_cell: Vec<usize>,
    /// Practices not evaluated for this notebook (disabled or non-Python),
    /// as `BP<n>` strings in ascending id order.
    pub skipped: Vec<String>,
}

impl NotebookMetrics {
    /// Whether this notebook's numbers should enter aggregates for `bp`.
    pub fn contributes_to(&self, bp: u8) -> bool {
        !self.skipped.iter().any(|s| s == &format!("BP{bp}"))
    }
}

/// One diagnostic: a practice violation or a lint message, located in the
/// notebook when the source construct has a cell address.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub bp_id: String,
    pub check_id: String,
    pub severity: Severity,
    pub cell_index: Option<usize>,
    pub cell_line: Option<usize>,
    pub message: String,
}

/// Sort findings by (cell, line, check, message); notebook-level findings
/// (no cell) come first.
pub fn sort_findings(findings: &mut [Finding]) {
    findings.sort_by(|a, b| {
        (a.cell_index, a.cell_line, &a.check_id, &a.message).cmp(&(
            b.cell_index,
            b.cell_line,
            &b.check_id,
            &b.message,
        ))
    });
}

/// Why a notebook could be parsed but not analyzed.
#[derive(Debug, Error)]
pub enum AnalyzeError {
    #[error("{path}: {source}")]
    Bridge {
        path: String,
        #[source]
        source: BridgeError,
    },
}

/// Counters follow the re-run rule: the integer entries must read exactly
/// 1..n in document order (n ≥ 1). Strict mode also rejects null entries.
pub fn check_bp5_top_to_bottom(seq: &[Option<u64>], strict: bool) -> bool {
    if strict && seq.iter().any(Option::is_none) {
        return false;
    }
    let counters: Vec<u64> = seq.iter().filter_map(|c| *c).collect();
    !counters.is_empty()
        && counters
            .iter()
            .enumerate()
            .all(|(i, &c)| c == i as u64 + 1)
}

/// Position fraction of each import record's cell among non-empty code
/// cells, parallel to `records`. `None` for records whose line cannot be
/// mapped (cannot happen for records produced by the scanner).
pub fn import_cell_positions(
    records: &[ImportRecord],
    script: &ExtractedScript,
    nb: &Notebook,
) -> Vec<Option<f64>> {
    let universe: Vec<usize> = nb
        .cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.kind == CellKind::Code && !c.is_blank())
        .map(|(i, _)| i)
        .collect();
    records
        .iter()
        .map(|rec| {
            let (cell_index, _) = map_line(script, rec.script_line).ok()?;
            let rank = universe.iter().position(|&i| i == cell_index)?;
            cell_position_fraction(rank, universe.len()).ok()
        })
        .collect()
}

/// Import positions and the share that sits in the first third of the
/// notebook's (non-empty) code cells. No imports means vacuous compliance.
pub fn check_bp4_import_position(
    records: &[ImportRecord],
    script: &ExtractedScript,
    nb: &Notebook,
) -> (Vec<f64>, f64) {
    let positions: Vec<f64> = import_cell_positions(records, script, nb)
        .into_iter()
        .flatten()
        .collect();
    let fraction = if positions.is_empty() {
        1.0
    } else {
        positions.iter().filter(|&&p| p <= 1.0 / 3.0).count() as f64 / positions.len() as f64
    };
    (positions, fraction)
}

/// Existence of function defs, class defs, and local imports.
pub fn check_bp6_modularization(
    defs: &[DefRecord],
    origins: &[ImportOrigin],
) -> (bool, bool, bool) {
    (
        defs.iter().any(|d| d.kind == DefKind::Function),
        defs.iter().any(|d| d.kind == DefKind::Class),
        origins.contains(&ImportOrigin::Local),
    )
}

/// Empty/non-executed counts and the status of every code cell with its
/// position among code cells.
pub fn check_bp13_cleanliness(nb: &Notebook) -> (usize, usize, Vec<(f64, CellStatus)>) {
    let code_indices = nb.cell_indices(CellKind::Code);
    let n = code_indices.len();
    let mut empty = 0;
    let mut non_executed = 0;
    let positions = code_indices
        .iter()
        .enumerate()
        .map(|(rank, &idx)| {
            let status = cell_status(nb, idx).expect("index filtered to code cells");
            match status {
                CellStatus::Empty => empty += 1,
                CellStatus::NotExecuted => non_executed += 1,
                CellStatus::Executed => {}
            }
            let pos = cell_position_fraction(rank, n).expect("rank < n");
            (pos, status)
        })
        .collect();
    (empty, non_executed, positions)
}

/// Volume counts for conciseness measures.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConcisenessCounts {
    pub total_lines: usize,
    pub code_lines: usize,
    pub lines_per_cell: Vec<usize>,
    pub lines_per_code_cell: Vec<usize>,
    pub lines_per_md_cell: Vec<usize>,
}

/// Line counts per cell and per notebook. Raw cells count toward totals
/// but not toward code lines.
pub fn check_bp14_conciseness(nb: &Notebook) -> ConcisenessCounts {
    let mut out = ConcisenessCounts::default();
    for cell in &nb.cells {
        let lines = cell.source.len();
        out.total_lines += lines;
        out.lines_per_cell.push(lines);
        match cell.kind {
            CellKind::Code => {
                out.code_lines += lines;
                out.lines_per_code_cell.push(lines);
            }
            CellKind::Markdown => out.lines_per_md_cell.push(lines),
            CellKind::Raw => {}
        }
    }
    out
}

/// The practices that require Python source analysis.
const PYTHON_ONLY: [u8; 4] = [4, 6, 7, 9];

/// Run every enabled check over one parsed notebook.
///
/// Pure in (notebook bytes, config, corpus index) except for a configured
/// external linter, whose output is the caller's responsibility to keep
/// deterministic.
pub fn analyze_notebook(
    nb: &Notebook,
    cfg: &Config,
    corpus_index: Option<&CorpusIndex>,
) -> Result<(NotebookMetrics, Vec<Finding>), AnalyzeError> {
    let mut skipped: BTreeSet<u8> = BTreeSet::new();
    for bp in crate::registry::operationalized_ids() {
        if !cfg.is_enabled(bp) {
            skipped.insert(bp);
        }
    }
    if !(nb.is_python() || cfg.allow_any_kernel) {
        skipped.extend(PYTHON_ONLY);
    }
    let active = |bp: u8| !skipped.contains(&bp);

    let script = extract_script(nb, cfg.strip);
    let n_cells = nb.cells.len();
    let count_kind = |kind: CellKind| nb.cells.iter().filter(|c| c.kind == kind).count();
    let positions_of_kind = |kind: CellKind| -> Vec<f64> {
        nb.cell_indices(kind)
            .into_iter()
            .map(|i| cell_position_fraction(i, n_cells).expect("index < n_cells"))
            .collect()
    };

    let mut findings: Vec<Finding> = Vec::new();

    // Execution (BP5).
    let executed = nb.executed();
    let seq = execution_sequence(nb);
    let top_to_bottom = check_bp5_top_to_bottom(&seq, cfg.strict_bp5);
    let outputs_without_counter = nb.cells.iter().any(|c| {
        c.kind == CellKind::Code && c.execution_count.is_none() && !c.raw_outputs.is_empty()
    });
    if active(5) && executed && !top_to_bottom {
        findings.push(Finding {
            bp_id: "BP5".to_owned(),
            check_id: "out-of-order-execution".to_owned(),
            severity: cfg.severity_for("bp5"),
            cell_index: None,
            cell_line: None,
            message: "execution counters do not form a clean top-to-bottom 1..n sequence"
                .to_owned(),
        });
    }

    // Python source scanning (BP4, BP6, BP7, BP9).
    let needs_scan = active(4) || active(6) || active(7);
    let imports = if needs_scan {
        scan_imports(&script)
    } else {
        Vec::new()
    };

    let (import_positions, imports_first_third_fraction) = if active(4) {
        check_bp4_import_position(&imports, &script, nb)
    } else {
        (Vec::new(), 1.0)
    };
    let bp4_compliant = imports_first_third_fraction >= cfg.bp4_threshold;
    if active(4) {
        for (rec, pos) in imports
            .iter()
            .zip(import_cell_positions(&imports, &script, nb))
        {
            let Some(pos) = pos else { continue };
            if pos > 1.0 / 3.0 {
                let (cell_index, cell_line) =
                    map_line(&script, rec.script_line).expect("import line is mapped");
                findings.push(Finding {
                    bp_id: "BP4".to_owned(),
                    check_id: "import-not-at-beginning".to_owned(),
                    severity: cfg.severity_for("bp4"),
                    cell_index: Some(cell_index),
                    cell_line: Some(cell_line),
                    message: format!(
                        "import of '{}' sits at position {:.2} of the code cells",
                        rec.module_path, pos
                    ),
                });
            }
        }
    }

    let (has_function_def, has_class_def, has_local_import) = if active(6) {
        let defs = scan_defs(&script);
        let origins: Vec<ImportOrigin> = imports
            .iter()
            .map(|rec| classify_import_origin(rec, std::path::Path::new(&nb.path), corpus_index))
            .collect();
        check_bp6_modularization(&defs, &origins)
    } else {
        (false, false, false)
    };

    let has_test_import =
        active(7) && !detect_test_imports(&imports, &cfg.test_detect).is_empty();

    let mut lint_category_failed = BTreeMap::new();
    let mut lint_counts = BTreeMap::new();
    if active(9) {
        for cat in LintCategory::all() {
            lint_category_failed.insert(cat, false);
        }
        let mut lint_findings = lint_native(
            &script,
            &LintConfig {
                max_line_len: cfg.max_line_len,
            },
        );
        if let Some(bridge) = &cfg.bridge {
            let ext =
                run_external_linter(&script.text(), bridge).map_err(|source| {
                    AnalyzeError::Bridge {
                        path: nb.path.clone(),
                        source,
                    }
                })?;
            lint_findings.extend(ext);
        }
        for lf in &lint_findings {
            lint_category_failed.insert(lf.category, true);
            *lint_counts.entry(lf.check_id.clone()).or_insert(0) += 1;
            let location = map_line(&script, lf.script_line).ok();
            findings.push(Finding {
                bp_id: "BP9".to_owned(),
                check_id: lf.check_id.clone(),
                severity: cfg.severity_for(&format!("lint-{}", lf.category.as_str())),
                cell_index: location.map(|(c, _)| c),
                cell_line: location.map(|(_, l)| l),
                message: lf.message.clone(),
            });
        }
    }

    // Markdown (BP11, BP12).
    let md_cells = count_kind(CellKind::Markdown);
    let has_markdown = md_cells > 0;
    let (meaningful_md_words, meaningful_md_lines) = nb
        .cells
        .iter()
        .filter(|c| c.kind == CellKind::Markdown)
        .map(|c| meaningful_md_tokens(&c.source))
        .fold((0, 0), |(w, l), (dw, dl)| (w + dw, l + dl));
    if active(11) && !has_markdown {
        findings.push(Finding {
            bp_id: "BP11".to_owned(),
            check_id: "no-markdown".to_owned(),
            severity: cfg.severity_for("bp11"),
            cell_index: None,
            cell_line: None,
            message: "notebook contains no markdown documentation".to_owned(),
        });
    }

    let headings = detect_headings(nb);
    let md_heading_word_counts: Vec<usize> = headings
        .iter()
        .map(|h| heading_word_count(&h.text))
        .collect();
    let md_heading_words = md_heading_word_counts.iter().sum();
    if active(12) && has_markdown && headings.is_empty() {
        findings.push(Finding {
            bp_id: "BP12".to_owned(),
            check_id: "no-md-headings".to_owned(),
            severity: cfg.severity_for("bp12"),
            cell_index: None,
            cell_line: None,
            message: "markdown cells carry no headings to structure the notebook".to_owned(),
        });
    }

    // Cleanliness (BP13).
    let (empty_cells, non_executed_cells, cell_status_positions) = check_bp13_cleanliness(nb);
    if active(13) {
        let code_indices = nb.cell_indices(CellKind::Code);
        for &idx in &code_indices {
            match cell_status(nb, idx).expect("code cell") {
                CellStatus::Empty => findings.push(Finding {
                    bp_id: "BP13".to_owned(),
                    check_id: "empty-cell".to_owned(),
                    severity: cfg.severity_for("bp13-empty"),
                    cell_index: Some(idx),
                    cell_line: None,
                    message: "code cell is empty".to_owned(),
                }),
                // Unexecuted cells are only findings when the notebook was
                // run at all; a never-run notebook is a BP5 concern.
                CellStatus::NotExecuted if executed => findings.push(Finding {
                    bp_id: "BP13".to_owned(),
                    check_id: "non-executed-cell".to_owned(),
                    severity: cfg.severity_for("bp13-non-executed"),
                    cell_index: Some(idx),
                    cell_line: None,
                    message: "code cell was never executed".to_owned(),
                }),
                _ => {}
            }
        }
    }

    // Volume (BP14).
    let conciseness = check_bp14_conciseness(nb);

    let metrics = NotebookMetrics {
        kernel_language: nb.kernel_language().map(str::to_owned),
        code_cells: count_kind(CellKind::Code),
        md_cells,
        raw_cells: count_kind(CellKind::Raw),
        executed,
        top_to_bottom,
        outputs_without_counter,
        import_positions,
        imports_first_third_fraction,
        bp4_compliant,
        has_function_def,
        has_class_def,
        has_local_import,
        has_test_import,
        lint_category_failed,
        lint_counts,
        has_markdown,
        meaningful_md_words,
        meaningful_md_lines,
        md_heading_count: headings.len(),
        md_heading_words,
        md_heading_word_counts,
        empty_cells,
        non_executed_cells,
        cell_status_positions,
        code_cell_positions: positions_of_kind(CellKind::Code),
        md_cell_positions: positions_of_kind(CellKind::Markdown),
        total_lines: conciseness.total_lines,
        code_lines: conciseness.code_lines,
        lines_per_cell: conciseness.lines_per_cell,
        lines_per_code_cell: conciseness.lines_per_code_cell,
        lines_per_md_cell: conciseness.lines_per_md_cell,
        skipped: skipped.iter().map(|bp| format!("BP{bp}")).collect(),
    };

    sort_findings(&mut findings);
    Ok((metrics, findings))
}
