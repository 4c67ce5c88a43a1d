//! Flattening code cells into one linear Python script.
//!
//! Notebook-only statements (IPython magics, shell escapes, introspection
//! suffixes) are not Python and would derail any downstream scanner, so they
//! are blanked *in place*: the line count of every cell is preserved exactly,
//! and one separator blank line goes between consecutive code cells. A
//! bidirectional map links surviving script lines back to `(cell, line)`
//! coordinates; blanked and separator lines deliberately have no mapping.

use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::LazyLock;
use thiserror::Error;

use regex::Regex;

use crate::notebook::{CellKind, Notebook};
use crate::scan::code_text;

/// Why a line was blanked during extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StripReason {
    /// `%%` on the first line blanks the whole cell.
    CellMagic,
    /// Line starting (after indent) with `%`.
    LineMagic,
    /// Line starting (after indent) with `!`.
    ShellEscape,
    /// `name = !command`.
    ShellAssignment,
    /// Line ending in `?` or `??` right after an identifier character.
    Introspection,
}

/// Which optional strip rules are active. Magic handling is always on;
/// the remaining three can be disabled individually.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StripRules {
    pub shell_escape: bool,
    pub shell_assignment: bool,
    pub introspection: bool,
}

impl Default for StripRules {
    fn default() -> Self {
        StripRules {
            shell_escape: true,
            shell_assignment: true,
            introspection: true,
        }
    }
}

/// One blanked line: where it was and which rule fired.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrippedRecord {
    pub cell_index: usize,
    pub cell_line: usize,
    pub reason: StripReason,
}

/// One mapped script line. All coordinates are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MapEntry {
    pub script_line: usize,
    pub cell_index: usize,
    pub cell_line: usize,
}

/// The flattened script plus its line map and strip log.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractedScript {
    pub text_lines: Vec<String>,
    /// Sorted by `script_line`; exactly one entry per non-blanked source line.
    pub map_entries: Vec<MapEntry>,
    pub stripped: Vec<StrippedRecord>,
}

/// Script-line lookups that fall outside the map.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MapError {
    #[error("script line {script_line} has no source mapping")]
    Unmapped { script_line: usize },
}

static SHELL_ASSIGN: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^\s*[A-Za-z_][A-Za-z0-9_]*(\.[A-Za-z_][A-Za-z0-9_]*)*\s*=\s*!").unwrap()
});

fn strip_reason(line: &str, rules: StripRules) -> Option<StripReason> {
    let trimmed = line.trim_start();
    if trimmed.starts_with('%') {
        return Some(StripReason::LineMagic);
    }
    if rules.shell_escape && trimmed.starts_with('!') {
        return Some(StripReason::ShellEscape);
    }
    if rules.shell_assignment && SHELL_ASSIGN.is_match(line) {
        return Some(StripReason::ShellAssignment);
    }
    if rules.introspection && is_introspection(line) {
        return Some(StripReason::Introspection);
    }
    None
}

/// `obj?` / `obj.attr??` style help requests: the line's code portion ends
/// in one or two `?` immediately after an identifier character. String
/// literals and comments are masked out first, so `print("?")` survives.
fn is_introspection(line: &str) -> bool {
    let code = code_text(line);
    let trimmed = code.trim_end();
    let without_marks = trimmed.trim_end_matches('?');
    let marks = trimmed.len() - without_marks.len();
    (1..=2).contains(&marks)
        && without_marks
            .chars()
            .last()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Blank the notebook-only lines of one cell. Returns the rewritten lines
/// (same count as the input) and `(cell_line, reason)` for each blanked one.
pub fn strip_cell(lines: &[String], rules: StripRules) -> (Vec<String>, Vec<(usize, StripReason)>) {
    // A leading `%%` claims the whole cell for the cell magic's language.
    if lines.first().is_some_and(|l| l.trim_start().starts_with("%%")) {
        let blanked = vec![String::new(); lines.len()];
        let records = (0..lines.len()).map(|i| (i, StripReason::CellMagic)).collect();
        return (blanked, records);
    }
    let mut out = Vec::with_capacity(lines.len());
    let mut records = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        match strip_reason(line, rules) {
            Some(reason) => {
                out.push(String::new());
                records.push((i, reason));
            }
            None => out.push(line.clone()),
        }
    }
    (out, records)
}

/// Flatten all code cells into one script, blanking notebook-only lines and
/// inserting one separator blank line between consecutive code cells.
pub fn extract_script(notebook: &Notebook, rules: StripRules) -> ExtractedScript {
    let mut text_lines = Vec::new();
    let mut map_entries = Vec::new();
    let mut stripped = Vec::new();
    let mut first = true;

    for (cell_index, cell) in notebook.cells.iter().enumerate() {
        if cell.kind != CellKind::Code {
            continue;
        }
        if !first {
            text_lines.push(String::new()); // separator: intentionally unmapped
        }
        first = false;

        let (lines, records) = strip_cell(&cell.source, rules);
        let blanked: Vec<usize> = records.iter().map(|(l, _)| *l).collect();
        for (cell_line, line) in lines.into_iter().enumerate() {
            let script_line = text_lines.len();
            if !blanked.contains(&cell_line) {
                map_entries.push(MapEntry {
                    script_line,
                    cell_index,
                    cell_line,
                });
            }
            text_lines.push(line);
        }
        stripped.extend(records.into_iter().map(|(cell_line, reason)| StrippedRecord {
            cell_index,
            cell_line,
            reason,
        }));
    }

    ExtractedScript {
        text_lines,
        map_entries,
        stripped,
    }
}

impl ExtractedScript {
    /// The script as one string, with a trailing newline when non-empty.
    pub fn text(&self) -> String {
        if self.text_lines.is_empty() {
            return String::new();
        }
        let mut s = self.text_lines.join("\n");
        s.push('\n');
        s
    }

    /// Iterate `(script_line, line_text)` over mapped lines only, skipping
    /// separators and blanked lines.
    pub fn mapped_lines(&self) -> impl Iterator<Item = (usize, &str)> + '_ {
        self.map_entries
            .iter()
            .map(|e| (e.script_line, self.text_lines[e.script_line].as_str()))
    }

    /// Reverse lookup: the script line that carries `(cell_index, cell_line)`.
    pub fn script_line_for(&self, cell_index: usize, cell_line: usize) -> Option<usize> {
        self.map_entries
            .iter()
            .find(|e| e.cell_index == cell_index && e.cell_line == cell_line)
            .map(|e| e.script_line)
    }

    /// How many lines each rule blanked, for reporting.
    pub fn strip_counts(&self) -> BTreeMap<StripReason, usize> {
        let mut counts = BTreeMap::new();
        for rec in &self.stripped {
            *counts.entry(rec.reason).or_insert(0) += 1;
        }
        counts
    }
}

// StripReason needs an order for the counts map.
impl PartialOrd for StripReason {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for StripReason {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (*self as u8).cmp(&(*other as u8))
    }
}

/// Map a script line back to `(cell_index, cell_line)`.
pub fn map_line(script: &ExtractedScript, script_line: usize) -> Result<(usize, usize), MapError> {
    script
        .map_entries
        .binary_search_by_key(&script_line, |e| e.script_line)
        .map(|i| {
            let e = &script.map_entries[i];
            (e.cell_index, e.cell_line)
        })
        .map_err(|_| MapError::Unmapped { script_line })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notebook::parse_notebook_bytes;

    fn lines(src: &[&str]) -> Vec<String> {
        src.iter().map(|s| s.to_string()).collect()
    }

    fn notebook(cell_sources: &[&[&str]]) -> Notebook {
        let cells: Vec<serde_json::Value> = cell_sources
            .iter()
            .map(|src| {
                serde_json::json!({
                    "cell_type": "code",
                    "source": src.iter().map(|l| format!("{l}\n")).collect::<Vec<_>>(),
                    "execution_count": null,
                    "outputs": []
                })
            })
            .collect();
        let doc = serde_json::json!({"nbformat": 4, "cells": cells});
        parse_notebook_bytes(serde_json::to_string(&doc).unwrap().as_bytes(), "t.ipynb").unwrap()
    }

    #[test]
    fn cell_magic_blanks_the_entire_cell() {
        let (out, recs) = strip_cell(&lines(&["%%bash", "echo hi"]), StripRules::default());
        assert_eq!(out, vec!["", ""]);
        assert_eq!(
            recs,
            vec![(0, StripReason::CellMagic), (1, StripReason::CellMagic)]
        );
        // The %% may sit after indentation; it still claims the cell.
        let (out, recs) = strip_cell(&lines(&["  %%capture", "x = 1"]), StripRules::default());
        assert_eq!(out, vec!["", ""]);
        assert_eq!(recs.len(), 2);
    }

    #[test]
    fn line_rules_fire_individually() {
        let src = lines(&[
            "%time x = 1",
            "!pip install foo",
            "files = !ls -la",
            "os.getcwd?",
            "df.describe??",
            "x = 5",
        ]);
        let (out, recs) = strip_cell(&src, StripRules::default());
        assert_eq!(out, vec!["", "", "", "", "", "x = 5"]);
        let reasons: Vec<StripReason> = recs.iter().map(|(_, r)| *r).collect();
        assert_eq!(
            reasons,
            vec![
                StripReason::LineMagic,
                StripReason::ShellEscape,
                StripReason::ShellAssignment,
                StripReason::Introspection,
                StripReason::Introspection,
            ]
        );
    }

    #[test]
    fn string_contents_do_not_trigger_rules() {
        let src = lines(&["print('?')", "s = 'a?'", "t = \"100%\""]);
        let (out, recs) = strip_cell(&src, StripRules::default());
        assert_eq!(out, src);
        assert!(recs.is_empty());
    }

    #[test]
    fn three_question_marks_are_not_introspection() {
        let (_, recs) = strip_cell(&lines(&["x???"]), StripRules::default());
        assert!(recs.is_empty());
    }

    #[test]
    fn disabled_rules_leave_lines_alone() {
        let rules = StripRules {
            shell_escape: false,
            shell_assignment: false,
            introspection: false,
        };
        let src = lines(&["!ls", "x = !ls", "y?", "%time 1"]);
        let (out, recs) = strip_cell(&src, rules);
        assert_eq!(out, vec!["!ls", "x = !ls", "y?", ""]);
        assert_eq!(recs, vec![(3, StripReason::LineMagic)]);
    }

    #[test]
    fn extraction_preserves_line_counts_and_inserts_separators() {
        let nb = notebook(&[&["a = 1", "%time a"], &["b = 2"]]);
        let script = extract_script(&nb, StripRules::default());
        assert_eq!(script.text_lines, vec!["a = 1", "", "", "b = 2"]);
        // 3 source lines + 1 separator
        assert_eq!(script.text_lines.len(), 4);
        assert_eq!(map_line(&script, 0), Ok((0, 0)));
        assert_eq!(map_line(&script, 3), Ok((1, 0)));
        assert_eq!(
            map_line(&script, 1),
            Err(MapError::Unmapped { script_line: 1 })
        );
        assert_eq!(
            map_line(&script, 2),
            Err(MapError::Unmapped { script_line: 2 })
        );
        assert_eq!(script.script_line_for(1, 0), Some(3));
    }

    #[test]
    fn original_blank_lines_stay_mapped() {
        let nb = notebook(&[&["a = 1", "", "b = 2"]]);
        let script = extract_script(&nb, StripRules::default());
        assert_eq!(map_line(&script, 1), Ok((0, 1)));
    }

    #[test]
    fn stripping_is_idempotent() {
        let src = lines(&["%%javascript", "alert('hi')"]);
        let (once, recs) = strip_cell(&src, StripRules::default());
        assert_eq!(recs.len(), 2);
        let (twice, recs2) = strip_cell(&once, StripRules::default());
        assert_eq!(once, twice);
        assert!(recs2.is_empty());
    }

    #[test]
    fn notebook_without_code_cells_extracts_empty() {
        let doc = serde_json::json!({
            "nbformat": 4,
            "cells": [{"cell_type": "markdown", "source": "# hi"}]
        });
        let nb = parse_notebook_bytes(serde_json::to_string(&doc).unwrap().as_bytes(), "t.ipynb")
            .unwrap();
        let script = extract_script(&nb, StripRules::default());
        assert!(script.text_lines.is_empty());
        assert!(script.map_entries.is_empty());
        assert_eq!(script.text(), "");
    }
}
