//! Line-oriented scanning of extracted scripts: imports, definitions, and
//! import classification.
//!
//! This is deliberately not a Python parser. Notebook code is frequently
//! unparseable (half-edited cells, version skew), yet imports and `def`/
//! `class` headers are still recognizable line by line. The scanner masks
//! string interiors and comments, then works on what remains.

use std::collections::BTreeSet;
use std::path::{Component, Path, PathBuf};
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::extract::ExtractedScript;

/// Return `line` with string interiors masked by spaces and any trailing
/// comment removed. Column positions of surviving code are unchanged; quote
/// delimiters stay in place. Scope is a single line: a triple quote that
/// stays open masks the rest of the line only.
pub fn code_text(line: &str) -> String {
    let chars: Vec<char> = line.chars().collect();
    let mut out = String::with_capacity(line.len());
    let mut i = 0;
    let mut string_delim: Option<(char, bool)> = None; // (quote char, is_triple)

    while i < chars.len() {
        let c = chars[i];
        match string_delim {
            Some((quote, triple)) => {
                if c == '\\' {
                    out.push(' ');
                    if i + 1 < chars.len() {
                        out.push(' ');
                        i += 1;
                    }
                } else if c == quote {
                    if triple {
                        if i + 2 < chars.len() && chars[i + 1] == quote && chars[i + 2] == quote {
                            out.push_str(&quote.to_string().repeat(3));
                            i += 2;
                            string_delim = None;
                        } else {
                            out.push(' ');
                        }
                    } else {
                        out.push(quote);
                        string_delim = None;
                    }
                } else {
                    out.push(' ');
                }
            }
            None => {
                if c == '#' {
                    break; // comment: drop the rest of the line
                }
                if c == '\'' || c == '"' {
                    if i + 2 < chars.len() && chars[i + 1] == c && chars[i + 2] == c {
                        out.push_str(&c.to_string().repeat(3));
                        i += 2;
                        string_delim = Some((c, true));
                    } else {
                        out.push(c);
                        string_delim = Some((c, false));
                    }
                } else {
                    out.push(c);
                }
            }
        }
        i += 1;
    }
    out
}

/// Net bracket depth change across a masked line.
fn depth_delta(code: &str) -> i32 {
    code.chars()
        .map(|c| match c {
            '(' | '[' | '{' => 1,
            ')' | ']' | '}' => -1,
            _ => 0,
        })
        .sum()
}

/// One imported module. A statement naming several modules produces one
/// record per module.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImportRecord {
    /// Dotted module path as written, e.g. `sklearn.model_selection` or `.utils`.
    pub module_path: String,
    /// Names pulled out of the module by a `from ... import` statement.
    pub imported_names: Vec<String>,
    pub is_wildcard: bool,
    /// Script line the statement starts on (0-based).
    pub script_line: usize,
    /// Names the statement binds in the namespace: aliases when present,
    /// otherwise the imported name or the module's first path segment.
    pub bound_names: Vec<String>,
}

/// One `import`/`from` statement with its script-line span (inclusive).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImportStatement {
    pub start_line: usize,
    pub end_line: usize,
    pub records: Vec<ImportRecord>,
}

static IMPORT_START: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\s*(import|from)\b").unwrap());
static DEF_HEADER: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^(?P<indent>\s*)(?:async\s+)?(?P<kw>def|class)\s+(?P<name>[A-Za-z_][A-Za-z0-9_]*)")
        .unwrap()
});

/// Scan for import statements, joining parenthesized and backslash
/// continuations across consecutive script lines.
pub fn import_statements(script: &ExtractedScript) -> Vec<ImportStatement> {
    let entries = &script.map_entries;
    let mut statements = Vec::new();
    let mut i = 0;

    while i < entries.len() {
        let start = entries[i].script_line;
        let first_code = code_text(&script.text_lines[start]);
        if !IMPORT_START.is_match(&first_code) {
            i += 1;
            continue;
        }

        let mut joined = String::new();
        let mut depth = 0i32;
        let mut j = i;
        loop {
            let line_no = entries[j].script_line;
            let code = code_text(&script.text_lines[line_no]);
            let trimmed_end = code.trim_end();
            let continues_backslash = trimmed_end.ends_with('\\');
            let piece = if continues_backslash {
                &trimmed_end[..trimmed_end.len() - 1]
            } else {
                trimmed_end
            };
            if !joined.is_empty() {
                joined.push(' ');
            }
            joined.push_str(piece.trim());
            depth += depth_delta(piece);

            let wants_more = continues_backslash || depth > 0;
            let next_is_adjacent = entries
                .get(j + 1)
                .is_some_and(|e| e.script_line == line_no + 1);
            if wants_more && next_is_adjacent {
                j += 1;
            } else {
                break;
            }
        }

        let records = parse_import_text(&joined, start);
        if !records.is_empty() {
            statements.push(ImportStatement {
                start_line: start,
                end_line: entries[j].script_line,
                records,
            });
        }
        i = j + 1;
    }
    statements
}

/// All import records of the script, in source order.
pub fn scan_imports(script: &ExtractedScript) -> Vec<ImportRecord> {
    import_statements(script)
        .into_iter()
        .flat_map(|s| s.records)
        .collect()
}

/// Parse one joined import statement into records. Malformed statements
/// yield no records rather than errors.
fn parse_import_text(text: &str, script_line: usize) -> Vec<ImportRecord> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("from") {
        let rest = rest.trim_start();
        if rest.is_empty() || !text[4..].starts_with(char::is_whitespace) {
            return Vec::new();
        }
        let mut parts = rest.splitn(2, char::is_whitespace);
        let module = match parts.next() {
            Some(m) if !m.is_empty() => m.to_owned(),
            _ => return Vec::new(),
        };
        let after = parts.next().unwrap_or("").trim_start();
        let Some(names_raw) = after.strip_prefix("import") else {
            return Vec::new();
        };
        let names_raw = names_raw.trim().trim_start_matches('(').trim_end_matches(')');
        if names_raw.contains('*') {
            return vec![ImportRecord {
                module_path: module,
                imported_names: Vec::new(),
                is_wildcard: true,
                script_line,
                bound_names: Vec::new(),
            }];
        }
        let mut imported = Vec::new();
        let mut bound = Vec::new();
        for item in names_raw.split(',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (name, alias) = split_alias(item);
            imported.push(name.to_owned());
            bound.push(alias.unwrap_or(name).to_owned());
        }
        if imported.is_empty() {
            return Vec::new();
        }
        return vec![ImportRecord {
            module_path: module,
            imported_names: imported,
            is_wildcard: false,
            script_line,
            bound_names: bound,
        }];
    }

    if let Some(rest) = text.strip_prefix("import") {
        if !rest.starts_with(char::is_whitespace) {
            return Vec::new();
        }
        let mut records = Vec::new();
        for item in rest.trim().split(',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (path, alias) = split_alias(item);
            if path.is_empty() {
                continue;
            }
            let bound = alias
                .map(str::to_owned)
                .unwrap_or_else(|| first_segment(path).to_owned());
            records.push(ImportRecord {
                module_path: path.to_owned(),
                imported_names: Vec::new(),
                is_wildcard: false,
                script_line,
                bound_names: vec![bound],
            });
        }
        return records;
    }
    Vec::new()
}

/// Split `name as alias` into its halves.
fn split_alias(item: &str) -> (&str, Option<&str>) {
    let mut parts = item.split_whitespace();
    let name = parts.next().unwrap_or("");
    match (parts.next(), parts.next()) {
        (Some("as"), Some(alias)) => (name, Some(alias)),
        _ => (name, None),
    }
}

/// First dotted segment of a module path, ignoring leading relative dots.
pub fn first_segment(module_path: &str) -> &str {
    module_path
        .trim_start_matches('.')
        .split('.')
        .next()
        .unwrap_or("")
}

/// Kind of a definition header.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DefKind {
    Function,
    Class,
}

/// One `def`/`class` header found in the script.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefRecord {
    pub kind: DefKind,
    pub name: String,
    /// Script line of the header (0-based).
    pub script_line: usize,
    /// Leading whitespace width in characters; 0 means top level.
    pub indent: usize,
}

/// Scan for `def`, `async def`, and `class` headers at any indent.
pub fn scan_defs(script: &ExtractedScript) -> Vec<DefRecord> {
    script
        .mapped_lines()
        .filter_map(|(script_line, line)| {
            let code = code_text(line);
            DEF_HEADER.captures(&code).map(|caps| DefRecord {
                kind: match &caps["kw"] {
                    "def" => DefKind::Function,
                    _ => DefKind::Class,
                },
                name: caps["name"].to_owned(),
                script_line,
                indent: caps["indent"].chars().count(),
            })
        })
        .collect()
}

/// Which part of the module path substring matching applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchScope {
    /// Match against the full dotted path.
    Full,
    /// Match against the first path segment only.
    Top,
}

/// Configuration for spotting test-related imports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TestDetectConfig {
    /// Case-sensitive substrings that mark a module as test-related.
    pub substrings: Vec<String>,
    /// Module segments counted as test frameworks even without a substring hit.
    pub allowlist: Vec<String>,
    /// Module segments never counted, overriding everything else.
    pub denylist: Vec<String>,
    pub scope: MatchScope,
}

fn to_strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

impl TestDetectConfig {
    /// Pure substring matching with no denylist. Prone to false positives
    /// (`latest` contains `test`), kept for comparability of results.
    pub fn strict() -> Self {
        TestDetectConfig {
            substrings: to_strings(&["test", "Test", "TEST", "mock", "Mock", "MOCK"]),
            allowlist: to_strings(&["nose2", "robot"]),
            denylist: Vec::new(),
            scope: MatchScope::Full,
        }
    }

    /// Like [`TestDetectConfig::strict`] but with the common false positives
    /// suppressed.
    pub fn recommended() -> Self {
        TestDetectConfig {
            denylist: to_strings(&["latest", "greatest"]),
            ..Self::strict()
        }
    }
}

impl Default for TestDetectConfig {
    fn default() -> Self {
        Self::strict()
    }
}

/// Filter `records` down to the ones that look like test-framework imports.
pub fn detect_test_imports(records: &[ImportRecord], cfg: &TestDetectConfig) -> Vec<ImportRecord> {
    records
        .iter()
        .filter(|rec| {
            let scoped = match cfg.scope {
                MatchScope::Full => rec.module_path.as_str(),
                MatchScope::Top => first_segment(&rec.module_path),
            };
            let segments: Vec<&str> = scoped.trim_start_matches('.').split('.').collect();
            if segments
                .iter()
                .any(|seg| cfg.denylist.iter().any(|d| d == seg))
            {
                return false;
            }
            segments
                .iter()
                .any(|seg| cfg.allowlist.iter().any(|a| a == seg))
                || cfg.substrings.iter().any(|s| scoped.contains(s.as_str()))
        })
        .cloned()
        .collect()
}

/// Where an import resolves to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ImportOrigin {
    /// A `.py` module sitting next to the notebook.
    Local,
    /// Anything else: installed packages and the standard library.
    External,
    /// No corpus index available to decide.
    Unknown,
}

/// Index of `.py` files seen during ingestion, for local-import resolution.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusIndex {
    py_files: BTreeSet<PathBuf>,
}

/// Lexical path normalization: strips `.` components and resolves `..`
/// without touching the filesystem.
fn normalize_path(path: &Path) -> PathBuf {
    let mut out = PathBuf::new();
    for comp in path.components() {
        match comp {
            Component::CurDir => {}
            Component::ParentDir => {
                if !out.pop() {
                    out.push("..");
                }
            }
            other => out.push(other.as_os_str()),
        }
    }
    out
}

impl CorpusIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert_py(&mut self, path: &Path) {
        self.py_files.insert(normalize_path(path));
    }

    pub fn contains(&self, path: &Path) -> bool {
        self.py_files.contains(&normalize_path(path))
    }

    pub fn len(&self) -> usize {
        self.py_files.len()
    }

    pub fn is_empty(&self) -> bool {
        self.py_files.is_empty()
    }
}

/// Decide whether `record` refers to a module shipped alongside the notebook.
///
/// The first path segment is resolved against `<notebook dir>/<seg>.py` and
/// `<notebook dir>/<seg>/__init__.py`; a bare relative import (`from . import
/// x`) resolves against the notebook directory's `__init__.py`.
pub fn classify_import_origin(
    record: &ImportRecord,
    notebook_path: &Path,
    index: Option<&CorpusIndex>,
) -> ImportOrigin {
    let Some(index) = index else {
        return ImportOrigin::Unknown;
    };
    let dir = notebook_path.parent().unwrap_or_else(|| Path::new(""));
    let seg = first_segment(&record.module_path);
    let candidates: Vec<PathBuf> = if seg.is_empty() {
        vec![dir.join("__init__.py")]
    } else {
        vec![
            dir.join(format!("{seg}.py")),
            dir.join(seg).join("__init__.py"),
        ]
    };
    if candidates.iter().any(|c| index.contains(c)) {
        ImportOrigin::Local
    } else {
        ImportOrigin::External
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::{extract_script, StripRules};
    use crate::notebook::parse_notebook_bytes;

    fn script_of(lines: &[&str]) -> ExtractedScript {
        let doc = serde_json::json!({
            "nbformat": 4,
            "cells": [{
                "cell_type": "code",
                "source": lines.iter().map(|l| format!("{l}\n")).collect::<Vec<_>>(),
                "execution_count": null,
                "outputs": []
            }]
        });
        let nb = parse_notebook_bytes(serde_json::to_string(&doc).unwrap().as_bytes(), "t.ipynb")
            .unwrap();
        extract_script(&nb, StripRules::default())
    }

    #[test]
    fn code_text_masks_strings_and_drops_comments() {
        assert_eq!(code_text("x = 1  # set x"), "x = 1  ");
        assert_eq!(code_text("s = 'a#b'"), "s = '   '");
        assert_eq!(code_text(r#"t = "a\"b""#), r#"t = "    ""#);
        assert_eq!(code_text("u = '''a,b''' + z"), "u = '''   ''' + z");
        assert_eq!(code_text("v = '''open"), "v = '''    ");
        assert_eq!(code_text("w = ''"), "w = ''");
    }

    #[test]
    fn plain_imports_bind_aliases_or_first_segments() {
        let script = script_of(&["import numpy as np", "import os.path, sys"]);
        let recs = scan_imports(&script);
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[0].module_path, "numpy");
        assert_eq!(recs[0].bound_names, vec!["np"]);
        assert_eq!(recs[1].module_path, "os.path");
        assert_eq!(recs[1].bound_names, vec!["os"]);
        assert_eq!(recs[2].module_path, "sys");
        assert_eq!(recs[2].bound_names, vec!["sys"]);
        assert!(recs.iter().all(|r| !r.is_wildcard && r.imported_names.is_empty()));
    }

    #[test]
    fn from_imports_collect_names_and_aliases() {
        let script = script_of(&["from sklearn.model_selection import train_test_split, KFold as KF"]);
        let recs = scan_imports(&script);
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].module_path, "sklearn.model_selection");
        assert_eq!(recs[0].imported_names, vec!["train_test_split", "KFold"]);
        assert_eq!(recs[0].bound_names, vec!["train_test_split", "KF"]);
    }

    #[test]
    fn wildcard_import_is_flagged() {
        let script = script_of(&["from numpy import *"]);
        let recs = scan_imports(&script);
        assert!(recs[0].is_wildcard);
        assert!(recs[0].imported_names.is_empty());
        assert!(recs[0].bound_names.is_empty());
    }

    #[test]
    fn parenthesized_and_backslash_continuations_join() {
        let script = script_of(&[
            "from os.path import (",
            "    join,",
            "    split,",
            ")",
            "from sys import argv, \\",
            "    path",
            "x = 1",
        ]);
        let stmts = import_statements(&script);
        assert_eq!(stmts.len(), 2);
        assert_eq!((stmts[0].start_line, stmts[0].end_line), (0, 3));
        assert_eq!(stmts[0].records[0].imported_names, vec!["join", "split"]);
        assert_eq!((stmts[1].start_line, stmts[1].end_line), (4, 5));
        assert_eq!(stmts[1].records[0].bound_names, vec!["argv", "path"]);
    }

    #[test]
    fn relative_imports_keep_their_dots() {
        let script = script_of(&["from .utils import helper", "from . import siblings"]);
        let recs = scan_imports(&script);
        assert_eq!(recs[0].module_path, ".utils");
        assert_eq!(recs[1].module_path, ".");
    }

    #[test]
    fn indented_and_string_imports() {
        let script = script_of(&[
            "def lazy():",
            "    import json",
            "    return json",
            "s = 'import fake'",
            "# import also_fake",
        ]);
        let recs = scan_imports(&script);
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].module_path, "json");
        assert_eq!(recs[0].script_line, 1);
    }

    #[test]
    fn defs_capture_kind_name_and_indent() {
        let script = script_of(&[
            "class Model:",
            "    def fit(self):",
            "        pass",
            "async def main():",
            "    pass",
            "x = 'def not_a_def():'",
        ]);
        let defs = scan_defs(&script);
        assert_eq!(defs.len(), 3);
        assert_eq!((defs[0].kind, defs[0].name.as_str(), defs[0].indent), (DefKind::Class, "Model", 0));
        assert_eq!((defs[1].kind, defs[1].name.as_str(), defs[1].indent), (DefKind::Function, "fit", 4));
        assert_eq!((defs[2].kind, defs[2].name.as_str(), defs[2].indent), (DefKind::Function, "main", 0));
    }

    fn record(path: &str) -> ImportRecord {
        ImportRecord {
            module_path: path.to_owned(),
            imported_names: Vec::new(),
            is_wildcard: false,
            script_line: 0,
            bound_names: vec![first_segment(path).to_owned()],
        }
    }

    #[test]
    fn test_detection_strict_vs_recommended() {
        let records = vec![
            record("pytest"),
            record("unittest.mock"),
            record("latest.models"),
            record("nose2"),
            record("numpy"),
        ];
        let strict: Vec<String> = detect_test_imports(&records, &TestDetectConfig::strict())
            .into_iter()
            .map(|r| r.module_path)
            .collect();
        assert_eq!(strict, vec!["pytest", "unittest.mock", "latest.models", "nose2"]);

        let recommended: Vec<String> =
            detect_test_imports(&records, &TestDetectConfig::recommended())
                .into_iter()
                .map(|r| r.module_path)
                .collect();
        assert_eq!(recommended, vec!["pytest", "unittest.mock", "nose2"]);
    }

    #[test]
    fn test_detection_scope_narrows_to_first_segment() {
        let records = vec![record("mymod.tests.helpers")];
        let full = detect_test_imports(&records, &TestDetectConfig::strict());
        assert_eq!(full.len(), 1);
        let cfg = TestDetectConfig {
            scope: MatchScope::Top,
            ..TestDetectConfig::strict()
        };
        assert!(detect_test_imports(&records, &cfg).is_empty());
    }

    #[test]
    fn origin_classification_resolves_siblings() {
        let mut index = CorpusIndex::new();
        index.insert_py(Path::new("corpus/project/utils.py"));
        index.insert_py(Path::new("corpus/project/pkg/__init__.py"));
        let nb = Path::new("corpus/project/analysis.ipynb");

        assert_eq!(
            classify_import_origin(&record("utils"), nb, Some(&index)),
            ImportOrigin::Local
        );
        assert_eq!(
            classify_import_origin(&record("utils.helpers"), nb, Some(&index)),
            ImportOrigin::Local
        );
        assert_eq!(
            classify_import_origin(&record("pkg"), nb, Some(&index)),
            ImportOrigin::Local
        );
        assert_eq!(
            classify_import_origin(&record("numpy"), nb, Some(&index)),
            ImportOrigin::External
        );
        assert_eq!(
            classify_import_origin(&record("utils"), nb, None),
            ImportOrigin::Unknown
        );
    }

    #[test]
    fn origin_classification_normalizes_dot_components() {
        let mut index = CorpusIndex::new();
        index.insert_py(Path::new("./corpus/utils.py"));
        assert_eq!(
            classify_import_origin(&record("utils"), Path::new("corpus/nb.ipynb"), Some(&index)),
            ImportOrigin::Local
        );
    }
}
