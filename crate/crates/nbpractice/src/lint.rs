//! Code-style checks over extracted scripts.
//!
//! The native pass covers a small, deterministic subset of common Python
//! lint checks so that no external tooling is required. When an external
//! linter is configured, its per-line findings are bridged in through a
//! simple `line:column:code:category:message` text contract and merged with
//! a distinguishing `ext:` prefix.

use std::collections::HashSet;
use std::io::Write as _;
use std::process::Command;
use std::sync::{Condvar, LazyLock, Mutex};

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extract::ExtractedScript;
use crate::scan::{code_text, import_statements, scan_defs, DefKind};

/// Finding categories, mirroring the usual linter taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LintCategory {
    Convention,
    Refactor,
    Warning,
    Error,
}

impl LintCategory {
    pub fn as_str(self) -> &'static str {
        match self {
            LintCategory::Convention => "convention",
            LintCategory::Refactor => "refactor",
            LintCategory::Warning => "warning",
            LintCategory::Error => "error",
        }
    }

    /// All categories, in severity-agnostic display order.
    pub fn all() -> [LintCategory; 4] {
        [
            LintCategory::Convention,
            LintCategory::Refactor,
            LintCategory::Warning,
            LintCategory::Error,
        ]
    }
}

/// One style finding, addressed by script line (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LintFinding {
    pub check_id: String,
    pub category: LintCategory,
    pub script_line: usize,
    pub message: String,
}

/// Knobs for the native pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LintConfig {
    /// Lines longer than this many characters are flagged.
    pub max_line_len: usize,
}

impl Default for LintConfig {
    fn default() -> Self {
        LintConfig { max_line_len: 79 }
    }
}

static TOKEN: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[A-Za-z_][A-Za-z0-9_]*").unwrap());

fn finding(check_id: &str, category: LintCategory, line: usize, message: String) -> LintFinding {
    LintFinding {
        check_id: check_id.to_owned(),
        category,
        script_line: line,
        message,
    }
}

/// Run the native checks. Only mapped lines are inspected, so every finding
/// can be traced back to a notebook cell.
pub fn lint_native(script: &ExtractedScript, cfg: &LintConfig) -> Vec<LintFinding> {
    let mut findings = Vec::new();

    for (line_no, raw) in script.mapped_lines() {
        if raw.ends_with(' ') || raw.ends_with('\t') {
            findings.push(finding(
                "trailing-whitespace",
                LintCategory::Convention,
                line_no,
                "trailing whitespace".to_owned(),
            ));
        }
        let width = raw.chars().count();
        if width > cfg.max_line_len {
            findings.push(finding(
                "line-too-long",
                LintCategory::Convention,
                line_no,
                format!("line too long ({width} > {})", cfg.max_line_len),
            ));
        }
        let code = code_text(raw);
        findings.extend(comma_whitespace(&code, line_no));
        if has_multiple_statements(&code) {
            findings.push(finding(
                "multiple-statements",
                LintCategory::Convention,
                line_no,
                "more than one statement on a single line".to_owned(),
            ));
        }
    }

    for def in scan_defs(script) {
        let ok = match def.kind {
            DefKind::Function => is_snake_case(&def.name),
            DefKind::Class => is_pascal_case(&def.name),
        };
        if !ok {
            let (kind, style) = match def.kind {
                DefKind::Function => ("function", "snake_case"),
                DefKind::Class => ("class", "PascalCase"),
            };
            findings.push(finding(
                "invalid-name",
                LintCategory::Convention,
                def.script_line,
                format!("{kind} name '{}' should be {style}", def.name),
            ));
        }
    }

    findings.extend(import_findings(script));
    findings.sort_by(|a, b| {
        (a.script_line, &a.check_id, &a.message).cmp(&(b.script_line, &b.check_id, &b.message))
    });
    findings
}

/// Per-occurrence comma/semicolon spacing findings for one masked line.
/// Commas inside square brackets tolerate a missing following space
/// (slice syntax), as does a comma right before a closing bracket.
fn comma_whitespace(code: &str, line_no: usize) -> Vec<LintFinding> {
    let chars: Vec<char> = code.chars().collect();
    let mut sq_depth = 0i32;
    let mut out = Vec::new();
    for (i, &c) in chars.iter().enumerate() {
        match c {
            '[' => sq_depth += 1,
            ']' => sq_depth -= 1,
            ',' | ';' => {
                if i > 0 && (chars[i - 1] == ' ' || chars[i - 1] == '\t') {
                    out.push(finding(
                        "bad-whitespace",
                        LintCategory::Convention,
                        line_no,
                        format!("whitespace before '{c}'"),
                    ));
                }
                if c == ',' && sq_depth == 0 {
                    let next = chars.get(i + 1);
                    let tolerated = matches!(next, None | Some(' ') | Some('\t'))
                        || matches!(next, Some(')') | Some(']') | Some('}'));
                    if !tolerated {
                        out.push(finding(
                            "bad-whitespace",
                            LintCategory::Convention,
                            line_no,
                            "missing whitespace after ','".to_owned(),
                        ));
                    }
                }
            }
            _ => {}
        }
    }
    out
}

/// A line holds multiple statements when a top-level `;` is followed by
/// more code. A bare trailing semicolon is a different (unchecked) smell.
fn has_multiple_statements(code: &str) -> bool {
    let mut depth = 0i32;
    let chars: Vec<char> = code.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            ';' if depth == 0 && chars[i + 1..].iter().any(|c| !c.is_whitespace()) => {
                return true;
            }
            _ => {}
        }
    }
    false
}

fn is_snake_case(name: &str) -> bool {
    !name.chars().any(|c| c.is_ascii_uppercase())
}

fn is_pascal_case(name: &str) -> bool {
    let name = name.strip_prefix('_').unwrap_or(name);
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric())
}

/// Wildcard and unused imports. "Unused" is lexical: a bound name counts as
/// used when it occurs as a word token on any mapped line outside its own
/// import statement. String interiors and comments never count.
fn import_findings(script: &ExtractedScript) -> Vec<LintFinding> {
    let statements = import_statements(script);
    let line_tokens: Vec<(usize, HashSet<String>)> = script
        .mapped_lines()
        .map(|(line_no, raw)| {
            let code = code_text(raw);
            let tokens = TOKEN
                .find_iter(&code)
                .map(|m| m.as_str().to_owned())
                .collect();
            (line_no, tokens)
        })
        .collect();

    let mut out = Vec::new();
    for stmt in &statements {
        for rec in &stmt.records {
            if rec.is_wildcard {
                out.push(finding(
                    "wildcard-import",
                    LintCategory::Warning,
                    rec.script_line,
                    format!("wildcard import from '{}'", rec.module_path),
                ));
                continue;
            }
            for name in &rec.bound_names {
                let used = line_tokens
                    .iter()
                    .filter(|(line, _)| *line < stmt.start_line || *line > stmt.end_line)
                    .any(|(_, tokens)| tokens.contains(name));
                if !used {
                    out.push(finding(
                        "unused-import",
                        LintCategory::Warning,
                        rec.script_line,
                        format!("unused import '{name}'"),
                    ));
                }
            }
        }
    }
    out
}

/// External linter invocation template and filtering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BridgeConfig {
    /// Command template; `{input}` is replaced by the script's temp path.
    pub command: String,
    /// Check codes dropped from bridged output (matched bare or `ext:`-prefixed).
    pub ignored_checks: Vec<String>,
    /// Upper bound on concurrently running linter processes.
    pub max_concurrent: usize,
}

impl BridgeConfig {
    pub fn new(command: impl Into<String>) -> Self {
        BridgeConfig {
            command: command.into(),
            ignored_checks: vec!["pointless-statement".to_owned()],
            max_concurrent: 4,
        }
    }
}

/// Why the external linter could not run at all.
#[derive(Debug, Error)]
pub enum BridgeError {
    #[error("external linter unavailable: {detail}")]
    Unavailable { detail: String },
}

/// Counting gate that caps concurrent linter processes across threads.
struct Gate {
    running: Mutex<usize>,
    cv: Condvar,
}

static GATE: LazyLock<Gate> = LazyLock::new(|| Gate {
    running: Mutex::new(0),
    cv: Condvar::new(),
});

struct GatePass;

impl Gate {
    fn acquire(&self, cap: usize) -> GatePass {
        let cap = cap.max(1);
        let mut running = self.running.lock().unwrap();
        while *running >= cap {
            running = self.cv.wait(running).unwrap();
        }
        *running += 1;
        GatePass
    }
}

impl Drop for GatePass {
    fn drop(&mut self) {
        let mut running = GATE.running.lock().unwrap();
        *running -= 1;
        GATE.cv.notify_one();
    }
}

/// Run the configured external linter over the script text and parse its
/// stdout. Lines that do not follow the `line:column:code:category:message`
/// contract surface as `ext:parse-error` warnings instead of failing the run.
pub fn run_external_linter(
    script_text: &str,
    cfg: &BridgeConfig,
) -> Result<Vec<LintFinding>, BridgeError> {
    let unavailable = |detail: String| BridgeError::Unavailable { detail };

    let mut tmp = tempfile::Builder::new()
        .prefix("nbpractice-")
        .suffix(".py")
        .tempfile()
        .map_err(|e| unavailable(format!("cannot create temp file: {e}")))?;
    tmp.write_all(script_text.as_bytes())
        .map_err(|e| unavailable(format!("cannot write temp file: {e}")))?;
    let input_path = tmp.path().display().to_string();

    let argv: Vec<String> = cfg
        .command
        .split_whitespace()
        .map(|part| part.replace("{input}", &input_path))
        .collect();
    let Some((program, args)) = argv.split_first() else {
        return Err(unavailable("empty command template".to_owned()));
    };

    let output = {
        let _pass = GATE.acquire(cfg.max_concurrent);
        Command::new(program)
            .args(args)
            .output()
            .map_err(|e| unavailable(format!("cannot spawn {program}: {e}")))?
    };
    // Nonzero exit is normal for linters that found something.

    let stdout = String::from_utf8_lossy(&output.stdout);
    let mut findings = Vec::new();
    for raw_line in stdout.lines() {
        if raw_line.trim().is_empty() {
            continue;
        }
        match parse_bridge_line(raw_line) {
            Some(f) => {
                let bare = f.check_id.trim_start_matches("ext:");
                let ignored = cfg
                    .ignored_checks
                    .iter()
                    .any(|ig| ig == bare || ig == &f.check_id);
                if !ignored {
                    findings.push(f);
                }
            }
            None => findings.push(finding(
                "ext:parse-error",
                LintCategory::Warning,
                0,
                format!("unparseable linter line: {raw_line}"),
            )),
        }
    }
    findings.sort_by(|a, b| {
        (a.script_line, &a.check_id, &a.message).cmp(&(b.script_line, &b.check_id, &b.message))
    });
    Ok(findings)
}

fn parse_bridge_line(line: &str) -> Option<LintFinding> {
    let mut parts = line.splitn(5, ':');
    let line_no: usize = parts.next()?.trim().parse().ok()?;
    let _column = parts.next()?;
    let code = parts.next()?.trim();
    let category = match parts.next()?.trim().chars().next()? {
        'C' | 'c' => LintCategory::Convention,
        'R' | 'r' => LintCategory::Refactor,
        'W' | 'w' => LintCategory::Warning,
        'E' | 'e' | 'F' | 'f' => LintCategory::Error,
        _ => return None,
    };
    let message = parts.next()?.trim().to_owned();
    if code.is_empty() {
        return None;
    }
    Some(LintFinding {
        check_id: format!("ext:{code}"),
        category,
        script_line: line_no,
        message,
    })
}
