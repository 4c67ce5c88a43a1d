//! Parsed notebook model: nbformat-4 JSON in, cells with normalized sources out.
//!
//! Parsing is lenient about fields it does not interpret (they are preserved
//! verbatim for round-tripping) and strict about the handful it does: the
//! format version, the cell list, cell types, and execution counters.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

/// The three cell types of nbformat 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellKind {
    Code,
    Markdown,
    Raw,
}

impl CellKind {
    fn as_str(self) -> &'static str {
        match self {
            CellKind::Code => "code",
            CellKind::Markdown => "markdown",
            CellKind::Raw => "raw",
        }
    }
}

/// Output kinds a code cell can carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Stream,
    DisplayData,
    ExecuteResult,
    Error,
}

/// Execution status of a single code cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    /// Source is zero lines or whitespace-only.
    Empty,
    /// Non-empty source with a non-null execution counter.
    Executed,
    /// Non-empty source, counter is null.
    NotExecuted,
}

/// One notebook cell with its source normalized to lines.
///
/// `source` is stored without line terminators; both nbformat encodings
/// (a single string or a list of string fragments) normalize to the same
/// lines, and CRLF terminators are tolerated.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub kind: CellKind,
    pub source: Vec<String>,
    /// Execution counter; always `None` for markdown and raw cells.
    pub execution_count: Option<u64>,
    /// Raw `outputs` array of a code cell, preserved for round-tripping.
    pub raw_outputs: Vec<Value>,
    /// Cell fields this library does not interpret (metadata, id, ...).
    pub extra: BTreeMap<String, Value>,
}

impl Cell {
    /// Interpreted kinds of this cell's outputs, in order. Entries with an
    /// unrecognized `output_type` are skipped.
    pub fn output_kinds(&self) -> Vec<OutputKind> {
        self.raw_outputs
            .iter()
            .filter_map(|o| match o.get("output_type").and_then(Value::as_str) {
                Some("stream") => Some(OutputKind::Stream),
                Some("display_data") => Some(OutputKind::DisplayData),
                Some("execute_result") => Some(OutputKind::ExecuteResult),
                Some("error") => Some(OutputKind::Error),
                _ => None,
            })
            .collect()
    }

    /// True when every source line is whitespace-only (zero lines included).
    pub fn is_blank(&self) -> bool {
        self.source.iter().all(|l| l.trim().is_empty())
    }
}

/// A parsed notebook.
#[derive(Debug, Clone, PartialEq)]
pub struct Notebook {
    /// Path label the notebook was read from (used in errors and reports).
    pub path: String,
    pub nbformat_major: u64,
    pub cells: Vec<Cell>,
    /// SHA-256 of the raw file bytes, hex-encoded.
    pub content_hash: String,
    /// Top-level fields this library does not interpret (metadata, ...).
    pub extra: BTreeMap<String, Value>,
}

/// Why a file could not be parsed into a [`Notebook`].
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{path}: cannot read file: {detail}")]
    Io { path: String, detail: String },
    #[error("{path}: not valid JSON: {detail}")]
    MalformedJson { path: String, detail: String },
    #[error("{path}: unsupported nbformat version {found}")]
    UnsupportedFormat { path: String, found: String },
    #[error("{path}: JSON document is not a notebook ({detail})")]
    NotANotebook { path: String, detail: String },
    #[error("{path}: cell {index} is invalid: {detail}")]
    InvalidCell {
        path: String,
        index: usize,
        detail: String,
    },
}

impl ParseError {
    /// The file the error is about.
    pub fn path(&self) -> &str {
        match self {
            ParseError::Io { path, .. }
            | ParseError::MalformedJson { path, .. }
            | ParseError::UnsupportedFormat { path, .. }
            | ParseError::NotANotebook { path, .. }
            | ParseError::InvalidCell { path, .. } => path,
        }
    }
}

/// Errors from per-cell accessors.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CellError {
    #[error("cell {index} is not a code cell")]
    NotACodeCell { index: usize },
}

/// Errors from position math.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PositionError {
    #[error("cell index {index} out of range for {len} cells")]
    IndexOutOfRange { index: usize, len: usize },
}

/// Normalize an nbformat `source` value to lines.
///
/// Fragments are concatenated before splitting, so `["a\n", "b"]` and
/// `"a\nb"` yield the same lines. One trailing newline does not produce a
/// trailing empty line, and `\r` before a split point is dropped.
fn normalize_source(value: Option<&Value>) -> Result<Vec<String>, String> {
    let joined = match value {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Array(parts)) => {
            let mut buf = String::new();
            for p in parts {
                match p {
                    Value::String(s) => buf.push_str(s),
                    other => return Err(format!("source fragment is {}", json_kind(other))),
                }
            }
            buf
        }
        Some(other) => return Err(format!("source is {}", json_kind(other))),
    };
    if joined.is_empty() {
        return Ok(Vec::new());
    }
    let mut lines: Vec<String> = joined.split('\n').map(str::to_owned).collect();
    if lines.last().is_some_and(String::is_empty) {
        lines.pop();
    }
    for line in &mut lines {
        if line.ends_with('\r') {
            line.pop();
        }
    }
    Ok(lines)
}

fn json_kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

/// Parse a notebook from disk. The file's bytes are hashed for later
/// duplicate detection before any JSON work happens.
pub fn parse_notebook(path: &Path) -> Result<Notebook, ParseError> {
    let label = path.display().to_string();
    let bytes = fs::read(path).map_err(|e| ParseError::Io {
        path: label.clone(),
        detail: e.to_string(),
    })?;
    parse_notebook_bytes(&bytes, &label)
}

/// Parse a notebook from raw bytes, labeling errors with `path`.
pub fn parse_notebook_bytes(bytes: &[u8], path: &str) -> Result<Notebook, ParseError> {
    let content_hash = hex_sha256(bytes);
    let value: Value =
        serde_json::from_slice(bytes).map_err(|e| ParseError::MalformedJson {
            path: path.to_owned(),
            detail: e.to_string(),
        })?;
    let root = match value {
        Value::Object(map) => map,
        other => {
            return Err(ParseError::NotANotebook {
                path: path.to_owned(),
                detail: format!("top level is {}", json_kind(&other)),
            })
        }
    };

    let nbformat_major = match root.get("nbformat") {
        Some(v) => v.as_u64().ok_or_else(|| ParseError::UnsupportedFormat {
            path: path.to_owned(),
            found: v.to_string(),
        })?,
        None => {
            return Err(ParseError::NotANotebook {
                path: path.to_owned(),
                detail: "missing nbformat field".to_owned(),
            })
        }
    };
    if nbformat_major < 4 {
        return Err(ParseError::UnsupportedFormat {
            path: path.to_owned(),
            found: nbformat_major.to_string(),
        });
    }

    let raw_cells = match root.get("cells") {
        Some(Value::Array(cells)) => cells.clone(),
        Some(other) => {
            return Err(ParseError::NotANotebook {
                path: path.to_owned(),
                detail: format!("cells is {}", json_kind(other)),
            })
        }
        None => {
            return Err(ParseError::NotANotebook {
                path: path.to_owned(),
                detail: "missing cells array".to_owned(),
            })
        }
    };

    let mut cells = Vec::with_capacity(raw_cells.len());
    for (index, raw) in raw_cells.into_iter().enumerate() {
        cells.push(parse_cell(raw, index, path)?);
    }

    let extra = root
        .into_iter()
        .filter(|(k, _)| k != "nbformat" && k != "cells")
        .collect();

    Ok(Notebook {
        path: path.to_owned(),
        nbformat_major,
        cells,
        content_hash,
        extra,
    })
}

fn parse_cell(raw: Value, index: usize, path: &str) -> Result<Cell, ParseError> {
    let invalid = |detail: String| ParseError::InvalidCell {
        path: path.to_owned(),
        index,
        detail,
    };
    let obj = match raw {
        Value::Object(map) => map,
        other => return Err(invalid(format!("cell is {}", json_kind(&other)))),
    };
    let kind = match obj.get("cell_type").and_then(Value::as_str) {
        Some("code") => CellKind::Code,
        Some("markdown") => CellKind::Markdown,
        Some("raw") => CellKind::Raw,
        Some(other) => return Err(invalid(format!("unknown cell_type {other:?}"))),
        None => return Err(invalid("missing cell_type".to_owned())),
    };
    let source = normalize_source(obj.get("source")).map_err(invalid)?;

    let mut execution_count = None;
    let mut raw_outputs = Vec::new();
    if kind == CellKind::Code {
        execution_count = match obj.get("execution_count") {
            None | Some(Value::Null) => None,
            Some(v) => Some(v.as_u64().ok_or_else(|| {
                invalid(format!("execution_count is not a non-negative integer: {v}"))
            })?),
        };
        raw_outputs = match obj.get("outputs") {
            None | Some(Value::Null) => Vec::new(),
            Some(Value::Array(outs)) => outs.clone(),
            Some(other) => return Err(invalid(format!("outputs is {}", json_kind(other)))),
        };
    }

    let consumed: &[&str] = match kind {
        CellKind::Code => &["cell_type", "source", "execution_count", "outputs"],
        _ => &["cell_type", "source"],
    };
    let extra = obj
        .into_iter()
        .filter(|(k, _)| !consumed.contains(&k.as_str()))
        .collect();

    Ok(Cell {
        kind,
        source,
        execution_count,
        raw_outputs,
        extra,
    })
}

fn hex_sha256(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for byte in digest {
        use fmt::Write;
        let _ = write!(out, "{byte:02x}");
    }
    out
}

impl Notebook {
    /// Serialize back to nbformat JSON. Uninterpreted fields come back
    /// verbatim; sources are written as single strings with a trailing
    /// newline so that parsing the result reproduces this model exactly.
    pub fn to_json_value(&self) -> Value {
        let cells: Vec<Value> = self.cells.iter().map(cell_to_json).collect();
        let mut root = serde_json::Map::new();
        root.insert("nbformat".to_owned(), Value::from(self.nbformat_major));
        root.insert("cells".to_owned(), Value::Array(cells));
        for (k, v) in &self.extra {
            root.insert(k.clone(), v.clone());
        }
        Value::Object(root)
    }

    /// Kernel language from `metadata.kernelspec.language`, falling back to
    /// `metadata.language_info.name`. `None` when neither is present.
    pub fn kernel_language(&self) -> Option<&str> {
        let meta = self.extra.get("metadata")?;
        meta.get("kernelspec")
            .and_then(|k| k.get("language"))
            .and_then(Value::as_str)
            .or_else(|| {
                meta.get("language_info")
                    .and_then(|l| l.get("name"))
                    .and_then(Value::as_str)
            })
    }

    /// Whether code cells should be treated as Python. Notebooks that do not
    /// declare a kernel language are assumed to be Python.
    pub fn is_python(&self) -> bool {
        self.kernel_language()
            .is_none_or(|l| l.to_ascii_lowercase().contains("python"))
    }

    /// A notebook is executed iff at least one code cell has a counter.
    pub fn executed(&self) -> bool {
        self.cells
            .iter()
            .any(|c| c.kind == CellKind::Code && c.execution_count.is_some())
    }

    /// Indices of cells of the given kind.
    pub fn cell_indices(&self, kind: CellKind) -> Vec<usize> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.kind == kind)
            .map(|(i, _)| i)
            .collect()
    }
}

fn cell_to_json(cell: &Cell) -> Value {
    let source = if cell.source.is_empty() {
        String::new()
    } else {
        let mut s = cell.source.join("\n");
        s.push('\n');
        s
    };
    let mut obj = serde_json::Map::new();
    obj.insert("cell_type".to_owned(), Value::from(cell.kind.as_str()));
    obj.insert("source".to_owned(), Value::from(source));
    if cell.kind == CellKind::Code {
        obj.insert(
            "execution_count".to_owned(),
            match cell.execution_count {
                Some(n) => Value::from(n),
                None => Value::Null,
            },
        );
        obj.insert(
            "outputs".to_owned(),
            Value::Array(cell.raw_outputs.clone()),
        );
    }
    for (k, v) in &cell.extra {
        obj.insert(k.clone(), v.clone());
    }
    Value::Object(obj)
}

/// Execution status of the code cell at `index`.
pub fn cell_status(notebook: &Notebook, index: usize) -> Result<CellStatus, CellError> {
    let cell = notebook
        .cells
        .get(index)
        .filter(|c| c.kind == CellKind::Code)
        .ok_or(CellError::NotACodeCell { index })?;
    Ok(if cell.is_blank() {
        CellStatus::Empty
    } else if cell.execution_count.is_some() {
        CellStatus::Executed
    } else {
        CellStatus::NotExecuted
    })
}

/// Execution counters of non-empty code cells, in document order.
pub fn execution_sequence(notebook: &Notebook) -> Vec<Option<u64>> {
    notebook
        .cells
        .iter()
        .filter(|c| c.kind == CellKind::Code && !c.is_blank())
        .map(|c| c.execution_count)
        .collect()
}

/// Position of a cell as a fraction of the document: `index / (len - 1)`,
/// and 0.0 for a single-cell document.
pub fn cell_position_fraction(index: usize, len: usize) -> Result<f64, PositionError> {
    if index >= len {
        return Err(PositionError::IndexOutOfRange { index, len });
    }
    if len == 1 {
        return Ok(0.0);
    }
    Ok(index as f64 / (len - 1) as f64)
}
