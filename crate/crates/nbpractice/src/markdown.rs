//! Markdown measurement: meaningful words/lines and heading detection.
//!
//! "Meaningful" tokens are what remains after a fixed, ordered list of
//! stripping rules removes markdown syntax. The rule list is versioned
//! ([`STRIPPING_RULES_VERSION`]) and surfaced in report headers, because the
//! resulting counts are only comparable between runs that used the same
//! rules:
//!
//! 1. fenced code blocks (``` ... ```) are removed entirely, fences included
//! 2. HTML tags are removed
//! 3. image syntax is removed entirely, alt text included
//! 4. link syntax keeps the link text
//! 5. ATX heading markers are stripped (leading and closing `#` runs)
//! 6. lines made only of `-`/`=`/`_`/`*` (setext underlines, thematic
//!    breaks) are removed
//! 7. blockquote markers, list bullets, and ordered-list numerals are
//!    stripped repeatedly so nested prefixes all disappear
//! 8. inline-code backticks are dropped, their content kept
//! 9. emphasis markers (`*`/`_`) are trimmed at token edges
//!
//! Words are the whitespace-split tokens that survive; a line is meaningful
//! when at least one word survives on it.

use std::sync::LazyLock;

use regex::Regex;
use serde::Serialize;

use crate::notebook::{CellKind, Notebook};

/// Version tag for the stripping rule list above.
pub const STRIPPING_RULES_VERSION: &str = "v1";

/// One Markdown heading found in a notebook.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Heading {
    /// 1..=6.
    pub level: u8,
    /// Post-marker content, trimmed.
    pub text: String,
    /// Index of the markdown cell (within the whole notebook) carrying it.
    pub cell_index: usize,
}

static HTML_TAG: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"</?[A-Za-z][^>]*>").unwrap());
static IMAGE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"!\[[^\]]*\](\([^)]*\)|\[[^\]]*\])").unwrap());
static LINK: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\[([^\]]*)\](\([^)]*\)|\[[^\]]*\])").unwrap());
static ATX_MARKER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\s{0,3}#{1,6}\s+").unwrap());
static ATX_CLOSER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\s+#+\s*$").unwrap());
static BLOCKQUOTE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\s*>\s*").unwrap());
static BULLET: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\s*[-*+]\s+").unwrap());
static NUMERAL: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\s*\d+[.)]\s+").unwrap());
static ATX_HEADING: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\s{0,3}(#{1,6})\s+(.*)$").unwrap());

fn is_fence(line: &str) -> bool {
    line.trim_start().starts_with("```")
}

/// A line consisting only of `-`, `=`, `_`, `*`, and whitespace: a setext
/// underline, a thematic break, or decoration — never words.
fn is_marker_line(line: &str) -> bool {
    let t = line.trim();
    !t.is_empty() && t.chars().all(|c| matches!(c, '-' | '=' | '_' | '*' | ' ' | '\t'))
}

/// Strip inline syntax from one line (rules 2-5 and 7-9; fences and marker
/// lines are handled by the caller because they need line context).
fn strip_inline(line: &str) -> String {
    let mut s = HTML_TAG.replace_all(line, " ").into_owned();
    s = IMAGE.replace_all(&s, " ").into_owned();
    s = LINK.replace_all(&s, "$1").into_owned();
    if let Some(m) = ATX_MARKER.find(&s) {
        s = s[m.end()..].to_owned();
        s = ATX_CLOSER.replace(&s, "").into_owned();
    }
    loop {
        let before = s.len();
        s = BLOCKQUOTE.replace(&s, "").into_owned();
        s = BULLET.replace(&s, "").into_owned();
        s = NUMERAL.replace(&s, "").into_owned();
        if s.len() == before {
            break;
        }
    }
    s = s.replace('`', "");
    s.split_whitespace()
        .map(|tok| tok.trim_matches(|c| c == '*' || c == '_'))
        .filter(|tok| !tok.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Count meaningful words and meaningful lines in markdown content.
pub fn meaningful_md_tokens(md_lines: &[String]) -> (usize, usize) {
    let mut words = 0;
    let mut lines = 0;
    let mut in_fence = false;
    for line in md_lines {
        if is_fence(line) {
            in_fence = !in_fence;
            continue;
        }
        if in_fence || is_marker_line(line) {
            continue;
        }
        let stripped = strip_inline(line);
        let count = stripped.split_whitespace().count();
        if count > 0 {
            words += count;
            lines += 1;
        }
    }
    (words, lines)
}

/// Words in one heading's text, using the same inline stripping.
pub fn heading_word_count(heading_text: &str) -> usize {
    strip_inline(heading_text).split_whitespace().count()
}

/// Detect ATX and setext headings in the markdown cells of a notebook.
///
/// Setext: a `===`/`---` underline directly below a non-empty line that is
/// not itself a marker or heading. A `---` after a blank line is a thematic
/// break, not a heading. Fenced regions are skipped; underlines never pair
/// across cell boundaries.
pub fn detect_headings(notebook: &Notebook) -> Vec<Heading> {
    let mut headings = Vec::new();
    for (cell_index, cell) in notebook.cells.iter().enumerate() {
        if cell.kind != CellKind::Markdown {
            continue;
        }
        headings.extend(
            headings_in_lines(&cell.source)
                .into_iter()
                .map(|(level, text)| Heading {
                    level,
                    text,
                    cell_index,
                }),
        );
    }
    headings
}

/// Heading scan over one block of markdown lines; returns `(level, text)`.
pub fn headings_in_lines(lines: &[String]) -> Vec<(u8, String)> {
    let mut out = Vec::new();
    let mut in_fence = false;
    let mut prev_usable: Option<&str> = None; // candidate text for a setext underline

    for line in lines {
        if is_fence(line) {
            in_fence = !in_fence;
            prev_usable = None;
            continue;
        }
        if in_fence {
            continue;
        }
        if let Some(caps) = ATX_HEADING.captures(line) {
            let level = caps[1].len() as u8;
            let text = ATX_CLOSER.replace(caps[2].trim(), "").trim().to_owned();
            out.push((level, text));
            prev_usable = None;
            continue;
        }
        let trimmed = line.trim();
        let setext_level = if !trimmed.is_empty() && trimmed.chars().all(|c| c == '=') {
            Some(1)
        } else if !trimmed.is_empty() && trimmed.chars().all(|c| c == '-') {
            Some(2)
        } else {
            None
        };
        if let (Some(level), Some(text)) = (setext_level, prev_usable) {
            out.push((level, text.trim().to_owned()));
            prev_usable = None;
            continue;
        }
        let usable = !trimmed.is_empty()
            && !is_marker_line(line)
            && !trimmed.starts_with('#')
            && !BULLET.is_match(line)
            && !NUMERAL.is_match(line)
            && !BLOCKQUOTE.is_match(line);
        prev_usable = usable.then_some(line.as_str());
    }
    out
}
