//! Measure how much real prose a notebook's markdown carries: meaningful
//! words and lines after formatting is stripped, plus the heading outline.
//!
//! ```sh
//! cargo run --example markdown_volume [path/to/notebook.ipynb]
//! ```

use std::path::{Path, PathBuf};

use nbpractice::markdown::{detect_headings, meaningful_md_tokens};
use nbpractice::notebook::{parse_notebook, CellKind};

fn main() {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus/10_md_rich.ipynb")
    });
    let nb = parse_notebook(&path).expect("notebook parses");

    let mut total_words = 0;
    let mut total_lines = 0;
    for (i, cell) in nb.cells.iter().enumerate() {
        if cell.kind != CellKind::Markdown {
            continue;
        }
        let (words, lines) = meaningful_md_tokens(&cell.source);
        total_words += words;
        total_lines += lines;
        println!(
            "cell {i}: {} source line(s) -> {words} meaningful word(s) on {lines} line(s)",
            cell.source.len()
        );
    }
    println!("total: {total_words} word(s) on {total_lines} line(s)\n");

    println!("heading outline:");
    for h in detect_headings(&nb) {
        println!("  {}{}", "  ".repeat((h.level - 1) as usize), h.text);
    }
}
