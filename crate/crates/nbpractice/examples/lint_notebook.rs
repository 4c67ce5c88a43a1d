//! Run the built-in pycodestyle/pylint-flavored checks over a notebook's
//! extracted script and map each finding back to its cell.
//!
//! ```sh
//! cargo run --example lint_notebook [path/to/notebook.ipynb]
//! ```

use std::path::{Path, PathBuf};

use nbpractice::extract::{extract_script, map_line, StripRules};
use nbpractice::lint::{lint_native, LintConfig};
use nbpractice::notebook::parse_notebook;

fn main() {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/fixtures/corpus/09_lint_violations.ipynb")
    });
    let nb = parse_notebook(&path).expect("notebook parses");
    let script = extract_script(&nb, StripRules::default());
    let findings = lint_native(&script, &LintConfig::default());

    if findings.is_empty() {
        println!("clean: no findings");
        return;
    }
    for f in &findings {
        let location = match map_line(&script, f.script_line) {
            Ok((cell, line)) => format!("cell {cell}:{line}"),
            Err(_) => format!("script line {}", f.script_line),
        };
        println!(
            "{location:<12} {:<10} {:<20} {}",
            f.category.as_str(),
            f.check_id,
            f.message
        );
    }
    println!("\n{} finding(s)", findings.len());
}
