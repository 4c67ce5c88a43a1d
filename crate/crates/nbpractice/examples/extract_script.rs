//! Flatten a notebook's code cells into a plain Python script, watching
//! how notebook-only syntax (magics, shell escapes, introspection) is
//! blanked in place so line numbers keep working.
//!
//! ```sh
//! cargo run --example extract_script [path/to/notebook.ipynb]
//! ```

use std::path::{Path, PathBuf};

use nbpractice::extract::{extract_script, StripRules};
use nbpractice::notebook::parse_notebook;

fn main() {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus/06_magics.ipynb")
    });
    let nb = parse_notebook(&path).expect("notebook parses");
    let script = extract_script(&nb, StripRules::default());

    println!("script ({} lines):", script.text_lines.len());
    for (i, line) in script.text_lines.iter().enumerate() {
        println!("  {i:>3} | {line}");
    }

    println!("\nstripped ({}):", script.stripped.len());
    for rec in &script.stripped {
        println!(
            "  cell {} line {}: {:?}",
            rec.cell_index, rec.cell_line, rec.reason
        );
    }

    println!("\nline map (script -> cell):");
    for entry in &script.map_entries {
        println!(
            "  {:>3} -> cell {} line {}",
            entry.script_line, entry.cell_index, entry.cell_line
        );
    }
}
