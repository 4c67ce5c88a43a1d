//! Evaluate every operationalized best practice on one notebook: the full
//! metrics record plus the diagnostics a CI gate would act on.
//!
//! ```sh
//! cargo run --example analyze_notebook [path/to/notebook.ipynb]
//! ```

use std::path::{Path, PathBuf};

use nbpractice::checks::analyze_notebook;
use nbpractice::config::Config;
use nbpractice::notebook::parse_notebook;

fn main() {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/fixtures/corpus/03_skipped_counter.ipynb")
    });
    let nb = parse_notebook(&path).expect("notebook parses");
    let config = Config::default();
    let (metrics, findings) = analyze_notebook(&nb, &config, None).expect("analysis runs");

    println!("cells:              {} code / {} md / {} raw",
        metrics.code_cells, metrics.md_cells, metrics.raw_cells);
    println!("executed:           {}", metrics.executed);
    println!("top to bottom:      {}", metrics.top_to_bottom);
    println!("imports first 1/3:  {:.2}", metrics.imports_first_third_fraction);
    println!("function defs:      {}", metrics.has_function_def);
    println!("markdown words:     {}", metrics.meaningful_md_words);
    println!("markdown headings:  {}", metrics.md_heading_count);
    println!("empty cells:        {}", metrics.empty_cells);
    if !metrics.skipped.is_empty() {
        println!("skipped practices:  {:?}", metrics.skipped);
    }

    println!();
    if findings.is_empty() {
        println!("no findings");
        return;
    }
    for f in &findings {
        let at = match (f.cell_index, f.cell_line) {
            (Some(c), Some(l)) => format!("cell {c}:{l}"),
            (Some(c), None) => format!("cell {c}"),
            _ => "notebook".to_owned(),
        };
        println!("{at:<10} {} {}/{}: {}", f.severity, f.bp_id, f.check_id, f.message);
    }
}
