//! Parse one notebook file and walk its cell model.
//!
//! ```sh
//! cargo run --example parse_notebook [path/to/notebook.ipynb]
//! ```

use std::path::{Path, PathBuf};

use nbpractice::notebook::parse_notebook;

fn main() {
    let path = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/fixtures/corpus/01_clean_executed.ipynb")
    });

    let nb = match parse_notebook(&path) {
        Ok(nb) => nb,
        Err(e) => {
            eprintln!("cannot parse: {e}");
            std::process::exit(1);
        }
    };

    println!("path:     {}", nb.path);
    println!("format:   nbformat {}", nb.nbformat_major);
    println!("kernel:   {}", nb.kernel_language().unwrap_or("(undeclared)"));
    println!("hash:     {}", nb.content_hash);
    println!("cells:    {}", nb.cells.len());
    println!();

    for (i, cell) in nb.cells.iter().enumerate() {
        let counter = match cell.execution_count {
            Some(n) => format!("[{n}]"),
            None => "[ ]".to_owned(),
        };
        println!(
            "  #{i} {:?} {counter} {} line(s), {} output(s)",
            cell.kind,
            cell.source.len(),
            cell.raw_outputs.len()
        );
        for line in &cell.source {
            println!("      | {line}");
        }
    }
}
