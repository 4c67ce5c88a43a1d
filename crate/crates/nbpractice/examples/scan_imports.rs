//! Find the imports in a notebook, resolve which ones are local modules,
//! and flag the ones that look like test frameworks.
//!
//! ```sh
//! cargo run --example scan_imports
//! ```

use std::path::Path;

use nbpractice::extract::{extract_script, StripRules};
use nbpractice::notebook::parse_notebook;
use nbpractice::scan::{
    classify_import_origin, detect_test_imports, scan_imports, CorpusIndex, TestDetectConfig,
};

fn main() {
    let corpus = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus");

    // The index normally comes from corpus ingestion; register the one
    // sibling module by hand here.
    let mut index = CorpusIndex::new();
    index.insert_py(&corpus.join("utils.py"));

    for name in ["07_local_import.ipynb", "08_test_import.ipynb"] {
        let path = corpus.join(name);
        let nb = parse_notebook(&path).expect("notebook parses");
        let script = extract_script(&nb, StripRules::default());
        let records = scan_imports(&script);

        println!("{name}:");
        for rec in &records {
            let origin = classify_import_origin(rec, Path::new(&nb.path), Some(&index));
            println!(
                "  line {:>2}  {:<12} {:?}  binds {:?}",
                rec.script_line, rec.module_path, origin, rec.bound_names
            );
        }
        let tests = detect_test_imports(&records, &TestDetectConfig::recommended());
        match tests.as_slice() {
            [] => println!("  no test frameworks detected"),
            hits => {
                for hit in hits {
                    println!("  test framework: {}", hit.module_path);
                }
            }
        }
        println!();
    }
}
