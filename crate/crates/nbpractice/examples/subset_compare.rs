//! Compare the whole corpus against its best-scored slices: do highly
//! rated notebooks adopt the practices more often?
//!
//! ```sh
//! cargo run --example subset_compare
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use nbpractice::checks::analyze_notebook;
use nbpractice::config::Config;
use nbpractice::ingest::ingest;
use nbpractice::report::render_markdown_summary;
use nbpractice::stats::subset_compare;

fn main() {
    let corpus_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus");
    let corpus = ingest(&[corpus_dir]).expect("at least one input");
    let config = Config::default();

    let items: Vec<(String, _)> = corpus
        .notebooks
        .iter()
        .map(|nb| {
            let metrics = analyze_notebook(nb, &config, Some(&corpus.index))
                .expect("no external linter configured")
                .0;
            (nb.path.clone(), metrics)
        })
        .collect();

    // Score table keyed the same way the notebooks are labeled. A real run
    // would read votes or ratings from a CSV next to the corpus.
    let mut scores: BTreeMap<String, f64> = BTreeMap::new();
    for (i, (path, _)) in items.iter().enumerate() {
        scores.insert(path.clone(), (i + 1) as f64);
    }

    let cmp = subset_compare(&items, &scores, &[0.75, 0.90], &config.digest(), config.md_denominator)
        .expect("scores cover the corpus");
    for path in &cmp.unscored {
        eprintln!("no score for {path}");
    }
    print!("{}", render_markdown_summary(&cmp.summaries));
}
