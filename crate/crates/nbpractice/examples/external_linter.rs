//! Bridge to an external linter process. The configured command gets the
//! extracted script as `{input}` and must print one finding per stdout
//! line as `line:column:code:category:message`.
//!
//! This example fakes the linter with a tiny shell script so it runs
//! without pylint installed; swap the command for e.g.
//! `pylint --output-format=parseable {input}` adapted to the contract.
//!
//! ```sh
//! cargo run --example external_linter
//! ```

use std::io::Write;
use std::path::Path;

use nbpractice::extract::{extract_script, StripRules};
use nbpractice::lint::{run_external_linter, BridgeConfig};
use nbpractice::notebook::parse_notebook;

fn main() {
    let nb_path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures/corpus/09_lint_violations.ipynb");
    let nb = parse_notebook(&nb_path).expect("notebook parses");
    let script = extract_script(&nb, StripRules::default());

    // Stand-in linter: flags line 1 and line 3, and emits one finding the
    // bridge is configured to ignore.
    let mut fake = tempfile::Builder::new()
        .prefix("fake-linter-")
        .suffix(".sh")
        .tempfile()
        .expect("temp file");
    fake.write_all(
        b"#!/bin/sh\n\
          echo \"1:0:E0602:error:undefined variable 'frob'\"\n\
          echo \"3:4:W0104:warning:statement seems to have no effect\"\n\
          echo \"3:4:pointless-statement:convention:ignored by default\"\n",
    )
    .expect("write script");
    let fake_path = fake.into_temp_path();

    let mut cfg = BridgeConfig::new(format!("sh {} {{input}}", fake_path.display()));
    cfg.max_concurrent = 1;

    match run_external_linter(&script.text(), &cfg) {
        Ok(findings) => {
            for f in &findings {
                println!(
                    "script line {:>2}  {:<10} {:<12} {}",
                    f.script_line,
                    f.category.as_str(),
                    f.check_id,
                    f.message
                );
            }
            println!("\n{} finding(s) after filtering", findings.len());
        }
        Err(e) => eprintln!("bridge unavailable: {e}"),
    }
}
