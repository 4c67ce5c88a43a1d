//! Acceptance gate: one test per release criterion, each printing a PASS
//! line on success. Oracle values are frozen independently of the library
//! code — by brute force, by a locally written reference implementation,
//! or by hand from the bundled fixture notebooks.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use nbpractice::checks::{analyze_notebook, check_bp5_top_to_bottom};
use nbpractice::config::{Config, MdDenominator};
use nbpractice::extract::extract_script;
use nbpractice::lint::{lint_native, LintConfig};
use nbpractice::markdown::meaningful_md_tokens;
use nbpractice::notebook::{parse_notebook_bytes, Notebook};
use nbpractice::stats::{subset_compare, StatsAccumulator};

fn fixture(path: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(path)
}

fn run_bin(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_nbpractice"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("stdout utf8"),
        String::from_utf8(out.stderr).expect("stderr utf8"),
    )
}

fn nb_from_json(doc: &Value) -> Notebook {
    parse_notebook_bytes(doc.to_string().as_bytes(), "gen.ipynb").unwrap()
}

/// Criterion 1: the execution-order verdict equals a brute-force evaluation
/// of its definition for every counter sequence of length ≤ 5 over
/// {null, 1..5} — 9,331 sequences, zero mismatches, well under 5 s.
#[test]
fn c01_bp5_exhaustive_oracle() {
    let started = Instant::now();
    // The definition, evaluated the long way: write down the expected
    // counter reading 1..k and compare it to what the sequence contains.
    fn oracle(seq: &[Option<u64>]) -> bool {
        let observed: Vec<u64> = seq.iter().filter_map(|c| *c).collect();
        let expected: Vec<u64> = (1..=observed.len() as u64).collect();
        !observed.is_empty() && observed == expected
    }

    let mut checked = 0usize;
    for len in 0..=5usize {
        let mut indices = vec![0usize; len];
        loop {
            let seq: Vec<Option<u64>> = indices
                .iter()
                .map(|&i| if i == 0 { None } else { Some(i as u64) })
                .collect();
            assert_eq!(
                check_bp5_top_to_bottom(&seq, false),
                oracle(&seq),
                "verdict mismatch on {seq:?}"
            );
            checked += 1;
            // Odometer over base-6 digits.
            let mut pos = 0;
            loop {
                if pos == len {
                    break;
                }
                indices[pos] += 1;
                if indices[pos] < 6 {
                    break;
                }
                indices[pos] = 0;
                pos += 1;
            }
            if pos == len {
                break;
            }
        }
    }
    assert_eq!(checked, 1 + 6 + 36 + 216 + 1296 + 7776);
    assert!(started.elapsed().as_secs() < 5);
    println!("acceptance c01 bp5-exhaustive-oracle: PASS ({checked} sequences)");
}

/// Reference quantile, written independently: sort, rank (n−1)·p, linear
/// interpolation expressed as lo + (hi − lo)·frac.
fn ref_quantile(values: &[f64], p: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let rank = (sorted.len() as f64 - 1.0) * p;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (rank - lo as f64)
}

fn ref_five(values: &[f64]) -> [f64; 5] {
    [
        ref_quantile(values, 0.0),
        ref_quantile(values, 0.25),
        ref_quantile(values, 0.5),
        ref_quantile(values, 0.75),
        ref_quantile(values, 1.0),
    ]
}

fn assert_rate(summary: &Value, key: &str, num: u64, den: u64) {
    let rate = &summary[key];
    assert_eq!(rate["numerator"], num, "{key} numerator");
    assert_eq!(rate["denominator"], den, "{key} denominator");
    let value = rate["value"].as_f64().expect(key);
    assert!(
        (value - num as f64 / den as f64).abs() < 1e-12,
        "{key} value"
    );
}

fn assert_five(summary: &Value, key: &str, expected_inputs: &[f64]) {
    let five = &summary["fives"][key];
    let expected = ref_five(expected_inputs);
    for (field, want) in ["min", "q1", "median", "q3", "max"].iter().zip(expected) {
        let got = five[*field].as_f64().unwrap_or_else(|| panic!("{key}.{field} missing"));
        assert!(
            (got - want).abs() < 1e-9,
            "{key}.{field}: got {got}, oracle {want}"
        );
    }
}

fn assert_histogram(summary: &Value, key: &str, bins: [u64; 10], thirds: [u64; 3], total: u64) {
    let hist = &summary["histograms"][key];
    let got_bins: Vec<u64> = hist["bins"]
        .as_array()
        .expect(key)
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(got_bins, bins.to_vec(), "{key} bins");
    assert_eq!(hist["thirds"]["first"], thirds[0], "{key} thirds.first");
    assert_eq!(hist["thirds"]["middle"], thirds[1], "{key} thirds.middle");
    assert_eq!(hist["thirds"]["last"], thirds[2], "{key} thirds.last");
    assert_eq!(hist["total"], total, "{key} total");
}

/// Criterion 2: `stats` over the 12 bundled fixture notebooks matches the
/// hand-derived oracle field for field, in under a second.
#[test]
fn c02_fixture_corpus_matches_hand_oracle() {
    let started = Instant::now();
    let corpus = fixture("corpus");
    let (code, stdout, stderr) = run_bin(&["stats", corpus.to_str().unwrap(), "--json"]);
    let elapsed = started.elapsed();
    assert_eq!(code, 0, "stats failed: {stderr}");
    let report: Value = serde_json::from_str(&stdout).expect("report is JSON");
    let summary = &report["summary"];

    assert_eq!(summary["label"], "ALL");
    assert_eq!(summary["n_notebooks"], 12);
    assert_eq!(summary["n_executed"], 11);

    // Adoption rates, counted by hand across the 12 fixtures.
    assert_rate(summary, "rate_top_to_bottom", 9, 11);
    assert_rate(summary, "rate_function_def", 3, 12);
    assert_rate(summary, "rate_class_def", 1, 12);
    assert_rate(summary, "rate_local_import", 1, 12);
    assert_rate(summary, "rate_test_import", 1, 12);
    assert_rate(summary, "rate_md", 8, 12);
    assert_rate(summary, "rate_md_headings", 6, 8);
    let lint = &summary["lint_category_rates"];
    assert_rate(lint, "convention", 2, 12);
    assert_rate(lint, "warning", 1, 12);
    assert_rate(lint, "refactor", 0, 12);
    assert_rate(lint, "error", 0, 12);

    // Five-number summaries: inputs transcribed by hand from the fixture
    // notebooks (order 01..12), pushed through the reference quantile.
    assert_five(summary, "cells_per_notebook",
        &[4., 3., 4., 2., 4., 2., 3., 3., 2., 5., 3., 4.]);
    assert_five(summary, "code_cells_per_notebook",
        &[2., 3., 3., 1., 4., 2., 2., 2., 2., 2., 2., 2.]);
    assert_five(summary, "md_cells_per_notebook",
        &[2., 0., 1., 1., 0., 0., 1., 1., 0., 3., 1., 1.]);
    assert_five(summary, "meaningful_md_words_per_notebook",
        &[12., 0., 4., 4., 0., 0., 6., 2., 0., 20., 2., 3.]);
    assert_five(summary, "meaningful_md_lines_per_notebook",
        &[4., 0., 1., 2., 0., 0., 2., 1., 0., 7., 1., 1.]);
    // Markdown-bearing notebooks only: 01, 03, 04, 07, 08, 10, 11, 12.
    assert_five(summary, "md_heading_words_per_notebook",
        &[3., 0., 1., 1., 2., 6., 2., 0.]);
    // One entry per heading: 01 (2, 1), 04 (1), 07 (1), 08 (2), 10 (3, 2, 1), 11 (2).
    assert_five(summary, "words_per_md_heading",
        &[2., 1., 1., 1., 2., 3., 2., 1., 2.]);
    assert_five(summary, "empty_cells_per_notebook",
        &[0., 0., 0., 0., 2., 0., 0., 0., 0., 0., 0., 0.]);
    assert_five(summary, "lines_per_notebook",
        &[10., 3., 4., 5., 3., 7., 7., 6., 10., 17., 7., 4.]);
    assert_five(summary, "code_lines_per_notebook",
        &[4., 3., 3., 2., 3., 7., 4., 5., 10., 2., 6., 2.]);
    assert_five(summary, "lines_per_cell", &[
        3., 2., 2., 3., // 01
        1., 1., 1., // 02
        1., 1., 1., 1., // 03
        3., 2., // 04
        1., 0., 1., 1., // 05
        2., 5., // 06
        3., 2., 2., // 07
        1., 2., 3., // 08
        6., 4., // 09
        4., 1., 8., 1., 3., // 10
        1., 4., 2., // 11
        1., 1., 1., 1., // 12
    ]);
    assert_five(summary, "lines_per_code_cell", &[
        2., 2., // 01
        1., 1., 1., // 02
        1., 1., 1., // 03
        2., // 04
        1., 0., 1., 1., // 05
        2., 5., // 06
        2., 2., // 07
        2., 3., // 08
        6., 4., // 09
        1., 1., // 10
        4., 2., // 11
        1., 1., // 12
    ]);
    assert_five(summary, "lines_per_md_cell", &[
        3., 3., // 01
        1., // 03
        3., // 04
        3., // 07
        1., // 08
        4., 8., 3., // 10
        1., // 11
        1., // 12
    ]);

    // Position histograms, binned by hand.
    assert_histogram(summary, "import_positions",
        [10, 0, 0, 0, 0, 0, 0, 0, 0, 1], [10, 0, 1], 11);
    assert_histogram(summary, "code_cell_positions",
        [4, 0, 1, 4, 0, 4, 3, 1, 0, 10], [9, 7, 11], 27);
    assert_histogram(summary, "md_cell_positions",
        [7, 0, 0, 0, 0, 1, 1, 0, 0, 2], [7, 2, 2], 11);
    assert_histogram(summary, "executed_cell_positions",
        [11, 0, 0, 0, 0, 2, 1, 0, 0, 10], [11, 3, 10], 24);
    assert_histogram(summary, "non_executed_cell_positions",
        [1, 0, 0, 0, 0, 0, 0, 0, 0, 0], [1, 0, 0], 1);
    assert_histogram(summary, "empty_cell_positions",
        [0, 0, 0, 1, 0, 0, 0, 0, 0, 1], [1, 0, 1], 2);

    assert!(
        elapsed.as_millis() < 1000,
        "stats took {elapsed:?}, budget is 1 s"
    );
    println!("acceptance c02 fixture-corpus-oracle: PASS ({elapsed:?})");
}

/// Criterion 3: worker count does not leak into the report bytes.
#[test]
fn c03_determinism_across_worker_counts() {
    let corpus = fixture("corpus");
    let path = corpus.to_str().unwrap();
    let (c1, out1, err1) = run_bin(&["stats", path, "--json", "--jobs", "1"]);
    let (c8, out8, err8) = run_bin(&["stats", path, "--json", "--jobs", "8"]);
    assert_eq!(c1, 0, "{err1}");
    assert_eq!(c8, 0, "{err8}");
    assert!(!out1.is_empty());
    assert_eq!(out1, out8, "reports differ between --jobs 1 and --jobs 8");
    let (c1b, out1b, _) = run_bin(&["stats", path, "--json", "--jobs", "1"]);
    assert_eq!(c1b, 0);
    assert_eq!(out1, out1b, "same flags, different bytes across runs");
    println!("acceptance c03 determinism-across-jobs: PASS");
}

/// Random notebook generator shared by criteria 4 and 7: a grab bag of
/// line shapes that trigger located findings through every lint and
/// placement path, with a sprinkling of magics and strings.
fn random_notebook(rng: &mut ChaCha8Rng) -> Notebook {
    const LINES: &[&str] = &[
        "x = 1",
        "x = 1 ",
        "import late_module",
        "from os import *",
        "import json as j",
        "def Bad():",
        "    pass",
        "def ok_name():",
        "    return x",
        "a = 1; b = 2",
        "f(a ,b)",
        "%time x",
        "!ls -la",
        "caught = !ls",
        "len?",
        "s = 'a ; b , c '",
        "print(x)",
        "zzzzzzzzzzzzzzzzzzzzzzzzzzzzzzzzzz = 'yyyyyyyyyyyyyyyyyyyyyyyyyyyyyyyyyyyyyyyyyyyyyyyy'",
        "",
        "   ",
    ];
    const MD: &[&str] = &["# Heading", "plain words", "- a bullet", "```"];

    let n_cells = rng.gen_range(1..=8);
    let mut cells = Vec::new();
    let mut counter = 1u64;
    for _ in 0..n_cells {
        if rng.gen_bool(0.3) {
            let n = rng.gen_range(1..=3);
            let source: Vec<String> = (0..n)
                .map(|_| MD[rng.gen_range(0..MD.len())].to_owned())
                .collect();
            cells.push(serde_json::json!({
                "cell_type": "markdown", "metadata": {}, "source": source
            }));
        } else {
            let n = rng.gen_range(0..=5);
            let source: Vec<String> = (0..n)
                .map(|_| LINES[rng.gen_range(0..LINES.len())].to_owned())
                .collect();
            let count: Value = if rng.gen_bool(0.7) {
                counter += rng.gen_range(1..=2) as u64;
                serde_json::json!(counter)
            } else {
                Value::Null
            };
            cells.push(serde_json::json!({
                "cell_type": "code", "metadata": {}, "outputs": [],
                "execution_count": count, "source": source
            }));
        }
    }
    nb_from_json(&serde_json::json!({
        "nbformat": 4, "nbformat_minor": 5,
        "metadata": {"kernelspec": {"language": "python", "name": "python3"}},
        "cells": cells
    }))
}

/// Criterion 4: on 200 random notebooks, every located finding resolves to
/// cell text identical to the script line it came from.
#[test]
fn c04_source_map_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x50f7_4a11);
    let cfg = Config::default();
    let mut located = 0usize;
    for i in 0..200 {
        let nb = random_notebook(&mut rng);
        let script = extract_script(&nb, cfg.strip);
        let (_, findings) = analyze_notebook(&nb, &cfg, None).unwrap();
        for f in &findings {
            let (Some(cell), Some(line)) = (f.cell_index, f.cell_line) else {
                continue;
            };
            located += 1;
            let cell_text = nb.cells[cell]
                .source
                .get(line)
                .unwrap_or_else(|| panic!("nb {i}: finding points past cell text: {f:?}"));
            let script_line = script
                .script_line_for(cell, line)
                .unwrap_or_else(|| panic!("nb {i}: finding at unmapped location: {f:?}"));
            assert_eq!(
                &script.text_lines[script_line], cell_text,
                "nb {i}: script/cell text diverge for {f:?}"
            );
        }
    }
    assert!(located > 100, "generator produced too few located findings");
    println!("acceptance c04 source-map-soundness: PASS ({located} locations over 200 notebooks)");
}

/// Criterion 5: a crafted script yields exactly the advertised lint counts.
#[test]
fn c05_lint_oracle_exact_counts() {
    let nb = nb_from_json(&serde_json::json!({
        "nbformat": 4, "nbformat_minor": 5, "metadata": {},
        "cells": [
            {"cell_type": "code", "execution_count": 1, "metadata": {}, "outputs": [], "source": [
                "import os\n",
                "from math import *\n",
                "import json as j\n",
                "x = 1 \n",
                "y = 2\t\n",
                "z = 3 "
            ]},
            {"cell_type": "code", "execution_count": 2, "metadata": {}, "outputs": [], "source": [
                format!("long1 = '{}'\n", "a".repeat(75)),
                format!("long2 = '{}'\n", "b".repeat(75)),
                "def BadName():\n".to_owned(),
                "    return x + y + z + long1 + long2".to_owned()
            ]}
        ]
    }));
    let script = extract_script(&nb, Default::default());
    let findings = lint_native(&script, &LintConfig::default());

    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for f in &findings {
        *counts.entry(f.check_id.as_str()).or_insert(0) += 1;
    }
    let expected: BTreeMap<&str, usize> = [
        ("trailing-whitespace", 3),
        ("line-too-long", 2),
        ("wildcard-import", 1),
        ("unused-import", 2),
        ("invalid-name", 1),
    ]
    .into_iter()
    .collect();
    assert_eq!(counts, expected, "all findings: {findings:?}");
    assert_eq!(findings.len(), 9);
    println!("acceptance c05 lint-oracle: PASS");
}

/// Criterion 6: quartiles match the reference implementation on 1,000
/// random arrays of size 1–500.
#[test]
fn c06_five_number_matches_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf1fe);
    for i in 0..1000 {
        let n = rng.gen_range(1..=500);
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-1e6..1e6)).collect();
        let got = nbpractice::stats::five_number_summary(&values).unwrap();
        let want = ref_five(&values);
        for (name, (g, w)) in ["min", "q1", "median", "q3", "max"]
            .iter()
            .zip([got.min, got.q1, got.median, got.q3, got.max].iter().zip(want))
        {
            assert!(
                (g - w).abs() < 1e-9,
                "array {i} ({n} values): {name} got {g}, reference {w}"
            );
        }
    }
    println!("acceptance c06 five-number-reference: PASS (1000 arrays)");
}

/// Criterion 7: folding accumulators over any partition equals one pass.
#[test]
fn c07_merge_monoid() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xace5);
    let cfg = Config::default();
    let metrics: Vec<_> = (0..30)
        .map(|_| analyze_notebook(&random_notebook(&mut rng), &cfg, None).unwrap().0)
        .collect();

    for trial in 0..100 {
        let mut single = StatsAccumulator::new("ALL", "digest", MdDenominator::All);
        for m in &metrics {
            single.add(m);
        }

        // Random partition into consecutive chunks.
        let mut folded = StatsAccumulator::new("ALL", "digest", MdDenominator::All);
        let mut i = 0;
        while i < metrics.len() {
            let take = rng.gen_range(1..=6).min(metrics.len() - i);
            let mut chunk = StatsAccumulator::new("ALL", "digest", MdDenominator::All);
            for m in &metrics[i..i + take] {
                chunk.add(m);
            }
            folded.merge(&chunk).unwrap();
            i += take;
        }
        assert_eq!(
            folded.finalize(),
            single.finalize(),
            "trial {trial}: fold-merge diverges from single pass"
        );
    }
    println!("acceptance c07 merge-monoid: PASS (100 partitions)");
}

/// Criterion 8: the practice catalog exposed by `check-list --json` carries
/// all 17 entries with the frozen support sets.
#[test]
fn c08_registry_fidelity() {
    let (code, stdout, stderr) = run_bin(&["check-list", "--json"]);
    assert_eq!(code, 0, "{stderr}");
    let entries: Vec<Value> = serde_json::from_str(&stdout).expect("catalog is JSON");
    assert_eq!(entries.len(), 17);

    let expected_sources: [(&str, &[&str]); 17] = [
        ("BP1", &["W1", "G1", "G2", "G3", "G5", "G6", "G8", "G11"]),
        ("BP2", &["W1", "W2", "G2", "G7", "G8", "G9", "G13"]),
        ("BP3", &["W1", "G1", "G2", "G7", "G8", "G13"]),
        ("BP4", &["W2", "G5", "G7", "G9", "G10"]),
        ("BP5", &["W1", "W2", "W4", "G2", "G9", "G11"]),
        ("BP6", &["W1", "W2", "G1", "G3", "G7", "G8", "G11"]),
        ("BP7", &["W2", "G2", "G3", "G7", "G9"]),
        ("BP8", &["W2", "G5", "G6"]),
        ("BP9", &["G1", "G3", "G5", "G10"]),
        ("BP10", &["W2"]),
        ("BP11", &["W1", "G1", "G3", "G5", "G8", "G9", "G10", "G11"]),
        ("BP12", &["W1", "W2", "G1", "G3", "G9", "G10"]),
        ("BP13", &["W1", "W2", "G3"]),
        ("BP14", &["W1", "G5", "G9", "G10"]),
        ("BP15", &["G2", "G5", "G6", "G9", "G11"]),
        ("BP16", &["W1", "G9"]),
        ("BP17", &["W1", "G9", "G11", "G13"]),
    ];
    for (entry, (bp_id, sources)) in entries.iter().zip(expected_sources) {
        assert_eq!(entry["bp_id"], bp_id);
        let got: Vec<&str> = entry["source_ids"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap())
            .collect();
        assert_eq!(got, sources.to_vec(), "{bp_id} source set");
        assert_eq!(
            entry["support_count"].as_u64().unwrap() as usize,
            sources.len(),
            "{bp_id} support count"
        );
    }
    // Spot rows called out in the release checklist.
    assert_eq!(entries[0]["support_count"], 8);
    assert_eq!(entries[9]["support_count"], 1);
    assert_eq!(entries[16]["support_count"], 4);
    let operationalized: Vec<&str> = entries
        .iter()
        .filter(|e| e["operationalized"].as_bool().unwrap())
        .map(|e| e["bp_id"].as_str().unwrap())
        .collect();
    assert_eq!(
        operationalized,
        vec!["BP4", "BP5", "BP6", "BP7", "BP9", "BP11", "BP12", "BP13", "BP14"]
    );
    println!("acceptance c08 registry-fidelity: PASS");
}

/// Criterion 9: meaningful-word counting agrees with 30 hand-labeled
/// snippets, including the two canonical ones.
#[test]
fn c09_markdown_thirty_hand_labeled_snippets() {
    // (lines, meaningful words, meaningful lines) — labels assigned by
    // applying the documented stripping rules by hand.
    let snippets: [(&[&str], usize, usize); 30] = [
        (&["# Title"], 1, 1),
        (&["```", "x = 1", "```"], 0, 0),
        (&["Plain words here"], 3, 1),
        (&["", "   ", ""], 0, 0),
        (&["## Two words"], 2, 1),
        (&["[link text](http://x)"], 2, 1),
        (&["![alt text](img.png)"], 0, 0),
        (&["<b>bold</b> claim"], 2, 1),
        (&["- item one", "- item two"], 4, 2),
        (&["1. first", "2. second"], 2, 2),
        (&["> quoted wisdom"], 2, 1),
        (&["---"], 0, 0),
        (&["***"], 0, 0),
        (&["Title", "====="], 1, 1),
        (&["*emphasis* and _underline_"], 3, 1),
        (&["`code` span"], 2, 1),
        (&["#hashtag"], 1, 1),
        (&["    indented code? no such rule"], 5, 1),
        (&["> - nested *deep*"], 2, 1),
        (&["```python", "print('hi')", "```", "after fence"], 2, 1),
        (&["text before", "```", "hidden", "```", "text after"], 4, 2),
        (&["###### six hashes"], 2, 1),
        (&["####### seven hashes"], 3, 1),
        (&["A [x](y) B ![z](w) C"], 4, 1),
        (&["<div class='x'>", "inner", "</div>"], 1, 1),
        (&["one two", "three"], 3, 2),
        (&["= = ="], 0, 0),
        (&["a-b c"], 2, 1),
        (&["2. 1. double numeral"], 2, 1),
        (&["**bold** text", "`tick`"], 3, 2),
    ];
    for (i, (lines, words, counted_lines)) in snippets.iter().enumerate() {
        let owned: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
        let got = meaningful_md_tokens(&owned);
        assert_eq!(
            got,
            (*words, *counted_lines),
            "snippet {i} {lines:?}: got {got:?}"
        );
    }
    println!("acceptance c09 markdown-snippets: PASS (30 labels)");
}

/// Criterion 10: subset sizes over synthetic scores 1..100 match the
/// hand-computed percentile thresholds (p75 = 75.25 keeps 25, p90 = 90.1
/// keeps 10).
#[test]
fn c10_subset_sizes_match_hand_thresholds() {
    let cfg = Config::default();
    let items: Vec<(String, _)> = (1..=100)
        .map(|i| {
            let nb = nb_from_json(&serde_json::json!({
                "nbformat": 4, "metadata": {}, "cells": [
                    {"cell_type": "code", "execution_count": 1, "metadata": {},
                     "outputs": [], "source": [format!("x = {i}")]}
                ]
            }));
            let (metrics, _) = analyze_notebook(&nb, &cfg, None).unwrap();
            (format!("nb{i:03}.ipynb"), metrics)
        })
        .collect();
    let scores: BTreeMap<String, f64> = (1..=100)
        .map(|i| (format!("nb{i:03}.ipynb"), i as f64))
        .collect();

    let cmp = subset_compare(&items, &scores, &[0.75, 0.90], "digest", MdDenominator::All)
        .unwrap();
    assert_eq!(cmp.summaries.len(), 3);
    assert_eq!(cmp.summaries[0].label, "ALL");
    assert_eq!(cmp.summaries[0].n_notebooks, 100);
    assert_eq!(cmp.summaries[1].label, "P75");
    assert_eq!(cmp.summaries[1].n_notebooks, 25, "scores ≥ 75.25 are 76..100");
    assert_eq!(cmp.summaries[2].label, "P90");
    assert_eq!(cmp.summaries[2].n_notebooks, 10, "scores ≥ 90.1 are 91..100");
    assert!(cmp.unscored.is_empty());
    println!("acceptance c10 subset-thresholds: PASS");
}
