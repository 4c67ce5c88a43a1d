//! Corpus discovery: walk input paths, parse notebooks, index Python
//! files, and drop byte-identical duplicates.
//!
//! Traversal order is sorted so runs are reproducible regardless of
//! filesystem iteration order. Duplicate notebooks (same content hash)
//! keep the lexicographically smallest path and log the rest.

use std::path::{Path, PathBuf};

use thiserror::Error;
use walkdir::WalkDir;

use crate::notebook::{parse_notebook, Notebook, ParseError};
use crate::scan::CorpusIndex;

/// One dropped duplicate: which file was skipped and which copy was kept.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct DedupEntry {
    pub dropped: String,
    pub kept: String,
    pub content_hash: String,
}

/// Everything found under the input paths.
#[derive(Debug, Default)]
pub struct Corpus {
    /// Parsed notebooks, sorted by path, duplicates removed.
    pub notebooks: Vec<Notebook>,
    /// Files that looked like notebooks but failed to parse.
    pub failures: Vec<ParseError>,
    /// Byte-identical copies that were dropped.
    pub dedup_log: Vec<DedupEntry>,
    /// Python files seen during the walk, for import classification.
    pub index: CorpusIndex,
}

/// Input set produced nothing to analyze.
#[derive(Debug, Error)]
pub enum IngestError {
    #[error("no notebooks found under the given paths")]
    NoInputs,
    #[error("cannot read {path}: {source}")]
    Walk {
        path: String,
        #[source]
        source: walkdir::Error,
    },
}

fn has_extension(path: &Path, ext: &str) -> bool {
    path.extension().and_then(|e| e.to_str()) == Some(ext)
}

/// Walk `paths` (files or directories) and collect the corpus. Directories
/// are scanned recursively for `.ipynb` and `.py`; explicit file arguments
/// are taken as notebooks regardless of extension.
pub fn ingest(paths: &[PathBuf]) -> Result<Corpus, IngestError> {
    let mut notebook_paths: Vec<PathBuf> = Vec::new();
    let mut corpus = Corpus::default();

    for root in paths {
        if root.is_file() {
            notebook_paths.push(root.clone());
            continue;
        }
        let mut walker: Vec<_> = WalkDir::new(root)
            .sort_by_file_name()
            .into_iter()
            .collect();
        // Surface unreadable directories rather than silently skipping.
        for entry in walker.drain(..) {
            let entry = entry.map_err(|source| IngestError::Walk {
                path: root.display().to_string(),
                source,
            })?;
            if !entry.file_type().is_file() {
                continue;
            }
            let path = entry.path();
            if has_extension(path, "ipynb") {
                notebook_paths.push(path.to_path_buf());
            } else if has_extension(path, "py") {
                corpus.index.insert_py(path);
            }
        }
    }

    notebook_paths.sort();
    notebook_paths.dedup();
    if notebook_paths.is_empty() {
        return Err(IngestError::NoInputs);
    }

    // First parse everything, then dedup on content hash keeping the
    // smallest path — paths are already sorted, so first-seen wins.
    let mut seen: std::collections::BTreeMap<String, String> = std::collections::BTreeMap::new();
    for path in &notebook_paths {
        match parse_notebook(path) {
            Ok(nb) => {
                if let Some(kept) = seen.get(&nb.content_hash) {
                    corpus.dedup_log.push(DedupEntry {
                        dropped: nb.path.clone(),
                        kept: kept.clone(),
                        content_hash: nb.content_hash.clone(),
                    });
                } else {
                    seen.insert(nb.content_hash.clone(), nb.path.clone());
                    corpus.notebooks.push(nb);
                }
            }
            Err(e) => corpus.failures.push(e),
        }
    }

    Ok(corpus)
}
