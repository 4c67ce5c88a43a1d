//! The machine-readable best-practice catalog.
//!
//! Seventeen practices, grouped into six themes, each annotated with the
//! workflow-system and guideline sources that recommend it (W1..W4, G1..G13)
//! and with whether this tool can evaluate it statically. The nine
//! operationalized practices are the ones the checks engine implements;
//! the rest need context a notebook file alone cannot provide (version
//! control, environments, naming schemes, publication).

use serde::Serialize;

/// One catalog entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegistryEntry {
    /// Numeric id; rendered as `BP<n>`.
    pub id: u8,
    pub title: &'static str,
    pub theme: &'static str,
    /// Literature sources recommending the practice.
    pub source_ids: &'static [&'static str],
    /// Whether the checks engine evaluates this practice.
    pub operationalized: bool,
}

impl RegistryEntry {
    pub fn bp_id(&self) -> String {
        format!("BP{}", self.id)
    }

    /// Number of sources backing the practice.
    pub fn support_count(&self) -> usize {
        self.source_ids.len()
    }

    /// JSON view used by `check-list --json` and tests.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "bp_id": self.bp_id(),
            "title": self.title,
            "theme": self.theme,
            "support_count": self.support_count(),
            "source_ids": self.source_ids,
            "operationalized": self.operationalized,
        })
    }
}

const THEME_REPRODUCIBLE: &str = "Make your analysis traceable and reproducible";
const THEME_QUALITY: &str =
    "Write high-quality code (i.e., code that can be easily shared and reused)";
const THEME_LITERATE: &str = "Leverage the literate programming paradigm";
const THEME_CLEAN: &str = "Keep your notebook clean and concise";
const THEME_ARTIFACTS: &str = "Distinguish production and development artifacts";
const THEME_DISSEMINATION: &str = "Embrace open dissemination";

static REGISTRY: [RegistryEntry; 17] = [
    RegistryEntry {
        id: 1,
        title: "Use version control",
        theme: THEME_REPRODUCIBLE,
        source_ids: &["W1", "G1", "G2", "G3", "G5", "G6", "G8", "G11"],
        operationalized: false,
    },
    RegistryEntry {
        id: 2,
        title: "Manage project dependencies",
        theme: THEME_REPRODUCIBLE,
        source_ids: &["W1", "W2", "G2", "G7", "G8", "G9", "G13"],
        operationalized: false,
    },
    RegistryEntry {
        id: 3,
        title: "Use self-contained environments",
        theme: THEME_REPRODUCIBLE,
        source_ids: &["W1", "G1", "G2", "G7", "G8", "G13"],
        operationalized: false,
    },
    RegistryEntry {
        id: 4,
        title: "Put imports at the beginning",
        theme: THEME_REPRODUCIBLE,
        source_ids: &["W2", "G5", "G7", "G9", "G10"],
        operationalized: true,
    },
    RegistryEntry {
        id: 5,
        title: "Ensure re-executability (re-run notebooks top to bottom)",
        theme: THEME_REPRODUCIBLE,
        source_ids: &["W1", "W2", "W4", "G2", "G9", "G11"],
        operationalized: true,
    },
    RegistryEntry {
        id: 6,
        title: "Modularize your code",
        theme: THEME_QUALITY,
        source_ids: &["W1", "W2", "G1", "G3", "G7", "G8", "G11"],
        operationalized: true,
    },
    RegistryEntry {
        id: 7,
        title: "Test your code",
        theme: THEME_QUALITY,
        source_ids: &["W2", "G2", "G3", "G7", "G9"],
        operationalized: true,
    },
    RegistryEntry {
        id: 8,
        title: "Name your notebooks consistently",
        theme: THEME_QUALITY,
        source_ids: &["W2", "G5", "G6"],
        operationalized: false,
    },
    RegistryEntry {
        id: 9,
        title: "Stick to coding standards",
        theme: THEME_QUALITY,
        source_ids: &["G1", "G3", "G5", "G10"],
        operationalized: true,
    },
    RegistryEntry {
        id: 10,
        title: "Use relative paths",
        theme: THEME_QUALITY,
        source_ids: &["W2"],
        operationalized: false,
    },
    RegistryEntry {
        id: 11,
        title: "Document your analysis",
        theme: THEME_LITERATE,
        source_ids: &["W1", "G1", "G3", "G5", "G8", "G9", "G10", "G11"],
        operationalized: true,
    },
    RegistryEntry {
        id: 12,
        title: "Leverage Markdown headings to structure your notebook",
        theme: THEME_LITERATE,
        source_ids: &["W1", "W2", "G1", "G3", "G9", "G10"],
        operationalized: true,
    },
    RegistryEntry {
        id: 13,
        title: "Keep your notebook clean",
        theme: THEME_CLEAN,
        source_ids: &["W1", "W2", "G3"],
        operationalized: true,
    },
    RegistryEntry {
        id: 14,
        title: "Keep your notebook concise",
        theme: THEME_CLEAN,
        source_ids: &["W1", "G5", "G9", "G10"],
        operationalized: true,
    },
    RegistryEntry {
        id: 15,
        title: "Distinguish production and development artifacts",
        theme: THEME_ARTIFACTS,
        source_ids: &["G2", "G5", "G6", "G9", "G11"],
        operationalized: false,
    },
    RegistryEntry {
        id: 16,
        title: "Make your notebooks available",
        theme: THEME_DISSEMINATION,
        source_ids: &["W1", "G9"],
        operationalized: false,
    },
    RegistryEntry {
        id: 17,
        title: "Make your data available",
        theme: THEME_DISSEMINATION,
        source_ids: &["W1", "G9", "G11", "G13"],
        operationalized: false,
    },
];

/// The full catalog, in id order.
pub fn registry() -> &'static [RegistryEntry; 17] {
    &REGISTRY
}

/// Ids of the practices the checks engine evaluates.
pub fn operationalized_ids() -> Vec<u8> {
    REGISTRY
        .iter()
        .filter(|e| e.operationalized)
        .map(|e| e.id)
        .collect()
}

/// Look up one entry by numeric id.
pub fn entry(id: u8) -> Option<&'static RegistryEntry> {
    REGISTRY.iter().find(|e| e.id == id)
}

/// Serializable wrapper for report headers.
#[derive(Debug, Clone, Serialize)]
pub struct RegistryDigest {
    pub entries: usize,
    pub operationalized: Vec<String>,
}

pub fn registry_digest() -> RegistryDigest {
    RegistryDigest {
        entries: REGISTRY.len(),
        operationalized: REGISTRY
            .iter()
            .filter(|e| e.operationalized)
            .map(RegistryEntry::bp_id)
            .collect(),
    }
}
