//! Run configuration: defaults, TOML file loading, flag overrides, and the
//! digest that stamps reports.
//!
//! Defaults are chosen so that a bare run reproduces the strictest documented
//! behavior of every check. The config file is TOML with unknown keys
//! rejected, so a typo fails loudly instead of silently running defaults.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::extract::StripRules;
use crate::lint::BridgeConfig;
use crate::registry::operationalized_ids;
use crate::scan::{MatchScope, TestDetectConfig};

/// Severity of a finding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// Threshold above which findings flip the exit code to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FailSeverity {
    /// Findings never affect the exit code.
    #[default]
    None,
    Info,
    Warning,
    Error,
}

impl FailSeverity {
    /// The minimum severity that triggers exit code 1, if any.
    pub fn threshold(self) -> Option<Severity> {
        match self {
            FailSeverity::None => None,
            FailSeverity::Info => Some(Severity::Info),
            FailSeverity::Warning => Some(Severity::Warning),
            FailSeverity::Error => Some(Severity::Error),
        }
    }
}

/// Base profile for test-import detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum TestProfile {
    /// Plain substring matching, empty denylist.
    #[default]
    #[serde(rename = "strict")]
    Strict,
    /// Substring matching with common false positives denylisted.
    #[serde(rename = "recommended")]
    Recommended,
}

/// Which notebooks enter the markdown-volume five-number summaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum MdDenominator {
    /// All notebooks, markdown-less ones contributing zeros.
    #[default]
    #[serde(rename = "all")]
    All,
    /// Only notebooks that contain at least one markdown cell.
    #[serde(rename = "md-only")]
    MdOnly,
}

/// Fully resolved configuration. Everything here is semantically meaningful
/// except `bridge.max_concurrent`, which is excluded from the digest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    /// Enabled best-practice checks, by numeric id.
    pub enabled: BTreeSet<u8>,
    /// Minimum first-third import share counted as compliant.
    pub bp4_threshold: f64,
    pub max_line_len: usize,
    /// Forbid null counters in addition to requiring 1..n order.
    pub strict_bp5: bool,
    /// Run code-level checks on non-Python kernels too.
    pub allow_any_kernel: bool,
    pub strip: StripRules,
    /// Severity per finding source; see [`severity_keys`] for valid keys.
    pub severity: BTreeMap<String, Severity>,
    pub test_profile: TestProfile,
    pub test_detect: TestDetectConfig,
    pub bridge: Option<BridgeConfig>,
    pub md_denominator: MdDenominator,
    pub percentiles: Vec<f64>,
    pub fail_severity: FailSeverity,
}

/// Valid keys of the `[severity]` table.
pub fn severity_keys() -> &'static [&'static str] {
    &[
        "bp4",
        "bp5",
        "bp11",
        "bp12",
        "bp13-empty",
        "bp13-non-executed",
        "lint-convention",
        "lint-refactor",
        "lint-warning",
        "lint-error",
    ]
}

fn severity_defaults() -> BTreeMap<String, Severity> {
    severity_keys()
        .iter()
        .map(|&k| {
            let sev = match k {
                "bp5" | "lint-error" => Severity::Warning,
                _ => Severity::Info,
            };
            (k.to_owned(), sev)
        })
        .collect()
}

impl Default for Config {
    fn default() -> Self {
        Config {
            enabled: operationalized_ids().into_iter().collect(),
            bp4_threshold: 1.0,
            max_line_len: 79,
            strict_bp5: false,
            allow_any_kernel: false,
            strip: StripRules::default(),
            severity: severity_defaults(),
            test_profile: TestProfile::Strict,
            test_detect: TestDetectConfig::strict(),
            bridge: None,
            md_denominator: MdDenominator::All,
            percentiles: vec![0.75, 0.90],
            fail_severity: FailSeverity::None,
        }
    }
}

/// Command-line overrides applied on top of file values.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub allow_any_kernel: bool,
    pub strict_bp5: bool,
    pub test_match_scope: Option<MatchScope>,
    pub fail_severity: Option<FailSeverity>,
}

/// Why configuration could not be resolved.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: cannot read config: {detail}")]
    Io { path: String, detail: String },
    #[error("{path}: invalid TOML: {detail}")]
    Parse { path: String, detail: String },
    #[error("invalid configuration: {detail}")]
    Invalid { detail: String },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    checks: Option<ChecksSection>,
    strip: Option<StripSection>,
    severity: Option<BTreeMap<String, Severity>>,
    test_detect: Option<TestDetectSection>,
    bridge: Option<BridgeSection>,
    run: Option<RunSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChecksSection {
    enabled: Option<Vec<String>>,
    bp4_threshold: Option<f64>,
    max_line_len: Option<usize>,
    strict_bp5: Option<bool>,
    allow_any_kernel: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct StripSection {
    shell_escape: Option<bool>,
    shell_assignment: Option<bool>,
    introspection: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TestDetectSection {
    profile: Option<TestProfile>,
    substrings: Option<Vec<String>>,
    allowlist: Option<Vec<String>>,
    denylist: Option<Vec<String>>,
    scope: Option<MatchScope>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct BridgeSection {
    command: Option<String>,
    ignored_checks: Option<Vec<String>>,
    /// 0 means "number of logical CPUs".
    max_concurrent: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunSection {
    fail_severity: Option<FailSeverity>,
    md_denominator: Option<MdDenominator>,
    percentiles: Option<Vec<f64>>,
}

/// Parse a bp id like `BP4` (case-insensitive) or plain `4`.
pub fn parse_bp_id(s: &str) -> Option<u8> {
    let digits = s
        .strip_prefix("BP")
        .or_else(|| s.strip_prefix("bp"))
        .unwrap_or(s);
    digits.parse().ok()
}

fn logical_cpus() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl Config {
    /// Load from an optional TOML file, then apply flag overrides.
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Config, ConfigError> {
        let file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| ConfigError::Io {
                    path: p.display().to_string(),
                    detail: e.to_string(),
                })?;
                toml::from_str::<ConfigFile>(&text).map_err(|e| ConfigError::Parse {
                    path: p.display().to_string(),
                    detail: e.to_string(),
                })?
            }
            None => ConfigFile::default(),
        };
        let mut cfg = Config::from_file(file)?;
        cfg.apply_overrides(overrides);
        cfg.validate()?;
        Ok(cfg)
    }

    fn from_file(file: ConfigFile) -> Result<Config, ConfigError> {
        let mut cfg = Config::default();

        if let Some(checks) = file.checks {
            if let Some(enabled) = checks.enabled {
                let ops: BTreeSet<u8> = operationalized_ids().into_iter().collect();
                let mut set = BTreeSet::new();
                for item in &enabled {
                    let id = parse_bp_id(item).ok_or_else(|| ConfigError::Invalid {
                        detail: format!("unknown check id {item:?}"),
                    })?;
                    if !ops.contains(&id) {
                        return Err(ConfigError::Invalid {
                            detail: format!("BP{id} has no static check to enable"),
                        });
                    }
                    set.insert(id);
                }
                cfg.enabled = set;
            }
            if let Some(v) = checks.bp4_threshold {
                cfg.bp4_threshold = v;
            }
            if let Some(v) = checks.max_line_len {
                cfg.max_line_len = v;
            }
            if let Some(v) = checks.strict_bp5 {
                cfg.strict_bp5 = v;
            }
            if let Some(v) = checks.allow_any_kernel {
                cfg.allow_any_kernel = v;
            }
        }

        if let Some(strip) = file.strip {
            if let Some(v) = strip.shell_escape {
                cfg.strip.shell_escape = v;
            }
            if let Some(v) = strip.shell_assignment {
                cfg.strip.shell_assignment = v;
            }
            if let Some(v) = strip.introspection {
                cfg.strip.introspection = v;
            }
        }

        if let Some(severity) = file.severity {
            for (key, sev) in severity {
                if !severity_keys().contains(&key.as_str()) {
                    return Err(ConfigError::Invalid {
                        detail: format!("unknown severity key {key:?}"),
                    });
                }
                cfg.severity.insert(key, sev);
            }
        }

        if let Some(td) = file.test_detect {
            if let Some(profile) = td.profile {
                cfg.test_profile = profile;
                cfg.test_detect = match profile {
                    TestProfile::Strict => TestDetectConfig::strict(),
                    TestProfile::Recommended => TestDetectConfig::recommended(),
                };
            }
            if let Some(v) = td.substrings {
                cfg.test_detect.substrings = v;
            }
            if let Some(v) = td.allowlist {
                cfg.test_detect.allowlist = v;
            }
            if let Some(v) = td.denylist {
                cfg.test_detect.denylist = v;
            }
            if let Some(v) = td.scope {
                cfg.test_detect.scope = v;
            }
        }

        if let Some(bridge) = file.bridge {
            if let Some(command) = bridge.command {
                let mut settings = BridgeConfig::new(command);
                if let Some(v) = bridge.ignored_checks {
                    settings.ignored_checks = v;
                }
                settings.max_concurrent = match bridge.max_concurrent {
                    None | Some(0) => logical_cpus(),
                    Some(n) => n,
                };
                cfg.bridge = Some(settings);
            } else if bridge.ignored_checks.is_some() || bridge.max_concurrent.is_some() {
                return Err(ConfigError::Invalid {
                    detail: "[bridge] options are set but bridge.command is missing".to_owned(),
                });
            }
        }

        if let Some(run) = file.run {
            if let Some(v) = run.fail_severity {
                cfg.fail_severity = v;
            }
            if let Some(v) = run.md_denominator {
                cfg.md_denominator = v;
            }
            if let Some(v) = run.percentiles {
                cfg.percentiles = v;
            }
        }

        Ok(cfg)
    }

    fn apply_overrides(&mut self, ov: &Overrides) {
        if ov.allow_any_kernel {
            self.allow_any_kernel = true;
        }
        if ov.strict_bp5 {
            self.strict_bp5 = true;
        }
        if let Some(scope) = ov.test_match_scope {
            self.test_detect.scope = scope;
        }
        if let Some(fs) = ov.fail_severity {
            self.fail_severity = fs;
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if !(0.0..=1.0).contains(&self.bp4_threshold) {
            return Err(ConfigError::Invalid {
                detail: format!("bp4_threshold {} outside [0, 1]", self.bp4_threshold),
            });
        }
        for p in &self.percentiles {
            if !(0.0..=1.0).contains(p) {
                return Err(ConfigError::Invalid {
                    detail: format!("percentile {p} outside [0, 1]"),
                });
            }
        }
        Ok(())
    }

    pub fn is_enabled(&self, bp: u8) -> bool {
        self.enabled.contains(&bp)
    }

    /// Severity for a severity-map key, falling back to `info` for keys the
    /// map somehow lacks.
    pub fn severity_for(&self, key: &str) -> Severity {
        self.severity.get(key).copied().unwrap_or(Severity::Info)
    }

    /// Stable digest over all semantically meaningful fields. Concurrency
    /// knobs are normalized away so results merge across differently sized
    /// machines.
    pub fn digest(&self) -> String {
        let mut normalized = self.clone();
        if let Some(bridge) = &mut normalized.bridge {
            bridge.max_concurrent = 0;
        }
        let json = serde_json::to_string(&normalized).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        let mut out = String::with_capacity(64);
        for byte in digest {
            use fmt::Write;
            let _ = write!(out, "{byte:02x}");
        }
        out
    }
}
