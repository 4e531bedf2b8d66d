//! File formats: rubric, answers, weights, batch manifest and JSON report.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use qind_core::{
    builtin_rubric, validate_rubric_with, Assessment, Rubric, ValidationReport, WeightScheme,
};
use serde::{Deserialize, Serialize};

use crate::checks::is_known_check;
use crate::evidence::EvidenceSet;
use crate::verdicts::ManualAnswers;

pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const TOOL_NAME: &str = "qind";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{what}: {message}")]
    Parse { what: String, message: String },
    #[error("{what} is invalid:\n{report}")]
    Invalid { what: String, report: ValidationReport },
}

pub fn read_file(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::Parse {
        what: what.to_string(),
        message: e.to_string(),
    })
}

/// Writes through a temporary file in the same directory and renames it
/// into place, so readers never see a half-written file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn write_output(path: &Path, text: &str) -> Result<(), FormatError> {
    write_atomic(path, text.as_bytes()).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn validate_with_known_checks(r: &Rubric) -> ValidationReport {
    validate_rubric_with(r, is_known_check)
}

/// Parses and validates a rubric document. Warnings are tolerated.
pub fn load_rubric(document: &str) -> Result<Rubric, FormatError> {
    let rubric: Rubric = parse(document, "rubric")?;
    let report = validate_with_known_checks(&rubric);
    if report.has_errors() {
        return Err(FormatError::Invalid {
            what: format!("rubric `{}`", rubric.id),
            report,
        });
    }
    Ok(rubric)
}

pub fn rubric_to_json(r: &Rubric) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("rubric serializes");
    s.push('\n');
    s
}

/// Built-in id, or a path to a rubric file.
pub fn resolve_rubric(reference: &str) -> Result<Rubric, FormatError> {
    if let Ok(r) = builtin_rubric(reference) {
        return Ok(r);
    }
    let path = Path::new(reference);
    if path.exists() {
        return load_rubric(&read_file(path)?);
    }
    Err(FormatError::Parse {
        what: "rubric".into(),
        message: format!(
            "`{reference}` is neither a built-in rubric ({}) nor a readable file",
            qind_core::builtin_ids().join(", ")
        ),
    })
}

pub fn load_answers(text: &str) -> Result<ManualAnswers, FormatError> {
    parse(text, "answers")
}

pub fn load_weights(text: &str) -> Result<WeightScheme, FormatError> {
    parse(text, "weights")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ManifestKind {
    Path,
    Url,
    Pid,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub kind: ManifestKind,
    pub locator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub answers: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Per-target rubric; falls back to the batch rubric.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rubric: Option<String>,
}

/// Parses a manifest. Relative paths (path locators and answers files) are
/// resolved against `base`, the manifest's directory.
pub fn load_manifest(text: &str, base: &Path) -> Result<Vec<ManifestEntry>, FormatError> {
    let mut entries: Vec<ManifestEntry> = parse(text, "manifest")?;
    for e in &mut entries {
        if e.kind == ManifestKind::Path && Path::new(&e.locator).is_relative() {
            e.locator = base.join(&e.locator).display().to_string();
        }
        if let Some(a) = &e.answers {
            if a.is_relative() {
                e.answers = Some(base.join(a));
            }
        }
    }
    Ok(entries)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RubricInfo {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    pub title: String,
    pub max_level: u8,
}

impl From<&Rubric> for RubricInfo {
    fn from(r: &Rubric) -> Self {
        RubricInfo {
            id: r.id.clone(),
            version: r.version.clone(),
            title: r.title.clone(),
            max_level: r.max_level,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub rubric: RubricInfo,
    pub assessment: Assessment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<EvidenceSet>,
}

impl Report {
    pub fn new(rubric: &Rubric, assessment: Assessment, evidence: Option<EvidenceSet>) -> Self {
        Report {
            schema_version: REPORT_SCHEMA_VERSION,
            tool: ToolInfo {
                name: TOOL_NAME.into(),
                version: TOOL_VERSION.into(),
            },
            rubric: rubric.into(),
            assessment,
            evidence,
        }
    }
}

pub fn emit_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn parse_report(text: &str) -> Result<Report, FormatError> {
    let report: Report = parse(text, "report")?;
    if report.schema_version != REPORT_SCHEMA_VERSION {
        return Err(FormatError::Parse {
            what: "report".into(),
            message: format!("unsupported schema_version {}", report.schema_version),
        });
    }
    Ok(report)
}
