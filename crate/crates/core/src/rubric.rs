//! Rubric data model: dimensions, attributes and cumulative level statements.
//!
//! A rubric is a tree `Rubric -> Dimension -> Attribute -> LevelStatement`.
//! Level 0 ("non-existent") is implicit and never stored; an attribute under
//! a rubric with `max_level = n` carries exactly the statements `1..=n`,
//! and each level is bound either to an automated check id or to `MANUAL`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rubric {
    pub id: String,
    pub title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    pub max_level: u8,
    /// Generic description of each maturity level, `0..=max_level`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scale: Vec<ScaleLevel>,
    pub dimensions: Vec<Dimension>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleLevel {
    pub level: u8,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dimension {
    pub id: String,
    pub title: String,
    #[serde(default)]
    pub description: String,
    pub attributes: Vec<Attribute>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Attribute {
    pub id: String,
    pub title: String,
    pub default_weight: Rational,
    pub levels: Vec<LevelStatement>,
    pub checks: Vec<CheckBinding>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelStatement {
    pub level: u8,
    pub text: String,
}

impl LevelStatement {
    /// Achieving a level always implies every level below it.
    pub const fn cumulative(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckBinding {
    pub level: u8,
    pub check: Check,
}

/// How a single level statement is decided.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Manual,
    Auto(String),
}

impl Check {
    pub const MANUAL_TAG: &'static str = "MANUAL";

    pub fn auto(id: &str) -> Self {
        Check::Auto(String::from(id))
    }

    pub fn as_str(&self) -> &str {
        match self {
            Check::Manual => Self::MANUAL_TAG,
            Check::Auto(id) => id,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Check {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Check {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Check, D::Error> {
        struct CheckVisitor;
        impl Visitor<'_> for CheckVisitor {
            type Value = Check;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a check id or \"MANUAL\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Check, E> {
                match v {
                    "" => Err(E::custom("empty check id")),
                    Check::MANUAL_TAG => Ok(Check::Manual),
                    id => Ok(Check::auto(id)),
                }
            }
        }
        deserializer.deserialize_str(CheckVisitor)
    }
}

impl Attribute {
    pub fn level_text(&self, level: u8) -> Option<&str> {
        self.levels
            .iter()
            .find(|s| s.level == level)
            .map(|s| s.text.as_str())
    }

    pub fn binding(&self, level: u8) -> Option<&Check> {
        self.checks
            .iter()
            .find(|b| b.level == level)
            .map(|b| &b.check)
    }
}

impl Rubric {
    pub fn attributes(&self) -> impl Iterator<Item = &Attribute> {
        self.dimensions.iter().flat_map(|d| d.attributes.iter())
    }

    pub fn attribute_count(&self) -> usize {
        self.dimensions.iter().map(|d| d.attributes.len()).sum()
    }

    pub fn attribute(&self, id: &str) -> Option<&Attribute> {
        self.attributes().find(|a| a.id == id)
    }

    pub fn dimension(&self, id: &str) -> Option<&Dimension> {
        self.dimensions.iter().find(|d| d.id == id)
    }

    pub fn dimension_of(&self, attribute_id: &str) -> Option<&Dimension> {
        self.dimensions
            .iter()
            .find(|d| d.attributes.iter().any(|a| a.id == attribute_id))
    }

    /// Every distinct automated check id referenced by the rubric.
    pub fn check_ids(&self) -> BTreeSet<&str> {
        self.attributes()
            .flat_map(|a| a.checks.iter())
            .filter_map(|b| match &b.check {
                Check::Auto(id) => Some(id.as_str()),
                Check::Manual => None,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub severity: Severity,
    pub path: String,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "{sev}: {}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        !self.has_errors()
    }

    pub fn has_errors(&self) -> bool {
        self.findings.iter().any(|f| f.severity == Severity::Error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Error)
    }

    fn error(&mut self, path: String, message: String) {
        self.findings.push(Finding {
            severity: Severity::Error,
            path,
            message,
        });
    }

    fn warning(&mut self, path: String, message: String) {
        self.findings.push(Finding {
            severity: Severity::Warning,
            path,
            message,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for finding in &self.findings {
            writeln!(f, "{finding}")?;
        }
        Ok(())
    }
}

fn join_levels(levels: &[u8]) -> String {
    let mut out = String::new();
    for (i, l) in levels.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!("{l}"));
    }
    out
}

/// Structural validation. Check ids are not resolved; see
/// [`validate_rubric_with`].
pub fn validate_rubric(rubric: &Rubric) -> ValidationReport {
    validate_rubric_with(rubric, |_| true)
}

/// Structural validation plus resolution of every automated check id
/// against `known_check`.
pub fn validate_rubric_with(rubric: &Rubric, known_check: impl Fn(&str) -> bool) -> ValidationReport {
    let mut report = ValidationReport::default();
    let max = rubric.max_level;

    if rubric.id.trim().is_empty() {
        report.error("id".into(), "rubric id is empty".into());
    }
    if max == 0 {
        report.error("max_level".into(), "max_level must be at least 1".into());
    }
    if rubric.dimensions.is_empty() {
        report.error("dimensions".into(), "rubric has no dimensions".into());
    }

    if !rubric.scale.is_empty() {
        let mut seen = BTreeSet::new();
        for (i, s) in rubric.scale.iter().enumerate() {
            if s.level > max || !seen.insert(s.level) {
                report.error(
                    format!("scale[{i}]"),
                    format!("scale level {} is out of range or duplicated", s.level),
                );
            }
        }
        let missing: Vec<u8> = (0..=max).filter(|l| !seen.contains(l)).collect();
        if !missing.is_empty() {
            report.warning(
                "scale".into(),
                format!("scale does not describe levels {}", join_levels(&missing)),
            );
        }
    }

    let mut dim_ids = BTreeSet::new();
    let mut attr_ids = BTreeSet::new();
    for (di, dim) in rubric.dimensions.iter().enumerate() {
        let dpath = format!("dimensions[{di}]");
        if dim.id.trim().is_empty() {
            report.error(format!("{dpath}.id"), "dimension id is empty".into());
        } else if !dim_ids.insert(dim.id.as_str()) {
            report.error(
                format!("{dpath}.id"),
                format!("duplicate dimension id `{}`", dim.id),
            );
        }
        if dim.attributes.is_empty() {
            report.error(
                format!("{dpath}.attributes"),
                format!("dimension `{}` has no attributes", dim.id),
            );
        }
        for (ai, attr) in dim.attributes.iter().enumerate() {
            let apath = format!("{dpath}.attributes[{ai}]");
            if attr.id.trim().is_empty() {
                report.error(format!("{apath}.id"), "attribute id is empty".into());
            } else if !attr_ids.insert(attr.id.as_str()) {
                report.error(
                    format!("{apath}.id"),
                    format!("duplicate attribute id `{}`", attr.id),
                );
            }
            if !attr.default_weight.is_positive() {
                report.error(
                    format!("{apath}.default_weight"),
                    format!("weight {} is not strictly positive", attr.default_weight),
                );
            }
            validate_levels(&mut report, &apath, attr, max);
            validate_checks(&mut report, &apath, attr, max, &known_check);
        }
    }
    report
}

fn validate_levels(report: &mut ValidationReport, apath: &str, attr: &Attribute, max: u8) {
    let mut seen = BTreeSet::new();
    let mut previous = 0u8;
    for (li, stmt) in attr.levels.iter().enumerate() {
        let lpath = format!("{apath}.levels[{li}]");
        if stmt.level == 0 || stmt.level > max {
            report.error(
                lpath.clone(),
                format!("level {} outside 1..={max}", stmt.level),
            );
        } else if !seen.insert(stmt.level) {
            report.error(lpath.clone(), format!("duplicate level {}", stmt.level));
        } else if stmt.level < previous {
            report.error(lpath.clone(), format!("level {} out of order", stmt.level));
        }
        previous = previous.max(stmt.level);
        if stmt.text.trim().is_empty() {
            report.error(format!("{lpath}.text"), "level statement text is empty".into());
        }
    }
    let missing: Vec<u8> = (1..=max).filter(|l| !seen.contains(l)).collect();
    if !missing.is_empty() {
        report.error(
            format!("{apath}.levels"),
            format!("missing levels {}", join_levels(&missing)),
        );
    }
}

fn validate_checks(
    report: &mut ValidationReport,
    apath: &str,
    attr: &Attribute,
    max: u8,
    known_check: &impl Fn(&str) -> bool,
) {
    let mut seen = BTreeSet::new();
    for (ci, binding) in attr.checks.iter().enumerate() {
        let cpath = format!("{apath}.checks[{ci}]");
        if binding.level == 0 || binding.level > max {
            report.error(
                cpath.clone(),
                format!("check bound to level {} outside 1..={max}", binding.level),
            );
        } else if !seen.insert(binding.level) {
            report.error(
                cpath.clone(),
                format!("level {} has more than one check binding", binding.level),
            );
        }
        if let Check::Auto(id) = &binding.check {
            if !known_check(id) {
                report.error(format!("{cpath}.check"), format!("unknown check `{id}`"));
            }
        }
    }
    let missing: Vec<u8> = (1..=max).filter(|l| !seen.contains(l)).collect();
    if !missing.is_empty() {
        report.error(
            format!("{apath}.checks"),
            format!("no check binding for levels {}", join_levels(&missing)),
        );
    }
}
