//! Simplified REUSE compliance: every non-binary file carries an SPDX
//! license tag or is covered by a directory-level declaration, and every
//! referenced license has a text under `LICENSES/`.

use std::collections::BTreeSet;
use std::io;
use std::path::Path;

use globset::{Glob, GlobBuilder, GlobMatcher};
use serde::Deserialize;

use super::{licenses, stem, RepoTree};
use crate::evidence::{EvidenceSet, Recorder};

pub const COLLECTOR: &str = "reuse";

const BINARY_SNIFF: usize = 8 * 1024;

pub fn looks_binary(bytes: &[u8]) -> bool {
    bytes[..bytes.len().min(BINARY_SNIFF)].contains(&0)
}

struct Declaration {
    matcher: GlobMatcher,
    ids: Vec<String>,
}

#[derive(Deserialize)]
struct ReuseToml {
    #[serde(default)]
    annotations: Vec<Annotation>,
}

#[derive(Deserialize)]
struct Annotation {
    path: OneOrMany,
    #[serde(rename = "SPDX-License-Identifier")]
    license: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

fn reuse_toml_declarations(text: &str) -> Result<Vec<Declaration>, String> {
    let doc: ReuseToml = toml::from_str(text).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for a in doc.annotations {
        let Some(expr) = a.license else { continue };
        let paths = match a.path {
            OneOrMany::One(p) => vec![p],
            OneOrMany::Many(p) => p,
        };
        for p in paths {
            let glob = GlobBuilder::new(&p)
                .literal_separator(true)
                .build()
                .map_err(|e| e.to_string())?;
            out.push(Declaration {
                matcher: glob.compile_matcher(),
                ids: licenses::expression_ids(&expr),
            });
        }
    }
    Ok(out)
}

/// Debian copyright format: paragraphs of `Files:` globs and a `License:`.
fn dep5_declarations(text: &str) -> Result<Vec<Declaration>, String> {
    let mut out = Vec::new();
    for para in text.split("\n\n") {
        let mut files: Vec<String> = Vec::new();
        let mut license = None;
        let mut in_files = false;
        for line in para.lines() {
            if let Some(rest) = line.strip_prefix("Files:") {
                files.extend(rest.split_whitespace().map(str::to_string));
                in_files = true;
            } else if in_files && line.starts_with([' ', '\t']) {
                files.extend(line.split_whitespace().map(str::to_string));
            } else {
                in_files = false;
                if let Some(rest) = line.strip_prefix("License:") {
                    license = Some(rest.trim().to_string());
                }
            }
        }
        if let Some(expr) = license {
            for f in files {
                let glob = Glob::new(&f).map_err(|e| e.to_string())?;
                out.push(Declaration {
                    matcher: glob.compile_matcher(),
                    ids: licenses::expression_ids(&expr),
                });
            }
        }
    }
    Ok(out)
}

fn exempt(rel: &str) -> bool {
    let name = rel.rsplit('/').next().unwrap_or(rel).to_lowercase();
    rel.starts_with("LICENSES/")
        || rel.starts_with(".reuse/")
        || rel == "REUSE.toml"
        || name.ends_with(".license")
        || ["license", "licence", "copying"].contains(&stem(&name))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReuseReport {
    pub compliant: bool,
    pub spdx_ids: Vec<String>,
    pub offending_paths: Vec<String>,
    pub missing_licenses: Vec<String>,
}

pub fn reuse_report(tree: &RepoTree) -> io::Result<ReuseReport> {
    let mut declarations = Vec::new();
    let mut bad_config = Vec::new();
    if let Some(text) = tree.read("REUSE.toml") {
        match reuse_toml_declarations(&text) {
            Ok(d) => declarations.extend(d),
            Err(_) => bad_config.push("REUSE.toml".to_string()),
        }
    }
    if let Some(text) = tree.read(".reuse/dep5") {
        match dep5_declarations(&text) {
            Ok(d) => declarations.extend(d),
            Err(_) => bad_config.push(".reuse/dep5".to_string()),
        }
    }

    let mut referenced: BTreeSet<String> = BTreeSet::new();
    let mut offending = bad_config;
    for rel in &tree.files {
        if exempt(rel) {
            continue;
        }
        let bytes = std::fs::read(tree.abs(rel))?;
        if looks_binary(&bytes) {
            continue;
        }
        let mut ids = licenses::spdx_tag_ids(&String::from_utf8_lossy(&bytes));
        if ids.is_empty() {
            if let Some(companion) = tree.read(&format!("{rel}.license")) {
                ids = licenses::spdx_tag_ids(&companion);
            }
        }
        if ids.is_empty() {
            // The last matching declaration wins, as in REUSE.toml.
            if let Some(d) = declarations.iter().rev().find(|d| d.matcher.is_match(rel)) {
                ids = d.ids.clone();
            }
        }
        if ids.is_empty() {
            offending.push(rel.clone());
        }
        referenced.extend(ids);
    }

    let available: BTreeSet<String> = tree
        .files_in("LICENSES", |_| true)
        .into_iter()
        .map(|f| {
            let name = f.trim_start_matches("LICENSES/");
            name.rsplit_once('.').map_or(name, |(s, _)| s).to_string()
        })
        .collect();
    let missing: Vec<String> = referenced.difference(&available).cloned().collect();
    let mut ids: BTreeSet<String> = referenced;
    ids.extend(available);
    Ok(ReuseReport {
        compliant: offending.is_empty() && missing.is_empty(),
        spdx_ids: ids.into_iter().collect(),
        offending_paths: offending,
        missing_licenses: missing,
    })
}

/// Runs the REUSE check and also decides `osi_approved` from every license
/// id found, including plain license files.
pub fn check_reuse_compliance(path: &Path, retrieved_at: &str) -> io::Result<EvidenceSet> {
    let tree = RepoTree::scan(path)?;
    let report = reuse_report(&tree)?;
    let mut all_ids: BTreeSet<String> = report.spdx_ids.iter().cloned().collect();
    for f in tree.files_in("", |n| ["license", "licence", "copying"].contains(&stem(n))) {
        if let Some(id) = tree.read(f).and_then(|t| licenses::identify_license_text(&t)) {
            all_ids.insert(id);
        }
    }
    let osi = all_ids.iter().any(|id| licenses::is_osi_approved(id));

    let mut set = EvidenceSet::new(path.display().to_string());
    let mut rec = Recorder {
        set: &mut set,
        collector: COLLECTOR,
        retrieved_at: retrieved_at.to_string(),
    };
    let here = path.display().to_string();
    rec.put("reuse_compliant", report.compliant, &here);
    rec.put("spdx_ids", all_ids.into_iter().collect::<Vec<_>>(), &here);
    rec.put("osi_approved", osi, &here);
    rec.put("reuse_offending_paths", report.offending_paths, &here);
    rec.put("reuse_missing_licenses", report.missing_licenses, &here);
    Ok(set)
}
