//! Automated checks that decide single level statements from evidence.
//!
//! Checks are positive predicates evaluated in three-valued (Kleene) logic:
//! a missing fact makes a check unknown unless the remaining facts already
//! decide it. Adding facts can therefore turn unknown into satisfied or
//! unsatisfied, but never satisfied into unsatisfied.

use std::collections::BTreeSet;

use qind_core::{map_external_score, Rational, VerdictStatus};
use serde::{Deserialize, Serialize};

use crate::evidence::{EvidenceSet, FactValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Unknown,
        }
    }

    pub fn or(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::True, _) | (_, Tri::True) => Tri::True,
            (Tri::False, Tri::False) => Tri::False,
            _ => Tri::Unknown,
        }
    }

    /// For checks that can confirm a statement but never refute it.
    pub fn sufficient_only(self) -> Tri {
        match self {
            Tri::False => Tri::Unknown,
            t => t,
        }
    }

    pub fn status(self) -> VerdictStatus {
        match self {
            Tri::True => VerdictStatus::Satisfied,
            Tri::False => VerdictStatus::Unsatisfied,
            Tri::Unknown => VerdictStatus::Unknown,
        }
    }
}

/// Tunable cutoffs used by some checks. None of the defaults are fixed by
/// the rubrics themselves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CheckConfig {
    /// Quality-icon counts for the basic, medium and high registry levels.
    pub icon_cutoffs: [u32; 3],
    /// Filled optional DataCite properties needed for "full" metadata.
    pub datacite_optional_min: u32,
    /// Share of tags that must parse as semantic versions.
    pub semver_min_fraction: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            icon_cutoffs: [1, 3, 5],
            datacite_optional_min: crate::collectors::pid::DATACITE_OPTIONAL.len() as u32,
            semver_min_fraction: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub check_id: String,
    pub status: VerdictStatus,
    /// Facts that were consulted and present.
    pub evidence_refs: Vec<String>,
    /// Facts that were consulted but absent.
    pub missing: Vec<String>,
}

struct Eval<'a> {
    ev: &'a EvidenceSet,
    refs: BTreeSet<String>,
    missing: BTreeSet<String>,
}

impl<'a> Eval<'a> {
    fn fact(&mut self, id: &str) -> Option<&'a FactValue> {
        match self.ev.value(id) {
            Some(v) => {
                self.refs.insert(id.to_string());
                Some(v)
            }
            None => {
                self.missing.insert(id.to_string());
                None
            }
        }
    }

    fn flag(&mut self, id: &str) -> Tri {
        match self.fact(id).and_then(FactValue::as_bool) {
            Some(b) => Tri::from_bool(b),
            None => Tri::Unknown,
        }
    }

    fn text_in(&mut self, id: &str, allowed: &[&str]) -> Tri {
        match self.fact(id).and_then(FactValue::as_text) {
            Some(t) => Tri::from_bool(allowed.contains(&t)),
            None => Tri::Unknown,
        }
    }

    fn nonempty(&mut self, id: &str) -> Tri {
        match self.fact(id).and_then(FactValue::as_list) {
            Some(l) => Tri::from_bool(!l.is_empty()),
            None => Tri::Unknown,
        }
    }

    fn number(&mut self, id: &str, pred: impl Fn(f64) -> bool) -> Tri {
        match self.fact(id).and_then(FactValue::as_number) {
            Some(n) => Tri::from_bool(pred(n)),
            None => Tri::Unknown,
        }
    }
}

/// Every check id the engine can evaluate.
pub const CHECK_IDS: &[&str] = &[
    // software, local repository
    "vcs_present",
    "remote_repository",
    "forge_hosted",
    "readme_present",
    "structured_citation_metadata",
    "citation_metadata_present",
    "citation_metadata_complete",
    "has_version_tags",
    "semver_tags",
    "versioning_doc_present",
    "release_doc_present",
    "ci_tag_automation",
    "software_locator",
    "locator_with_metadata_scheme",
    "software_pid",
    "harvestable_pid",
    "contact_present",
    "license_present",
    "osi_approved",
    "support_doc_present",
    "source_files_present",
    "install_doc_present",
    "test_dir_present",
    "ci_config_present",
    "install_script_present",
    "build_script_present",
    "package_manifest_present",
    "container_recipe_present",
    "reuse_compliant",
    "ci_reuse_check",
    "ci_license_scan",
    "repository_has_files",
    "structured_layout",
    "contributing_present",
    "style_config_present",
    "ci_lint",
    "dependency_pinning",
    "ci_coverage",
    "pr_template_present",
    "dependency_update_config_present",
    "ci_security_scan",
    // shared with data targets
    "listed_in_meta_repository",
    // data, PID metadata and registry
    "identifier_uri",
    "identifier_handle",
    "identifier_resolvable_pid",
    "identifier_doi",
    "repository_known",
    "meta_repository_icons_basic",
    "meta_repository_icons_medium",
    "meta_repository_icons_high",
    "metadata_record_present",
    "access_info_human_readable",
    "license_in_metadata",
    "access_info_machine_readable",
    "rights_declared",
    "open_access_declared",
    "open_access_with_license",
    "data_files_declared",
    "formats_declared",
    "formats_open",
    "datacite_mandatory_complete",
    "datacite_recommended_complete",
    "datacite_optional_complete",
    "content_metadata_some",
    "external_score_band",
];

pub fn is_known_check(id: &str) -> bool {
    CHECK_IDS.contains(&id)
}

fn ci_flag(e: &mut Eval<'_>, id: &str) -> Tri {
    e.flag("ci_config_present").and(e.flag(id))
}

/// Evaluates check `id` for rubric level `level`. Returns `None` for an
/// unknown check id.
pub fn evaluate_check(
    id: &str,
    level: u8,
    evidence: &EvidenceSet,
    config: &CheckConfig,
) -> Option<CheckOutcome> {
    let mut e = Eval {
        ev: evidence,
        refs: BTreeSet::new(),
        missing: BTreeSet::new(),
    };
    let structured = |e: &mut Eval<'_>| e.text_in("citation_metadata_kind", &["citation-file", "codemeta"]);
    let software_locator = |e: &mut Eval<'_>| {
        e.text_in("declared_identifier_kind", &["url", "handle", "doi"])
            .or(e.flag("remote_url_present"))
    };
    let icons = |e: &mut Eval<'_>, cutoff: u32| {
        e.flag("listed_in_meta_repository")
            .and(e.number("quality_icon_count", |n| n >= f64::from(cutoff)))
    };
    let tri = match id {
        "vcs_present" | "forge_hosted" | "readme_present" | "citation_metadata_complete"
        | "versioning_doc_present" | "release_doc_present" | "contact_present" | "osi_approved"
        | "support_doc_present" | "source_files_present" | "install_doc_present"
        | "test_dir_present" | "ci_config_present" | "install_script_present"
        | "build_script_present" | "package_manifest_present" | "container_recipe_present"
        | "reuse_compliant" | "contributing_present" | "style_config_present"
        | "pr_template_present" | "dependency_update_config_present"
        | "listed_in_meta_repository" | "repository_known" | "metadata_record_present"
        | "access_info_human_readable" | "license_in_metadata" | "access_info_machine_readable"
        | "rights_declared" | "data_files_declared" | "formats_open"
        | "datacite_mandatory_complete" | "datacite_recommended_complete"
        | "content_metadata_some" => e.flag(id),
        "remote_repository" => e.flag("remote_url_present"),
        "structured_citation_metadata" => structured(&mut e),
        "citation_metadata_present" => e
            .fact("citation_metadata_kind")
            .and_then(FactValue::as_text)
            .map(|k| Tri::from_bool(k != "none"))
            .unwrap_or(Tri::Unknown),
        "has_version_tags" => e.nonempty("tag_list"),
        "semver_tags" => e
            .nonempty("tag_list")
            .and(e.number("semver_tags_fraction", |f| f >= config.semver_min_fraction)),
        "ci_tag_automation" | "ci_reuse_check" | "ci_license_scan" | "ci_lint" | "ci_coverage"
        | "ci_security_scan" => ci_flag(&mut e, id),
        "software_locator" => software_locator(&mut e),
        "locator_with_metadata_scheme" => software_locator(&mut e).and(structured(&mut e)),
        "software_pid" => e.text_in("declared_identifier_kind", &["handle", "doi"]),
        "harvestable_pid" => e
            .text_in("declared_identifier_kind", &["doi"])
            .and(e.flag("metadata_record_present")),
        "license_present" => e.nonempty("license_files"),
        "repository_has_files" => e.number("file_count", |n| n > 0.0),
        "structured_layout" => e.nonempty("conventional_dirs"),
        "dependency_pinning" => e.flag("lockfile_present").and(e.flag("test_dir_present")),
        "identifier_uri" => e.text_in("identifier_kind", &["url", "handle", "doi"]),
        "identifier_handle" => e.text_in("identifier_kind", &["handle", "doi"]),
        "identifier_resolvable_pid" => e
            .text_in("identifier_kind", &["handle", "doi"])
            .and(e.flag("resolves_globally"))
            .and(e.flag("metadata_record_present")),
        "identifier_doi" => e
            .text_in("identifier_kind", &["doi"])
            .and(e.flag("resolves_globally"))
            .and(e.flag("metadata_record_present")),
        "meta_repository_icons_basic" => icons(&mut e, config.icon_cutoffs[0]),
        "meta_repository_icons_medium" => icons(&mut e, config.icon_cutoffs[1]),
        "meta_repository_icons_high" => icons(&mut e, config.icon_cutoffs[2]),
        // Open data moots the statements about restricted access.
        "open_access_declared" => e.flag("open_access").sufficient_only(),
        "open_access_with_license" => e.flag("open_access").and(e.flag("license_in_metadata")),
        "formats_declared" => e.nonempty("formats"),
        "datacite_optional_complete" => e.number("datacite_optional_count", |n| {
            n >= f64::from(config.datacite_optional_min)
        }),
        "external_score_band" => e
            .number("external_fair_score", |p| {
                Rational::from_f64(p)
                    .ok()
                    .and_then(|r| map_external_score(r).ok())
                    .is_some_and(|band| band >= level)
            }),
        _ => return None,
    };
    Some(CheckOutcome {
        check_id: id.to_string(),
        status: tri.status(),
        evidence_refs: e.refs.into_iter().collect(),
        missing: e.missing.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evidence::Provenance;

    fn ev(facts: &[(&str, FactValue)]) -> EvidenceSet {
        let mut set = EvidenceSet::new("t");
        for (id, v) in facts {
            set.insert(
                id,
                v.clone(),
                Provenance {
                    collector: "test".into(),
                    source: "fixture".into(),
                    retrieved_at: "t".into(),
                },
            )
            .unwrap();
        }
        set
    }

    fn status(id: &str, level: u8, set: &EvidenceSet) -> VerdictStatus {
        evaluate_check(id, level, set, &CheckConfig::default()).unwrap().status
    }

    #[test]
    fn every_listed_check_evaluates() {
        let empty = EvidenceSet::new("t");
        for id in CHECK_IDS {
            let outcome = evaluate_check(id, 1, &empty, &CheckConfig::default()).unwrap();
            assert_eq!(outcome.status, VerdictStatus::Unknown, "{id}");
            assert!(!outcome.missing.is_empty(), "{id}");
        }
        assert!(evaluate_check("bogus", 1, &empty, &CheckConfig::default()).is_none());
    }

    #[test]
    fn builtin_rubrics_only_use_known_checks() {
        for id in qind_core::builtin_ids() {
            let r = qind_core::builtin_rubric(id).unwrap();
            for c in r.check_ids() {
                assert!(is_known_check(c), "{id}: {c}");
            }
        }
    }

    #[test]
    fn kleene_disjunction_decides_with_partial_facts() {
        let set = ev(&[("remote_url_present", true.into())]);
        assert_eq!(status("software_locator", 1, &set), VerdictStatus::Satisfied);
        let set = ev(&[("remote_url_present", false.into())]);
        assert_eq!(status("software_locator", 1, &set), VerdictStatus::Unknown);
    }

    #[test]
    fn icon_cutoffs() {
        let set = ev(&[
            ("listed_in_meta_repository", true.into()),
            ("quality_icon_count", 4.0.into()),
        ]);
        assert_eq!(status("meta_repository_icons_basic", 2, &set), VerdictStatus::Satisfied);
        assert_eq!(status("meta_repository_icons_medium", 3, &set), VerdictStatus::Satisfied);
        assert_eq!(status("meta_repository_icons_high", 4, &set), VerdictStatus::Unsatisfied);
        let unlisted = ev(&[("listed_in_meta_repository", false.into())]);
        assert_eq!(status("meta_repository_icons_basic", 2, &unlisted), VerdictStatus::Unsatisfied);
    }

    #[test]
    fn external_score_band_uses_level() {
        let set = ev(&[("external_fair_score", 45.0.into())]);
        let statuses: Vec<_> = (1..=4).map(|l| status("external_score_band", l, &set)).collect();
        assert_eq!(
            statuses,
            [
                VerdictStatus::Satisfied,
                VerdictStatus::Satisfied,
                VerdictStatus::Unsatisfied,
                VerdictStatus::Unsatisfied
            ]
        );
    }

    #[test]
    fn open_access_never_refutes_restricted_levels() {
        let set = ev(&[("open_access", false.into())]);
        assert_eq!(status("open_access_declared", 2, &set), VerdictStatus::Unknown);
        let set = ev(&[("open_access", true.into())]);
        assert_eq!(status("open_access_declared", 2, &set), VerdictStatus::Satisfied);
    }

    #[test]
    fn ci_keyword_checks_need_ci() {
        let set = ev(&[("ci_config_present", false.into())]);
        assert_eq!(status("ci_lint", 4, &set), VerdictStatus::Unsatisfied);
        let set = ev(&[("ci_config_present", true.into()), ("ci_lint", true.into())]);
        assert_eq!(status("ci_lint", 4, &set), VerdictStatus::Satisfied);
    }
}
