//! The two built-in rubrics: POCME for research data publications and
//! FAIR-ST for research software publications.
//!
//! Level texts are stored exactly as published, spacing and typos included.
//! Any normalization is a display concern.

use alloc::string::String;
use alloc::vec::Vec;

use crate::rational::Rational;
use crate::rubric::{Attribute, Check, CheckBinding, Dimension, LevelStatement, Rubric, ScaleLevel};

pub const POCME_ID: &str = "pocme";
pub const FAIRST_ID: &str = "fairst";
pub const BUILTIN_VERSION: &str = "1.0";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("rubric not found: `{0}`")]
pub struct RubricNotFound(pub String);

pub fn builtin_ids() -> &'static [&'static str] {
    &[POCME_ID, FAIRST_ID]
}

pub fn builtin_rubric(id: &str) -> Result<Rubric, RubricNotFound> {
    match id {
        POCME_ID => Ok(build(
            POCME_ID,
            "Quality indicator for research data publications (POCME)",
            4,
            POCME_SCALE,
            POCME_DIMENSIONS,
        )),
        FAIRST_ID => Ok(build(
            FAIRST_ID,
            "Quality indicator for research software publications (FAIR-ST)",
            5,
            FAIRST_SCALE,
            FAIRST_DIMENSIONS,
        )),
        other => Err(RubricNotFound(String::from(other))),
    }
}

pub(crate) struct DimensionSpec {
    id: &'static str,
    title: &'static str,
    description: &'static str,
    attributes: &'static [AttributeSpec],
}

pub(crate) struct AttributeSpec {
    id: &'static str,
    title: &'static str,
    weight: (i64, i64),
    /// Statements for levels `1..`, each with its check id (`None` = manual).
    levels: &'static [(&'static str, Option<&'static str>)],
}

fn build(
    id: &str,
    title: &str,
    max_level: u8,
    scale: &[&str],
    dims: &[DimensionSpec],
) -> Rubric {
    Rubric {
        id: id.into(),
        title: title.into(),
        version: Some(BUILTIN_VERSION.into()),
        max_level,
        scale: scale
            .iter()
            .enumerate()
            .map(|(i, text)| ScaleLevel {
                level: i as u8,
                text: (*text).into(),
            })
            .collect(),
        dimensions: dims
            .iter()
            .map(|d| Dimension {
                id: d.id.into(),
                title: d.title.into(),
                description: d.description.into(),
                attributes: d.attributes.iter().map(build_attribute).collect(),
            })
            .collect(),
    }
}

fn build_attribute(a: &AttributeSpec) -> Attribute {
    let levels: Vec<LevelStatement> = a
        .levels
        .iter()
        .enumerate()
        .map(|(i, (text, _))| LevelStatement {
            level: i as u8 + 1,
            text: (*text).into(),
        })
        .collect();
    let checks = a
        .levels
        .iter()
        .enumerate()
        .map(|(i, (_, check))| CheckBinding {
            level: i as u8 + 1,
            check: match check {
                Some(id) => Check::auto(id),
                None => Check::Manual,
            },
        })
        .collect();
    Attribute {
        id: a.id.into(),
        title: a.title.into(),
        default_weight: Rational::new(a.weight.0, a.weight.1),
        levels,
        checks,
    }
}

const POCME_SCALE: &[&str] = &[
    "Non-existent: no information available or not applied",
    "Most necessary information provided or measure taken",
    "Basic information provided or measure taken (sensible level of information/measures)",
    "Advanced information provided or measure taken, allowing to generally understand and (re)use the published data",
    "Complete and accurate information provided or measure taken, to an extend that allows maximal understanding and usage of data",
];

const FAIRST_SCALE: &[&str] = &[
    "Non-existent: no information available",
    "Initial: initial information available being obtained in an ad-hoc, unorganized manner",
    "Repeatable: the information is complete, being produced in a repeatable, yet intuitive manner",
    "Defined: a process is established guaranteeing the complete compilation of the required information",
    "Managed: the process being established is managed, i.e. monitoring/measuring is included",
    "Optimized: practices are put in place optimizing the way the process is operated, leading to improved quality over time",
];

pub(crate) const POCME_DIMENSIONS: &[DimensionSpec] = &[
    DimensionSpec {
        id: "publishing",
        title: "Publishing",
        description: "Identification, storage location and access information of the published dataset.",
        attributes: &[
            AttributeSpec {
                id: "published_with_identifier",
                title: "Published with Identifier",
                weight: (1, 1),
                levels: &[
                    ("Basic Uniform Resource Identifier", Some("identifier_uri")),
                    ("Dataset is identifiable via internal handle (does not resolve globally, generally no  metadata)", Some("identifier_handle")),
                    ("Dataset is basically identifiable via formalized, standardized, persistent identifier (resolves globally, general metadata provided)", Some("identifier_resolvable_pid")),
                    ("Dataset is identifiable via globally unique, formalized, standardized, persistent  identifier supported by general metadata (e.g. DOI).", Some("identifier_doi")),
                ],
            },
            AttributeSpec {
                id: "published_via_repository",
                title: "Published via a Repository or Collection, that is indexed in a Meta-Repository (e.g. re3data)",
                weight: (1, 1),
                levels: &[
                    ("The data is published in a repository/ collection which is not listed in an eligible meta-repository", Some("repository_known")),
                    ("The repository/collection is listed in an eligible meta-repository, basic no. of quality indicators assigned by the meta-repository are achieved", Some("meta_repository_icons_basic")),
                    ("The repository/collection is listed in an eligible meta-repository, medium no. of quality indicators assigned by the meta-repository are achieved", Some("meta_repository_icons_medium")),
                    ("The repository/collection is listed in an eligible meta-repository, high no. of quality indicators assigned by the meta-repository are achieved", Some("meta_repository_icons_high")),
                ],
            },
            AttributeSpec {
                id: "access_information",
                title: "Published with Information on Access to the Data",
                weight: (1, 1),
                levels: &[
                    ("Metadata available, but no data access-information available in the metadata", Some("metadata_record_present")),
                    ("Metadata available, data access-information available only in human-readable form", Some("access_info_human_readable")),
                    ("Metadata available, data access-information available only in human readable form, including general license information", Some("license_in_metadata")),
                    ("Metadata available, data access-information available in human-readable and  machine-readable form*, including license information", Some("access_info_machine_readable")),
                ],
            },
        ],
    },
    DimensionSpec {
        id: "openness",
        title: "Openness",
        description: "Availability of the dataset and the conditions attached to it.",
        attributes: &[
            AttributeSpec {
                id: "general_openness",
                title: "General Degree of Openness",
                weight: (1, 1),
                levels: &[
                    ("Information available: no open accessibility/availability of the data. No justification, no information on possible contact or restrictions", Some("rights_declared")),
                    ("Like (1) + information on possible contact, restrictions or potential use cases on request available", Some("open_access_declared")),
                    ("Like (2) + with justification AND/OR date of moratorium", Some("open_access_declared")),
                    ("Open accessibility with corresponding license (no login or contact needed or otherwise with justification)", Some("open_access_with_license")),
                ],
            },
            AttributeSpec {
                id: "primary_data_formats",
                title: "Primary Data Formats",
                weight: (1, 1),
                levels: &[
                    ("Primary data generally available", Some("data_files_declared")),
                    ("Primary data stored in common proprietary data formats", Some("formats_declared")),
                    ("Primary data stored in open formats", Some("formats_open")),
                    ("Primary data makes use of common, domain specific terminologies (e.g., codelists)", None),
                ],
            },
        ],
    },
    DimensionSpec {
        id: "curation",
        title: "Curation",
        description: "Curation applied to the data and its documentation.",
        attributes: &[
            AttributeSpec {
                id: "level_of_curation",
                title: "Level of Curation",
                weight: (1, 1),
                levels: &[
                    ("Data is published in raw form without curation but according to standard with basic documentation like readme (e.g. automatic generated sensor data, long-tail data following a basic scheme)", None),
                    ("Data is published in cleaned form with some curation (e.g. brief checking, documentation according to standard)", None),
                    ("Data is published in cleaned form with enhanced curation and/ or reprocessing (e.g. conversion to new formats, enhancement of documentation)", None),
                    ("Data is published after undergoing extensive curation and/or reprocessing according to discipline specific standards in order to enhance to max. quality (like (3) + additional editing of deposited data for accuracy)", None),
                ],
            },
        ],
    },
    DimensionSpec {
        id: "metadata",
        title: "Metadata",
        description: "Formal and content related description of the dataset.",
        attributes: &[
            AttributeSpec {
                id: "formal_metadata",
                title: "Metadata to find/retrieve a Resource / Formal Metadata",
                weight: (1, 1),
                levels: &[
                    ("Metadata available for/with the data publication that is not structured according to a commonly accepted scheme (i.e. no scheme applied)", Some("metadata_record_present")),
                    ("Metadata provided with the data publication that is structured in a basic way according to a commonly accepted scheme (e.g. completed DataCite mandatory-properties/discovery ; Dublin Core, etc.)", Some("datacite_mandatory_complete")),
                    ("Metadata provided with the data publication that is structured in an advanced way, according to a commonly accepted scheme (e.g., completed Datacite mandatory- and recommended-properties for discovery + discovery-supporting basic content metadata according to DataCite scheme)", Some("datacite_recommended_complete")),
                    ("Full Metadata provided with the data publication (complete DataCite mandatory- and recommended- and optional-properties for discovery + comprehensive discovery-supporting  content metadata according to DataCite scheme)", Some("datacite_optional_complete")),
                ],
            },
            AttributeSpec {
                id: "content_metadata",
                title: "Content related Metadata",
                weight: (1, 1),
                levels: &[
                    ("Some content related metadata available, following a (generic) scheme (e.g. DataCite)", Some("content_metadata_some")),
                    ("Complete content related metadata available following a (generic) scheme (e.g. DataCite)", None),
                    ("Some content related metadata available following standardized form or domain specific scheme", None),
                    ("Complete and curated content related metadata available following a standardized form and domain specific scheme (see 3)", None),
                ],
            },
        ],
    },
    DimensionSpec {
        id: "external_view",
        title: "External View",
        description: "Percentage score reported by a domain specific FAIR assessment tool.",
        attributes: &[
            AttributeSpec {
                id: "external_fair_score",
                title: "Score from Domain Specific Fair Assessment Tool",
                weight: (1, 2),
                levels: &[
                    ("21-40% Score reached", Some("external_score_band")),
                    ("41-60% Score reached", Some("external_score_band")),
                    ("61-80% Score reached", Some("external_score_band")),
                    ("81-100% Score reached", Some("external_score_band")),
                ],
            },
        ],
    },
];

pub(crate) const FAIRST_DIMENSIONS: &[DimensionSpec] = &[
    DimensionSpec {
        id: "findable",
        title: "Findable",
        description: "Discovery of the software and identification of its versions.",
        attributes: &[
            AttributeSpec {
                id: "open_publication_repository",
                title: "Open Publication Repository",
                weight: (1, 1),
                levels: &[
                    ("The software is contained in an online repository.", Some("remote_repository")),
                    ("Some kind of description is available giving further information on the software in this repository (e.g. readme file).", Some("readme_present")),
                    ("A structured meta data description (e.g. following DataCite) given for software is in this repository.", Some("structured_citation_metadata")),
                    ("The repository is listed in some overarching meta-repository (e.g. Helmholtz Research Software Directory (RSD)).", Some("listed_in_meta_repository")),
                    ("The meta-repository is performing quality checks  (e.g. re3data) for the used publication repository.", None),
                ],
            },
            AttributeSpec {
                id: "versioning",
                title: "Versioning",
                weight: (1, 1),
                levels: &[
                    ("There is some kind of versioning for the software.", Some("has_version_tags")),
                    ("The software uses structured (e.g. semantic) versioning.", Some("semver_tags")),
                    ("A description of the versioning scheme is available.", Some("versioning_doc_present")),
                    ("There is a documentation on release cycles for the software.", Some("release_doc_present")),
                    ("The versioning scheme allows for automatic tagging by CI/CD processes.", Some("ci_tag_automation")),
                ],
            },
            AttributeSpec {
                id: "persistent_identifier",
                title: "Persistent Identifier (PID)",
                weight: (1, 1),
                levels: &[
                    ("A handle/URL is provided to identify the software.", Some("software_locator")),
                    ("The handle/URL is provided with a defined metadata scheme.", Some("locator_with_metadata_scheme")),
                    ("A persistent identifier is provided.", Some("software_pid")),
                    ("A PID allowing for automated harvesting of metadata information is provided.", Some("harvestable_pid")),
                    ("The PID is part of an established community standard.", None),
                ],
            },
            AttributeSpec {
                id: "rich_metadata",
                title: "Rich Metadata",
                weight: (1, 1),
                levels: &[
                    ("Some metadata information is provided with the software.", Some("citation_metadata_present")),
                    ("The metadata information is following a given metadata scheme complete.", Some("citation_metadata_complete")),
                    ("A metadata curation process reflects changes/updates.", None),
                    ("All metadata information following the given metadata scheme can be automatically harvested.", None),
                    ("An external quality assessment of the metadata exists.", None),
                ],
            },
        ],
    },
    DimensionSpec {
        id: "accessible",
        title: "Accessible",
        description: "Legal and operational access to run the software.",
        attributes: &[
            AttributeSpec {
                id: "access_conditions",
                title: "Access Conditions (organizational)",
                weight: (1, 1),
                levels: &[
                    ("A contact is given which to inquire about the right to use the software.", Some("contact_present")),
                    ("The software has a license describing rights of use.", Some("license_present")),
                    ("The license allows for open use of the software (e.g. OSI licenses).", Some("osi_approved")),
                    ("There is a way to also obtain some kind of support in using the software.", Some("support_doc_present")),
                    ("There isa community, providing the opportunity of support and exchange concerning aspects of using the software.", None),
                ],
            },
            AttributeSpec {
                id: "access_options",
                title: "Access Options (process)",
                weight: (1, 1),
                levels: &[
                    ("The software (source code or executable) is provided.", Some("source_files_present")),
                    ("The sources or executables being provided include some documentation on how to install/use the software.", Some("install_doc_present")),
                    ("Provided test cases allow to determine whether installation/execution worked as being expected.", Some("test_dir_present")),
                    ("Provided checks make sure the software works correctly.", Some("ci_config_present")),
                    ("A software service is provided, i.e. are reported bugs taken into the development cycle.", None),
                ],
            },
            AttributeSpec {
                id: "technical_accessibility",
                title: "Technical Accessibility (run/start)",
                weight: (1, 1),
                levels: &[
                    ("“How to install” information is provided.", Some("install_doc_present")),
                    ("Installation scripts are provided.", Some("install_script_present")),
                    ("The software allows for (semi-)automated installation, e.g. a Makefile or manual package (like Python modules).", Some("build_script_present")),
                    ("Sources are provided such that a package manager or automated build tools , e.g. automake, can be used.", Some("package_manifest_present")),
                    ("A complete package  that enables execution (e.g. container, app package) is available.", Some("container_recipe_present")),
                ],
            },
        ],
    },
    DimensionSpec {
        id: "interoperable",
        title: "Interoperable",
        description: "Integration into larger frameworks and automated pipelines.",
        attributes: &[
            AttributeSpec {
                id: "input_output_formats",
                title: "Input/Output Formats",
                weight: (1, 1),
                levels: &[
                    ("Some description of input and output formats is provided.", None),
                    ("The software builds on standard formats for input and output.", None),
                    ("Additional options for varying input/output formats are provided.", None),
                    ("The software builds on accepted community standards for input/output data.", None),
                    ("The software provides in addition further tools for processing input/output data.", None),
                ],
            },
            AttributeSpec {
                id: "adaptability",
                title: "Adaptability/Flexibility of Use",
                weight: (1, 1),
                levels: &[
                    ("There is a way to use the software with one defined set of input data.", None),
                    ("There are parameters to adjust the way the software is working.", None),
                    ("There is some way of logging what is done during execution.", None),
                    ("Documented API(s) are provided to integrate the software into one’s own framework.", None),
                    ("There is documented way to integrate the software into open workflows, e.g. via containers, web-services etc.", None),
                ],
            },
        ],
    },
    DimensionSpec {
        id: "reusable",
        title: "Reusable",
        description: "Permission and ability to adapt and extend the code.",
        attributes: &[
            AttributeSpec {
                id: "reusability_conditions",
                title: "Reusability Conditions",
                weight: (1, 1),
                levels: &[
                    ("The software uses  a custom license allowing reuse.", Some("license_present")),
                    ("The software uses  a FOSS/OSI approved license including that license dependencies are at least being checked manually.", Some("osi_approved")),
                    ("The software uses  an appropriate license for different file types (code, text, images etc.) following e.g. the REUSE specification.", Some("reuse_compliant")),
                    ("There is a process available for automatically checking e.g. the REUSE specification.", Some("ci_reuse_check")),
                    ("There is a process available such that all license dependencies are automatically controlled.", Some("ci_license_scan")),
                ],
            },
        ],
    },
    DimensionSpec {
        id: "scientific_basis",
        title: "Scientific basis",
        description: "Grounding of the software in scientific practice.",
        attributes: &[
            AttributeSpec {
                id: "community_standards",
                title: "Community Standards",
                weight: (1, 1),
                levels: &[
                    ("The connection to known (scientific) standards is drawn.", None),
                    ("The software follows standards of the relevant scientific community.", None),
                    ("The software complies with relevant scientific standards of the field.", None),
                    ("There is an indication on how further evolution of community standards will be addressed.", None),
                    ("A closed feedback-loop is established, making sure that further evolutions of community standards are being adopted.", None),
                ],
            },
            AttributeSpec {
                id: "team_expertise",
                title: "Team Expertise",
                weight: (1, 1),
                levels: &[
                    ("Clear expertise from a single, relevant domain is part of the software development team.", None),
                    ("The software development team has access to expertise in several relevant domains.", None),
                    ("The software development team has access to expertise in all relevant domains.", None),
                    ("A fixed, established, interdisciplinary team works on the software.", None),
                    ("An established and coordinated community of software developers works on the software.", None),
                ],
            },
            AttributeSpec {
                id: "scientific_embedding",
                title: "Scientific Embedding",
                weight: (1, 1),
                levels: &[
                    ("At least one scientific use case is documented.", None),
                    ("A broader scientific context is documented including several examples.", None),
                    ("The software development is at least loosely connected to some scientific initiative.", None),
                    ("The software development is part of a larger scientific initiative.", None),
                    ("The software development ispart of a larger scientific initiative with dedicated processes for software development.", None),
                ],
            },
        ],
    },
    DimensionSpec {
        id: "technical_basis",
        title: "Technical basis",
        description: "Software engineering practice behind the code.",
        attributes: &[
            AttributeSpec {
                id: "project_management",
                title: "Project Management",
                weight: (1, 1),
                levels: &[
                    ("Some kind of version control is used.", Some("vcs_present")),
                    ("A version control system is used.", Some("vcs_present")),
                    ("A version control system being part of a code project management platform (e.g. GitHub, GitLab) and an associated ticket system is in place.", Some("forge_hosted")),
                    ("A transparent process for ticket resolving, code review by other developer, and merge requests is established.", None),
                    ("A release process with guaranteed changelog generation, testing, and product provisioning is established.", None),
                ],
            },
            AttributeSpec {
                id: "repository_structure",
                title: "Repository Structure",
                weight: (1, 1),
                levels: &[
                    ("All files are provided in some structured/unstructured way inside the repository.", Some("repository_has_files")),
                    ("The repository is structured albeit maybe in a manner such that every contributor is free to follow own way of organizing files.", Some("structured_layout")),
                    ("A contribution mechanism is documented, e.g. CONTRIBUTORS.md file, as well as a defined structure for the repository and a documented onboarding process.", Some("contributing_present")),
                    ("A common template for the repository structure is available, as well as some kind of identification of deviation.", None),
                    ("A repository structure is enforced following community standards.", None),
                ],
            },
            AttributeSpec {
                id: "code_structure",
                title: "Code Structure",
                weight: (1, 1),
                levels: &[
                    ("Every developer is free to use his/her own style of coding.", Some("source_files_present")),
                    ("There are general recommendations for coding, albeit every developer being able to follow his/her own style.", None),
                    ("There is some harmonization of code style being enforced following common standards including meaningful naming of functions/variables etc.", Some("style_config_present")),
                    ("The code style is checked when accepting changes into the repository.", Some("ci_lint")),
                    ("The code style is enforced via a review process (e.g. failed pipelines or auto-formatting).", None),
                ],
            },
            AttributeSpec {
                id: "reproducibility",
                title: "Reproducibility (Code)",
                weight: (1, 1),
                levels: &[
                    ("The code follows a modular structure allowing for component reusability.", None),
                    ("Clear system requirements are documented with min/max versions, albeit version pinning, modularity etc. being enforced manually.", None),
                    ("A package manager is used for dependency pinning and testing enforced.", Some("dependency_pinning")),
                    ("Test coverage is measured, albeit tests may be written on a voluntary basis.", Some("ci_coverage")),
                    ("Automated testing for different system environments, requirements for minimal test coverage, and provisioning of containerized packages is done.", None),
                ],
            },
            AttributeSpec {
                id: "code_change_process",
                title: "Code change process",
                weight: (1, 1),
                levels: &[
                    ("Internal 4-eye principle for accepting changes", None),
                    ("Code changes via transparent processes, e.g. merge/pull request", Some("pr_template_present")),
                    ("Approval of code changes via transparent processes and with a 4-eye principle", None),
                    ("Integration of code changes into main development branch/releases only allowed for specifically named/trained persons.", None),
                    ("Software releases involve an external review (by someone outside of the core developer team)", None),
                ],
            },
            AttributeSpec {
                id: "security",
                title: "Security",
                weight: (1, 1),
                levels: &[
                    ("There are at least sporadic updates and dependency checks.", Some("dependency_update_config_present")),
                    ("There is a systematic assessment of dependencies and documentation of the software stack.", None),
                    ("Deployment is provided within a CI/CD framework for different environments including tools for check for security leaks.", Some("ci_security_scan")),
                    ("There is some process for monitoring dependency updates including reporting.", Some("dependency_update_config_present")),
                    ("There are regular and automated security monitoring and an automated update process in place allowing merges only of security checks have been passed.", None),
                ],
            },
        ],
    },
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rubric::validate_rubric;

    #[test]
    fn pocme_shape() {
        let r = builtin_rubric(POCME_ID).unwrap();
        assert_eq!(r.dimensions.len(), 5);
        assert_eq!(r.attribute_count(), 9);
        assert_eq!(r.max_level, 4);
        let titles: Vec<&str> = r.dimensions.iter().map(|d| d.title.as_str()).collect();
        assert_eq!(
            titles,
            ["Publishing", "Openness", "Curation", "Metadata", "External View"]
        );
    }

    #[test]
    fn fairst_shape() {
        let r = builtin_rubric(FAIRST_ID).unwrap();
        assert_eq!(r.dimensions.len(), 6);
        assert_eq!(r.attribute_count(), 19);
        assert_eq!(r.max_level, 5);
        let technical = r.dimension("technical_basis").unwrap();
        let titles: Vec<&str> = technical.attributes.iter().map(|a| a.title.as_str()).collect();
        assert_eq!(
            titles,
            [
                "Project Management",
                "Repository Structure",
                "Code Structure",
                "Reproducibility (Code)",
                "Code change process",
                "Security"
            ]
        );
    }

    #[test]
    fn builtins_validate_cleanly() {
        for id in builtin_ids() {
            let r = builtin_rubric(id).unwrap();
            let report = validate_rubric(&r);
            assert!(report.findings.is_empty(), "{id}: {report}");
        }
    }

    #[test]
    fn external_view_has_low_default_weight() {
        let r = builtin_rubric(POCME_ID).unwrap();
        let a = r.attribute("external_fair_score").unwrap();
        assert_eq!(a.default_weight, Rational::new(1, 2));
        assert!(a.checks.iter().all(|b| b.check == Check::auto("external_score_band")));
    }

    #[test]
    fn unknown_id() {
        assert_eq!(
            builtin_rubric("nope").unwrap_err(),
            RubricNotFound("nope".into())
        );
    }
}
