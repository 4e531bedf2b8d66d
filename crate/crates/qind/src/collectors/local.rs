//! Local repository scan: version control metadata and the presence of
//! conventional project files.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::LazyLock;

use regex::Regex;

use super::{licenses, stem, RepoTree};
use crate::evidence::{EvidenceSet, Recorder};

pub const COLLECTOR: &str = "local";

static SEMVER: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"^v?(0|[1-9]\d*)\.(0|[1-9]\d*)\.(0|[1-9]\d*)(-[0-9A-Za-z-]+(\.[0-9A-Za-z-]+)*)?(\+[0-9A-Za-z-]+(\.[0-9A-Za-z-]+)*)?$",
    )
    .unwrap()
});
static EMAIL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"[A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(\.[A-Za-z0-9-]+)*\.[A-Za-z]{2,}").unwrap());
static DOI: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\b(10\.\d{4,9}/[^\s\x22'<>\)\]]+)").unwrap());
static HANDLE_URL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"hdl\.handle\.net/(\d+(\.\d+)*/[^\s\x22'<>\)\]]+)").unwrap());
static INSTALL_HEADING: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?im)^(#+|=+)?\s*(installation|installing|install|setup|getting started)\b").unwrap());
static SUPPORT_HEADING: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?im)^#+\s*(support|getting help|help|contact)\b").unwrap());
static RELEASE_HEADING: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?im)^#+\s*(release|releases|release process|releasing|release cycle)\b").unwrap());

pub fn is_semver(tag: &str) -> bool {
    SEMVER.is_match(tag)
}

pub const FORGE_HOSTS: &[&str] = &[
    "github.com",
    "gitlab.com",
    "codeberg.org",
    "bitbucket.org",
    "sr.ht",
    "git.sr.ht",
];

fn is_forge_host(host: &str) -> bool {
    // Self-hosted GitLab instances are common in research institutions.
    FORGE_HOSTS.contains(&host) || host.starts_with("gitlab.") || host.starts_with("git.")
}

const SOURCE_EXTENSIONS: &[&str] = &[
    "py", "rs", "c", "h", "cc", "cpp", "cxx", "hpp", "hh", "java", "kt", "scala", "go", "js",
    "mjs", "ts", "tsx", "jsx", "jl", "r", "m", "f", "f90", "f95", "f03", "for", "rb", "php",
    "cs", "swift", "pl", "lua", "hs", "ml", "ex", "exs", "erl", "dart", "zig", "nim", "cu",
    "pyx", "sh", "ipynb", "sql", "mat", "vhd", "v", "sv",
];

const CONVENTIONAL_DIRS: &[&str] = &[
    "app", "benches", "bin", "cmd", "data", "doc", "docs", "examples", "include", "inst",
    "lib", "man", "notebooks", "pkg", "R", "scripts", "src", "test", "tests",
];

const LOCKFILES: &[&str] = &[
    "cargo.lock", "package-lock.json", "yarn.lock", "pnpm-lock.yaml", "poetry.lock", "uv.lock",
    "pdm.lock", "pipfile.lock", "go.sum", "gemfile.lock", "composer.lock", "manifest.toml",
    "renv.lock", "conda-lock.yml", "flake.lock", "pixi.lock",
];

const MANIFESTS: &[&str] = &[
    "pyproject.toml", "setup.py", "setup.cfg", "package.json", "cargo.toml", "description",
    "pom.xml", "go.mod", "project.toml", "composer.json", "environment.yml", "environment.yaml",
    "build.gradle", "build.gradle.kts", "meta.yaml", "pipfile", "gemfile", "flake.nix",
];

const BUILD_SCRIPTS: &[&str] = &[
    "makefile", "gnumakefile", "cmakelists.txt", "build.sh", "meson.build", "build.gradle",
    "build.gradle.kts", "pom.xml", "justfile", "taskfile.yml", "sconstruct", "build.rs",
    "noxfile.py", "tox.ini", "configure", "configure.ac", "build.xml", "build.zig",
];

const INSTALL_SCRIPTS: &[&str] = &["install.sh", "install.ps1", "install.bat", "setup.py", "setup.sh", "install.py"];

const STYLE_CONFIGS: &[&str] = &[
    ".editorconfig", "ruff.toml", ".ruff.toml", ".flake8", ".pylintrc", "pylintrc",
    ".eslintrc", ".eslintrc.js", ".eslintrc.json", ".eslintrc.yml", "eslint.config.js",
    "eslint.config.mjs", ".prettierrc", ".prettierrc.json", ".prettierrc.yml", "rustfmt.toml",
    ".rustfmt.toml", "clippy.toml", ".clang-format", ".clang-tidy", ".pre-commit-config.yaml",
    ".lintr", ".jshintrc", ".rubocop.yml", ".golangci.yml", ".golangci.yaml", ".stylelintrc",
    ".isort.cfg", ".black", "setup.cfg.flake8", ".yamllint", ".markdownlint.json",
];

const CI_FILES: &[&str] = &[
    ".gitlab-ci.yml", ".travis.yml", "jenkinsfile", "azure-pipelines.yml", ".woodpecker.yml",
    "bitbucket-pipelines.yml", ".drone.yml", "appveyor.yml", ".appveyor.yml",
];

/// Keywords in CI configuration that indicate a given automation.
const CI_KEYWORDS: &[(&str, &[&str])] = &[
    (
        "ci_tag_automation",
        &["tags:", "refs/tags", "ci_commit_tag", "github.ref_type", "semantic-release", "release-please", "bump2version", "bumpversion"],
    ),
    (
        "ci_lint",
        &["ruff", "flake8", "pylint", "eslint", "clippy", "rustfmt", "black ", "prettier", "golangci", "rubocop", "lintr", "pre-commit", "clang-tidy", "cpplint", "lint"],
    ),
    (
        "ci_coverage",
        &["coverage", "--cov", "codecov", "coveralls", "tarpaulin", "grcov", "llvm-cov", "jacoco", "gcovr", "covr"],
    ),
    ("ci_reuse_check", &["reuse lint", "fsfe/reuse-action", "reuse-action", "reuse-tool"]),
    (
        "ci_license_scan",
        &["licensee", "scancode", "fossa", "cargo deny", "cargo-deny", "license_finder", "license-finder", "pip-licenses", "licensecheck", "reuse lint", "fsfe/reuse-action"],
    ),
    (
        "ci_security_scan",
        &["codeql", "bandit", "trivy", "snyk", "cargo audit", "cargo-audit", "npm audit", "pip-audit", "safety check", "gitleaks", "semgrep", "dependency-check", "osv-scanner", "grype", "sast", "secret_detection"],
    ),
];

/// Resolves the git directory of a working tree, following `gitdir:` files
/// left by worktrees and submodules.
fn git_dir(root: &Path) -> Option<PathBuf> {
    let dot = root.join(".git");
    let meta = fs::metadata(&dot).ok()?;
    if meta.is_dir() {
        return Some(dot);
    }
    let text = fs::read_to_string(&dot).ok()?;
    let target = text.trim().strip_prefix("gitdir:")?.trim();
    let path = Path::new(target);
    Some(if path.is_absolute() {
        path.to_path_buf()
    } else {
        root.join(path)
    })
}

fn collect_tags(git: &Path) -> Vec<String> {
    let mut tags = Vec::new();
    let refs = git.join("refs").join("tags");
    if refs.is_dir() {
        for entry in walkdir::WalkDir::new(&refs).min_depth(1).into_iter().flatten() {
            if entry.file_type().is_file() {
                if let Ok(rel) = entry.path().strip_prefix(&refs) {
                    let name = rel
                        .components()
                        .map(|c| c.as_os_str().to_string_lossy())
                        .collect::<Vec<_>>()
                        .join("/");
                    tags.push(name);
                }
            }
        }
    }
    if let Ok(packed) = fs::read_to_string(git.join("packed-refs")) {
        for line in packed.lines() {
            if line.starts_with('#') || line.starts_with('^') {
                continue;
            }
            if let Some((_, name)) = line.split_once(' ') {
                if let Some(tag) = name.trim().strip_prefix("refs/tags/") {
                    tags.push(tag.to_string());
                }
            }
        }
    }
    tags.sort();
    tags.dedup();
    tags
}

/// Remote URL from a git config: `origin` if present, otherwise the first
/// remote listed.
pub fn remote_url_from_config(config: &str) -> Option<String> {
    let mut current: Option<String> = None;
    let mut found: Vec<(String, String)> = Vec::new();
    for line in config.lines() {
        let line = line.trim();
        if line.starts_with('[') {
            current = line
                .strip_prefix("[remote \"")
                .and_then(|r| r.strip_suffix("\"]"))
                .map(str::to_string);
        } else if let Some(name) = &current {
            if let Some((key, value)) = line.split_once('=') {
                if key.trim() == "url" {
                    found.push((name.clone(), value.trim().to_string()));
                }
            }
        }
    }
    found
        .iter()
        .find(|(n, _)| n == "origin")
        .or_else(|| found.first())
        .map(|(_, u)| u.clone())
}

/// Host part of an http(s), ssh or scp-style git remote.
pub fn remote_host(url: &str) -> Option<String> {
    let rest = if let Some((_, rest)) = url.split_once("://") {
        rest
    } else if let Some((userhost, _)) = url.split_once(':') {
        // scp-like: git@github.com:owner/repo.git
        return Some(
            userhost
                .rsplit('@')
                .next()
                .unwrap_or(userhost)
                .to_lowercase(),
        );
    } else {
        return None;
    };
    let authority = rest.split('/').next()?;
    let host = authority.rsplit('@').next()?;
    let host = host.split(':').next()?;
    (!host.is_empty()).then(|| host.to_lowercase())
}

fn top_keys(yaml_like: &str) -> Vec<String> {
    yaml_like
        .lines()
        .filter(|l| !l.starts_with(' ') && !l.starts_with('#') && !l.starts_with('-'))
        .filter_map(|l| l.split_once(':').map(|(k, _)| k.trim().to_string()))
        .collect()
}

fn cff_complete(text: &str) -> bool {
    let keys = top_keys(text);
    let has = |k: &str| keys.iter().any(|x| x == k);
    has("cff-version") && has("message") && has("title") && has("authors") && (has("version") || has("date-released"))
}

fn codemeta_complete(text: &str) -> bool {
    let Ok(v) = serde_json::from_str::<serde_json::Value>(text) else {
        return false;
    };
    let present = |k: &str| match v.get(k) {
        Some(serde_json::Value::String(s)) => !s.is_empty(),
        Some(serde_json::Value::Array(a)) => !a.is_empty(),
        Some(serde_json::Value::Object(_)) => true,
        _ => false,
    };
    present("name") && present("author") && present("version") && present("license")
}

struct Scan<'a> {
    tree: &'a RepoTree,
}

impl<'a> Scan<'a> {
    fn root_file(&self, names: &[&str]) -> Option<&'a String> {
        self.tree.first_in("", |n| names.contains(&n))
    }

    fn root_stem(&self, stems: &[&str]) -> Option<&'a String> {
        self.tree.first_in("", |n| stems.contains(&stem(n)))
    }

    fn doc_stem(&self, stems: &[&str]) -> Option<&'a String> {
        self.tree
            .any_in(&["", ".github", "docs", "doc", ".gitlab"], |n| stems.contains(&stem(n)))
    }
}

/// Scans a local directory. A directory without version control is not an
/// error; it just yields `vcs_present = false`.
pub fn scan_local_repository(path: &Path, retrieved_at: &str) -> io::Result<EvidenceSet> {
    let tree = RepoTree::scan(path)?;
    let mut set = EvidenceSet::new(path.display().to_string());
    let mut rec = Recorder {
        set: &mut set,
        collector: COLLECTOR,
        retrieved_at: retrieved_at.to_string(),
    };
    let s = Scan { tree: &tree };
    let here = path.display().to_string();
    let src = |rel: &str| format!("{}/{}", here, rel);

    // Version control.
    let git = git_dir(path);
    rec.put("vcs_present", git.is_some(), &src(".git"));
    let tags = git.as_deref().map(collect_tags).unwrap_or_default();
    let semver_count = tags.iter().filter(|t| is_semver(t)).count();
    let fraction = if tags.is_empty() {
        0.0
    } else {
        semver_count as f64 / tags.len() as f64
    };
    rec.put("semver_tags_fraction", fraction, &src(".git/refs/tags"));
    rec.put("tag_list", tags, &src(".git/refs/tags"));
    let remote = git
        .as_deref()
        .and_then(|g| fs::read_to_string(g.join("config")).ok())
        .and_then(|c| remote_url_from_config(&c));
    rec.put("remote_url_present", remote.is_some(), &src(".git/config"));
    let forge = remote
        .as_deref()
        .and_then(remote_host)
        .is_some_and(|h| is_forge_host(&h));
    rec.put("forge_hosted", forge, &src(".git/config"));
    if let Some(url) = &remote {
        rec.put("remote_url", url.as_str(), &src(".git/config"));
    }

    // Files and layout.
    rec.put("file_count", tree.files.len(), &here);
    let source_files = tree.files.iter().any(|f| {
        f.rsplit_once('.')
            .is_some_and(|(_, ext)| SOURCE_EXTENSIONS.contains(&ext.to_lowercase().as_str()))
    });
    rec.put("source_files_present", source_files, &here);
    let dirs: Vec<String> = CONVENTIONAL_DIRS
        .iter()
        .filter(|d| tree.has_dir(d))
        .map(|d| d.to_string())
        .collect();
    rec.put("conventional_dirs", dirs, &here);

    let readme = s.root_stem(&["readme"]).cloned();
    rec.put("readme_present", readme.is_some(), &src(readme.as_deref().unwrap_or("README")));
    let readme_text = readme.as_deref().and_then(|r| tree.read(r)).unwrap_or_default();

    let contributing = s.doc_stem(&["contributing"]).cloned();
    rec.put(
        "contributing_present",
        contributing.is_some(),
        &src(contributing.as_deref().unwrap_or("CONTRIBUTING")),
    );
    let contributing_text = contributing.as_deref().and_then(|r| tree.read(r)).unwrap_or_default();

    // Licenses.
    let mut license_files: Vec<String> = tree
        .files_in("", |n| ["license", "licence", "copying"].contains(&stem(n)) || n.starts_with("license-") || n.starts_with("licence-"))
        .into_iter()
        .cloned()
        .collect();
    license_files.extend(tree.files_in("LICENSES", |_| true)
        .into_iter()
        .cloned());
    let mut license_ids: Vec<String> = Vec::new();
    for f in &license_files {
        let id = match f.strip_prefix("LICENSES/") {
            Some(name) => Some(name.rsplit_once('.').map_or(name, |(s, _)| s).to_string()),
            None => tree.read(f).and_then(|t| licenses::identify_license_text(&t)),
        };
        if let Some(id) = id {
            if !license_ids.contains(&id) {
                license_ids.push(id);
            }
        }
    }
    license_ids.sort();
    rec.put("license_spdx_ids", license_ids, &here);
    rec.put("license_files", license_files, &here);

    // Citation metadata.
    let cff = s.root_file(&["citation.cff"]).cloned();
    let codemeta = s.root_file(&["codemeta.json"]).cloned();
    let unstructured = s.root_stem(&["citation"]).is_some()
        || Regex::new(r"(?im)^#+\s*(citation|citing|how to cite|cite)\b")
            .unwrap()
            .is_match(&readme_text);
    let cff_text = cff.as_deref().and_then(|f| tree.read(f));
    let codemeta_text = codemeta.as_deref().and_then(|f| tree.read(f));
    let (kind, kind_src) = if cff.is_some() {
        ("citation-file", cff.clone().unwrap())
    } else if codemeta.is_some() {
        ("codemeta", codemeta.clone().unwrap())
    } else if unstructured {
        ("unstructured", readme.clone().unwrap_or_else(|| "CITATION".into()))
    } else {
        ("none", String::new())
    };
    rec.put("citation_metadata_kind", kind, &src(&kind_src));
    let complete = cff_text.as_deref().is_some_and(cff_complete)
        || codemeta_text.as_deref().is_some_and(codemeta_complete);
    rec.put("citation_metadata_complete", complete, &src(&kind_src));

    // Declared identifiers.
    let metadata_text = [cff_text.as_deref(), codemeta_text.as_deref()]
        .into_iter()
        .flatten()
        .collect::<Vec<_>>()
        .join("\n");
    let declared_doi = DOI
        .captures(&metadata_text)
        .or_else(|| DOI.captures(&readme_text))
        .map(|c| c[1].trim_end_matches(['.', ',']).to_string());
    let handle = HANDLE_URL
        .captures(&metadata_text)
        .map(|c| c[1].to_string());
    let declared_url = Regex::new(r"(?m)^(repository-code|url)\s*:\s*\S+")
        .unwrap()
        .is_match(cff_text.as_deref().unwrap_or(""))
        || codemeta_text
            .as_deref()
            .and_then(|t| serde_json::from_str::<serde_json::Value>(t).ok())
            .is_some_and(|v| v.get("codeRepository").is_some() || v.get("url").is_some());
    let id_kind = if declared_doi.is_some() {
        "doi"
    } else if handle.is_some() {
        "handle"
    } else if declared_url {
        "url"
    } else {
        "none"
    };
    rec.put("declared_identifier_kind", id_kind, &here);
    if let Some(doi) = declared_doi {
        rec.put("declared_doi", doi, &here);
    }

    // Continuous integration.
    let mut ci_files: Vec<String> = tree
        .files
        .iter()
        .filter(|f| {
            let lower = f.to_lowercase();
            (lower.starts_with(".github/workflows/") && (lower.ends_with(".yml") || lower.ends_with(".yaml")))
                || lower.starts_with(".circleci/")
                || lower.starts_with(".woodpecker/")
                || CI_FILES.contains(&lower.as_str())
        })
        .cloned()
        .collect();
    ci_files.sort();
    let ci_text = ci_files
        .iter()
        .filter_map(|f| tree.read(f))
        .collect::<Vec<_>>()
        .join("\n")
        .to_lowercase();
    let ci_src = ci_files.first().map(|f| src(f)).unwrap_or_else(|| here.clone());
    rec.put("ci_config_present", !ci_files.is_empty(), &ci_src);
    for (id, words) in CI_KEYWORDS {
        rec.put(id, words.iter().any(|w| ci_text.contains(w)), &ci_src);
    }

    // Build, install and packaging.
    let install_script = s.root_file(INSTALL_SCRIPTS).is_some()
        || tree.first_in("scripts", |n| stem(n) == "install").is_some();
    rec.put("install_script_present", install_script, &here);
    let install_doc = s.root_stem(&["install", "installation"]).is_some()
        || tree.first_in("docs", |n| stem(n).starts_with("install")).is_some()
        || tree.first_in("doc", |n| stem(n).starts_with("install")).is_some()
        || INSTALL_HEADING.is_match(&readme_text);
    rec.put("install_doc_present", install_doc, &here);
    let pyproject_build = s
        .root_file(&["pyproject.toml"])
        .and_then(|f| tree.read(f))
        .is_some_and(|t| t.contains("[build-system]"));
    rec.put("build_script_present", s.root_file(BUILD_SCRIPTS).is_some() || pyproject_build, &here);
    rec.put("package_manifest_present", s.root_file(MANIFESTS).is_some(), &here);
    rec.put("lockfile_present", s.root_file(LOCKFILES).is_some(), &here);
    let container = s.root_file(&["dockerfile", "containerfile", "docker-compose.yml", "docker-compose.yaml", "compose.yaml", "compose.yml", "singularity", "apptainer"]).is_some()
        || tree.first_in("", |n| n.ends_with(".dockerfile") || n.ends_with(".def")).is_some()
        || tree.has_dir(".devcontainer");
    rec.put("container_recipe_present", container, &here);

    // Documentation.
    let changelog = s.doc_stem(&["changelog", "changes", "history", "news", "release_notes", "release-notes"]).cloned();
    rec.put("changelog_present", changelog.is_some(), &src(changelog.as_deref().unwrap_or("CHANGELOG")));
    let changelog_text = changelog.as_deref().and_then(|f| tree.read(f)).unwrap_or_default();
    let tests = ["test", "tests", "spec", "__tests__", "testing", "src/test", "src/tests"]
        .iter()
        .any(|d| tree.has_dir(d));
    rec.put("test_dir_present", tests, &here);
    let mentions_semver = |t: &str| {
        let l = t.to_lowercase();
        l.contains("semantic versioning") || l.contains("semver.org")
    };
    let versioning_doc = s.doc_stem(&["versioning"]).is_some()
        || [&changelog_text, &contributing_text, &readme_text]
            .iter()
            .any(|t| mentions_semver(t));
    rec.put("versioning_doc_present", versioning_doc, &here);
    let release_doc = s.doc_stem(&["release", "releasing", "releases", "release_process", "release-process"]).is_some()
        || RELEASE_HEADING.is_match(&contributing_text)
        || RELEASE_HEADING.is_match(&readme_text);
    rec.put("release_doc_present", release_doc, &here);
    let support_doc = s.doc_stem(&["support"]).is_some() || SUPPORT_HEADING.is_match(&readme_text);
    rec.put("support_doc_present", support_doc, &here);

    let contact_sources: Vec<String> = tree
        .files_in("", |n| {
            ["readme", "citation", "codemeta", "contributing", "support", "authors", "maintainers", "pyproject", "package", "cargo", "description", "setup"]
                .contains(&stem(n))
        })
        .into_iter()
        .cloned()
        .collect();
    let contact = contact_sources
        .iter()
        .filter_map(|f| tree.read(f))
        .any(|t| EMAIL.is_match(&t));
    rec.put("contact_present", contact, &here);

    let pyproject_style = s
        .root_file(&["pyproject.toml"])
        .and_then(|f| tree.read(f))
        .is_some_and(|t| ["[tool.ruff", "[tool.black", "[tool.pylint", "[tool.isort", "[tool.flake8"].iter().any(|k| t.contains(k)));
    rec.put("style_config_present", s.root_file(STYLE_CONFIGS).is_some() || pyproject_style, &here);

    let pr_template = tree.files.iter().any(|f| {
        let l = f.to_lowercase();
        let name = l.rsplit('/').next().unwrap_or(&l);
        stem(name) == "pull_request_template"
            || l.starts_with(".github/pull_request_template/")
            || l.starts_with(".gitlab/merge_request_templates/")
    });
    rec.put("pr_template_present", pr_template, &here);

    let dep_updates = tree.files.iter().any(|f| {
        let l = f.to_lowercase();
        matches!(
            l.as_str(),
            ".github/dependabot.yml" | ".github/dependabot.yaml" | "renovate.json" | "renovate.json5"
                | ".renovaterc" | ".renovaterc.json" | ".github/renovate.json" | ".gitlab/renovate.json"
        )
    });
    rec.put("dependency_update_config_present", dep_updates, &here);

    Ok(set)
}
