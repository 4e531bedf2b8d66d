//! End-to-end assessment of one target: collect, derive, score, report.

use std::path::{Path, PathBuf};
use std::process::Command;

use qind_core::{
    assess, Assessment, OverallMode, Rational, Rubric, ScoringError, TargetDescriptor, TargetKind,
    WeightScheme, FAIRST_ID, POCME_ID,
};

use crate::checks::CheckConfig;
use crate::collectors::pid::{classify_identifier, fetch_pid_metadata, Identifier};
use crate::collectors::registry::{lookup_meta_repository, RegistryConfig};
use crate::collectors::{local, reuse};
use crate::evidence::{EvidenceSet, FactCollision, Recorder};
use crate::formats::{ManifestKind, Report};
use crate::net::{Endpoints, Fetcher};
use crate::verdicts::{derive_verdicts, AnswersError, ManualAnswers};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Answers(#[from] AnswersError),
    #[error(transparent)]
    Scoring(#[from] ScoringError),
    #[error(transparent)]
    Collision(#[from] FactCollision),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Path(PathBuf),
    Url(String),
    Pid(Identifier),
}

impl Target {
    /// Infers the target type from the locator unless `kind` is given:
    /// existing paths are scanned locally, DOIs and handles go to the PID
    /// collectors, other URLs to the remote repository and registry.
    pub fn infer(locator: &str, kind: Option<ManifestKind>) -> Result<Target, PipelineError> {
        let classify = |s: &str| classify_identifier(s).map_err(|e| PipelineError::Input(e.to_string()));
        match kind {
            Some(ManifestKind::Path) => Ok(Target::Path(PathBuf::from(locator))),
            Some(ManifestKind::Pid) => match classify(locator)? {
                Identifier::Url(u) => Err(PipelineError::Input(format!("`{u}` is a URL, not a PID"))),
                id => Ok(Target::Pid(id)),
            },
            Some(ManifestKind::Url) => match classify(locator)? {
                Identifier::Url(u) => Ok(Target::Url(u)),
                _ => Ok(Target::Url(locator.to_string())),
            },
            None => {
                if Path::new(locator).exists() {
                    return Ok(Target::Path(PathBuf::from(locator)));
                }
                match classify(locator)? {
                    Identifier::Url(u) => Ok(Target::Url(u)),
                    id => Ok(Target::Pid(id)),
                }
            }
        }
    }

    pub fn identifier(&self) -> String {
        match self {
            Target::Path(p) => p.display().to_string(),
            Target::Url(u) => u.clone(),
            Target::Pid(id) => id.to_string(),
        }
    }
}

/// Publication type implied by a rubric, if it is a built-in one.
pub fn publication_for_rubric(rubric_id: &str) -> Option<TargetKind> {
    match rubric_id {
        POCME_ID => Some(TargetKind::Data),
        FAIRST_ID => Some(TargetKind::Software),
        _ => None,
    }
}

#[derive(Clone)]
pub struct RunContext {
    pub fetcher: Fetcher,
    pub endpoints: Endpoints,
    pub checks: CheckConfig,
    pub registry: RegistryConfig,
    /// Stamped on the assessment and on every fact's provenance.
    pub timestamp: String,
}

impl RunContext {
    pub fn offline(&self) -> bool {
        self.fetcher.is_offline()
    }
}

#[derive(Debug, Clone, Default)]
pub struct TargetOptions {
    pub publication: Option<TargetKind>,
    pub label: Option<String>,
    /// Percentage from an external assessment tool.
    pub external_score: Option<Rational>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn scan_path(path: &Path, ctx: &RunContext, evidence: &mut EvidenceSet) -> Result<(), PipelineError> {
    evidence.merge(local::scan_local_repository(path, &ctx.timestamp).map_err(io_err(path))?)?;
    evidence.merge(reuse::check_reuse_compliance(path, &ctx.timestamp).map_err(io_err(path))?)?;
    Ok(())
}

fn fetch_pid(id: &Identifier, ctx: &RunContext, evidence: &mut EvidenceSet) -> Result<(), PipelineError> {
    evidence.merge(fetch_pid_metadata(id, &ctx.fetcher, &ctx.endpoints, &ctx.timestamp))?;
    Ok(())
}

fn lookup_registry(locator: &str, ctx: &RunContext, evidence: &mut EvidenceSet) -> Result<(), PipelineError> {
    evidence.merge(lookup_meta_repository(
        locator,
        &ctx.fetcher,
        &ctx.endpoints,
        &ctx.registry,
        &ctx.timestamp,
    ))?;
    Ok(())
}

fn clone_and_scan(url: &str, ctx: &RunContext, evidence: &mut EvidenceSet) -> Result<(), PipelineError> {
    if ctx.offline() {
        evidence.fail("clone", format!("offline, remote repository not scanned: {url}"), false);
        return Ok(());
    }
    let dir = tempfile::tempdir().map_err(io_err(Path::new("tempdir")))?;
    let status = Command::new("git")
        .args(["clone", "--quiet", "--depth", "1", "--no-single-branch", url])
        .arg(dir.path())
        .env("GIT_TERMINAL_PROMPT", "0")
        .status();
    match status {
        Ok(s) if s.success() => scan_path(dir.path(), ctx, evidence),
        Ok(s) => {
            evidence.fail("clone", format!("git clone {url} exited with {s}"), true);
            Ok(())
        }
        Err(e) => {
            evidence.fail("clone", format!("cannot run git: {e}"), true);
            Ok(())
        }
    }
}

/// Runs every collector applicable to `target`.
pub fn collect_evidence(
    target: &Target,
    publication: TargetKind,
    ctx: &RunContext,
) -> Result<EvidenceSet, PipelineError> {
    let mut evidence = EvidenceSet::new(target.identifier());
    match target {
        Target::Path(path) => {
            scan_path(path, ctx, &mut evidence)?;
            let declared = evidence
                .value("declared_doi")
                .and_then(|v| v.as_text())
                .map(str::to_string);
            if let Some(doi) = declared {
                if let Ok(id @ Identifier::Doi(_)) = classify_identifier(&doi) {
                    fetch_pid(&id, ctx, &mut evidence)?;
                }
            }
        }
        Target::Pid(id) => {
            fetch_pid(id, ctx, &mut evidence)?;
            if publication == TargetKind::Data {
                let locator = evidence
                    .value("repository_registry_locator")
                    .and_then(|v| v.as_text())
                    .map(str::to_string);
                if let Some(l) = locator {
                    lookup_registry(&l, ctx, &mut evidence)?;
                }
            }
        }
        Target::Url(url) => {
            fetch_pid(&Identifier::Url(url.clone()), ctx, &mut evidence)?;
            match publication {
                TargetKind::Software => clone_and_scan(url, ctx, &mut evidence)?,
                TargetKind::Data => lookup_registry(url, ctx, &mut evidence)?,
            }
        }
    }
    Ok(evidence)
}

pub struct Outcome {
    pub report: Report,
    pub network_failures: bool,
}

impl Outcome {
    pub fn assessment(&self) -> &Assessment {
        &self.report.assessment
    }
}

/// Collects evidence for `target`, overlays `answers` and scores the result.
pub fn run_assessment(
    rubric: &Rubric,
    target: &Target,
    answers: Option<&ManualAnswers>,
    weights: &WeightScheme,
    mode: OverallMode,
    options: &TargetOptions,
    ctx: &RunContext,
) -> Result<Outcome, PipelineError> {
    let publication = options
        .publication
        .or_else(|| publication_for_rubric(&rubric.id))
        .unwrap_or(match target {
            Target::Pid(_) => TargetKind::Data,
            _ => TargetKind::Software,
        });
    let empty = ManualAnswers::empty(&rubric.id);
    let answers = answers.unwrap_or(&empty);
    // Surface answer errors before any collector runs.
    crate::verdicts::validate_answers(rubric, answers)?;

    let mut evidence = collect_evidence(target, publication, ctx)?;
    if let Some(score) = options.external_score {
        if score < Rational::ZERO || score > Rational::from_integer(100) {
            return Err(PipelineError::Input(format!(
                "external score {} is outside 0..=100",
                score.to_f64()
            )));
        }
        let mut rec = Recorder {
            set: &mut evidence,
            collector: "input",
            retrieved_at: ctx.timestamp.clone(),
        };
        rec.put("external_fair_score", score.to_f64(), "command line");
    }

    let verdicts = derive_verdicts(rubric, &evidence, answers, &ctx.checks)?;
    let descriptor = TargetDescriptor {
        identifier: target.identifier(),
        kind: publication,
        rubric_id: rubric.id.clone(),
        timestamp: ctx.timestamp.clone(),
        label: options.label.clone(),
    };
    let assessment = assess(rubric, descriptor, &verdicts, weights, mode)?;
    let network_failures = !ctx.offline() && evidence.has_network_failures();
    Ok(Outcome {
        report: Report::new(rubric, assessment, Some(evidence)),
        network_failures,
    })
}
