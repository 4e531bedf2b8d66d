//! Command line front end.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qind_core::markdown::{render_assessment, render_rubric, render_summary};
use qind_core::{
    batch_summary, render_radar, Assessment, OverallMode, RadarConfig, Rational,
    Rubric, TargetKind, WeightScheme,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checks::CheckConfig;
use crate::collectors::registry::RegistryConfig;
use crate::formats::{
    emit_json, load_answers, load_manifest, load_weights, parse_report, read_file, resolve_rubric,
    rubric_to_json, validate_with_known_checks, write_output, FormatError, ManifestKind,
    TOOL_VERSION,
};
use crate::net::{Cache, Endpoints, Fetcher, HttpTransport};
use crate::pipeline::{run_assessment, Outcome, RunContext, Target, TargetOptions};
use crate::verdicts::ManualAnswers;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_BELOW_MINIMUM: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NETWORK: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "qind", version, about = "Maturity-based quality indicator for research data and software publications")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Assess a single target.
    Assess(AssessArgs),
    /// Assess every target of a manifest and summarize the corpus.
    Batch(BatchArgs),
    /// Show or validate a rubric.
    Rubric {
        #[command(subcommand)]
        action: RubricAction,
    },
    /// Re-render a radar plot from saved JSON reports.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Path,
    Url,
    Pid,
}

impl From<KindArg> for ManifestKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Path => ManifestKind::Path,
            KindArg::Url => ManifestKind::Url,
            KindArg::Pid => ManifestKind::Pid,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OverallArg {
    None,
    Threshold,
    Weighted,
}

impl From<OverallArg> for OverallMode {
    fn from(o: OverallArg) -> Self {
        match o {
            OverallArg::None => OverallMode::None,
            OverallArg::Threshold => OverallMode::Threshold,
            OverallArg::Weighted => OverallMode::Weighted,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PublicationArg {
    Data,
    Software,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CollectorConfig {
    pub checks: CheckConfig,
    pub registry: RegistryConfig,
}

/// Options shared by `assess` and `batch`.
#[derive(Debug, Args)]
pub struct RunArgs {
    /// Built-in rubric id (pocme, fairst) or path to a rubric file.
    #[arg(long)]
    pub rubric: String,
    /// Weights and minimums file; defaults come from the rubric.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    /// Never touch the network; remote facts come from the cache or stay unknown.
    #[arg(long, env = "QIND_OFFLINE")]
    pub offline: bool,
    #[arg(long, env = "QIND_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Days before a cached response is refetched when online.
    #[arg(long, default_value_t = 30)]
    pub cache_ttl_days: u32,
    #[arg(long, value_enum, default_value = "none")]
    pub overall: OverallArg,
    /// Require scores strictly above the minimums.
    #[arg(long)]
    pub strict_minimums: bool,
    /// Timestamp recorded in the assessment (RFC 3339). Defaults to
    /// SOURCE_DATE_EPOCH when set, otherwise the current time.
    #[arg(long)]
    pub timestamp: Option<String>,
    /// Publication type; inferred from the rubric by default.
    #[arg(long, value_enum)]
    pub publication: Option<PublicationArg>,
    /// JSON file with check cutoffs and registry eligibility.
    #[arg(long)]
    pub collector_config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AssessArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Local repository directory.
    #[arg(long, group = "locator")]
    pub repo: Option<PathBuf>,
    /// DOI or handle.
    #[arg(long, group = "locator")]
    pub pid: Option<String>,
    /// Remote repository or landing page URL.
    #[arg(long, group = "locator")]
    pub url: Option<String>,
    /// Any locator; its type is inferred unless --kind is given.
    #[arg(long, group = "locator")]
    pub target: Option<String>,
    #[arg(long, value_enum, requires = "target")]
    pub kind: Option<KindArg>,
    /// Manual answers file.
    #[arg(long)]
    pub answers: Option<PathBuf>,
    #[arg(long)]
    pub label: Option<String>,
    /// Percentage score from an external FAIR assessment tool.
    #[arg(long)]
    pub external_score: Option<String>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub markdown: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    /// JSON list of targets: [{kind, locator, answers?, label?, rubric?}].
    pub manifest: PathBuf,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Number of targets assessed concurrently.
    #[arg(long, default_value_t = 4)]
    pub jobs: usize,
}

#[derive(Debug, Subcommand)]
pub enum RubricAction {
    /// Print the rubric's level tables.
    Show {
        rubric: String,
        #[arg(long, value_enum, default_value = "markdown")]
        format: ShowFormat,
    },
    /// Print validation findings.
    Validate { rubric: String },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ShowFormat {
    Markdown,
    Json,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// One or more JSON reports, overlaid in order.
    #[arg(long = "report", required = true)]
    pub reports: Vec<PathBuf>,
    #[arg(long)]
    pub svg: PathBuf,
    /// Needed when the reports use a custom rubric.
    #[arg(long)]
    pub rubric: Option<String>,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

type Res<T> = Result<T, Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: e.to_string(),
    }
}

/// Resolves the assessment timestamp: explicit value, then
/// SOURCE_DATE_EPOCH, then the current time.
pub fn resolve_timestamp(explicit: Option<&str>) -> Result<String, String> {
    use chrono::{DateTime, SecondsFormat, Utc};
    if let Some(t) = explicit {
        return DateTime::parse_from_rfc3339(t)
            .map(|d| d.with_timezone(&Utc).to_rfc3339_opts(SecondsFormat::Secs, true))
            .map_err(|e| format!("--timestamp `{t}`: {e}"));
    }
    if let Ok(epoch) = std::env::var("SOURCE_DATE_EPOCH") {
        let secs: i64 = epoch
            .trim()
            .parse()
            .map_err(|_| format!("SOURCE_DATE_EPOCH `{epoch}` is not an integer"))?;
        let d = DateTime::<Utc>::from_timestamp(secs, 0)
            .ok_or_else(|| format!("SOURCE_DATE_EPOCH `{epoch}` is out of range"))?;
        return Ok(d.to_rfc3339_opts(SecondsFormat::Secs, true));
    }
    Ok(Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true))
}

struct Prepared {
    rubric: Rubric,
    weights: WeightScheme,
    mode: OverallMode,
    publication: Option<TargetKind>,
    ctx: RunContext,
}

fn prepare(run: &RunArgs) -> Res<Prepared> {
    let rubric = resolve_rubric(&run.rubric).map_err(input)?;
    let mut weights = match &run.weights {
        Some(p) => load_weights(&read_file(p).map_err(input)?).map_err(input)?,
        None => WeightScheme::defaults(&rubric),
    };
    if run.strict_minimums {
        weights.strict_minimums = true;
    }
    let weights = weights.resolve(&rubric).map_err(input)?;
    let config: CollectorConfig = match &run.collector_config {
        Some(p) => serde_json::from_str(&read_file(p).map_err(input)?)
            .map_err(|e| input(format!("collector config: {e}")))?,
        None => CollectorConfig::default(),
    };
    let cache = run.cache_dir.as_ref().map(|d| Cache {
        dir: d.clone(),
        ttl_days: run.cache_ttl_days,
    });
    let fetcher = if run.offline {
        Fetcher::offline(cache)
    } else {
        Fetcher::new(Arc::new(HttpTransport::new()), cache, false)
    };
    let timestamp = resolve_timestamp(run.timestamp.as_deref()).map_err(input)?;
    Ok(Prepared {
        rubric,
        weights,
        mode: run.overall.into(),
        publication: run.publication.map(|p| match p {
            PublicationArg::Data => TargetKind::Data,
            PublicationArg::Software => TargetKind::Software,
        }),
        ctx: RunContext {
            fetcher,
            endpoints: Endpoints::from_env(),
            checks: config.checks,
            registry: config.registry,
            timestamp,
        },
    })
}

fn read_answers(path: Option<&Path>) -> Res<Option<ManualAnswers>> {
    path.map(|p| load_answers(&read_file(p).map_err(input)?).map_err(input))
        .transpose()
}

fn radar_svg(rubric: &Rubric, assessments: &[Assessment]) -> Res<String> {
    let first = &assessments[0];
    let minimums: Vec<Rational> = first.dimension_scores.iter().map(|s| s.minimum).collect();
    let config = RadarConfig {
        minimums: minimums.iter().any(|m| *m > Rational::ZERO).then_some(minimums),
        ..RadarConfig::default()
    };
    let chart = render_radar(rubric, assessments, &config).map_err(input)?;
    for w in &chart.warnings {
        eprintln!("warning: {w}");
    }
    Ok(chart.svg)
}

fn write(path: &Path, text: &str) -> Res<()> {
    write_output(path, text).map_err(input)
}

fn report_failures(outcome: &Outcome) {
    if let Some(ev) = &outcome.report.evidence {
        for f in &ev.failures {
            eprintln!("note: {}: {}", f.collector, f.reason);
        }
    }
}

fn cmd_assess(args: &AssessArgs) -> Res<u8> {
    let p = prepare(&args.run)?;
    let target = if let Some(path) = &args.repo {
        Target::infer(&path.display().to_string(), Some(ManifestKind::Path))
    } else if let Some(pid) = &args.pid {
        Target::infer(pid, Some(ManifestKind::Pid))
    } else if let Some(url) = &args.url {
        Target::infer(url, Some(ManifestKind::Url))
    } else if let Some(t) = &args.target {
        Target::infer(t, args.kind.map(Into::into))
    } else {
        return Err(input("one of --repo, --pid, --url or --target is required"));
    }
    .map_err(input)?;
    let answers = read_answers(args.answers.as_deref())?;
    let external_score = args
        .external_score
        .as_deref()
        .map(|s| s.parse::<Rational>().map_err(|e| input(format!("--external-score `{s}`: {e}"))))
        .transpose()?;
    let options = TargetOptions {
        publication: p.publication,
        label: args.label.clone(),
        external_score,
    };
    let outcome = run_assessment(&p.rubric, &target, answers.as_ref(), &p.weights, p.mode, &options, &p.ctx)
        .map_err(input)?;
    report_failures(&outcome);
    let a = outcome.assessment();
    let markdown = render_assessment(&p.rubric, a, TOOL_VERSION);
    if let Some(path) = &args.json {
        write(path, &emit_json(&outcome.report))?;
    }
    if let Some(path) = &args.markdown {
        write(path, &markdown)?;
    }
    if let Some(path) = &args.svg {
        write(path, &radar_svg(&p.rubric, std::slice::from_ref(a))?)?;
    }
    if args.json.is_none() && args.markdown.is_none() && args.svg.is_none() {
        let _ = std::io::stdout().write_all(markdown.as_bytes());
    }
    Ok(if outcome.network_failures {
        EXIT_NETWORK
    } else if a.passes_all_minimums {
        EXIT_PASS
    } else {
        EXIT_BELOW_MINIMUM
    })
}

fn slug(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('-') {
            out.push('-');
        }
    }
    let out = out.trim_matches('-');
    let cut: String = out.chars().rev().take(48).collect::<Vec<_>>().into_iter().rev().collect();
    if cut.is_empty() {
        "target".into()
    } else {
        cut.trim_matches('-').to_string()
    }
}

fn cmd_batch(args: &BatchArgs) -> Res<u8> {
    let p = prepare(&args.run)?;
    let manifest_text = read_file(&args.manifest).map_err(input)?;
    let base = args
        .manifest
        .parent()
        .filter(|b| !b.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let entries = load_manifest(&manifest_text, base).map_err(input)?;

    let mixed: Vec<String> = entries
        .iter()
        .filter_map(|e| e.rubric.as_deref())
        .filter_map(|r| match resolve_rubric(r) {
            Ok(rub) if rub.id == p.rubric.id => None,
            Ok(rub) => Some(rub.id),
            Err(_) => Some(r.to_string()),
        })
        .collect();
    if !mixed.is_empty() {
        return Err(input(format!(
            "manifest mixes rubrics: batch uses `{}`, entries use {}",
            p.rubric.id,
            mixed.join(", ")
        )));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.max(1))
        .build()
        .map_err(input)?;
    let results: Vec<Result<Outcome, String>> = pool.install(|| {
        entries
            .par_iter()
            .map(|e| {
                let target = Target::infer(&e.locator, Some(e.kind)).map_err(|x| x.to_string())?;
                let answers = match &e.answers {
                    Some(path) => Some(
                        read_file(path)
                            .and_then(|t| load_answers(&t))
                            .map_err(|x: FormatError| x.to_string())?,
                    ),
                    None => None,
                };
                let options = TargetOptions {
                    publication: p.publication,
                    label: e.label.clone(),
                    external_score: None,
                };
                run_assessment(&p.rubric, &target, answers.as_ref(), &p.weights, p.mode, &options, &p.ctx)
                    .map_err(|x| format!("{}: {x}", e.locator))
            })
            .collect()
    });

    let mut outcomes = Vec::with_capacity(results.len());
    let mut errors = Vec::new();
    for r in results {
        match r {
            Ok(o) => outcomes.push(o),
            Err(e) => errors.push(e),
        }
    }
    if !errors.is_empty() {
        return Err(input(errors.join("\n")));
    }

    let targets_dir = args.out_dir.join("targets");
    for (i, o) in outcomes.iter().enumerate() {
        report_failures(o);
        let a = o.assessment();
        let name = format!("{:03}-{}", i + 1, slug(a.target.display_label()));
        write(&targets_dir.join(format!("{name}.json")), &emit_json(&o.report))?;
        write(
            &targets_dir.join(format!("{name}.md")),
            &render_assessment(&p.rubric, a, TOOL_VERSION),
        )?;
    }
    let assessments: Vec<Assessment> = outcomes.into_iter().map(|o| o.report.assessment).collect();
    let summary = batch_summary(&assessments, &p.weights).map_err(input)?;
    let mut json = serde_json::to_string_pretty(&summary).map_err(input)?;
    json.push('\n');
    write(&args.out_dir.join("summary.json"), &json)?;
    write(&args.out_dir.join("summary.md"), &render_summary(&summary))?;
    if !assessments.is_empty() {
        write(&args.out_dir.join("radar.svg"), &radar_svg(&p.rubric, &assessments)?)?;
    }
    println!(
        "{} of {} targets meet every minimum",
        summary.totals.passing, summary.totals.total
    );
    Ok(EXIT_PASS)
}

fn cmd_rubric(action: &RubricAction) -> Res<u8> {
    match action {
        RubricAction::Show { rubric, format } => {
            let r = resolve_rubric(rubric).map_err(input)?;
            let text = match format {
                ShowFormat::Markdown => render_rubric(&r),
                ShowFormat::Json => rubric_to_json(&r),
            };
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(EXIT_PASS)
        }
        RubricAction::Validate { rubric } => {
            let r = match qind_core::builtin_rubric(rubric) {
                Ok(r) => r,
                Err(_) => {
                    let path = Path::new(rubric);
                    if !path.exists() {
                        return Err(input(format!("unknown rubric `{rubric}`")));
                    }
                    let text = read_file(path).map_err(input)?;
                    match serde_json::from_str::<Rubric>(&text) {
                        Ok(r) => r,
                        Err(e) => {
                            println!("error: {}: {e}", path.display());
                            return Ok(EXIT_BELOW_MINIMUM);
                        }
                    }
                }
            };
            let report = validate_with_known_checks(&r);
            print!("{report}");
            if report.findings.is_empty() {
                println!("rubric `{}` is valid", r.id);
            }
            Ok(if report.has_errors() { 1 } else { EXIT_PASS })
        }
    }
}

fn cmd_render(args: &RenderArgs) -> Res<u8> {
    let mut reports = Vec::new();
    for path in &args.reports {
        reports.push(parse_report(&read_file(path).map_err(input)?).map_err(input)?);
    }
    let assessments: Vec<Assessment> = reports.into_iter().map(|r| r.assessment).collect();
    let id = qind_core::scoring::shared_rubric(&assessments)
        .map_err(input)?
        .map(str::to_string);
    let reference = args.rubric.clone().or(id).ok_or_else(|| input("no reports given"))?;
    let rubric = resolve_rubric(&reference).map_err(input)?;
    write(&args.svg, &radar_svg(&rubric, &assessments)?)?;
    Ok(EXIT_PASS)
}

pub fn run(cli: Cli) -> u8 {
    let result = match &cli.command {
        Command::Assess(a) => cmd_assess(a),
        Command::Batch(b) => cmd_batch(b),
        Command::Rubric { action } => cmd_rubric(action),
        Command::Render(r) => cmd_render(r),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

pub fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()))
}
