mod common;

use std::fs;

use common::*;
use qind::formats::parse_report;

#[test]
fn assess_golden_repo_passes_and_draws_six_axes() {
    let fx = materialize();
    let out = tempfile::tempdir().unwrap();
    let svg = out.path().join("out.svg");
    let (code, _, err) = run(qind()
        .args(["assess", "--rubric", "fairst", "--offline", "--timestamp", TS, "--repo"])
        .arg(fx.path().join("golden-repo"))
        .arg("--answers")
        .arg(fx.path().join("golden-answers.json"))
        .arg("--cache-dir")
        .arg(fx.path().join("cache"))
        .arg("--svg")
        .arg(&svg));
    assert_eq!(code, 0, "{err}");
    let svg = fs::read_to_string(svg).unwrap();
    assert_eq!(svg.matches("<line class=\"axis\"").count(), 6);
}

#[test]
fn assess_prints_markdown_without_outputs() {
    let fx = materialize();
    let (code, stdout, _) = run(qind()
        .args(["assess", "--rubric", "fairst", "--offline", "--timestamp", TS, "--repo"])
        .arg(fx.path().join("corpus/minimal-repo")));
    assert_eq!(code, 0);
    assert!(stdout.contains("| "), "{stdout}");
    assert!(stdout.contains("Versioning"));
}

#[test]
fn unresolvable_pid_offline_still_produces_an_assessment() {
    let out = tempfile::tempdir().unwrap();
    let json = out.path().join("r.json");
    let (code, _, err) = run(qind()
        .args(["assess", "--rubric", "pocme", "--pid", "10.9999/does-not-exist", "--offline"])
        .args(["--timestamp", TS, "--json"])
        .arg(&json));
    assert!(code == 0 || code == 1, "{code}: {err}");
    let report = parse_report(&fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(report.assessment.ratings.len(), 9);
    let ev = report.evidence.expect("evidence embedded");
    assert!(ev.value("resolves_globally").is_none());
    assert!(!ev.failures.is_empty());
}

#[test]
fn minimums_not_met_exit_one() {
    let fx = materialize();
    let (code, _, _) = run(qind()
        .args(["assess", "--rubric", "fairst", "--offline", "--timestamp", TS, "--repo"])
        .arg(fx.path().join("corpus/partial-repo"))
        .arg("--weights")
        .arg(fx.path().join("corpus/weights.json"))
        .arg("--json")
        .arg(fx.path().join("p.json")));
    assert_eq!(code, 1);
}

#[test]
fn unknown_attribute_in_answers_exits_two_naming_it() {
    let fx = materialize();
    let (code, _, err) = run(qind()
        .args(["assess", "--rubric", "fairst", "--offline", "--timestamp", TS, "--repo"])
        .arg(fx.path().join("golden-repo"))
        .arg("--answers")
        .arg(fx.path().join("answers-unknown.json")));
    assert_eq!(code, 2);
    assert!(err.contains("coffee_supply"), "{err}");
}

#[test]
fn missing_target_and_missing_path_are_input_errors() {
    let (code, _, _) = run(qind().args(["assess", "--rubric", "fairst", "--offline"]));
    assert_eq!(code, 2);
    let (code, _, _) = run(qind().args(["assess", "--rubric", "fairst", "--offline", "--repo", "/nonexistent/qind"]));
    assert_eq!(code, 2);
    let (code, _, _) = run(qind().args(["assess", "--rubric", "nope", "--offline", "--repo", "."]));
    assert_eq!(code, 2);
}

#[test]
fn batch_empty_manifest_gives_zero_totals() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("m.json");
    fs::write(&manifest, "[]").unwrap();
    let out = dir.path().join("out");
    let (code, stdout, err) = run(qind()
        .args(["batch", "--rubric", "fairst", "--offline", "--timestamp", TS])
        .arg(&manifest)
        .arg("--out-dir")
        .arg(&out));
    assert_eq!(code, 0, "{err}");
    assert!(stdout.contains("0 of 0"));
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["totals"]["passing"], 0);
    assert_eq!(summary["totals"]["total"], 0);
    assert_eq!(summary["distributions"].as_array().unwrap().len(), 0);
}

fn batch_corpus(weights: &str) -> (std::path::PathBuf, tempfile::TempDir) {
    let fx = materialize();
    let out = fx.path().join("out");
    let (code, _, err) = run(qind()
        .args(["batch", "--rubric", "fairst", "--offline", "--timestamp", TS, "--jobs", "2"])
        .arg(fx.path().join("corpus/manifest.json"))
        .arg("--weights")
        .arg(fx.path().join("corpus").join(weights))
        .arg("--cache-dir")
        .arg(fx.path().join("cache"))
        .arg("--out-dir")
        .arg(&out));
    assert_eq!(code, 0, "{err}");
    (out, fx)
}

#[test]
fn batch_corpus_matches_hand_count() {
    let (out, fx) = batch_corpus("weights.json");
    let expected: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(fx.path().join("corpus/expected.json")).unwrap()).unwrap();
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["totals"]["passing"], expected["passing"]);
    assert_eq!(summary["totals"]["total"], expected["total"]);
    for f in summary["failing"].as_array().unwrap() {
        let label = f["label"].as_str().unwrap();
        assert_eq!(f["failing_dimensions"], expected["failing"][label], "{label}");
    }

    // Independent re-count over the per-target reports.
    let mut passing = 0;
    let mut total = 0;
    for entry in fs::read_dir(out.join("targets")).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "json") {
            let r = parse_report(&fs::read_to_string(&p).unwrap()).unwrap();
            total += 1;
            if r.assessment.dimension_scores.iter().all(|d| d.score >= d.minimum) {
                passing += 1;
            }
        }
    }
    assert_eq!((passing, total), (1, 3));
    assert!(out.join("radar.svg").exists());
    assert!(out.join("summary.md").exists());
}

#[test]
fn batch_with_zero_minimums_passes_everything() {
    let (out, _fx) = batch_corpus("weights-zero.json");
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["totals"]["passing"], 3);
    assert_eq!(summary["failing"].as_array().unwrap().len(), 0);
}

#[test]
fn batch_mixed_rubrics_exit_two() {
    let fx = materialize();
    let (code, _, err) = run(qind()
        .args(["batch", "--rubric", "fairst", "--offline", "--timestamp", TS])
        .arg(fx.path().join("corpus/mixed-manifest.json"))
        .arg("--cache-dir")
        .arg(fx.path().join("cache"))
        .arg("--out-dir")
        .arg(fx.path().join("out")));
    assert_eq!(code, 2, "{err}");
}

#[test]
fn batch_unreadable_manifest_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = run(qind()
        .args(["batch", "--rubric", "fairst", "--offline", "/nonexistent/m.json", "--out-dir"])
        .arg(dir.path()));
    assert_eq!(code, 2);
}

#[test]
fn rubric_show_pocme_has_five_sections_and_nine_tables() {
    let (code, stdout, _) = run(qind().args(["rubric", "show", "pocme"]));
    assert_eq!(code, 0);
    let sections = stdout.lines().filter(|l| l.starts_with("## ") && *l != "## Maturity scale");
    assert_eq!(sections.count(), 5);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("### ")).count(), 9);
}

#[test]
fn rubric_show_fairst_names_optimized() {
    let (code, stdout, _) = run(qind().args(["rubric", "show", "fairst"]));
    assert_eq!(code, 0);
    assert!(stdout.lines().any(|l| l.contains("Optimized")));
}

#[test]
fn rubric_show_json_round_trips() {
    let (code, stdout, _) = run(qind().args(["rubric", "show", "fairst", "--format", "json"]));
    assert_eq!(code, 0);
    let r = qind::formats::load_rubric(&stdout).unwrap();
    assert_eq!(r, qind_core::builtin_rubric("fairst").unwrap());
}

#[test]
fn rubric_validate_reports_findings() {
    let broken = fixtures().join("broken-rubric.json");
    let (code, out, _) = run(qind().args(["rubric", "validate"]).arg(&broken));
    assert_ne!(code, 0);
    assert!(out.contains("duplicate dimension id"), "{out}");
    assert!(out.contains("missing levels 4,5"), "{out}");

    let (code, _, _) = run(qind().args(["rubric", "validate", "pocme"]));
    assert_eq!(code, 0);
    let (code, _, _) = run(qind().args(["rubric", "validate", "no-such-rubric"]));
    assert_eq!(code, 2);
}

#[test]
fn render_rebuilds_the_svg_from_a_report() {
    let fx = materialize();
    let json = fx.path().join("g.json");
    let svg = fx.path().join("g.svg");
    let (code, _, _) = run(qind()
        .args(["assess", "--rubric", "fairst", "--offline", "--timestamp", TS, "--repo"])
        .arg(fx.path().join("golden-repo"))
        .arg("--answers")
        .arg(fx.path().join("golden-answers.json"))
        .arg("--json")
        .arg(&json)
        .arg("--svg")
        .arg(&svg));
    assert_eq!(code, 0);
    let again = fx.path().join("again.svg");
    let (code, _, err) = run(qind().args(["render", "--report"]).arg(&json).arg("--svg").arg(&again));
    assert_eq!(code, 0, "{err}");
    assert_eq!(fs::read(svg).unwrap(), fs::read(again).unwrap());
}
