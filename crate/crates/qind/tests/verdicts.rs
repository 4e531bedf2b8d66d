mod common;

use std::fs;
use std::sync::OnceLock;

use common::*;
use proptest::prelude::*;
use qind::checks::{evaluate_check, CheckConfig, CHECK_IDS};
use qind::collectors::pid::classify_identifier;
use qind::evidence::{EvidenceSet, Provenance};
use qind::formats::load_answers;
use qind::pipeline::{collect_evidence, Target};
use qind::verdicts::{derive_verdicts, Answer, AnswersError, ManualAnswers};
use qind_core::VerdictStatus::{Satisfied as S, Unknown as K, Unsatisfied as U};
use qind_core::{builtin_rubric, rate_attribute, Rubric, TargetKind, VerdictSource, VerdictStatus};

fn statuses(rubric: &Rubric, ev: &EvidenceSet, answers: &ManualAnswers, attr: &str) -> Vec<VerdictStatus> {
    let map = derive_verdicts(rubric, ev, answers, &CheckConfig::default()).unwrap();
    map[attr].iter().map(|v| v.status).collect()
}

#[test]
fn no_evidence_no_answers_is_all_unknown() {
    for id in ["pocme", "fairst"] {
        let r = builtin_rubric(id).unwrap();
        let map = derive_verdicts(&r, &EvidenceSet::new("t"), &ManualAnswers::empty(id), &CheckConfig::default()).unwrap();
        assert_eq!(map.len(), r.attribute_count());
        for (attr, vs) in map {
            assert_eq!(vs.len(), usize::from(r.max_level));
            assert!(vs.iter().all(|v| v.status == K), "{attr}");
            assert_eq!(rate_attribute(&attr, vs, r.max_level).unwrap().achieved_level, 0);
        }
    }
}

#[test]
fn explicit_level_overrides_every_level() {
    let r = builtin_rubric("fairst").unwrap();
    let mut answers = ManualAnswers::empty("fairst");
    answers
        .answers
        .insert("team_expertise".into(), Answer::explicit(2, "Two maintainers trained in the domain."));
    let map = derive_verdicts(&r, &EvidenceSet::new("t"), &answers, &CheckConfig::default()).unwrap();
    let vs = &map["team_expertise"];
    assert_eq!(vs.iter().map(|v| v.status).collect::<Vec<_>>(), [S, S, U, U, U]);
    assert!(vs.iter().all(|v| v.source == VerdictSource::Manual));
    assert!(vs[0].note.as_deref().unwrap().contains("Two maintainers"));
}

#[test]
fn semver_tags_and_scheme_doc_without_ci_give_versioning_three() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    fs::create_dir_all(root.join(".git/refs/tags")).unwrap();
    fs::write(root.join(".git/HEAD"), "ref: refs/heads/main\n").unwrap();
    for t in ["v0.9.0", "1.0.0-rc.1", "v1.0.0"] {
        fs::write(root.join(".git/refs/tags").join(t), "0".repeat(40)).unwrap();
    }
    fs::write(root.join("CHANGELOG.md"), "# Changelog\n\nThis project adheres to Semantic Versioning.\n").unwrap();
    fs::write(root.join("tool.py"), "x = 1\n").unwrap();

    let (ctx, _) = offline_context(None);
    let ev = collect_evidence(&Target::Path(root.to_path_buf()), TargetKind::Software, &ctx).unwrap();
    assert_eq!(ev.value("ci_config_present").and_then(|v| v.as_bool()), Some(false));
    let r = builtin_rubric("fairst").unwrap();
    let st = statuses(&r, &ev, &ManualAnswers::empty("fairst"), "versioning");
    assert_eq!(st, [S, S, S, U, U]);
}

#[test]
fn statement_answers_cover_only_manual_levels() {
    let r = builtin_rubric("fairst").unwrap();
    let answers = load_answers(
        r#"{"rubric": "fairst", "answers": {"code_structure": {"statements": {"2": true}, "justification": "Modules split by concern."}}}"#,
    )
    .unwrap();
    let map = derive_verdicts(&r, &EvidenceSet::new("t"), &answers, &CheckConfig::default()).unwrap();
    let vs = &map["code_structure"];
    assert_eq!(vs[1].status, S);
    assert_eq!(vs[1].source, VerdictSource::Manual);
    assert_eq!(vs[0].status, K);
    assert_eq!(vs[0].source, VerdictSource::Auto);
}

#[test]
fn unknown_attribute_is_an_input_error() {
    let r = builtin_rubric("fairst").unwrap();
    let text = fs::read_to_string(fixtures().join("answers-unknown.json")).unwrap();
    let answers = load_answers(&text).unwrap();
    let err = derive_verdicts(&r, &EvidenceSet::new("t"), &answers, &CheckConfig::default()).unwrap_err();
    assert!(matches!(err, AnswersError::UnknownAttributes(ref ids) if ids == &["coffee_supply"]));
    assert!(err.to_string().contains("coffee_supply"));
}

#[test]
fn answers_for_another_rubric_are_refused() {
    let r = builtin_rubric("pocme").unwrap();
    let err = derive_verdicts(&r, &EvidenceSet::new("t"), &ManualAnswers::empty("fairst"), &CheckConfig::default())
        .unwrap_err();
    assert!(matches!(err, AnswersError::RubricMismatch { .. }), "{err:?}");
}

/// Every fact a realistic run can produce, one universe per rubric.
fn universes() -> &'static [(Rubric, EvidenceSet)] {
    static CELL: OnceLock<Vec<(Rubric, EvidenceSet)>> = OnceLock::new();
    CELL.get_or_init(build_universes)
}

fn build_universes() -> Vec<(Rubric, EvidenceSet)> {
    let fx = materialize();
    let (ctx, _) = offline_context(Some(&fx.path().join("cache")));
    let software = collect_evidence(
        &Target::Path(fx.path().join("golden-repo")),
        TargetKind::Software,
        &ctx,
    )
    .unwrap();
    let data = collect_evidence(
        &Target::Pid(classify_identifier("10.5880/gfz.2024.001").unwrap()),
        TargetKind::Data,
        &ctx,
    )
    .unwrap();
    vec![
        (builtin_rubric("fairst").unwrap(), software),
        (builtin_rubric("pocme").unwrap(), data),
    ]
}

fn subset(full: &EvidenceSet, keep: &[bool]) -> EvidenceSet {
    let mut out = EvidenceSet::new(full.target.clone());
    for ((id, fact), k) in full.facts.iter().zip(keep.iter().cycle()) {
        if *k {
            out.insert(id, fact.value.clone(), fact.provenance.clone()).unwrap();
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adding_facts_never_withdraws_a_satisfied_check(
        which in 0usize..2,
        small in proptest::collection::vec(any::<bool>(), 48),
        extra in proptest::collection::vec(any::<bool>(), 48),
    ) {
        let (_, full) = &universes()[which];
        let big: Vec<bool> = small.iter().zip(&extra).map(|(a, b)| *a || *b).collect();
        let a = subset(full, &small);
        let b = subset(full, &big);
        let cfg = CheckConfig::default();
        for id in CHECK_IDS {
            for level in 1..=5u8 {
                let Some(before) = evaluate_check(id, level, &a, &cfg) else { continue };
                let after = evaluate_check(id, level, &b, &cfg).unwrap();
                if before.status == S {
                    prop_assert_eq!(after.status, S, "{} at {}", id, level);
                }
            }
        }
    }

    #[test]
    fn satisfied_verdicts_always_cite_something(
        which in 0usize..2,
        keep in proptest::collection::vec(any::<bool>(), 48),
    ) {
        let (rubric, full) = &universes()[which];
        let ev = subset(full, &keep);
        let map = derive_verdicts(rubric, &ev, &ManualAnswers::empty(&rubric.id), &CheckConfig::default()).unwrap();
        prop_assert_eq!(map.len(), rubric.attribute_count());
        for (attr, vs) in &map {
            prop_assert_eq!(vs.len(), usize::from(rubric.max_level));
            for (i, v) in vs.iter().enumerate() {
                prop_assert_eq!(usize::from(v.level), i + 1);
                if v.status == S {
                    prop_assert!(!v.evidence_refs.is_empty(), "{} level {}", attr, v.level);
                }
            }
        }
    }
}

#[test]
fn facts_from_other_collectors_are_not_confused() {
    let mut ev = EvidenceSet::new("t");
    let p = |c: &str| Provenance {
        collector: c.into(),
        source: "x".into(),
        retrieved_at: TS.into(),
    };
    ev.insert("readme_present", true, p("local")).unwrap();
    let err = ev.insert("readme_present", false, p("other")).unwrap_err();
    assert_eq!(err.first, "local");
    assert_eq!(err.second, "other");
}
