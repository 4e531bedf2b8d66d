mod common;

use std::collections::BTreeMap;

use common::*;
use proptest::prelude::*;
use qind_core::VerdictStatus::{Satisfied as S, Unknown as K, Unsatisfied as U};
use qind_core::*;

/// Brute-force oracle: the largest `n` for which levels `1..=n` are all
/// satisfied, found by testing every candidate from the top down.
fn oracle_level(statuses: &[VerdictStatus]) -> u8 {
    (0..=statuses.len())
        .rev()
        .find(|&n| (0..n).all(|i| statuses[i] == S))
        .unwrap() as u8
}

fn oracle_anomalies(statuses: &[VerdictStatus]) -> Vec<u8> {
    let n = oracle_level(statuses) as usize;
    (0..statuses.len())
        .filter(|&i| i > n && statuses[i] == S)
        .map(|i| i as u8 + 1)
        .collect()
}

fn all_vectors(len: usize) -> Vec<Vec<VerdictStatus>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                [S, U, K].into_iter().map(move |s| {
                    let mut w = v.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out
}

#[test]
fn rate_attribute_examples() {
    let r = rate_attribute("a", verdicts(&[S, S, S, U, U]), 5).unwrap();
    assert_eq!(r.achieved_level, 3);
    assert!(r.anomalies.is_empty());

    let r = rate_attribute("a", verdicts(&[U, U, U, U, U]), 5).unwrap();
    assert_eq!(r.achieved_level, 0);
    assert!(r.anomalies.is_empty());

    let r = rate_attribute("a", verdicts(&[S, S, K, S, S]), 5).unwrap();
    assert_eq!(r.achieved_level, 2);
    assert_eq!(r.anomalies, vec![4, 5]);
}

#[test]
fn rate_attribute_matches_oracle_exhaustively() {
    for max in [4usize, 5] {
        let vectors = all_vectors(max);
        assert_eq!(vectors.len(), 3usize.pow(max as u32));
        for v in vectors {
            let r = rate_attribute("a", verdicts(&v), max as u8).unwrap();
            assert_eq!(r.achieved_level, oracle_level(&v), "{v:?}");
            assert_eq!(r.anomalies, oracle_anomalies(&v), "{v:?}");
        }
    }
}

#[test]
fn rate_attribute_contract_violations() {
    assert!(matches!(
        rate_attribute("a", verdicts(&[S, S, S, S]), 5),
        Err(ScoringError::Contract(_))
    ));
    let mut v = verdicts(&[S, S, S, S, S]);
    v[3].level = 3;
    assert!(matches!(rate_attribute("a", v, 5), Err(ScoringError::Contract(_))));
    let mut v = verdicts(&[S, S, S, S, S]);
    v.swap(0, 1);
    assert!(matches!(rate_attribute("a", v, 5), Err(ScoringError::Contract(_))));
}

#[test]
fn external_score_buckets() {
    let cases = [
        (0, 0),
        (20, 0),
        (21, 1),
        (40, 1),
        (41, 2),
        (45, 2),
        (60, 2),
        (61, 3),
        (80, 3),
        (81, 4),
        (100, 4),
    ];
    for (pct, level) in cases {
        assert_eq!(map_external_score(Rational::from_integer(pct)).unwrap(), level, "{pct}");
    }
    assert_eq!(map_external_score(Rational::new(41, 2)).unwrap(), 1);
    assert_eq!(map_external_score(Rational::new(2001, 100)).unwrap(), 1);
    assert!(map_external_score(Rational::from_integer(-1)).is_err());
    assert!(map_external_score(Rational::new(10001, 100)).is_err());
}

#[test]
fn aggregate_examples() {
    let one = Rational::ONE;
    let r = rubric_with(5, &[("d", &[("a", one), ("b", one)])]);
    let a = assessment_with_levels(&r, "t", &[("a", 3), ("b", 3)], &WeightScheme::defaults(&r));
    assert_eq!(a.dimension_scores[0].score, Rational::from_integer(3));

    let r = rubric_with(
        4,
        &[(
            "d",
            &[
                ("a", Rational::from_integer(2)),
                ("b", one),
                ("c", one),
            ],
        )],
    );
    let a = assessment_with_levels(&r, "t", &[("a", 4), ("b", 2), ("c", 0)], &WeightScheme::defaults(&r));
    // (2*4 + 1*2 + 1*0) / 4
    assert_eq!(a.dimension_scores[0].score, Rational::new(5, 2));

    let r = rubric_with(4, &[("d", &[("a", one)])]);
    let a = assessment_with_levels(&r, "t", &[("a", 4)], &WeightScheme::defaults(&r));
    assert_eq!(a.dimension_scores[0].score, Rational::from_integer(4));
}

#[test]
fn aggregate_reports_missing_rating() {
    let one = Rational::ONE;
    let r = rubric_with(5, &[("d", &[("a", one), ("b", one)])]);
    let rating = rate_attribute("a", verdicts_for_level(2, 5), 5).unwrap();
    let err = aggregate_dimension(&r, &[rating], &WeightScheme::defaults(&r), "d").unwrap_err();
    assert!(matches!(err, ScoringError::Contract(_)));
}

#[test]
fn minimum_comparison_modes() {
    let one = Rational::ONE;
    let r = rubric_with(5, &[("d", &[("a", one)])]);
    let mut w = WeightScheme::defaults(&r);
    w.dimension_minimums.insert("d".into(), Rational::from_integer(3));
    let a = assessment_with_levels(&r, "t", &[("a", 3)], &w);
    assert!(a.dimension_scores[0].meets_minimum);
    w.strict_minimums = true;
    let a = assessment_with_levels(&r, "t", &[("a", 3)], &w);
    assert!(!a.dimension_scores[0].meets_minimum);
    assert!(!a.passes_all_minimums);
}

#[test]
fn weight_scheme_resolution_rejects_bad_entries() {
    let one = Rational::ONE;
    let r = rubric_with(5, &[("d", &[("a", one)])]);
    let mut w = WeightScheme::default();
    w.attribute_weights.insert("zzz".into(), one);
    assert!(w.resolve(&r).is_err());
    let mut w = WeightScheme::default();
    w.attribute_weights.insert("a".into(), Rational::ZERO);
    assert!(w.resolve(&r).is_err());
    let mut w = WeightScheme::default();
    w.dimension_minimums.insert("d".into(), Rational::from_integer(6));
    assert!(w.resolve(&r).is_err());
    let resolved = WeightScheme::default().resolve(&r).unwrap();
    assert_eq!(resolved.attribute_weights["a"], one);
}

fn score(id: &str, value: i64, meets: bool) -> DimensionScore {
    DimensionScore {
        dimension_id: id.into(),
        score: Rational::from_integer(value),
        minimum: Rational::ZERO,
        meets_minimum: meets,
    }
}

#[test]
fn overall_indicator_modes() {
    let scores = vec![score("x", 4, true), score("y", 2, true)];
    let mut w = WeightScheme::default();
    assert_eq!(overall_indicator(&scores, OverallMode::None, &w).unwrap(), None);
    assert_eq!(
        overall_indicator(&scores, OverallMode::Threshold, &w).unwrap(),
        Some(Rational::ONE)
    );
    assert!(matches!(
        overall_indicator(&scores, OverallMode::Weighted, &w),
        Err(ScoringError::Input(_))
    ));
    w.dimension_weights = Some(BTreeMap::from([
        ("x".to_string(), Rational::ONE),
        ("y".to_string(), Rational::ONE),
    ]));
    assert_eq!(
        overall_indicator(&scores, OverallMode::Weighted, &w).unwrap(),
        Some(Rational::from_integer(3))
    );
    let failing = vec![score("x", 4, true), score("y", 0, false)];
    assert_eq!(
        overall_indicator(&failing, OverallMode::Threshold, &w).unwrap(),
        Some(Rational::ZERO)
    );
}

/// Independent re-check of one assessment against a minimum table.
fn passes_by_hand(levels: &[(&str, u8)], minimums: &[(&str, u8)]) -> bool {
    minimums.iter().all(|(attr, min)| {
        levels
            .iter()
            .find(|(a, _)| a == attr)
            .map(|(_, l)| l >= min)
            .unwrap_or(*min == 0)
    })
}

#[test]
fn kpi_counting() {
    let one = Rational::ONE;
    // One attribute per dimension, so dimension score == attribute level.
    let r = rubric_with(5, &[("findable", &[("f", one)]), ("reusable", &[("r", one)])]);
    let mut w = WeightScheme::defaults(&r);
    assert_eq!(count_above_minimum(&[], &w).unwrap(), KpiCount { passing: 0, total: 0 });

    let corpus: [&[(&str, u8)]; 3] = [&[("f", 3), ("r", 2)], &[("f", 4), ("r", 1)], &[("f", 2), ("r", 5)]];
    let assessments: Vec<_> = corpus
        .iter()
        .enumerate()
        .map(|(i, l)| assessment_with_levels(&r, &format!("t{i}"), l, &w))
        .collect();
    assert_eq!(count_above_minimum(&assessments, &w).unwrap(), KpiCount { passing: 3, total: 3 });

    w.dimension_minimums.insert("findable".into(), Rational::from_integer(3));
    w.dimension_minimums.insert("reusable".into(), Rational::from_integer(2));
    let hand = corpus
        .iter()
        .filter(|l| passes_by_hand(l, &[("f", 3), ("r", 2)]))
        .count();
    assert_eq!(hand, 1);
    assert_eq!(count_above_minimum(&assessments, &w).unwrap(), KpiCount { passing: 1, total: 3 });

    let summary = batch_summary(&assessments, &w).unwrap();
    assert_eq!(summary.totals, KpiCount { passing: 1, total: 3 });
    assert_eq!(summary.failing.len(), 2);
    assert_eq!(summary.failing[0].identifier, "t1");
    assert_eq!(summary.failing[0].failing_dimensions, vec!["reusable".to_string()]);
    assert_eq!(summary.failing[1].failing_dimensions, vec!["findable".to_string()]);
    assert_eq!(summary.distributions[0].median, Rational::from_integer(3));
}

#[test]
fn kpi_rejects_mixed_rubrics() {
    let one = Rational::ONE;
    let r = rubric_with(5, &[("d", &[("a", one)])]);
    let w = WeightScheme::defaults(&r);
    let a = assessment_with_levels(&r, "a", &[], &w);
    let mut b = a.clone();
    b.target.rubric_id = "other".into();
    assert!(matches!(count_above_minimum(&[a.clone(), b.clone()], &w), Err(ScoringError::Input(_))));
    assert!(batch_summary(&[a, b], &w).is_err());
}

#[test]
fn batch_summary_empty_and_zero_minimums() {
    let s = batch_summary(&[], &WeightScheme::default()).unwrap();
    assert_eq!(s.totals, KpiCount { passing: 0, total: 0 });
    assert!(s.distributions.is_empty());
    assert!(s.failing.is_empty());

    let one = Rational::ONE;
    let r = rubric_with(5, &[("d", &[("a", one)])]);
    let w = WeightScheme::defaults(&r);
    let all: Vec<_> = (0..4)
        .map(|i| assessment_with_levels(&r, &format!("t{i}"), &[("a", i)], &w))
        .collect();
    let s = batch_summary(&all, &w).unwrap();
    assert!(s.failing.is_empty());
    assert_eq!(s.totals.passing, 4);
}

#[test]
fn assess_rejects_foreign_and_missing_verdicts() {
    let one = Rational::ONE;
    let r = rubric_with(5, &[("d", &[("a", one)])]);
    let w = WeightScheme::defaults(&r);
    let mut map = BTreeMap::new();
    assert!(assess(&r, target(&r, "t"), &map, &w, OverallMode::None).is_err());
    map.insert("a".to_string(), verdicts_for_level(1, 5));
    map.insert("ghost".to_string(), verdicts_for_level(1, 5));
    assert!(assess(&r, target(&r, "t"), &map, &w, OverallMode::None).is_err());
}

#[test]
fn assessment_serialization_is_deterministic() {
    let r = builtin_rubric("fairst").unwrap();
    let w = WeightScheme::defaults(&r);
    let a = assessment_with_levels(&r, "t", &[("versioning", 3), ("security", 1)], &w);
    let one = serde_json::to_string_pretty(&a).unwrap();
    let two = serde_json::to_string_pretty(&a.clone()).unwrap();
    assert_eq!(one, two);
    let back: Assessment = serde_json::from_str(&one).unwrap();
    assert_eq!(back, a);
}

fn status() -> impl Strategy<Value = VerdictStatus> {
    prop_oneof![Just(S), Just(U), Just(K)]
}

proptest! {
    #[test]
    fn upgrading_a_verdict_never_lowers_the_level(
        v in proptest::collection::vec(status(), 5),
        idx in 0usize..5,
    ) {
        let before = rate_attribute("a", verdicts(&v), 5).unwrap().achieved_level;
        let mut up = v.clone();
        up[idx] = S;
        let after = rate_attribute("a", verdicts(&up), 5).unwrap().achieved_level;
        prop_assert!(after >= before);
    }

    #[test]
    fn external_score_is_monotone(a in 0u32..=10_000, b in 0u32..=10_000) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let l = map_external_score(Rational::new(i64::from(lo), 100)).unwrap();
        let h = map_external_score(Rational::new(i64::from(hi), 100)).unwrap();
        prop_assert!(l <= h);
        prop_assert!(h <= 4);
    }

    #[test]
    fn dimension_score_bounds_and_scale_invariance(
        entries in proptest::collection::vec((1i64..=20, 1i64..=8, 0u8..=5), 1..8),
        scale_n in 1i64..=50,
        scale_d in 1i64..=50,
    ) {
        let ids: Vec<String> = (0..entries.len()).map(|i| format!("a{i}")).collect();
        let attrs: Vec<(&str, Rational)> = ids
            .iter()
            .zip(&entries)
            .map(|(id, (n, d, _))| (id.as_str(), Rational::new(*n, *d)))
            .collect();
        let r = rubric_with(5, &[("d", &attrs)]);
        let levels: Vec<(&str, u8)> = ids.iter().zip(&entries).map(|(id, e)| (id.as_str(), e.2)).collect();
        let w = WeightScheme::defaults(&r);
        let a = assessment_with_levels(&r, "t", &levels, &w);
        let s = a.dimension_scores[0].score;
        let lo = entries.iter().map(|e| e.2).min().unwrap();
        let hi = entries.iter().map(|e| e.2).max().unwrap();
        prop_assert!(Rational::from(lo) <= s && s <= Rational::from(hi));

        let c = Rational::new(scale_n, scale_d);
        let mut scaled = w.clone();
        for v in scaled.attribute_weights.values_mut() {
            *v = *v * c;
        }
        let b = assessment_with_levels(&r, "t", &levels, &scaled);
        prop_assert_eq!(b.dimension_scores[0].score, s);
    }

    #[test]
    fn weighted_overall_stays_within_dimension_scores(
        dims in proptest::collection::vec((0i64..=20, 1i64..=9), 1..7),
    ) {
        let scores: Vec<DimensionScore> = dims
            .iter()
            .enumerate()
            .map(|(i, (s, _))| DimensionScore {
                dimension_id: format!("d{i}"),
                score: Rational::new(*s, 4),
                minimum: Rational::ZERO,
                meets_minimum: true,
            })
            .collect();
        let w = WeightScheme {
            dimension_weights: Some(
                dims.iter().enumerate().map(|(i, (_, w))| (format!("d{i}"), Rational::from_integer(*w))).collect(),
            ),
            ..WeightScheme::default()
        };
        let o = overall_indicator(&scores, OverallMode::Weighted, &w).unwrap().unwrap();
        let lo = scores.iter().map(|s| s.score).min().unwrap();
        let hi = scores.iter().map(|s| s.score).max().unwrap();
        prop_assert!(lo <= o && o <= hi);
    }
}
