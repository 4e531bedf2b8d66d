#![allow(dead_code)]

use std::collections::BTreeMap;

use qind_core::{
    Assessment, Attribute, Check, CheckBinding, Dimension, LevelStatement, Rational, Rubric,
    TargetDescriptor, TargetKind, Verdict, VerdictSource, VerdictStatus,
};

pub fn rubric_with(max_level: u8, dims: &[(&str, &[(&str, Rational)])]) -> Rubric {
    Rubric {
        id: "custom".into(),
        title: "Custom".into(),
        version: None,
        max_level,
        scale: vec![],
        dimensions: dims
            .iter()
            .map(|(id, attrs)| Dimension {
                id: (*id).into(),
                title: id.to_uppercase(),
                description: String::new(),
                attributes: attrs
                    .iter()
                    .map(|(aid, w)| Attribute {
                        id: (*aid).into(),
                        title: aid.to_uppercase(),
                        default_weight: *w,
                        levels: (1..=max_level)
                            .map(|l| LevelStatement {
                                level: l,
                                text: format!("{aid} statement {l}"),
                            })
                            .collect(),
                        checks: (1..=max_level)
                            .map(|l| CheckBinding {
                                level: l,
                                check: Check::Manual,
                            })
                            .collect(),
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn verdicts(statuses: &[VerdictStatus]) -> Vec<Verdict> {
    statuses
        .iter()
        .enumerate()
        .map(|(i, s)| Verdict::new(i as u8 + 1, *s, VerdictSource::Manual))
        .collect()
}

/// Verdicts that yield exactly `level` on a `max_level` scale.
pub fn verdicts_for_level(level: u8, max_level: u8) -> Vec<Verdict> {
    let statuses: Vec<VerdictStatus> = (1..=max_level)
        .map(|l| {
            if l <= level {
                VerdictStatus::Satisfied
            } else {
                VerdictStatus::Unsatisfied
            }
        })
        .collect();
    verdicts(&statuses)
}

pub fn target(rubric: &Rubric, id: &str) -> TargetDescriptor {
    TargetDescriptor {
        identifier: id.into(),
        kind: TargetKind::Software,
        rubric_id: rubric.id.clone(),
        timestamp: "2024-01-01T00:00:00Z".into(),
        label: None,
    }
}

pub fn assessment_with_levels(
    rubric: &Rubric,
    id: &str,
    levels: &[(&str, u8)],
    weights: &qind_core::WeightScheme,
) -> Assessment {
    let map: BTreeMap<String, Vec<Verdict>> = rubric
        .attributes()
        .map(|a| {
            let level = levels
                .iter()
                .find(|(k, _)| *k == a.id)
                .map(|(_, l)| *l)
                .unwrap_or(0);
            (a.id.clone(), verdicts_for_level(level, rubric.max_level))
        })
        .collect();
    qind_core::assess(
        rubric,
        target(rubric, id),
        &map,
        weights,
        qind_core::OverallMode::None,
    )
    .unwrap()
}
