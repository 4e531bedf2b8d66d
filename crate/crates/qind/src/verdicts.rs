//! Turns evidence and manual answers into per-level verdicts.

use std::collections::BTreeMap;

use qind_core::{Check, Rubric, Verdict, VerdictSource, VerdictStatus};
use serde::{Deserialize, Serialize};

use crate::checks::{evaluate_check, CheckConfig};
use crate::evidence::EvidenceSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StatementAnswer {
    Holds(bool),
    Detailed {
        holds: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        justification: Option<String>,
    },
}

impl StatementAnswer {
    pub fn holds(&self) -> bool {
        match self {
            StatementAnswer::Holds(b) | StatementAnswer::Detailed { holds: b, .. } => *b,
        }
    }

    pub fn justification(&self) -> Option<&str> {
        match self {
            StatementAnswer::Holds(_) => None,
            StatementAnswer::Detailed { justification, .. } => justification.as_deref(),
        }
    }
}

/// Sets the attribute's level outright.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitLevel {
    pub level: u8,
    pub justification: String,
}

/// Decides individual level statements; other levels stay with their bound
/// checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Statements {
    pub statements: BTreeMap<u8, StatementAnswer>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub justification: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AnswerRepr", into = "AnswerRepr")]
pub enum Answer {
    Explicit(ExplicitLevel),
    Statements(Statements),
}

/// Flat on-disk form; exactly one of `level` and `statements` is set.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnswerRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    level: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    statements: Option<BTreeMap<u8, StatementAnswer>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    justification: Option<String>,
}

impl TryFrom<AnswerRepr> for Answer {
    type Error = String;

    fn try_from(r: AnswerRepr) -> Result<Self, String> {
        match (r.level, r.statements) {
            (Some(level), None) => Ok(Answer::Explicit(ExplicitLevel {
                level,
                justification: r.justification.unwrap_or_default(),
            })),
            (None, Some(statements)) => Ok(Answer::Statements(Statements {
                statements,
                justification: r.justification,
            })),
            (Some(_), Some(_)) => Err("an answer sets either `level` or `statements`, not both".into()),
            (None, None) => Err("an answer needs `level` or `statements`".into()),
        }
    }
}

impl From<Answer> for AnswerRepr {
    fn from(a: Answer) -> Self {
        match a {
            Answer::Explicit(e) => AnswerRepr {
                level: Some(e.level),
                statements: None,
                justification: Some(e.justification),
            },
            Answer::Statements(s) => AnswerRepr {
                level: None,
                statements: Some(s.statements),
                justification: s.justification,
            },
        }
    }
}

impl Answer {
    pub fn explicit(level: u8, justification: &str) -> Self {
        Answer::Explicit(ExplicitLevel {
            level,
            justification: justification.to_string(),
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManualAnswers {
    /// Rubric the answers were written for.
    pub rubric: String,
    #[serde(default)]
    pub answers: BTreeMap<String, Answer>,
}

impl ManualAnswers {
    pub fn empty(rubric: &str) -> Self {
        ManualAnswers {
            rubric: rubric.to_string(),
            answers: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnswersError {
    #[error("answers were written for rubric `{found}`, not `{expected}`")]
    RubricMismatch { expected: String, found: String },
    #[error("answers name unknown attributes: {}", .0.join(", "))]
    UnknownAttributes(Vec<String>),
    #[error("answer for `{attribute}`: level {level} is outside 0..={max}")]
    LevelOutOfRange { attribute: String, level: u8, max: u8 },
    #[error("answer for `{0}`: an explicit level needs a nonempty justification")]
    MissingJustification(String),
}

pub fn validate_answers(rubric: &Rubric, answers: &ManualAnswers) -> Result<(), AnswersError> {
    if answers.rubric != rubric.id {
        return Err(AnswersError::RubricMismatch {
            expected: rubric.id.clone(),
            found: answers.rubric.clone(),
        });
    }
    let unknown: Vec<String> = answers
        .answers
        .keys()
        .filter(|k| rubric.attribute(k).is_none())
        .cloned()
        .collect();
    if !unknown.is_empty() {
        return Err(AnswersError::UnknownAttributes(unknown));
    }
    for (attr, answer) in &answers.answers {
        match answer {
            Answer::Explicit(ExplicitLevel { level, justification }) => {
                if *level > rubric.max_level {
                    return Err(AnswersError::LevelOutOfRange {
                        attribute: attr.clone(),
                        level: *level,
                        max: rubric.max_level,
                    });
                }
                if justification.trim().is_empty() {
                    return Err(AnswersError::MissingJustification(attr.clone()));
                }
            }
            Answer::Statements(Statements { statements, .. }) => {
                if let Some(&level) = statements.keys().find(|l| **l == 0 || **l > rubric.max_level) {
                    return Err(AnswersError::LevelOutOfRange {
                        attribute: attr.clone(),
                        level,
                        max: rubric.max_level,
                    });
                }
            }
        }
    }
    Ok(())
}

fn answer_ref(attr: &str) -> String {
    format!("answers:{attr}")
}

fn manual(level: u8, holds: bool, attr: &str, note: Option<&str>) -> Verdict {
    let status = if holds {
        VerdictStatus::Satisfied
    } else {
        VerdictStatus::Unsatisfied
    };
    let mut v = Verdict::new(level, status, VerdictSource::Manual);
    v.evidence_refs.push(answer_ref(attr));
    v.note = note.map(str::to_string);
    v
}

/// One verdict list per rubric attribute, each covering levels
/// `1..=max_level` in order.
pub fn derive_verdicts(
    rubric: &Rubric,
    evidence: &EvidenceSet,
    answers: &ManualAnswers,
    config: &CheckConfig,
) -> Result<BTreeMap<String, Vec<Verdict>>, AnswersError> {
    validate_answers(rubric, answers)?;
    let mut out = BTreeMap::new();
    for attr in rubric.attributes() {
        let answer = answers.answers.get(&attr.id);
        let mut verdicts = Vec::with_capacity(usize::from(rubric.max_level));
        for level in 1..=rubric.max_level {
            let v = match answer {
                Some(Answer::Explicit(ExplicitLevel { level: set, justification })) => {
                    manual(level, level <= *set, &attr.id, Some(justification))
                }
                Some(Answer::Statements(Statements { statements, justification })) if statements.contains_key(&level) => {
                    let s = &statements[&level];
                    manual(level, s.holds(), &attr.id, s.justification().or(justification.as_deref()))
                }
                _ => match attr.binding(level) {
                    Some(Check::Auto(id)) => match evaluate_check(id, level, evidence, config) {
                        Some(outcome) => {
                            let mut v = Verdict::new(level, outcome.status, VerdictSource::Auto);
                            v.evidence_refs = outcome.evidence_refs;
                            if !outcome.missing.is_empty() {
                                v.note = Some(format!("{id}: missing {}", outcome.missing.join(", ")));
                            }
                            v
                        }
                        None => {
                            let mut v = Verdict::new(level, VerdictStatus::Unknown, VerdictSource::Defaulted);
                            v.note = Some(format!("no implementation for check `{id}`"));
                            v
                        }
                    },
                    Some(Check::Manual) | None => {
                        Verdict::new(level, VerdictStatus::Unknown, VerdictSource::Defaulted)
                    }
                },
            };
            verdicts.push(v);
        }
        out.insert(attr.id.clone(), verdicts);
    }
    Ok(out)
}
