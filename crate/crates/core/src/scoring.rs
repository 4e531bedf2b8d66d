//! Cumulative maturity rating, weighted per-dimension aggregation,
//! threshold checks, the optional overall indicator and corpus KPI counts.
//!
//! Everything here is a pure function of its inputs.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::rubric::Rubric;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScoringError {
    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),
    /// User-supplied data is out of range or inconsistent.
    #[error("invalid input: {0}")]
    Input(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictStatus {
    Satisfied,
    Unsatisfied,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictSource {
    Auto,
    Manual,
    Defaulted,
}

/// Decision on a single level statement of one attribute.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub level: u8,
    pub status: VerdictStatus,
    pub source: VerdictSource,
    #[serde(default)]
    pub evidence_refs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    pub fn new(level: u8, status: VerdictStatus, source: VerdictSource) -> Self {
        Verdict {
            level,
            status,
            source,
            evidence_refs: Vec::new(),
            note: None,
        }
    }

    pub fn is_satisfied(&self) -> bool {
        self.status == VerdictStatus::Satisfied
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeRating {
    pub attribute_id: String,
    pub achieved_level: u8,
    pub verdicts: Vec<Verdict>,
    /// Levels marked satisfied above the first unsatisfied or unknown level.
    /// They are not counted towards `achieved_level`.
    #[serde(default)]
    pub anomalies: Vec<u8>,
}

impl AttributeRating {
    /// Dominant provenance: manual if any verdict was answered by hand,
    /// otherwise auto if any check ran, otherwise defaulted.
    pub fn source(&self) -> VerdictSource {
        if self.verdicts.iter().any(|v| v.source == VerdictSource::Manual) {
            VerdictSource::Manual
        } else if self.verdicts.iter().any(|v| v.source == VerdictSource::Auto) {
            VerdictSource::Auto
        } else {
            VerdictSource::Defaulted
        }
    }

    /// Distinct manual notes in level order.
    pub fn justifications(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for v in &self.verdicts {
            if v.source != VerdictSource::Manual {
                continue;
            }
            if let Some(note) = v.note.as_deref() {
                if !out.contains(&note) {
                    out.push(note);
                }
            }
        }
        out
    }
}

/// Rates one attribute: the achieved level is the length of the longest
/// prefix of satisfied verdicts.
///
/// `verdicts` must hold levels `1..=max_level` exactly once, in order.
pub fn rate_attribute(
    attribute_id: &str,
    verdicts: Vec<Verdict>,
    max_level: u8,
) -> Result<AttributeRating, ScoringError> {
    if verdicts.len() != usize::from(max_level) {
        return Err(ScoringError::Contract(format!(
            "attribute `{attribute_id}`: expected {max_level} verdicts, got {}",
            verdicts.len()
        )));
    }
    for (i, v) in verdicts.iter().enumerate() {
        let expected = i as u8 + 1;
        if v.level != expected {
            return Err(ScoringError::Contract(format!(
                "attribute `{attribute_id}`: verdict {i} has level {}, expected {expected}",
                v.level
            )));
        }
    }
    let achieved = verdicts.iter().take_while(|v| v.is_satisfied()).count() as u8;
    let anomalies = verdicts
        .iter()
        .skip(usize::from(achieved))
        .filter(|v| v.is_satisfied())
        .map(|v| v.level)
        .collect();
    Ok(AttributeRating {
        attribute_id: attribute_id.into(),
        achieved_level: achieved,
        verdicts,
        anomalies,
    })
}

/// Maps a percentage from an external assessment tool onto levels 0..=4.
///
/// Buckets are right-closed: level `k` covers `(20k, 20(k+1)]`, and level 0
/// also covers 0 itself.
pub fn map_external_score(percent: Rational) -> Result<u8, ScoringError> {
    let hundred = Rational::from_integer(100);
    if percent < Rational::ZERO || percent > hundred {
        return Err(ScoringError::Input(format!(
            "external score {percent} outside [0, 100]"
        )));
    }
    let twenty = Rational::from_integer(20);
    let mut level = 0u8;
    while level < 4 && percent > twenty * Rational::from(level + 1) {
        level += 1;
    }
    Ok(level)
}

/// Attribute weights, per-dimension minimum maturity and optional
/// cross-dimension weights.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightScheme {
    #[serde(default)]
    pub attribute_weights: BTreeMap<String, Rational>,
    #[serde(default)]
    pub dimension_minimums: BTreeMap<String, Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension_weights: Option<BTreeMap<String, Rational>>,
    /// Require scores strictly above the minimum instead of at-or-above.
    #[serde(default)]
    pub strict_minimums: bool,
}

impl WeightScheme {
    /// Rubric default weights, all minimums 0, no dimension weights.
    pub fn defaults(rubric: &Rubric) -> Self {
        WeightScheme {
            attribute_weights: rubric
                .attributes()
                .map(|a| (a.id.clone(), a.default_weight))
                .collect(),
            ..WeightScheme::default()
        }
    }

    /// Fills unset attribute weights from the rubric and checks every entry
    /// against it.
    pub fn resolve(&self, rubric: &Rubric) -> Result<WeightScheme, ScoringError> {
        let max = Rational::from(rubric.max_level);
        let mut problems = Vec::new();
        for (id, w) in &self.attribute_weights {
            if rubric.attribute(id).is_none() {
                problems.push(format!("unknown attribute `{id}`"));
            } else if !w.is_positive() {
                problems.push(format!("attribute `{id}` weight {w} is not positive"));
            }
        }
        for (id, m) in &self.dimension_minimums {
            if rubric.dimension(id).is_none() {
                problems.push(format!("unknown dimension `{id}`"));
            } else if *m < Rational::ZERO || *m > max {
                problems.push(format!("dimension `{id}` minimum {m} outside [0, {max}]"));
            }
        }
        if let Some(dw) = &self.dimension_weights {
            for (id, w) in dw {
                if rubric.dimension(id).is_none() {
                    problems.push(format!("unknown dimension `{id}`"));
                } else if !w.is_positive() {
                    problems.push(format!("dimension `{id}` weight {w} is not positive"));
                }
            }
        }
        if !problems.is_empty() {
            return Err(ScoringError::Input(problems.join("; ")));
        }
        let mut resolved = self.clone();
        for a in rubric.attributes() {
            resolved
                .attribute_weights
                .entry(a.id.clone())
                .or_insert(a.default_weight);
        }
        Ok(resolved)
    }

    pub fn minimum(&self, dimension_id: &str) -> Rational {
        self.dimension_minimums
            .get(dimension_id)
            .copied()
            .unwrap_or(Rational::ZERO)
    }

    pub fn meets(&self, score: Rational, minimum: Rational) -> bool {
        if self.strict_minimums {
            score > minimum
        } else {
            score >= minimum
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionScore {
    pub dimension_id: String,
    pub score: Rational,
    pub minimum: Rational,
    pub meets_minimum: bool,
}

/// Weighted mean of the achieved levels of one dimension's attributes.
pub fn aggregate_dimension(
    rubric: &Rubric,
    ratings: &[AttributeRating],
    weights: &WeightScheme,
    dimension_id: &str,
) -> Result<DimensionScore, ScoringError> {
    let dim = rubric
        .dimension(dimension_id)
        .ok_or_else(|| ScoringError::Contract(format!("unknown dimension `{dimension_id}`")))?;
    let mut weighted = Rational::ZERO;
    let mut total = Rational::ZERO;
    for attr in &dim.attributes {
        let rating = ratings
            .iter()
            .find(|r| r.attribute_id == attr.id)
            .ok_or_else(|| ScoringError::Contract(format!("attribute `{}` is not rated", attr.id)))?;
        let w = weights
            .attribute_weights
            .get(&attr.id)
            .copied()
            .unwrap_or(attr.default_weight);
        if !w.is_positive() {
            return Err(ScoringError::Input(format!(
                "attribute `{}` weight {w} is not positive",
                attr.id
            )));
        }
        weighted = weighted + w * Rational::from(rating.achieved_level);
        total = total + w;
    }
    if total.is_zero() {
        return Err(ScoringError::Contract(format!(
            "dimension `{dimension_id}` has no attributes"
        )));
    }
    let score = weighted / total;
    let minimum = weights.minimum(dimension_id);
    Ok(DimensionScore {
        dimension_id: dimension_id.into(),
        score,
        minimum,
        meets_minimum: weights.meets(score, minimum),
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OverallMode {
    /// Keep the assessment multi-dimensional.
    #[default]
    None,
    /// 1 if every dimension meets its minimum, else 0.
    Threshold,
    /// Weighted mean of dimension scores; needs explicit dimension weights.
    Weighted,
}

pub fn overall_indicator(
    scores: &[DimensionScore],
    mode: OverallMode,
    weights: &WeightScheme,
) -> Result<Option<Rational>, ScoringError> {
    match mode {
        OverallMode::None => Ok(None),
        OverallMode::Threshold => Ok(Some(if scores.iter().all(|s| s.meets_minimum) {
            Rational::ONE
        } else {
            Rational::ZERO
        })),
        OverallMode::Weighted => {
            let dw = weights.dimension_weights.as_ref().ok_or_else(|| {
                ScoringError::Input("weighted overall indicator requires dimension_weights".into())
            })?;
            let mut weighted = Rational::ZERO;
            let mut total = Rational::ZERO;
            for s in scores {
                let w = dw.get(&s.dimension_id).copied().ok_or_else(|| {
                    ScoringError::Input(format!("no weight for dimension `{}`", s.dimension_id))
                })?;
                if !w.is_positive() {
                    return Err(ScoringError::Input(format!(
                        "dimension `{}` weight {w} is not positive",
                        s.dimension_id
                    )));
                }
                weighted = weighted + w * s.score;
                total = total + w;
            }
            if total.is_zero() {
                return Err(ScoringError::Input("no dimension scores".into()));
            }
            Ok(Some(weighted / total))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    Data,
    Software,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetDescriptor {
    pub identifier: String,
    pub kind: TargetKind,
    pub rubric_id: String,
    pub timestamp: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl TargetDescriptor {
    pub fn display_label(&self) -> &str {
        self.label.as_deref().unwrap_or(&self.identifier)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assessment {
    pub target: TargetDescriptor,
    pub ratings: Vec<AttributeRating>,
    pub dimension_scores: Vec<DimensionScore>,
    #[serde(default)]
    pub overall_mode: OverallMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overall: Option<Rational>,
    pub passes_all_minimums: bool,
}

impl Assessment {
    pub fn rating(&self, attribute_id: &str) -> Option<&AttributeRating> {
        self.ratings.iter().find(|r| r.attribute_id == attribute_id)
    }

    pub fn dimension_score(&self, dimension_id: &str) -> Option<&DimensionScore> {
        self.dimension_scores
            .iter()
            .find(|s| s.dimension_id == dimension_id)
    }
}

/// Rates every attribute and aggregates every dimension of `rubric`.
///
/// `verdicts` must hold one entry per rubric attribute; `weights` is
/// resolved against the rubric first.
pub fn assess(
    rubric: &Rubric,
    target: TargetDescriptor,
    verdicts: &BTreeMap<String, Vec<Verdict>>,
    weights: &WeightScheme,
    mode: OverallMode,
) -> Result<Assessment, ScoringError> {
    if target.rubric_id != rubric.id {
        return Err(ScoringError::Input(format!(
            "target names rubric `{}` but `{}` was supplied",
            target.rubric_id, rubric.id
        )));
    }
    let known: BTreeSet<&str> = rubric.attributes().map(|a| a.id.as_str()).collect();
    let extra: Vec<&str> = verdicts
        .keys()
        .map(String::as_str)
        .filter(|k| !known.contains(k))
        .collect();
    if !extra.is_empty() {
        return Err(ScoringError::Contract(format!(
            "verdicts for unknown attributes: {}",
            extra.join(", ")
        )));
    }
    let weights = weights.resolve(rubric)?;
    let mut ratings = Vec::with_capacity(known.len());
    for attr in rubric.attributes() {
        let v = verdicts
            .get(&attr.id)
            .ok_or_else(|| ScoringError::Contract(format!("no verdicts for `{}`", attr.id)))?;
        ratings.push(rate_attribute(&attr.id, v.clone(), rubric.max_level)?);
    }
    let dimension_scores = rubric
        .dimensions
        .iter()
        .map(|d| aggregate_dimension(rubric, &ratings, &weights, &d.id))
        .collect::<Result<Vec<_>, _>>()?;
    let overall = overall_indicator(&dimension_scores, mode, &weights)?;
    let passes_all_minimums = dimension_scores.iter().all(|s| s.meets_minimum);
    Ok(Assessment {
        target,
        ratings,
        dimension_scores,
        overall_mode: mode,
        overall,
        passes_all_minimums,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KpiCount {
    pub passing: usize,
    pub total: usize,
}

/// Ids of the dimensions of `a` that miss their minimum under `weights`.
pub fn failing_dimensions<'a>(a: &'a Assessment, weights: &WeightScheme) -> Vec<&'a str> {
    a.dimension_scores
        .iter()
        .filter(|s| !weights.meets(s.score, weights.minimum(&s.dimension_id)))
        .map(|s| s.dimension_id.as_str())
        .collect()
}

/// Returns the shared rubric id, or an error if the assessments mix rubrics.
pub fn shared_rubric(assessments: &[Assessment]) -> Result<Option<&str>, ScoringError> {
    let mut ids = assessments.iter().map(|a| a.target.rubric_id.as_str());
    let first = match ids.next() {
        Some(id) => id,
        None => return Ok(None),
    };
    if let Some(other) = ids.find(|id| *id != first) {
        return Err(ScoringError::Input(format!(
            "assessments mix rubrics `{first}` and `{other}`"
        )));
    }
    Ok(Some(first))
}

/// Counts assessments whose every dimension score meets the minimum set in
/// `weights`. Minima are re-applied here, so stored `meets_minimum` flags do
/// not matter.
pub fn count_above_minimum(
    assessments: &[Assessment],
    weights: &WeightScheme,
) -> Result<KpiCount, ScoringError> {
    shared_rubric(assessments)?;
    let passing = assessments
        .iter()
        .filter(|a| failing_dimensions(a, weights).is_empty())
        .count();
    Ok(KpiCount {
        passing,
        total: assessments.len(),
    })
}
