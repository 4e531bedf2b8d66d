//! Corpus-level KPI summary over a set of assessments.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::rational::{median, Rational};
use crate::scoring::{count_above_minimum, failing_dimensions, Assessment, KpiCount, ScoringError, WeightScheme};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionDistribution {
    pub dimension_id: String,
    pub min: Rational,
    pub median: Rational,
    pub max: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailingTarget {
    pub identifier: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub failing_dimensions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub rubric_id: Option<String>,
    pub totals: KpiCount,
    pub distributions: Vec<DimensionDistribution>,
    pub failing: Vec<FailingTarget>,
}

pub fn batch_summary(
    assessments: &[Assessment],
    weights: &WeightScheme,
) -> Result<BatchSummary, ScoringError> {
    let totals = count_above_minimum(assessments, weights)?;
    let rubric_id = assessments.first().map(|a| a.target.rubric_id.clone());

    let mut distributions = Vec::new();
    if let Some(first) = assessments.first() {
        for dim in &first.dimension_scores {
            let scores: Vec<Rational> = assessments
                .iter()
                .filter_map(|a| a.dimension_score(&dim.dimension_id).map(|s| s.score))
                .collect();
            let (Some(min), Some(max), Some(med)) = (
                scores.iter().min().copied(),
                scores.iter().max().copied(),
                median(&scores),
            ) else {
                continue;
            };
            distributions.push(DimensionDistribution {
                dimension_id: dim.dimension_id.clone(),
                min,
                median: med,
                max,
            });
        }
    }

    let failing = assessments
        .iter()
        .filter_map(|a| {
            let dims = failing_dimensions(a, weights);
            if dims.is_empty() {
                None
            } else {
                Some(FailingTarget {
                    identifier: a.target.identifier.clone(),
                    label: a.target.label.clone(),
                    failing_dimensions: dims.into_iter().map(String::from).collect(),
                })
            }
        })
        .collect();

    Ok(BatchSummary {
        rubric_id,
        totals,
        distributions,
        failing,
    })
}
