//! Rubric model and scoring core for multi-dimensional quality indicators of
//! research data and research software publications.
//!
//! The crate is `no_std` (with `alloc`): it holds the rubric data model and
//! the two built-in rubrics, the cumulative maturity rating, weighted
//! aggregation and KPI counting, and pure renderers for radar SVG and
//! Markdown. Evidence collection, file formats and the command line live in
//! the `qind` crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod builtin;
pub mod markdown;
pub mod radar;
pub mod rational;
pub mod rubric;
pub mod scoring;
pub mod summary;

pub use builtin::{builtin_ids, builtin_rubric, RubricNotFound, FAIRST_ID, POCME_ID};
pub use radar::{render_radar, RadarChart, RadarConfig, RenderError, SeriesStyle};
pub use rational::Rational;
pub use rubric::{
    validate_rubric, validate_rubric_with, Attribute, Check, CheckBinding, Dimension, Finding,
    LevelStatement, Rubric, ScaleLevel, Severity, ValidationReport,
};
pub use scoring::{
    aggregate_dimension, assess, count_above_minimum, map_external_score, overall_indicator,
    rate_attribute, Assessment, AttributeRating, DimensionScore, KpiCount, OverallMode,
    ScoringError, TargetDescriptor, TargetKind, Verdict, VerdictSource, VerdictStatus,
    WeightScheme,
};
pub use summary::{batch_summary, BatchSummary, DimensionDistribution, FailingTarget};
