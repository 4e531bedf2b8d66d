//! Human-readable Markdown rendering of assessments and rubrics.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::rubric::Rubric;
use crate::scoring::{Assessment, OverallMode, TargetKind, VerdictSource};
use crate::summary::BatchSummary;

/// Collapses runs of whitespace. Stored rubric text keeps its original
/// spacing; this is applied only when displaying it.
pub fn normalize_display(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for word in text.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

fn cell(text: &str) -> String {
    normalize_display(text).replace('|', "\\|")
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "✓"
    } else {
        "✗"
    }
}

pub fn source_label(source: VerdictSource) -> &'static str {
    match source {
        VerdictSource::Auto => "auto",
        VerdictSource::Manual => "manual",
        VerdictSource::Defaulted => "defaulted",
    }
}

fn join_levels(levels: &[u8]) -> String {
    let parts: Vec<String> = levels.iter().map(|l| alloc::format!("{l}")).collect();
    parts.join(", ")
}

pub fn render_assessment(rubric: &Rubric, a: &Assessment, tool_version: &str) -> String {
    let mut out = String::new();
    let max = rubric.max_level;
    let _ = writeln!(out, "# Quality assessment: {}", cell(a.target.display_label()));
    out.push('\n');
    let _ = writeln!(out, "- Identifier: `{}`", a.target.identifier);
    let kind = match a.target.kind {
        TargetKind::Data => "research data publication",
        TargetKind::Software => "research software publication",
    };
    let _ = writeln!(out, "- Kind: {kind}");
    let _ = write!(out, "- Rubric: {} (`{}`", cell(&rubric.title), rubric.id);
    if let Some(v) = &rubric.version {
        let _ = write!(out, ", version {v}");
    }
    out.push_str(")\n");
    let _ = writeln!(out, "- Assessed: {}", a.target.timestamp);
    let _ = writeln!(out, "- Tool version: {tool_version}");
    out.push('\n');

    out.push_str("## Summary\n\n");
    out.push_str("| Dimension | Score | Max | Minimum | Met |\n");
    out.push_str("|---|---|---|---|---|\n");
    for dim in &rubric.dimensions {
        if let Some(s) = a.dimension_score(&dim.id) {
            let _ = writeln!(
                out,
                "| {} | {} | {max} | {} | {} |",
                cell(&dim.title),
                s.score.display_2dp(),
                s.minimum.display_2dp(),
                mark(s.meets_minimum)
            );
        }
    }
    out.push('\n');
    let _ = writeln!(
        out,
        "All minimums met: {} {}",
        mark(a.passes_all_minimums),
        if a.passes_all_minimums { "yes" } else { "no" }
    );
    match (a.overall_mode, a.overall) {
        (OverallMode::None, _) | (_, None) => {
            out.push_str("\nOverall indicator: not computed; the assessment is reported per dimension.\n")
        }
        (OverallMode::Threshold, Some(v)) => {
            let _ = writeln!(out, "\nOverall indicator (threshold): {}", v.display_2dp());
        }
        (OverallMode::Weighted, Some(v)) => {
            let _ = writeln!(out, "\nOverall indicator (weighted): {}", v.display_2dp());
        }
    }

    for dim in &rubric.dimensions {
        out.push('\n');
        let _ = writeln!(out, "## {}", normalize_display(&dim.title));
        out.push('\n');
        out.push_str("| Attribute | Level | Max | Source | Justification |\n");
        out.push_str("|---|---|---|---|---|\n");
        for attr in &dim.attributes {
            let Some(r) = a.rating(&attr.id) else { continue };
            let _ = writeln!(
                out,
                "| {} | {} | {max} | {} | {} |",
                cell(&attr.title),
                r.achieved_level,
                source_label(r.source()),
                cell(&r.justifications().join("; "))
            );
        }
    }

    let anomalous: Vec<_> = rubric
        .attributes()
        .filter_map(|attr| a.rating(&attr.id).map(|r| (attr, r)))
        .filter(|(_, r)| !r.anomalies.is_empty())
        .collect();
    if !anomalous.is_empty() {
        out.push_str("\n## Anomalies\n\n");
        out.push_str("Levels below were marked satisfied above an unmet level and are not counted.\n\n");
        for (attr, r) in anomalous {
            let _ = writeln!(
                out,
                "- {} (`{}`): level {} not met; satisfied above it: {}",
                normalize_display(&attr.title),
                attr.id,
                r.achieved_level + 1,
                join_levels(&r.anomalies)
            );
        }
    }
    out
}

/// Level tables of a rubric, one section per dimension.
pub fn render_rubric(rubric: &Rubric) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {} (`{}`)", normalize_display(&rubric.title), rubric.id);
    out.push('\n');
    let _ = writeln!(
        out,
        "{} dimensions, {} attributes, levels 0..{}",
        rubric.dimensions.len(),
        rubric.attribute_count(),
        rubric.max_level
    );
    if !rubric.scale.is_empty() {
        out.push_str("\n## Maturity scale\n\n");
        for s in &rubric.scale {
            let _ = writeln!(out, "- ({}) {}", s.level, normalize_display(&s.text));
        }
    }
    for dim in &rubric.dimensions {
        out.push('\n');
        let _ = writeln!(out, "## {}", normalize_display(&dim.title));
        if !dim.description.is_empty() {
            out.push('\n');
            let _ = writeln!(out, "{}", normalize_display(&dim.description));
        }
        for attr in &dim.attributes {
            out.push('\n');
            let _ = writeln!(
                out,
                "### {} (`{}`, weight {})",
                normalize_display(&attr.title),
                attr.id,
                attr.default_weight
            );
            out.push('\n');
            out.push_str("| Level | Statement | Check |\n");
            out.push_str("|---|---|---|\n");
            for stmt in &attr.levels {
                let check = attr.binding(stmt.level).map(|c| c.as_str()).unwrap_or("-");
                let _ = writeln!(out, "| {} | {} | {} |", stmt.level, cell(&stmt.text), check);
            }
        }
    }
    out
}

pub fn render_summary(summary: &BatchSummary) -> String {
    let mut out = String::new();
    out.push_str("# Batch summary\n\n");
    let _ = writeln!(
        out,
        "- Rubric: {}",
        summary.rubric_id.as_deref().unwrap_or("(none)")
    );
    let _ = writeln!(
        out,
        "- Passing all minimums: {} of {}",
        summary.totals.passing, summary.totals.total
    );
    if !summary.distributions.is_empty() {
        out.push_str("\n## Dimension scores\n\n");
        out.push_str("| Dimension | Min | Median | Max |\n");
        out.push_str("|---|---|---|---|\n");
        for d in &summary.distributions {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} |",
                cell(&d.dimension_id),
                d.min.display_2dp(),
                d.median.display_2dp(),
                d.max.display_2dp()
            );
        }
    }
    if !summary.failing.is_empty() {
        out.push_str("\n## Failing targets\n\n");
        for f in &summary.failing {
            let _ = writeln!(
                out,
                "- {}: {}",
                cell(f.label.as_deref().unwrap_or(&f.identifier)),
                f.failing_dimensions.join(", ")
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_collapses_spaces() {
        assert_eq!(
            normalize_display("persistent  identifier\n supported"),
            "persistent identifier supported"
        );
    }

    #[test]
    fn cells_escape_pipes() {
        assert_eq!(cell("a | b"), "a \\| b");
    }
}
