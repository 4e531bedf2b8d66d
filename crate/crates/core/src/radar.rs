//! Deterministic SVG radar plots of dimension scores.
//!
//! Axes follow rubric dimension order, starting at twelve o'clock and
//! proceeding clockwise. Rings sit at every integer level `0..=max_level`;
//! a vertex for score `s` lies at radius `s / max_level * R`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt::Write;

use crate::rational::Rational;
use crate::rubric::Rubric;
use crate::scoring::{shared_rubric, Assessment};

const PALETTE: &[&str] = &[
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RenderError {
    #[error("nothing to render: at least one assessment is required")]
    NoSeries,
    #[error("cannot overlay assessments from different rubrics: {0}")]
    MixedRubrics(String),
    #[error("assessment for `{target}` was made with rubric `{found}`, not `{expected}`")]
    RubricMismatch {
        target: String,
        found: String,
        expected: String,
    },
    #[error("{0} series styles given for {1} assessments")]
    SeriesCount(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesStyle {
    pub label: String,
    pub color: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadarConfig {
    /// Width and height of the plot square in pixels.
    pub size: f64,
    /// Space reserved around the outer ring for axis labels.
    pub margin: f64,
    /// Per-series label and color; defaults come from the targets.
    pub series: Vec<SeriesStyle>,
    /// Minimum score per axis, in rubric dimension order.
    pub minimums: Option<Vec<Rational>>,
}

impl Default for RadarConfig {
    fn default() -> Self {
        RadarConfig {
            size: 520.0,
            margin: 110.0,
            series: Vec::new(),
            minimums: None,
        }
    }
}

impl RadarConfig {
    pub fn radius(&self) -> f64 {
        self.size / 2.0 - self.margin
    }

    pub fn center(&self) -> (f64, f64) {
        (self.size / 2.0, self.size / 2.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadarChart {
    pub svg: String,
    pub warnings: Vec<String>,
}

/// A point on the plot, in pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

/// Vertex position for `value` on axis `index` of `axes`.
pub fn vertex(config: &RadarConfig, axes: usize, index: usize, value: f64, max_level: u8) -> Point {
    let (cx, cy) = config.center();
    let r = value / f64::from(max_level) * config.radius();
    let angle = -PI / 2.0 + 2.0 * PI * index as f64 / axes as f64;
    Point {
        x: cx + r * libm::cos(angle),
        y: cy + r * libm::sin(angle),
    }
}

/// Two-decimal fixed formatting with negative zero folded to zero.
fn px(v: f64) -> String {
    let s = format!("{:.2}", v);
    if s == "-0.00" {
        String::from("0.00")
    } else {
        s
    }
}

fn points(pts: &[Point]) -> String {
    let mut out = String::new();
    for (i, p) in pts.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&px(p.x));
        out.push(',');
        out.push_str(&px(p.y));
    }
    out
}

pub(crate) fn escape_xml(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn series_styles(
    assessments: &[Assessment],
    config: &RadarConfig,
) -> Result<Vec<SeriesStyle>, RenderError> {
    if config.series.is_empty() {
        return Ok(assessments
            .iter()
            .enumerate()
            .map(|(i, a)| SeriesStyle {
                label: a.target.display_label().into(),
                color: PALETTE[i % PALETTE.len()].into(),
            })
            .collect());
    }
    if config.series.len() != assessments.len() {
        return Err(RenderError::SeriesCount(config.series.len(), assessments.len()));
    }
    Ok(config.series.clone())
}

fn scores_for(rubric: &Rubric, a: &Assessment) -> Vec<f64> {
    rubric
        .dimensions
        .iter()
        .map(|d| a.dimension_score(&d.id).map(|s| s.score.to_f64()).unwrap_or(0.0))
        .collect()
}

pub fn render_radar(
    rubric: &Rubric,
    assessments: &[Assessment],
    config: &RadarConfig,
) -> Result<RadarChart, RenderError> {
    if assessments.is_empty() {
        return Err(RenderError::NoSeries);
    }
    shared_rubric(assessments).map_err(|e| RenderError::MixedRubrics(format!("{e}")))?;
    for a in assessments {
        if a.target.rubric_id != rubric.id {
            return Err(RenderError::RubricMismatch {
                target: a.target.identifier.clone(),
                found: a.target.rubric_id.clone(),
                expected: rubric.id.clone(),
            });
        }
    }
    let styles = series_styles(assessments, config)?;
    if rubric.dimensions.len() < 3 {
        let warning = format!(
            "rubric `{}` has {} dimensions; a radar needs at least 3, rendering bars instead",
            rubric.id,
            rubric.dimensions.len()
        );
        return Ok(RadarChart {
            svg: render_bars(rubric, assessments, config, &styles),
            warnings: alloc::vec![warning],
        });
    }
    Ok(RadarChart {
        svg: render_polygons(rubric, assessments, config, &styles),
        warnings: Vec::new(),
    })
}

fn legend(out: &mut String, styles: &[SeriesStyle], top: f64) {
    out.push_str("  <g class=\"legend\">\n");
    for (i, s) in styles.iter().enumerate() {
        let y = top + 22.0 * i as f64;
        let _ = writeln!(
            out,
            "    <rect class=\"legend-swatch\" x=\"16.00\" y=\"{}\" width=\"14.00\" height=\"14.00\" fill=\"{}\" fill-opacity=\"0.35\" stroke=\"{}\"/>",
            px(y),
            escape_xml(&s.color),
            escape_xml(&s.color)
        );
        let _ = writeln!(
            out,
            "    <text class=\"legend-label\" x=\"38.00\" y=\"{}\" font-size=\"12\">{}</text>",
            px(y + 11.0),
            escape_xml(&s.label)
        );
    }
    out.push_str("  </g>\n");
}

fn header(out: &mut String, width: f64, height: f64, title: &str) {
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" font-family=\"sans-serif\">",
        w = px(width),
        h = px(height)
    );
    let _ = writeln!(out, "  <title>{}</title>", escape_xml(title));
    let _ = writeln!(
        out,
        "  <rect class=\"background\" x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>",
        px(width),
        px(height)
    );
}

fn render_polygons(
    rubric: &Rubric,
    assessments: &[Assessment],
    config: &RadarConfig,
    styles: &[SeriesStyle],
) -> String {
    let n = rubric.dimensions.len();
    let max = rubric.max_level;
    let (cx, cy) = config.center();
    let height = config.size + 22.0 * styles.len() as f64 + 16.0;
    let mut out = String::new();
    header(&mut out, config.size, height, &rubric.title);

    out.push_str("  <g class=\"rings\">\n");
    for level in 0..=max {
        let ring: Vec<Point> = (0..n)
            .map(|i| vertex(config, n, i, f64::from(level), max))
            .collect();
        let _ = writeln!(
            out,
            "    <polygon class=\"ring\" data-level=\"{level}\" points=\"{}\" fill=\"none\" stroke=\"#cccccc\" stroke-width=\"1\"/>",
            points(&ring)
        );
        let label_at = vertex(config, n, 0, f64::from(level), max);
        let _ = writeln!(
            out,
            "    <text class=\"ring-label\" x=\"{}\" y=\"{}\" font-size=\"10\" fill=\"#888888\">{level}</text>",
            px(label_at.x + 4.0),
            px(label_at.y - 2.0)
        );
    }
    out.push_str("  </g>\n");

    out.push_str("  <g class=\"axes\">\n");
    for (i, dim) in rubric.dimensions.iter().enumerate() {
        let end = vertex(config, n, i, f64::from(max), max);
        let _ = writeln!(
            out,
            "    <line class=\"axis\" data-dimension=\"{}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#999999\" stroke-width=\"1\"/>",
            escape_xml(&dim.id),
            px(cx),
            px(cy),
            px(end.x),
            px(end.y)
        );
        let label = vertex(config, n, i, f64::from(max) * 1.12, max);
        let dx = label.x - cx;
        let anchor = if dx > 1.0 {
            "start"
        } else if dx < -1.0 {
            "end"
        } else {
            "middle"
        };
        let _ = writeln!(
            out,
            "    <text class=\"axis-label\" x=\"{}\" y=\"{}\" text-anchor=\"{anchor}\" dominant-baseline=\"middle\" font-size=\"13\">{}</text>",
            px(label.x),
            px(label.y),
            escape_xml(&dim.title)
        );
    }
    out.push_str("  </g>\n");

    if let Some(minimums) = &config.minimums {
        let pts: Vec<Point> = (0..n)
            .map(|i| {
                let m = minimums.get(i).map(Rational::to_f64).unwrap_or(0.0);
                vertex(config, n, i, m, max)
            })
            .collect();
        let _ = writeln!(
            out,
            "  <polygon class=\"minimum\" points=\"{}\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>",
            points(&pts)
        );
    }

    out.push_str("  <g class=\"series\">\n");
    for (si, (a, style)) in assessments.iter().zip(styles).enumerate() {
        let scores = scores_for(rubric, a);
        let pts: Vec<Point> = scores
            .iter()
            .enumerate()
            .map(|(i, s)| vertex(config, n, i, *s, max))
            .collect();
        let _ = writeln!(
            out,
            "    <polygon class=\"series\" data-series=\"{si}\" data-label=\"{}\" points=\"{}\" fill=\"{c}\" fill-opacity=\"0.25\" stroke=\"{c}\" stroke-width=\"2\"/>",
            escape_xml(&style.label),
            points(&pts),
            c = escape_xml(&style.color)
        );
    }
    out.push_str("  </g>\n");

    legend(&mut out, styles, config.size + 8.0);
    out.push_str("</svg>\n");
    out
}

fn render_bars(
    rubric: &Rubric,
    assessments: &[Assessment],
    config: &RadarConfig,
    styles: &[SeriesStyle],
) -> String {
    let max = rubric.max_level;
    let left = 160.0;
    let plot_width = config.size - left - 24.0;
    let bar_h = 14.0;
    let group_h = bar_h * styles.len() as f64 + 12.0;
    let plot_h = group_h * rubric.dimensions.len() as f64 + 24.0;
    let height = plot_h + 22.0 * styles.len() as f64 + 16.0;
    let mut out = String::new();
    header(&mut out, config.size, height, &rubric.title);

    out.push_str("  <g class=\"rings\">\n");
    for level in 0..=max {
        let x = left + plot_width * f64::from(level) / f64::from(max);
        let _ = writeln!(
            out,
            "    <line class=\"ring\" data-level=\"{level}\" x1=\"{x}\" y1=\"12.00\" x2=\"{x}\" y2=\"{}\" stroke=\"#cccccc\"/>",
            px(plot_h),
            x = px(x)
        );
    }
    out.push_str("  </g>\n");

    out.push_str("  <g class=\"bars\">\n");
    for (di, dim) in rubric.dimensions.iter().enumerate() {
        let top = 12.0 + group_h * di as f64;
        let _ = writeln!(
            out,
            "    <text class=\"axis-label\" x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"13\">{}</text>",
            px(left - 8.0),
            px(top + group_h / 2.0),
            escape_xml(&dim.title)
        );
        for (si, (a, style)) in assessments.iter().zip(styles).enumerate() {
            let score = a.dimension_score(&dim.id).map(|s| s.score.to_f64()).unwrap_or(0.0);
            let _ = writeln!(
                out,
                "    <rect class=\"bar\" data-series=\"{si}\" data-dimension=\"{}\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
                escape_xml(&dim.id),
                px(left),
                px(top + bar_h * si as f64),
                px(plot_width * score / f64::from(max)),
                px(bar_h - 2.0),
                escape_xml(&style.color)
            );
        }
    }
    out.push_str("  </g>\n");
    legend(&mut out, styles, plot_h + 8.0);
    out.push_str("</svg>\n");
    out
}
