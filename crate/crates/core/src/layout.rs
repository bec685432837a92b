//! System card geometry.
//!
//! Categories become concentric rings (first category innermost) and aspects
//! become equal sectors running clockwise from 12 o'clock. Each cell of `n`
//! criteria is split into `n` arcs of equal width with a fixed angular gap
//! before, between, and after them, so that `n·w + (n+1)·gap` equals the
//! sector span.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::audit::{validate, AuditDocument, Outcome, OutcomeScale, Rating, ValidationReport};
use crate::benchmark::{Benchmark, CriterionCode};
use crate::num::Scalar;

/// An sRGB color, rendered as lowercase `#rrggbb`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Color([u8; 3]);

impl Color {
    pub const fn rgb(r: u8, g: u8, b: u8) -> Self {
        Color([r, g, b])
    }

    pub fn hex(&self) -> String {
        self.to_string()
    }

    /// Parses `#rrggbb`; only lowercase hex digits are accepted.
    pub fn parse(text: &str) -> Option<Self> {
        let digits = text.strip_prefix('#')?;
        if digits.len() != 6 || !digits.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b)) {
            return None;
        }
        let byte = |i: usize| u8::from_str_radix(&digits[i..i + 2], 16).ok();
        Some(Color([byte(0)?, byte(2)?, byte(4)?]))
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [r, g, b] = self.0;
        write!(f, "#{r:02x}{g:02x}{b:02x}")
    }
}

impl Serialize for Color {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Red to green divergent ramp, worst first.
pub const PALETTE: [Color; 5] = [
    Color::rgb(0xd7, 0x19, 0x1c),
    Color::rgb(0xfd, 0xae, 0x61),
    Color::rgb(0xff, 0xff, 0xbf),
    Color::rgb(0xa6, 0xd9, 0x6a),
    Color::rgb(0x1a, 0x96, 0x41),
];
pub const WORST: Color = PALETTE[0];
pub const BEST: Color = PALETTE[4];
pub const NOT_APPLICABLE: Color = Color::rgb(0xbd, 0xbd, 0xbd);
pub const NOT_EVALUATED: Color = Color::rgb(0xf5, 0xf5, 0xf5);

/// Fill color for an outcome. Total: ratings that do not belong to `scale`
/// are clamped onto it.
pub fn color_for(outcome: Outcome, scale: OutcomeScale) -> Color {
    let rating = match outcome {
        Outcome::NotEvaluated => return NOT_EVALUATED,
        Outcome::NotApplicable => return NOT_APPLICABLE,
        Outcome::Evaluated(r) => r,
    };
    // Position on a 0..=4 ramp.
    let step = match rating {
        Rating::Fail => 0,
        Rating::Pass => 4,
        Rating::Likert(v) => v.clamp(1, 5) as usize - 1,
    };
    match scale {
        OutcomeScale::Likert5 => PALETTE[step],
        OutcomeScale::Binary if step >= 2 => BEST,
        OutcomeScale::Binary => WORST,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayoutParams<T> {
    pub hub_radius: T,
    pub ring_thickness: T,
    pub ring_gap: T,
    /// Angular gap around arcs, degrees.
    pub arc_gap: T,
    pub margin: T,
}

impl<T: Scalar> Default for LayoutParams<T> {
    fn default() -> Self {
        Self {
            hub_radius: T::lit(40.0),
            ring_thickness: T::lit(30.0),
            ring_gap: T::lit(6.0),
            arc_gap: T::lit(2.0),
            margin: T::lit(20.0),
        }
    }
}

/// One criterion's arc. Angles are degrees clockwise from 12 o'clock.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionArc<T> {
    pub criterion_code: CriterionCode,
    pub name: String,
    /// 1 = innermost ring.
    pub ring_index: u32,
    /// 1 = first sector clockwise from 12 o'clock.
    pub quarter_index: u32,
    pub ordinal: u32,
    pub start_angle: T,
    pub end_angle: T,
    pub inner_radius: T,
    pub outer_radius: T,
    pub outcome: Outcome,
    pub fill: Color,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ring<T> {
    pub index: u32,
    pub label: String,
    pub inner_radius: T,
    pub outer_radius: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sector<T> {
    pub index: u32,
    pub label: String,
    pub start_angle: T,
    pub end_angle: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LegendItem {
    pub label: String,
    pub color: Color,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Layout<T> {
    pub title: String,
    /// Width and height of the square card area.
    pub canvas_size: T,
    pub rings: Vec<Ring<T>>,
    pub sectors: Vec<Sector<T>>,
    /// Ordered by (ring, quarter, ordinal).
    pub arcs: Vec<CriterionArc<T>>,
    pub legend: Vec<LegendItem>,
}

impl<T: Scalar> Layout<T> {
    pub fn center(&self) -> T {
        self.canvas_size / T::lit(2.0)
    }
}

impl Outcome {
    fn legend_label(&self) -> &'static str {
        match self {
            Outcome::NotEvaluated => "not evaluated",
            Outcome::NotApplicable => "not applicable",
            Outcome::Evaluated(_) => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LayoutError {
    #[error("audit has validation errors:\n{0}")]
    Invalid(ValidationReport),
    #[error("cell ({category}, {aspect}) has {count} criteria; arc gaps leave no room in a {span}° sector")]
    Crowded { category: String, aspect: String, count: usize, span: f64 },
}

/// Lays out the card with the default geometry constants.
pub fn layout<T: Scalar>(benchmark: &Benchmark, doc: &AuditDocument) -> Result<Layout<T>, LayoutError> {
    layout_with(benchmark, doc, &LayoutParams::default())
}

pub fn layout_with<T: Scalar>(
    benchmark: &Benchmark,
    doc: &AuditDocument,
    params: &LayoutParams<T>,
) -> Result<Layout<T>, LayoutError> {
    let report = validate(doc, benchmark, false);
    if !report.is_valid() {
        return Err(LayoutError::Invalid(report));
    }

    let two = T::lit(2.0);
    let n_aspects = benchmark.aspects().len();
    let n_categories = benchmark.categories().len();
    let span = T::lit(360.0) / T::from_count(n_aspects);
    let gap = params.arc_gap;
    let ring_step = params.ring_thickness + params.ring_gap;

    let rings: Vec<Ring<T>> = benchmark
        .categories()
        .iter()
        .map(|c| {
            let inner = params.hub_radius + T::from_count(c.index as usize - 1) * ring_step;
            Ring {
                index: c.index,
                label: c.name.clone(),
                inner_radius: inner,
                outer_radius: inner + params.ring_thickness,
            }
        })
        .collect();
    let sectors: Vec<Sector<T>> = benchmark
        .aspects()
        .iter()
        .map(|a| {
            let start = T::from_count(a.index as usize - 1) * span;
            Sector { index: a.index, label: a.name.clone(), start_angle: start, end_angle: start + span }
        })
        .collect();

    let mut arcs = Vec::with_capacity(benchmark.len());
    for category in benchmark.categories() {
        let ring = &rings[category.index as usize - 1];
        for aspect in benchmark.aspects() {
            let cell = benchmark.cell_by_index(category.index, aspect.index);
            if cell.is_empty() {
                continue;
            }
            let n = T::from_count(cell.len());
            let width = (span - (n + T::one()) * gap) / n;
            if width <= T::zero() {
                return Err(LayoutError::Crowded {
                    category: category.name.clone(),
                    aspect: aspect.name.clone(),
                    count: cell.len(),
                    span: span.as_f64(),
                });
            }
            let sector_start = sectors[aspect.index as usize - 1].start_angle;
            for criterion in cell {
                let i = T::from_count(criterion.ordinal as usize);
                let start = sector_start + i * gap + (i - T::one()) * width;
                let outcome = doc.outcome_for(criterion.code);
                arcs.push(CriterionArc {
                    criterion_code: criterion.code,
                    name: criterion.name.clone(),
                    ring_index: category.index,
                    quarter_index: aspect.index,
                    ordinal: criterion.ordinal,
                    start_angle: start,
                    end_angle: start + width,
                    inner_radius: ring.inner_radius,
                    outer_radius: ring.outer_radius,
                    outcome,
                    fill: color_for(outcome, doc.scale),
                });
            }
        }
    }

    let canvas_size = two * (params.hub_radius + T::from_count(n_categories) * ring_step) + two * params.margin;

    let mut legend: Vec<LegendItem> = doc
        .scale
        .ratings()
        .into_iter()
        .map(|r| LegendItem {
            label: match r {
                Rating::Likert(v) => format!("{v} {}", r.label()),
                _ => r.label(),
            },
            color: color_for(Outcome::Evaluated(r), doc.scale),
        })
        .collect();
    for state in [Outcome::NotApplicable, Outcome::NotEvaluated] {
        legend.push(LegendItem { label: state.legend_label().to_string(), color: color_for(state, doc.scale) });
    }

    Ok(Layout { title: doc.system.name.clone(), canvas_size, rings, sectors, arcs, legend })
}
