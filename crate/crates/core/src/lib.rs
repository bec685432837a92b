//! Accountability benchmark registry, audit documents, and system cards.
//!
//! The pipeline is: a [`Benchmark`] plus an [`AuditDocument`] are checked by
//! [`validate`], laid out by [`layout`] and drawn by [`render_svg`]; the
//! [`report`] module summarizes and diffs audits.

pub mod audit;
pub mod benchmark;
pub mod cli;
pub mod layout;
pub mod num;
pub mod report;
pub mod svg;

pub use audit::{
    parse_audit, scaffold_audit, scaffold_audit_on, serialize_audit, validate, AuditDocument, Entry, Finding,
    FindingKind, Outcome, OutcomeScale, Rating, Severity, ValidationReport,
};
pub use benchmark::{canonical_benchmark, format_code, load_benchmark, Benchmark, Criterion, CriterionCode};
pub use layout::{color_for, layout, layout_with, Color, LayoutParams};
pub use num::Scalar;
pub use report::{diff, summarize, AuditDiff, ReportFormat, SummaryReport};
pub use svg::render_svg;

/// Card geometry in double precision, used by the CLI and renderer.
pub type CardLayout = layout::Layout<f64>;
/// Card geometry in single precision.
pub type CardLayoutF32 = layout::Layout<f32>;
pub type Arc = layout::CriterionArc<f64>;
pub type ArcF32 = layout::CriterionArc<f32>;
