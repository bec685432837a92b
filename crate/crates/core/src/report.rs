//! Audit summaries and re-audit diffs.
//!
//! Summaries count outcomes per category, per aspect and per cell. They
//! deliberately carry no combined score or overall verdict: outcomes of
//! different criteria are not commensurable.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::audit::{validate, AuditDocument, Outcome, OutcomeScale, Rating, ValidationReport};
use crate::benchmark::{Benchmark, CriterionCode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Markdown,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "md" => Ok(ReportFormat::Markdown),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown format {other:?} (expected text, md, or json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatingCount {
    pub rating: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tally {
    /// One count per scale value, worst first.
    pub ratings: Vec<RatingCount>,
    pub not_applicable: usize,
    pub not_evaluated: usize,
}

impl Tally {
    fn empty(scale: OutcomeScale) -> Self {
        Self {
            ratings: scale.ratings().into_iter().map(|r| RatingCount { rating: r.to_string(), count: 0 }).collect(),
            not_applicable: 0,
            not_evaluated: 0,
        }
    }

    fn add(&mut self, outcome: Outcome, scale: OutcomeScale) {
        match outcome {
            Outcome::NotEvaluated => self.not_evaluated += 1,
            Outcome::NotApplicable => self.not_applicable += 1,
            Outcome::Evaluated(r) => {
                let i = scale.ratings().iter().position(|x| *x == r).expect("validated rating");
                self.ratings[i].count += 1;
            }
        }
    }

    pub fn evaluated(&self) -> usize {
        self.ratings.iter().map(|r| r.count).sum()
    }

    pub fn total(&self) -> usize {
        self.evaluated() + self.not_applicable + self.not_evaluated
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupTally {
    pub name: String,
    pub tally: Tally,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellTally {
    pub category: String,
    pub aspect: String,
    pub tally: Tally,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionLine {
    pub code: CriterionCode,
    pub name: String,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryReport {
    pub system: String,
    pub auditor: String,
    pub date: String,
    pub benchmark_id: String,
    pub benchmark_version: String,
    pub scale: OutcomeScale,
    pub criteria: usize,
    pub evaluated: usize,
    /// Evaluated criteria over all criteria.
    pub coverage: f64,
    pub per_category: Vec<GroupTally>,
    pub per_aspect: Vec<GroupTally>,
    pub cells: Vec<CellTally>,
    /// The lowest evaluated value present, if any.
    pub worst_outcome: Option<Rating>,
    pub worst_list: Vec<CriterionCode>,
    pub lines: Vec<CriterionLine>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReportError {
    #[error("audit has validation errors:\n{0}")]
    Invalid(ValidationReport),
    #[error("audits reference different benchmarks ({old:?} vs {new:?})")]
    BenchmarkMismatch { old: String, new: String },
}

pub fn summarize(doc: &AuditDocument, benchmark: &Benchmark) -> Result<SummaryReport, ReportError> {
    let report = validate(doc, benchmark, false);
    if !report.is_valid() {
        return Err(ReportError::Invalid(report));
    }
    let scale = doc.scale;
    let mut per_category: Vec<GroupTally> = benchmark
        .categories()
        .iter()
        .map(|c| GroupTally { name: c.name.clone(), tally: Tally::empty(scale) })
        .collect();
    let mut per_aspect: Vec<GroupTally> =
        benchmark.aspects().iter().map(|a| GroupTally { name: a.name.clone(), tally: Tally::empty(scale) }).collect();
    let mut cells = Vec::new();
    let mut lines = Vec::with_capacity(benchmark.len());

    for category in benchmark.categories() {
        for aspect in benchmark.aspects() {
            let mut tally = Tally::empty(scale);
            for criterion in benchmark.cell_by_index(category.index, aspect.index) {
                let outcome = doc.outcome_for(criterion.code);
                tally.add(outcome, scale);
                per_category[category.index as usize - 1].tally.add(outcome, scale);
                per_aspect[aspect.index as usize - 1].tally.add(outcome, scale);
                lines.push(CriterionLine { code: criterion.code, name: criterion.name.clone(), outcome });
            }
            cells.push(CellTally { category: category.name.clone(), aspect: aspect.name.clone(), tally });
        }
    }

    let worst_outcome = lines.iter().filter_map(|l| l.outcome.rating()).min();
    let worst_list = match worst_outcome {
        Some(w) => lines.iter().filter(|l| l.outcome.rating() == Some(w)).map(|l| l.code).collect(),
        None => Vec::new(),
    };
    let evaluated = lines.iter().filter(|l| l.outcome.rating().is_some()).count();
    let coverage = if lines.is_empty() { 0.0 } else { evaluated as f64 / lines.len() as f64 };

    Ok(SummaryReport {
        system: doc.system.name.clone(),
        auditor: doc.audit.auditor.clone(),
        date: doc.audit.date.format("%Y-%m-%d").to_string(),
        benchmark_id: benchmark.id().to_string(),
        benchmark_version: benchmark.version().to_string(),
        scale,
        criteria: lines.len(),
        evaluated,
        coverage,
        per_category,
        per_aspect,
        cells,
        worst_outcome,
        worst_list,
        lines,
    })
}

fn tally_text(t: &Tally) -> String {
    let mut parts: Vec<String> = t.ratings.iter().map(|r| format!("{}={}", r.rating, r.count)).collect();
    parts.push(format!("na={}", t.not_applicable));
    parts.push(format!("unevaluated={}", t.not_evaluated));
    parts.join(" ")
}

fn percent(fraction: f64) -> String {
    format!("{:.1}%", fraction * 100.0)
}

impl SummaryReport {
    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Text => self.to_text(),
            ReportFormat::Markdown => self.to_markdown(),
            ReportFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
                s.push('\n');
                s
            }
        }
    }

    fn worst_text(&self) -> String {
        match self.worst_outcome {
            Some(w) => {
                let codes: Vec<String> = self.worst_list.iter().map(|c| c.to_string()).collect();
                format!("{} ({}): {}", w, w.label(), codes.join(", "))
            }
            None => "none evaluated".to_string(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "System card summary: {}", self.system);
        let _ = writeln!(s, "Benchmark: {} {}", self.benchmark_id, self.benchmark_version);
        let _ = writeln!(s, "Auditor: {}  Date: {}  Scale: {}", self.auditor, self.date, self.scale);
        let _ = writeln!(s, "Coverage: {}/{} evaluated ({})", self.evaluated, self.criteria, percent(self.coverage));
        let _ = writeln!(s, "Worst: {}", self.worst_text());
        let _ = writeln!(s, "\nBy category:");
        for g in &self.per_category {
            let _ = writeln!(s, "  {:<12} {}", g.name, tally_text(&g.tally));
        }
        let _ = writeln!(s, "\nBy aspect:");
        for g in &self.per_aspect {
            let _ = writeln!(s, "  {:<12} {}", g.name, tally_text(&g.tally));
        }
        let _ = writeln!(s, "\nCriteria:");
        for l in &self.lines {
            let _ = writeln!(s, "  {} {:<30} {}", l.code, l.name, l.outcome);
        }
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# System card summary: {}\n", self.system);
        let _ = writeln!(s, "- Benchmark: `{}` {}", self.benchmark_id, self.benchmark_version);
        let _ = writeln!(s, "- Auditor: {}", self.auditor);
        let _ = writeln!(s, "- Date: {}", self.date);
        let _ = writeln!(s, "- Scale: {}", self.scale);
        let _ = writeln!(s, "- Coverage: {}/{} evaluated ({})", self.evaluated, self.criteria, percent(self.coverage));
        let _ = writeln!(s, "- Worst: {}", self.worst_text());

        let rating_headers: Vec<String> = self.scale.ratings().iter().map(|r| r.to_string()).collect();
        let n_aspects = self.per_aspect.len();
        for (ci, category) in self.per_category.iter().enumerate() {
            let _ = writeln!(s, "\n## {}\n", category.name);
            let _ = writeln!(s, "| Aspect | {} | n/a | not evaluated |", rating_headers.join(" | "));
            let _ = writeln!(s, "|---|{}---|---|", "---|".repeat(rating_headers.len()));
            for cell in &self.cells[ci * n_aspects..(ci + 1) * n_aspects] {
                let counts: Vec<String> = cell.tally.ratings.iter().map(|r| r.count.to_string()).collect();
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} |",
                    cell.aspect,
                    counts.join(" | "),
                    cell.tally.not_applicable,
                    cell.tally.not_evaluated
                );
            }
        }

        let _ = writeln!(s, "\n## Criteria\n");
        let _ = writeln!(s, "| Code | Criterion | Outcome |");
        let _ = writeln!(s, "|---|---|---|");
        for l in &self.lines {
            let _ = writeln!(s, "| {} | {} | {} |", l.code, l.name, l.outcome);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutcomeChange {
    pub code: CriterionCode,
    pub old: Outcome,
    pub new: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldChange {
    pub field: String,
    pub old: String,
    pub new: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct AuditDiff {
    pub changed: Vec<OutcomeChange>,
    pub added: Vec<CriterionCode>,
    pub removed: Vec<CriterionCode>,
    pub metadata_changes: Vec<FieldChange>,
}

impl AuditDiff {
    pub fn is_empty(&self) -> bool {
        self.changed.is_empty() && self.added.is_empty() && self.removed.is_empty() && self.metadata_changes.is_empty()
    }
}

fn metadata(doc: &AuditDocument) -> [(&'static str, String); 10] {
    [
        ("schema_version", doc.schema_version.clone()),
        ("system.name", doc.system.name.clone()),
        ("system.version", doc.system.version.clone()),
        ("system.owner", doc.system.owner.clone()),
        ("system.description", doc.system.description.clone()),
        ("audit.auditor", doc.audit.auditor.clone()),
        ("audit.date", doc.audit.date.format("%Y-%m-%d").to_string()),
        ("audit.type", doc.audit.kind.as_str().to_string()),
        ("benchmark.version", doc.benchmark_ref.version.clone()),
        ("scale", doc.scale.to_string()),
    ]
}

/// Entry-level comparison of two audits of the same benchmark.
pub fn diff(old: &AuditDocument, new: &AuditDocument) -> Result<AuditDiff, ReportError> {
    if old.benchmark_ref.id != new.benchmark_ref.id {
        return Err(ReportError::BenchmarkMismatch {
            old: old.benchmark_ref.id.clone(),
            new: new.benchmark_ref.id.clone(),
        });
    }
    let old_entries: BTreeMap<_, _> = old.entries.iter().map(|e| (e.code, e.outcome)).collect();
    let new_entries: BTreeMap<_, _> = new.entries.iter().map(|e| (e.code, e.outcome)).collect();

    let mut out = AuditDiff::default();
    for (code, old_outcome) in &old_entries {
        match new_entries.get(code) {
            Some(new_outcome) if new_outcome != old_outcome => {
                out.changed.push(OutcomeChange { code: *code, old: *old_outcome, new: *new_outcome })
            }
            Some(_) => {}
            None => out.removed.push(*code),
        }
    }
    out.added = new_entries.keys().filter(|c| !old_entries.contains_key(c)).copied().collect();
    out.metadata_changes = metadata(old)
        .into_iter()
        .zip(metadata(new))
        .filter(|((_, a), (_, b))| a != b)
        .map(|((field, a), (_, b))| FieldChange { field: field.to_string(), old: a, new: b })
        .collect();
    Ok(out)
}

impl AuditDiff {
    pub fn render(&self, format: ReportFormat) -> String {
        let mut s = String::new();
        let codes = |v: &[CriterionCode]| {
            if v.is_empty() {
                "(none)".to_string()
            } else {
                v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
            }
        };
        match format {
            ReportFormat::Json => {
                s = serde_json::to_string_pretty(self).expect("diff serializes");
                s.push('\n');
            }
            ReportFormat::Text => {
                if self.is_empty() {
                    s.push_str("no differences\n");
                    return s;
                }
                let _ = writeln!(s, "changed: {}", self.changed.len());
                for c in &self.changed {
                    let _ = writeln!(s, "  {}: {} -> {}", c.code, c.old, c.new);
                }
                let _ = writeln!(s, "added: {}", codes(&self.added));
                let _ = writeln!(s, "removed: {}", codes(&self.removed));
                let _ = writeln!(s, "metadata: {}", self.metadata_changes.len());
                for m in &self.metadata_changes {
                    let _ = writeln!(s, "  {}: {:?} -> {:?}", m.field, m.old, m.new);
                }
            }
            ReportFormat::Markdown => {
                let _ = writeln!(s, "# Audit diff\n");
                let _ = writeln!(s, "## Changed outcomes\n");
                let _ = writeln!(s, "| Code | Old | New |\n|---|---|---|");
                for c in &self.changed {
                    let _ = writeln!(s, "| {} | {} | {} |", c.code, c.old, c.new);
                }
                let _ = writeln!(s, "\n## Entries\n");
                let _ = writeln!(s, "- Added: {}", codes(&self.added));
                let _ = writeln!(s, "- Removed: {}", codes(&self.removed));
                let _ = writeln!(s, "\n## Metadata\n");
                let _ = writeln!(s, "| Field | Old | New |\n|---|---|---|");
                for m in &self.metadata_changes {
                    let _ = writeln!(s, "| {} | {} | {} |", m.field, m.old, m.new);
                }
            }
        }
        s
    }
}
