//! Audit documents: one evaluation of one system against a benchmark.
//!
//! The JSON form is canonical: keys in a fixed order, entries sorted by
//! criterion code, two-space indentation and a trailing newline. Parsing
//! checks the type-level invariants (scale conformance, unique entry codes,
//! calendar dates); [`validate`] checks a document against a benchmark and
//! reports every problem as a typed finding instead of failing.

use std::collections::HashSet;
use std::fmt;

use chrono::NaiveDate;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::benchmark::{Benchmark, CriterionCode};

pub const SCHEMA_VERSION: &str = "1.0";

/// Outcome scale declared once per document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutcomeScale {
    Binary,
    Likert5,
}

impl OutcomeScale {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutcomeScale::Binary => "binary",
            OutcomeScale::Likert5 => "likert5",
        }
    }

    pub fn admits(&self, rating: Rating) -> bool {
        match (self, rating) {
            (OutcomeScale::Binary, Rating::Fail | Rating::Pass) => true,
            (OutcomeScale::Likert5, Rating::Likert(v)) => (1..=5).contains(&v),
            _ => false,
        }
    }

    /// Every admissible rating, worst first.
    pub fn ratings(&self) -> Vec<Rating> {
        match self {
            OutcomeScale::Binary => vec![Rating::Fail, Rating::Pass],
            OutcomeScale::Likert5 => (1..=5).map(Rating::Likert).collect(),
        }
    }
}

impl fmt::Display for OutcomeScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for OutcomeScale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "binary" => Ok(OutcomeScale::Binary),
            "likert5" => Ok(OutcomeScale::Likert5),
            other => Err(format!("unknown scale {other:?} (expected binary or likert5)")),
        }
    }
}

/// An evaluated value. `Likert` is unchecked here; conformance to the
/// document's scale is enforced by parsing and by [`validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rating {
    Fail,
    Pass,
    Likert(u8),
}

impl Rating {
    /// Human label: fail/pass, or poor..excellent on the Likert scale.
    pub fn label(&self) -> String {
        match self {
            Rating::Fail => "fail".into(),
            Rating::Pass => "pass".into(),
            Rating::Likert(v) => match v {
                1 => "poor".into(),
                2 => "fair".into(),
                3 => "good".into(),
                4 => "very good".into(),
                5 => "excellent".into(),
                other => format!("likert {other}"),
            },
        }
    }
}

impl fmt::Display for Rating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rating::Fail => f.write_str("fail"),
            Rating::Pass => f.write_str("pass"),
            Rating::Likert(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Outcome {
    #[default]
    NotEvaluated,
    NotApplicable,
    Evaluated(Rating),
}

impl Outcome {
    pub fn rating(&self) -> Option<Rating> {
        match self {
            Outcome::Evaluated(r) => Some(*r),
            _ => None,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::NotEvaluated => f.write_str("not evaluated"),
            Outcome::NotApplicable => f.write_str("n/a"),
            Outcome::Evaluated(r) => r.fmt(f),
        }
    }
}

impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Outcome::NotEvaluated => serializer.serialize_none(),
            Outcome::NotApplicable => serializer.serialize_str("na"),
            Outcome::Evaluated(Rating::Fail) => serializer.serialize_str("fail"),
            Outcome::Evaluated(Rating::Pass) => serializer.serialize_str("pass"),
            Outcome::Evaluated(Rating::Likert(v)) => serializer.serialize_u8(*v),
        }
    }
}

impl Serialize for Rating {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        Outcome::Evaluated(*self).serialize(serializer)
    }
}

struct OutcomeVisitor;

impl<'de> Visitor<'de> for OutcomeVisitor {
    type Value = Outcome;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("\"pass\", \"fail\", \"na\", an integer rating, or null")
    }

    fn visit_unit<E: de::Error>(self) -> Result<Outcome, E> {
        Ok(Outcome::NotEvaluated)
    }

    fn visit_none<E: de::Error>(self) -> Result<Outcome, E> {
        Ok(Outcome::NotEvaluated)
    }

    fn visit_some<D: Deserializer<'de>>(self, d: D) -> Result<Outcome, D::Error> {
        d.deserialize_any(self)
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Outcome, E> {
        match v {
            "pass" => Ok(Outcome::Evaluated(Rating::Pass)),
            "fail" => Ok(Outcome::Evaluated(Rating::Fail)),
            "na" => Ok(Outcome::NotApplicable),
            other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
        }
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Outcome, E> {
        u8::try_from(v)
            .map(|v| Outcome::Evaluated(Rating::Likert(v)))
            .map_err(|_| E::invalid_value(de::Unexpected::Unsigned(v), &"a rating between 1 and 5"))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Outcome, E> {
        match u64::try_from(v) {
            Ok(v) => self.visit_u64(v),
            Err(_) => Err(E::invalid_value(de::Unexpected::Signed(v), &"a rating between 1 and 5")),
        }
    }
}

impl<'de> Deserialize<'de> for Outcome {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(OutcomeVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub code: CriterionCode,
    #[serde(default)]
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl Entry {
    pub fn new(code: CriterionCode, outcome: Outcome) -> Self {
        Self { code, outcome, evidence: None, notes: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemInfo {
    pub name: String,
    pub version: String,
    pub owner: String,
    pub description: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditType {
    #[default]
    Internal,
    External,
}

impl AuditType {
    pub fn as_str(&self) -> &'static str {
        match self {
            AuditType::Internal => "internal",
            AuditType::External => "external",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditInfo {
    pub auditor: String,
    #[serde(serialize_with = "serialize_date")]
    pub date: NaiveDate,
    #[serde(rename = "type")]
    pub kind: AuditType,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkRef {
    pub id: String,
    pub version: String,
}

impl BenchmarkRef {
    pub fn of(benchmark: &Benchmark) -> Self {
        Self { id: benchmark.id().to_string(), version: benchmark.version().to_string() }
    }
}

/// Field order here is the canonical key order of the JSON form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditDocument {
    pub schema_version: String,
    pub system: SystemInfo,
    pub audit: AuditInfo,
    #[serde(rename = "benchmark")]
    pub benchmark_ref: BenchmarkRef,
    pub scale: OutcomeScale,
    pub entries: Vec<Entry>,
}

impl AuditDocument {
    pub fn entry(&self, code: CriterionCode) -> Option<&Entry> {
        self.entries.iter().find(|e| e.code == code)
    }

    /// Outcome recorded for `code`; a missing entry counts as not evaluated.
    pub fn outcome_for(&self, code: CriterionCode) -> Outcome {
        self.entry(code).map(|e| e.outcome).unwrap_or_default()
    }

    /// Sorts entries by code, the order parsing produces.
    pub fn normalize(&mut self) {
        self.entries.sort_by_key(|e| e.code);
    }
}

fn serialize_date<S: Serializer>(date: &NaiveDate, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(&date.format("%Y-%m-%d"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAuditInfo {
    auditor: String,
    date: String,
    #[serde(rename = "type")]
    kind: AuditType,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    schema_version: String,
    system: SystemInfo,
    audit: RawAuditInfo,
    benchmark: BenchmarkRef,
    scale: OutcomeScale,
    entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unsupported schema_version {0:?} (expected \"{SCHEMA_VERSION}\")")]
    SchemaVersion(String),
    #[error("invalid date {0:?}: expected a calendar date YYYY-MM-DD")]
    BadDate(String),
    #[error("duplicate entry for criterion {0}")]
    DuplicateEntry(CriterionCode),
    #[error("criterion {code} outcome {rating} is outside the {scale} scale")]
    OutOfScale { code: CriterionCode, rating: Rating, scale: OutcomeScale },
}

/// Parses a strict `YYYY-MM-DD` calendar date.
pub fn parse_date(text: &str) -> Result<NaiveDate, AuditError> {
    let b = text.as_bytes();
    let shape_ok = b.len() == 10
        && b[4] == b'-'
        && b[7] == b'-'
        && b.iter().enumerate().all(|(i, c)| i == 4 || i == 7 || c.is_ascii_digit());
    if !shape_ok {
        return Err(AuditError::BadDate(text.to_string()));
    }
    NaiveDate::parse_from_str(text, "%Y-%m-%d").map_err(|_| AuditError::BadDate(text.to_string()))
}

/// Parses an audit document. Entries come back sorted by code.
pub fn parse_audit(document_text: &str) -> Result<AuditDocument, AuditError> {
    let raw: RawDocument = serde_json::from_str(document_text).map_err(|e| AuditError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(AuditError::SchemaVersion(raw.schema_version));
    }
    let date = parse_date(&raw.audit.date)?;

    let mut seen = HashSet::new();
    for entry in &raw.entries {
        if !seen.insert(entry.code) {
            return Err(AuditError::DuplicateEntry(entry.code));
        }
        if let Outcome::Evaluated(rating) = entry.outcome {
            if !raw.scale.admits(rating) {
                return Err(AuditError::OutOfScale { code: entry.code, rating, scale: raw.scale });
            }
        }
    }

    let mut doc = AuditDocument {
        schema_version: raw.schema_version,
        system: raw.system,
        audit: AuditInfo { auditor: raw.audit.auditor, date, kind: raw.audit.kind },
        benchmark_ref: raw.benchmark,
        scale: raw.scale,
        entries: raw.entries,
    };
    doc.normalize();
    Ok(doc)
}

/// Canonical JSON text: fixed key order, entries sorted by code, two-space
/// indent, trailing newline.
pub fn serialize_audit(doc: &AuditDocument) -> String {
    let mut sorted = doc.clone();
    sorted.entries.sort_by_key(|e| e.code);
    let mut text = serde_json::to_string_pretty(&sorted).expect("audit serializes");
    text.push('\n');
    text
}

/// A fresh document with one not-evaluated entry per criterion.
pub fn scaffold_audit(benchmark: &Benchmark, system_name: &str, scale: OutcomeScale) -> AuditDocument {
    scaffold_audit_on(benchmark, system_name, scale, chrono::Local::now().date_naive())
}

pub fn scaffold_audit_on(
    benchmark: &Benchmark,
    system_name: &str,
    scale: OutcomeScale,
    date: NaiveDate,
) -> AuditDocument {
    AuditDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        system: SystemInfo { name: system_name.to_string(), ..Default::default() },
        audit: AuditInfo { auditor: String::new(), date, kind: AuditType::Internal },
        benchmark_ref: BenchmarkRef::of(benchmark),
        scale,
        entries: benchmark.criteria().iter().map(|c| Entry::new(c.code, Outcome::NotEvaluated)).collect(),
    }
}

/// Errors sort before warnings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FindingKind {
    BenchmarkMismatch,
    UnknownCriterion,
    DuplicateEntry,
    OutOfScale,
    MissingEntry,
    NotEvaluated,
    MissingJustification,
}

impl FindingKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FindingKind::BenchmarkMismatch => "benchmark-mismatch",
            FindingKind::UnknownCriterion => "unknown-criterion",
            FindingKind::DuplicateEntry => "duplicate-entry",
            FindingKind::OutOfScale => "out-of-scale",
            FindingKind::MissingEntry => "missing-entry",
            FindingKind::NotEvaluated => "not-evaluated",
            FindingKind::MissingJustification => "missing-justification",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub severity: Severity,
    pub code: FindingKind,
    pub criterion: Option<CriterionCode>,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]: {}", self.severity, self.code.as_str(), self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        !self.findings.iter().any(|f| f.severity == Severity::Error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Warning)
    }

    pub fn count(&self, kind: FindingKind) -> usize {
        self.findings.iter().filter(|f| f.code == kind).count()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for finding in &self.findings {
            writeln!(f, "{finding}")?;
        }
        write!(f, "{} error(s), {} warning(s)", self.errors().count(), self.warnings().count())
    }
}

/// Checks `doc` against `benchmark`. Completeness problems are warnings,
/// escalated to errors when `strict` is set; impossible data is always an
/// error.
pub fn validate(doc: &AuditDocument, benchmark: &Benchmark, strict: bool) -> ValidationReport {
    let soft = if strict { Severity::Error } else { Severity::Warning };
    let mut findings = Vec::new();
    let mut push =
        |severity, code, criterion, message: String| findings.push(Finding { severity, code, criterion, message });

    if doc.benchmark_ref.id != benchmark.id() {
        push(
            Severity::Error,
            FindingKind::BenchmarkMismatch,
            None,
            format!(
                "audit references benchmark id {:?} but was checked against {:?}",
                doc.benchmark_ref.id,
                benchmark.id()
            ),
        );
    }
    if doc.benchmark_ref.version != benchmark.version() {
        push(
            Severity::Error,
            FindingKind::BenchmarkMismatch,
            None,
            format!(
                "audit references benchmark version {:?} but was checked against {:?}",
                doc.benchmark_ref.version,
                benchmark.version()
            ),
        );
    }

    let mut seen = HashSet::new();
    for entry in &doc.entries {
        let code = entry.code;
        if !seen.insert(code) {
            push(
                Severity::Error,
                FindingKind::DuplicateEntry,
                Some(code),
                format!("criterion {code} has more than one entry"),
            );
            continue;
        }
        if let Outcome::Evaluated(rating) = entry.outcome {
            if !doc.scale.admits(rating) {
                push(
                    Severity::Error,
                    FindingKind::OutOfScale,
                    Some(code),
                    format!("criterion {code} outcome {rating} is outside the {} scale", doc.scale),
                );
            }
        }
        let Some(criterion) = benchmark.criterion(code) else {
            push(Severity::Error, FindingKind::UnknownCriterion, Some(code), format!("unknown criterion {code}"));
            continue;
        };
        match entry.outcome {
            Outcome::NotEvaluated => push(
                soft,
                FindingKind::NotEvaluated,
                Some(code),
                format!("criterion {code} ({}) has not been evaluated", criterion.name),
            ),
            Outcome::NotApplicable if entry.notes.as_deref().is_none_or(|n| n.trim().is_empty()) => push(
                soft,
                FindingKind::MissingJustification,
                Some(code),
                format!("criterion {code} ({}) is marked not applicable without a justification note", criterion.name),
            ),
            _ => {}
        }
    }

    for criterion in benchmark.criteria() {
        if !seen.contains(&criterion.code) {
            push(
                soft,
                FindingKind::MissingEntry,
                Some(criterion.code),
                format!("criterion {} ({}) has no entry", criterion.code, criterion.name),
            );
        }
    }

    findings.sort_by(|a, b| {
        (a.severity, a.criterion, a.code, &a.message).cmp(&(b.severity, b.criterion, b.code, &b.message))
    });
    ValidationReport { findings }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmark::canonical_benchmark;
    use proptest::prelude::*;

    fn code(s: &str) -> CriterionCode {
        s.parse().unwrap()
    }

    fn date() -> NaiveDate {
        NaiveDate::from_ymd_opt(2024, 3, 1).unwrap()
    }

    fn complete(scale: OutcomeScale) -> AuditDocument {
        let b = canonical_benchmark();
        let mut doc = scaffold_audit_on(&b, "demo", scale, date());
        for (i, e) in doc.entries.iter_mut().enumerate() {
            e.outcome = Outcome::Evaluated(scale.ratings()[i % scale.ratings().len()]);
        }
        doc
    }

    const MINIMAL: &str = r#"{
  "schema_version": "1.0",
  "system": {"name": "s", "version": "1", "owner": "o", "description": "d"},
  "audit": {"auditor": "a", "date": "2024-02-29", "type": "external"},
  "benchmark": {"id": "sab-v1", "version": "1.0"},
  "scale": "likert5",
  "entries": [
    {"code": "C222", "outcome": 4},
    {"code": "C111", "outcome": "na", "notes": "no datasets"},
    {"code": "C112", "outcome": null}
  ]
}"#;

    #[test]
    fn parses_and_sorts_entries() {
        let doc = parse_audit(MINIMAL).unwrap();
        let codes: Vec<_> = doc.entries.iter().map(|e| e.code.to_string()).collect();
        assert_eq!(codes, ["C111", "C112", "C222"]);
        assert_eq!(doc.outcome_for(code("C222")), Outcome::Evaluated(Rating::Likert(4)));
        assert_eq!(doc.outcome_for(code("C111")), Outcome::NotApplicable);
        assert_eq!(doc.outcome_for(code("C445")), Outcome::NotEvaluated);
        assert_eq!(doc.audit.kind, AuditType::External);
    }

    #[test]
    fn serialized_entries_are_sorted() {
        let mut doc = parse_audit(MINIMAL).unwrap();
        doc.entries = vec![
            Entry::new(code("C222"), Outcome::Evaluated(Rating::Likert(2))),
            Entry::new(code("C111"), Outcome::Evaluated(Rating::Likert(5))),
        ];
        let text = serialize_audit(&doc);
        assert!(text.find("C111").unwrap() < text.find("C222").unwrap());
        assert!(text.ends_with("}\n"));
        assert!(text.contains("\n  \"system\": {\n    \"name\""));
    }

    #[test]
    fn key_order_is_fixed() {
        let text = serialize_audit(&parse_audit(MINIMAL).unwrap());
        let keys = ["\"schema_version\"", "\"system\"", "\"audit\"", "\"benchmark\"", "\"scale\"", "\"entries\""];
        let positions: Vec<_> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn duplicate_entry_rejected() {
        let text = MINIMAL.replace(r#"{"code": "C222", "outcome": 4}"#, r#"{"code": "C111", "outcome": 4}"#);
        assert_eq!(parse_audit(&text), Err(AuditError::DuplicateEntry(code("C111"))));
    }

    #[test]
    fn out_of_scale_rejected() {
        let text = MINIMAL.replace("\"outcome\": 4", "\"outcome\": 7");
        assert!(matches!(parse_audit(&text), Err(AuditError::OutOfScale { .. })));
        let text = MINIMAL.replace("\"outcome\": 4", "\"outcome\": \"pass\"");
        assert!(matches!(parse_audit(&text), Err(AuditError::OutOfScale { .. })));
        let text = MINIMAL.replace("\"outcome\": 4", "\"outcome\": 0");
        assert!(matches!(parse_audit(&text), Err(AuditError::OutOfScale { .. })));
        let text = MINIMAL.replace("\"likert5\"", "\"binary\"");
        assert!(matches!(parse_audit(&text), Err(AuditError::OutOfScale { .. })));
    }

    #[test]
    fn bad_dates_rejected() {
        for bad in ["2023-02-29", "2024-13-01", "2024-1-05", "24-01-05", "2024/01/05"] {
            let text = MINIMAL.replace("2024-02-29", bad);
            assert_eq!(parse_audit(&text), Err(AuditError::BadDate(bad.into())), "{bad}");
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        let text = MINIMAL.replace("\"scale\": \"likert5\",", "\"scale\": likert5,");
        match parse_audit(&text) {
            Err(AuditError::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_audit(&MINIMAL.replace("C222", "C022")), Err(AuditError::Parse { .. })));
        assert!(matches!(
            parse_audit(&MINIMAL.replace("\"1.0\",\n  \"system\"", "\"2.0\",\n  \"system\"")),
            Err(AuditError::SchemaVersion(_))
        ));
    }

    #[test]
    fn complete_audit_has_no_findings() {
        let b = canonical_benchmark();
        for scale in [OutcomeScale::Binary, OutcomeScale::Likert5] {
            assert!(validate(&complete(scale), &b, true).findings.is_empty());
        }
    }

    #[test]
    fn missing_entry_is_warning_unless_strict() {
        let b = canonical_benchmark();
        let mut doc = complete(OutcomeScale::Binary);
        doc.entries.retain(|e| e.code != code("C445"));
        let report = validate(&doc, &b, false);
        assert!(report.is_valid());
        assert_eq!(report.findings.len(), 1);
        assert_eq!(report.findings[0].severity, Severity::Warning);
        assert_eq!(report.findings[0].message, "criterion C445 (Rating, Risk) has no entry");
        let strict = validate(&doc, &b, true);
        assert!(!strict.is_valid());
        assert_eq!(strict.findings[0].severity, Severity::Error);
    }

    #[test]
    fn unknown_code_is_error() {
        let b = canonical_benchmark();
        let mut doc = complete(OutcomeScale::Likert5);
        doc.entries.push(Entry::new(code("C999"), Outcome::Evaluated(Rating::Likert(3))));
        let report = validate(&doc, &b, false);
        assert!(!report.is_valid());
        assert_eq!(report.findings[0].message, "unknown criterion C999");
    }

    #[test]
    fn not_applicable_needs_notes() {
        let b = canonical_benchmark();
        let mut doc = complete(OutcomeScale::Binary);
        doc.entries[0].outcome = Outcome::NotApplicable;
        doc.entries[1].outcome = Outcome::NotApplicable;
        doc.entries[1].notes = Some("no personal data".into());
        let report = validate(&doc, &b, false);
        assert_eq!(report.count(FindingKind::MissingJustification), 1);
        assert_eq!(report.findings[0].criterion, Some(code("C111")));
    }

    #[test]
    fn benchmark_mismatch_is_error() {
        let b = canonical_benchmark();
        let mut doc = complete(OutcomeScale::Binary);
        doc.benchmark_ref.version = "2.0".into();
        let report = validate(&doc, &b, false);
        assert_eq!(report.count(FindingKind::BenchmarkMismatch), 1);
        assert!(!report.is_valid());
    }

    #[test]
    fn findings_sorted_errors_first() {
        let b = canonical_benchmark();
        let mut doc = scaffold_audit_on(&b, "demo", OutcomeScale::Binary, date());
        doc.entries.push(Entry::new(code("C999"), Outcome::NotEvaluated));
        let report = validate(&doc, &b, false);
        assert_eq!(report.findings[0].severity, Severity::Error);
        let keys: Vec<_> = report.findings.iter().map(|f| (f.severity, f.criterion)).collect();
        assert!(keys.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn scaffold_shape() {
        let b = canonical_benchmark();
        let doc = scaffold_audit(&b, "demo", OutcomeScale::Likert5);
        assert_eq!(doc.entries.len(), 56);
        assert!(doc.entries.iter().all(|e| e.outcome == Outcome::NotEvaluated));
        let codes: HashSet<_> = doc.entries.iter().map(|e| e.code).collect();
        let expected: HashSet<_> = b.criteria().iter().map(|c| c.code).collect();
        assert_eq!(codes, expected);

        let report = validate(&doc, &b, false);
        assert_eq!(report.errors().count(), 0);
        assert_eq!(report.warnings().count(), 56);
        assert_eq!(report.count(FindingKind::NotEvaluated), 56);
    }

    fn arb_outcome(scale: OutcomeScale) -> BoxedStrategy<Outcome> {
        let rating = match scale {
            OutcomeScale::Binary => prop_oneof![Just(Rating::Fail), Just(Rating::Pass)].boxed(),
            OutcomeScale::Likert5 => (1u8..=5).prop_map(Rating::Likert).boxed(),
        };
        prop_oneof![
            1 => Just(Outcome::NotEvaluated),
            1 => Just(Outcome::NotApplicable),
            4 => rating.prop_map(Outcome::Evaluated),
        ]
        .boxed()
    }

    fn arb_document() -> impl Strategy<Value = AuditDocument> {
        let b = canonical_benchmark();
        let codes: Vec<_> = b.criteria().iter().map(|c| c.code).collect();
        prop_oneof![Just(OutcomeScale::Binary), Just(OutcomeScale::Likert5)]
            .prop_flat_map(move |scale| {
                let entries =
                    proptest::sample::subsequence(codes.clone(), 0..=codes.len()).prop_flat_map(move |picked| {
                        let n = picked.len();
                        (
                            Just(picked),
                            proptest::collection::vec(arb_outcome(scale), n),
                            proptest::collection::vec(proptest::option::of("[ -~]{0,12}"), n),
                        )
                    });
                (Just(scale), entries, "[a-zA-Z \"\\\\é]{0,10}", 0i64..20000, any::<bool>())
            })
            .prop_map(|(scale, (codes, outcomes, notes), name, days, external)| AuditDocument {
                schema_version: SCHEMA_VERSION.into(),
                system: SystemInfo { name, version: "1".into(), owner: "o".into(), description: String::new() },
                audit: AuditInfo {
                    auditor: "auditor".into(),
                    date: NaiveDate::from_ymd_opt(1990, 1, 1).unwrap() + chrono::Days::new(days as u64),
                    kind: if external { AuditType::External } else { AuditType::Internal },
                },
                benchmark_ref: BenchmarkRef { id: "sab-v1".into(), version: "1.0".into() },
                scale,
                entries: codes
                    .into_iter()
                    .zip(outcomes)
                    .zip(notes)
                    .map(|((code, outcome), notes)| Entry { code, outcome, evidence: None, notes })
                    .collect(),
            })
    }

    proptest! {
        #[test]
        fn round_trip(doc in arb_document()) {
            let text = serialize_audit(&doc);
            let back = parse_audit(&text).unwrap();
            prop_assert_eq!(&back, &doc);
            prop_assert_eq!(serialize_audit(&back), text);
        }

        #[test]
        fn validate_is_pure(doc in arb_document(), strict in any::<bool>()) {
            let b = canonical_benchmark();
            prop_assert_eq!(validate(&doc, &b, strict), validate(&doc, &b, strict));
        }

        #[test]
        fn bad_likert_always_flagged(doc in arb_document(), idx in any::<proptest::sample::Index>(), v in prop_oneof![0u8..=0, 6u8..=255]) {
            prop_assume!(!doc.entries.is_empty());
            let mut doc = doc;
            doc.scale = OutcomeScale::Likert5;
            let i = idx.index(doc.entries.len());
            doc.entries[i].outcome = Outcome::Evaluated(Rating::Likert(v));
            prop_assert!(!validate(&doc, &canonical_benchmark(), false).is_valid());
        }
    }
}
