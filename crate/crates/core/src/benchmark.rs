//! Benchmark registry: aspects, categories, criteria, and the built-in
//! 56-criterion accountability benchmark.
//!
//! A benchmark is a matrix of categories (lifecycle role, rendered as rings)
//! by aspects (part of the system, rendered as sectors). Each cell holds an
//! ordered run of criteria. A criterion code is `C` followed by three digits:
//! category index, aspect index, ordinal within the cell.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest index allowed for any code digit.
pub const MAX_INDEX: u32 = 9;

/// Identifier of the built-in benchmark.
pub const CANONICAL_ID: &str = "sab-v1";
/// Version of the built-in benchmark.
pub const CANONICAL_VERSION: &str = "1.0";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("code field {field} = {value} is outside 1..={max}", max = MAX_INDEX)]
    OutOfRange { field: &'static str, value: u32 },
    #[error("malformed criterion code {0:?}: expected C followed by three digits 1-9")]
    Malformed(String),
}

/// A criterion code such as `C345`.
///
/// Ordering follows (category, aspect, ordinal), which coincides with the
/// lexicographic order of the rendered text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CriterionCode {
    category: u8,
    aspect: u8,
    ordinal: u8,
}

impl CriterionCode {
    pub fn new(category: u32, aspect: u32, ordinal: u32) -> Result<Self, CodeError> {
        let check = |field, value: u32| {
            if (1..=MAX_INDEX).contains(&value) {
                Ok(value as u8)
            } else {
                Err(CodeError::OutOfRange { field, value })
            }
        };
        Ok(Self {
            category: check("category", category)?,
            aspect: check("aspect", aspect)?,
            ordinal: check("ordinal", ordinal)?,
        })
    }

    pub fn category(&self) -> u32 {
        self.category as u32
    }

    pub fn aspect(&self) -> u32 {
        self.aspect as u32
    }

    pub fn ordinal(&self) -> u32 {
        self.ordinal as u32
    }
}

impl fmt::Display for CriterionCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}{}{}", self.category, self.aspect, self.ordinal)
    }
}

impl FromStr for CriterionCode {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        let digit = |b: u8| (b'1'..=b'9').contains(&b).then(|| (b - b'0') as u32);
        match bytes {
            [b'C', c, a, o] => match (digit(*c), digit(*a), digit(*o)) {
                (Some(c), Some(a), Some(o)) => CriterionCode::new(c, a, o),
                _ => Err(CodeError::Malformed(s.to_string())),
            },
            _ => Err(CodeError::Malformed(s.to_string())),
        }
    }
}

impl Serialize for CriterionCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CriterionCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Builds the code text for a cell position, e.g. `(3, 4, 6)` gives `"C346"`.
pub fn format_code(category_index: u32, aspect_index: u32, ordinal: u32) -> Result<String, CodeError> {
    CriterionCode::new(category_index, aspect_index, ordinal).map(|c| c.to_string())
}

/// A row of the matrix (Data, Model, Code, System in the built-in benchmark).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Aspect {
    pub index: u32,
    pub name: String,
}

/// A column of the matrix (Development, Assessment, Mitigation, Assurance).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Category {
    pub index: u32,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Criterion {
    pub code: CriterionCode,
    pub name: String,
    /// 1-based aspect index.
    pub aspect: u32,
    /// 1-based category index.
    pub category: u32,
    pub ordinal: u32,
    pub description: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchmarkError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("benchmark must declare between 1 and {max} {what}, found {found}", max = MAX_INDEX)]
    AxisSize { what: &'static str, found: usize },
    #[error("{what} name at position {position} is empty")]
    EmptyAxisName { what: &'static str, position: usize },
    #[error("duplicate {what} name {name:?}")]
    DuplicateAxisName { what: &'static str, name: String },
    #[error("criterion {criterion:?} has an empty name")]
    EmptyName { criterion: String },
    #[error("criterion {criterion:?} references unknown aspect {aspect:?}")]
    UnknownAspect { criterion: String, aspect: String },
    #[error("criterion {criterion:?} references unknown category {category:?}")]
    UnknownCategory { criterion: String, category: String },
    #[error("cell ({category}, {aspect}) holds more than {max} criteria; criterion {criterion:?} does not fit", max = MAX_INDEX)]
    CellOverflow { criterion: String, category: String, aspect: String },
    #[error("criterion {criterion:?} has ordinal {ordinal}, expected 1..={max}", max = MAX_INDEX)]
    BadOrdinal { criterion: String, ordinal: u32 },
    #[error("criterion {criterion:?} has invalid code: {source}")]
    InvalidCode { criterion: String, source: CodeError },
    #[error("criterion {criterion:?} is coded {given} but its position derives {derived}")]
    CodeMismatch { criterion: String, given: String, derived: String },
    #[error("duplicate code {0}")]
    DuplicateCode(String),
    #[error("cell ({category}, {aspect}) ordinals are not contiguous from 1: missing {missing}")]
    OrdinalGap { category: String, aspect: String, missing: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LookupError {
    #[error("unknown aspect {0:?}")]
    Aspect(String),
    #[error("unknown category {0:?}")]
    Category(String),
}

/// One criterion as written in a benchmark file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriterionRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<String>,
    pub name: String,
    pub aspect: String,
    pub category: String,
    pub ordinal: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

/// On-disk benchmark file layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkFile {
    pub id: String,
    pub version: String,
    pub aspects: Vec<String>,
    pub categories: Vec<String>,
    pub criteria: Vec<CriterionRecord>,
}

/// A validated benchmark. Immutable once built; criteria are kept sorted by
/// code so every cell is a contiguous run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Benchmark {
    id: String,
    version: String,
    aspects: Vec<Aspect>,
    categories: Vec<Category>,
    criteria: Vec<Criterion>,
}

fn build_axis<T>(
    what: &'static str,
    names: Vec<String>,
    make: impl Fn(u32, String) -> T,
) -> Result<Vec<T>, BenchmarkError> {
    if names.is_empty() || names.len() > MAX_INDEX as usize {
        return Err(BenchmarkError::AxisSize { what, found: names.len() });
    }
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(names.len());
    for (i, name) in names.into_iter().enumerate() {
        if name.trim().is_empty() {
            return Err(BenchmarkError::EmptyAxisName { what, position: i + 1 });
        }
        if !seen.insert(name.clone()) {
            return Err(BenchmarkError::DuplicateAxisName { what, name });
        }
        out.push(make(i as u32 + 1, name));
    }
    Ok(out)
}

impl Benchmark {
    /// Validates a benchmark file's content and builds the registry value.
    pub fn from_file(file: BenchmarkFile) -> Result<Self, BenchmarkError> {
        let aspects = build_axis("aspects", file.aspects, |index, name| Aspect { index, name })?;
        let categories = build_axis("categories", file.categories, |index, name| Category { index, name })?;

        let mut cell_sizes: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        let mut seen_codes = HashSet::new();
        let mut criteria = Vec::with_capacity(file.criteria.len());

        for record in file.criteria {
            if record.name.trim().is_empty() {
                return Err(BenchmarkError::EmptyName { criterion: record.code.unwrap_or_default() });
            }
            let aspect = aspects.iter().find(|a| a.name == record.aspect).ok_or_else(|| {
                BenchmarkError::UnknownAspect { criterion: record.name.clone(), aspect: record.aspect.clone() }
            })?;
            let category = categories.iter().find(|c| c.name == record.category).ok_or_else(|| {
                BenchmarkError::UnknownCategory { criterion: record.name.clone(), category: record.category.clone() }
            })?;

            let size = cell_sizes.entry((category.index, aspect.index)).or_default();
            *size += 1;
            if *size > MAX_INDEX {
                return Err(BenchmarkError::CellOverflow {
                    criterion: record.name,
                    category: category.name.clone(),
                    aspect: aspect.name.clone(),
                });
            }
            if record.ordinal == 0 || record.ordinal > MAX_INDEX {
                return Err(BenchmarkError::BadOrdinal { criterion: record.name, ordinal: record.ordinal });
            }

            let derived = CriterionCode::new(category.index, aspect.index, record.ordinal)
                .map_err(|source| BenchmarkError::InvalidCode { criterion: record.name.clone(), source })?;
            if let Some(given) = &record.code {
                let parsed: CriterionCode = given
                    .parse()
                    .map_err(|source| BenchmarkError::InvalidCode { criterion: record.name.clone(), source })?;
                if parsed != derived {
                    return Err(BenchmarkError::CodeMismatch {
                        criterion: record.name,
                        given: given.clone(),
                        derived: derived.to_string(),
                    });
                }
            }
            if !seen_codes.insert(derived) {
                return Err(BenchmarkError::DuplicateCode(derived.to_string()));
            }

            criteria.push(Criterion {
                code: derived,
                name: record.name,
                aspect: aspect.index,
                category: category.index,
                ordinal: record.ordinal,
                description: record.description,
            });
        }

        // Codes are unique and ordinals bounded, so a cell of size n is
        // contiguous exactly when its largest ordinal is n.
        for (&(cat, asp), &n) in &cell_sizes {
            for ordinal in 1..=n {
                let code = CriterionCode::new(cat, asp, ordinal).expect("bounded indices");
                if !seen_codes.contains(&code) {
                    return Err(BenchmarkError::OrdinalGap {
                        category: categories[cat as usize - 1].name.clone(),
                        aspect: aspects[asp as usize - 1].name.clone(),
                        missing: ordinal,
                    });
                }
            }
        }

        criteria.sort_by_key(|c| c.code);
        Ok(Self { id: file.id, version: file.version, aspects, categories, criteria })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn aspects(&self) -> &[Aspect] {
        &self.aspects
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    /// All criteria ordered by (category, aspect, ordinal).
    pub fn criteria(&self) -> &[Criterion] {
        &self.criteria
    }

    pub fn len(&self) -> usize {
        self.criteria.len()
    }

    pub fn is_empty(&self) -> bool {
        self.criteria.is_empty()
    }

    pub fn criterion(&self, code: CriterionCode) -> Option<&Criterion> {
        self.criteria.binary_search_by_key(&code, |c| c.code).ok().map(|i| &self.criteria[i])
    }

    pub fn aspect(&self, index: u32) -> Option<&Aspect> {
        index.checked_sub(1).and_then(|i| self.aspects.get(i as usize))
    }

    pub fn category(&self, index: u32) -> Option<&Category> {
        index.checked_sub(1).and_then(|i| self.categories.get(i as usize))
    }

    pub fn aspect_named(&self, name: &str) -> Option<&Aspect> {
        self.aspects.iter().find(|a| a.name == name)
    }

    pub fn category_named(&self, name: &str) -> Option<&Category> {
        self.categories.iter().find(|c| c.name == name)
    }

    /// Criteria of one (category, aspect) cell in ordinal order.
    pub fn cell_criteria(&self, category: &Category, aspect: &Aspect) -> Result<&[Criterion], LookupError> {
        if self.category(category.index) != Some(category) {
            return Err(LookupError::Category(category.name.clone()));
        }
        if self.aspect(aspect.index) != Some(aspect) {
            return Err(LookupError::Aspect(aspect.name.clone()));
        }
        Ok(self.cell_by_index(category.index, aspect.index))
    }

    /// Like [`cell_criteria`](Self::cell_criteria) but addressed by index.
    /// Out-of-range indices give an empty slice.
    pub fn cell_by_index(&self, category: u32, aspect: u32) -> &[Criterion] {
        let key = (category, aspect);
        let start = self.criteria.partition_point(|c| (c.category, c.aspect) < key);
        let end = self.criteria.partition_point(|c| (c.category, c.aspect) <= key);
        &self.criteria[start..end]
    }

    pub fn to_file(&self) -> BenchmarkFile {
        BenchmarkFile {
            id: self.id.clone(),
            version: self.version.clone(),
            aspects: self.aspects.iter().map(|a| a.name.clone()).collect(),
            categories: self.categories.iter().map(|c| c.name.clone()).collect(),
            criteria: self
                .criteria
                .iter()
                .map(|c| CriterionRecord {
                    code: Some(c.code.to_string()),
                    name: c.name.clone(),
                    aspect: self.aspects[c.aspect as usize - 1].name.clone(),
                    category: self.categories[c.category as usize - 1].name.clone(),
                    ordinal: c.ordinal,
                    description: c.description.clone(),
                })
                .collect(),
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_file()).expect("benchmark serializes");
        text.push('\n');
        text
    }
}

/// Parses and validates a benchmark JSON document.
pub fn load_benchmark(document_text: &str) -> Result<Benchmark, BenchmarkError> {
    let file: BenchmarkFile = serde_json::from_str(document_text).map_err(|e| BenchmarkError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Benchmark::from_file(file)
}

pub const CANONICAL_ASPECTS: [&str; 4] = ["Data", "Model", "Code", "System"];
pub const CANONICAL_CATEGORIES: [&str; 4] = ["Development", "Assessment", "Mitigation", "Assurance"];

// (category, aspect, name, description); ordinals follow list position within a cell.
const CANONICAL_CRITERIA: &[(u32, u32, &str, &str)] = &[
    (1, 1, "Data Dictionary", "Data dictionaries exist for training, validation, test, and any other data used, describing tables and fields with their meaning, source, relationships, format, scale, and permitted values."),
    (1, 1, "Datasheet, Collection Process", "Documentation explains how the dataset was gathered, in enough detail that others could collect comparable data."),
    (1, 1, "Datasheet, Composition", "Documentation describes what the dataset contains, including instance relationships, suggested splits, sensitive content, and dataset size."),
    (1, 1, "Datasheet, Motivation", "Documentation states why the dataset was created."),
    (1, 1, "Datasheet, Preprocessing", "Documentation reports whether and how the data was cleaned, transformed, or labeled."),
    (1, 2, "Reproducibility, Model", "Mechanisms are in place so that model results can be reproduced."),
    (1, 2, "Design Transparency, Model", "Model design decisions and actions are recorded so later issues can be traced back to specific choices and the actors responsible."),
    (1, 2, "Documentation, Model", "Documents describing the model exist and are adequate, in the spirit of model cards."),
    (1, 2, "Selection, Model", "The model selection process is documented, with a justification of why the chosen model fits the purpose of the system."),
    (1, 3, "Reproducibility, Code", "Mechanisms are in place so that results produced by the code can be reproduced."),
    (1, 3, "Design Transparency, Code", "Code design decisions are recorded so that later issues can be traced to specific choices and responsible actors."),
    (1, 3, "Documentation, Code", "The codebase is well organized and documented, covering individual pieces, overall structure, and how the pieces relate."),
    (1, 4, "Documentation, Development", "Documents cover the full development lifecycle, from problem understanding and ideation through deployment and maintenance."),
    (1, 4, "Plans, Maintenance", "Actionable plans exist for maintaining and updating the system, including responses to contextual change, observed performance, and stakeholder feedback."),
    (2, 1, "Privacy, Data", "Data complies with privacy regulation and practice and excludes personally identifiable information, or data from which it can be reconstructed, unless regulation permits."),
    (2, 1, "Fairness, Data", "Training data is checked for bias; protected attributes and likely proxies are not used as predictors without justification and appropriate statistical testing."),
    (2, 1, "Quality, Labels", "Labels on individual instances are accurate, verified, and of good quality."),
    (2, 1, "Inspectability", "Infrastructure and tools exist to access and inspect the datasets used or produced during development and operation."),
    (2, 2, "Interpretability", "Developers and technical experts can obtain from the model how specific decisions are reached."),
    (2, 2, "Fairness, Model", "Model outputs are evaluated for discrimination against protected groups using fairness measures suited to the sociotechnical context."),
    (2, 2, "Testing, Adversarial", "The model is tested against adversarial inputs and attacks such as data poisoning."),
    (2, 3, "Privacy, Code", "The code protects the confidentiality of user and other sensitive data, including against leakage through reverse engineering."),
    (2, 3, "Security, Code", "The software resists malicious attacks aimed at stealing information, manipulating behavior, or denying availability."),
    (2, 3, "Testing Cards", "Mechanisms exist for testing the code as a whole and in parts, with test design, results, and coverage recorded, for example in testing cards."),
    (2, 4, "Awareness, Public", "The public and decision subjects are informed about the existence, objectives, and mechanisms of the system and its accuracy and fairness performance."),
    (2, 4, "Risk, Humans", "Risks the deployed system poses to individual rights and freedoms, at minimum those in the Universal Declaration of Human Rights, have been assessed."),
    (2, 4, "Training, Operator", "Operators are adequately trained on the nature and limitations of the model, with training material available alongside the software."),
    (2, 4, "Accuracy, System", "Accuracy metrics are appropriate, evaluated on a suitable test set, and the achieved accuracy is acceptable."),
    (3, 1, "Anonymization", "Where needed, personally identifiable information is removed or aggregated to comply with privacy regulation."),
    (3, 1, "Security", "Data is transmitted and stored securely, including before anonymization or aggregation."),
    (3, 2, "Adversarial, Training", "Where warranted, the model is trained on adversarial samples to improve robustness."),
    (3, 2, "Explanations, Mitigation", "Supplementary explanation tools, such as surrogate explanations, are used when the model lacks built-in explanations."),
    (3, 2, "Fairness, Mitigation", "Pre-, in-, or post-processing techniques are applied where needed to make model outcomes fair."),
    (3, 2, "Privacy, Training", "Privacy-preserving learning techniques such as federated learning or differential privacy are used where needed."),
    (3, 3, "Review, Code", "Established code review practices involving reviewers other than the original authors are applied during development."),
    (3, 3, "Diversity, Team", "The developer team represents diverse demographic groups."),
    (3, 4, "Monitoring, Fairness", "Infrastructure exists to monitor the fairness metrics of the model during real-world use."),
    (3, 4, "Monitoring, Performance", "Infrastructure exists to monitor the accuracy of the model during real-world use."),
    (3, 4, "Oversight, Human", "Policies and mechanisms keep humans able to oversee and overrule system decisions, with involvement scaled to the risk of the application."),
    (3, 4, "Harms, Remedies", "Policies and mechanisms provide remedies proportionate to the seriousness of unintended or unexpected harms."),
    (3, 4, "Mechanism, Feedback", "Effective channels gather feedback from stakeholders and decision subjects, and the organization can respond and adapt the system promptly."),
    (3, 4, "Security", "System security tools and techniques are in place and effective against potential threats."),
    (4, 1, "Data Protection", "Data protection impact assessments are available and adequate with respect to regulation and practice."),
    (4, 1, "Datasheet, Maintenance", "A dataset maintenance plan exists and supports future communication about the dataset."),
    (4, 1, "Datasheet, Uses", "Documentation states the tasks the dataset may and may not be used for."),
    (4, 2, "Privacy, Model", "Privacy precautions are in place regarding the architecture and behavior of the model."),
    (4, 2, "Uses, Model", "Real-world use of the model aligns with its originally intended purpose."),
    (4, 2, "Documentation, Capabilities", "Clear documents describe what the model can do, the conditions it needs, its intended users, and where it should not be used."),
    (4, 2, "Explainability", "Ordinary audiences can understand how the model reaches decisions, in general and per case, well enough to reason counterfactually."),
    (4, 3, "Certification, Developer", "Engineers, designers, and testers hold appropriate and necessary certifications."),
    (4, 3, "Due Diligence", "Licensing, open source clearance, and ownership matters are defined, agreed, and documented."),
    (4, 4, "Record Keeping, Operational", "Logging infrastructure records inputs, outputs, model files, timestamps, and operators across development and use."),
    (4, 4, "Uses, System", "Real-world use of the system aligns with its originally intended purpose."),
    (4, 4, "Documentation, Acceptability", "Documents set out unambiguous, consistent, and comprehensive acceptance criteria for the system and the conditions needed to meet them."),
    (4, 4, "Insurance", "The system carries liability insurance with adequate coverage."),
    (4, 4, "Rating, Risk", "Risk ratings assigned to the system by independent risk agencies are available."),
];

/// The built-in 56-criterion benchmark.
pub fn canonical_benchmark() -> Benchmark {
    let mut ordinals: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    let criteria = CANONICAL_CRITERIA
        .iter()
        .map(|&(category, aspect, name, description)| {
            let ordinal = ordinals.entry((category, aspect)).or_default();
            *ordinal += 1;
            CriterionRecord {
                code: None,
                name: name.to_string(),
                aspect: CANONICAL_ASPECTS[aspect as usize - 1].to_string(),
                category: CANONICAL_CATEGORIES[category as usize - 1].to_string(),
                ordinal: *ordinal,
                description: Some(description.to_string()),
            }
        })
        .collect();
    Benchmark::from_file(BenchmarkFile {
        id: CANONICAL_ID.to_string(),
        version: CANONICAL_VERSION.to_string(),
        aspects: CANONICAL_ASPECTS.iter().map(|s| s.to_string()).collect(),
        categories: CANONICAL_CATEGORIES.iter().map(|s| s.to_string()).collect(),
        criteria,
    })
    .expect("built-in benchmark is valid")
}
