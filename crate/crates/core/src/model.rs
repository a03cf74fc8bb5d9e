//! Two-layer codebook and span-based coding data.
//!
//! A [`Codebook`] groups mutually exclusive codes into semantic domains. A
//! [`CodingProject`] holds the documents under analysis, the coders, the
//! quotations (spans of atomic units) and the code applications made by each
//! coder. Structural rules are checked by [`validate_codebook`] and
//! [`validate_coding`], which report violations instead of failing.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::metrics::MetricSpec;
use crate::validation::{ValidationReport, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Code {
    pub id: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
}

impl Code {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            name: String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemanticDomain {
    pub id: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub codes: Vec<Code>,
}

impl SemanticDomain {
    pub fn new<I, S>(id: impl Into<String>, codes: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            id: id.into(),
            name: String::new(),
            codes: codes.into_iter().map(|c| Code::new(c)).collect(),
        }
    }

    pub fn code_ids(&self) -> impl Iterator<Item = &str> {
        self.codes.iter().map(|c| c.id.as_str())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Codebook {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub version: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub domains: Vec<SemanticDomain>,
}

impl Codebook {
    pub fn new(domains: Vec<SemanticDomain>) -> Self {
        Self {
            version: String::new(),
            description: String::new(),
            domains,
        }
    }

    pub fn domain(&self, id: &str) -> Option<&SemanticDomain> {
        self.domains.iter().find(|d| d.id == id)
    }

    pub fn domain_index(&self, id: &str) -> Option<usize> {
        self.domains.iter().position(|d| d.id == id)
    }

    /// Maps every code id to the index of its (first) domain.
    pub fn code_domains(&self) -> HashMap<&str, usize> {
        let mut map = HashMap::new();
        for (i, domain) in self.domains.iter().enumerate() {
            for code in domain.code_ids() {
                map.entry(code).or_insert(i);
            }
        }
        map
    }

    pub fn code_count(&self) -> usize {
        self.domains.iter().map(|d| d.codes.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coder {
    pub id: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub display_name: String,
}

impl Coder {
    pub fn new(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            display_name: String::new(),
        }
    }
}

/// A document measured in opaque atomic units (characters, seconds, rows).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub length: u64,
}

impl Document {
    pub fn new(id: impl Into<String>, length: u64) -> Self {
        Self {
            id: id.into(),
            length,
        }
    }
}

/// Half-open interval `[start, end)` of atomic units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: u64,
    pub end: u64,
}

impl Span {
    pub fn new(start: u64, end: u64) -> Self {
        Self { start, end }
    }

    pub fn len(&self) -> u64 {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn overlap_len(&self, other: &Span) -> u64 {
        self.end
            .min(other.end)
            .saturating_sub(self.start.max(other.start))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quotation {
    pub id: String,
    pub document_id: String,
    pub span: Span,
    /// Coder that segmented this quotation. `None` for pre-defined quotations
    /// shared by every coder.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub owner: Option<String>,
}

impl Quotation {
    pub fn new(id: impl Into<String>, document_id: impl Into<String>, start: u64, end: u64) -> Self {
        Self {
            id: id.into(),
            document_id: document_id.into(),
            span: Span::new(start, end),
            owner: None,
        }
    }

    pub fn owned_by(mut self, coder: impl Into<String>) -> Self {
        self.owner = Some(coder.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeApplication {
    pub coder_id: String,
    pub quotation_id: String,
    pub code_id: String,
}

impl CodeApplication {
    pub fn new(
        coder_id: impl Into<String>,
        quotation_id: impl Into<String>,
        code_id: impl Into<String>,
    ) -> Self {
        Self {
            coder_id: coder_id.into(),
            quotation_id: quotation_id.into(),
            code_id: code_id.into(),
        }
    }
}

/// Everything needed to compute agreement on span-coded material.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CodingProject {
    pub codebook: Codebook,
    pub documents: Vec<Document>,
    pub coders: Vec<Coder>,
    pub quotations: Vec<Quotation>,
    pub applications: Vec<CodeApplication>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricSpec>,
    /// Free-text name of the atomic unit ("characters", "seconds").
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
}

impl CodingProject {
    pub fn document(&self, id: &str) -> Option<&Document> {
        self.documents.iter().find(|d| d.id == id)
    }

    pub fn quotation(&self, id: &str) -> Option<&Quotation> {
        self.quotations.iter().find(|q| q.id == id)
    }

    pub fn corpus_length(&self) -> u64 {
        self.documents.iter().map(|d| d.length).sum()
    }

    pub fn coder_ids(&self) -> impl Iterator<Item = &str> {
        self.coders.iter().map(|c| c.id.as_str())
    }
}

pub fn validate_codebook(codebook: &Codebook) -> ValidationReport {
    let mut report = ValidationReport::new();
    let mut domain_ids = HashSet::new();
    let mut code_home: HashMap<&str, &str> = HashMap::new();

    for domain in &codebook.domains {
        if !domain_ids.insert(domain.id.as_str()) {
            report.push(Violation::DuplicateDomain {
                domain: domain.id.clone(),
            });
        }
        if domain.codes.is_empty() {
            report.push(Violation::EmptyDomain {
                domain: domain.id.clone(),
            });
        }
        let mut local = HashSet::new();
        for code in domain.code_ids() {
            if !local.insert(code) {
                report.push(Violation::DuplicateCode {
                    domain: domain.id.clone(),
                    code: code.to_string(),
                });
                continue;
            }
            match code_home.get(code) {
                Some(&home) if home != domain.id => report.push(Violation::SharedCode {
                    code: code.to_string(),
                    first_domain: home.to_string(),
                    second_domain: domain.id.clone(),
                }),
                Some(_) => {}
                None => {
                    code_home.insert(code, domain.id.as_str());
                }
            }
        }
    }
    report
}

/// Checks the coding data against the (already valid) codebook.
///
/// Reports dangling references, spans outside their document, overlapping
/// pre-defined quotations, overlapping free segmentations of one coder, and
/// mutual-exclusivity breaks (two codes of one domain applied by the same
/// coder to the same quotation).
pub fn validate_coding(project: &CodingProject) -> ValidationReport {
    let mut report = ValidationReport::new();

    let mut coder_ids = HashSet::new();
    for coder in &project.coders {
        if !coder_ids.insert(coder.id.as_str()) {
            report.push(Violation::DuplicateCoder {
                coder: coder.id.clone(),
            });
        }
    }

    let mut doc_lengths: HashMap<&str, u64> = HashMap::new();
    for doc in &project.documents {
        if doc_lengths.insert(doc.id.as_str(), doc.length).is_some() {
            report.push(Violation::DuplicateDocument {
                document: doc.id.clone(),
            });
        }
    }

    let mut quotations: HashMap<&str, &Quotation> = HashMap::new();
    for q in &project.quotations {
        if quotations.insert(q.id.as_str(), q).is_some() {
            report.push(Violation::DuplicateQuotation {
                quotation: q.id.clone(),
            });
        }
        match doc_lengths.get(q.document_id.as_str()) {
            None => report.push(Violation::UnknownDocument {
                quotation: q.id.clone(),
                document: q.document_id.clone(),
            }),
            Some(&length) => {
                if q.span.start >= q.span.end || q.span.end > length {
                    report.push(Violation::InvalidSpan {
                        quotation: q.id.clone(),
                        start: q.span.start,
                        end: q.span.end,
                        length,
                    });
                }
            }
        }
        if let Some(owner) = &q.owner {
            if !coder_ids.contains(owner.as_str()) {
                report.push(Violation::UnknownOwner {
                    quotation: q.id.clone(),
                    coder: owner.clone(),
                });
            }
        }
    }

    // Quotations sharing a segmentation (pre-defined ones, or one coder's own)
    // must be pairwise disjoint.
    let mut groups: BTreeMap<(&str, Option<&str>), Vec<&Quotation>> = BTreeMap::new();
    for q in &project.quotations {
        groups
            .entry((q.document_id.as_str(), q.owner.as_deref()))
            .or_default()
            .push(q);
    }
    for ((document, _), group) in &groups {
        for (first, second) in overlapping_pairs(group) {
            report.push(Violation::OverlappingQuotations {
                document: document.to_string(),
                first: first.id.clone(),
                second: second.id.clone(),
            });
        }
    }

    let code_domains = project.codebook.code_domains();
    let mut chosen: BTreeMap<(&str, &str, usize), &str> = BTreeMap::new();
    let mut coded_by: BTreeMap<&str, Vec<&Quotation>> = BTreeMap::new();
    let mut seen_pairs: HashSet<(&str, &str)> = HashSet::new();

    for (index, app) in project.applications.iter().enumerate() {
        let coder_known = coder_ids.contains(app.coder_id.as_str());
        if !coder_known {
            report.push(Violation::UnknownCoder {
                application: index,
                coder: app.coder_id.clone(),
            });
        }
        let quotation = quotations.get(app.quotation_id.as_str()).copied();
        if quotation.is_none() {
            report.push(Violation::UnknownQuotation {
                application: index,
                quotation: app.quotation_id.clone(),
            });
        }
        let domain = code_domains.get(app.code_id.as_str()).copied();
        if domain.is_none() {
            report.push(Violation::UnknownCode {
                application: index,
                code: app.code_id.clone(),
            });
        }

        if let Some(q) = quotation {
            if let Some(owner) = &q.owner {
                if owner != &app.coder_id {
                    report.push(Violation::ForeignQuotation {
                        coder: app.coder_id.clone(),
                        quotation: q.id.clone(),
                        owner: owner.clone(),
                    });
                }
            }
            if seen_pairs.insert((app.coder_id.as_str(), q.id.as_str())) {
                coded_by.entry(app.coder_id.as_str()).or_default().push(q);
            }
        }

        if let Some(d) = domain {
            let key = (app.coder_id.as_str(), app.quotation_id.as_str(), d);
            if let Some(previous) = chosen.get(&key) {
                report.push(Violation::MutualExclusivity {
                    coder: app.coder_id.clone(),
                    quotation: app.quotation_id.clone(),
                    domain: project.codebook.domains[d].id.clone(),
                    first_code: previous.to_string(),
                    second_code: app.code_id.clone(),
                });
            } else {
                chosen.insert(key, app.code_id.as_str());
            }
        }
    }

    // A coder's coded quotations may not overlap. Pairs inside one
    // segmentation group were already reported above.
    for (coder, qs) in &coded_by {
        let mut by_doc: BTreeMap<&str, Vec<&Quotation>> = BTreeMap::new();
        for q in qs {
            by_doc.entry(q.document_id.as_str()).or_default().push(q);
        }
        for group in by_doc.values() {
            for (first, second) in overlapping_pairs(group) {
                if first.owner == second.owner {
                    continue;
                }
                report.push(Violation::OverlappingCoding {
                    coder: coder.to_string(),
                    first: first.id.clone(),
                    second: second.id.clone(),
                });
            }
        }
    }

    report
}

/// Codebook and coding checks together.
pub fn validate_project(project: &CodingProject) -> ValidationReport {
    let mut report = validate_codebook(&project.codebook);
    report.extend(validate_coding(project));
    report
}

fn overlapping_pairs<'a>(quotations: &[&'a Quotation]) -> Vec<(&'a Quotation, &'a Quotation)> {
    let mut sorted: Vec<&Quotation> = quotations.to_vec();
    sorted.sort_by(|a, b| (a.span, &a.id).cmp(&(b.span, &b.id)));
    let mut pairs = Vec::new();
    for (i, first) in sorted.iter().enumerate() {
        for second in &sorted[i + 1..] {
            if second.span.start >= first.span.end {
                break;
            }
            if first.span.overlaps(&second.span) {
                pairs.push((*first, *second));
            }
        }
    }
    pairs
}
