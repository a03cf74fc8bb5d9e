//! Common decomposition of the corpus into weighted items.
//!
//! Every document is cut at every quotation boundary; adjacent pieces on which
//! every coder applied the same codes are merged back. The result is the
//! coarsest partition on which each coder's coding is constant, which turns
//! free per-coder segmentations into shared items. Uncoded gaps are items too.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::model::{CodeApplication, CodingProject, Quotation, Span};

/// Codes per coder; coders that applied nothing are omitted.
pub type Assignment = BTreeMap<String, BTreeSet<String>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub document_id: String,
    pub span: Span,
    pub codes: Assignment,
}

impl Segment {
    pub fn weight(&self) -> u64 {
        self.span.len()
    }

    pub fn item_id(&self) -> String {
        format!("{}@{}..{}", self.document_id, self.span.start, self.span.end)
    }

    pub fn codes_of(&self, coder: &str) -> Option<&BTreeSet<String>> {
        self.codes.get(coder)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segmentation {
    pub coders: Vec<String>,
    /// In document order, then by position.
    pub segments: Vec<Segment>,
}

impl Segmentation {
    pub fn total_weight(&self) -> u64 {
        self.segments.iter().map(Segment::weight).sum()
    }

    pub fn document_weight(&self, document: &str) -> u64 {
        self.segments
            .iter()
            .filter(|s| s.document_id == document)
            .map(Segment::weight)
            .sum()
    }

    /// Units on which `coder` applied at least one code accepted by `filter`.
    pub fn coded_units(&self, coder: &str, filter: impl Fn(&str) -> bool) -> u64 {
        self.segments
            .iter()
            .filter(|s| s.codes_of(coder).is_some_and(|set| set.iter().any(|c| filter(c))))
            .map(Segment::weight)
            .sum()
    }

    /// Rebuilds a project whose pre-defined quotations are the coded segments.
    ///
    /// Codebook, documents and coders are copied from `template`. Unitizing
    /// the result yields this segmentation again.
    pub fn to_project(&self, template: &CodingProject) -> CodingProject {
        let mut quotations = Vec::new();
        let mut applications = Vec::new();
        for segment in self.segments.iter().filter(|s| !s.codes.is_empty()) {
            let id = segment.item_id();
            quotations.push(Quotation {
                id: id.clone(),
                document_id: segment.document_id.clone(),
                span: segment.span,
                owner: None,
            });
            for (coder, codes) in &segment.codes {
                for code in codes {
                    applications.push(CodeApplication::new(coder.clone(), id.clone(), code.clone()));
                }
            }
        }
        CodingProject {
            codebook: template.codebook.clone(),
            documents: template.documents.clone(),
            coders: template.coders.clone(),
            quotations,
            applications,
            metric: template.metric.clone(),
            unit: template.unit.clone(),
        }
    }
}

/// Partitions every document into maximal constant-coding intervals.
///
/// Expects a project that passed validation; applications with dangling
/// references are ignored.
pub fn unitize(project: &CodingProject) -> Segmentation {
    let quotations: HashMap<&str, &Quotation> =
        project.quotations.iter().map(|q| (q.id.as_str(), q)).collect();

    let mut by_doc: HashMap<&str, Vec<(Span, &str, &str)>> = HashMap::new();
    for app in &project.applications {
        if let Some(q) = quotations.get(app.quotation_id.as_str()) {
            if !q.span.is_empty() {
                by_doc.entry(q.document_id.as_str()).or_default().push((
                    q.span,
                    app.coder_id.as_str(),
                    app.code_id.as_str(),
                ));
            }
        }
    }

    let mut segments = Vec::new();
    for doc in &project.documents {
        if doc.length == 0 {
            continue;
        }
        let coded = by_doc.get(doc.id.as_str()).map(Vec::as_slice).unwrap_or(&[]);
        sweep_document(&doc.id, doc.length, coded, &mut segments);
    }

    Segmentation {
        coders: project.coders.iter().map(|c| c.id.clone()).collect(),
        segments,
    }
}

fn sweep_document(document: &str, length: u64, coded: &[(Span, &str, &str)], out: &mut Vec<Segment>) {
    let mut boundaries: Vec<u64> = vec![0, length];
    for (span, _, _) in coded {
        boundaries.push(span.start.min(length));
        boundaries.push(span.end.min(length));
    }
    boundaries.sort_unstable();
    boundaries.dedup();

    let mut starting: BTreeMap<u64, Vec<(&str, &str)>> = BTreeMap::new();
    let mut ending: BTreeMap<u64, Vec<(&str, &str)>> = BTreeMap::new();
    for &(span, coder, code) in coded {
        starting.entry(span.start).or_default().push((coder, code));
        ending.entry(span.end).or_default().push((coder, code));
    }

    let mut active: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    let first = out.len();
    for window in boundaries.windows(2) {
        let (lo, hi) = (window[0], window[1]);
        for key in ending.get(&lo).into_iter().flatten() {
            if let Some(n) = active.get_mut(key) {
                *n -= 1;
                if *n == 0 {
                    active.remove(key);
                }
            }
        }
        for key in starting.get(&lo).into_iter().flatten() {
            *active.entry(*key).or_insert(0) += 1;
        }

        let mut codes = Assignment::new();
        for &(coder, code) in active.keys() {
            codes
                .entry(coder.to_string())
                .or_default()
                .insert(code.to_string());
        }

        let mergeable = out.len() > first;
        match out.last_mut() {
            Some(prev) if mergeable && prev.codes == codes && prev.span.end == lo => {
                prev.span.end = hi;
            }
            _ => out.push(Segment {
                document_id: document.to_string(),
                span: Span::new(lo, hi),
                codes,
            }),
        }
    }
}
