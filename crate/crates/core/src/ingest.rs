//! Input files.
//!
//! Reliability CSV: first row `coder,<item ids…>`, then one row per coder;
//! an empty cell means the coder did not rate that item. Project files are
//! JSON documents mirroring [`CodingProject`].

use std::collections::HashSet;

use crate::classic::NominalRatings;
use crate::error::{Error, Result};
use crate::model::{validate_project, CodingProject};

pub fn parse_reliability_csv(bytes: &[u8]) -> Result<NominalRatings> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);

    let mut records = reader.records();
    let header = match records.next() {
        Some(r) => r?,
        None => return Err(Error::EmptyInput),
    };
    let width = header.len();
    let items: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut seen = HashSet::new();
    for item in &items {
        if item.is_empty() || !seen.insert(item.as_str()) {
            return Err(Error::DuplicateItem(item.clone()));
        }
    }

    let mut coders = Vec::new();
    let mut rows: Vec<Vec<Option<String>>> = Vec::new();
    for (n, record) in records.enumerate() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != width {
            return Err(Error::RaggedRow {
                row: n + 2,
                expected: width,
                found: record.len(),
            });
        }
        let coder = record[0].to_string();
        if coders.contains(&coder) {
            return Err(Error::DuplicateCoder(coder));
        }
        coders.push(coder);
        rows.push(
            record
                .iter()
                .skip(1)
                .map(|cell| (!cell.is_empty()).then(|| cell.to_string()))
                .collect(),
        );
    }
    if coders.is_empty() || items.is_empty() {
        return Err(Error::EmptyInput);
    }
    NominalRatings::from_labels(coders, items, &rows)
}

/// Parses and validates a project file.
pub fn parse_project(bytes: &[u8]) -> Result<CodingProject> {
    let project: CodingProject = serde_json::from_slice(bytes)?;
    let report = validate_project(&project);
    if report.is_valid() {
        Ok(project)
    } else {
        Err(Error::InvalidProject(report))
    }
}
