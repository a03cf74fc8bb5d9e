//! Input of the universal alpha: per item, per coder, a set of labels.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One item with its weight and the label sets each coder gave it.
///
/// Coders absent from `judgements` (or present with an empty set) did not
/// judge the item.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JudgedItem {
    pub id: String,
    pub weight: f64,
    pub judgements: BTreeMap<String, BTreeSet<usize>>,
}

impl JudgedItem {
    /// Number of coders with a non-empty label set.
    pub fn judgement_count(&self) -> usize {
        self.judgements.values().filter(|s| !s.is_empty()).count()
    }

    pub fn is_paired(&self) -> bool {
        self.judgement_count() >= 2
    }
}

/// Labels `Λ` and the judgements `Ω` over a list of weighted items.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LabelledJudgements {
    labels: Vec<String>,
    items: Vec<JudgedItem>,
}

impl LabelledJudgements {
    pub fn new<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            labels: labels.into_iter().map(Into::into).collect(),
            items: Vec::new(),
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn items(&self) -> &[JudgedItem] {
        &self.items
    }

    /// Adds an item. Weight must be positive and finite; label indices must
    /// be in range. Repeated labels in one judgement collapse to one.
    pub fn push_item<C, L>(&mut self, id: impl Into<String>, weight: f64, judgements: C) -> Result<()>
    where
        C: IntoIterator<Item = (String, L)>,
        L: IntoIterator<Item = usize>,
    {
        let id = id.into();
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::InvalidJudgements(format!(
                "item `{id}` has non-positive weight {weight}"
            )));
        }
        let mut map: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
        for (coder, labels) in judgements {
            let set = map.entry(coder).or_default();
            for label in labels {
                if label >= self.labels.len() {
                    return Err(Error::InvalidJudgements(format!(
                        "item `{id}` uses label index {label}, only {} labels",
                        self.labels.len()
                    )));
                }
                set.insert(label);
            }
        }
        self.items.push(JudgedItem {
            id,
            weight,
            judgements: map,
        });
        Ok(())
    }

    /// Convenience for unit-weight single-label data: `None` means no judgement.
    pub fn push_single<I>(&mut self, id: impl Into<String>, ratings: I) -> Result<()>
    where
        I: IntoIterator<Item = (String, Option<usize>)>,
    {
        self.push_item(
            id,
            1.0,
            ratings.into_iter().map(|(c, r)| (c, r.into_iter().collect::<Vec<_>>())),
        )
    }

    pub fn total_weight(&self) -> f64 {
        self.items.iter().map(|i| i.weight).sum()
    }

    pub fn paired_items(&self) -> usize {
        self.items.iter().filter(|i| i.is_paired()).count()
    }

    /// Concatenates the items of two judgement sets over the same labels.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.labels != other.labels {
            return Err(Error::InvalidJudgements("label sets differ".into()));
        }
        let mut out = self.clone();
        out.items.extend(other.items.iter().cloned());
        Ok(out)
    }
}
