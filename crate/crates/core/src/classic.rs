//! Classic agreement coefficients for single-label nominal ratings.
//!
//! Two-coder coefficients (percent agreement, Scott's π, Cohen's κ) use only
//! items rated by both coders; the others are listed in `items_excluded`.
//! Fleiss' κ takes any number of coders but needs the same number of ratings
//! on every item.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alpha::{Coefficient, NaReason};
use crate::error::{Error, Result};
use crate::judgements::LabelledJudgements;
use crate::matrix::SquareMatrix;
use crate::model::Span;

/// Single-label ratings of `m` items by `n` coders into `k` categories.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NominalRatings {
    categories: Vec<String>,
    coders: Vec<String>,
    items: Vec<String>,
    /// `ratings[coder][item]`, `None` when the coder did not rate the item.
    ratings: Vec<Vec<Option<usize>>>,
}

impl NominalRatings {
    pub fn new(
        categories: Vec<String>,
        coders: Vec<String>,
        items: Vec<String>,
        ratings: Vec<Vec<Option<usize>>>,
    ) -> Result<Self> {
        if ratings.len() != coders.len() {
            return Err(Error::InvalidJudgements(format!(
                "{} rating rows for {} coders",
                ratings.len(),
                coders.len()
            )));
        }
        for (coder, row) in coders.iter().zip(&ratings) {
            if row.len() != items.len() {
                return Err(Error::InvalidJudgements(format!(
                    "coder `{coder}` has {} ratings for {} items",
                    row.len(),
                    items.len()
                )));
            }
            if let Some(bad) = row.iter().flatten().find(|&&c| c >= categories.len()) {
                return Err(Error::InvalidJudgements(format!(
                    "coder `{coder}` uses category index {bad}, only {} categories",
                    categories.len()
                )));
            }
        }
        Ok(Self {
            categories,
            coders,
            items,
            ratings,
        })
    }

    /// Builds ratings from category names, one row per coder; `None` is a
    /// missing rating. Categories are numbered in order of first appearance.
    pub fn from_labels<S: AsRef<str>>(
        coders: Vec<String>,
        items: Vec<String>,
        rows: &[Vec<Option<S>>],
    ) -> Result<Self> {
        let mut categories: Vec<String> = Vec::new();
        let mut ratings = Vec::with_capacity(rows.len());
        // item-major scan so first appearance follows reading order
        let width = rows.iter().map(Vec::len).max().unwrap_or(0);
        fn index(label: &str, categories: &mut Vec<String>) -> usize {
            match categories.iter().position(|c| c == label) {
                Some(i) => i,
                None => {
                    categories.push(label.to_string());
                    categories.len() - 1
                }
            }
        }
        for row in rows {
            ratings.push(vec![None; row.len()]);
        }
        for item in 0..width {
            for (row, out) in rows.iter().zip(ratings.iter_mut()) {
                if let Some(Some(label)) = row.get(item) {
                    out[item] = Some(index(label.as_ref(), &mut categories));
                }
            }
        }
        Self::new(categories, coders, items, ratings)
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn coders(&self) -> &[String] {
        &self.coders
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn rating(&self, coder: usize, item: usize) -> Option<usize> {
        self.ratings[coder][item]
    }

    pub fn coder_count(&self) -> usize {
        self.coders.len()
    }

    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    pub fn category_count(&self) -> usize {
        self.categories.len()
    }

    /// Renumbers categories to follow `order`, which must be a permutation of
    /// the current categories plus optionally unused extra ones.
    pub fn reorder_categories<S: AsRef<str>>(&self, order: &[S]) -> Result<Self> {
        let order: Vec<String> = order.iter().map(|s| s.as_ref().to_string()).collect();
        let mut map = Vec::with_capacity(self.categories.len());
        for c in &self.categories {
            let to = order
                .iter()
                .position(|o| o == c)
                .ok_or_else(|| Error::InvalidJudgements(format!("category `{c}` missing from new order")))?;
            map.push(to);
        }
        let ratings = self
            .ratings
            .iter()
            .map(|row| row.iter().map(|r| r.map(|c| map[c])).collect())
            .collect();
        Self::new(order, self.coders.clone(), self.items.clone(), ratings)
    }

    /// Unit-weight judgements for the universal alpha, labels = categories.
    pub fn to_judgements(&self) -> LabelledJudgements {
        let mut out = LabelledJudgements::new(self.categories.iter().cloned());
        for (i, item) in self.items.iter().enumerate() {
            let ratings = self
                .coders
                .iter()
                .enumerate()
                .map(|(c, coder)| (coder.clone(), self.ratings[c][i]));
            out.push_single(item.clone(), ratings)
                .expect("indices validated on construction");
        }
        out
    }

    fn require_two(&self, operation: &'static str) -> Result<()> {
        if self.coders.len() != 2 {
            return Err(Error::UnsupportedCoderCount {
                operation,
                found: self.coders.len(),
            });
        }
        Ok(())
    }

    /// Pairs of ratings on items rated by both coders, and the excluded items.
    fn complete_pairs(&self) -> (Vec<(usize, usize)>, Vec<String>) {
        let mut pairs = Vec::new();
        let mut excluded = Vec::new();
        for (i, item) in self.items.iter().enumerate() {
            match (self.ratings[0][i], self.ratings[1][i]) {
                (Some(a), Some(b)) => pairs.push((a, b)),
                _ => excluded.push(item.clone()),
            }
        }
        (pairs, excluded)
    }
}

/// Landis and Koch reading of a kappa value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaBand {
    Poor,
    Slight,
    Fair,
    Moderate,
    Substantial,
    AlmostPerfect,
}

impl fmt::Display for KappaBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Poor => "Poor",
            Self::Slight => "Slight",
            Self::Fair => "Fair",
            Self::Moderate => "Moderate",
            Self::Substantial => "Substantial",
            Self::AlmostPerfect => "Almost perfect",
        })
    }
}

/// Bands close on the right: 0.20 is Slight, anything above it up to 0.40
/// is Fair.
pub fn interpret_kappa(value: f64) -> KappaBand {
    if value < 0.0 {
        KappaBand::Poor
    } else if value <= 0.20 {
        KappaBand::Slight
    } else if value <= 0.40 {
        KappaBand::Fair
    } else if value <= 0.60 {
        KappaBand::Moderate
    } else if value <= 0.80 {
        KappaBand::Substantial
    } else {
        KappaBand::AlmostPerfect
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicResult {
    pub value: Coefficient,
    /// Observed agreement `P_o`.
    pub observed: Option<f64>,
    /// Chance agreement (`P_e` or `P_c`).
    pub chance: Option<f64>,
    pub items_used: usize,
    pub items_excluded: Vec<String>,
    pub band: Option<KappaBand>,
}

impl ClassicResult {
    fn unavailable(reason: NaReason, items_used: usize, items_excluded: Vec<String>) -> Self {
        Self {
            value: Coefficient::NotAvailable(reason),
            observed: None,
            chance: None,
            items_used,
            items_excluded,
            band: None,
        }
    }

    fn corrected(p_o: f64, p_e: f64, items_used: usize, items_excluded: Vec<String>, banded: bool) -> Self {
        if p_e >= 1.0 {
            return Self {
                observed: Some(p_o),
                chance: Some(p_e),
                ..Self::unavailable(NaReason::SingleLabel, items_used, items_excluded)
            };
        }
        let value = (p_o - p_e) / (1.0 - p_e);
        Self {
            value: Coefficient::Value(value),
            observed: Some(p_o),
            chance: Some(p_e),
            items_used,
            items_excluded,
            band: banded.then(|| interpret_kappa(value)),
        }
    }
}

/// Share of jointly rated items on which the two coders agree.
pub fn percent_agreement(ratings: &NominalRatings) -> Result<ClassicResult> {
    ratings.require_two("percent agreement")?;
    let (pairs, excluded) = ratings.complete_pairs();
    if pairs.is_empty() {
        return Ok(ClassicResult::unavailable(NaReason::NoItems, 0, excluded));
    }
    let agreed = pairs.iter().filter(|(a, b)| a == b).count();
    let p_o = agreed as f64 / pairs.len() as f64;
    Ok(ClassicResult {
        value: Coefficient::Value(p_o),
        observed: Some(p_o),
        chance: None,
        items_used: pairs.len(),
        items_excluded: excluded,
        band: None,
    })
}

/// `2A/(N₁ + N₂)` on nominal ratings: `A` agreements on jointly rated items,
/// `N_c` the number of items coder `c` rated.
pub fn holsti_ratings(ratings: &NominalRatings) -> Result<ClassicResult> {
    ratings.require_two("Holsti index")?;
    let (pairs, excluded) = ratings.complete_pairs();
    let rated = |c: usize| ratings.ratings[c].iter().flatten().count();
    let total = rated(0) + rated(1);
    if total == 0 {
        return Ok(ClassicResult::unavailable(NaReason::NoItems, 0, excluded));
    }
    let agreed = pairs.iter().filter(|(a, b)| a == b).count();
    let value = 2.0 * agreed as f64 / total as f64;
    Ok(ClassicResult {
        value: Coefficient::Value(value),
        observed: Some(value),
        chance: None,
        items_used: pairs.len(),
        items_excluded: excluded,
        band: None,
    })
}

fn merged_length(spans: &[Span]) -> (Vec<Span>, u64) {
    let mut sorted: Vec<Span> = spans.iter().copied().filter(|s| !s.is_empty()).collect();
    sorted.sort_by_key(|s| (s.start, s.end));
    let mut merged: Vec<Span> = Vec::new();
    for s in sorted {
        match merged.last_mut() {
            Some(last) if s.start <= last.end => last.end = last.end.max(s.end),
            _ => merged.push(s),
        }
    }
    let len = merged.iter().map(Span::len).sum();
    (merged, len)
}

/// `2·|overlap|/(|first| + |second|)` for two coders' selected spans in one
/// continuum. Overlapping spans of the same coder count once.
pub fn holsti_index(first: &[Span], second: &[Span]) -> Coefficient {
    let (a, len_a) = merged_length(first);
    let (b, len_b) = merged_length(second);
    if len_a + len_b == 0 {
        return Coefficient::NotAvailable(NaReason::EmptySelections);
    }
    let (mut i, mut j, mut overlap) = (0, 0, 0u64);
    while i < a.len() && j < b.len() {
        overlap += a[i].overlap_len(&b[j]);
        if a[i].end <= b[j].end {
            i += 1;
        } else {
            j += 1;
        }
    }
    Coefficient::Value(2.0 * overlap as f64 / (len_a + len_b) as f64)
}

/// Scott's π with chance agreement `Σ p_i²` over the `2m` pooled ratings.
pub fn scott_pi(ratings: &NominalRatings) -> Result<ClassicResult> {
    ratings.require_two("Scott's pi")?;
    let (pairs, excluded) = ratings.complete_pairs();
    let m = pairs.len();
    if m == 0 {
        return Ok(ClassicResult::unavailable(NaReason::NoItems, 0, excluded));
    }
    let mut pooled = vec![0usize; ratings.category_count()];
    for &(a, b) in &pairs {
        pooled[a] += 1;
        pooled[b] += 1;
    }
    let denom = (2 * m) as f64;
    let p_e: f64 = pooled.iter().map(|&n| (n as f64 / denom).powi(2)).sum();
    let p_o = pairs.iter().filter(|(a, b)| a == b).count() as f64 / m as f64;
    Ok(ClassicResult::corrected(p_o, p_e, m, excluded, false))
}

/// Two-coder contingency table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContingencyMatrix {
    pub categories: Vec<String>,
    /// `counts[i][j]`: items the first coder put in `i` and the second in `j`.
    pub counts: SquareMatrix,
}

impl ContingencyMatrix {
    pub fn item_count(&self) -> f64 {
        self.counts.sum()
    }

    /// Rows follow the second coder, columns the first.
    pub fn printed_layout(&self) -> SquareMatrix {
        self.counts.transpose()
    }
}

pub fn contingency_matrix(ratings: &NominalRatings) -> Result<ContingencyMatrix> {
    ratings.require_two("contingency matrix")?;
    let (pairs, _) = ratings.complete_pairs();
    let mut counts = SquareMatrix::zeros(ratings.category_count());
    for (a, b) in pairs {
        counts[(a, b)] += 1.0;
    }
    Ok(ContingencyMatrix {
        categories: ratings.categories.clone(),
        counts,
    })
}

/// Cohen's κ with `P_c = Σ row_i·col_i / m²`.
pub fn cohen_kappa(ratings: &NominalRatings) -> Result<ClassicResult> {
    let table = contingency_matrix(ratings)?;
    let (_, excluded) = ratings.complete_pairs();
    let m = table.item_count();
    if m == 0.0 {
        return Ok(ClassicResult::unavailable(NaReason::NoItems, 0, excluded));
    }
    let rows = table.counts.row_sums();
    let cols = table.counts.transpose().row_sums();
    let p_c: f64 = rows.iter().zip(&cols).map(|(r, c)| r * c).sum::<f64>() / (m * m);
    let p_o = table.counts.trace() / m;
    Ok(ClassicResult::corrected(p_o, p_c, m as usize, excluded, true))
}

/// `n_{i,β}`: number of raters assigning category `i` to item `β`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryItemCounts {
    pub categories: Vec<String>,
    pub items: Vec<String>,
    /// `counts[item][category]`.
    pub counts: Vec<Vec<usize>>,
    /// Raters per item.
    pub raters: usize,
}

impl CategoryItemCounts {
    /// Items nobody rated are dropped. Every other item must have the same
    /// number of ratings, at least two.
    pub fn from_ratings(ratings: &NominalRatings) -> Result<Self> {
        let k = ratings.category_count();
        let mut items = Vec::new();
        let mut counts = Vec::new();
        let mut raters = None;
        for (i, item) in ratings.items.iter().enumerate() {
            let mut row = vec![0usize; k];
            let mut n = 0;
            for coder in &ratings.ratings {
                if let Some(c) = coder[i] {
                    row[c] += 1;
                    n += 1;
                }
            }
            if n == 0 {
                continue;
            }
            match raters {
                None => raters = Some(n),
                Some(expected) if expected != n => {
                    return Err(Error::UnequalRaters {
                        item: item.clone(),
                        expected,
                        found: n,
                    })
                }
                Some(_) => {}
            }
            items.push(item.clone());
            counts.push(row);
        }
        Ok(Self {
            categories: ratings.categories.clone(),
            items,
            counts,
            raters: raters.unwrap_or(0),
        })
    }

    pub fn item_count(&self) -> usize {
        self.items.len()
    }
}

/// Fleiss' κ: `P_o` is the mean of `(Σ_i n_iβ² − n)/(n(n−1))`, `P_e = Σ p_i²`.
pub fn fleiss_kappa(counts: &CategoryItemCounts) -> Result<ClassicResult> {
    let m = counts.item_count();
    if m == 0 {
        return Ok(ClassicResult::unavailable(NaReason::NoItems, 0, Vec::new()));
    }
    let n = counts.raters;
    if n < 2 {
        return Err(Error::UnsupportedCoderCount {
            operation: "Fleiss' kappa",
            found: n,
        });
    }
    let nf = n as f64;
    let mut totals = vec![0usize; counts.categories.len()];
    let mut p_o = 0.0;
    for row in &counts.counts {
        let squares: usize = row.iter().map(|c| c * c).sum();
        p_o += (squares - n) as f64 / (nf * (nf - 1.0));
        for (t, c) in totals.iter_mut().zip(row) {
            *t += c;
        }
    }
    p_o /= m as f64;
    let denom = nf * m as f64;
    let p_e: f64 = totals.iter().map(|&t| (t as f64 / denom).powi(2)).sum();
    Ok(ClassicResult::corrected(p_o, p_e, m, Vec::new(), false))
}
