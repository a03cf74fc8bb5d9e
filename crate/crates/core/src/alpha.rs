//! Universal Krippendorff's alpha.
//!
//! Given labelled judgements `Ω` and a pseudo-metric `δ`:
//!
//! * `o[i][j]` is the weighted number of ordered pairs of judgements made by
//!   two different coders on the same item, the first containing label `i`
//!   and the second label `j`;
//! * `t_i` are the row sums of `o`, `t` their total;
//! * `e[i][j] = t_i·t_j/(t−1)` off the diagonal and `t_i·(t_i−1)/(t−1)` on it;
//! * `D_o = Σ o[i][j]·δ(i,j)`, `D_e = Σ e[i][j]·δ(i,j)` and `α = 1 − D_o/D_e`.
//!
//! Items weighted `w` contribute `w` per ordered pair, which is the same as
//! replicating the item once per atomic unit. Accumulation runs in item order
//! so results are bit-reproducible.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::judgements::LabelledJudgements;
use crate::matrix::SquareMatrix;
use crate::metrics::LabelMetric;

/// Lower bound of the "reliable" band.
pub const RELIABLE_THRESHOLD: f64 = 0.80;
/// Lower bound of the "tentative" band.
pub const TENTATIVE_THRESHOLD: f64 = 0.667;

/// Why a coefficient could not be computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NaReason {
    /// Fewer than two items were judged by at least two coders.
    InsufficientPairedItems,
    /// Fewer than two pairable judgements (`t < 2`).
    InsufficientPairs,
    /// Every paired judgement used the same label, so `D_e = 0`.
    SingleLabel,
    /// Several labels in use but the metric puts them all at distance 0.
    NoExpectedDisagreement,
    /// No item was rated by the coders being compared.
    NoItems,
    /// Neither coder selected any matter.
    EmptySelections,
}

impl NaReason {
    pub fn code(self) -> &'static str {
        match self {
            Self::InsufficientPairedItems => "insufficient_paired_items",
            Self::InsufficientPairs => "insufficient_pairs",
            Self::SingleLabel => "single_label",
            Self::NoExpectedDisagreement => "no_expected_disagreement",
            Self::NoItems => "no_items",
            Self::EmptySelections => "empty_selections",
        }
    }
}

impl fmt::Display for NaReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::InsufficientPairedItems => "insufficient paired items",
            Self::InsufficientPairs => "insufficient pairs",
            Self::SingleLabel => "single label",
            Self::NoExpectedDisagreement => "no expected disagreement",
            Self::NoItems => "no rated items",
            Self::EmptySelections => "empty selections",
        })
    }
}

/// A coefficient value, or the reason it is not available.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coefficient {
    Value(f64),
    NotAvailable(NaReason),
}

impl Coefficient {
    pub fn value(self) -> Option<f64> {
        match self {
            Self::Value(v) => Some(v),
            Self::NotAvailable(_) => None,
        }
    }

    pub fn na_reason(self) -> Option<NaReason> {
        match self {
            Self::Value(_) => None,
            Self::NotAvailable(r) => Some(r),
        }
    }

    pub fn is_available(self) -> bool {
        matches!(self, Self::Value(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Reliable,
    Tentative,
    Unreliable,
    NotAvailable,
}

impl Verdict {
    pub fn of(coefficient: Coefficient) -> Self {
        match coefficient {
            Coefficient::NotAvailable(_) => Self::NotAvailable,
            Coefficient::Value(v) if v >= RELIABLE_THRESHOLD => Self::Reliable,
            Coefficient::Value(v) if v >= TENTATIVE_THRESHOLD => Self::Tentative,
            Coefficient::Value(_) => Self::Unreliable,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Reliable => "reliable(≥0.80)",
            Self::Tentative => "tentative(≥0.667)",
            Self::Unreliable => "unreliable",
            Self::NotAvailable => "not_available",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoincidenceMatrices {
    pub labels: Vec<String>,
    pub observed: SquareMatrix,
    /// Absent when `t < 2`.
    pub expected: Option<SquareMatrix>,
    pub marginals: Vec<f64>,
    pub total: f64,
}

/// Agreement-side reading of the discrete-metric alpha:
/// `P_o = Σ o_ii / t`, `P_e = Σ e_ii / t`, `α = (P_o − P_e)/(1 − P_e)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgreementForm {
    pub p_o: f64,
    pub p_e: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgreementResult {
    pub value: Coefficient,
    pub observed_disagreement: f64,
    pub expected_disagreement: Option<f64>,
    pub paired_items: usize,
    pub verdict: Verdict,
    pub coincidences: CoincidenceMatrices,
    /// Only for the discrete metric.
    pub agreement_form: Option<AgreementForm>,
}

/// Observed coincidences `o[i][j]`.
///
/// Per item, with `c_l` the number of coders whose set holds `l` and `s_ij`
/// the number whose set holds both `i` and `j`, the ordered pairs from two
/// different coders number `c_i·c_j − s_ij`. Items with fewer than two
/// non-empty judgements contribute nothing.
pub fn observed_coincidences(judgements: &LabelledJudgements) -> SquareMatrix {
    let k = judgements.label_count();
    let mut observed = SquareMatrix::zeros(k);
    let mut counts = vec![0u64; k];
    let mut same_coder = vec![0u64; k * k];
    let mut present: Vec<usize> = Vec::with_capacity(k);

    for item in judgements.items() {
        if !item.is_paired() {
            continue;
        }
        counts.iter_mut().for_each(|c| *c = 0);
        same_coder.iter_mut().for_each(|c| *c = 0);
        for set in item.judgements.values() {
            for &i in set {
                counts[i] += 1;
                for &j in set {
                    same_coder[i * k + j] += 1;
                }
            }
        }
        present.clear();
        present.extend((0..k).filter(|&l| counts[l] > 0));
        for &i in &present {
            for &j in &present {
                let pairs = counts[i] * counts[j] - same_coder[i * k + j];
                if pairs > 0 {
                    observed[(i, j)] += item.weight * pairs as f64;
                }
            }
        }
    }
    observed
}

/// Expected coincidences from the marginals `t_i` and total `t`.
///
/// Returns `InsufficientPairs` when `t < 2`.
pub fn expected_coincidences(marginals: &[f64], total: f64) -> std::result::Result<SquareMatrix, NaReason> {
    if total < 2.0 {
        return Err(NaReason::InsufficientPairs);
    }
    let k = marginals.len();
    let mut expected = SquareMatrix::zeros(k);
    let denom = total - 1.0;
    for i in 0..k {
        for j in 0..k {
            expected[(i, j)] = if i == j {
                marginals[i] * (marginals[i] - 1.0) / denom
            } else {
                marginals[i] * marginals[j] / denom
            };
        }
    }
    Ok(expected)
}

/// `Σ_i Σ_j matrix[i][j]·δ(i, j)`.
pub fn disagreement(matrix: &SquareMatrix, metric: &LabelMetric) -> f64 {
    let k = matrix.order();
    let mut sum = 0.0;
    for i in 0..k {
        for j in 0..k {
            let m = matrix[(i, j)];
            if m != 0.0 {
                sum += m * metric.distance(i, j);
            }
        }
    }
    sum
}

/// Coincidence matrices for `judgements`, without computing alpha.
pub fn coincidences(judgements: &LabelledJudgements) -> CoincidenceMatrices {
    let observed = observed_coincidences(judgements);
    let marginals = observed.row_sums();
    let total: f64 = marginals.iter().sum();
    let expected = expected_coincidences(&marginals, total).ok();
    CoincidenceMatrices {
        labels: judgements.labels().to_vec(),
        observed,
        expected,
        marginals,
        total,
    }
}

/// `α = 1 − D_o/D_e`, or `NotAvailable` on degenerate data.
///
/// Degeneracy is checked in this order: fewer than two paired items, `t < 2`,
/// `D_e = 0` (reported as `SingleLabel` when only one label has a non-zero
/// marginal).
pub fn universal_alpha(judgements: &LabelledJudgements, metric: &LabelMetric) -> Result<AgreementResult> {
    metric.check_labels(judgements.label_count())?;

    let paired_items = judgements.paired_items();
    let matrices = coincidences(judgements);
    let observed_disagreement = disagreement(&matrices.observed, metric);
    let expected_disagreement = matrices.expected.as_ref().map(|e| disagreement(e, metric));

    let value = if paired_items < 2 {
        Coefficient::NotAvailable(NaReason::InsufficientPairedItems)
    } else {
        match expected_disagreement {
            None => Coefficient::NotAvailable(NaReason::InsufficientPairs),
            Some(de) if de > 0.0 => Coefficient::Value(1.0 - observed_disagreement / de),
            Some(_) => {
                let used = matrices.marginals.iter().filter(|&&t| t > 0.0).count();
                Coefficient::NotAvailable(if used <= 1 {
                    NaReason::SingleLabel
                } else {
                    NaReason::NoExpectedDisagreement
                })
            }
        }
    };

    let agreement_form = match (&matrices.expected, metric.is_discrete(), value) {
        (Some(expected), true, Coefficient::Value(_)) => {
            let p_o = matrices.observed.trace() / matrices.total;
            let p_e = expected.trace() / matrices.total;
            Some(AgreementForm {
                p_o,
                p_e,
                alpha: (p_o - p_e) / (1.0 - p_e),
            })
        }
        _ => None,
    };

    Ok(AgreementResult {
        value,
        observed_disagreement,
        expected_disagreement,
        paired_items,
        verdict: Verdict::of(value),
        coincidences: matrices,
        agreement_form,
    })
}
