//! Pseudo-metrics over labels, used to weight disagreements.
//!
//! A [`LabelMetric`] is resolved against an ordered label set and answers
//! `distance(i, j)` by label index. [`MetricSpec`] is the file-level,
//! label-name keyed description that resolves into a `LabelMetric`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::validation::{ValidationReport, Violation};

/// 0 on the diagonal, 1 elsewhere.
pub fn discrete_distance(i: usize, j: usize) -> f64 {
    if i == j {
        0.0
    } else {
        1.0
    }
}

/// Euclidean norm of the difference; absolute difference for scalars.
pub fn interval_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    if a.len() == 1 {
        return (a[0] - b[0]).abs();
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `sin²(a − b)` for angles in radians. Opposed angles are at distance 0.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    let s = (a - b).sin();
    s * s
}

#[derive(Debug, Clone, PartialEq)]
pub enum LabelMetric {
    Discrete,
    /// One coordinate vector per label, all of the same dimension.
    Interval { values: Vec<Vec<f64>> },
    /// One angle (radians) per label.
    Angular { angles: Vec<f64> },
    Custom { matrix: SquareMatrix },
}

impl LabelMetric {
    pub fn interval<L: AsRef<str>>(labels: &[L], values: &BTreeMap<String, Vec<f64>>) -> Result<Self> {
        let mut out = Vec::with_capacity(labels.len());
        let mut dim = None;
        for label in labels {
            let label = label.as_ref();
            let v = values
                .get(label)
                .ok_or_else(|| Error::MetricConfig(format!("no value for label `{label}`")))?;
            if v.is_empty() {
                return Err(Error::MetricConfig(format!("empty value for label `{label}`")));
            }
            match dim {
                None => dim = Some(v.len()),
                Some(d) if d != v.len() => {
                    return Err(Error::MetricConfig(format!(
                        "label `{label}` has {} coordinates, expected {d}",
                        v.len()
                    )))
                }
                Some(_) => {}
            }
            out.push(v.clone());
        }
        Ok(Self::Interval { values: out })
    }

    pub fn angular<L: AsRef<str>>(labels: &[L], angles: &BTreeMap<String, f64>, degrees: bool) -> Result<Self> {
        let angles = labels
            .iter()
            .map(|label| {
                let label = label.as_ref();
                angles
                    .get(label)
                    .map(|&a| if degrees { a * PI / 180.0 } else { a })
                    .ok_or_else(|| Error::MetricConfig(format!("no angle for label `{label}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::Angular { angles })
    }

    /// A user-supplied distance matrix. It must satisfy the pseudo-metric
    /// axioms, see [`validate_metric`].
    pub fn custom<L: AsRef<str>>(labels: &[L], rows: Vec<Vec<f64>>) -> Result<Self> {
        let matrix = SquareMatrix::from_rows(rows).map_err(|e| Error::MetricConfig(e.to_string()))?;
        let metric = Self::Custom { matrix };
        let labels: Vec<String> = labels.iter().map(|l| l.as_ref().to_string()).collect();
        let report = validate_metric(&metric, &labels);
        if report.is_valid() {
            Ok(metric)
        } else {
            Err(Error::InvalidMetric(report))
        }
    }

    /// Number of labels the metric was resolved for; `None` for the discrete
    /// metric, which works on any label set.
    pub fn label_count(&self) -> Option<usize> {
        match self {
            Self::Discrete => None,
            Self::Interval { values } => Some(values.len()),
            Self::Angular { angles } => Some(angles.len()),
            Self::Custom { matrix } => Some(matrix.order()),
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Self::Discrete)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Discrete => "discrete",
            Self::Interval { .. } => "interval",
            Self::Angular { .. } => "angular",
            Self::Custom { .. } => "custom",
        }
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match self {
            Self::Discrete => discrete_distance(i, j),
            Self::Interval { values } => interval_distance(&values[i], &values[j]),
            Self::Angular { angles } => angular_distance(angles[i], angles[j]),
            Self::Custom { matrix } => matrix[(i, j)],
        }
    }

    pub(crate) fn check_labels(&self, k: usize) -> Result<()> {
        match self.label_count() {
            Some(n) if n != k => Err(Error::MetricConfig(format!(
                "{} metric defined for {n} labels, data has {k}",
                self.name()
            ))),
            _ => Ok(()),
        }
    }
}

/// Checks the pseudo-metric axioms over `labels`.
///
/// Symmetry, zero diagonal and non-negativity are checked for every metric.
/// The triangle inequality is checked over all `k³` triples except for the
/// angular metric: `sin²` is admitted even though it breaks the inequality
/// for some triples.
pub fn validate_metric(metric: &LabelMetric, labels: &[String]) -> ValidationReport {
    let mut report = ValidationReport::new();
    let k = labels.len();
    if let Some(n) = metric.label_count() {
        if n != k {
            report.push(Violation::MetricShape { expected: k, found: n });
            return report;
        }
    }
    let d = |i: usize, j: usize| metric.distance(i, j);

    for i in 0..k {
        for j in 0..k {
            let v = d(i, j);
            if !v.is_finite() {
                report.push(Violation::NonFiniteDistance {
                    first: labels[i].clone(),
                    second: labels[j].clone(),
                });
            } else if v < 0.0 {
                report.push(Violation::NegativeDistance {
                    first: labels[i].clone(),
                    second: labels[j].clone(),
                    distance: v,
                });
            }
        }
    }
    for (i, label) in labels.iter().enumerate() {
        let v = d(i, i);
        if v != 0.0 {
            report.push(Violation::NonZeroDiagonal {
                label: label.clone(),
                distance: v,
            });
        }
    }
    for i in 0..k {
        for j in (i + 1)..k {
            if d(i, j) != d(j, i) {
                report.push(Violation::Asymmetric {
                    first: labels[i].clone(),
                    second: labels[j].clone(),
                });
            }
        }
    }
    if !matches!(metric, LabelMetric::Angular { .. }) {
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let direct = d(a, c);
                    let detour = d(a, b) + d(b, c);
                    // relative slack for rounding in computed (interval) distances
                    if direct > detour + 1e-12 * direct.abs().max(1.0) {
                        report.push(Violation::TriangleInequality {
                            first: labels[a].clone(),
                            middle: labels[b].clone(),
                            last: labels[c].clone(),
                        });
                    }
                }
            }
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coordinates {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl Coordinates {
    fn to_vec(&self) -> Vec<f64> {
        match self {
            Self::Scalar(x) => vec![*x],
            Self::Vector(v) => v.clone(),
        }
    }
}

/// Label-name keyed metric description, as stored in project files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricSpec {
    Discrete,
    Interval {
        values: BTreeMap<String, Coordinates>,
    },
    Angular {
        values: BTreeMap<String, f64>,
        #[serde(default)]
        degrees: bool,
    },
    Custom {
        labels: Vec<String>,
        matrix: Vec<Vec<f64>>,
    },
}

impl MetricSpec {
    pub fn resolve<L: AsRef<str>>(&self, labels: &[L]) -> Result<LabelMetric> {
        match self {
            Self::Discrete => Ok(LabelMetric::Discrete),
            Self::Interval { values } => {
                let values: BTreeMap<String, Vec<f64>> =
                    values.iter().map(|(k, v)| (k.clone(), v.to_vec())).collect();
                LabelMetric::interval(labels, &values)
            }
            Self::Angular { values, degrees } => LabelMetric::angular(labels, values, *degrees),
            Self::Custom {
                labels: own,
                matrix,
            } => {
                if matrix.len() != own.len() || matrix.iter().any(|r| r.len() != own.len()) {
                    return Err(Error::MetricConfig(format!(
                        "custom matrix must be {0}×{0}",
                        own.len()
                    )));
                }
                let index: Vec<usize> = labels
                    .iter()
                    .map(|l| {
                        let l = l.as_ref();
                        own.iter()
                            .position(|o| o == l)
                            .ok_or_else(|| Error::MetricConfig(format!("label `{l}` missing from custom matrix")))
                    })
                    .collect::<Result<_>>()?;
                let rows = index
                    .iter()
                    .map(|&i| index.iter().map(|&j| matrix[i][j]).collect())
                    .collect();
                LabelMetric::custom(labels, rows)
            }
        }
    }
}
