//! Structural violations found while checking codebooks, codings and metrics.
//!
//! Violations are data: validators never fail, they return a
//! [`ValidationReport`] listing everything they found, in a stable order.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateDomain {
        domain: String,
    },
    EmptyDomain {
        domain: String,
    },
    DuplicateCode {
        domain: String,
        code: String,
    },
    SharedCode {
        code: String,
        first_domain: String,
        second_domain: String,
    },
    DuplicateCoder {
        coder: String,
    },
    DuplicateDocument {
        document: String,
    },
    DuplicateQuotation {
        quotation: String,
    },
    UnknownDocument {
        quotation: String,
        document: String,
    },
    UnknownOwner {
        quotation: String,
        coder: String,
    },
    InvalidSpan {
        quotation: String,
        start: u64,
        end: u64,
        length: u64,
    },
    OverlappingQuotations {
        document: String,
        first: String,
        second: String,
    },
    UnknownCoder {
        application: usize,
        coder: String,
    },
    UnknownQuotation {
        application: usize,
        quotation: String,
    },
    UnknownCode {
        application: usize,
        code: String,
    },
    ForeignQuotation {
        coder: String,
        quotation: String,
        owner: String,
    },
    OverlappingCoding {
        coder: String,
        first: String,
        second: String,
    },
    MutualExclusivity {
        coder: String,
        quotation: String,
        domain: String,
        first_code: String,
        second_code: String,
    },
    MetricShape {
        expected: usize,
        found: usize,
    },
    NonFiniteDistance {
        first: String,
        second: String,
    },
    NegativeDistance {
        first: String,
        second: String,
        distance: f64,
    },
    NonZeroDiagonal {
        label: String,
        distance: f64,
    },
    Asymmetric {
        first: String,
        second: String,
    },
    TriangleInequality {
        first: String,
        middle: String,
        last: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            DuplicateDomain { domain } => write!(f, "domain {domain} declared twice"),
            EmptyDomain { domain } => write!(f, "domain {domain} has no codes"),
            DuplicateCode { domain, code } => {
                write!(f, "code {code} declared twice in domain {domain}")
            }
            SharedCode {
                code,
                first_domain,
                second_domain,
            } => write!(
                f,
                "code {code} in two domains ({first_domain}, {second_domain})"
            ),
            DuplicateCoder { coder } => write!(f, "coder {coder} declared twice"),
            DuplicateDocument { document } => write!(f, "document {document} declared twice"),
            DuplicateQuotation { quotation } => write!(f, "quotation {quotation} declared twice"),
            UnknownDocument {
                quotation,
                document,
            } => write!(f, "quotation {quotation} refers to unknown document {document}"),
            UnknownOwner { quotation, coder } => {
                write!(f, "quotation {quotation} owned by unknown coder {coder}")
            }
            InvalidSpan {
                quotation,
                start,
                end,
                length,
            } => write!(
                f,
                "quotation {quotation} span [{start}, {end}) invalid for document length {length}"
            ),
            OverlappingQuotations {
                document,
                first,
                second,
            } => write!(
                f,
                "quotations {first} and {second} overlap in document {document}"
            ),
            UnknownCoder { application, coder } => {
                write!(f, "application #{application} refers to unknown coder {coder}")
            }
            UnknownQuotation {
                application,
                quotation,
            } => write!(
                f,
                "application #{application} refers to unknown quotation {quotation}"
            ),
            UnknownCode { application, code } => {
                write!(f, "application #{application} refers to unknown code {code}")
            }
            ForeignQuotation {
                coder,
                quotation,
                owner,
            } => write!(
                f,
                "coder {coder} coded quotation {quotation} segmented by coder {owner}"
            ),
            OverlappingCoding {
                coder,
                first,
                second,
            } => write!(
                f,
                "coder {coder} coded overlapping quotations {first} and {second}"
            ),
            MutualExclusivity {
                coder,
                quotation,
                domain,
                first_code,
                second_code,
            } => write!(
                f,
                "coder {coder} applied {first_code} and {second_code} (both in {domain}) to quotation {quotation}"
            ),
            MetricShape { expected, found } => {
                write!(f, "metric covers {found} labels, expected {expected}")
            }
            NonFiniteDistance { first, second } => {
                write!(f, "distance between {first} and {second} is not finite")
            }
            NegativeDistance {
                first,
                second,
                distance,
            } => write!(f, "distance between {first} and {second} is negative ({distance})"),
            NonZeroDiagonal { label, distance } => {
                write!(f, "distance from {label} to itself is {distance}, expected 0")
            }
            Asymmetric { first, second } => {
                write!(f, "distance {first}→{second} differs from {second}→{first}")
            }
            TriangleInequality {
                first,
                middle,
                last,
            } => write!(
                f,
                "triangle inequality fails: d({first},{last}) > d({first},{middle}) + d({middle},{last})"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, violation: Violation) {
        self.violations.push(violation);
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
