//! Inter-coder agreement for qualitative coding projects.
//!
//! The universal alpha in [`alpha`] works on arbitrary labelled judgements;
//! [`variants`] derives the binary, cu and Cu flavours from a coding project
//! through the [`unitize`] decomposition. [`classic`] holds the pairwise and
//! multi-rater coefficients used as baselines.

pub mod alpha;
pub mod classic;
pub mod error;
pub mod ingest;
pub mod judgements;
pub mod matrix;
pub mod metrics;
pub mod model;
pub mod report;
pub mod unitize;
pub mod validation;
pub mod variants;

pub use alpha::{universal_alpha, AgreementResult, Coefficient, NaReason, Verdict};
pub use error::{Error, Result};
pub use judgements::{JudgedItem, LabelledJudgements};
pub use matrix::SquareMatrix;
pub use metrics::{LabelMetric, MetricSpec};
pub use model::{
    validate_project, Code, CodeApplication, Codebook, Coder, CodingProject, Document, Quotation,
    SemanticDomain, Span,
};
pub use unitize::{unitize, Segment, Segmentation};
pub use validation::{ValidationReport, Violation};
pub use variants::{compute_variant, VariantContext, VariantSpec};
pub use classic::{KappaBand, NominalRatings};
pub use ingest::{parse_project, parse_reliability_csv};
pub use report::{render_report, Format, Report};
