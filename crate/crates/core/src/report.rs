//! Report assembly and rendering.
//!
//! Reports keep full-precision values; only the markdown rendering rounds.
//! Entry order is fixed by the builders, so identical input renders to
//! identical bytes.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::alpha::{AgreementForm, AgreementResult, CoincidenceMatrices, NaReason, Verdict};
use crate::classic::{
    cohen_kappa, contingency_matrix, fleiss_kappa, holsti_ratings, percent_agreement, scott_pi,
    CategoryItemCounts, ClassicResult, KappaBand, NominalRatings,
};
use crate::alpha::universal_alpha;
use crate::error::Result;
use crate::matrix::SquareMatrix;
use crate::metrics::{LabelMetric, MetricSpec};
use crate::variants::{VariantContext, VariantSpec};

pub const SUBSET_WARNING: &str = "global coefficients computed on domain subset";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Markdown,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_o: Option<f64>,
    /// Chance agreement (`P_e`, or `P_c` for Cohen's κ).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_e: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub items_used: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub items_excluded: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paired_items: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coincidences: Option<CoincidenceMatrices>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agreement_form: Option<AgreementForm>,
    /// Rows follow the first coder.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contingency: Option<SquareMatrix>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub categories: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub na_reason: Option<NaReason>,
    pub d_o: Option<f64>,
    pub d_e: Option<f64>,
    /// Absent for plain agreement rates.
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band: Option<KappaBand>,
    pub warnings: Vec<String>,
    #[serde(default)]
    pub diagnostics: Diagnostics,
}

impl CoefficientEntry {
    pub fn is_available(&self) -> bool {
        self.value.is_some()
    }

    fn from_alpha(kind: &str, domain: Option<&str>, metric: &LabelMetric, r: AgreementResult) -> Self {
        Self {
            kind: kind.to_string(),
            domain: domain.map(str::to_string),
            value: r.value.value(),
            na_reason: r.value.na_reason(),
            d_o: Some(r.observed_disagreement),
            d_e: r.expected_disagreement,
            verdict: Some(r.verdict),
            band: None,
            warnings: Vec::new(),
            diagnostics: Diagnostics {
                metric: Some(metric.name().to_string()),
                paired_items: Some(r.paired_items),
                agreement_form: r.agreement_form,
                coincidences: Some(r.coincidences),
                ..Diagnostics::default()
            },
        }
    }

    fn from_classic(kind: &str, r: ClassicResult, chance_corrected: bool) -> Self {
        let mut warnings = Vec::new();
        if !r.items_excluded.is_empty() {
            warnings.push(format!(
                "{} item(s) without both ratings excluded",
                r.items_excluded.len()
            ));
        }
        Self {
            kind: kind.to_string(),
            domain: None,
            value: r.value.value(),
            na_reason: r.value.na_reason(),
            d_o: None,
            d_e: None,
            verdict: chance_corrected.then(|| Verdict::of(r.value)),
            band: r.band,
            warnings,
            diagnostics: Diagnostics {
                p_o: r.observed,
                p_e: r.chance,
                items_used: Some(r.items_used),
                items_excluded: r.items_excluded,
                ..Diagnostics::default()
            },
        }
    }
}

/// Length coded by one coder, per domain (`code` absent) or per code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub coder: String,
    pub domain: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<String>,
    pub units: u64,
    /// Percentage of the corpus length.
    pub percent: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub coefficients: Vec<CoefficientEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corpus_length: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coverage: Vec<CoverageRow>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn has_not_available(&self) -> bool {
        self.coefficients.iter().any(|c| !c.is_available())
    }

    pub fn entry(&self, kind: &str, domain: Option<&str>) -> Option<&CoefficientEntry> {
        self.coefficients
            .iter()
            .find(|c| c.kind == kind && c.domain.as_deref() == domain)
    }
}

/// Which classic coefficients to compute.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassicSelection {
    pub percent: bool,
    pub holsti: bool,
    pub pi: bool,
    pub kappa: bool,
    pub fleiss: bool,
}

impl ClassicSelection {
    pub fn all() -> Self {
        Self {
            percent: true,
            holsti: true,
            pi: true,
            kappa: true,
            fleiss: true,
        }
    }

    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

pub fn classic_report(ratings: &NominalRatings, selection: ClassicSelection) -> Result<Report> {
    let mut report = Report::default();
    if selection.percent {
        report
            .coefficients
            .push(CoefficientEntry::from_classic("percent_agreement", percent_agreement(ratings)?, false));
    }
    if selection.holsti {
        report
            .coefficients
            .push(CoefficientEntry::from_classic("holsti", holsti_ratings(ratings)?, false));
    }
    if selection.pi {
        report
            .coefficients
            .push(CoefficientEntry::from_classic("scott_pi", scott_pi(ratings)?, true));
    }
    if selection.kappa {
        let mut entry = CoefficientEntry::from_classic("cohen_kappa", cohen_kappa(ratings)?, true);
        let table = contingency_matrix(ratings)?;
        entry.diagnostics.contingency = Some(table.counts);
        entry.diagnostics.categories = table.categories;
        report.coefficients.push(entry);
    }
    if selection.fleiss {
        let counts = CategoryItemCounts::from_ratings(ratings)?;
        report
            .coefficients
            .push(CoefficientEntry::from_classic("fleiss_kappa", fleiss_kappa(&counts)?, true));
    }
    Ok(report)
}

/// Universal alpha of flat single-label ratings.
pub fn alpha_report(ratings: &NominalRatings, metric: &LabelMetric) -> Result<Report> {
    let result = universal_alpha(&ratings.to_judgements(), metric)?;
    Ok(Report {
        coefficients: vec![CoefficientEntry::from_alpha("alpha", None, metric, result)],
        ..Report::default()
    })
}

/// Global variants first, then each selected domain in codebook order.
pub fn variant_specs(context: &VariantContext<'_>, global: bool, binary: bool, cu: bool, cu_global: bool) -> Vec<VariantSpec> {
    let mut specs = Vec::new();
    if global {
        specs.push(VariantSpec::GlobalBinary);
    }
    if cu_global {
        specs.push(VariantSpec::CuGlobal);
    }
    for domain in context.selected_domains() {
        if binary {
            specs.push(VariantSpec::DomainBinary(domain.id.clone()));
        }
        if cu {
            specs.push(VariantSpec::Cu(domain.id.clone()));
        }
    }
    specs
}

/// Computes `specs` on `context`.
///
/// The project metric, if any, applies to cu and Cu; binary variants always
/// use the discrete metric. When the project metric does not cover a
/// variant's labels, that variant falls back to discrete with a warning.
pub fn variants_report(context: &VariantContext<'_>, specs: &[VariantSpec]) -> Result<Report> {
    let project = context.project();
    let mut report = Report {
        corpus_length: Some(project.corpus_length()),
        coverage: coverage(context),
        ..Report::default()
    };
    if context.is_subset() {
        let selected: Vec<&str> = context.selected_domains().map(|d| d.id.as_str()).collect();
        report.warnings.push(format!(
            "{SUBSET_WARNING} ({} of {} domains: {})",
            selected.len(),
            project.codebook.domains.len(),
            selected.join(", ")
        ));
    }
    for spec in specs {
        let judgements = context.relabel(spec)?;
        let (metric, fallback) = match (&project.metric, spec.is_binary()) {
            (Some(m), false) if !matches!(m, MetricSpec::Discrete) => match m.resolve(judgements.labels()) {
                Ok(metric) => (metric, None),
                Err(e) => (LabelMetric::Discrete, Some(format!("project metric not applied ({e}); discrete used"))),
            },
            _ => (LabelMetric::Discrete, None),
        };
        let result = universal_alpha(&judgements, &metric)?;
        let mut entry = CoefficientEntry::from_alpha(spec.kind(), spec.domain(), &metric, result);
        if spec.is_global() && context.is_subset() {
            entry.warnings.push(SUBSET_WARNING.to_string());
        }
        entry.warnings.extend(fallback);
        report.coefficients.push(entry);
    }
    Ok(report)
}

/// Every variant on every domain, with coverage.
pub fn project_report(context: &VariantContext<'_>) -> Result<Report> {
    let specs = variant_specs(context, true, true, true, true);
    variants_report(context, &specs)
}

fn coverage(context: &VariantContext<'_>) -> Vec<CoverageRow> {
    let project = context.project();
    let segmentation = context.segmentation();
    let corpus = project.corpus_length();
    let percent = |units: u64| {
        if corpus == 0 {
            0.0
        } else {
            100.0 * units as f64 / corpus as f64
        }
    };
    let mut rows = Vec::new();
    for coder in project.coder_ids() {
        for domain in context.selected_domains() {
            let units = segmentation.coded_units(coder, |c| domain.code_ids().any(|d| d == c));
            rows.push(CoverageRow {
                coder: coder.to_string(),
                domain: domain.id.clone(),
                code: None,
                units,
                percent: percent(units),
            });
            for code in domain.code_ids() {
                let units = segmentation.coded_units(coder, |c| c == code);
                rows.push(CoverageRow {
                    coder: coder.to_string(),
                    domain: domain.id.clone(),
                    code: Some(code.to_string()),
                    units,
                    percent: percent(units),
                });
            }
        }
    }
    rows
}

pub fn render_report(report: &Report, format: Format, precision: usize) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Markdown => render_markdown(report, precision),
    }
}

fn number(v: f64, precision: usize) -> String {
    let s = format!("{v:.precision$}");
    // no "-0.000"
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn optional(v: Option<f64>, precision: usize) -> String {
    v.map_or_else(|| "-".to_string(), |v| number(v, precision))
}

fn write_matrix(out: &mut String, labels: &[String], m: &SquareMatrix, precision: usize) {
    let _ = writeln!(out, "| | {} |", labels.join(" | "));
    let _ = writeln!(out, "|---|{}", "---|".repeat(labels.len()));
    for (label, row) in labels.iter().zip(m.rows()) {
        let cells: Vec<String> = row.iter().map(|v| number(*v, precision)).collect();
        let _ = writeln!(out, "| {label} | {} |", cells.join(" | "));
    }
}

fn render_markdown(report: &Report, precision: usize) -> String {
    let mut out = String::from("# Agreement report\n\n");

    if !report.warnings.is_empty() {
        out.push_str("## Warnings\n\n");
        for w in &report.warnings {
            let _ = writeln!(out, "- {w}");
        }
        out.push('\n');
    }

    out.push_str("## Coefficients\n\n");
    if report.coefficients.is_empty() {
        out.push_str("No coefficients computed.\n");
    } else {
        out.push_str("| coefficient | domain | value | verdict | band | D_o | D_e |\n");
        out.push_str("|---|---|---|---|---|---|---|\n");
        for c in &report.coefficients {
            let value = match (c.value, c.na_reason) {
                (Some(v), _) => number(v, precision),
                (None, Some(r)) => format!("N/A ({r})"),
                (None, None) => "N/A".to_string(),
            };
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} |",
                c.kind,
                c.domain.as_deref().unwrap_or("-"),
                value,
                c.verdict.map_or_else(|| "-".to_string(), |v| v.to_string()),
                c.band.map_or_else(|| "-".to_string(), |b| b.to_string()),
                optional(c.d_o, precision),
                optional(c.d_e, precision),
            );
        }
    }

    for c in &report.coefficients {
        let d = &c.diagnostics;
        let title = match &c.domain {
            Some(domain) => format!("{} [{domain}]", c.kind),
            None => c.kind.clone(),
        };
        let _ = writeln!(out, "\n### {title}\n");
        if let Some(m) = &d.metric {
            let _ = writeln!(out, "- metric: {m}");
        }
        if let Some(n) = d.paired_items {
            let _ = writeln!(out, "- paired items: {n}");
        }
        if let Some(n) = d.items_used {
            let _ = writeln!(out, "- items used: {n}");
        }
        if !d.items_excluded.is_empty() {
            let _ = writeln!(out, "- items excluded: {}", d.items_excluded.join(", "));
        }
        let (p_o, p_e) = match &d.agreement_form {
            Some(f) => (Some(f.p_o), Some(f.p_e)),
            None => (d.p_o, d.p_e),
        };
        if let Some(v) = p_o {
            let _ = writeln!(out, "- P_o: {}", number(v, precision));
        }
        if let Some(v) = p_e {
            let _ = writeln!(out, "- P_e: {}", number(v, precision));
        }
        for w in &c.warnings {
            let _ = writeln!(out, "- warning: {w}");
        }
        if let Some(m) = &d.contingency {
            out.push_str("\nContingency (rows: first coder)\n\n");
            write_matrix(&mut out, &d.categories, m, 0);
        }
        if let Some(cm) = &d.coincidences {
            if !cm.labels.is_empty() {
                out.push_str("\nObserved coincidences\n\n");
                write_matrix(&mut out, &cm.labels, &cm.observed, precision);
                if let Some(e) = &cm.expected {
                    out.push_str("\nExpected coincidences\n\n");
                    write_matrix(&mut out, &cm.labels, e, precision);
                }
            }
        }
    }

    if !report.coverage.is_empty() {
        out.push_str("\n## Coverage\n\n");
        if let Some(len) = report.corpus_length {
            let _ = writeln!(out, "Corpus length: {len}\n");
        }
        out.push_str("| coder | domain | code | units | % of corpus |\n");
        out.push_str("|---|---|---|---|---|\n");
        for row in &report.coverage {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} |",
                row.coder,
                row.domain,
                row.code.as_deref().unwrap_or("*"),
                row.units,
                number(row.percent, 3)
            );
        }
    }
    out
}
