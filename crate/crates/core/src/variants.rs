//! The four re-labellings of a coding project and their alphas.
//!
//! Every variant works on the [`unitize`] segments of the project, weighted
//! by length:
//!
//! * global binary: `{1}` if the coder applied any selected code, else `{0}`;
//! * domain binary: `{1}` if the coder applied a code of the domain, else `{0}`;
//! * cu: the code of the domain the coder applied, or nothing;
//! * Cu: the set of selected domains the coder applied codes from.
//!
//! Binary variants label every coder on every segment, uncoded matter
//! included. cu and Cu leave non-applying coders without a judgement, so only
//! segments judged by two coders count.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alpha::{universal_alpha, AgreementResult};
use crate::error::{Error, Result};
use crate::judgements::LabelledJudgements;
use crate::metrics::LabelMetric;
use crate::model::{CodingProject, SemanticDomain};
use crate::unitize::{unitize, Segmentation};

pub const RELEVANT: &str = "1";
pub const IRRELEVANT: &str = "0";

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "domain", rename_all = "snake_case")]
pub enum VariantSpec {
    GlobalBinary,
    DomainBinary(String),
    Cu(String),
    #[serde(rename = "Cu")]
    CuGlobal,
}

impl VariantSpec {
    /// Name used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::GlobalBinary => "alpha_binary_global",
            Self::DomainBinary(_) => "alpha_binary",
            Self::Cu(_) => "cu_alpha",
            Self::CuGlobal => "Cu_alpha",
        }
    }

    pub fn domain(&self) -> Option<&str> {
        match self {
            Self::DomainBinary(d) | Self::Cu(d) => Some(d),
            Self::GlobalBinary | Self::CuGlobal => None,
        }
    }

    /// Whether the variant spans every selected domain.
    pub fn is_global(&self) -> bool {
        self.domain().is_none()
    }

    /// Whether the variant uses the fixed `{1, 0}` labels.
    pub fn is_binary(&self) -> bool {
        matches!(self, Self::GlobalBinary | Self::DomainBinary(_))
    }
}

impl fmt::Display for VariantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.domain() {
            Some(d) => write!(f, "{}[{d}]", self.kind()),
            None => f.write_str(self.kind()),
        }
    }
}

/// A unitized project with a selection of codebook domains.
///
/// Global variants only see codes of the selected domains.
#[derive(Debug, Clone)]
pub struct VariantContext<'a> {
    project: &'a CodingProject,
    segmentation: Segmentation,
    selected: Vec<usize>,
    code_domain: HashMap<&'a str, usize>,
}

impl<'a> VariantContext<'a> {
    /// Selects every domain of the codebook.
    pub fn new(project: &'a CodingProject) -> Self {
        let all = (0..project.codebook.domains.len()).collect();
        Self::build(project, all)
    }

    /// Selects the listed domains, in codebook order.
    pub fn with_domains<S: AsRef<str>>(project: &'a CodingProject, domains: &[S]) -> Result<Self> {
        let mut selected = BTreeSet::new();
        for d in domains {
            let d = d.as_ref();
            let index = project
                .codebook
                .domain_index(d)
                .ok_or_else(|| Error::UnknownDomain(d.to_string()))?;
            selected.insert(index);
        }
        Ok(Self::build(project, selected.into_iter().collect()))
    }

    fn build(project: &'a CodingProject, selected: Vec<usize>) -> Self {
        Self {
            project,
            segmentation: unitize(project),
            selected,
            code_domain: project.codebook.code_domains(),
        }
    }

    pub fn project(&self) -> &CodingProject {
        self.project
    }

    pub fn segmentation(&self) -> &Segmentation {
        &self.segmentation
    }

    pub fn selected_domains(&self) -> impl Iterator<Item = &SemanticDomain> {
        self.selected.iter().map(|&i| &self.project.codebook.domains[i])
    }

    /// True when some codebook domain is left out of the selection.
    pub fn is_subset(&self) -> bool {
        self.selected.len() < self.project.codebook.domains.len()
    }

    fn domain(&self, id: &str) -> Result<(usize, &'a SemanticDomain)> {
        let index = self
            .project
            .codebook
            .domain_index(id)
            .ok_or_else(|| Error::UnknownDomain(id.to_string()))?;
        Ok((index, &self.project.codebook.domains[index]))
    }

    fn domains_of<'s>(&'s self, codes: &'s BTreeSet<String>) -> impl Iterator<Item = usize> + 's {
        codes
            .iter()
            .filter_map(|c| self.code_domain.get(c.as_str()).copied())
    }

    pub fn relabel(&self, spec: &VariantSpec) -> Result<LabelledJudgements> {
        match spec {
            VariantSpec::GlobalBinary => {
                let selected: BTreeSet<usize> = self.selected.iter().copied().collect();
                Ok(self.binary(|codes| self.domains_of(codes).any(|d| selected.contains(&d))))
            }
            VariantSpec::DomainBinary(id) => {
                let (index, _) = self.domain(id)?;
                Ok(self.binary(|codes| self.domains_of(codes).any(|d| d == index)))
            }
            VariantSpec::Cu(id) => self.cu(id),
            VariantSpec::CuGlobal => self.cu_global(),
        }
    }

    pub fn compute(&self, spec: &VariantSpec, metric: &LabelMetric) -> Result<AgreementResult> {
        universal_alpha(&self.relabel(spec)?, metric)
    }

    fn binary(&self, relevant: impl Fn(&BTreeSet<String>) -> bool) -> LabelledJudgements {
        let mut out = LabelledJudgements::new([RELEVANT, IRRELEVANT]);
        let none = BTreeSet::new();
        for segment in &self.segmentation.segments {
            let judgements = self.segmentation.coders.iter().map(|coder| {
                let codes = segment.codes_of(coder).unwrap_or(&none);
                let label = if relevant(codes) { 0 } else { 1 };
                (coder.clone(), [label])
            });
            out.push_item(segment.item_id(), segment.weight() as f64, judgements)
                .expect("segments have positive length");
        }
        out
    }

    fn cu(&self, id: &str) -> Result<LabelledJudgements> {
        let (_, domain) = self.domain(id)?;
        let labels: Vec<&str> = domain.code_ids().collect();
        let mut out = LabelledJudgements::new(labels.iter().copied());
        let index: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        for segment in &self.segmentation.segments {
            let judgements = segment.codes.iter().map(|(coder, codes)| {
                let chosen: Vec<usize> = codes
                    .iter()
                    .filter_map(|c| index.get(c.as_str()).copied())
                    .collect();
                (coder.clone(), chosen)
            });
            out.push_item(segment.item_id(), segment.weight() as f64, judgements)?;
        }
        Ok(out)
    }

    fn cu_global(&self) -> Result<LabelledJudgements> {
        let labels: Vec<&str> = self.selected_domains().map(|d| d.id.as_str()).collect();
        let mut out = LabelledJudgements::new(labels.iter().copied());
        let position: HashMap<usize, usize> = self
            .selected
            .iter()
            .enumerate()
            .map(|(label, &domain)| (domain, label))
            .collect();
        for segment in &self.segmentation.segments {
            let judgements = segment.codes.iter().map(|(coder, codes)| {
                let chosen: Vec<usize> = self
                    .domains_of(codes)
                    .filter_map(|d| position.get(&d).copied())
                    .collect();
                (coder.clone(), chosen)
            });
            out.push_item(segment.item_id(), segment.weight() as f64, judgements)?;
        }
        Ok(out)
    }
}

pub fn relabel_global_binary(project: &CodingProject) -> LabelledJudgements {
    VariantContext::new(project)
        .relabel(&VariantSpec::GlobalBinary)
        .expect("global binary relabelling cannot fail")
}

pub fn relabel_domain_binary(project: &CodingProject, domain: &str) -> Result<LabelledJudgements> {
    VariantContext::new(project).relabel(&VariantSpec::DomainBinary(domain.to_string()))
}

pub fn relabel_cu(project: &CodingProject, domain: &str) -> Result<LabelledJudgements> {
    VariantContext::new(project).relabel(&VariantSpec::Cu(domain.to_string()))
}

pub fn relabel_cu_global(project: &CodingProject) -> Result<LabelledJudgements> {
    VariantContext::new(project).relabel(&VariantSpec::CuGlobal)
}

/// Relabels the whole project per `spec` and computes its alpha.
pub fn compute_variant(project: &CodingProject, spec: &VariantSpec, metric: &LabelMetric) -> Result<AgreementResult> {
    VariantContext::new(project).compute(spec, metric)
}
