//! Fixtures, generators and independent oracles shared by the integration
//! test targets.
//!
//! Oracles here never call into the coincidence code of the library: they
//! enumerate ordered judgement pairs directly and, where possible, work in
//! exact rational arithmetic.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use ica_core::alpha::{coincidences, observed_coincidences, universal_alpha, Coefficient};
use ica_core::classic::{
    cohen_kappa, contingency_matrix, fleiss_kappa, scott_pi, CategoryItemCounts, NominalRatings,
};
use ica_core::model::{CodeApplication, Codebook, Coder, CodingProject, Document, Quotation, SemanticDomain};
use ica_core::report::{alpha_report, classic_report, project_report, ClassicSelection, Report};
use ica_core::unitize::unitize;
use ica_core::variants::{VariantContext, VariantSpec};
use ica_core::{parse_project, parse_reliability_csv, render_report, Format, LabelMetric, LabelledJudgements};
use num_rational::Ratio;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub type Q = Ratio<i128>;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn slr15() -> NominalRatings {
    let bytes = std::fs::read(data_path("slr15.csv")).expect("slr15 fixture");
    parse_reliability_csv(&bytes).expect("slr15 parses")
}

pub fn p07() -> CodingProject {
    let bytes = std::fs::read(data_path("p07.json")).expect("p07 fixture");
    parse_project(&bytes).expect("p07 parses")
}

/// Removes a quotation and every application made to it.
pub fn without_quotation(project: &CodingProject, id: &str) -> CodingProject {
    let mut p = project.clone();
    p.quotations.retain(|q| q.id != id);
    p.applications.retain(|a| a.quotation_id != id);
    p
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

// ---------------------------------------------------------------------------
// Raw multi-label instances

/// `sets[coder]` are label indices; an empty set is no judgement.
#[derive(Debug, Clone)]
pub struct RawItem {
    pub weight: u32,
    pub sets: Vec<BTreeSet<usize>>,
}

#[derive(Debug, Clone)]
pub struct RawInstance {
    pub labels: usize,
    pub coders: usize,
    pub items: Vec<RawItem>,
}

impl RawInstance {
    pub fn label_names(&self) -> Vec<String> {
        (0..self.labels).map(|l| format!("L{l}")).collect()
    }

    pub fn paired_items(&self) -> usize {
        self.items
            .iter()
            .filter(|i| i.sets.iter().filter(|s| !s.is_empty()).count() >= 2)
            .count()
    }

    pub fn judgements(&self) -> LabelledJudgements {
        self.judgements_with(|c| format!("c{c}"), |n| format!("i{n}"))
    }

    pub fn judgements_with(
        &self,
        coder: impl Fn(usize) -> String,
        item: impl Fn(usize) -> String,
    ) -> LabelledJudgements {
        let mut j = LabelledJudgements::new(self.label_names());
        for (n, it) in self.items.iter().enumerate() {
            let sets = it
                .sets
                .iter()
                .enumerate()
                .map(|(c, s)| (coder(c), s.iter().copied().collect::<Vec<_>>()));
            j.push_item(item(n), it.weight as f64, sets).unwrap();
        }
        j
    }

    /// Same data with every weight-`w` item replaced by `w` unit items.
    pub fn replicated(&self) -> Self {
        let items = self
            .items
            .iter()
            .flat_map(|it| {
                std::iter::repeat_n(
                    RawItem {
                        weight: 1,
                        sets: it.sets.clone(),
                    },
                    it.weight as usize,
                )
            })
            .collect();
        Self { items, ..self.clone() }
    }
}

fn raw_item(labels: usize, coders: usize) -> impl Strategy<Value = RawItem> {
    let mask = prop_oneof![1 => Just(0u32), 5 => 1u32..(1u32 << labels)];
    (1u32..=4, prop::collection::vec(mask, coders)).prop_map(move |(weight, masks)| RawItem {
        weight,
        sets: masks
            .into_iter()
            .map(|m| (0..labels).filter(|l| m & (1 << l) != 0).collect())
            .collect(),
    })
}

/// Multi-label instances with up to `max_coders` coders, `max_items` items
/// and `max_labels` labels.
pub fn raw_instance(max_coders: usize, max_items: usize, max_labels: usize) -> impl Strategy<Value = RawInstance> {
    (1..=max_labels, 2..=max_coders).prop_flat_map(move |(labels, coders)| {
        prop::collection::vec(raw_item(labels, coders), 1..=max_items).prop_map(move |items| RawInstance {
            labels,
            coders,
            items,
        })
    })
}

/// Ordered-pair enumeration: every ordered pair of distinct coders with
/// non-empty sets, every label of the first against every label of the second.
pub fn brute_observed(inst: &RawInstance) -> Vec<Vec<i128>> {
    let k = inst.labels;
    let mut o = vec![vec![0i128; k]; k];
    for item in &inst.items {
        let judged: Vec<&BTreeSet<usize>> = item.sets.iter().filter(|s| !s.is_empty()).collect();
        if judged.len() < 2 {
            continue;
        }
        for (a, first) in judged.iter().enumerate() {
            for (b, second) in judged.iter().enumerate() {
                if a == b {
                    continue;
                }
                for &i in *first {
                    for &j in *second {
                        o[i][j] += item.weight as i128;
                    }
                }
            }
        }
    }
    o
}

/// Exact discrete-metric alpha from the enumerated pairs, `None` when not
/// available.
pub fn brute_alpha_discrete(inst: &RawInstance) -> Option<Q> {
    let o = brute_observed(inst);
    let k = inst.labels;
    let t_i: Vec<i128> = o.iter().map(|r| r.iter().sum()).collect();
    let t: i128 = t_i.iter().sum();
    if inst.paired_items() < 2 || t < 2 {
        return None;
    }
    let mut d_o = Q::from_integer(0);
    let mut d_e = Q::from_integer(0);
    for i in 0..k {
        for j in 0..k {
            if i != j {
                d_o += Q::from_integer(o[i][j]);
                d_e += Q::new(t_i[i] * t_i[j], t - 1);
            }
        }
    }
    if d_e == Q::from_integer(0) {
        return None;
    }
    Some(Q::from_integer(1) - d_o / d_e)
}

/// Floating alpha under an arbitrary metric from the enumerated pairs.
pub fn brute_alpha(inst: &RawInstance, metric: &LabelMetric) -> Option<f64> {
    let o = brute_observed(inst);
    let k = inst.labels;
    let t_i: Vec<f64> = o.iter().map(|r| r.iter().sum::<i128>() as f64).collect();
    let t: f64 = t_i.iter().sum();
    if inst.paired_items() < 2 || t < 2.0 {
        return None;
    }
    let (mut d_o, mut d_e) = (0.0, 0.0);
    for i in 0..k {
        for j in 0..k {
            let d = metric.distance(i, j);
            d_o += o[i][j] as f64 * d;
            let e = if i == j {
                t_i[i] * (t_i[i] - 1.0) / (t - 1.0)
            } else {
                t_i[i] * t_i[j] / (t - 1.0)
            };
            d_e += e * d;
        }
    }
    (d_e > 0.0).then(|| 1.0 - d_o / d_e)
}

/// Interval metric with integer coordinates, one per label.
pub fn interval_metric(inst: &RawInstance) -> impl Strategy<Value = LabelMetric> {
    let k = inst.labels;
    prop::collection::vec(-5i32..=5, k).prop_map(|v| LabelMetric::Interval {
        values: v.into_iter().map(|x| vec![x as f64]).collect(),
    })
}

// ---------------------------------------------------------------------------
// Two-coder single-label ratings

pub fn ratings_from_pairs(k: usize, pairs: &[(usize, usize)]) -> NominalRatings {
    NominalRatings::new(
        (0..k).map(|c| format!("k{c}")).collect(),
        vec!["A".into(), "B".into()],
        (0..pairs.len()).map(|i| format!("i{i}")).collect(),
        vec![
            pairs.iter().map(|p| Some(p.0)).collect(),
            pairs.iter().map(|p| Some(p.1)).collect(),
        ],
    )
    .unwrap()
}

pub fn two_coder_pairs(max_labels: usize, max_items: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2..=max_labels).prop_flat_map(move |k| {
        (Just(k), prop::collection::vec((0..k, 0..k), 1..=max_items))
    })
}

// ---------------------------------------------------------------------------
// Random projects

#[derive(Debug, Clone)]
pub struct ProjectShape {
    pub lengths: Vec<u64>,
    /// Per coder, per document: (gap, length, code index) triples laid out
    /// left to right.
    pub coding: Vec<Vec<Vec<(u64, u64, usize)>>>,
    /// Second code (other domain) on some quotations.
    pub extra: Vec<Vec<Vec<Option<usize>>>>,
}

pub const CODEBOOK: [(&str, &[&str]); 3] = [("S1", &["a", "b"]), ("S2", &["c", "d"]), ("S3", &["e"])];

pub fn codebook() -> Codebook {
    Codebook::new(
        CODEBOOK
            .iter()
            .map(|(d, codes)| SemanticDomain::new(*d, codes.iter().copied()))
            .collect(),
    )
}

fn all_codes() -> Vec<&'static str> {
    CODEBOOK.iter().flat_map(|(_, c)| c.iter().copied()).collect()
}

pub fn project_shape(max_coders: usize) -> impl Strategy<Value = ProjectShape> {
    let codes = all_codes().len();
    (prop::collection::vec(1u64..80, 1..=2), 2..=max_coders).prop_flat_map(move |(lengths, coders)| {
        let docs = lengths.len();
        let quotes = prop::collection::vec((0u64..15, 1u64..20, 0..codes), 0..=3);
        let per_coder = prop::collection::vec(quotes, docs);
        let extra = prop::collection::vec(
            prop::collection::vec(prop::collection::vec(prop::option::weighted(0.3, 0..codes), 3), docs),
            coders,
        );
        (Just(lengths), prop::collection::vec(per_coder, coders), extra).prop_map(|(lengths, coding, extra)| {
            ProjectShape {
                lengths,
                coding,
                extra,
            }
        })
    })
}

/// Builds a valid project. Quotations are owned by their coder. With
/// `single_code` each quotation carries exactly one code.
pub fn build_project(shape: &ProjectShape, single_code: bool) -> CodingProject {
    let codes = all_codes();
    let book = codebook();
    let domain_of = book.code_domains();
    let mut project = CodingProject {
        codebook: book.clone(),
        documents: shape
            .lengths
            .iter()
            .enumerate()
            .map(|(d, &l)| Document::new(format!("D{d}"), l))
            .collect(),
        coders: (0..shape.coding.len()).map(|c| Coder::new(format!("J{c}"))).collect(),
        ..Default::default()
    };
    for (c, per_doc) in shape.coding.iter().enumerate() {
        let coder = format!("J{c}");
        for (d, quotes) in per_doc.iter().enumerate() {
            let len = shape.lengths[d];
            let mut pos = 0;
            for (n, &(gap, qlen, code)) in quotes.iter().enumerate() {
                let start = pos + gap;
                let end = (start + qlen).min(len);
                if start >= end {
                    break;
                }
                pos = end;
                let id = format!("{coder}-D{d}-{n}");
                project
                    .quotations
                    .push(Quotation::new(id.clone(), format!("D{d}"), start, end).owned_by(coder.clone()));
                project
                    .applications
                    .push(CodeApplication::new(coder.clone(), id.clone(), codes[code]));
                if !single_code {
                    if let Some(extra) = shape.extra[c][d].get(n).copied().flatten() {
                        if domain_of[codes[extra]] != domain_of[codes[code]] {
                            project
                                .applications
                                .push(CodeApplication::new(coder.clone(), id, codes[extra]));
                        }
                    }
                }
            }
        }
    }
    project
}

/// The same coding seen through a single synthetic domain whose codes are
/// the original domain ids.
pub fn domains_as_codes(project: &CodingProject) -> CodingProject {
    let domain_of = project.codebook.code_domains();
    let ids: Vec<String> = project.codebook.domains.iter().map(|d| d.id.clone()).collect();
    let mut p = project.clone();
    p.codebook = Codebook::new(vec![SemanticDomain::new("ALL", ids.iter().cloned())]);
    for a in &mut p.applications {
        a.code_id = ids[domain_of[a.code_id.as_str()]].clone();
    }
    p
}

// ---------------------------------------------------------------------------
// Property bodies, shared by the proptest target and the acceptance runner

type Outcome = Result<(), TestCaseError>;

pub fn prop_coincidence_symmetry_and_marginals(inst: &RawInstance) -> Outcome {
    let m = coincidences(&inst.judgements());
    prop_assert!(m.observed.is_symmetric());
    let rows = m.observed.row_sums();
    prop_assert_eq!(&rows, &m.marginals);
    prop_assert_eq!(rows.iter().sum::<f64>(), m.total);
    if let Some(e) = &m.expected {
        prop_assert!(e.is_symmetric());
        for (got, want) in e.row_sums().iter().zip(&m.marginals) {
            prop_assert!(close(*got, *want, 1e-12), "expected row {} vs t_i {}", got, want);
        }
    }
    Ok(())
}

pub fn prop_permutation_invariance(inst: &RawInstance, coder_shift: usize, reverse_items: bool) -> Outcome {
    let base = universal_alpha(&inst.judgements(), &LabelMetric::Discrete).unwrap();
    let n = inst.coders;
    let mut permuted = inst.clone();
    if reverse_items {
        permuted.items.reverse();
    }
    let renamed = permuted.judgements_with(|c| format!("z{}", (c + coder_shift) % n), |i| format!("x{i}"));
    let other = universal_alpha(&renamed, &LabelMetric::Discrete).unwrap();
    match (base.value, other.value) {
        (Coefficient::Value(a), Coefficient::Value(b)) => prop_assert!(close(a, b, 1e-12), "{} vs {}", a, b),
        (a, b) => prop_assert_eq!(a, b),
    }
    Ok(())
}

pub fn prop_batch_additivity(a: &RawInstance, b: &RawInstance) -> Outcome {
    let b = RawInstance {
        labels: a.labels,
        coders: a.coders,
        items: b
            .items
            .iter()
            .map(|it| RawItem {
                weight: it.weight,
                sets: (0..a.coders)
                    .map(|c| {
                        it.sets
                            .get(c)
                            .map(|s| s.iter().copied().filter(|&l| l < a.labels).collect())
                            .unwrap_or_default()
                    })
                    .collect(),
            })
            .collect(),
    };
    let ja = a.judgements();
    let jb = b.judgements_with(|c| format!("c{c}"), |n| format!("b{n}"));
    let joint = observed_coincidences(&ja.concat(&jb).unwrap());
    let sum = observed_coincidences(&ja).add(&observed_coincidences(&jb));
    prop_assert_eq!(joint, sum);
    Ok(())
}

pub fn prop_replication_equivalence(inst: &RawInstance) -> Outcome {
    prop_assume!(inst.paired_items() >= 2);
    let weighted = universal_alpha(&inst.judgements(), &LabelMetric::Discrete).unwrap();
    let copies = universal_alpha(&inst.replicated().judgements(), &LabelMetric::Discrete).unwrap();
    prop_assert_eq!(weighted.coincidences.observed, copies.coincidences.observed);
    prop_assert_eq!(weighted.value, copies.value);
    Ok(())
}

pub fn prop_brute_force_oracle(inst: &RawInstance, metric: &LabelMetric) -> Outcome {
    let j = inst.judgements();
    let o = observed_coincidences(&j);
    let brute = brute_observed(inst);
    for i in 0..inst.labels {
        for k in 0..inst.labels {
            prop_assert_eq!(o[(i, k)], brute[i][k] as f64);
        }
    }
    let discrete = universal_alpha(&j, &LabelMetric::Discrete).unwrap().value;
    match (discrete, brute_alpha_discrete(inst)) {
        (Coefficient::Value(v), Some(q)) => {
            let exact = *q.numer() as f64 / *q.denom() as f64;
            prop_assert!(close(v, exact, 1e-12), "{} vs {}", v, exact);
        }
        (Coefficient::NotAvailable(_), None) => {}
        (got, want) => prop_assert!(false, "engine {:?}, oracle {:?}", got, want),
    }
    let general = universal_alpha(&j, metric).unwrap().value;
    match (general, brute_alpha(inst, metric)) {
        (Coefficient::Value(v), Some(w)) => prop_assert!(close(v, w, 1e-9), "{} vs {}", v, w),
        (Coefficient::NotAvailable(_), None) => {}
        (got, want) => prop_assert!(false, "engine {:?}, oracle {:?}", got, want),
    }
    Ok(())
}

pub fn prop_fleiss_equals_scott(k: usize, pairs: &[(usize, usize)]) -> Outcome {
    let r = ratings_from_pairs(k, pairs);
    let pi = scott_pi(&r).unwrap();
    let fleiss = fleiss_kappa(&CategoryItemCounts::from_ratings(&r).unwrap()).unwrap();
    match (pi.value, fleiss.value) {
        (Coefficient::Value(a), Coefficient::Value(b)) => prop_assert!(close(a, b, 1e-12), "{} vs {}", a, b),
        (a, b) => prop_assert_eq!(a, b),
    }
    Ok(())
}

pub fn prop_coincidence_from_contingency(k: usize, pairs: &[(usize, usize)]) -> Outcome {
    let r = ratings_from_pairs(k, pairs);
    let c = contingency_matrix(&r).unwrap().counts;
    let o = observed_coincidences(&r.to_judgements());
    let mut brute = vec![vec![0.0; k]; k];
    for &(a, b) in pairs {
        brute[a][b] += 1.0;
    }
    for i in 0..k {
        for j in 0..k {
            prop_assert_eq!(c[(i, j)], brute[i][j]);
            prop_assert_eq!(o[(i, j)], c[(i, j)] + c[(j, i)]);
        }
    }
    Ok(())
}

pub fn prop_kappa_one_iff_perfect(k: usize, pairs: &[(usize, usize)]) -> Outcome {
    let r = ratings_from_pairs(k, pairs);
    let perfect = pairs.iter().all(|(a, b)| a == b);
    if let Coefficient::Value(kappa) = cohen_kappa(&r).unwrap().value {
        prop_assert_eq!(kappa == 1.0, perfect);
    }
    Ok(())
}

pub fn prop_alpha_one_iff_no_disagreement(inst: &RawInstance) -> Outcome {
    let r = universal_alpha(&inst.judgements(), &LabelMetric::Discrete).unwrap();
    if let Coefficient::Value(a) = r.value {
        prop_assert_eq!(a == 1.0, r.observed_disagreement == 0.0);
    }
    Ok(())
}

pub fn prop_alpha_at_most_one(inst: &RawInstance, metric: &LabelMetric) -> Outcome {
    for m in [&LabelMetric::Discrete, metric] {
        if let Coefficient::Value(a) = universal_alpha(&inst.judgements(), m).unwrap().value {
            prop_assert!(a <= 1.0, "alpha {}", a);
        }
    }
    Ok(())
}

/// Scaling weights by `c` scales `o` and `D_o` by `c` exactly; alpha follows
/// `1 − D_o·(c·t − 1)/(c·S)` with `S = Σ t_i·t_j·δ(i,j)` of the unscaled data.
pub fn prop_weight_scaling(inst: &RawInstance, metric: &LabelMetric, c: u32) -> Outcome {
    let base = universal_alpha(&inst.judgements(), metric).unwrap();
    let mut scaled = inst.clone();
    for it in &mut scaled.items {
        it.weight *= c;
    }
    let r = universal_alpha(&scaled.judgements(), metric).unwrap();
    let cf = c as f64;
    let k = inst.labels;
    for i in 0..k {
        for j in 0..k {
            prop_assert_eq!(r.coincidences.observed[(i, j)], cf * base.coincidences.observed[(i, j)]);
        }
    }
    prop_assert_eq!(r.observed_disagreement, cf * base.observed_disagreement);
    if let Coefficient::Value(a) = r.value {
        let t_i = &base.coincidences.marginals;
        let t = base.coincidences.total;
        let mut s = 0.0;
        for i in 0..k {
            for j in 0..k {
                s += t_i[i] * t_i[j] * metric.distance(i, j);
            }
        }
        let predicted = 1.0 - base.observed_disagreement * (cf * t - 1.0) / (cf * s);
        prop_assert!(close(a, predicted, 1e-9), "{} vs {}", a, predicted);
    }
    Ok(())
}

pub fn prop_unitize_partition(shape: &ProjectShape) -> Outcome {
    let p = build_project(shape, false);
    prop_assert!(ica_core::validate_project(&p).is_valid(), "{}", ica_core::validate_project(&p));
    let seg = unitize(&p);
    prop_assert_eq!(seg.total_weight(), p.corpus_length());
    for doc in &p.documents {
        prop_assert_eq!(seg.document_weight(&doc.id), doc.length);
    }
    for pair in seg.segments.windows(2) {
        if pair[0].document_id == pair[1].document_id {
            prop_assert_eq!(pair[0].span.end, pair[1].span.start);
            prop_assert!(pair[0].codes != pair[1].codes, "unmerged neighbours");
        }
    }
    let again = unitize(&seg.to_project(&p));
    prop_assert_eq!(again, seg);
    Ok(())
}

pub fn prop_relabelling_preserves_weights(shape: &ProjectShape) -> Outcome {
    let p = build_project(shape, false);
    let ctx = VariantContext::new(&p);
    let total = p.corpus_length() as f64;
    let mut specs = vec![VariantSpec::GlobalBinary, VariantSpec::CuGlobal];
    for (d, _) in CODEBOOK {
        specs.push(VariantSpec::DomainBinary(d.into()));
        specs.push(VariantSpec::Cu(d.into()));
    }
    for spec in &specs {
        let j = ctx.relabel(spec).unwrap();
        prop_assert_eq!(j.total_weight(), total, "{}", spec);
    }
    Ok(())
}

pub fn prop_cu_global_equals_synthetic_cu(shape: &ProjectShape) -> Outcome {
    let p = build_project(shape, true);
    let cu_global = VariantContext::new(&p)
        .compute(&VariantSpec::CuGlobal, &LabelMetric::Discrete)
        .unwrap();
    let synthetic = domains_as_codes(&p);
    let cu = VariantContext::new(&synthetic)
        .compute(&VariantSpec::Cu("ALL".into()), &LabelMetric::Discrete)
        .unwrap();
    prop_assert_eq!(&cu_global.coincidences.observed, &cu.coincidences.observed);
    // Codes of one domain collapse to a single label, so adjacent segments may
    // merge; only the paired-item count can then differ.
    let spans = |p: &CodingProject| -> Vec<_> {
        ica_core::unitize(p).segments.into_iter().map(|s| (s.document_id, s.span)).collect()
    };
    if spans(&p) == spans(&synthetic) {
        prop_assert_eq!(cu_global.value, cu.value);
    } else if let (Some(a), Some(b)) = (cu_global.value.value(), cu.value.value()) {
        prop_assert_eq!(a, b);
    }
    Ok(())
}

pub fn prop_report_round_trip(k: usize, pairs: &[(usize, usize)], shape: &ProjectShape) -> Outcome {
    let p = build_project(shape, false);
    let reports: Vec<Report> = vec![
        alpha_report(&ratings_from_pairs(k, pairs), &LabelMetric::Discrete).unwrap(),
        classic_report(&ratings_from_pairs(k, pairs), ClassicSelection::all()).unwrap(),
        project_report(&VariantContext::new(&p)).unwrap(),
    ];
    for report in reports {
        let json = render_report(&report, Format::Json, 3);
        let back: Report = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &report);
        prop_assert_eq!(render_report(&back, Format::Json, 3), json);
        prop_assert_eq!(
            render_report(&back, Format::Markdown, 3),
            render_report(&report, Format::Markdown, 3)
        );
    }
    Ok(())
}

/// Two coders on shared quotations; one quotation gets `S1` codes from the
/// first coder only. Removing it leaves cu-α(S1) unchanged and cannot lower
/// α_binary(S1).
pub fn prop_single_voted_removal(quotes: &[(u64, u64, usize, usize)], lonely: (u64, u64, usize)) -> Outcome {
    let book = codebook();
    let s1: Vec<&str> = vec!["a", "b"];
    let mut p = CodingProject {
        codebook: book,
        coders: vec![Coder::new("J0"), Coder::new("J1")],
        ..Default::default()
    };
    let mut pos = 0;
    for (n, &(gap, len, x, y)) in quotes.iter().enumerate() {
        let start = pos + gap;
        let end = start + len;
        pos = end;
        let id = format!("q{n}");
        p.quotations.push(Quotation::new(id.clone(), "D", start, end));
        p.applications.push(CodeApplication::new("J0", id.clone(), s1[x]));
        p.applications.push(CodeApplication::new("J1", id, s1[y]));
    }
    let start = pos + lonely.0;
    let end = start + lonely.1;
    p.quotations.push(Quotation::new("lonely", "D", start, end));
    p.applications.push(CodeApplication::new("J0", "lonely", s1[lonely.2]));
    p.applications.push(CodeApplication::new("J1", "lonely", "e"));
    p.documents = vec![Document::new("D", end + 5)];
    prop_assert!(ica_core::validate_project(&p).is_valid());

    let without = without_quotation(&p, "lonely");
    let cu = |p: &CodingProject| {
        VariantContext::new(p)
            .compute(&VariantSpec::Cu("S1".into()), &LabelMetric::Discrete)
            .unwrap()
    };
    let (before, after) = (cu(&p), cu(&without));
    prop_assert_eq!(before.value, after.value);
    prop_assert_eq!(before.coincidences.observed, after.coincidences.observed);

    let binary = |p: &CodingProject| {
        VariantContext::new(p)
            .compute(&VariantSpec::DomainBinary("S1".into()), &LabelMetric::Discrete)
            .unwrap()
            .value
    };
    if let (Coefficient::Value(with), Coefficient::Value(without)) = (binary(&p), binary(&without)) {
        prop_assert!(with <= without + 1e-12, "with {} > without {}", with, without);
    }
    Ok(())
}

/// Shared quotations `(gap, length, J0 code, J1 code)` and the lonely one.
pub type SingleVoted = (Vec<(u64, u64, usize, usize)>, (u64, u64, usize));

pub fn single_voted_inputs() -> impl Strategy<Value = SingleVoted> {
    (
        prop::collection::vec((0u64..10, 1u64..30, 0usize..2, 0usize..2), 1..6),
        (0u64..10, 1u64..30, 0usize..2),
    )
}

/// Reference values for the coverage table check.
pub fn coded_units(project: &CodingProject, coder: &str, codes: &[&str]) -> u64 {
    let spans: BTreeMap<&str, (u64, u64)> = project
        .quotations
        .iter()
        .map(|q| (q.id.as_str(), (q.span.start, q.span.end)))
        .collect();
    let mut seen = BTreeSet::new();
    project
        .applications
        .iter()
        .filter(|a| a.coder_id == coder && codes.contains(&a.code_id.as_str()))
        .filter(|a| seen.insert(a.quotation_id.clone()))
        .map(|a| {
            let (s, e) = spans[a.quotation_id.as_str()];
            e - s
        })
        .sum()
}
