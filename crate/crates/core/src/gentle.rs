//! Gentle vertices, the type of an algebra, the basis change `d` and the
//! gentleness test for complexified presentations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::complexify::{self, ComplexPresentation, ComplexQuiver, Deg1, Deg2};
use crate::linalg::{unit, Subspace};
use crate::modquiver::{Degree2Ideal, ModulatedQuiver, VertexLocalData};
use crate::rings::RingLabel;
use crate::scalar::{ratio, Gaussian, Rational};
use crate::tables::{self, Row, RowMatch};

/// Outcome of one named clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl Clause {
    fn new(name: &str, holds: bool, detail: impl Into<String>) -> Self {
        Clause { name: name.into(), holds, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    OrdinaryR,
    OrdinaryH,
    OrdinaryC,
    SpecialCase { row: Row, p: u8 },
    SpecialDegenerate { tag: String },
    NotGentle { reasons: Vec<String> },
}

impl Verdict {
    pub fn is_special(&self) -> bool {
        matches!(self, Verdict::SpecialCase { .. } | Verdict::SpecialDegenerate { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::OrdinaryR => write!(f, "ordinarily gentle with R"),
            Verdict::OrdinaryH => write!(f, "ordinarily gentle with H"),
            Verdict::OrdinaryC => write!(f, "ordinarily gentle with C"),
            Verdict::SpecialCase { row, p } => write!(f, "specially gentle, row {row}, I_v = I_v^{p}"),
            Verdict::SpecialDegenerate { tag } => write!(f, "specially gentle, shape {tag}"),
            Verdict::NotGentle { reasons } => write!(f, "not gentle: {}", reasons.join("; ")),
        }
    }
}

/// Classification of one vertex. `verdicts` holds every gentle kind that
/// applies, special first; it is a single `NotGentle` otherwise.
#[derive(Clone, Debug)]
pub struct VertexVerdict {
    pub vertex: usize,
    pub verdicts: Vec<Verdict>,
    pub evidence: Vec<Clause>,
    pub row: Option<RowMatch>,
}

impl VertexVerdict {
    pub fn is_gentle(&self) -> bool {
        !matches!(self.verdicts.first(), Some(Verdict::NotGentle { .. }))
    }
    pub fn has(&self, pred: impl Fn(&Verdict) -> bool) -> bool {
        self.verdicts.iter().any(pred)
    }
    /// The special verdict if present, else the first one.
    pub fn primary(&self) -> &Verdict {
        &self.verdicts[0]
    }
    pub fn special_row(&self) -> Option<&RowMatch> {
        self.has(|v| matches!(v, Verdict::SpecialCase { .. })).then_some(self.row.as_ref()).flatten()
    }
}

fn xor_clause(q: &ModulatedQuiver, ideal: &Degree2Ideal, local: &VertexLocalData) -> Clause {
    let mut fails = Vec::new();
    let test = |pair: (usize, usize)| ideal.includes_pair(q, pair);
    for &a in &local.out_arrows {
        for (k, &b) in local.in_arrows.iter().enumerate() {
            for &c in &local.in_arrows[k + 1..] {
                if test((a, b)) == test((a, c)) {
                    fails.push(format!("{} and {}", q.pair_name((a, b)), q.pair_name((a, c))));
                }
            }
        }
    }
    for &a in &local.in_arrows {
        for (k, &b) in local.out_arrows.iter().enumerate() {
            for &c in &local.out_arrows[k + 1..] {
                if test((b, a)) == test((c, a)) {
                    fails.push(format!("{} and {}", q.pair_name((b, a)), q.pair_name((c, a))));
                }
            }
        }
    }
    let detail = if fails.is_empty() { "xor holds".to_string() } else { format!("xor fails for {}", fails.join(", ")) };
    Clause::new("G2", fails.is_empty(), detail)
}

fn degree_clause(local: &VertexLocalData) -> Clause {
    let (o, i) = (local.out_arrows.len(), local.in_arrows.len());
    Clause::new("G1", o <= 2 && i <= 2, format!("{o} outgoing, {i} incoming"))
}

/// Classifies `v` from its local data.
pub fn classify_vertex(q: &ModulatedQuiver, ideal: &Degree2Ideal, v: usize) -> VertexVerdict {
    let local = ideal.local(q, v);
    let label = q.label(v);
    let mut evidence = Vec::new();
    let mut ordinary = None;

    let g1 = degree_clause(&local);
    let g2 = xor_clause(q, ideal, &local);
    let labels_ok = match label {
        RingLabel::C => true,
        l => local.neighbours.iter().all(|&u| q.label(u) == l),
    };
    evidence.push(Clause::new(
        "labels",
        labels_ok,
        if label == RingLabel::C { "vertex ring is C".to_string() } else { format!("all neighbours carry {label}: {labels_ok}") },
    ));
    // I_v must be the sum of the whole M(alpha beta) it contains.
    let full: usize = local.ambient.pairs().iter().filter(|&&p| ideal.includes_pair(q, p)).map(|&(a, b)| q.pair_space(a, b).dim()).sum();
    let monomial = Clause::new("monomial", local.ideal.dim() == full, format!("I_v has dimension {}, its whole pairs {full}", local.ideal.dim()));
    let mut ok = labels_ok && g1.holds && g2.holds && monomial.holds;
    evidence.push(g1);
    evidence.push(g2);
    evidence.push(monomial);
    if label == RingLabel::C {
        let mut bad = Vec::new();
        for &a in &local.out_arrows {
            for &b in &local.in_arrows {
                let (t, s) = (q.arrows[a].target, q.arrows[b].source);
                if q.label(t) == RingLabel::C || q.label(s) == RingLabel::C {
                    continue;
                }
                let cap = ideal.pair_intersection(q, (a, b));
                if !(cap.is_zero() || cap.is_full()) {
                    bad.push(q.pair_name((a, b)));
                }
            }
        }
        let detail = if bad.is_empty() {
            "every constrained pair meets the ideal fully or trivially".to_string()
        } else {
            format!("partial intersection on {}", bad.join(", "))
        };
        ok &= bad.is_empty();
        evidence.push(Clause::new("G3", bad.is_empty(), detail));
    }
    if ok {
        ordinary = Some(match label {
            RingLabel::R => Verdict::OrdinaryR,
            RingLabel::H => Verdict::OrdinaryH,
            RingLabel::C => Verdict::OrdinaryC,
        });
    }

    let mut special = None;
    let row = tables::match_row(q, v);
    if let Some(m) = &row {
        let hits: Vec<u8> = (0..2).filter(|&p| local.ideal == m.summand(q, p)).collect();
        let detail = format!("matches row {}; I_v has dimension {} of {}", m.row, local.ideal.dim(), local.ambient.dim());
        evidence.push(Clause::new("table1", !hits.is_empty(), detail));
        if let Some(&p) = hits.first() {
            special = Some(Verdict::SpecialCase { row: m.row, p });
        }
    } else if let Some(d) = tables::match_degenerate(q, v) {
        let zero = local.ideal.is_zero();
        evidence.push(Clause::new("degenerate", zero, format!("shape {}", d.tag)));
        if zero {
            special = Some(Verdict::SpecialDegenerate { tag: d.tag });
        }
    }

    let mut verdicts: Vec<Verdict> = special.into_iter().chain(ordinary).collect();
    if verdicts.is_empty() {
        let reasons = evidence.iter().filter(|c| !c.holds).map(|c| format!("{}: {}", c.name, c.detail)).collect::<Vec<_>>();
        let reasons = if reasons.is_empty() { vec!["no gentle shape applies".into()] } else { reasons };
        verdicts.push(Verdict::NotGentle { reasons });
    }
    VertexVerdict { vertex: v, verdicts, evidence, row }
}

pub fn classify_vertices(q: &ModulatedQuiver, ideal: &Degree2Ideal) -> Vec<VertexVerdict> {
    (0..q.vertices.len()).map(|v| classify_vertex(q, ideal, v)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraType {
    UniformR,
    UniformH,
    SpecialType,
    NotClassified { reasons: Vec<String> },
}

impl fmt::Display for AlgebraType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraType::UniformR => write!(f, "uniform type over R"),
            AlgebraType::UniformH => write!(f, "uniform type over H"),
            AlgebraType::SpecialType => write!(f, "special type"),
            AlgebraType::NotClassified { reasons } => write!(f, "not classified: {}", reasons.join("; ")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AlgebraVerdict {
    pub kind: AlgebraType,
    pub vertices: Vec<VertexVerdict>,
    /// Whether the degree-2 ideal is the direct sum of the `I_v`.
    pub generated_locally: bool,
    pub local_dims: Vec<usize>,
    pub ideal_dim: usize,
}

/// Pairs `alpha beta` through distinct middle vertices lie in disjoint
/// coordinates, so the `I_v` generate `I` iff their dimensions add up.
pub fn generated_by_local(q: &ModulatedQuiver, ideal: &Degree2Ideal) -> (bool, Vec<usize>) {
    let dims: Vec<usize> = (0..q.vertices.len()).map(|v| ideal.local(q, v).ideal.dim()).collect();
    (dims.iter().sum::<usize>() == ideal.dim(), dims)
}

pub fn classify_algebra(q: &ModulatedQuiver, ideal: &Degree2Ideal) -> AlgebraVerdict {
    let vertices = classify_vertices(q, ideal);
    let (generated_locally, local_dims) = generated_by_local(q, ideal);
    let all = |pred: &dyn Fn(&Verdict) -> bool| vertices.iter().all(|vv| vv.has(pred));
    let kind = if !generated_locally {
        AlgebraType::NotClassified { reasons: vec!["the ideal is not generated by the local ideals".into()] }
    } else if all(&|v| *v == Verdict::OrdinaryC || v.is_special()) {
        // Sources and sinks on doubled arrows qualify both ways; special wins.
        AlgebraType::SpecialType
    } else if all(&|v| *v == Verdict::OrdinaryR) {
        AlgebraType::UniformR
    } else if all(&|v| *v == Verdict::OrdinaryH) {
        AlgebraType::UniformH
    } else {
        let reasons = vertices
            .iter()
            .map(|vv| format!("{}: {}", q.vertices[vv.vertex].name, vv.verdicts.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" / ")))
            .collect();
        AlgebraType::NotClassified { reasons }
    };
    let ideal_dim = ideal.dim();
    AlgebraVerdict { kind, vertices, generated_locally, local_dims, ideal_dim }
}

/// A parallel pair rewritten by `d`, as arrows of `Gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ParallelPair {
    pub gamma: usize,
    pub gamma_i: usize,
}

fn pairs_of_match(g: &ComplexQuiver, m: &RowMatch) -> Vec<ParallelPair> {
    let mut out = Vec::new();
    if let Some(b_i) = m.b_i {
        out.push(ParallelPair { gamma: g.arrow_fibers[m.b].0, gamma_i: g.arrow_fibers[b_i].0 });
    }
    if let Some(a_i) = m.a_i {
        out.push(ParallelPair { gamma: g.arrow_fibers[m.a].0, gamma_i: g.arrow_fibers[a_i].0 });
    }
    out
}

/// Pairs attached to one specially gentle vertex (the local rewrite `d_v`).
pub fn local_pairs(g: &ComplexQuiver, vv: &VertexVerdict) -> Vec<ParallelPair> {
    match vv.special_row() {
        Some(m) if m.row.has_parallel_pair() => pairs_of_match(g, m),
        _ => Vec::new(),
    }
}

/// All pairs of the global `d`, checking that the far endpoint of every
/// pair sanctions the rewrite.
pub fn d_pairs(q: &ModulatedQuiver, g: &ComplexQuiver, verdicts: &[VertexVerdict]) -> Result<Vec<ParallelPair>, String> {
    let mut set = BTreeSet::new();
    for vv in verdicts {
        for p in local_pairs(g, vv) {
            let arrow = &q.arrows[g.arrows[p.gamma].fiber_of];
            let far = if arrow.source == vv.vertex { arrow.target } else { arrow.source };
            let fv = &verdicts[far];
            let sink_or_source = q.out_arrows(far).is_empty() || q.in_arrows(far).is_empty();
            if !(fv.has(Verdict::is_special) || sink_or_source) {
                return Err(format!(
                    "arrows {} and {} are rewritten at {} but {} is neither specially gentle nor a source or sink",
                    g.arrows[p.gamma].name, g.arrows[p.gamma_i].name, q.vertices[vv.vertex].name, q.vertices[far].name
                ));
            }
            set.insert(p);
        }
    }
    Ok(set.into_iter().collect())
}

/// `d(gamma) = (gamma + gamma_i)/2`, `d(gamma_i) = -i (gamma - gamma_i)/2`.
fn substitution(g: &ComplexQuiver, pairs: &[ParallelPair]) -> Vec<Deg1> {
    let mut subs: Vec<Deg1> = (0..g.arrows.len()).map(|a| Deg1::from([(a, Gaussian::one())])).collect();
    let half = Gaussian::real(ratio(1, 2));
    let mhalf_i = Gaussian::new(Rational::zero(), ratio(-1, 2));
    for p in pairs {
        subs[p.gamma] = Deg1::from([(p.gamma, half.clone()), (p.gamma_i, half.clone())]);
        subs[p.gamma_i] = Deg1::from([(p.gamma, mhalf_i.clone()), (p.gamma_i, -mhalf_i.clone())]);
    }
    subs
}

pub fn apply_substitution(g: &ComplexQuiver, subs: &[Deg1], c: &Deg2) -> Deg2 {
    let mut out = Deg2::new();
    for (&(a, b), x) in c {
        let term = complexify::multiply(g, &subs[a], &subs[b]);
        out = complexify::add(&out, &complexify::scale(&term, x));
    }
    out
}

/// Applies the rewrite on the given pairs to every relation.
pub fn apply_d(j: &ComplexPresentation, pairs: &[ParallelPair]) -> ComplexPresentation {
    let subs = substitution(&j.gamma, pairs);
    let gens: Vec<Deg2> = j.generators().iter().map(|c| apply_substitution(&j.gamma, &subs, c)).collect();
    ComplexPresentation::from_combos(j.gamma.clone(), &gens)
}

pub fn d_transform(q: &ModulatedQuiver, j: &ComplexPresentation, verdicts: &[VertexVerdict]) -> Result<ComplexPresentation, String> {
    let pairs = d_pairs(q, &j.gamma, verdicts)?;
    Ok(apply_d(j, &pairs))
}

/// Result of the gentleness test on a complexified presentation.
#[derive(Clone, Debug)]
pub struct GentleReport {
    pub passes: bool,
    pub monomial: bool,
    /// Relations that are not spanned by the paths they contain, by block.
    pub non_monomial: Vec<(usize, usize)>,
    /// Failed clauses per vertex of `Gamma`.
    pub vertex_failures: BTreeMap<usize, Vec<String>>,
    /// Paths of length two lying in the relations.
    pub paths_in_relations: Vec<(usize, usize)>,
}

fn block_is_monomial(b: &complexify::ComplexBlock) -> bool {
    let n = b.paths.len();
    let cols: Vec<usize> = (0..n).filter(|&k| b.span.contains(&unit(n, k))).collect();
    b.span == Subspace::coordinate(n, &cols)
}

pub fn is_locally_gentle(j: &ComplexPresentation) -> GentleReport {
    let g = &j.gamma;
    let non_monomial: Vec<(usize, usize)> = j.blocks.iter().filter(|b| !block_is_monomial(b)).map(|b| (b.target, b.source)).collect();
    let paths_in_relations: Vec<(usize, usize)> = g.length_two_paths().into_iter().filter(|&p| j.contains_path(p)).collect();
    let zero = |p: (usize, usize)| paths_in_relations.contains(&p);
    let mut vertex_failures = BTreeMap::new();
    for v in 0..g.vertices.len() {
        let (outs, ins) = (g.out_arrows(v), g.in_arrows(v));
        let mut fails = Vec::new();
        if outs.len() > 2 || ins.len() > 2 {
            fails.push(format!("G1: {} outgoing, {} incoming", outs.len(), ins.len()));
        }
        for &a in &outs {
            for (k, &b) in ins.iter().enumerate() {
                for &c in &ins[k + 1..] {
                    if zero((a, b)) == zero((a, c)) {
                        fails.push(format!("G2: {} and {}", g.path_name((a, b)), g.path_name((a, c))));
                    }
                }
            }
        }
        for &a in &ins {
            for (k, &b) in outs.iter().enumerate() {
                for &c in &outs[k + 1..] {
                    if zero((b, a)) == zero((c, a)) {
                        fails.push(format!("G2: {} and {}", g.path_name((b, a)), g.path_name((c, a))));
                    }
                }
            }
        }
        if !fails.is_empty() {
            vertex_failures.insert(v, fails);
        }
    }
    let monomial = non_monomial.is_empty();
    GentleReport { passes: monomial && vertex_failures.is_empty(), monomial, non_monomial, vertex_failures, paths_in_relations }
}

pub fn verdict_json(q: &ModulatedQuiver, vv: &VertexVerdict) -> Value {
    json!({
        "vertex": q.vertices[vv.vertex].name,
        "gentle": vv.is_gentle(),
        "verdicts": vv.verdicts.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "evidence": vv.evidence.iter().map(|c| json!({"clause": c.name, "holds": c.holds, "detail": c.detail})).collect::<Vec<_>>(),
    })
}

pub fn algebra_json(q: &ModulatedQuiver, ideal: &Degree2Ideal, av: &AlgebraVerdict) -> Value {
    let witness: Vec<Value> = (0..q.vertices.len())
        .map(|v| {
            let local = ideal.local(q, v);
            let gens: Vec<String> = local.ideal.basis().iter().map(|x| crate::mqtext::format_element(q, &local.ambient.to_element(x))).collect();
            json!({"vertex": q.vertices[v].name, "generators": gens})
        })
        .collect();
    json!({
        "type": match &av.kind {
            AlgebraType::UniformR => "UniformR",
            AlgebraType::UniformH => "UniformH",
            AlgebraType::SpecialType => "SpecialType",
            AlgebraType::NotClassified { .. } => "NotClassified",
        },
        "description": av.kind.to_string(),
        "generated_by_local_ideals": av.generated_locally,
        "ideal_dimension": av.ideal_dim,
        "local_dimensions": av.local_dims,
        "witness": witness,
        "vertices": av.vertices.iter().map(|vv| verdict_json(q, vv)).collect::<Vec<_>>(),
    })
}

pub fn report_json(j: &ComplexPresentation, r: &GentleReport) -> Value {
    let g = &j.gamma;
    json!({
        "gentle": r.passes,
        "monomial": r.monomial,
        "non_monomial_blocks": r.non_monomial.iter().map(|&(t, s)| json!([g.vertices[s].name, g.vertices[t].name])).collect::<Vec<_>>(),
        "zero_paths": r.paths_in_relations.iter().map(|&p| g.path_name(p)).collect::<Vec<_>>(),
        "vertex_failures": r.vertex_failures.iter().map(|(&v, f)| json!({"vertex": g.vertices[v].name, "failures": f})).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modquiver::RelationSpec;
    use crate::mqtext::parse_mq;
    use crate::tables::local_quiver;

    #[test]
    fn special_rows_in_both_summands() {
        for row in Row::ALL {
            let (q, m) = local_quiver(row);
            for p in 0..2u8 {
                let ideal = Degree2Ideal::generate(&q, vec![RelationSpec::AtVertex { vertex: m.vertex, exponent: p }]).unwrap();
                let vv = classify_vertex(&q, &ideal, m.vertex);
                assert_eq!(vv.primary(), &Verdict::SpecialCase { row, p }, "{row} {p}");
            }
        }
    }

    #[test]
    fn mixed_relations_are_not_ordinary() {
        let base = "vertices:\n  u: R\n  v: R\n  w: R\narrows:\n  b: u -> v\n  c: u -> v\n  a: v -> w\n  d: v -> w\nrelations:\n  path a.b: full\n  path d.c: full\n";
        let (q, ideal) = parse_mq(base).unwrap();
        assert!(classify_vertex(&q, &ideal, 1).has(|v| *v == Verdict::OrdinaryR));
        let mixed = format!("{base}  elem: 1[a] (x) 1[c] + 1[d] (x) 1[b]\n");
        let (q, ideal) = parse_mq(&mixed).unwrap();
        let vv = classify_vertex(&q, &ideal, 1);
        assert!(!vv.has(|v| *v == Verdict::OrdinaryR));
        let clause = |name: &str| vv.evidence.iter().find(|c| c.name == name).unwrap().holds;
        assert!(clause("G2") && !clause("monomial"));
    }

    #[test]
    fn too_many_arrows() {
        let text = "vertices:\n  v: R\n  w: R\narrows:\n  a: v -> w\n  b: v -> w\n  c: v -> w\n";
        let (q, ideal) = parse_mq(text).unwrap();
        let vv = classify_vertex(&q, &ideal, 0);
        match vv.primary() {
            Verdict::NotGentle { reasons } => assert!(reasons.iter().any(|r| r.starts_with("G1"))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_relations_on_a_line_are_gentle() {
        let text = "vertices:\n  u: R\n  v: R\n  w: R\narrows:\n  a: u -> v\n  b: v -> w\n";
        let (q, ideal) = parse_mq(text).unwrap();
        let j = complexify::complexify_ideal(&q, &ideal);
        assert!(is_locally_gentle(&j).passes);
    }

    #[test]
    fn commutative_relation_is_not_monomial() {
        let text = "vertices:\n  u: R\n  v: C\n  w: R\narrows:\n  beta: u -> v\n  alpha: v -> w\nrelations:\n  elem: 1[alpha] (x) 1[beta]\n";
        let (q, ideal) = parse_mq(text).unwrap();
        let j = complexify::complexify_ideal(&q, &ideal);
        let r = is_locally_gentle(&j);
        assert!(!r.monomial && !r.passes);
        assert!(!classify_vertex(&q, &ideal, 1).is_gentle());
    }

    #[test]
    fn rewrite_of_table_two_first_row() {
        // (a + i a_i)(b + i b_i) goes to a.b.
        let (q, m) = local_quiver(Row::RRR);
        let g = complexify::build_gamma(&q);
        let vv =
            VertexVerdict { vertex: m.vertex, verdicts: vec![Verdict::SpecialCase { row: Row::RRR, p: 0 }], evidence: vec![], row: Some(m.clone()) };
        let subs = substitution(&g, &local_pairs(&g, &vv));
        let i = Gaussian::new(Rational::zero(), Rational::one());
        let left = Deg1::from([(g.arrow_fibers[m.a].0, Gaussian::one()), (g.arrow_fibers[m.a_i.unwrap()].0, i.clone())]);
        let right = Deg1::from([(g.arrow_fibers[m.b].0, Gaussian::one()), (g.arrow_fibers[m.b_i.unwrap()].0, i)]);
        let prod = complexify::multiply(&g, &left, &right);
        let got = apply_substitution(&g, &subs, &prod);
        assert_eq!(got, Deg2::from([((g.arrow_fibers[m.a].0, g.arrow_fibers[m.b].0), Gaussian::one())]));
    }
}
