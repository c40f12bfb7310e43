//! Modulated quivers, degree-2 tensor elements and degree-2 ideals.
//!
//! Paths are written right to left: the pair `(alpha, beta)` is the path
//! "beta then alpha" and requires `source(alpha) == target(beta)`.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

use num_traits::Zero;

use crate::linalg::{unit, Matrix, Subspace};
use crate::rings::{tensor_space, BimoduleKind, RingLabel, TensorSpace};
use crate::scalar::Rational;
use crate::tables;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub name: String,
    pub label: RingLabel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub kind: BimoduleKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModulatedQuiver {
    pub vertices: Vec<Vertex>,
    pub arrows: Vec<Arrow>,
}

impl ModulatedQuiver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: &str, label: RingLabel) -> usize {
        self.vertices.push(Vertex { name: name.to_string(), label });
        self.vertices.len() - 1
    }

    pub fn add_arrow(&mut self, name: &str, source: usize, target: usize, kind: BimoduleKind) -> usize {
        self.arrows.push(Arrow { name: name.to_string(), source, target, kind });
        self.arrows.len() - 1
    }

    /// Adds an arrow whose kind is forced by its endpoints (`conjugated`
    /// selects between the two C-C kinds).
    pub fn add_arrow_between(&mut self, name: &str, source: usize, target: usize, conjugated: bool) -> usize {
        let kind = BimoduleKind::between(self.label(target), self.label(source), Some(conjugated)).expect("conjugation flag given");
        self.add_arrow(name, source, target, kind)
    }

    pub fn label(&self, v: usize) -> RingLabel {
        self.vertices[v].label
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// Arrows starting at `v`.
    pub fn out_arrows(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].source == v).collect()
    }

    /// Arrows ending at `v`.
    pub fn in_arrows(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].target == v).collect()
    }

    /// Vertices joined to `v` by an arrow in either direction.
    pub fn neighbours(&self, v: usize) -> BTreeSet<usize> {
        let mut n = BTreeSet::new();
        for a in &self.arrows {
            if a.source == v {
                n.insert(a.target);
            }
            if a.target == v {
                n.insert(a.source);
            }
        }
        n
    }

    /// Every arrow whose kind contradicts its endpoints, plus naming clashes.
    pub fn validate(&self) -> Vec<String> {
        let mut report = Vec::new();
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(&v.name) {
                report.push(format!("duplicate vertex name '{}'", v.name));
            }
        }
        let mut seen = BTreeSet::new();
        for a in &self.arrows {
            if !seen.insert(&a.name) {
                report.push(format!("duplicate arrow name '{}'", a.name));
            }
            if a.source >= self.vertices.len() || a.target >= self.vertices.len() {
                report.push(format!("arrow '{}' has an endpoint out of range", a.name));
                continue;
            }
            let (l, r) = (self.label(a.target), self.label(a.source));
            if a.kind.left() != l || a.kind.right() != r {
                report.push(format!(
                    "arrow '{}': kind {} does not fit {} -> {} ({r} -> {l})",
                    a.name, a.kind, self.vertices[a.source].name, self.vertices[a.target].name
                ));
            }
        }
        report
    }

    pub fn is_composable(&self, outer: usize, inner: usize) -> bool {
        self.arrows[outer].source == self.arrows[inner].target
    }

    /// All composable pairs ordered by (target, source, outer, inner).
    pub fn composable_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for a in 0..self.arrows.len() {
            for b in 0..self.arrows.len() {
                if self.is_composable(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        pairs.sort_by_key(|&(a, b)| (self.arrows[a].target, self.arrows[b].source, a, b));
        pairs
    }

    /// Composable pairs whose middle vertex is `v`, in global pair order.
    pub fn pairs_through(&self, v: usize) -> Vec<(usize, usize)> {
        self.composable_pairs().into_iter().filter(|&(a, _)| self.arrows[a].source == v).collect()
    }

    pub fn pair_space(&self, outer: usize, inner: usize) -> &'static TensorSpace {
        tensor_space(self.arrows[outer].kind, self.arrows[inner].kind)
    }

    pub fn pair_name(&self, (a, b): (usize, usize)) -> String {
        format!("{}.{}", self.arrows[a].name, self.arrows[b].name)
    }
}

/// Direct sum of the spaces `M(alpha) (x) M(beta)` over a list of pairs.
#[derive(Clone, Debug)]
pub struct PairSpace {
    pairs: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    spaces: Vec<&'static TensorSpace>,
    dim: usize,
}

impl PairSpace {
    pub fn new(q: &ModulatedQuiver, pairs: Vec<(usize, usize)>) -> Self {
        let mut offsets = Vec::with_capacity(pairs.len());
        let mut spaces = Vec::with_capacity(pairs.len());
        let mut dim = 0;
        for &(a, b) in &pairs {
            let t = q.pair_space(a, b);
            offsets.push(dim);
            dim += t.dim();
            spaces.push(t);
        }
        PairSpace { pairs, offsets, spaces, dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
    pub fn position(&self, pair: (usize, usize)) -> Option<usize> {
        self.pairs.iter().position(|&p| p == pair)
    }
    pub fn space(&self, k: usize) -> &'static TensorSpace {
        self.spaces[k]
    }
    pub fn range(&self, k: usize) -> Range<usize> {
        self.offsets[k]..self.offsets[k] + self.spaces[k].dim()
    }

    /// Columns belonging to the listed pairs.
    pub fn columns_of(&self, keep: impl Fn((usize, usize)) -> bool) -> Vec<usize> {
        (0..self.pairs.len()).filter(|&k| keep(self.pairs[k])).flat_map(|k| self.range(k)).collect()
    }

    /// Embeds per-pair coordinates; pairs not in the space are an error.
    pub fn embed(&self, elem: &PathElement) -> Option<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.dim];
        for (pair, coords) in &elem.terms {
            let k = self.position(*pair)?;
            for (x, c) in v[self.range(k)].iter_mut().zip(coords) {
                *x += c;
            }
        }
        Some(v)
    }

    pub fn to_element(&self, v: &[Rational]) -> PathElement {
        let mut e = PathElement::default();
        for k in 0..self.pairs.len() {
            let part = &v[self.range(k)];
            if part.iter().any(|x| !x.is_zero()) {
                e.terms.insert(self.pairs[k], part.to_vec());
            }
        }
        e
    }

    /// Left and right ring actions of every endpoint ring, together with the
    /// endpoint idempotents, as operators on the whole space.
    pub fn bimodule_ops(&self, q: &ModulatedQuiver) -> Vec<Matrix<Rational>> {
        let targets: BTreeSet<usize> = self.pairs.iter().map(|&(a, _)| q.arrows[a].target).collect();
        let sources: BTreeSet<usize> = self.pairs.iter().map(|&(_, b)| q.arrows[b].source).collect();
        let mut ops = Vec::new();
        for &w in &targets {
            for d in 0..q.label(w).dim() {
                ops.push(self.block_op(|k| (q.arrows[self.pairs[k].0].target == w).then(|| self.spaces[k].left_matrix(d).clone())));
            }
        }
        for &u in &sources {
            for d in 0..q.label(u).dim() {
                ops.push(self.block_op(|k| (q.arrows[self.pairs[k].1].source == u).then(|| self.spaces[k].right_matrix(d).clone())));
            }
        }
        ops
    }

    fn block_op(&self, f: impl Fn(usize) -> Option<Matrix<Rational>>) -> Matrix<Rational> {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for k in 0..self.pairs.len() {
            if let Some(b) = f(k) {
                let o = self.offsets[k];
                for r in 0..b.rows {
                    for c in 0..b.cols {
                        let x = b.get(r, c);
                        if !x.is_zero() {
                            m.set(o + r, o + c, x.clone());
                        }
                    }
                }
            }
        }
        m
    }

    /// Names of the coordinates, `outer.inner:x(x)y`.
    pub fn labels(&self, q: &ModulatedQuiver) -> Vec<String> {
        let mut out = Vec::with_capacity(self.dim);
        for (k, &p) in self.pairs.iter().enumerate() {
            for l in self.spaces[k].basis_labels() {
                out.push(format!("{}:{l}", q.pair_name(p)));
            }
        }
        out
    }
}

/// Degree-2 element: per composable pair, coordinates in the quotient basis
/// of `M(alpha) (x) M(beta)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathElement {
    pub terms: BTreeMap<(usize, usize), Vec<Rational>>,
}

impl PathElement {
    /// Adds `coef * x (x) y` for basis elements `x` of `M(outer)` and `y` of `M(inner)`.
    pub fn add_pure(&mut self, q: &ModulatedQuiver, pair: (usize, usize), x: usize, y: usize, coef: &Rational) {
        let t = q.pair_space(pair.0, pair.1);
        let entry = self.terms.entry(pair).or_insert_with(|| vec![Rational::zero(); t.dim()]);
        for (e, p) in entry.iter_mut().zip(t.pure(x, y)) {
            *e += coef * p;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|v| v.iter().all(Zero::is_zero))
    }
}

/// A relation as written by the user.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationSpec {
    /// Table-1 shortcut `I0` or `I1` at a vertex.
    AtVertex {
        vertex: usize,
        exponent: u8,
    },
    /// The whole of `M(outer inner)`.
    FullPath {
        outer: usize,
        inner: usize,
    },
    Element(PathElement),
}

/// Part of the ideal living between a fixed target and source vertex.
#[derive(Clone, Debug)]
pub struct IdealBlock {
    pub target: usize,
    pub source: usize,
    pub space: PairSpace,
    pub subspace: Subspace<Rational>,
}

/// Ideal generated in degree 2, stored by its degree-2 component.
#[derive(Clone, Debug)]
pub struct Degree2Ideal {
    pub specs: Vec<RelationSpec>,
    blocks: Vec<IdealBlock>,
}

impl Degree2Ideal {
    pub fn zero(q: &ModulatedQuiver) -> Self {
        Self::generate(q, Vec::new()).expect("zero ideal")
    }

    pub fn generate(q: &ModulatedQuiver, specs: Vec<RelationSpec>) -> Result<Self, String> {
        let mut gens = Vec::new();
        for s in &specs {
            gens.extend(expand_spec(q, s)?);
        }
        Ok(Self::from_elements(q, specs, &gens))
    }

    /// Ideal spanned by `gens`; `specs` is recorded verbatim for display.
    pub fn from_elements(q: &ModulatedQuiver, specs: Vec<RelationSpec>, gens: &[PathElement]) -> Self {
        let mut grouped: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for (a, b) in q.composable_pairs() {
            grouped.entry((q.arrows[a].target, q.arrows[b].source)).or_default().push((a, b));
        }
        let blocks = grouped
            .into_iter()
            .map(|((w, u), pairs)| {
                let space = PairSpace::new(q, pairs);
                let mut sub = Subspace::zero(space.dim());
                for g in gens {
                    let mut part = PathElement::default();
                    for (p, c) in &g.terms {
                        if space.position(*p).is_some() {
                            part.terms.insert(*p, c.clone());
                        }
                    }
                    if !part.terms.is_empty() {
                        sub.insert(space.embed(&part).expect("pair in block"));
                    }
                }
                let subspace = sub.close_under(&space.bimodule_ops(q));
                IdealBlock { target: w, source: u, space, subspace }
            })
            .collect();
        Degree2Ideal { specs, blocks }
    }

    pub fn blocks(&self) -> &[IdealBlock] {
        &self.blocks
    }

    pub fn block(&self, target: usize, source: usize) -> Option<&IdealBlock> {
        self.blocks.iter().find(|b| b.target == target && b.source == source)
    }

    fn locate(&self, q: &ModulatedQuiver, pair: (usize, usize)) -> (&IdealBlock, usize) {
        let b = self.block(q.arrows[pair.0].target, q.arrows[pair.1].source).expect("composable pair has a block");
        let k = b.space.position(pair).expect("pair in its block");
        (b, k)
    }

    /// Dimension of the degree-2 component.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.subspace.dim()).sum()
    }

    /// `I ∩ M(outer inner)` in the coordinates of that pair.
    pub fn pair_intersection(&self, q: &ModulatedQuiver, pair: (usize, usize)) -> Subspace<Rational> {
        let (b, k) = self.locate(q, pair);
        let r = b.space.range(k);
        let cols: Vec<usize> = r.clone().collect();
        let sub = b.subspace.restrict_to(&cols);
        Subspace::from_vectors(r.len(), sub.basis().iter().map(|v| v[r.clone()].to_vec()))
    }

    /// Whether `I` contains all of `M(outer inner)`.
    pub fn includes_pair(&self, q: &ModulatedQuiver, pair: (usize, usize)) -> bool {
        let (b, k) = self.locate(q, pair);
        b.space.range(k).all(|c| b.subspace.contains(&unit(b.space.dim(), c)))
    }

    pub fn contains(&self, q: &ModulatedQuiver, e: &PathElement) -> bool {
        self.blocks.iter().all(|b| {
            let mut part = PathElement::default();
            for (p, c) in &e.terms {
                if b.space.position(*p).is_some() {
                    part.terms.insert(*p, c.clone());
                }
            }
            part.terms.is_empty() || b.subspace.contains(&b.space.embed(&part).unwrap())
        }) && e.terms.keys().all(|&(a, c)| q.is_composable(a, c))
    }

    /// Same block subspaces.
    pub fn same_as(&self, other: &Degree2Ideal) -> bool {
        self.blocks.len() == other.blocks.len()
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|(x, y)| x.target == y.target && x.source == y.source && x.space.pairs() == y.space.pairs() && x.subspace == y.subspace)
    }

    /// Local picture at `v`: the pairs through `v` and `I_v`.
    pub fn local(&self, q: &ModulatedQuiver, v: usize) -> VertexLocalData {
        let out_arrows = q.out_arrows(v);
        let in_arrows = q.in_arrows(v);
        let ambient = PairSpace::new(q, q.pairs_through(v));
        let mut ideal = Subspace::zero(ambient.dim());
        for b in &self.blocks {
            let cols = b.space.columns_of(|(a, _)| q.arrows[a].source == v);
            if cols.is_empty() {
                continue;
            }
            for vec in b.subspace.restrict_to(&cols).basis() {
                let e = b.space.to_element(vec);
                ideal.insert(ambient.embed(&e).expect("pair through v"));
            }
        }
        VertexLocalData { vertex: v, out_arrows, in_arrows, neighbours: q.neighbours(v), ambient, ideal }
    }
}

/// Everything attached to one vertex that the gentleness tests read.
#[derive(Clone, Debug)]
pub struct VertexLocalData {
    pub vertex: usize,
    /// Arrows starting at the vertex.
    pub out_arrows: Vec<usize>,
    /// Arrows ending at the vertex.
    pub in_arrows: Vec<usize>,
    pub neighbours: BTreeSet<usize>,
    /// Sum of `M(alpha beta)` over pairs passing through the vertex.
    pub ambient: PairSpace,
    /// The ideal intersected with `ambient`.
    pub ideal: Subspace<Rational>,
}

/// The generators a relation line stands for.
pub fn expand_spec(q: &ModulatedQuiver, spec: &RelationSpec) -> Result<Vec<PathElement>, String> {
    match spec {
        RelationSpec::AtVertex { vertex, exponent } => {
            let m = tables::match_row(q, *vertex).ok_or_else(|| format!("vertex '{}' does not match any Table-1 shape", q.vertices[*vertex].name))?;
            Ok(m.generators(q, *exponent))
        }
        RelationSpec::FullPath { outer, inner } => {
            if !q.is_composable(*outer, *inner) {
                return Err(format!("{} is not a path", q.pair_name((*outer, *inner))));
            }
            let d = q.pair_space(*outer, *inner).dim();
            Ok((0..d)
                .map(|c| {
                    let mut e = PathElement::default();
                    e.terms.insert((*outer, *inner), unit(d, c));
                    e
                })
                .collect())
        }
        RelationSpec::Element(e) => Ok(vec![e.clone()]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    /// u (R) -> v (C) -> w (R).
    fn skgen() -> (ModulatedQuiver, usize, usize) {
        let mut q = ModulatedQuiver::new();
        let u = q.add_vertex("u", RingLabel::R);
        let v = q.add_vertex("v", RingLabel::C);
        let w = q.add_vertex("w", RingLabel::R);
        let b = q.add_arrow_between("beta", u, v, false);
        let a = q.add_arrow_between("alpha", v, w, false);
        (q, a, b)
    }

    #[test]
    fn local_data_at_middle_vertex() {
        let (q, a, b) = skgen();
        let mut g = PathElement::default();
        g.add_pure(&q, (a, b), 0, 0, &rat(1));
        let ideal = Degree2Ideal::generate(&q, vec![RelationSpec::Element(g)]).unwrap();
        let local = ideal.local(&q, 1);
        assert_eq!(local.ambient.dim(), 2);
        // Both end rings are real, so 1(x)1 spans a line only.
        assert_eq!(local.ideal.dim(), 1);
        assert!(!ideal.includes_pair(&q, (a, b)));
        let src = ideal.local(&q, 0);
        assert_eq!(src.ambient.dim(), 0);
    }

    #[test]
    fn validation_flags_bad_kind() {
        let (mut q, _, _) = skgen();
        assert!(q.validate().is_empty());
        q.add_arrow("bad", 1, 1, BimoduleKind::HH);
        assert_eq!(q.validate().len(), 1);
    }

    #[test]
    fn ideal_blocks_are_closed() {
        let (q, a, b) = skgen();
        let mut g = PathElement::default();
        g.add_pure(&q, (a, b), 1, 0, &rat(3));
        let ideal = Degree2Ideal::generate(&q, vec![RelationSpec::Element(g)]).unwrap();
        for blk in ideal.blocks() {
            let again = blk.subspace.close_under(&blk.space.bimodule_ops(&q));
            assert_eq!(again, blk.subspace);
        }
    }
}
