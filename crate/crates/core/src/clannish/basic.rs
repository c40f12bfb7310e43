//! The basic presentation `T(Q^b, M)` of `C_sigma Q / <S>` and the map
//! `Phi` from the corner `eps (C_sigma Q / <S>) eps` onto it.
//!
//! `A_v` is modelled as `M_2(R)` at a real vertex (`i -> [[0,-1],[1,0]]`,
//! `s -> diag(1,-1)`), as `H` at a quaternion vertex (`i -> j`, `s -> k`) and
//! as `C` otherwise. `M_alpha` becomes a matrix with entries in the
//! bimodules of `alpha` and its partner `alpha_i`; the corner entries of
//! products, contracted over the middle index, give `Phi`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use super::{vertex_scalars, SemilinearElement, SemilinearPresentation, Twist, Word};
use crate::linalg::Subspace;
use crate::modquiver::{Degree2Ideal, ModulatedQuiver, PairSpace, PathElement, RelationSpec};
use crate::mqtext::quiver_json;
use crate::rings::{BimoduleKind, RingLabel};
use crate::scalar::{rat, Gaussian, Rational};
use crate::tables;

/// The idempotent `eps_v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Idempotent {
    /// `(e_v + s_v) / 2` at a real vertex.
    HalfSum,
    /// `e_v`.
    Unit,
}

/// Degree-one element of `T(Q^b, M)`: coordinates per arrow.
pub type Deg1R = BTreeMap<usize, Vec<Rational>>;

/// An element of the image of `A_v`: an `n x n` matrix over `M(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMat {
    pub label: RingLabel,
    pub entries: Vec<Vec<Vec<Rational>>>,
}

impl RingMat {
    fn zero(label: RingLabel, n: usize) -> Self {
        RingMat { label, entries: vec![vec![vec![Rational::zero(); label.dim()]; n]; n] }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn mul(&self, o: &RingMat) -> RingMat {
        let n = self.size();
        let mut out = RingMat::zero(self.label, n);
        for r in 0..n {
            for c in 0..n {
                for k in 0..n {
                    let p = self.label.mul(&self.entries[r][k], &o.entries[k][c]);
                    for (x, y) in out.entries[r][c].iter_mut().zip(p) {
                        *x += y;
                    }
                }
            }
        }
        out
    }
}

/// The image of `M_alpha`: a `rows x cols` matrix of degree-one elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowMat {
    pub entries: Vec<Vec<Deg1R>>,
}

fn add_into(acc: &mut Deg1R, a: usize, v: Vec<Rational>) {
    match acc.get_mut(&a) {
        Some(cur) => {
            for (x, y) in cur.iter_mut().zip(v) {
                *x += y;
            }
        }
        None => {
            acc.insert(a, v);
        }
    }
    if acc[&a].iter().all(Zero::is_zero) {
        acc.remove(&a);
    }
}

impl ArrowMat {
    fn rows(&self) -> usize {
        self.entries.len()
    }

    fn cols(&self) -> usize {
        self.entries[0].len()
    }

    pub fn left(q: &ModulatedQuiver, r: &RingMat, x: &ArrowMat) -> ArrowMat {
        let entries = (0..x.rows())
            .map(|i| {
                (0..x.cols())
                    .map(|j| {
                        let mut acc = Deg1R::new();
                        for k in 0..r.size() {
                            for (&a, m) in &x.entries[k][j] {
                                add_into(&mut acc, a, q.arrows[a].kind.left_act(&r.entries[i][k], m));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        ArrowMat { entries }
    }

    pub fn right(q: &ModulatedQuiver, x: &ArrowMat, r: &RingMat) -> ArrowMat {
        let entries = (0..x.rows())
            .map(|i| {
                (0..x.cols())
                    .map(|j| {
                        let mut acc = Deg1R::new();
                        for k in 0..r.size() {
                            for (&a, m) in &x.entries[i][k] {
                                add_into(&mut acc, a, q.arrows[a].kind.right_act(m, &r.entries[k][j]));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        ArrowMat { entries }
    }
}

/// Corner of `x y`, contracted over the middle index.
fn contract(q: &ModulatedQuiver, x: &ArrowMat, y: &ArrowMat) -> PathElement {
    let mut out = PathElement::default();
    for k in 0..x.cols() {
        for (&a, xa) in &x.entries[0][k] {
            for (&b, yb) in &y.entries[k][0] {
                let t = q.pair_space(a, b).tensor(xa, yb);
                let e = out.terms.entry((a, b)).or_insert_with(|| vec![Rational::zero(); t.len()]);
                for (p, v) in e.iter_mut().zip(t) {
                    *p += v;
                }
            }
        }
    }
    out.terms.retain(|_, v| v.iter().any(|x| !x.is_zero()));
    out
}

/// `T(Q^b, M)` together with the lifts of the arrows of `Q`.
#[derive(Clone, Debug)]
pub struct BasicPresentation {
    pub quiver: ModulatedQuiver,
    /// Per ordinary arrow of `Q`: the arrow of `Q^b` and its partner.
    pub arrow_map: Vec<(usize, Option<usize>)>,
    pub idempotents: Vec<Idempotent>,
    /// Image of `[alpha]` per ordinary arrow of `Q`.
    pub lifts: Vec<ArrowMat>,
}

/// Image of the scalar `c e_v` in `A_v`.
pub fn scalar_lift(label: RingLabel, c: &Gaussian) -> RingMat {
    let (re, im) = (c.re.clone(), c.im.clone());
    let z = Rational::zero;
    let entries = match label {
        RingLabel::R => vec![vec![vec![re.clone()], vec![-im.clone()]], vec![vec![im], vec![re]]],
        RingLabel::H => vec![vec![vec![re, im, z(), z()]]],
        RingLabel::C => vec![vec![vec![re, im]]],
    };
    RingMat { label, entries }
}

/// Image of the special loop at a real or quaternion vertex.
fn loop_lift(label: RingLabel) -> RingMat {
    let (o, z) = (rat(1), Rational::zero());
    let entries = match label {
        RingLabel::R => vec![vec![vec![o.clone()], vec![z.clone()]], vec![vec![z], vec![-o]]],
        RingLabel::H => vec![vec![vec![z.clone(), z.clone(), o, z]]],
        RingLabel::C => panic!("no special loop at a complex vertex"),
    };
    RingMat { label, entries }
}

fn coords(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| rat(x)).collect()
}

/// The image of `[alpha]` for every pair of end rings and twist.
fn arrow_lift(kind: BimoduleKind, twist: Twist, a: usize, a_i: Option<usize>) -> ArrowMat {
    use BimoduleKind::*;
    let conj = twist == Twist::Conj;
    let s = if conj { -1 } else { 1 };
    let one = |x: &[i64]| -> Deg1R { [(a, coords(x))].into_iter().collect() };
    let partner = |x: &[i64]| -> Deg1R { [(a_i.expect("parallel partner"), coords(x))].into_iter().collect() };
    let both = |x: &[i64], y: &[i64]| -> Deg1R {
        let mut d = one(x);
        d.extend(partner(y));
        d
    };
    let entries = match kind {
        // I_a + J_{a_i}, or diag(1,-1)_a + [[0,1],[1,0]]_{a_i}.
        RR if !conj => vec![vec![one(&[1]), partner(&[-1])], vec![partner(&[1]), one(&[1])]],
        RR => vec![vec![one(&[1]), partner(&[1])], vec![partner(&[1]), one(&[-1])]],
        RH => vec![vec![one(&[1, 0, 0, 0])], vec![one(&[0, -s, 0, 0])]],
        RC => vec![vec![one(&[1, 0])], vec![one(&[0, -s])]],
        HR => vec![vec![one(&[1, 0, 0, 0]), one(&[0, s, 0, 0])]],
        HH if !conj => vec![vec![both(&[1, 0, 0, 0], &[0, 1, 0, 0])]],
        HH => vec![vec![both(&[0, 0, 1, 0], &[0, 0, 0, 1])]],
        HC | CH if !conj => vec![vec![one(&[1, 0, 0, 0])]],
        HC | CH => vec![vec![one(&[0, 0, 1, 0])]],
        CR => vec![vec![one(&[1, 0]), one(&[0, s])]],
        CC | CCbar => vec![vec![one(&[1, 0])]],
    };
    ArrowMat { entries }
}

/// `Q^b`: an arrow between two real or two quaternion vertices doubles to
/// `alpha, alpha_i`; an arrow between complex vertices is `C` or `Cbar` by
/// its twist.
pub fn build_qb(p: &SemilinearPresentation) -> BasicPresentation {
    let mut q = ModulatedQuiver::new();
    for (v, name) in p.vertices.iter().enumerate() {
        q.add_vertex(name, p.ring(v));
    }
    let mut arrow_map = Vec::new();
    let mut lifts = Vec::new();
    for ar in &p.arrows {
        let (lt, ls) = (p.ring(ar.target), p.ring(ar.source));
        let kind = BimoduleKind::between(lt, ls, Some(ar.twist == Twist::Conj)).expect("every ring pair has a kind");
        let a = q.add_arrow(&ar.name, ar.source, ar.target, kind);
        let a_i = (lt == ls && lt != RingLabel::C).then(|| q.add_arrow(&format!("{}_i", ar.name), ar.source, ar.target, kind));
        arrow_map.push((a, a_i));
        lifts.push(arrow_lift(kind, ar.twist, a, a_i));
    }
    let idempotents = (0..p.vertices.len()).map(|v| if p.ring(v) == RingLabel::R { Idempotent::HalfSum } else { Idempotent::Unit }).collect();
    BasicPresentation { quiver: q, arrow_map, idempotents, lifts }
}

/// An element of `T(Q^b, M)` of degree at most two.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BasicElement {
    pub vertices: BTreeMap<usize, Vec<Rational>>,
    pub arrows: Deg1R,
    pub paths: PathElement,
}

impl BasicElement {
    fn add(&mut self, o: BasicElement) {
        for (v, x) in o.vertices {
            let e = self.vertices.entry(v).or_insert_with(|| vec![Rational::zero(); x.len()]);
            for (p, y) in e.iter_mut().zip(x) {
                *p += y;
            }
        }
        self.vertices.retain(|_, x| x.iter().any(|c| !c.is_zero()));
        for (a, x) in o.arrows {
            add_into(&mut self.arrows, a, x);
        }
        for (k, x) in o.paths.terms {
            let e = self.paths.terms.entry(k).or_insert_with(|| vec![Rational::zero(); x.len()]);
            for (p, y) in e.iter_mut().zip(x) {
                *p += y;
            }
        }
        self.paths.terms.retain(|_, x| x.iter().any(|c| !c.is_zero()));
    }

    pub fn is_zero(&self) -> bool {
        self.vertices.is_empty() && self.arrows.is_empty() && self.paths.is_zero()
    }
}

/// `Phi(eps c w eps)` for one word with at most two ordinary arrows.
pub fn phi_word(p: &SemilinearPresentation, b: &BasicPresentation, c: &Gaussian, w: &Word) -> Result<BasicElement, String> {
    if w.arrows.len() > 2 {
        return Err(format!("{} has more than two ordinary arrows", w.name(p)));
    }
    let q = &b.quiver;
    let at = |k: usize| w.vertex_at(p, k);
    let with_loop = |m: RingMat, k: usize| if w.loops[k] { m.mul(&loop_lift(p.ring(at(k)))) } else { m };
    let head = with_loop(scalar_lift(p.ring(w.target), c), 0);
    let mut out = BasicElement::default();
    match w.arrows.len() {
        0 => {
            out.vertices.insert(w.target, head.entries[0][0].clone());
        }
        1 => {
            let mut x = ArrowMat::left(q, &head, &b.lifts[w.arrows[0]]);
            if w.loops[1] {
                x = ArrowMat::right(q, &x, &loop_lift(p.ring(at(1))));
            }
            out.arrows = x.entries[0][0].clone();
        }
        _ => {
            let mut x = ArrowMat::left(q, &head, &b.lifts[w.arrows[0]]);
            if w.loops[1] {
                x = ArrowMat::right(q, &x, &loop_lift(p.ring(at(1))));
            }
            let mut y = b.lifts[w.arrows[1]].clone();
            if w.loops[2] {
                y = ArrowMat::right(q, &y, &loop_lift(p.ring(at(2))));
            }
            out.paths = contract(q, &x, &y);
        }
    }
    Ok(out)
}

/// `Phi(eps x eps)`, linear in `x`.
pub fn phi(p: &SemilinearPresentation, b: &BasicPresentation, x: &SemilinearElement) -> Result<BasicElement, String> {
    let mut out = BasicElement::default();
    for (w, c) in &x.terms {
        out.add(phi_word(p, b, c, w)?);
    }
    Ok(out)
}

/// Degree-two images `Phi(eps x r y eps)` for `x`, `y` running over the
/// scalars at the ends of `r`; they span the corner of `<r>` in degree two.
fn relation_images(p: &SemilinearPresentation, b: &BasicPresentation, r: &Word) -> Result<Vec<PathElement>, String> {
    let rel = SemilinearElement::word(r.clone());
    let mut out = Vec::new();
    for x in vertex_scalars(p, r.target) {
        for y in vertex_scalars(p, r.source) {
            let e = x.mul(p, &rel).mul(p, &y);
            out.push(phi(p, b, &e)?.paths);
        }
    }
    Ok(out)
}

/// Which Table 1 summand the relation's images span, when the middle
/// vertex is real or quaternion and matches a row.
pub fn relation_summand(p: &SemilinearPresentation, b: &BasicPresentation, r: &Word) -> Result<Option<u8>, String> {
    if r.arrows.len() != 2 {
        return Err(format!("relation {} does not have two ordinary arrows", r.name(p)));
    }
    let v = p.arrows[r.arrows[0]].source;
    if p.ring(v) == RingLabel::C {
        return Ok(None);
    }
    let q = &b.quiver;
    let m = tables::match_row(q, v).ok_or_else(|| format!("{} does not match a local shape", p.vertices[v]))?;
    let amb: PairSpace = m.ambient(q);
    let gens = relation_images(p, b, r)?;
    let span =
        Subspace::from_vectors(amb.dim(), gens.iter().map(|g| amb.embed(g).expect("pair through the vertex"))).close_under(&amb.bimodule_ops(q));
    let hits: Vec<u8> = (0..2).filter(|&e| m.summand(q, e) == span).collect();
    match hits[..] {
        [e] => Ok(Some(e)),
        _ => Err(format!("the images of {} span neither summand at {}", r.name(p), p.vertices[v])),
    }
}

/// `I = Phi(eps <Z> eps)` on `Q^b`. A relation through a complex vertex
/// contributes all of `M(alpha beta)`; any other relation contributes the
/// Table 1 summand its images span.
pub fn induced_ideal(p: &SemilinearPresentation, b: &BasicPresentation) -> Result<Degree2Ideal, String> {
    let q = &b.quiver;
    let mut specs = Vec::new();
    let mut gens = Vec::new();
    for r in &p.relations {
        match relation_summand(p, b, r)? {
            Some(e) => {
                let v = p.arrows[r.arrows[0]].source;
                specs.push(RelationSpec::AtVertex { vertex: v, exponent: e });
                gens.extend(relation_images(p, b, r)?);
            }
            None => {
                let (a, b_) = (b.arrow_map[r.arrows[0]].0, b.arrow_map[r.arrows[1]].0);
                specs.push(RelationSpec::FullPath { outer: a, inner: b_ });
                gens.extend(crate::modquiver::expand_spec(q, specs.last().expect("just pushed"))?);
            }
        }
    }
    Ok(Degree2Ideal::from_elements(q, specs, &gens))
}

impl BasicPresentation {
    pub fn to_json(&self, p: &SemilinearPresentation) -> Value {
        let eps: Vec<Value> = self
            .idempotents
            .iter()
            .enumerate()
            .map(|(v, e)| {
                let text = match e {
                    Idempotent::HalfSum => format!("(e_{0} + s_{0})/2", p.vertices[v]),
                    Idempotent::Unit => format!("e_{}", p.vertices[v]),
                };
                json!({ "vertex": p.vertices[v], "epsilon": text })
            })
            .collect();
        json!({ "quiver": quiver_json(&self.quiver), "idempotents": eps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    use crate::clannish::{LoopTag, SlArrow, SpecialLoop};
    use crate::tables::Row;
    use crate::verify::local_presentation;

    fn two_vertex(source: RingLabel, target: RingLabel, twist: Twist) -> SemilinearPresentation {
        let mut p = SemilinearPresentation { vertices: vec!["x".into(), "y".into()], ..Default::default() };
        for (v, label) in [source, target].into_iter().enumerate() {
            if let Some(tag) = LoopTag::for_label(label) {
                p.loops.push(SpecialLoop { name: format!("s{v}"), vertex: v, tag });
            }
        }
        p.arrows.push(SlArrow { name: "a".into(), source: 0, target: 1, twist });
        p
    }

    #[test]
    fn arrow_lifts_are_semilinear() {
        for ls in RingLabel::ALL {
            for lt in RingLabel::ALL {
                for twist in [Twist::Id, Twist::Conj] {
                    let p = two_vertex(ls, lt, twist);
                    let b = build_qb(&p);
                    let lift = &b.lifts[0];
                    for c in [Gaussian::one(), Gaussian::i()] {
                        let moved = ArrowMat::right(&b.quiver, lift, &scalar_lift(ls, &c));
                        let expected = ArrowMat::left(&b.quiver, &scalar_lift(lt, &twist.apply(&c)), lift);
                        assert_eq!(moved, expected, "{ls}->{lt} {}", twist.name());
                    }
                }
            }
        }
    }

    #[test]
    fn loops_conjugate_and_square_by_tag() {
        for (label, tag) in [(RingLabel::R, LoopTag::MinusOne), (RingLabel::H, LoopTag::PlusOne)] {
            let s = loop_lift(label);
            let i = scalar_lift(label, &Gaussian::i());
            let minus_i = scalar_lift(label, &-Gaussian::i());
            assert_eq!(s.mul(&i), minus_i.mul(&s));
            assert_eq!(s.mul(&s), scalar_lift(label, &tag.square()));
        }
    }

    #[test]
    fn epsilon_is_idempotent() {
        let half = Gaussian::real(crate::scalar::ratio(1, 2));
        let corner = RingMat { label: RingLabel::R, entries: vec![vec![vec![rat(1)], vec![rat(0)]], vec![vec![rat(0)], vec![rat(0)]]] };
        let sum = {
            let (e, s) = (scalar_lift(RingLabel::R, &Gaussian::one()), loop_lift(RingLabel::R));
            let mut m = e.clone();
            for r in 0..2 {
                for c in 0..2 {
                    m.entries[r][c][0] = (&e.entries[r][c][0] + &s.entries[r][c][0]) / rat(2);
                }
            }
            m
        };
        assert_eq!(sum, corner);
        assert_eq!(sum.mul(&sum), sum);

        let p = local_presentation(Row::RRR, Twist::Id, Twist::Id);
        let word_eps = SemilinearElement::scaled(half.clone(), Word::vertex(1)).add(&SemilinearElement::scaled(half, Word::special_loop(1)));
        assert_eq!(word_eps.mul(&p, &word_eps), word_eps);
    }

    fn tensor(q: &ModulatedQuiver, x: &Deg1R, y: &Deg1R) -> PathElement {
        let mut out = PathElement::default();
        for (&a, xa) in x {
            for (&b, yb) in y {
                let t = q.pair_space(a, b).tensor(xa, yb);
                let e = out.terms.entry((a, b)).or_insert_with(|| vec![Rational::zero(); t.len()]);
                for (p, v) in e.iter_mut().zip(t) {
                    *p += v;
                }
            }
        }
        out.terms.retain(|_, v| v.iter().any(|x| !x.is_zero()));
        out
    }

    fn add(x: &PathElement, y: &PathElement) -> PathElement {
        let mut out = x.clone();
        for (k, v) in &y.terms {
            let e = out.terms.entry(*k).or_insert_with(|| vec![Rational::zero(); v.len()]);
            for (p, c) in e.iter_mut().zip(v) {
                *p += c;
            }
        }
        out.terms.retain(|_, v| v.iter().any(|x| !x.is_zero()));
        out
    }

    /// `e_v` splits as `eps eps + E21 E12` at a real vertex and is `eps`
    /// elsewhere, so `Phi(eps x y eps)` is a sum of products of degree-one
    /// images.
    #[test]
    fn phi_is_multiplicative_on_every_local_shape() {
        let half = |c: Gaussian| c.scale(&crate::scalar::ratio(1, 2));
        for row in Row::ALL {
            for ta in [Twist::Id, Twist::Conj] {
                for tb in [Twist::Id, Twist::Conj] {
                    let p = local_presentation(row, ta, tb);
                    let b = build_qb(&p);
                    let q = &b.quiver;
                    let v = 1;
                    let e = |w: Word, c: Gaussian| SemilinearElement::scaled(c, w);
                    let splits: Vec<(SemilinearElement, SemilinearElement)> = if p.ring(v) == RingLabel::R {
                        let eps = e(Word::vertex(v), half(Gaussian::one())).add(&e(Word::special_loop(v), half(Gaussian::one())));
                        let e21 = e(Word::vertex(v), half(Gaussian::i())).add(&e(Word::special_loop(v), half(Gaussian::i())));
                        let e12 = e(Word::vertex(v), half(-Gaussian::i())).add(&e(Word::special_loop(v), half(Gaussian::i())));
                        vec![(eps.clone(), eps), (e21, e12)]
                    } else {
                        vec![(e(Word::vertex(v), Gaussian::one()), e(Word::vertex(v), Gaussian::one()))]
                    };
                    let beta = SemilinearElement::word(Word::arrow(&p, 0));
                    let mut outers = vec![SemilinearElement::word(Word::arrow(&p, 1))];
                    if p.loop_at(v).is_some() {
                        outers.push(outers[0].mul(&p, &SemilinearElement::word(Word::special_loop(v))));
                    }
                    for x in outers {
                        let whole = phi(&p, &b, &x.mul(&p, &beta)).unwrap().paths;
                        let mut parts = PathElement::default();
                        for (l, r) in &splits {
                            let left = phi(&p, &b, &x.mul(&p, l)).unwrap().arrows;
                            let right = phi(&p, &b, &r.mul(&p, &beta)).unwrap().arrows;
                            parts = add(&parts, &tensor(q, &left, &right));
                        }
                        assert_eq!(whole, parts, "{row} {},{} {}", ta.name(), tb.name(), x.format(&p));
                    }
                }
            }
        }
    }

    #[test]
    fn complex_vertex_unit() {
        let p = local_presentation(Row::CRC, Twist::Id, Twist::Id);
        let b = build_qb(&p);
        let x = phi_word(&p, &b, &Gaussian::one(), &Word::vertex(0)).unwrap();
        assert_eq!(x.vertices[&0], vec![rat(1), rat(0)]);
        assert!(x.arrows.is_empty() && x.paths.is_zero());
    }

    #[test]
    fn long_words_are_rejected() {
        let mut p = local_presentation(Row::RRR, Twist::Id, Twist::Id);
        p.arrows.push(SlArrow { name: "c".into(), source: 2, target: 0, twist: Twist::Id });
        let b = build_qb(&p);
        let w = Word { target: 0, source: 0, arrows: vec![2, 1, 0], loops: vec![false; 4] };
        assert!(phi_word(&p, &b, &Gaussian::one(), &w).is_err());
    }
}
