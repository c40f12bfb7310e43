//! C-semilinear clannish presentations `C_sigma Q / <S u Z>` with special
//! loops of quadratic type, their basic modulated quiver presentation and
//! the reverse construction from a gentle algebra of special type.
//!
//! Paths are written outer arrow first: `a.b` is `b` followed by `a`.

mod basic;
mod reverse;
mod slq;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::gentle::Clause;
use crate::rings::RingLabel;
use crate::scalar::Gaussian;

pub use basic::{
    build_qb, induced_ideal, phi, phi_word, relation_summand, scalar_lift, ArrowMat, BasicElement, BasicPresentation, Idempotent, RingMat,
};
pub use reverse::{build_qs, roundtrip_check, twist_change_iso, ClannishPair, RoundtripReport, TwistReport};
pub use slq::{parse_slq, presentation_json, serialize_slq};

/// How an arrow moves complex scalars past itself: `a c = twist(c) a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Twist {
    Id,
    Conj,
}

impl Twist {
    pub fn name(self) -> &'static str {
        match self {
            Twist::Id => "id",
            Twist::Conj => "conj",
        }
    }

    pub fn apply(self, c: &Gaussian) -> Gaussian {
        match self {
            Twist::Id => c.clone(),
            Twist::Conj => c.conj(),
        }
    }
}

/// The polynomial a special loop satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LoopTag {
    /// `s^2 = e`; the vertex becomes real.
    MinusOne,
    /// `s^2 = -e`; the vertex becomes quaternionic.
    PlusOne,
}

impl LoopTag {
    pub fn text(self) -> &'static str {
        match self {
            LoopTag::MinusOne => "x^2-1",
            LoopTag::PlusOne => "x^2+1",
        }
    }

    /// The scalar `s^2` equals.
    pub fn square(self) -> Gaussian {
        match self {
            LoopTag::MinusOne => Gaussian::one(),
            LoopTag::PlusOne => -Gaussian::one(),
        }
    }

    pub fn for_label(label: RingLabel) -> Option<LoopTag> {
        match label {
            RingLabel::R => Some(LoopTag::MinusOne),
            RingLabel::H => Some(LoopTag::PlusOne),
            RingLabel::C => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialLoop {
    pub name: String,
    pub vertex: usize,
    pub tag: LoopTag,
}

/// An ordinary arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlArrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub twist: Twist,
}

/// A normal-form word `s^l0 a1 s^l1 a2 ... an s^ln`: ordinary arrows outer
/// first, with a special-loop exponent at each of the `n + 1` vertices.
/// A set exponent implies a special loop at that vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub target: usize,
    pub source: usize,
    pub arrows: Vec<usize>,
    pub loops: Vec<bool>,
}

impl Word {
    pub fn vertex(v: usize) -> Self {
        Word { target: v, source: v, arrows: Vec::new(), loops: vec![false] }
    }

    pub fn special_loop(v: usize) -> Self {
        Word { target: v, source: v, arrows: Vec::new(), loops: vec![true] }
    }

    pub fn arrow(p: &SemilinearPresentation, a: usize) -> Self {
        let ar = &p.arrows[a];
        Word { target: ar.target, source: ar.source, arrows: vec![a], loops: vec![false, false] }
    }

    /// `arrows[0] s^mid arrows[1]` for a composable pair.
    pub fn pair(p: &SemilinearPresentation, outer: usize, inner: usize, mid: bool) -> Self {
        assert_eq!(p.arrows[outer].source, p.arrows[inner].target, "not a path");
        Word { target: p.arrows[outer].target, source: p.arrows[inner].source, arrows: vec![outer, inner], loops: vec![false, mid, false] }
    }

    /// Vertex at loop position `k`.
    pub fn vertex_at(&self, p: &SemilinearPresentation, k: usize) -> usize {
        if k == 0 {
            self.target
        } else {
            p.arrows[self.arrows[k - 1]].source
        }
    }

    /// Arrows counted with special loops.
    pub fn length(&self) -> usize {
        self.arrows.len() + self.loops.iter().filter(|&&l| l).count()
    }

    /// Conjugations a scalar picks up moving left past the word.
    pub fn conjugates(&self, p: &SemilinearPresentation) -> bool {
        let arrows = self.arrows.iter().filter(|&&a| p.arrows[a].twist == Twist::Conj).count();
        let loops = self.loops.iter().filter(|&&l| l).count();
        (arrows + loops) % 2 == 1
    }

    pub fn name(&self, p: &SemilinearPresentation) -> String {
        let mut parts = Vec::new();
        for k in 0..self.loops.len() {
            if self.loops[k] {
                let l = p.loop_at(self.vertex_at(p, k)).expect("loop exponent needs a loop");
                parts.push(p.loops[l].name.clone());
            }
            if k < self.arrows.len() {
                parts.push(p.arrows[self.arrows[k]].name.clone());
            }
        }
        if parts.is_empty() {
            format!("e_{}", p.vertices[self.target])
        } else {
            parts.join(".")
        }
    }
}

/// `C_sigma Q / <S u Z>`: every special loop is conjugating and squares to
/// `+-e` according to its tag.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SemilinearPresentation {
    pub vertices: Vec<String>,
    pub loops: Vec<SpecialLoop>,
    pub arrows: Vec<SlArrow>,
    pub relations: Vec<Word>,
}

impl SemilinearPresentation {
    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn loop_index(&self, name: &str) -> Option<usize> {
        self.loops.iter().position(|l| l.name == name)
    }

    pub fn loop_at(&self, v: usize) -> Option<usize> {
        self.loops.iter().position(|l| l.vertex == v)
    }

    /// `R` for `x^2-1`, `H` for `x^2+1`, `C` without a loop.
    pub fn ring(&self, v: usize) -> RingLabel {
        match self.loop_at(v).map(|l| self.loops[l].tag) {
            Some(LoopTag::MinusOne) => RingLabel::R,
            Some(LoopTag::PlusOne) => RingLabel::H,
            None => RingLabel::C,
        }
    }

    /// Vertices of each ring, in index order.
    pub fn partition(&self) -> BTreeMap<RingLabel, Vec<usize>> {
        let mut m: BTreeMap<RingLabel, Vec<usize>> = BTreeMap::new();
        for v in 0..self.vertices.len() {
            m.entry(self.ring(v)).or_default().push(v);
        }
        m
    }

    pub fn out_arrows(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].source == v).collect()
    }

    pub fn in_arrows(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].target == v).collect()
    }

    pub fn relation_names(&self) -> Vec<String> {
        self.relations.iter().map(|w| w.name(self)).collect()
    }

    /// Multiplies two words: the sign from `s^2 = +-e`, or `None` when they
    /// do not compose.
    pub fn mul_words(&self, x: &Word, y: &Word) -> Option<(Gaussian, Word)> {
        if x.source != y.target {
            return None;
        }
        let mut loops = x.loops[..x.loops.len() - 1].to_vec();
        let (l1, l2) = (*x.loops.last().expect("loops"), y.loops[0]);
        let mut sign = Gaussian::one();
        if l1 && l2 {
            let l = self.loop_at(x.source).expect("loop exponent needs a loop");
            sign = self.loops[l].tag.square();
        }
        loops.push(l1 != l2);
        loops.extend_from_slice(&y.loops[1..]);
        let mut arrows = x.arrows.clone();
        arrows.extend_from_slice(&y.arrows);
        Some((sign, Word { target: x.target, source: y.source, arrows, loops }))
    }
}

/// A Gaussian combination of normal-form words, scalars on the left.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SemilinearElement {
    pub terms: BTreeMap<Word, Gaussian>,
}

impl SemilinearElement {
    pub fn word(w: Word) -> Self {
        Self::scaled(Gaussian::one(), w)
    }

    pub fn scaled(c: Gaussian, w: Word) -> Self {
        let mut e = Self::default();
        e.add_term(c, w);
        e
    }

    pub fn add_term(&mut self, c: Gaussian, w: Word) {
        let cur = self.terms.remove(&w).unwrap_or_else(Gaussian::zero);
        let sum = cur + c;
        if !sum.is_zero() {
            self.terms.insert(w, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(c.clone(), w.clone());
        }
        out
    }

    pub fn scale(&self, c: &Gaussian) -> Self {
        let mut out = Self::default();
        for (w, d) in &self.terms {
            out.add_term(c * d, w.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Product in `p`, pushing scalars left with `a c = twist(c) a`.
    pub fn mul(&self, p: &SemilinearPresentation, other: &Self) -> Self {
        let mut out = Self::default();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                if let Some((sign, w)) = p.mul_words(w1, w2) {
                    let moved = if w1.conjugates(p) { c2.conj() } else { c2.clone() };
                    out.add_term(&(c1 * &moved) * &sign, w);
                }
            }
        }
        out
    }

    pub fn format(&self, p: &SemilinearPresentation) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("({c}) {}", w.name(p))).collect();
        parts.join(" + ")
    }
}

/// The scalars `e`, `i`, `s`, `i s` of `A_v` that span it over the reals.
pub fn vertex_scalars(p: &SemilinearPresentation, v: usize) -> Vec<SemilinearElement> {
    let mut out = vec![SemilinearElement::word(Word::vertex(v)), SemilinearElement::scaled(Gaussian::i(), Word::vertex(v))];
    if p.loop_at(v).is_some() {
        out.push(SemilinearElement::word(Word::special_loop(v)));
        out.push(SemilinearElement::scaled(Gaussian::i(), Word::special_loop(v)));
    }
    out
}

/// Clause-by-clause outcome of the gentle-type conditions.
#[derive(Clone, Debug)]
pub struct GentleTypeReport {
    pub passes: bool,
    pub clauses: Vec<Clause>,
}

impl fmt::Display for GentleTypeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{} {}: {}", if c.holds { "pass" } else { "FAIL" }, c.name, c.detail)?;
        }
        Ok(())
    }
}

/// G1 counts special loops among the arrows at a vertex; in G2 a special
/// loop is one of the arrows an ordinary arrow composes with.
pub fn check_gentle_type(p: &SemilinearPresentation) -> GentleTypeReport {
    let mut g1 = Vec::new();
    for (v, name) in p.vertices.iter().enumerate() {
        let lp = usize::from(p.loop_at(v).is_some());
        let (o, i) = (p.out_arrows(v).len() + lp, p.in_arrows(v).len() + lp);
        if o > 2 || i > 2 {
            g1.push(format!("{name} has {o} outgoing and {i} incoming"));
        }
    }
    let in_z = |outer: Option<usize>, inner: Option<usize>| {
        p.relations.iter().any(|w| {
            w.length() == 2
                && match (outer, inner) {
                    (Some(a), Some(b)) => w.arrows == [a, b],
                    (Some(a), None) => w.arrows == [a] && w.loops[1],
                    (None, Some(b)) => w.arrows == [b] && w.loops[0],
                    (None, None) => false,
                }
        })
    };
    let mut g2 = Vec::new();
    for (a, ar) in p.arrows.iter().enumerate() {
        // Arrows composing on the right of `a` (None = the special loop).
        let mut right: Vec<Option<usize>> = p.in_arrows(ar.source).into_iter().map(Some).collect();
        if p.loop_at(ar.source).is_some() {
            right.push(None);
        }
        let mut left: Vec<Option<usize>> = p.out_arrows(ar.target).into_iter().map(Some).collect();
        if p.loop_at(ar.target).is_some() {
            left.push(None);
        }
        let count = |side: &[Option<usize>], outer: bool, want: bool| {
            side.iter().filter(|&&x| if outer { in_z(x, Some(a)) } else { in_z(Some(a), x) } == want).count()
        };
        for (side, outer, what) in [(&right, false, "after"), (&left, true, "before")] {
            let (out_z, in_zc) = (count(side, outer, false), count(side, outer, true));
            if out_z > 1 {
                g2.push(format!("{} has {out_z} arrows {what} it outside Z", ar.name));
            }
            if in_zc > 1 {
                g2.push(format!("{} has {in_zc} arrows {what} it in Z", ar.name));
            }
        }
    }
    let g3: Vec<String> = p.relations.iter().filter(|w| w.length() != 2).map(|w| format!("{} has length {}", w.name(p), w.length())).collect();
    let clause = |name: &str, fails: Vec<String>, ok: &str| {
        let holds = fails.is_empty();
        Clause { name: name.into(), holds, detail: if holds { ok.into() } else { fails.join("; ") } }
    };
    let clauses = vec![
        clause("G1", g1, "at most two arrows in and out everywhere"),
        clause("G2", g2, "every arrow continues at most once inside and once outside Z"),
        clause("G3", g3, "every relation has length two"),
    ];
    GentleTypeReport { passes: clauses.iter().all(|c| c.holds), clauses }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    /// u -b-> v -a-> w with a real special loop at v.
    fn line(twist_a: Twist, twist_b: Twist) -> SemilinearPresentation {
        SemilinearPresentation {
            vertices: vec!["u".into(), "v".into(), "w".into()],
            loops: vec![SpecialLoop { name: "sv".into(), vertex: 1, tag: LoopTag::MinusOne }],
            arrows: vec![
                SlArrow { name: "b".into(), source: 0, target: 1, twist: twist_b },
                SlArrow { name: "a".into(), source: 1, target: 2, twist: twist_a },
            ],
            relations: Vec::new(),
        }
    }

    #[test]
    fn scalars_move_left_with_the_twist() {
        let p = line(Twist::Conj, Twist::Id);
        let a = SemilinearElement::word(Word::arrow(&p, 1));
        let i_at_v = SemilinearElement::scaled(Gaussian::i(), Word::vertex(1));
        assert_eq!(a.mul(&p, &i_at_v), SemilinearElement::scaled(-Gaussian::i(), Word::arrow(&p, 1)));
        let s = SemilinearElement::word(Word::special_loop(1));
        assert_eq!(s.mul(&p, &i_at_v), SemilinearElement::scaled(-Gaussian::i(), Word::special_loop(1)));
    }

    #[test]
    fn loop_squares_by_tag() {
        let mut p = line(Twist::Id, Twist::Id);
        let s = SemilinearElement::word(Word::special_loop(1));
        assert_eq!(s.mul(&p, &s), SemilinearElement::word(Word::vertex(1)));
        p.loops[0].tag = LoopTag::PlusOne;
        assert_eq!(s.mul(&p, &s), SemilinearElement::scaled(-Gaussian::one(), Word::vertex(1)));
    }

    #[test]
    fn loop_vertex_needs_its_relation() {
        let mut p = line(Twist::Id, Twist::Id);
        let r = check_gentle_type(&p);
        assert!(!r.clauses[1].holds, "a.b outside Z beside a.sv");
        p.relations.push(Word::pair(&p, 1, 0, false));
        assert!(check_gentle_type(&p).passes);
        p.relations[0].loops[1] = true;
        let r = check_gentle_type(&p);
        assert!(!r.clauses[2].holds);
    }

    /// Real, quaternion and complex vertices joined in both directions with
    /// mixed twists.
    fn cycle() -> SemilinearPresentation {
        let arrow = |name: &str, source, target, twist| SlArrow { name: name.into(), source, target, twist };
        SemilinearPresentation {
            vertices: vec!["1".into(), "2".into(), "3".into()],
            loops: vec![
                SpecialLoop { name: "s1".into(), vertex: 0, tag: LoopTag::MinusOne },
                SpecialLoop { name: "s2".into(), vertex: 1, tag: LoopTag::PlusOne },
            ],
            arrows: vec![
                arrow("a", 0, 1, Twist::Id),
                arrow("b", 1, 0, Twist::Conj),
                arrow("c", 1, 2, Twist::Conj),
                arrow("d", 2, 1, Twist::Id),
                arrow("e", 0, 0, Twist::Conj),
            ],
            relations: Vec::new(),
        }
    }

    /// A word ending at `start`, walking back along arrows picked by `steps`.
    fn walk(p: &SemilinearPresentation, start: usize, steps: &[usize], loops: &[bool]) -> Word {
        let mut w = Word::vertex(start);
        let mut cur = start;
        for &k in steps {
            let ins = p.in_arrows(cur);
            let a = ins[k % ins.len()];
            w.arrows.push(a);
            cur = p.arrows[a].source;
            w.loops.push(false);
        }
        w.source = cur;
        for (k, l) in w.loops.iter_mut().enumerate() {
            *l = loops.get(k).copied().unwrap_or(false);
        }
        for k in 0..w.loops.len() {
            if p.loop_at(w.vertex_at(p, k)).is_none() {
                w.loops[k] = false;
            }
        }
        w
    }

    /// Start vertex, arrow choices, loop flags and a Gaussian coefficient.
    type Term = (usize, Vec<usize>, Vec<bool>, i64, i64);

    fn element(p: &SemilinearPresentation, terms: &[Term]) -> SemilinearElement {
        let mut out = SemilinearElement::default();
        for (start, steps, loops, re, im) in terms {
            let c = Gaussian::new(crate::scalar::rat(*re), crate::scalar::rat(*im));
            out.add_term(c, walk(p, start % p.vertices.len(), steps, loops));
        }
        out
    }

    fn terms() -> impl Strategy<Value = Vec<Term>> {
        proptest::collection::vec(
            (0usize..3, proptest::collection::vec(0usize..3, 0..4), proptest::collection::vec(any::<bool>(), 0..5), -3i64..4, -3i64..4),
            1..4,
        )
    }

    proptest! {
        #[test]
        fn normal_form_multiplication_is_associative(x in terms(), y in terms(), z in terms()) {
            let p = cycle();
            let (x, y, z) = (element(&p, &x), element(&p, &y), element(&p, &z));
            prop_assert_eq!(x.mul(&p, &y).mul(&p, &z), x.mul(&p, &y.mul(&p, &z)));
        }

        #[test]
        fn scalars_commute_past_words_by_twist(x in terms(), re in -3i64..4, im in -3i64..4) {
            let p = cycle();
            let x = element(&p, &x);
            let c = Gaussian::new(crate::scalar::rat(re), crate::scalar::rat(im));
            for (w, d) in &x.terms {
                let word = SemilinearElement::word(w.clone());
                let right = word.mul(&p, &SemilinearElement::scaled(c.clone(), Word::vertex(w.source)));
                let moved = if w.conjugates(&p) { c.conj() } else { c.clone() };
                prop_assert_eq!(right, SemilinearElement::scaled(moved, w.clone()));
                prop_assert!(!d.is_zero());
            }
        }
    }
}
