//! From a gentle algebra of special type back to two semilinear clannish
//! presentations, `(Z, sigma)` of gentle type and `(Z', sigma')` whose
//! basic presentation reproduces the input.

use std::collections::BTreeMap;

use num_traits::One;
use serde_json::{json, Value};

use super::{
    build_qb, check_gentle_type, induced_ideal, GentleTypeReport, LoopTag, SemilinearElement, SemilinearPresentation, SlArrow, SpecialLoop, Twist,
    Word,
};
use crate::gentle::{classify_algebra, AlgebraType, AlgebraVerdict, Verdict};
use crate::linalg::Subspace;
use crate::modquiver::{Degree2Ideal, ModulatedQuiver, PathElement};
use crate::rings::{BimoduleKind, RingLabel};
use crate::scalar::Gaussian;

/// Both presentations built from one algebra of special type.
#[derive(Clone, Debug)]
pub struct ClannishPair {
    /// `(Z, sigma)`.
    pub gentle: SemilinearPresentation,
    /// `(Z', sigma')`; same quiver and loops.
    pub twisted: SemilinearPresentation,
    /// Maximal special paths as arrow indices, outer first; a cycle starts
    /// at its least arrow name.
    pub special_paths: Vec<Vec<usize>>,
    pub cycles: Vec<bool>,
    /// Dropped partner arrows: input name and the name `Q^b` gives it back.
    pub renamed: Vec<(String, String)>,
}

fn loop_name(taken: &dyn Fn(&str) -> bool, vertex: &str) -> String {
    let mut name = format!("s{vertex}");
    while taken(&name) {
        name.push('_');
    }
    name
}

/// Exponent `p` with `I_v = I_v^p`, for specially gentle vertices with a row.
fn exponents(av: &AlgebraVerdict) -> BTreeMap<usize, u8> {
    av.vertices
        .iter()
        .filter_map(|vv| {
            vv.verdicts.iter().find_map(|v| match v {
                Verdict::SpecialCase { p, .. } => Some((vv.vertex, *p)),
                _ => None,
            })
        })
        .collect()
}

/// Maximal special paths through the kept arrows: an arrow continues into
/// the arrow ending at its source when that source is real or quaternion.
fn special_paths(p: &SemilinearPresentation) -> (Vec<Vec<usize>>, Vec<bool>) {
    let non_c = |v: usize| p.ring(v) != RingLabel::C;
    let next = |a: usize| -> Option<usize> {
        let v = p.arrows[a].source;
        non_c(v).then(|| p.in_arrows(v).first().copied()).flatten()
    };
    let has_prev = |a: usize| non_c(p.arrows[a].target) && !p.out_arrows(p.arrows[a].target).is_empty();
    let eligible: Vec<usize> = (0..p.arrows.len()).filter(|&a| non_c(p.arrows[a].source) || non_c(p.arrows[a].target)).collect();
    let mut seen = vec![false; p.arrows.len()];
    let (mut paths, mut cycles) = (Vec::new(), Vec::new());
    for &a in &eligible {
        if has_prev(a) {
            continue;
        }
        let mut path = vec![a];
        seen[a] = true;
        let mut cur = a;
        while let Some(n) = next(cur).filter(|&n| !seen[n]) {
            seen[n] = true;
            path.push(n);
            cur = n;
        }
        paths.push(path);
        cycles.push(false);
    }
    let mut rest: Vec<usize> = eligible.into_iter().filter(|&a| !seen[a]).collect();
    rest.sort_by(|&x, &y| p.arrows[x].name.cmp(&p.arrows[y].name));
    for a in rest {
        if seen[a] {
            continue;
        }
        let mut path = vec![a];
        seen[a] = true;
        let mut cur = a;
        while let Some(n) = next(cur).filter(|&n| !seen[n]) {
            seen[n] = true;
            path.push(n);
            cur = n;
        }
        paths.push(path);
        cycles.push(true);
    }
    (paths, cycles)
}

/// Builds `Q^s` with `(Z, sigma)` and `(Z', sigma')`. Within a parallel
/// pair the arrow with the smaller name is kept.
pub fn build_qs(q: &ModulatedQuiver, ideal: &Degree2Ideal, av: &AlgebraVerdict) -> Result<ClannishPair, String> {
    if av.kind != AlgebraType::SpecialType {
        return Err(format!("the algebra is {}, not of special type", av.kind));
    }
    let exps = exponents(av);
    let mut base = SemilinearPresentation { vertices: q.vertices.iter().map(|v| v.name.clone()).collect(), ..Default::default() };
    let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (a, ar) in q.arrows.iter().enumerate() {
        let (lt, ls) = (q.label(ar.target), q.label(ar.source));
        if lt == ls && lt != RingLabel::C {
            groups.entry((ar.source, ar.target)).or_default().push(a);
        }
    }
    let mut dropped = BTreeMap::new();
    let mut renamed = Vec::new();
    for ((s, t), mut arrows) in groups {
        if arrows.len() != 2 {
            return Err(format!("{} arrows from {} to {}, expected a parallel pair", arrows.len(), q.vertices[s].name, q.vertices[t].name));
        }
        arrows.sort_by(|&x, &y| q.arrows[x].name.cmp(&q.arrows[y].name));
        dropped.insert(arrows[1], arrows[0]);
        renamed.push((q.arrows[arrows[1]].name.clone(), format!("{}_i", q.arrows[arrows[0]].name)));
    }
    // Input arrow -> kept arrow index in Q^s.
    let mut index = BTreeMap::new();
    for (a, ar) in q.arrows.iter().enumerate() {
        if dropped.contains_key(&a) {
            continue;
        }
        let twist = if ar.kind == BimoduleKind::CCbar { Twist::Conj } else { Twist::Id };
        index.insert(a, base.arrows.len());
        base.arrows.push(SlArrow { name: ar.name.clone(), source: ar.source, target: ar.target, twist });
    }
    for (v, vx) in q.vertices.iter().enumerate() {
        if let Some(tag) = LoopTag::for_label(vx.label) {
            let taken = |n: &str| base.arrow_index(n).is_some() || base.loop_index(n).is_some() || q.arrow_index(n).is_some();
            let name = loop_name(&taken, &vx.name);
            base.loops.push(SpecialLoop { name, vertex: v, tag });
        }
    }
    let (mut z, mut z_twisted) = (Vec::new(), Vec::new());
    for v in 0..q.vertices.len() {
        if q.label(v) == RingLabel::C {
            for (a, b) in q.pairs_through(v) {
                if ideal.includes_pair(q, (a, b)) {
                    let w = Word::pair(&base, index[&a], index[&b], false);
                    z.push(w.clone());
                    z_twisted.push(w);
                }
            }
            continue;
        }
        let (outs, ins) = (base.out_arrows(v), base.in_arrows(v));
        for &a in &outs {
            for &b in &ins {
                z.push(Word::pair(&base, a, b, false));
                let e = *exps.get(&v).ok_or_else(|| format!("{} has arrows in and out but no Table 1 row", q.vertices[v].name))?;
                z_twisted.push(Word::pair(&base, a, b, e == 1));
            }
        }
    }
    let (paths, cycles) = special_paths(&base);
    let mut gentle = base.clone();
    for (path, &cycle) in paths.iter().zip(&cycles) {
        for (k, &a) in path.iter().enumerate() {
            let interior = cycle || k + 1 < path.len();
            let e = if interior { exps.get(&base.arrows[a].source).copied().unwrap_or(0) } else { 0 };
            gentle.arrows[a].twist = if e == 1 { Twist::Conj } else { Twist::Id };
        }
    }
    gentle.relations = z;
    let mut twisted = base;
    twisted.relations = z_twisted;
    Ok(ClannishPair { gentle, twisted, special_paths: paths, cycles, renamed })
}

/// Result of comparing `g1(<Z>)` with `<Z'>`.
#[derive(Clone, Debug)]
pub struct TwistReport {
    /// `g1` of each relation of `Z`, written in the twisted presentation.
    pub images: Vec<(String, String)>,
    pub ideals_match: bool,
    pub inverse_on_generators: bool,
}

impl TwistReport {
    pub fn passes(&self) -> bool {
        self.ideals_match && self.inverse_on_generators
    }
}

/// `x -> x s^p` on arrows leaving a real or quaternion vertex with twist
/// `conj^p` in `from`; `inverse` uses `s^-1`.
fn twist_map(
    from: &SemilinearPresentation,
    to: &SemilinearPresentation,
    conj_in: &SemilinearPresentation,
    inverse: bool,
    x: &SemilinearElement,
) -> SemilinearElement {
    let image = |a: usize| -> SemilinearElement {
        let ar = &from.arrows[a];
        let mut img = SemilinearElement::word(Word::arrow(to, a));
        if conj_in.arrows[a].twist == Twist::Conj && from.ring(ar.source) != RingLabel::C {
            let l = from.loop_at(ar.source).expect("real or quaternion vertex has a loop");
            let mut s = SemilinearElement::word(Word::special_loop(ar.source));
            if inverse && from.loops[l].tag == LoopTag::PlusOne {
                s = s.scale(&-Gaussian::one());
            }
            img = img.mul(to, &s);
        }
        img
    };
    let mut out = SemilinearElement::default();
    for (w, c) in &x.terms {
        let mut acc = SemilinearElement::scaled(c.clone(), Word { loops: vec![w.loops[0]], arrows: Vec::new(), target: w.target, source: w.target });
        for (k, &a) in w.arrows.iter().enumerate() {
            acc = acc.mul(to, &image(a));
            if w.loops[k + 1] {
                acc = acc.mul(to, &SemilinearElement::word(Word::special_loop(w.vertex_at(from, k + 1))));
            }
        }
        out = out.add(&acc);
    }
    out
}

/// Degree-two part of the ideal generated by relations of two ordinary
/// arrows: the complex span of `x r y` with `x`, `y` in `{e, s}`.
fn degree_two_span(p: &SemilinearPresentation, gens: &[SemilinearElement]) -> (Vec<Word>, Vec<Vec<Gaussian>>) {
    let ends = |v: usize| {
        let mut out = vec![SemilinearElement::word(Word::vertex(v))];
        if p.loop_at(v).is_some() {
            out.push(SemilinearElement::word(Word::special_loop(v)));
        }
        out
    };
    let mut elems = Vec::new();
    for g in gens {
        let Some(w) = g.terms.keys().next() else { continue };
        for x in ends(w.target) {
            for y in ends(w.source) {
                elems.push(x.mul(p, g).mul(p, &y));
            }
        }
    }
    let mut words: Vec<Word> = elems.iter().flat_map(|e| e.terms.keys().cloned()).collect();
    words.sort();
    words.dedup();
    let vecs = elems.iter().map(|e| words.iter().map(|w| e.terms.get(w).cloned().unwrap_or_default()).collect()).collect();
    (words, vecs)
}

fn same_span(p: &SemilinearPresentation, x: &[SemilinearElement], y: &[SemilinearElement]) -> bool {
    let all: Vec<SemilinearElement> = x.iter().chain(y).cloned().collect();
    let (words, _) = degree_two_span(p, &all);
    let embed = |gens: &[SemilinearElement]| {
        let (ws, vecs) = degree_two_span(p, gens);
        let full = vecs
            .into_iter()
            .map(|v| words.iter().map(|w| ws.iter().position(|u| u == w).map(|k| v[k].clone()).unwrap_or_default()).collect::<Vec<Gaussian>>());
        Subspace::from_vectors(words.len(), full)
    };
    embed(x) == embed(y)
}

/// Checks that `g1` carries `<Z>` onto `<Z'>` and that `g2 g1` fixes
/// arrows and relations.
pub fn twist_change_iso(gentle: &SemilinearPresentation, twisted: &SemilinearPresentation) -> TwistReport {
    let g1 = |x: &SemilinearElement| twist_map(gentle, twisted, gentle, false, x);
    let g2 = |x: &SemilinearElement| twist_map(twisted, gentle, gentle, true, x);
    let z: Vec<SemilinearElement> = gentle.relations.iter().map(|w| SemilinearElement::word(w.clone())).collect();
    let z_twisted: Vec<SemilinearElement> = twisted.relations.iter().map(|w| SemilinearElement::word(w.clone())).collect();
    let images: Vec<SemilinearElement> = z.iter().map(g1).collect();
    let names = z.iter().zip(&images).map(|(x, y)| (x.format(gentle), y.format(twisted))).collect();
    let arrows = (0..gentle.arrows.len()).map(|a| SemilinearElement::word(Word::arrow(gentle, a)));
    let inverse_on_generators = arrows.chain(z.iter().cloned()).all(|x| g2(&g1(&x)) == x);
    TwistReport { images: names, ideals_match: same_span(twisted, &images, &z_twisted), inverse_on_generators }
}

/// Outcome of `(Q, M, I) -> (Q^s, Z', sigma') -> (Q^b, M', Phi<Z'>)`.
#[derive(Clone, Debug)]
pub struct RoundtripReport {
    pub pair: ClannishPair,
    pub quiver_match: bool,
    pub ideal_match: bool,
    pub gentle_type: GentleTypeReport,
    pub twist: TwistReport,
    pub details: Vec<String>,
}

impl RoundtripReport {
    pub fn passes(&self) -> bool {
        self.quiver_match && self.ideal_match && self.gentle_type.passes && self.twist.passes()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passes": self.passes(),
            "quiver_match": self.quiver_match,
            "ideal_match": self.ideal_match,
            "gentle_type": self.gentle_type.passes,
            "twist_change": {
                "ideals_match": self.twist.ideals_match,
                "inverse_on_generators": self.twist.inverse_on_generators,
                "images": self.twist.images.iter().map(|(x, y)| json!({"relation": x, "image": y})).collect::<Vec<_>>(),
            },
            "renamed": self.pair.renamed.iter().map(|(x, y)| json!({"from": x, "to": y})).collect::<Vec<_>>(),
            "details": self.details,
        })
    }
}

fn ideals_equal(q: &ModulatedQuiver, x: &Degree2Ideal, y: &Degree2Ideal) -> bool {
    let inside = |a: &Degree2Ideal, b: &Degree2Ideal| {
        a.blocks().iter().all(|blk| blk.subspace.basis().iter().all(|v| b.contains(q, &blk.space.to_element(v))))
    };
    x.dim() == y.dim() && inside(x, y) && inside(y, x)
}

pub fn roundtrip_check(q: &ModulatedQuiver, ideal: &Degree2Ideal) -> Result<RoundtripReport, String> {
    let av = classify_algebra(q, ideal);
    let pair = build_qs(q, ideal, &av)?;
    let b = build_qb(&pair.twisted);
    let back = &b.quiver;
    let mut details = Vec::new();
    let rename: BTreeMap<&str, &str> = pair.renamed.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
    let mut map = Vec::new();
    let mut quiver_match = back.vertices.len() == q.vertices.len() && back.arrows.len() == q.arrows.len();
    for (x, y) in q.vertices.iter().zip(&back.vertices) {
        if x.name != y.name || x.label != y.label {
            quiver_match = false;
            details.push(format!("vertex {} ({}) came back as {} ({})", x.name, x.label, y.name, y.label));
        }
    }
    for ar in &q.arrows {
        let name = rename.get(ar.name.as_str()).copied().unwrap_or(&ar.name);
        match back.arrow_index(name) {
            Some(k) if back.arrows[k].source == ar.source && back.arrows[k].target == ar.target && back.arrows[k].kind == ar.kind => map.push(k),
            _ => {
                quiver_match = false;
                details.push(format!("arrow {} has no counterpart {name}", ar.name));
                map.push(usize::MAX);
            }
        }
    }
    let ideal_match = quiver_match && {
        let induced = induced_ideal(&pair.twisted, &b)?;
        let mut gens = Vec::new();
        for blk in ideal.blocks() {
            for v in blk.subspace.basis() {
                let e = blk.space.to_element(v);
                gens.push(PathElement { terms: e.terms.into_iter().map(|((a, c), x)| ((map[a], map[c]), x)).collect() });
            }
        }
        let moved = Degree2Ideal::from_elements(back, Vec::new(), &gens);
        let ok = ideals_equal(back, &moved, &induced);
        if !ok {
            details.push(format!("induced ideal has dimension {}, the input {}", induced.dim(), moved.dim()));
        }
        ok
    };
    let gentle_type = check_gentle_type(&pair.gentle);
    let twist = twist_change_iso(&pair.gentle, &pair.twisted);
    Ok(RoundtripReport { pair, quiver_match, ideal_match, gentle_type, twist, details })
}
