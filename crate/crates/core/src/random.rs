//! Seeded generators for the three hypotheses under which an algebra is
//! locally complexified-gentle.
//!
//! Uniform instances are gentle bound quivers with every vertex real (or
//! every vertex quaternion) and monomial relations. Special instances are
//! drawn on the clannish side, as a gentle-type presentation with random
//! twists, and carried over by `build_qb` and `induced_ideal`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clannish::{build_qb, induced_ideal, LoopTag, SemilinearPresentation, SlArrow, SpecialLoop, Twist, Word};
use crate::modquiver::{Degree2Ideal, ModulatedQuiver, RelationSpec};
use crate::rings::{BimoduleKind, RingLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    /// Every vertex ordinarily gentle with `R`.
    UniformR,
    /// Every vertex ordinarily gentle with `H`.
    UniformH,
    /// Every vertex ordinarily gentle with `C` or specially gentle.
    Special,
}

impl Condition {
    pub const ALL: [Condition; 3] = [Condition::UniformR, Condition::UniformH, Condition::Special];

    pub fn name(self) -> &'static str {
        match self {
            Condition::UniformR => "uniform-R",
            Condition::UniformH => "uniform-H",
            Condition::Special => "special",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub quiver: ModulatedQuiver,
    pub ideal: Degree2Ideal,
    /// The gentle-type presentation a special instance was drawn from.
    pub clannish: Option<SemilinearPresentation>,
}

/// Random arrows without loops; `cap(v)` bounds in- and out-degree at `v`.
/// Parallel arrows are allowed only where `parallel(s, t)` holds.
fn skeleton(rng: &mut ChaCha8Rng, n: usize, cap: &dyn Fn(usize) -> usize, parallel: &dyn Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
    let mut arrows: Vec<(usize, usize)> = Vec::new();
    let (mut outd, mut ind) = (vec![0; n], vec![0; n]);
    let tries = rng.gen_range(n..=3 * n);
    for _ in 0..tries {
        let (s, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if s == t || outd[s] >= cap(s) || ind[t] >= cap(t) {
            continue;
        }
        if arrows.contains(&(s, t)) && !parallel(s, t) {
            continue;
        }
        arrows.push((s, t));
        outd[s] += 1;
        ind[t] += 1;
    }
    arrows
}

/// Relations at one vertex meeting the gentle conditions: each arrow
/// continues at most once outside and at most once inside the relations.
fn local_relations(rng: &mut ChaCha8Rng, outs: &[usize], ins: &[usize]) -> Vec<(usize, usize)> {
    match (outs, ins) {
        ([a0, a1], [b0, b1]) => {
            if rng.gen_bool(0.5) {
                vec![(*a0, *b1), (*a1, *b0)]
            } else {
                vec![(*a0, *b0), (*a1, *b1)]
            }
        }
        ([a], [b0, b1]) => vec![(*a, *[*b0, *b1].choose(rng).expect("two"))],
        ([a0, a1], [b]) => vec![(*[*a0, *a1].choose(rng).expect("two"), *b)],
        ([a], [b]) if rng.gen_bool(0.5) => vec![(*a, *b)],
        _ => Vec::new(),
    }
}

fn uniform(rng: &mut ChaCha8Rng, max_vertices: usize, label: RingLabel) -> Instance {
    let n = rng.gen_range(2..=max_vertices);
    let mut q = ModulatedQuiver::new();
    for v in 0..n {
        q.add_vertex(&format!("v{v}"), label);
    }
    let kind = BimoduleKind::between(label, label, Some(false)).expect("kind");
    // Without arrows every vertex would also be specially gentle.
    let arrows = loop {
        let arrows = skeleton(rng, n, &|_| 2, &|_, _| false);
        if !arrows.is_empty() {
            break arrows;
        }
    };
    for (k, (s, t)) in arrows.into_iter().enumerate() {
        q.add_arrow(&format!("a{k}"), s, t, kind);
    }
    let mut specs = Vec::new();
    for v in 0..n {
        let (outs, ins) = (q.out_arrows(v), q.in_arrows(v));
        for (outer, inner) in local_relations(rng, &outs, &ins) {
            specs.push(RelationSpec::FullPath { outer, inner });
        }
    }
    let ideal = Degree2Ideal::generate(&q, specs).expect("full paths expand");
    Instance { quiver: q, ideal, clannish: None }
}

/// A gentle-type presentation: a special loop at every real or quaternion
/// vertex, which then carries at most one ordinary arrow in and out.
pub fn gentle_type(rng: &mut ChaCha8Rng, max_vertices: usize) -> SemilinearPresentation {
    let n = rng.gen_range(2..=max_vertices);
    let labels: Vec<RingLabel> = (0..n).map(|_| *RingLabel::ALL.choose(rng).expect("three labels")).collect();
    let mut p = SemilinearPresentation { vertices: (0..n).map(|v| format!("v{v}")).collect(), ..Default::default() };
    for (v, &label) in labels.iter().enumerate() {
        if let Some(tag) = LoopTag::for_label(label) {
            p.loops.push(SpecialLoop { name: format!("s{v}"), vertex: v, tag });
        }
    }
    let cap = |v: usize| if labels[v] == RingLabel::C { 2 } else { 1 };
    let parallel = |s: usize, t: usize| labels[s] == RingLabel::C && labels[t] == RingLabel::C;
    for (k, (s, t)) in skeleton(rng, n, &cap, &parallel).into_iter().enumerate() {
        let twist = if rng.gen_bool(0.5) { Twist::Conj } else { Twist::Id };
        p.arrows.push(SlArrow { name: format!("a{k}"), source: s, target: t, twist });
    }
    for (v, &label) in labels.iter().enumerate() {
        let (outs, ins) = (p.out_arrows(v), p.in_arrows(v));
        let pairs = if label == RingLabel::C {
            local_relations(rng, &outs, &ins)
        } else {
            outs.iter().flat_map(|&a| ins.iter().map(move |&b| (a, b))).collect()
        };
        for (a, b) in pairs {
            p.relations.push(Word::pair(&p, a, b, false));
        }
    }
    p
}

fn special(rng: &mut ChaCha8Rng, max_vertices: usize) -> Instance {
    let p = gentle_type(rng, max_vertices);
    let b = build_qb(&p);
    let ideal = induced_ideal(&p, &b).expect("gentle-type presentations induce an ideal");
    Instance { quiver: b.quiver, ideal, clannish: Some(p) }
}

pub fn generate(condition: Condition, rng: &mut ChaCha8Rng, max_vertices: usize) -> Instance {
    match condition {
        Condition::UniformR => uniform(rng, max_vertices, RingLabel::R),
        Condition::UniformH => uniform(rng, max_vertices, RingLabel::H),
        Condition::Special => special(rng, max_vertices),
    }
}

/// `count` instances from one seed; the same seed gives the same list.
pub fn instances(condition: Condition, seed: u64, count: usize, max_vertices: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| generate(condition, &mut rng, max_vertices)).collect()
}
