//! Complexification: the quiver `Gamma` with its involution and projection,
//! the idempotent `e`, the map `Psi` up to degree 2 and the relation space.
//!
//! `Psi` is computed through a matrix picture. Each arrow of `Q` with a real
//! element `x` gives a small matrix whose entries are combinations of the
//! fiber arrows of `Gamma`; rows index the target and columns the source,
//! with two indices at a quaternion vertex and one elsewhere. Truncating by
//! `e` keeps index 0 at quaternion ends, and a quaternion middle vertex
//! contracts as `[m1 m2] (x) [n1; n2] -> m1 n1 + m2 n2`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::linalg::Subspace;
use crate::modquiver::{Degree2Ideal, ModulatedQuiver, PathElement};
use crate::rings::{BimoduleKind, RingLabel};
use crate::scalar::{Gaussian, Quaternion, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaVertex {
    pub name: String,
    /// The vertex of `Q` below this one.
    pub fiber_of: usize,
    pub bar: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaArrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub fiber_of: usize,
    pub bar: bool,
}

#[derive(Clone, Debug)]
pub struct ComplexQuiver {
    pub vertices: Vec<GammaVertex>,
    pub arrows: Vec<GammaArrow>,
    pub tau_vertex: Vec<usize>,
    pub tau_arrow: Vec<usize>,
    /// Per vertex of `Q`: the plain fiber and the barred one, if any.
    pub vertex_fibers: Vec<(usize, Option<usize>)>,
    /// Per arrow of `Q`: the plain fiber and the barred one, if any.
    pub arrow_fibers: Vec<(usize, Option<usize>)>,
}

pub fn bar_name(name: &str) -> String {
    format!("{name}_bar")
}

pub fn build_gamma(q: &ModulatedQuiver) -> ComplexQuiver {
    let mut vertices = Vec::new();
    let mut vertex_fibers = Vec::new();
    for (k, v) in q.vertices.iter().enumerate() {
        let main = vertices.len();
        vertices.push(GammaVertex { name: v.name.clone(), fiber_of: k, bar: false });
        let bar = (v.label == RingLabel::C).then(|| {
            vertices.push(GammaVertex { name: bar_name(&v.name), fiber_of: k, bar: true });
            main + 1
        });
        vertex_fibers.push((main, bar));
    }
    let plain = |v: usize| vertex_fibers[v].0;
    let barred = |v: usize| vertex_fibers[v].1.expect("complex vertex");
    let mut arrows = Vec::new();
    let mut arrow_fibers = Vec::new();
    for (k, a) in q.arrows.iter().enumerate() {
        use BimoduleKind::*;
        let (s, t) = (a.source, a.target);
        let ends: Vec<(usize, usize)> = match a.kind {
            RR | HH => vec![(plain(s), plain(t))],
            RC | HC => vec![(plain(s), plain(t)), (barred(s), plain(t))],
            CR | CH => vec![(plain(s), plain(t)), (plain(s), barred(t))],
            RH | HR => vec![(plain(s), plain(t)), (plain(s), plain(t))],
            CC => vec![(plain(s), plain(t)), (barred(s), barred(t))],
            CCbar => vec![(barred(s), plain(t)), (plain(s), barred(t))],
        };
        let main = arrows.len();
        for (n, &(src, tgt)) in ends.iter().enumerate() {
            let name = if n == 0 { a.name.clone() } else { bar_name(&a.name) };
            arrows.push(GammaArrow { name, source: src, target: tgt, fiber_of: k, bar: n == 1 });
        }
        arrow_fibers.push((main, (ends.len() == 2).then_some(main + 1)));
    }
    let mut tau_vertex: Vec<usize> = (0..vertices.len()).collect();
    for &(m, b) in &vertex_fibers {
        if let Some(b) = b {
            tau_vertex[m] = b;
            tau_vertex[b] = m;
        }
    }
    let mut tau_arrow: Vec<usize> = (0..arrows.len()).collect();
    for &(m, b) in &arrow_fibers {
        if let Some(b) = b {
            tau_arrow[m] = b;
            tau_arrow[b] = m;
        }
    }
    ComplexQuiver { vertices, arrows, tau_vertex, tau_arrow, vertex_fibers, arrow_fibers }
}

impl ComplexQuiver {
    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.name == name)
    }
    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }
    pub fn out_arrows(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].source == v).collect()
    }
    pub fn in_arrows(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].target == v).collect()
    }
    pub fn fibers_of_arrow(&self, a: usize) -> Vec<usize> {
        let (m, b) = self.arrow_fibers[a];
        std::iter::once(m).chain(b).collect()
    }
    pub fn fibers_of_vertex(&self, v: usize) -> Vec<usize> {
        let (m, b) = self.vertex_fibers[v];
        std::iter::once(m).chain(b).collect()
    }

    /// Fibers of a path given outermost arrow first (`[alpha, beta]` is
    /// "beta then alpha").
    pub fn fibers(&self, path: &[usize]) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = vec![Vec::new()];
        for &a in path {
            let mut next = Vec::new();
            for p in &out {
                for f in self.fibers_of_arrow(a) {
                    if p.last().is_none_or(|&l| self.arrows[l].source == self.arrows[f].target) {
                        let mut p2 = p.clone();
                        p2.push(f);
                        next.push(p2);
                    }
                }
            }
            out = next;
        }
        out
    }

    /// All paths of length two, ordered by (target, source, outer, inner).
    pub fn length_two_paths(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for a in 0..self.arrows.len() {
            for b in 0..self.arrows.len() {
                if self.arrows[a].source == self.arrows[b].target {
                    v.push((a, b));
                }
            }
        }
        v.sort_by_key(|&(a, b)| (self.arrows[a].target, self.arrows[b].source, a, b));
        v
    }

    pub fn path_name(&self, (a, b): (usize, usize)) -> String {
        format!("{}.{}", self.arrows[a].name, self.arrows[b].name)
    }
}

/// Combination of arrows of `Gamma`.
pub type Deg1 = BTreeMap<usize, Gaussian>;
/// Combination of length-two paths of `Gamma`, keyed `(outer, inner)`.
pub type Deg2 = BTreeMap<(usize, usize), Gaussian>;

fn add_to<K: Ord + Copy>(m: &mut BTreeMap<K, Gaussian>, k: K, c: Gaussian) {
    if c.is_zero() {
        return;
    }
    let e = m.entry(k).or_default();
    *e = e.clone() + c;
    if e.is_zero() {
        m.remove(&k);
    }
}

pub fn scale<K: Ord + Copy>(m: &BTreeMap<K, Gaussian>, c: &Gaussian) -> BTreeMap<K, Gaussian> {
    let mut out = BTreeMap::new();
    for (&k, x) in m {
        add_to(&mut out, k, x * c);
    }
    out
}

pub fn add<K: Ord + Copy>(x: &BTreeMap<K, Gaussian>, y: &BTreeMap<K, Gaussian>) -> BTreeMap<K, Gaussian> {
    let mut out = x.clone();
    for (&k, c) in y {
        add_to(&mut out, k, c.clone());
    }
    out
}

/// Product in the path algebra; non-composable terms vanish.
pub fn multiply(g: &ComplexQuiver, x: &Deg1, y: &Deg1) -> Deg2 {
    let mut out = Deg2::new();
    for (&a, ca) in x {
        for (&b, cb) in y {
            if g.arrows[a].source == g.arrows[b].target {
                add_to(&mut out, (a, b), ca * cb);
            }
        }
    }
    out
}

fn complex(re: &Rational, im: &Rational) -> Gaussian {
    Gaussian::new(re.clone(), im.clone())
}

/// The matrix picture of a real element `x` of `M(alpha)`.
fn arrow_matrix(q: &ModulatedQuiver, g: &ComplexQuiver, alpha: usize, x: &[Rational]) -> Vec<Vec<Deg1>> {
    use BimoduleKind::*;
    let (m, bar) = g.arrow_fibers[alpha];
    let one = |c: Gaussian| -> Deg1 {
        let mut d = Deg1::new();
        add_to(&mut d, m, c);
        d
    };
    let two = |c: Gaussian, cb: Gaussian| -> Deg1 {
        let mut d = Deg1::new();
        add_to(&mut d, m, c);
        add_to(&mut d, bar.expect("two fibers"), cb);
        d
    };
    match q.arrows[alpha].kind {
        RR => vec![vec![one(Gaussian::real(x[0].clone()))]],
        HH => {
            let e = Quaternion::from_coords(x).embed().0;
            (0..2).map(|r| (0..2).map(|k| one(e[r][k].clone())).collect()).collect()
        }
        RC | CR | CC | CCbar => {
            let a = complex(&x[0], &x[1]);
            vec![vec![two(a.clone(), a.conj())]]
        }
        RH => {
            let e = Quaternion::from_coords(x).embed().0;
            vec![(0..2).map(|k| two(e[0][k].clone(), e[1][k].clone())).collect()]
        }
        HR => {
            let e = Quaternion::from_coords(x).embed().0;
            (0..2).map(|k| vec![two(e[k][0].clone(), e[k][1].clone())]).collect()
        }
        HC => {
            let (a, b) = (complex(&x[0], &x[1]), complex(&x[2], &x[3]));
            let f = [[a.clone(), -b.conj()], [b, a.conj()]];
            (0..2).map(|k| vec![two(f[k][0].clone(), f[k][1].clone())]).collect()
        }
        CH => {
            let (a, b) = (complex(&x[0], &x[1]), complex(&x[2], &x[3]));
            let f = [[a.clone(), b.clone()], [-b.conj(), a.conj()]];
            vec![(0..2).map(|k| two(f[0][k].clone(), f[1][k].clone())).collect()]
        }
    }
}

/// `Psi(e (x (x) 1) e)` for a real element `x` of `M(alpha)`.
pub fn psi_arrow(q: &ModulatedQuiver, g: &ComplexQuiver, alpha: usize, x: &[Rational]) -> Deg1 {
    arrow_matrix(q, g, alpha, x)[0][0].clone()
}

/// `Psi(e (x (x) 1) e)` for a real element `x` of the ring at `v`.
pub fn psi_vertex(q: &ModulatedQuiver, g: &ComplexQuiver, v: usize, x: &[Rational]) -> BTreeMap<usize, Gaussian> {
    let (m, bar) = g.vertex_fibers[v];
    let mut out = BTreeMap::new();
    match q.label(v) {
        RingLabel::R => add_to(&mut out, m, Gaussian::real(x[0].clone())),
        RingLabel::H => add_to(&mut out, m, complex(&x[0], &x[1])),
        RingLabel::C => {
            let a = complex(&x[0], &x[1]);
            add_to(&mut out, m, a.clone());
            add_to(&mut out, bar.expect("complex vertex"), a.conj());
        }
    }
    out
}

/// `Psi(e (x (x) y (x) 1) e)` for basis elements `x` of `M(alpha)`, `y` of `M(beta)`.
pub fn psi_pure(q: &ModulatedQuiver, g: &ComplexQuiver, alpha: usize, beta: usize, x: &[Rational], y: &[Rational]) -> Deg2 {
    let xm = arrow_matrix(q, g, alpha, x);
    let ym = arrow_matrix(q, g, beta, y);
    let mut out = Deg2::new();
    for k in 0..xm[0].len() {
        out = add(&out, &multiply(g, &xm[0][k], &ym[k][0]));
    }
    out
}

/// `Psi(e (t (x) 1) e)` for `t` in quotient coordinates of `M(alpha beta)`.
pub fn psi_pair(q: &ModulatedQuiver, g: &ComplexQuiver, (alpha, beta): (usize, usize), coords: &[Rational]) -> Deg2 {
    let t = q.pair_space(alpha, beta);
    let (n1, n2) = (q.arrows[alpha].kind.dim(), q.arrows[beta].kind.dim());
    let mut out = Deg2::new();
    for (c, &(x, y)) in coords.iter().zip(t.basis_pairs()) {
        if c.is_zero() {
            continue;
        }
        let img = psi_pure(q, g, alpha, beta, &crate::linalg::unit(n1, x), &crate::linalg::unit(n2, y));
        out = add(&out, &scale(&img, &Gaussian::real(c.clone())));
    }
    out
}

pub fn psi_element(q: &ModulatedQuiver, g: &ComplexQuiver, e: &PathElement) -> Deg2 {
    let mut out = Deg2::new();
    for (&p, c) in &e.terms {
        out = add(&out, &psi_pair(q, g, p, c));
    }
    out
}

/// `e_i` as coordinates in `M(i) (x) C`: pairs (real basis index, coefficient).
pub fn idempotent_e(label: RingLabel) -> Vec<(usize, Gaussian)> {
    match label {
        RingLabel::R | RingLabel::C => vec![(0, Gaussian::one())],
        RingLabel::H => vec![(0, Gaussian::real(crate::scalar::ratio(1, 2))), (1, Gaussian::new(Rational::zero(), crate::scalar::ratio(-1, 2)))],
    }
}

/// Product in `M(i) (x) C`.
pub fn ring_tensor_c_mul(label: RingLabel, x: &[(usize, Gaussian)], y: &[(usize, Gaussian)]) -> Vec<Gaussian> {
    let n = label.dim();
    let mut out = vec![Gaussian::zero(); n];
    for (a, ca) in x {
        for (b, cb) in y {
            let prod = label.mul(&crate::linalg::unit(n, *a), &crate::linalg::unit(n, *b));
            let c = ca * cb;
            for (o, p) in out.iter_mut().zip(prod) {
                *o = o.clone() + c.scale(&p);
            }
        }
    }
    out
}

/// Relations per pair of `Gamma` endpoints.
#[derive(Clone, Debug)]
pub struct ComplexBlock {
    pub target: usize,
    pub source: usize,
    pub paths: Vec<(usize, usize)>,
    pub span: Subspace<Gaussian>,
}

impl ComplexBlock {
    pub fn vector(&self, c: &Deg2) -> Vec<Gaussian> {
        self.paths.iter().map(|p| c.get(p).cloned().unwrap_or_default()).collect()
    }
    pub fn combo(&self, v: &[Gaussian]) -> Deg2 {
        let mut out = Deg2::new();
        for (p, c) in self.paths.iter().zip(v) {
            add_to(&mut out, *p, c.clone());
        }
        out
    }
    pub fn contains_path(&self, p: (usize, usize)) -> bool {
        match self.paths.iter().position(|&x| x == p) {
            Some(k) => self.span.contains(&crate::linalg::unit(self.paths.len(), k)),
            None => false,
        }
    }
}

/// Degree-2 relations of `Gamma` in subspace form.
#[derive(Clone, Debug)]
pub struct ComplexPresentation {
    pub gamma: ComplexQuiver,
    pub blocks: Vec<ComplexBlock>,
}

impl ComplexPresentation {
    /// Relation space spanned by `gens`, split by endpoints.
    pub fn from_combos(gamma: ComplexQuiver, gens: &[Deg2]) -> Self {
        let mut grouped: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for (a, b) in gamma.length_two_paths() {
            grouped.entry((gamma.arrows[a].target, gamma.arrows[b].source)).or_default().push((a, b));
        }
        let blocks = grouped
            .into_iter()
            .map(|((t, s), paths)| {
                let mut blk = ComplexBlock { target: t, source: s, paths, span: Subspace::zero(0) };
                blk.span = Subspace::zero(blk.paths.len());
                for g in gens {
                    let v = blk.vector(g);
                    blk.span.insert(v);
                }
                blk
            })
            .collect();
        ComplexPresentation { gamma, blocks }
    }

    pub fn block(&self, target: usize, source: usize) -> Option<&ComplexBlock> {
        self.blocks.iter().find(|b| b.target == target && b.source == source)
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.span.dim()).sum()
    }

    pub fn contains_path(&self, p: (usize, usize)) -> bool {
        let g = &self.gamma;
        self.block(g.arrows[p.0].target, g.arrows[p.1].source).is_some_and(|b| b.contains_path(p))
    }

    pub fn contains(&self, c: &Deg2) -> bool {
        self.blocks.iter().all(|b| b.span.contains(&b.vector(c)))
    }

    /// Reduced generators, one per basis vector of each block.
    pub fn generators(&self) -> Vec<Deg2> {
        self.blocks.iter().flat_map(|b| b.span.basis().iter().map(|v| b.combo(v))).collect()
    }

    pub fn same_relations(&self, other: &ComplexPresentation) -> bool {
        self.blocks.len() == other.blocks.len() && self.blocks.iter().zip(&other.blocks).all(|(x, y)| x.paths == y.paths && x.span == y.span)
    }

    /// Image under coefficient conjugation combined with `tau` on paths.
    pub fn conjugate(&self) -> ComplexPresentation {
        let g = &self.gamma;
        let gens: Vec<Deg2> =
            self.generators().iter().map(|c| c.iter().map(|(&(a, b), x)| ((g.tau_arrow[a], g.tau_arrow[b]), x.conj())).collect()).collect();
        ComplexPresentation::from_combos(self.gamma.clone(), &gens)
    }
}

/// `J_2` for a degree-2 ideal, from the ideal's bimodule-closed blocks.
pub fn complexify_ideal(q: &ModulatedQuiver, ideal: &Degree2Ideal) -> ComplexPresentation {
    let gamma = build_gamma(q);
    let mut gens = Vec::new();
    for blk in ideal.blocks() {
        for v in blk.subspace.basis() {
            gens.push(psi_element(q, &gamma, &blk.space.to_element(v)));
        }
    }
    ComplexPresentation::from_combos(gamma, &gens)
}

pub fn format_combo(g: &ComplexQuiver, c: &Deg2) -> String {
    if c.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (&p, x)) in c.iter().enumerate() {
        let neg = (x.im.is_zero() && x.re < Rational::zero()) || (x.re.is_zero() && x.im < Rational::zero());
        let mag = if neg { -x.clone() } else { x.clone() };
        if k > 0 {
            s.push_str(if neg { " - " } else { " + " });
        } else if neg {
            s.push('-');
        }
        if !mag.is_one() {
            if mag.re.is_zero() || mag.im.is_zero() {
                let _ = write!(s, "{mag} ");
            } else {
                let _ = write!(s, "({mag}) ");
            }
        }
        s.push_str(&g.path_name(p));
    }
    s
}

pub fn gamma_json(g: &ComplexQuiver) -> Value {
    let tau: Vec<Value> = (0..g.vertices.len())
        .filter(|&v| g.tau_vertex[v] > v)
        .map(|v| json!([g.vertices[v].name, g.vertices[g.tau_vertex[v]].name]))
        .chain((0..g.arrows.len()).filter(|&a| g.tau_arrow[a] > a).map(|a| json!([g.arrows[a].name, g.arrows[g.tau_arrow[a]].name])))
        .collect();
    json!({
        "vertices": g.vertices.iter().map(|v| json!({
            "name": v.name,
            "bar_of": if v.bar { Value::String(g.vertices[g.tau_vertex[g.vertex_index(&v.name).unwrap()]].name.clone()) } else { Value::Null },
            "fiber_of": v.fiber_of,
        })).collect::<Vec<_>>(),
        "arrows": g.arrows.iter().map(|a| json!({
            "name": a.name,
            "source": g.vertices[a.source].name,
            "target": g.vertices[a.target].name,
            "fiber_of": a.fiber_of,
            "bar": a.bar,
        })).collect::<Vec<_>>(),
        "tau": tau,
    })
}

pub fn combo_json(g: &ComplexQuiver, c: &Deg2) -> Value {
    Value::Array(c.iter().map(|(&(a, b), x)| json!({"path": [g.arrows[a].name, g.arrows[b].name], "coef": x.to_string()})).collect())
}

pub fn presentation_json(q: &ModulatedQuiver, p: &ComplexPresentation) -> Value {
    let mut gamma = gamma_json(&p.gamma);
    // Name the fibers by the original arrows rather than indices.
    if let Some(arr) = gamma["arrows"].as_array_mut() {
        for (a, v) in arr.iter_mut().enumerate() {
            v["fiber_of"] = Value::String(q.arrows[p.gamma.arrows[a].fiber_of].name.clone());
        }
    }
    if let Some(arr) = gamma["vertices"].as_array_mut() {
        for (k, v) in arr.iter_mut().enumerate() {
            v["fiber_of"] = Value::String(q.vertices[p.gamma.vertices[k].fiber_of].name.clone());
        }
    }
    json!({
        "gamma": gamma,
        "relations": p.generators().iter().map(|c| combo_json(&p.gamma, c)).collect::<Vec<_>>(),
        "dimension": p.dim(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit;
    use crate::scalar::rat;
    use crate::tables::{local_quiver, Row};

    fn named(g: &ComplexQuiver, terms: &[(&str, &str, Gaussian)]) -> Deg2 {
        let mut d = Deg2::new();
        for (a, b, c) in terms {
            add_to(&mut d, (g.arrow_index(a).unwrap(), g.arrow_index(b).unwrap()), c.clone());
        }
        d
    }

    #[test]
    fn quaternion_middle_contracts() {
        let (q, m) = local_quiver(Row::RHR);
        let g = build_gamma(&q);
        let one = Gaussian::one();
        let got = psi_pure(&q, &g, m.a, m.b, &unit(4, 0), &unit(4, 0));
        assert_eq!(got, named(&g, &[("a", "b", one.clone()), ("a_bar", "b_bar", one.clone())]));
        let got = psi_pure(&q, &g, m.a, m.b, &unit(4, 0), &unit(4, 2));
        assert_eq!(got, named(&g, &[("a", "b_bar", one.clone()), ("a_bar", "b", -one)]));
    }

    #[test]
    fn degree_one_formulas() {
        let (q, m) = local_quiver(Row::RHR);
        let g = build_gamma(&q);
        // a + b k with a = 1 + 2j, b = 3 + 4j on the R-H arrow a.
        let x = [rat(1), rat(2), rat(3), rat(4)];
        let got = psi_arrow(&q, &g, m.a, &x);
        let mut want = Deg1::new();
        want.insert(g.arrow_index("a").unwrap(), Gaussian::new(rat(1), rat(2)));
        want.insert(g.arrow_index("a_bar").unwrap(), Gaussian::new(rat(-3), rat(4)));
        assert_eq!(got, want);
    }

    #[test]
    fn psi_respects_the_tensor_relations() {
        for row in Row::ALL {
            let (q, m) = local_quiver(row);
            let g = build_gamma(&q);
            for (a, b) in q.composable_pairs() {
                let t = q.pair_space(a, b);
                let (n1, n2) = (q.arrows[a].kind.dim(), q.arrows[b].kind.dim());
                for x in 0..n1 {
                    for y in 0..n2 {
                        let direct = psi_pure(&q, &g, a, b, &unit(n1, x), &unit(n2, y));
                        let via = psi_pair(&q, &g, (a, b), t.pure(x, y));
                        assert_eq!(direct, via, "{row} {x} {y}");
                    }
                }
            }
            let _ = m;
        }
    }

    #[test]
    fn quaternion_idempotent() {
        let e = idempotent_e(RingLabel::H);
        let sq = ring_tensor_c_mul(RingLabel::H, &e, &e);
        let as_vec: Vec<Gaussian> = (0..4).map(|k| e.iter().find(|(i, _)| *i == k).map(|p| p.1.clone()).unwrap_or_default()).collect();
        assert_eq!(sq, as_vec);
    }
}
