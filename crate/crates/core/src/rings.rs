//! The division rings R, C, H, the ten simple bimodules between them, and
//! tensor products over a middle ring realized as relation quotients.
//!
//! Ring and bimodule elements are coordinate vectors in fixed named bases.
//! Every action is computed in a concrete model (numbers, quaternions,
//! complex row or column vectors) and read back into coordinates.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::linalg::{unit, Matrix, Subspace};
use crate::scalar::{Gaussian, Quaternion, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RingLabel {
    R,
    C,
    H,
}

impl RingLabel {
    pub const ALL: [RingLabel; 3] = [RingLabel::R, RingLabel::C, RingLabel::H];

    pub fn dim(self) -> usize {
        match self {
            RingLabel::R => 1,
            RingLabel::C => 2,
            RingLabel::H => 4,
        }
    }

    pub fn basis(self) -> &'static [&'static str] {
        match self {
            RingLabel::R => &["1"],
            RingLabel::C => &["1", "i"],
            RingLabel::H => &["1", "j", "k", "l"],
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "R" => Some(RingLabel::R),
            "C" => Some(RingLabel::C),
            "H" => Some(RingLabel::H),
            _ => None,
        }
    }

    pub fn one(self) -> Vec<Rational> {
        unit(self.dim(), 0)
    }

    /// Product of two ring elements given in coordinates.
    pub fn mul(self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        match self {
            RingLabel::R => vec![&x[0] * &y[0]],
            RingLabel::C => from_gaussian(&(&gaussian(x) * &gaussian(y))),
            RingLabel::H => {
                let p = &Quaternion::from_coords(x) * &Quaternion::from_coords(y);
                p.coords().to_vec()
            }
        }
    }
}

impl fmt::Display for RingLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

fn gaussian(x: &[Rational]) -> Gaussian {
    Gaussian::new(x[0].clone(), x[1].clone())
}

fn from_gaussian(g: &Gaussian) -> Vec<Rational> {
    vec![g.re.clone(), g.im.clone()]
}

/// A simple bimodule, named by `<target ring><source ring>`: the left ring
/// acts from the target side, the right ring from the source side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BimoduleKind {
    RR,
    HH,
    RC,
    CR,
    RH,
    HR,
    /// Column vectors in C^2, H acting on the left through the embedding.
    HC,
    /// Row vectors in C^2, H acting on the right through the embedding.
    CH,
    CC,
    /// C with right action through conjugation.
    CCbar,
}

impl BimoduleKind {
    pub const ALL: [BimoduleKind; 10] = [
        BimoduleKind::RR,
        BimoduleKind::HH,
        BimoduleKind::RC,
        BimoduleKind::CR,
        BimoduleKind::RH,
        BimoduleKind::HR,
        BimoduleKind::HC,
        BimoduleKind::CH,
        BimoduleKind::CC,
        BimoduleKind::CCbar,
    ];

    /// The kind from `left` (target) to `right` (source); `conjugated` only
    /// matters for C-C and is an error signal (`None`) when absent there.
    pub fn between(left: RingLabel, right: RingLabel, conjugated: Option<bool>) -> Option<Self> {
        use BimoduleKind::*;
        use RingLabel::*;
        Some(match (left, right) {
            (R, R) => RR,
            (H, H) => HH,
            (R, C) => RC,
            (C, R) => CR,
            (R, H) => RH,
            (H, R) => HR,
            (H, C) => HC,
            (C, H) => CH,
            (C, C) => match conjugated? {
                false => CC,
                true => CCbar,
            },
        })
    }

    pub fn left(self) -> RingLabel {
        use BimoduleKind::*;
        match self {
            RR | RC | RH => RingLabel::R,
            HH | HR | HC => RingLabel::H,
            CR | CH | CC | CCbar => RingLabel::C,
        }
    }

    pub fn right(self) -> RingLabel {
        use BimoduleKind::*;
        match self {
            RR | CR | HR => RingLabel::R,
            HH | RH | CH => RingLabel::H,
            RC | HC | CC | CCbar => RingLabel::C,
        }
    }

    /// Tag used in the `.mq` arrow syntax.
    pub fn tag(self) -> &'static str {
        use BimoduleKind::*;
        match self {
            RR => "R",
            HH | RH | HR => "H",
            RC | CR | CC => "C",
            CCbar => "Cbar",
            HC => "C2col",
            CH => "C2row",
        }
    }

    pub fn dim(self) -> usize {
        self.basis().len()
    }

    pub fn basis(self) -> &'static [&'static str] {
        use BimoduleKind::*;
        match self {
            RR => &["1"],
            RC | CR | CC | CCbar => &["1", "i"],
            HH | RH | HR => &["1", "j", "k", "l"],
            HC => &["c1", "ic1", "c2", "ic2"],
            CH => &["r1", "ir1", "r2", "ir2"],
        }
    }

    pub fn basis_index(self, token: &str) -> Option<usize> {
        self.basis().iter().position(|b| *b == token)
    }

    /// `d . m` for `d` in the left ring.
    pub fn left_act(self, d: &[Rational], m: &[Rational]) -> Vec<Rational> {
        use BimoduleKind::*;
        match self {
            RR | RC | RH => m.iter().map(|x| &d[0] * x).collect(),
            CR | CC | CCbar => RingLabel::C.mul(d, m),
            HH | HR => RingLabel::H.mul(d, m),
            HC => {
                let e = Quaternion::from_coords(d).embed();
                let (z1, z2) = (gaussian(&m[0..2]), gaussian(&m[2..4]));
                let w1 = &e.0[0][0] * &z1 + &e.0[0][1] * &z2;
                let w2 = &e.0[1][0] * &z1 + &e.0[1][1] * &z2;
                [from_gaussian(&w1), from_gaussian(&w2)].concat()
            }
            CH => {
                let c = gaussian(d);
                let (z1, z2) = (gaussian(&m[0..2]), gaussian(&m[2..4]));
                [from_gaussian(&(&c * &z1)), from_gaussian(&(&c * &z2))].concat()
            }
        }
    }

    /// `m . d` for `d` in the right ring.
    pub fn right_act(self, m: &[Rational], d: &[Rational]) -> Vec<Rational> {
        use BimoduleKind::*;
        match self {
            RR | CR | HR => m.iter().map(|x| x * &d[0]).collect(),
            RC | CC => RingLabel::C.mul(m, d),
            CCbar => from_gaussian(&(&gaussian(m) * &gaussian(d).conj())),
            HH | RH => RingLabel::H.mul(m, d),
            HC => {
                let c = gaussian(d);
                let (z1, z2) = (gaussian(&m[0..2]), gaussian(&m[2..4]));
                [from_gaussian(&(&z1 * &c)), from_gaussian(&(&z2 * &c))].concat()
            }
            CH => {
                let e = Quaternion::from_coords(d).embed();
                let (z1, z2) = (gaussian(&m[0..2]), gaussian(&m[2..4]));
                let w1 = &z1 * &e.0[0][0] + &z2 * &e.0[1][0];
                let w2 = &z1 * &e.0[0][1] + &z2 * &e.0[1][1];
                [from_gaussian(&w1), from_gaussian(&w2)].concat()
            }
        }
    }

    /// Matrix of `m -> b . m` for the `b`-th basis element of the left ring.
    pub fn left_matrix(self, b: usize) -> Matrix<Rational> {
        let d = unit(self.left().dim(), b);
        let cols: Vec<_> = (0..self.dim()).map(|c| self.left_act(&d, &unit(self.dim(), c))).collect();
        Matrix::from_columns(self.dim(), &cols)
    }

    /// Matrix of `m -> m . b` for the `b`-th basis element of the right ring.
    pub fn right_matrix(self, b: usize) -> Matrix<Rational> {
        let d = unit(self.right().dim(), b);
        let cols: Vec<_> = (0..self.dim()).map(|c| self.right_act(&unit(self.dim(), c), &d)).collect();
        Matrix::from_columns(self.dim(), &cols)
    }

    /// All left and right basis action matrices.
    pub fn action_matrices(self) -> Vec<Matrix<Rational>> {
        let mut ops: Vec<_> = (0..self.left().dim()).map(|b| self.left_matrix(b)).collect();
        ops.extend((0..self.right().dim()).map(|b| self.right_matrix(b)));
        ops
    }
}

impl fmt::Display for BimoduleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.left(), self.right())?;
        if *self == BimoduleKind::CCbar {
            write!(f, "(bar)")?;
        }
        Ok(())
    }
}

/// Bimodule span of `gens` inside a space with the given action operators.
pub fn bimodule_span(ambient: usize, gens: &[Vec<Rational>], ops: &[Matrix<Rational>]) -> Subspace<Rational> {
    Subspace::from_vectors(ambient, gens.iter().cloned()).close_under(ops)
}

/// `outer (x)_D inner` where the right ring of `outer` equals the left ring
/// of `inner`; in a path `alpha beta`, `outer` is the modulation of `alpha`.
#[derive(Debug)]
pub struct TensorSpace {
    pub outer: BimoduleKind,
    pub inner: BimoduleKind,
    relations: Subspace<Rational>,
    /// Quotient basis as pure tensors `(outer index, inner index)`.
    basis: Vec<(usize, usize)>,
    /// Quotient coordinates of every pure tensor of basis elements.
    pure: Vec<Vec<Vec<Rational>>>,
    left_ops: Vec<Matrix<Rational>>,
    right_ops: Vec<Matrix<Rational>>,
}

impl TensorSpace {
    fn build(outer: BimoduleKind, inner: BimoduleKind) -> Self {
        assert_eq!(outer.right(), inner.left(), "middle ring mismatch");
        let (n1, n2) = (outer.dim(), inner.dim());
        let total = n1 * n2;
        // Reversed column order: pivots land on late pure tensors, so the
        // quotient basis prefers tensors whose outer factor is early.
        let col = |a: usize, b: usize| total - 1 - (a * n2 + b);
        let middle = outer.right();
        let mut relations = Subspace::zero(total);
        for d in 0..middle.dim() {
            let ring = unit(middle.dim(), d);
            for a in 0..n1 {
                let md = outer.right_act(&unit(n1, a), &ring);
                for b in 0..n2 {
                    let dn = inner.left_act(&ring, &unit(n2, b));
                    let mut v = vec![Rational::zero(); total];
                    for (a2, x) in md.iter().enumerate() {
                        v[col(a2, b)] += x;
                    }
                    for (b2, y) in dn.iter().enumerate() {
                        v[col(a, b2)] -= y;
                    }
                    relations.insert(v);
                }
            }
        }
        let free = relations.free_columns();
        let basis: Vec<(usize, usize)> = free
            .iter()
            .rev()
            .map(|&c| {
                let flat = total - 1 - c;
                (flat / n2, flat % n2)
            })
            .collect();
        let project = |v: Vec<Rational>| -> Vec<Rational> {
            let r = relations.reduce(v);
            basis.iter().map(|&(a, b)| r[col(a, b)].clone()).collect()
        };
        let pure: Vec<Vec<Vec<Rational>>> = (0..n1).map(|a| (0..n2).map(|b| project(unit(total, col(a, b)))).collect()).collect();
        let dim = basis.len();
        let act = |f: &dyn Fn(usize, usize) -> Vec<Rational>| -> Matrix<Rational> {
            let cols: Vec<Vec<Rational>> = basis.iter().map(|&(a, b)| f(a, b)).collect();
            Matrix::from_columns(dim, &cols)
        };
        let mut left_ops = Vec::new();
        for d in 0..outer.left().dim() {
            let ring = unit(outer.left().dim(), d);
            left_ops.push(act(&|a, b| {
                let m = outer.left_act(&ring, &unit(n1, a));
                combine(&pure, &m, &unit(n2, b), dim)
            }));
        }
        let mut right_ops = Vec::new();
        for d in 0..inner.right().dim() {
            let ring = unit(inner.right().dim(), d);
            right_ops.push(act(&|a, b| {
                let n = inner.right_act(&unit(n2, b), &ring);
                combine(&pure, &unit(n1, a), &n, dim)
            }));
        }
        TensorSpace { outer, inner, relations, basis, pure, left_ops, right_ops }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn relation_space(&self) -> &Subspace<Rational> {
        &self.relations
    }

    pub fn basis_pairs(&self) -> &[(usize, usize)] {
        &self.basis
    }

    /// Basis names such as `1(x)j` or `r1(x)c2`.
    pub fn basis_labels(&self) -> Vec<String> {
        self.basis.iter().map(|&(a, b)| format!("{}(x){}", self.outer.basis()[a], self.inner.basis()[b])).collect()
    }

    /// Coordinates of the pure tensor of two basis elements.
    pub fn pure(&self, a: usize, b: usize) -> &[Rational] {
        &self.pure[a][b]
    }

    /// Coordinates of `x (x) y`.
    pub fn tensor(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        combine(&self.pure, x, y, self.dim())
    }

    pub fn left_matrix(&self, b: usize) -> &Matrix<Rational> {
        &self.left_ops[b]
    }

    pub fn right_matrix(&self, b: usize) -> &Matrix<Rational> {
        &self.right_ops[b]
    }

    pub fn left_act(&self, d: &[Rational], t: &[Rational]) -> Vec<Rational> {
        lin_comb(&self.left_ops, d, t)
    }

    pub fn right_act(&self, t: &[Rational], d: &[Rational]) -> Vec<Rational> {
        lin_comb(&self.right_ops, d, t)
    }

    pub fn action_matrices(&self) -> Vec<Matrix<Rational>> {
        self.left_ops.iter().chain(&self.right_ops).cloned().collect()
    }
}

fn combine(pure: &[Vec<Vec<Rational>>], x: &[Rational], y: &[Rational], dim: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); dim];
    for (a, xa) in x.iter().enumerate() {
        if Zero::is_zero(xa) {
            continue;
        }
        for (b, yb) in y.iter().enumerate() {
            if Zero::is_zero(yb) {
                continue;
            }
            let c = xa * yb;
            crate::linalg::add_scaled(&mut out, &c, &pure[a][b]);
        }
    }
    out
}

fn lin_comb(ops: &[Matrix<Rational>], d: &[Rational], t: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); t.len()];
    for (op, c) in ops.iter().zip(d) {
        if !Zero::is_zero(c) {
            crate::linalg::add_scaled(&mut out, c, &op.apply(t));
        }
    }
    out
}

/// Shared tensor space for a composable kind pair.
pub fn tensor_space(outer: BimoduleKind, inner: BimoduleKind) -> &'static TensorSpace {
    static CACHE: OnceLock<HashMap<(BimoduleKind, BimoduleKind), TensorSpace>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        let mut m = HashMap::new();
        for o in BimoduleKind::ALL {
            for i in BimoduleKind::ALL {
                if o.right() == i.left() {
                    m.insert((o, i), TensorSpace::build(o, i));
                }
            }
        }
        m
    });
    cache.get(&(outer, inner)).unwrap_or_else(|| panic!("kinds {outer} and {inner} are not composable"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn actions_commute_for_every_kind() {
        for k in BimoduleKind::ALL {
            for l in 0..k.left().dim() {
                for r in 0..k.right().dim() {
                    let a = k.left_matrix(l).mul(&k.right_matrix(r));
                    let b = k.right_matrix(r).mul(&k.left_matrix(l));
                    assert_eq!(a, b, "{k}");
                }
            }
        }
    }

    #[test]
    fn documented_actions() {
        // j acting on c1 in the column space gives i c1.
        let m = BimoduleKind::HC.left_act(&ints(&[0, 1, 0, 0]), &ints(&[1, 0, 0, 0]));
        assert_eq!(m, ints(&[0, 1, 0, 0]));
        // Right action of i on 1 in the conjugated space gives -i.
        let m = BimoduleKind::CCbar.right_act(&ints(&[1, 0]), &ints(&[0, 1]));
        assert_eq!(m, ints(&[0, -1]));
        let m = BimoduleKind::HH.right_act(&ints(&[1, 0, 0, 0]), &ints(&[0, 1, 0, 0]));
        assert_eq!(m, ints(&[0, 1, 0, 0]));
    }

    #[test]
    fn tensor_dimension_law() {
        for o in BimoduleKind::ALL {
            for i in BimoduleKind::ALL {
                if o.right() == i.left() {
                    let t = tensor_space(o, i);
                    assert_eq!(t.dim() * o.right().dim(), o.dim() * i.dim(), "{o} {i}");
                }
            }
        }
    }

    #[test]
    fn tensor_units() {
        let t = tensor_space(BimoduleKind::HH, BimoduleKind::HR);
        let k = t.pure(0, 2);
        assert_eq!(k.iter().filter(|x| !Zero::is_zero(*x)).count(), 1);
        let t = tensor_space(BimoduleKind::CH, BimoduleKind::HC);
        // 4 * 4 / 4: a copy of C and a copy of conjugated C.
        assert_eq!(t.dim(), 4);
        assert_eq!(t.pure(0, 0), &ints(&[1, 0, 0, 0])[..]);
        assert_eq!(t.basis_labels(), vec!["r1(x)c1", "r1(x)ic1", "r1(x)c2", "r1(x)ic2"]);
    }

    #[test]
    fn span_of_pure_tensor_is_everything() {
        let t = tensor_space(BimoduleKind::RH, BimoduleKind::HH);
        let s = bimodule_span(t.dim(), &[t.pure(0, 0).to_vec()], &t.action_matrices());
        assert!(s.is_full());
    }
}
