//! The eighteen local shapes around a vertex with real or quaternion ring,
//! their generator elements, and the checked-in reference data.
//!
//! A local shape is `u --b--> v --a--> w`. An arrow between two vertices
//! with the same ring comes with a parallel partner (`a_i`, `b_i`). The
//! reference file `data/tables.txt` writes elements with these role names.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use crate::clannish::Twist;
use crate::linalg::Subspace;
use crate::modquiver::{ModulatedQuiver, PairSpace, PathElement};
use crate::mqtext::parse_terms;
use crate::parse::{content, Cursor, Tok};
use crate::rings::{BimoduleKind, RingLabel};
use crate::scalar::{Gaussian, Rational};
use crate::ParseError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Row {
    RRR,
    RRH,
    RRC,
    HHR,
    HHH,
    HHC,
    HRR,
    CRR,
    RHH,
    CHH,
    HRH,
    HRC,
    CRH,
    CRC,
    RHC,
    CHR,
    CHC,
    RHR,
}

impl Row {
    /// In reference order; the first ten have a parallel pair.
    pub const ALL: [Row; 18] = [
        Row::RRR,
        Row::RRH,
        Row::RRC,
        Row::HHR,
        Row::HHH,
        Row::HHC,
        Row::HRR,
        Row::CRR,
        Row::RHH,
        Row::CHH,
        Row::HRH,
        Row::HRC,
        Row::CRH,
        Row::CRC,
        Row::RHC,
        Row::CHR,
        Row::CHC,
        Row::RHR,
    ];

    pub fn name(self) -> &'static str {
        use Row::*;
        match self {
            RRR => "RRR",
            RRH => "RRH",
            RRC => "RRC",
            HHR => "HHR",
            HHH => "HHH",
            HHC => "HHC",
            HRR => "HRR",
            CRR => "CRR",
            RHH => "RHH",
            CHH => "CHH",
            HRH => "HRH",
            HRC => "HRC",
            CRH => "CRH",
            CRC => "CRC",
            RHC => "RHC",
            CHR => "CHR",
            CHC => "CHC",
            RHR => "RHR",
        }
    }

    pub fn parse(s: &str) -> Option<Row> {
        Row::ALL.into_iter().find(|r| r.name() == s)
    }

    /// Rings of `(u, v, w)`.
    pub fn labels(self) -> [RingLabel; 3] {
        let mut out = [RingLabel::R; 3];
        for (o, c) in out.iter_mut().zip(self.name().chars()) {
            *o = RingLabel::parse(&c.to_string()).expect("row letters are rings");
        }
        out
    }

    pub fn from_labels(l: [RingLabel; 3]) -> Option<Row> {
        Row::ALL.into_iter().find(|r| r.labels() == l)
    }

    pub fn beta_doubled(self) -> bool {
        let [u, v, _] = self.labels();
        u == v
    }

    pub fn alpha_doubled(self) -> bool {
        let [_, v, w] = self.labels();
        v == w
    }

    /// Rows with a parallel pair, where the normalizing substitution applies.
    pub fn has_parallel_pair(self) -> bool {
        self.alpha_doubled() || self.beta_doubled()
    }

    /// Rows whose summands need a second generator.
    pub fn has_partner_generators(self) -> bool {
        matches!(self, Row::RRR | Row::RHR)
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    A,
    AI,
    B,
    BI,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::A => "a",
            Role::AI => "a_i",
            Role::B => "b",
            Role::BI => "b_i",
        }
    }

    pub fn parse(s: &str) -> Option<Role> {
        [Role::A, Role::AI, Role::B, Role::BI].into_iter().find(|r| r.name() == s)
    }
}

/// A vertex whose neighbourhood is one of the eighteen shapes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowMatch {
    pub row: Row,
    pub vertex: usize,
    pub u: usize,
    pub w: usize,
    pub a: usize,
    pub a_i: Option<usize>,
    pub b: usize,
    pub b_i: Option<usize>,
}

impl RowMatch {
    pub fn arrow(&self, role: Role) -> Option<usize> {
        match role {
            Role::A => Some(self.a),
            Role::AI => self.a_i,
            Role::B => Some(self.b),
            Role::BI => self.b_i,
        }
    }

    /// `r_p` and, for the rows that have one, its partner.
    pub fn generators(&self, q: &ModulatedQuiver, p: u8) -> Vec<PathElement> {
        let names: &[&str] = match p {
            0 => &["r0", "r0i"],
            _ => &["r1", "r1i"],
        };
        names.iter().filter_map(|n| table1_entry(self.row, n)).map(|t| self.instantiate(q, t)).collect()
    }

    /// An element written with role names, placed on this match's arrows.
    pub fn instantiate(&self, q: &ModulatedQuiver, t: &ElementText) -> PathElement {
        let mut cur = Cursor::new(&t.text, t.line, t.col).expect("reference data lexes");
        let resolve = |c: &mut Cursor| -> Result<(usize, usize), ParseError> {
            let col = c.col();
            let (name, _) = c.word("a role")?;
            Role::parse(&name)
                .and_then(|r| self.arrow(r))
                .map(|a| (a, col))
                .ok_or_else(|| ParseError::new(c.line(), col, format!("role '{name}' absent in {}", self.row)))
        };
        let e = parse_terms(&mut cur, q, &resolve).unwrap_or_else(|e| panic!("reference data: {e}"));
        cur.expect_end().unwrap_or_else(|e| panic!("reference data: {e}"));
        e
    }

    /// Pairs through the vertex.
    pub fn ambient(&self, q: &ModulatedQuiver) -> PairSpace {
        PairSpace::new(q, q.pairs_through(self.vertex))
    }

    /// The summand generated by `r_p` (and its partner) in [`Self::ambient`].
    pub fn summand(&self, q: &ModulatedQuiver, p: u8) -> Subspace<Rational> {
        let amb = self.ambient(q);
        let gens = self.generators(q, p);
        Subspace::from_vectors(amb.dim(), gens.iter().map(|g| amb.embed(g).expect("local pair"))).close_under(&amb.bimodule_ops(q))
    }
}

/// Sorted arrows with one common far endpoint, if the count fits the rings.
fn uniform_side(q: &ModulatedQuiver, v: usize, arrows: &[usize], far: impl Fn(usize) -> usize) -> Option<(usize, Vec<usize>)> {
    let x = far(*arrows.first()?);
    if arrows.iter().any(|&a| far(a) != x) {
        return None;
    }
    let want = if q.label(x) == q.label(v) { 2 } else { 1 };
    if arrows.len() != want {
        return None;
    }
    let mut sorted = arrows.to_vec();
    sorted.sort_by(|&a, &b| q.arrows[a].name.cmp(&q.arrows[b].name));
    Some((x, sorted))
}

/// Matches the neighbourhood of `v` against the eighteen shapes. Within a
/// parallel pair the arrow with the smaller name plays `a` (or `b`).
pub fn match_row(q: &ModulatedQuiver, v: usize) -> Option<RowMatch> {
    if q.label(v) == RingLabel::C {
        return None;
    }
    let (w, outs) = uniform_side(q, v, &q.out_arrows(v), |a| q.arrows[a].target)?;
    let (u, ins) = uniform_side(q, v, &q.in_arrows(v), |a| q.arrows[a].source)?;
    let row = Row::from_labels([q.label(u), q.label(v), q.label(w)])?;
    Some(RowMatch { row, vertex: v, u, w, a: outs[0], a_i: outs.get(1).copied(), b: ins[0], b_i: ins.get(1).copied() })
}

/// One of the fourteen source, sink or isolated shapes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degenerate {
    pub vertex: usize,
    /// Such as `Rv`, `Rv=>R`, `H->Rv` or `C->Hv`.
    pub tag: String,
    pub arrows: Vec<usize>,
}

pub fn match_degenerate(q: &ModulatedQuiver, v: usize) -> Option<Degenerate> {
    let lv = q.label(v);
    if lv == RingLabel::C {
        return None;
    }
    let (outs, ins) = (q.out_arrows(v), q.in_arrows(v));
    let tag_arrow = |n: usize| if n == 2 { "=>" } else { "->" };
    match (outs.is_empty(), ins.is_empty()) {
        (true, true) => Some(Degenerate { vertex: v, tag: format!("{lv}v"), arrows: Vec::new() }),
        (false, true) => {
            let (x, arrows) = uniform_side(q, v, &outs, |a| q.arrows[a].target)?;
            let tag = format!("{lv}v{}{}", tag_arrow(arrows.len()), q.label(x));
            Some(Degenerate { vertex: v, tag, arrows })
        }
        (true, false) => {
            let (x, arrows) = uniform_side(q, v, &ins, |a| q.arrows[a].source)?;
            let tag = format!("{}{}{lv}v", q.label(x), tag_arrow(arrows.len()));
            Some(Degenerate { vertex: v, tag, arrows })
        }
        (false, false) => None,
    }
}

/// The shape of a row as a standalone quiver on `u`, `v`, `w` with arrows
/// named after their roles.
pub fn local_quiver(row: Row) -> (ModulatedQuiver, RowMatch) {
    let [lu, lv, lw] = row.labels();
    let mut q = ModulatedQuiver::new();
    let u = q.add_vertex("u", lu);
    let v = q.add_vertex("v", lv);
    let w = q.add_vertex("w", lw);
    let add = |q: &mut ModulatedQuiver, name: &str, s: usize, t: usize| {
        let kind = BimoduleKind::between(q.label(t), q.label(s), Some(false)).expect("kind");
        q.add_arrow(name, s, t, kind)
    };
    let b = add(&mut q, "b", u, v);
    let b_i = row.beta_doubled().then(|| add(&mut q, "b_i", u, v));
    let a = add(&mut q, "a", v, w);
    let a_i = row.alpha_doubled().then(|| add(&mut q, "a_i", v, w));
    let m = RowMatch { row, vertex: v, u, w, a, a_i, b, b_i };
    (q, m)
}

/// Element text with its position in the reference file.
#[derive(Clone, Debug)]
pub struct ElementText {
    pub text: String,
    pub line: usize,
    pub col: usize,
}

/// `psi(...)` argument: `r_p (x) 1 + r_p^i (x) partner`, with optional
/// `k` actions on the left (in the ring of `w`) and right (ring of `u`).
#[derive(Clone, Debug)]
pub struct Table2Arg {
    pub exponent: u8,
    pub left_k: bool,
    pub right_k: bool,
    pub partner: Option<Gaussian>,
}

/// One factor of a product in the complexified quiver: a combination of arrows.
pub type PathFactor = Vec<(Gaussian, String)>;

#[derive(Clone, Debug)]
pub struct Table2Entry {
    pub row: Row,
    pub exponent: u8,
    pub line: usize,
    pub negate: bool,
    pub half: bool,
    pub target_filter: Option<String>,
    pub source_filter: Option<String>,
    pub arg: Table2Arg,
    pub product: Vec<PathFactor>,
    pub text: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Word {
    /// `alpha beta`
    Ab,
    /// `alpha s beta` with the special loop in the middle
    Asb,
    /// `i alpha beta`
    IAb,
    /// `i alpha s beta`
    IAsb,
}

impl Word {
    pub fn name(self) -> &'static str {
        match self {
            Word::Ab => "ab",
            Word::Asb => "asb",
            Word::IAb => "iab",
            Word::IAsb => "iasb",
        }
    }
    fn parse(s: &str) -> Option<Word> {
        [Word::Ab, Word::Asb, Word::IAb, Word::IAsb].into_iter().find(|w| w.name() == s)
    }
}

#[derive(Clone, Debug)]
pub struct Table3Entry {
    pub row: Row,
    pub twist_a: Twist,
    pub twist_b: Twist,
    pub word: Word,
    pub element: ElementText,
}

#[derive(Debug, Default)]
pub struct Reference {
    pub table1: HashMap<(Row, String), ElementText>,
    pub table2: Vec<Table2Entry>,
    pub table3: Vec<Table3Entry>,
}

const REFERENCE: &str = include_str!("../data/tables.txt");

pub fn reference() -> &'static Reference {
    static R: OnceLock<Reference> = OnceLock::new();
    R.get_or_init(|| parse_reference(REFERENCE).unwrap_or_else(|e| panic!("data/tables.txt: {e}")))
}

pub fn table1_entry(row: Row, generator: &str) -> Option<&'static ElementText> {
    reference().table1.get(&(row, generator.to_string()))
}

pub fn parse_reference(text: &str) -> Result<Reference, ParseError> {
    let mut r = Reference::default();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let (body, col0) = content(raw);
        if body.is_empty() {
            continue;
        }
        let eq = body.find('=').ok_or_else(|| ParseError::new(line, col0, "missing '='"))?;
        let rhs_off = eq + 1 + (body[eq + 1..].len() - body[eq + 1..].trim_start().len());
        let element = ElementText { text: body[rhs_off..].trim_end().to_string(), line, col: col0 + rhs_off };
        let mut cur = Cursor::new(&body[..eq], line, col0)?;
        let (kind, _) = cur.ident("a table tag")?;
        let (row_name, rcol) = cur.ident("a row")?;
        let row = Row::parse(&row_name).ok_or_else(|| ParseError::new(line, rcol, format!("unknown row '{row_name}'")))?;
        match kind.as_str() {
            "table1" => {
                let (g, _) = cur.ident("a generator name")?;
                cur.expect_end()?;
                r.table1.insert((row, g), element);
            }
            "table2" => {
                let mut lhs = Cursor::new(&body[..eq], line, col0)?;
                lhs.next();
                lhs.next();
                r.table2.push(table2_line(&mut lhs, row, &element)?);
            }
            "table3" => {
                let twist_a = twist(&mut cur)?;
                cur.expect_sym(',')?;
                let twist_b = twist(&mut cur)?;
                let (w, wcol) = cur.ident("a word")?;
                let word = Word::parse(&w).ok_or_else(|| ParseError::new(line, wcol, format!("unknown word '{w}'")))?;
                cur.expect_end()?;
                r.table3.push(Table3Entry { row, twist_a, twist_b, word, element });
            }
            _ => return Err(ParseError::new(line, col0, format!("unknown table '{kind}'"))),
        }
    }
    Ok(r)
}

fn twist(cur: &mut Cursor) -> Result<Twist, ParseError> {
    let col = cur.col();
    match cur.ident("id or conj")?.0.as_str() {
        "id" => Ok(Twist::Id),
        "conj" => Ok(Twist::Conj),
        t => Err(ParseError::new(cur.line(), col, format!("unknown twist '{t}'"))),
    }
}

fn filter(cur: &mut Cursor) -> Result<Option<String>, ParseError> {
    if cur.peek() == Some(&Tok::Ident("e".into())) && cur.peek_at(1) == Some(&Tok::Sym('(')) {
        cur.next();
        cur.next();
        let (v, _) = cur.word("a vertex")?;
        cur.expect_sym(')')?;
        Ok(Some(v))
    } else {
        Ok(None)
    }
}

fn eat_ident(cur: &mut Cursor, s: &str) -> bool {
    if cur.peek() == Some(&Tok::Ident(s.into())) {
        cur.next();
        true
    } else {
        false
    }
}

fn table2_line(cur: &mut Cursor, row: Row, rhs: &ElementText) -> Result<Table2Entry, ParseError> {
    let line = cur.line();
    let exponent = match cur.word("0 or 1")?.0.as_str() {
        "0" => 0,
        "1" => 1,
        _ => return Err(cur.error("exponent must be 0 or 1")),
    };
    cur.expect_sym(':')?;
    let negate = cur.eat_sym('-');
    let target_filter = filter(cur)?;
    if !eat_ident(cur, "psi") {
        return Err(cur.unexpected("'psi'"));
    }
    cur.expect_sym('(')?;
    let left_k = eat_ident(cur, "k");
    let gen = format!("r{exponent}");
    if !eat_ident(cur, &gen) {
        return Err(cur.unexpected(&format!("'{gen}'")));
    }
    let right_k = eat_ident(cur, "k");
    let partner = if cur.peek() == Some(&Tok::Sym('-')) || cur.peek() == Some(&Tok::Sym('+')) {
        let neg = cur.eat_sym('-') || {
            cur.eat_sym('+');
            false
        };
        if !eat_ident(cur, "i") || !eat_ident(cur, &format!("{gen}i")) {
            return Err(cur.unexpected("'i' and the partner generator"));
        }
        Some(if neg { -Gaussian::i() } else { Gaussian::i() })
    } else {
        None
    };
    cur.expect_sym(')')?;
    let source_filter = filter(cur)?;
    let half = if cur.eat_sym('/') {
        if cur.word("2")?.0 != "2" {
            return Err(cur.error("only /2 is supported"));
        }
        true
    } else {
        false
    };
    cur.expect_end()?;
    let mut rc = Cursor::new(&rhs.text, rhs.line, rhs.col)?;
    let mut product = Vec::new();
    while !rc.at_end() {
        product.push(path_factor(&mut rc)?);
    }
    Ok(Table2Entry {
        row,
        exponent,
        line,
        negate,
        half,
        target_filter,
        source_filter,
        arg: Table2Arg { exponent, left_k, right_k, partner },
        product,
        text: rhs.text.clone(),
    })
}

/// `name` or `(x + i y)`: signed sums of arrows with coefficients 1 or i.
fn path_factor(cur: &mut Cursor) -> Result<PathFactor, ParseError> {
    if !cur.eat_sym('(') {
        let (n, _) = cur.ident("an arrow")?;
        return Ok(vec![(Gaussian::from_int(1), n)]);
    }
    let mut out = Vec::new();
    loop {
        let mut c = if cur.eat_sym('-') {
            Gaussian::from_int(-1)
        } else {
            cur.eat_sym('+');
            Gaussian::from_int(1)
        };
        let (mut n, _) = cur.ident("an arrow")?;
        if n == "i" {
            c = c * Gaussian::i();
            n = cur.ident("an arrow")?.0;
        }
        out.push((c, n));
        if cur.eat_sym(')') {
            return Ok(out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_data_is_complete() {
        let r = reference();
        for row in Row::ALL {
            for g in ["r0", "r1"] {
                assert!(r.table1.contains_key(&(row, g.to_string())), "{row} {g}");
            }
            assert_eq!(r.table1.contains_key(&(row, "r0i".to_string())), row.has_partner_generators());
            assert_eq!(r.table2.iter().filter(|e| e.row == row).count(), 4, "{row}");
            assert_eq!(r.table3.iter().filter(|e| e.row == row && e.word == Word::Ab).count(), 4, "{row}");
        }
    }

    #[test]
    fn local_quivers_match_their_rows() {
        for row in Row::ALL {
            let (q, m) = local_quiver(row);
            assert!(q.validate().is_empty());
            assert_eq!(match_row(&q, m.vertex).as_ref(), Some(&m), "{row}");
        }
    }

    #[test]
    fn parallel_pair_roles_follow_names() {
        let mut q = ModulatedQuiver::new();
        let u = q.add_vertex("u", RingLabel::R);
        let v = q.add_vertex("v", RingLabel::R);
        let w = q.add_vertex("w", RingLabel::R);
        let y = q.add_arrow_between("y", u, v, false);
        let x = q.add_arrow_between("x", u, v, false);
        let a2 = q.add_arrow_between("q2", v, w, false);
        let a1 = q.add_arrow_between("q1", v, w, false);
        let m = match_row(&q, v).unwrap();
        assert_eq!((m.b, m.b_i, m.a, m.a_i), (x, Some(y), a1, Some(a2)));
    }

    #[test]
    fn loops_identify_the_two_sides() {
        let mut q = ModulatedQuiver::new();
        let v = q.add_vertex("v", RingLabel::H);
        let g = q.add_arrow_between("g", v, v, false);
        let h = q.add_arrow_between("h", v, v, false);
        let m = match_row(&q, v).unwrap();
        assert_eq!((m.row, m.a, m.b, m.a_i, m.b_i), (Row::HHH, g, g, Some(h), Some(h)));
        assert_eq!(m.ambient(&q).dim(), 4 * 4);
    }

    #[test]
    fn degenerate_shapes() {
        let mut q = ModulatedQuiver::new();
        let v = q.add_vertex("v", RingLabel::H);
        assert_eq!(match_degenerate(&q, v).unwrap().tag, "Hv");
        let c = q.add_vertex("c", RingLabel::C);
        q.add_arrow_between("a", c, v, false);
        assert_eq!(match_degenerate(&q, v).unwrap().tag, "C->Hv");
        let r = q.add_vertex("r", RingLabel::R);
        q.add_arrow_between("b", r, v, false);
        assert!(match_degenerate(&q, v).is_none());
        let mut q = ModulatedQuiver::new();
        let v = q.add_vertex("v", RingLabel::R);
        let x = q.add_vertex("x", RingLabel::R);
        q.add_arrow_between("a", v, x, false);
        assert!(match_degenerate(&q, v).is_none());
        q.add_arrow_between("b", v, x, false);
        assert_eq!(match_degenerate(&q, v).unwrap().tag, "Rv=>R");
    }

    #[test]
    fn quaternion_middle_generators() {
        let (q, m) = local_quiver(Row::RHR);
        let g = m.generators(&q, 0);
        assert_eq!(g.len(), 2);
        let t = q.pair_space(m.a, m.b);
        assert_eq!(g[0].terms[&(m.a, m.b)], t.pure(0, 0).to_vec());
        assert_eq!(g[1].terms[&(m.a, m.b)], t.pure(0, 1).to_vec());
    }
}
