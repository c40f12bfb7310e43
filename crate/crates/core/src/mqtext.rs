//! The `.mq` text format and its JSON mirror.
//!
//! ```text
//! vertices:
//!   u: R
//!   v: C
//! arrows:
//!   beta: u -> v          # kind forced by the endpoints
//!   gamma: v -> v [Cbar]  # C -> C needs C or Cbar
//! relations:
//!   at v: I0
//!   path alpha.beta: full
//!   elem: 1[alpha] (x) 1[beta] - 1/2*i[alpha] (x) i[beta]
//! ```

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::modquiver::{expand_spec, Degree2Ideal, ModulatedQuiver, PathElement, RelationSpec};
use crate::parse::{content, Cursor, Tok};
use crate::rings::{BimoduleKind, RingLabel};
use crate::scalar::{parse_rational, Rational};
use crate::ParseError;

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Vertices,
    Arrows,
    Relations,
}

pub fn parse_mq(text: &str) -> Result<(ModulatedQuiver, Degree2Ideal), ParseError> {
    let mut q = ModulatedQuiver::new();
    let mut section = Section::None;
    let mut specs = Vec::new();
    let mut gens = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let (body, col0) = content(raw);
        if body.is_empty() {
            continue;
        }
        let header = match body {
            "vertices:" => Some(Section::Vertices),
            "arrows:" => Some(Section::Arrows),
            "relations:" => Some(Section::Relations),
            _ => None,
        };
        if let Some(s) = header {
            section = s;
            continue;
        }
        let mut cur = Cursor::new(body, line, col0)?;
        match section {
            Section::None => return Err(cur.error("expected a section header")),
            Section::Vertices => vertex_line(&mut cur, &mut q)?,
            Section::Arrows => arrow_line(&mut cur, &mut q)?,
            Section::Relations => {
                let col = cur.col();
                let spec = relation_line(&mut cur, &q)?;
                let elems = expand_spec(&q, &spec).map_err(|m| ParseError::new(line, col, m))?;
                gens.extend(elems);
                specs.push(spec);
            }
        }
    }
    let ideal = Degree2Ideal::from_elements(&q, specs, &gens);
    Ok((q, ideal))
}

fn vertex_line(cur: &mut Cursor, q: &mut ModulatedQuiver) -> Result<(), ParseError> {
    let (name, col) = cur.word("a vertex name")?;
    if q.vertex_index(&name).is_some() {
        return Err(ParseError::new(cur.line(), col, format!("duplicate vertex '{name}'")));
    }
    cur.expect_sym(':')?;
    let lcol = cur.col();
    let (lab, _) = cur.ident("R, C or H")?;
    let label = RingLabel::parse(&lab).ok_or_else(|| ParseError::new(cur.line(), lcol, format!("unknown ring '{lab}'")))?;
    cur.expect_end()?;
    q.add_vertex(&name, label);
    Ok(())
}

fn arrow_line(cur: &mut Cursor, q: &mut ModulatedQuiver) -> Result<(), ParseError> {
    let line = cur.line();
    let (name, col) = cur.word("an arrow name")?;
    if q.arrow_index(&name).is_some() {
        return Err(ParseError::new(line, col, format!("duplicate arrow '{name}'")));
    }
    cur.expect_sym(':')?;
    let src = vertex_ref(cur, q)?;
    cur.expect_tok(Tok::Arrow)?;
    let tgt = vertex_ref(cur, q)?;
    let tag = if cur.eat_sym('[') {
        let tcol = cur.col();
        let (t, _) = cur.word("a modulation tag")?;
        cur.expect_sym(']')?;
        Some((t, tcol))
    } else {
        None
    };
    cur.expect_end()?;
    let (left, right) = (q.label(tgt), q.label(src));
    let kind = match &tag {
        Some((t, tcol)) if left == RingLabel::C && right == RingLabel::C => match t.as_str() {
            "C" => BimoduleKind::CC,
            "Cbar" => BimoduleKind::CCbar,
            _ => return Err(ParseError::new(line, *tcol, format!("arrow '{name}' between C vertices needs C or Cbar, not {t}"))),
        },
        Some((t, tcol)) => {
            let k = BimoduleKind::between(left, right, None).expect("not C-C");
            if k.tag() != t {
                return Err(ParseError::new(line, *tcol, format!("modulation {t} does not fit {right} -> {left}; expected {}", k.tag())));
            }
            k
        }
        None => BimoduleKind::between(left, right, None)
            .ok_or_else(|| ParseError::new(line, col, format!("arrow '{name}' between C vertices needs [C] or [Cbar]")))?,
    };
    q.add_arrow(&name, src, tgt, kind);
    Ok(())
}

fn vertex_ref(cur: &mut Cursor, q: &ModulatedQuiver) -> Result<usize, ParseError> {
    let (name, col) = cur.word("a vertex name")?;
    q.vertex_index(&name).ok_or_else(|| ParseError::new(cur.line(), col, format!("unknown vertex '{name}'")))
}

fn arrow_ref(cur: &mut Cursor, q: &ModulatedQuiver) -> Result<(usize, usize), ParseError> {
    let (name, col) = cur.word("an arrow name")?;
    let a = q.arrow_index(&name).ok_or_else(|| ParseError::new(cur.line(), col, format!("unknown arrow '{name}'")))?;
    Ok((a, col))
}

fn relation_line(cur: &mut Cursor, q: &ModulatedQuiver) -> Result<RelationSpec, ParseError> {
    let (kw, col) = cur.ident("'at', 'path' or 'elem'")?;
    let spec = match kw.as_str() {
        "at" => {
            let v = vertex_ref(cur, q)?;
            cur.expect_sym(':')?;
            let ecol = cur.col();
            let (e, _) = cur.ident("I0 or I1")?;
            let exponent = match e.as_str() {
                "I0" => 0,
                "I1" => 1,
                _ => return Err(ParseError::new(cur.line(), ecol, format!("expected I0 or I1, found '{e}'"))),
            };
            RelationSpec::AtVertex { vertex: v, exponent }
        }
        "path" => {
            let (outer, _) = arrow_ref(cur, q)?;
            cur.expect_sym('.')?;
            let (inner, icol) = arrow_ref(cur, q)?;
            if !q.is_composable(outer, inner) {
                return Err(ParseError::new(cur.line(), icol, format!("{} is not a path", q.pair_name((outer, inner)))));
            }
            cur.expect_sym(':')?;
            let fcol = cur.col();
            let (f, _) = cur.ident("'full'")?;
            if f != "full" {
                return Err(ParseError::new(cur.line(), fcol, format!("expected 'full', found '{f}'")));
            }
            RelationSpec::FullPath { outer, inner }
        }
        "elem" => {
            cur.expect_sym(':')?;
            RelationSpec::Element(parse_terms(cur, q, &|c: &mut Cursor| arrow_ref(c, q))?)
        }
        _ => return Err(ParseError::new(cur.line(), col, format!("unknown relation keyword '{kw}'"))),
    };
    cur.expect_end()?;
    Ok(spec)
}

/// Resolves the arrow name inside `x[...]`, returning its index and column.
pub(crate) type ArrowResolver<'a> = dyn Fn(&mut Cursor) -> Result<(usize, usize), ParseError> + 'a;

/// `[+|-] term ((+|-) term)*` with `term = [c*]x[a] (x) [c*]y[b]`.
pub(crate) fn parse_terms(cur: &mut Cursor, q: &ModulatedQuiver, resolve: &ArrowResolver) -> Result<PathElement, ParseError> {
    let mut e = PathElement::default();
    let mut first = true;
    loop {
        let neg = if cur.eat_sym('-') {
            true
        } else if cur.eat_sym('+') || first {
            false
        } else {
            break;
        };
        first = false;
        let (c1, x, a) = factor(cur, q, resolve)?;
        cur.expect_tok(Tok::Tensor)?;
        let bcol = cur.col();
        let (c2, y, b) = factor(cur, q, resolve)?;
        if !q.is_composable(a, b) {
            return Err(ParseError::new(cur.line(), bcol, format!("{} is not a path", q.pair_name((a, b)))));
        }
        let mut c = c1 * c2;
        if neg {
            c = -c;
        }
        e.add_pure(q, (a, b), x, y, &c);
        if cur.at_end() {
            break;
        }
    }
    Ok(e)
}

fn factor(cur: &mut Cursor, q: &ModulatedQuiver, resolve: &ArrowResolver) -> Result<(Rational, usize, usize), ParseError> {
    let (w, col) = cur.word("a coefficient or basis element")?;
    let (coef, basis, bcol) = if cur.eat_sym('*') {
        let c = parse_rational(&w).ok_or_else(|| ParseError::new(cur.line(), col, format!("bad rational '{w}'")))?;
        let (b, bcol) = cur.word("a basis element")?;
        (c, b, bcol)
    } else {
        (Rational::one(), w, col)
    };
    cur.expect_sym('[')?;
    let (a, _) = resolve(cur)?;
    cur.expect_sym(']')?;
    let kind = q.arrows[a].kind;
    let x = kind.basis_index(&basis).ok_or_else(|| {
        ParseError::new(cur.line(), bcol, format!("'{basis}' is not a basis element of arrow '{}' ({})", q.arrows[a].name, kind.basis().join(",")))
    })?;
    Ok((coef, x, a))
}

/// Writes an element as quotient-basis pure tensors.
pub fn format_element(q: &ModulatedQuiver, e: &PathElement) -> String {
    let mut s = String::new();
    for (&(a, b), coords) in &e.terms {
        let t = q.pair_space(a, b);
        for (c, &(x, y)) in coords.iter().zip(t.basis_pairs()) {
            if c.is_zero() {
                continue;
            }
            if s.is_empty() {
                if c.is_negative() {
                    s.push('-');
                }
            } else {
                s.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let m = c.abs();
            if !m.is_one() {
                let _ = write!(s, "{m}*");
            }
            let _ = write!(s, "{}[{}] (x) {}[{}]", q.arrows[a].kind.basis()[x], q.arrows[a].name, q.arrows[b].kind.basis()[y], q.arrows[b].name);
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

pub fn serialize_mq(q: &ModulatedQuiver, ideal: &Degree2Ideal) -> String {
    let mut s = String::from("vertices:\n");
    for v in &q.vertices {
        let _ = writeln!(s, "  {}: {}", v.name, v.label);
    }
    s.push_str("arrows:\n");
    for a in &q.arrows {
        let _ = writeln!(s, "  {}: {} -> {} [{}]", a.name, q.vertices[a.source].name, q.vertices[a.target].name, a.kind.tag());
    }
    s.push_str("relations:\n");
    for spec in &ideal.specs {
        match spec {
            RelationSpec::AtVertex { vertex, exponent } => {
                let _ = writeln!(s, "  at {}: I{exponent}", q.vertices[*vertex].name);
            }
            RelationSpec::FullPath { outer, inner } => {
                let _ = writeln!(s, "  path {}: full", q.pair_name((*outer, *inner)));
            }
            RelationSpec::Element(e) if e.is_zero() => {}
            RelationSpec::Element(e) => {
                let _ = writeln!(s, "  elem: {}", format_element(q, e));
            }
        }
    }
    s
}

fn coords_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn quiver_json(q: &ModulatedQuiver) -> Value {
    json!({
        "vertices": q.vertices.iter().map(|v| json!({"name": v.name, "ring": v.label.to_string()})).collect::<Vec<_>>(),
        "arrows": q.arrows.iter().map(|a| json!({
            "name": a.name,
            "source": q.vertices[a.source].name,
            "target": q.vertices[a.target].name,
            "modulation": a.kind.tag(),
            "kind": a.kind.to_string(),
            "basis": a.kind.basis(),
        })).collect::<Vec<_>>(),
    })
}

pub fn element_json(q: &ModulatedQuiver, e: &PathElement) -> Value {
    Value::Array(
        e.terms
            .iter()
            .map(|(&p, c)| {
                json!({
                    "path": [q.arrows[p.0].name, q.arrows[p.1].name],
                    "basis": q.pair_space(p.0, p.1).basis_labels(),
                    "coords": coords_json(c),
                })
            })
            .collect(),
    )
}

pub fn ideal_json(q: &ModulatedQuiver, ideal: &Degree2Ideal) -> Value {
    let relations: Vec<Value> = ideal
        .specs
        .iter()
        .map(|s| match s {
            RelationSpec::AtVertex { vertex, exponent } => {
                json!({"at": q.vertices[*vertex].name, "exponent": exponent})
            }
            RelationSpec::FullPath { outer, inner } => {
                json!({"full": [q.arrows[*outer].name, q.arrows[*inner].name]})
            }
            RelationSpec::Element(e) => json!({"element": element_json(q, e)}),
        })
        .collect();
    let blocks: Vec<Value> = ideal
        .blocks()
        .iter()
        .map(|b| {
            json!({
                "target": q.vertices[b.target].name,
                "source": q.vertices[b.source].name,
                "coordinates": b.space.labels(q),
                "basis": b.subspace.basis().iter().map(|v| coords_json(v)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({"relations": relations, "dimension": ideal.dim(), "blocks": blocks})
}

pub fn presentation_json(q: &ModulatedQuiver, ideal: &Degree2Ideal) -> Value {
    json!({"quiver": quiver_json(q), "ideal": ideal_json(q, ideal)})
}

#[cfg(test)]
mod tests {
    use super::*;

    const SKGEN: &str = "vertices:\n  u: R\n  v: C\n  w: R\narrows:\n  beta: u -> v\n  alpha: v -> w\nrelations:\n  elem: 1[alpha] (x) 1[beta]\n";

    #[test]
    fn parses_and_roundtrips() {
        let (q, ideal) = parse_mq(SKGEN).unwrap();
        assert_eq!(q.vertices.len(), 3);
        assert_eq!(ideal.dim(), 1);
        let text = serialize_mq(&q, &ideal);
        let (q2, ideal2) = parse_mq(&text).unwrap();
        assert_eq!(q, q2);
        assert!(ideal.same_as(&ideal2));
        assert_eq!(ideal.specs, ideal2.specs);
    }

    #[test]
    fn diagnostics_carry_positions() {
        let bad = "vertices:\n  u: R\n  v: C\narrows:\n  a: u -> x\n";
        let e = parse_mq(bad).unwrap_err();
        assert_eq!((e.line, e.col), (5, 11));
        let cc = "vertices:\n  u: C\n  v: C\narrows:\n  a: u -> v\n";
        assert_eq!(parse_mq(cc).unwrap_err().line, 5);
        let tag = "vertices:\n  u: C\n  v: H\narrows:\n  a: u -> v [H]\n";
        let e = parse_mq(tag).unwrap_err();
        assert_eq!((e.line, e.col), (5, 14));
        let basis = "vertices:\n  u: R\n  v: R\n  w: R\narrows:\n  b: u -> v\n  a: v -> w\nrelations:\n  elem: j[a] (x) 1[b]\n";
        assert_eq!(parse_mq(basis).unwrap_err().col, 9);
    }

    #[test]
    fn empty_relations_give_zero_ideal() {
        let (_, ideal) = parse_mq("vertices:\n  u: R\nrelations:\n").unwrap();
        assert_eq!(ideal.dim(), 0);
    }

    #[test]
    fn coefficients_and_signs() {
        let text = "vertices:\n  u: R\n  v: C\n  w: R\narrows:\n  b: u -> v\n  a: v -> w\nrelations:\n  elem: -1/2*i[a] (x) 1[b] + 3*1[a] (x) 1[b]\n";
        let (q, ideal) = parse_mq(text).unwrap();
        let RelationSpec::Element(e) = &ideal.specs[0] else { panic!() };
        let again = serialize_mq(&q, &ideal);
        let (_, i2) = parse_mq(&again).unwrap();
        assert_eq!(i2.specs[0], RelationSpec::Element(e.clone()));
    }
}
