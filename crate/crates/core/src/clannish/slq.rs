//! The `.slq` text format.
//!
//! ```text
//! vertices:
//!   1
//!   2
//! special_loops:
//!   s1 at 1: x^2+1
//! arrows:
//!   a1: 1 -> 2 [twist conj]   # the twist defaults to id
//! relations Z:
//!   a2.a1
//!   a2.s2.a1                   # a special loop inside a relation
//!   a2.s^1.a1                  # the loop at the middle vertex, exponent 0 or 1
//! ```

use std::fmt::Write as _;

use serde_json::{json, Value};

use super::{LoopTag, SemilinearPresentation, SlArrow, SpecialLoop, Twist, Word};
use crate::parse::{content, Cursor, Tok};
use crate::ParseError;

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Vertices,
    Loops,
    Arrows,
    Relations,
}

pub fn parse_slq(text: &str) -> Result<SemilinearPresentation, ParseError> {
    let mut p = SemilinearPresentation::default();
    let mut section = Section::None;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let (body, col0) = content(raw);
        if body.is_empty() {
            continue;
        }
        let header = match body {
            "vertices:" => Some(Section::Vertices),
            "special_loops:" => Some(Section::Loops),
            "arrows:" => Some(Section::Arrows),
            "relations Z:" => Some(Section::Relations),
            _ => None,
        };
        if let Some(s) = header {
            section = s;
            continue;
        }
        let mut cur = Cursor::new(body, line, col0)?;
        match section {
            Section::None => return Err(cur.error("expected a section header")),
            Section::Vertices => {
                let (name, col) = cur.word("a vertex name")?;
                cur.expect_end()?;
                if p.vertex_index(&name).is_some() {
                    return Err(ParseError::new(line, col, format!("duplicate vertex '{name}'")));
                }
                p.vertices.push(name);
            }
            Section::Loops => loop_line(&mut cur, &mut p)?,
            Section::Arrows => arrow_line(&mut cur, &mut p)?,
            Section::Relations => {
                let w = relation_line(&mut cur, &p)?;
                p.relations.push(w);
            }
        }
    }
    Ok(p)
}

fn vertex_ref(cur: &mut Cursor, p: &SemilinearPresentation) -> Result<usize, ParseError> {
    let (name, col) = cur.word("a vertex name")?;
    p.vertex_index(&name).ok_or_else(|| ParseError::new(cur.line(), col, format!("unknown vertex '{name}'")))
}

fn name_taken(p: &SemilinearPresentation, name: &str) -> bool {
    p.arrow_index(name).is_some() || p.loop_index(name).is_some()
}

fn loop_line(cur: &mut Cursor, p: &mut SemilinearPresentation) -> Result<(), ParseError> {
    let line = cur.line();
    let (name, col) = cur.ident("a loop name")?;
    if name_taken(p, &name) {
        return Err(ParseError::new(line, col, format!("duplicate name '{name}'")));
    }
    match cur.next() {
        Some(Tok::Ident(s)) if s == "at" => {}
        _ => return Err(ParseError::new(line, col, "expected 'at' after the loop name")),
    }
    let vcol = cur.col();
    let v = vertex_ref(cur, p)?;
    if let Some(l) = p.loop_at(v) {
        return Err(ParseError::new(line, vcol, format!("duplicate special loop at '{}' (already '{}')", p.vertices[v], p.loops[l].name)));
    }
    cur.expect_sym(':')?;
    let tcol = cur.col();
    let mut poly = String::new();
    while let Some(t) = cur.next() {
        match t {
            Tok::Ident(s) | Tok::Num(s) => poly.push_str(&s),
            Tok::Sym(c) => poly.push(c),
            other => return Err(ParseError::new(line, tcol, format!("unexpected {} in the polynomial", other.describe()))),
        }
    }
    let tag = match poly.as_str() {
        "x^2-1" => LoopTag::MinusOne,
        "x^2+1" => LoopTag::PlusOne,
        _ => return Err(ParseError::new(line, tcol, format!("the polynomial must be x^2-1 or x^2+1, not '{poly}'"))),
    };
    p.loops.push(SpecialLoop { name, vertex: v, tag });
    Ok(())
}

fn arrow_line(cur: &mut Cursor, p: &mut SemilinearPresentation) -> Result<(), ParseError> {
    let line = cur.line();
    let (name, col) = cur.word("an arrow name")?;
    if name_taken(p, &name) {
        return Err(ParseError::new(line, col, format!("duplicate name '{name}'")));
    }
    cur.expect_sym(':')?;
    let source = vertex_ref(cur, p)?;
    cur.expect_tok(Tok::Arrow)?;
    let target = vertex_ref(cur, p)?;
    let mut twist = Twist::Id;
    if cur.eat_sym('[') {
        match cur.next() {
            Some(Tok::Ident(s)) if s == "twist" => {}
            _ => return Err(cur.error("expected 'twist'")),
        }
        let tcol = cur.col();
        twist = match cur.ident("id or conj")?.0.as_str() {
            "id" => Twist::Id,
            "conj" => Twist::Conj,
            t => return Err(ParseError::new(line, tcol, format!("unknown twist '{t}'"))),
        };
        cur.expect_sym(']')?;
    }
    cur.expect_end()?;
    p.arrows.push(SlArrow { name, source, target, twist });
    Ok(())
}

/// One step of a relation: an ordinary arrow or a loop exponent.
enum Step {
    Arrow(usize),
    Loop(Option<usize>, bool),
}

fn relation_line(cur: &mut Cursor, p: &SemilinearPresentation) -> Result<Word, ParseError> {
    let line = cur.line();
    let start = cur.col();
    let mut steps = Vec::new();
    loop {
        let (name, col) = cur.word("an arrow or loop name")?;
        let exponent = if cur.eat_sym('^') {
            match cur.word("0 or 1")?.0.as_str() {
                "0" => Some(false),
                "1" => Some(true),
                e => return Err(ParseError::new(line, col, format!("loop exponent must be 0 or 1, not {e}"))),
            }
        } else {
            None
        };
        let step = if let Some(a) = p.arrow_index(&name).filter(|_| exponent.is_none()) {
            Step::Arrow(a)
        } else if let Some(l) = p.loop_index(&name) {
            Step::Loop(Some(l), exponent.unwrap_or(true))
        } else if let Some(on) = exponent.filter(|_| name == "s") {
            Step::Loop(None, on)
        } else {
            return Err(ParseError::new(line, col, format!("unknown arrow or loop '{name}'")));
        };
        steps.push((step, col));
        if cur.at_end() {
            break;
        }
        cur.expect_sym('.')?;
    }
    let mut arrows: Vec<usize> = Vec::new();
    let mut loops = vec![false];
    for (k, (step, col)) in steps.iter().enumerate() {
        match step {
            Step::Arrow(a) => {
                let ar = &p.arrows[*a];
                if let Some(&prev) = arrows.last() {
                    if p.arrows[prev].source != ar.target {
                        return Err(ParseError::new(line, *col, format!("'{}' does not compose with '{}'", p.arrows[prev].name, ar.name)));
                    }
                }
                arrows.push(*a);
                loops.push(false);
            }
            Step::Loop(l, on) => {
                if k == 0 || k + 1 == steps.len() {
                    return Err(ParseError::new(line, *col, "a relation may not start or end with a special loop"));
                }
                if matches!(steps[k - 1].0, Step::Loop(..)) {
                    return Err(ParseError::new(line, *col, "a relation may not contain s.s"));
                }
                let v = p.arrows[*arrows.last().expect("an arrow precedes")].source;
                if let Some(l) = l {
                    if p.loops[*l].vertex != v {
                        return Err(ParseError::new(line, *col, format!("loop '{}' is not at '{}'", p.loops[*l].name, p.vertices[v])));
                    }
                } else if *on && p.loop_at(v).is_none() {
                    return Err(ParseError::new(line, *col, format!("no special loop at '{}'", p.vertices[v])));
                }
                *loops.last_mut().expect("loops") = *on;
            }
        }
    }
    if arrows.len() + loops.iter().filter(|&&l| l).count() < 2 {
        return Err(ParseError::new(line, start, "a relation needs length at least two"));
    }
    let target = p.arrows[arrows[0]].target;
    let source = p.arrows[*arrows.last().expect("non-empty")].source;
    Ok(Word { target, source, arrows, loops })
}

pub fn serialize_slq(p: &SemilinearPresentation) -> String {
    let mut s = String::from("vertices:\n");
    for v in &p.vertices {
        let _ = writeln!(s, "  {v}");
    }
    if !p.loops.is_empty() {
        s.push_str("special_loops:\n");
        for l in &p.loops {
            let _ = writeln!(s, "  {} at {}: {}", l.name, p.vertices[l.vertex], l.tag.text());
        }
    }
    s.push_str("arrows:\n");
    for a in &p.arrows {
        let _ = writeln!(s, "  {}: {} -> {} [twist {}]", a.name, p.vertices[a.source], p.vertices[a.target], a.twist.name());
    }
    s.push_str("relations Z:\n");
    for r in &p.relations {
        let _ = writeln!(s, "  {}", r.name(p));
    }
    s
}

pub fn presentation_json(p: &SemilinearPresentation) -> Value {
    let partition = p.partition();
    let names = |vs: Option<&Vec<usize>>| -> Vec<String> { vs.map(|v| v.iter().map(|&i| p.vertices[i].clone()).collect()).unwrap_or_default() };
    json!({
        "vertices": p.vertices,
        "special_loops": p.loops.iter().map(|l| json!({
            "name": l.name, "vertex": p.vertices[l.vertex], "polynomial": l.tag.text(), "twist": "conj",
        })).collect::<Vec<_>>(),
        "arrows": p.arrows.iter().map(|a| json!({
            "name": a.name, "source": p.vertices[a.source], "target": p.vertices[a.target], "twist": a.twist.name(),
        })).collect::<Vec<_>>(),
        "relations": p.relations.iter().map(|r| json!({
            "path": r.name(p),
            "arrows": r.arrows.iter().map(|&a| p.arrows[a].name.clone()).collect::<Vec<_>>(),
            "loops": r.loops,
        })).collect::<Vec<_>>(),
        "partition": {
            "R": names(partition.get(&crate::rings::RingLabel::R)),
            "H": names(partition.get(&crate::rings::RingLabel::H)),
            "C": names(partition.get(&crate::rings::RingLabel::C)),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "vertices:\n  u\n  v\nspecial_loops:\n  sv at v: x^2-1\narrows:\n  b: u -> v\n  a: v -> v [twist conj]\nrelations Z:\n  a.b\n  a.sv.b\n  a.s^0.b\n";

    #[test]
    fn round_trips_through_text() {
        let p = parse_slq(EXAMPLE).unwrap();
        assert_eq!(p.relations.len(), 3);
        assert!(p.relations[1].loops[1]);
        assert_eq!(p.relations[2], p.relations[0]);
        assert_eq!(parse_slq(&serialize_slq(&p)).unwrap(), p);
    }

    #[test]
    fn diagnostics() {
        let dup = "vertices:\n  v\nspecial_loops:\n  s at v: x^2-1\n  t at v: x^2+1\n";
        assert!(parse_slq(dup).unwrap_err().message.contains("duplicate special loop"));
        let end = "vertices:\n  v\nspecial_loops:\n  s at v: x^2-1\narrows:\n  a: v -> v\nrelations Z:\n  s.a\n";
        assert!(parse_slq(end).unwrap_err().message.contains("start or end"));
        let unknown = "vertices:\n  v\narrows:\n  a: v -> w\n";
        assert!(parse_slq(unknown).unwrap_err().message.contains("unknown vertex"));
    }
}
