use complexgentle::clannish::{
    build_qb, build_qs, check_gentle_type, induced_ideal, parse_slq, phi_word, relation_summand, roundtrip_check, serialize_slq, twist_change_iso,
    LoopTag, SemilinearPresentation, SlArrow, SpecialLoop, Twist, Word,
};
use complexgentle::gentle::{classify_algebra, AlgebraType};
use complexgentle::modquiver::{Degree2Ideal, ModulatedQuiver, RelationSpec};
use complexgentle::mqtext::parse_mq;
use complexgentle::random::{generate, gentle_type, Condition};
use complexgentle::tables::{local_quiver, ElementText, Row};
use complexgentle::verify::local_presentation;
use complexgentle::{BimoduleKind, Gaussian, RingLabel};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn example(name: &str) -> String {
    std::fs::read_to_string(format!("{}/examples/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn load_mq(name: &str) -> (ModulatedQuiver, Degree2Ideal) {
    parse_mq(&example(name)).unwrap()
}

fn text(s: &str) -> ElementText {
    ElementText { text: s.into(), line: 1, col: 1 }
}

#[test]
fn five_vertex_example_parses_and_doubles() {
    let p = parse_slq(&example("five_vertex.slq")).unwrap();
    let part = p.partition();
    let names = |l: RingLabel| part[&l].iter().map(|&v| p.vertices[v].as_str()).collect::<Vec<_>>();
    assert_eq!(names(RingLabel::H), ["1", "2"]);
    assert_eq!(names(RingLabel::R), ["3"]);
    assert_eq!(names(RingLabel::C), ["4", "5"]);

    let b = build_qb(&p);
    let labels: Vec<RingLabel> = b.quiver.vertices.iter().map(|v| v.label).collect();
    assert_eq!(labels, [RingLabel::H, RingLabel::H, RingLabel::R, RingLabel::C, RingLabel::C]);
    let arrows: Vec<(&str, BimoduleKind)> = b.quiver.arrows.iter().map(|a| (a.name.as_str(), a.kind)).collect();
    assert_eq!(
        arrows,
        [("a1", BimoduleKind::HH), ("a1_i", BimoduleKind::HH), ("a2", BimoduleKind::RH), ("a3", BimoduleKind::CR), ("a4", BimoduleKind::CCbar)]
    );
    assert!(check_gentle_type(&p).passes);
}

#[test]
fn gentle_type_clauses() {
    let mut p = parse_slq(&example("five_vertex.slq")).unwrap();
    p.relations.truncate(1);
    let r = check_gentle_type(&p);
    assert!(!r.passes);
    assert!(!r.clauses.iter().find(|c| c.name == "G2").unwrap().holds, "a3 follows a2 twice outside Z: a3.s3 and a3.a2");

    let long = "vertices:\n  1\n  2\n  3\n  4\narrows:\n  a: 1 -> 2\n  b: 2 -> 3\n  c: 3 -> 4\nrelations Z:\n  c.b.a\n";
    let r = check_gentle_type(&parse_slq(long).unwrap());
    assert!(!r.clauses.iter().find(|c| c.name == "G3").unwrap().holds);

    let fan = "vertices:\n  0\n  1\n  2\n  3\narrows:\n  a: 0 -> 1\n  b: 0 -> 2\n  c: 0 -> 3\n";
    let r = check_gentle_type(&parse_slq(fan).unwrap());
    assert!(!r.clauses.iter().find(|c| c.name == "G1").unwrap().holds);
}

#[test]
fn empty_relations_give_the_plain_algebra() {
    let p = parse_slq("vertices:\n  1\n  2\nspecial_loops:\n  s1 at 1: x^2-1\narrows:\n  a: 1 -> 2\n").unwrap();
    assert!(p.relations.is_empty());
    let b = build_qb(&p);
    assert_eq!(induced_ideal(&p, &b).unwrap().dim(), 0);
}

#[test]
fn phi_on_the_worked_rows() {
    let p = local_presentation(Row::RRH, Twist::Id, Twist::Id);
    let b = build_qb(&p);
    let (q, m) = local_quiver(Row::RRH);
    let x = phi_word(&p, &b, &Gaussian::from_int(1), &Word::pair(&p, 1, 0, false)).unwrap();
    assert_eq!(x.paths, m.instantiate(&q, &text("1[a] (x) 1[b] + j[a] (x) 1[b_i]")));

    let p = local_presentation(Row::RHR, Twist::Id, Twist::Id);
    let b = build_qb(&p);
    let (q, m) = local_quiver(Row::RHR);
    let x = phi_word(&p, &b, &Gaussian::from_int(1), &Word::pair(&p, 1, 0, true)).unwrap();
    assert_eq!(x.paths, m.instantiate(&q, &text("k[a] (x) 1[b]")));
}

#[test]
fn induced_summands_follow_the_twists() {
    let p = local_presentation(Row::RHR, Twist::Conj, Twist::Conj);
    let b = build_qb(&p);
    assert_eq!(relation_summand(&p, &b, &Word::pair(&p, 1, 0, false)), Ok(Some(0)));

    let mut p = local_presentation(Row::HRH, Twist::Conj, Twist::Id);
    p.relations.push(Word::pair(&p, 1, 0, false));
    let b = build_qb(&p);
    let (q, m) = local_quiver(Row::HRH);
    let ideal = induced_ideal(&p, &b).unwrap();
    assert_eq!(ideal.local(&b.quiver, 1).ideal, m.summand(&q, 1));
    let r1 = m.instantiate(&q, &text("1[a] (x) 1[b] + j[a] (x) j[b]"));
    assert!(ideal.contains(&b.quiver, &r1));
}

#[test]
fn complex_middle_vertex_takes_the_whole_bimodule() {
    let (q, ideal) = load_mq("skgen_full.mq");
    let report = roundtrip_check(&q, &ideal).unwrap();
    assert!(report.passes(), "{:?}", report.details);
    assert_eq!(report.pair.twisted.relation_names(), ["alpha.beta"]);
    let pair = q.pairs_through(1)[0];
    assert_eq!(ideal.dim(), q.pair_space(pair.0, pair.1).dim());
}

#[test]
fn special_example_reverses_to_three_loops() {
    let (q, ideal) = load_mq("special_r.mq");
    let av = classify_algebra(&q, &ideal);
    assert_eq!(av.kind, AlgebraType::SpecialType);
    let pair = build_qs(&q, &ideal, &av).unwrap();
    let p = &pair.twisted;
    assert_eq!(
        p.loops.iter().map(|l| (l.name.as_str(), l.tag)).collect::<Vec<_>>(),
        [("su", LoopTag::MinusOne), ("sv", LoopTag::MinusOne), ("sw", LoopTag::MinusOne)]
    );
    assert_eq!(p.arrows.iter().map(|a| a.name.as_str()).collect::<Vec<_>>(), ["beta", "alpha"]);
    // I_v = I_v^0 for these relations, so no loop enters Z'.
    let (lq, m) = local_quiver(Row::RRR);
    let lideal = Degree2Ideal::generate(&lq, vec![RelationSpec::AtVertex { vertex: m.vertex, exponent: 0 }]).unwrap();
    assert_eq!(lideal.local(&lq, m.vertex).ideal, ideal.local(&q, 1).ideal);
    assert_eq!(p.relation_names(), ["alpha.beta"]);
    assert!(roundtrip_check(&q, &ideal).unwrap().passes());

    let (q, ideal) = load_mq("uniform_r.mq");
    assert!(build_qs(&q, &ideal, &classify_algebra(&q, &ideal)).is_err());
}

#[test]
fn second_summand_puts_the_loop_into_the_relation() {
    let (q, m) = local_quiver(Row::RRR);
    let ideal = Degree2Ideal::generate(&q, vec![RelationSpec::AtVertex { vertex: m.vertex, exponent: 1 }]).unwrap();
    let av = classify_algebra(&q, &ideal);
    let pair = build_qs(&q, &ideal, &av).unwrap();
    assert_eq!(pair.twisted.relation_names(), ["a.sv.b"]);
    assert_eq!(pair.gentle.relation_names(), ["a.b"]);
    let twists: Vec<Twist> = pair.gentle.arrows.iter().map(|a| a.twist).collect();
    assert_eq!(twists, [Twist::Id, Twist::Conj], "b ends its special path, a leaves the I^1 vertex");
    let report = twist_change_iso(&pair.gentle, &pair.twisted);
    assert_eq!(report.images, [("(1) a.b".to_string(), "(1) a.sv.b".to_string())]);
    assert!(report.passes());
    assert!(roundtrip_check(&q, &ideal).unwrap().passes());
}

#[test]
fn all_complex_input_is_its_own_clannish_form() {
    let src = "vertices:\n  u: C\n  v: C\n  w: C\narrows:\n  b: u -> v [C]\n  a: v -> w [Cbar]\nrelations:\n  path a.b: full\n";
    let (q, ideal) = parse_mq(src).unwrap();
    let pair = build_qs(&q, &ideal, &classify_algebra(&q, &ideal)).unwrap();
    assert!(pair.gentle.loops.is_empty());
    assert_eq!(pair.gentle.relations, pair.twisted.relations);
    assert_eq!(pair.twisted.arrows[1].twist, Twist::Conj);
    let report = twist_change_iso(&pair.gentle, &pair.twisted);
    assert!(report.images.iter().all(|(x, y)| x == y));
    assert!(roundtrip_check(&q, &ideal).unwrap().passes());
}

fn real_cycle(twists: [Twist; 3]) -> SemilinearPresentation {
    let mut p = SemilinearPresentation { vertices: vec!["x".into(), "y".into(), "z".into()], ..Default::default() };
    for v in 0..3 {
        p.loops.push(SpecialLoop { name: format!("s{}", p.vertices[v]), vertex: v, tag: LoopTag::MinusOne });
    }
    for (k, (name, s, t)) in [("c", 2, 0), ("a", 0, 1), ("b", 1, 2)].into_iter().enumerate() {
        p.arrows.push(SlArrow { name: name.into(), source: s, target: t, twist: twists[k] });
    }
    for (outer, inner) in [(1, 0), (2, 1), (0, 2)] {
        p.relations.push(Word::pair(&p, outer, inner, false));
    }
    p
}

#[test]
fn cycles_start_at_the_least_arrow_name() {
    for twists in [[Twist::Id; 3], [Twist::Conj, Twist::Id, Twist::Conj]] {
        let p = real_cycle(twists);
        assert!(check_gentle_type(&p).passes);
        let b = build_qb(&p);
        let ideal = induced_ideal(&p, &b).unwrap();
        let report = roundtrip_check(&b.quiver, &ideal).unwrap();
        assert!(report.passes(), "{:?}", report.details);
        assert_eq!(report.pair.cycles, [true]);
        let path: Vec<&str> = report.pair.special_paths[0].iter().map(|&a| report.pair.gentle.arrows[a].name.as_str()).collect();
        assert_eq!(path, ["a", "c", "b"]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_special_instances_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = generate(Condition::Special, &mut rng, 6);
        let report = roundtrip_check(&inst.quiver, &inst.ideal).unwrap();
        prop_assert!(report.quiver_match && report.ideal_match, "{:?}", report.details);
        prop_assert!(report.gentle_type.passes);
        prop_assert!(report.twist.passes());
    }

    #[test]
    fn clannish_text_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = gentle_type(&mut rng, 8);
        prop_assert_eq!(parse_slq(&serialize_slq(&p)).unwrap(), p.clone());
        let b = build_qb(&p);
        let ideal = induced_ideal(&p, &b).unwrap();
        let pair = build_qs(&b.quiver, &ideal, &classify_algebra(&b.quiver, &ideal)).unwrap();
        prop_assert_eq!(parse_slq(&serialize_slq(&pair.twisted)).unwrap(), pair.twisted);
    }
}
