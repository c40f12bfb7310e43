use std::collections::BTreeSet;

use complexgentle::complexify::{complexify_ideal, ComplexPresentation};
use complexgentle::gentle::{classify_algebra, d_transform, is_locally_gentle, AlgebraType};
use complexgentle::modquiver::{Degree2Ideal, ModulatedQuiver};
use complexgentle::mqtext::parse_mq;

fn load(name: &str) -> (ModulatedQuiver, Degree2Ideal) {
    let path = format!("{}/examples/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_mq(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn zero_paths(j: &ComplexPresentation) -> BTreeSet<String> {
    is_locally_gentle(j).paths_in_relations.iter().map(|&p| j.gamma.path_name(p)).collect()
}

fn names(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

#[test]
fn skew_gentle_complexification() {
    let (q, ideal) = load("skgen.mq");
    let j = complexify_ideal(&q, &ideal);
    let vs: Vec<&str> = j.gamma.vertices.iter().map(|v| v.name.as_str()).collect();
    assert_eq!(vs, ["u", "v", "v_bar", "w"]);
    assert_eq!(j.dim(), 1);
    let gens: Vec<String> = j.generators().iter().map(|c| complexgentle::complexify::format_combo(&j.gamma, c)).collect();
    assert_eq!(gens, ["alpha.beta + alpha_bar.beta_bar"]);
    assert!(!is_locally_gentle(&j).passes);
    assert!(matches!(classify_algebra(&q, &ideal).kind, AlgebraType::NotClassified { .. }));
}

#[test]
fn full_relation_through_complex_vertex() {
    let (q, ideal) = load("skgen_full.mq");
    let av = classify_algebra(&q, &ideal);
    assert_eq!(av.kind, AlgebraType::SpecialType);
    let j = complexify_ideal(&q, &ideal);
    let j = d_transform(&q, &j, &av.vertices).unwrap();
    assert!(is_locally_gentle(&j).passes);
}

#[test]
fn string_algebra_relations() {
    let (q, ideal) = load("r_string.mq");
    let j = complexify_ideal(&q, &ideal);
    assert_eq!(j.dim(), 5);
    assert!(is_locally_gentle(&j).monomial);
    assert_eq!(zero_paths(&j), names(&["beta.gamma", "alpha.beta", "alpha.beta_i", "alpha_bar.beta", "alpha_bar.beta_i"]));
}

#[test]
fn uniform_and_special_double_arrows() {
    let expect = names(&["alpha.beta", "alpha_i.beta_i"]);
    for (file, kind) in [("uniform_r.mq", AlgebraType::UniformR), ("special_r.mq", AlgebraType::SpecialType)] {
        let (q, ideal) = load(file);
        let av = classify_algebra(&q, &ideal);
        assert_eq!(av.kind, kind, "{file}");
        let j = d_transform(&q, &complexify_ideal(&q, &ideal), &av.vertices).unwrap();
        let r = is_locally_gentle(&j);
        assert!(r.passes, "{file}: {r:?}");
        assert_eq!(j.dim(), 2);
        assert_eq!(zero_paths(&j), expect, "{file}");
    }
}
