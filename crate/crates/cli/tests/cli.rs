use std::process::{Command, Output};

use serde_json::Value;

fn example(name: &str) -> String {
    format!("{}/../core/examples/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_complexgentle")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--out", "json"]);
    let o = run(&all);
    (serde_json::from_str(&stdout(&o)).unwrap(), o.status.code().unwrap())
}

#[test]
fn classify_uniform_example() {
    let o = run(&["classify", &example("uniform_r.mq")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last(), Some("UniformR"));
    let (v, _) = json(&["classify", &example("special_r.mq")]);
    assert_eq!(v["type"], "SpecialType");
}

#[test]
fn complexify_skgen_as_json() {
    let (v, code) = json(&["complexify", &example("skgen.mq")]);
    assert_eq!(code, 0);
    assert_eq!(v["gamma"]["vertices"].as_array().unwrap().len(), 4);
    let rels = v["relations"].as_array().unwrap();
    assert_eq!(rels.len(), 1);
    let paths: Vec<&Value> = rels[0].as_array().unwrap().iter().map(|t| &t["path"]).collect();
    assert_eq!(paths, [&serde_json::json!(["alpha", "beta"]), &serde_json::json!(["alpha_bar", "beta_bar"])]);
}

#[test]
fn negative_verdicts_exit_one() {
    assert_eq!(run(&["classify", &example("skgen.mq")]).status.code(), Some(1));
    assert_eq!(run(&["to-clannish", &example("uniform_r.mq")]).status.code(), Some(1));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(run(&["classify", "/no/such/file.mq"]).status.code(), Some(2));
    assert_eq!(run(&["verify-tables", "--table", "4"]).status.code(), Some(2));
    assert_eq!(run(&["classify", &example("five_vertex.slq")]).status.code(), Some(2));
    assert_eq!(run(&["roundtrip"]).status.code(), Some(2));
}

#[test]
fn clannish_conversions() {
    let o = run(&["to-clannish", &example("special_r.mq")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("sv at v: x^2-1"));
    let (v, code) = json(&["from-clannish", &example("five_vertex.slq")]);
    assert_eq!(code, 0);
    let kinds: Vec<&str> = v["presentation"]["quiver"]["arrows"].as_array().unwrap().iter().map(|a| a["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds.last(), Some(&"C-C(bar)"));
    assert_eq!(run(&["check-gentle", &example("five_vertex.slq")]).status.code(), Some(0));
}

#[test]
fn roundtrips() {
    assert_eq!(run(&["roundtrip", &example("skgen_full.mq")]).status.code(), Some(0));
    let (v, code) = json(&["roundtrip", "--seed", "11", "--count", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], 10);
}

#[test]
fn table_one_verifies() {
    let o = run(&["verify-tables", "--table", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "table 1: 18/18 entries match\n");
}

#[test]
fn table_mismatches_are_reported() {
    let (v, code) = json(&["verify-tables", "--table", "3"]);
    assert_eq!(code, 1);
    let failed: Vec<String> = v["sections"][0]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["passed"] == false)
        .map(|e| format!("{} {}", e["row"].as_str().unwrap(), e["entry"].as_str().unwrap()))
        .collect();
    assert_eq!(failed, ["CHR id,id asb", "CHC id,id asb"]);
    assert_eq!(v["sections"][1]["passed"], 72);
}

#[test]
fn output_is_deterministic() {
    let path = example("special_r.mq");
    for args in [vec!["normalize", path.as_str(), "--out", "json"], vec!["roundtrip", "--seed", "5", "--count", "4"]] {
        assert_eq!(run(&args).stdout, run(&args).stdout);
    }
}
