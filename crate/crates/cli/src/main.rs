use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use complexgentle::clannish::{
    self, build_qb, build_qs, check_gentle_type, induced_ideal, parse_slq, roundtrip_check, serialize_slq, SemilinearPresentation,
};
use complexgentle::complexify::{self, complexify_ideal, format_combo, ComplexPresentation};
use complexgentle::gentle::{self, classify_algebra, classify_vertices, d_transform, is_locally_gentle, AlgebraType};
use complexgentle::modquiver::{Degree2Ideal, ModulatedQuiver};
use complexgentle::mqtext::{self, parse_mq, serialize_mq};
use complexgentle::random::{instances, Condition};
use complexgentle::verify::{self, Check};

#[derive(Parser)]
#[command(name = "complexgentle", version, about = "Complexification and gentleness of real modulated quivers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    out: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an .mq or .slq file and print it back in canonical form.
    Parse { file: PathBuf },
    /// The complex quiver Gamma and the relations J_2 of an .mq file.
    Complexify { file: PathBuf },
    /// Complexify, then rewrite the parallel pairs at specially gentle vertices.
    Normalize { file: PathBuf },
    /// Local gentleness of an .mq file, or the gentle-type conditions of an .slq file.
    CheckGentle { file: PathBuf },
    /// Per-vertex verdicts and the algebra type of an .mq file.
    Classify { file: PathBuf },
    /// The clannish presentation of an .mq file of special type.
    ToClannish { file: PathBuf },
    /// The modulated quiver and induced ideal of an .slq file.
    FromClannish { file: PathBuf },
    /// to-clannish followed by from-clannish, on a file or on seeded random instances.
    Roundtrip {
        file: Option<PathBuf>,
        #[arg(long, conflicts_with = "file")]
        seed: Option<u64>,
        #[arg(long, default_value_t = 20, requires = "seed")]
        count: usize,
        #[arg(long, default_value_t = 8, requires = "seed")]
        max_vertices: usize,
    },
    /// Recompute the reference tables and diff them against the embedded values.
    VerifyTables {
        #[arg(long, default_value = "all", value_parser = ["1", "2", "3", "all"])]
        table: String,
    },
}

/// A finished report: the exit status plus both renderings.
struct Report {
    ok: bool,
    text: String,
    json: Value,
}

enum Failure {
    Usage(String),
    Negative(String),
}

type Outcome = Result<Report, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_mq(path: &Path) -> Result<(ModulatedQuiver, Degree2Ideal), Failure> {
    parse_mq(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_slq(path: &Path) -> Result<SemilinearPresentation, Failure> {
    parse_slq(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn is_slq(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "slq")
}

fn complex_text(p: &ComplexPresentation) -> String {
    let g = &p.gamma;
    let mut s = String::from("vertices:\n");
    for v in &g.vertices {
        let _ = writeln!(s, "  {}", v.name);
    }
    s.push_str("arrows:\n");
    for a in &g.arrows {
        let _ = writeln!(s, "  {}: {} -> {}", a.name, g.vertices[a.source].name, g.vertices[a.target].name);
    }
    let _ = writeln!(s, "relations (dimension {}):", p.dim());
    for c in p.generators() {
        let _ = writeln!(s, "  {}", format_combo(g, &c));
    }
    s
}

fn parse(file: &Path) -> Outcome {
    if is_slq(file) {
        let p = load_slq(file)?;
        Ok(Report { ok: true, text: serialize_slq(&p), json: clannish::presentation_json(&p) })
    } else {
        let (q, ideal) = load_mq(file)?;
        Ok(Report { ok: true, text: serialize_mq(&q, &ideal), json: mqtext::presentation_json(&q, &ideal) })
    }
}

fn complexify(file: &Path) -> Outcome {
    let (q, ideal) = load_mq(file)?;
    let j = complexify_ideal(&q, &ideal);
    Ok(Report { ok: true, text: complex_text(&j), json: complexify::presentation_json(&q, &j) })
}

fn normalize(file: &Path) -> Outcome {
    let (q, ideal) = load_mq(file)?;
    let j = complexify_ideal(&q, &ideal);
    let d = d_transform(&q, &j, &classify_vertices(&q, &ideal)).map_err(Failure::Negative)?;
    Ok(Report { ok: true, text: complex_text(&d), json: complexify::presentation_json(&q, &d) })
}

fn check_gentle(file: &Path) -> Outcome {
    if is_slq(file) {
        let p = load_slq(file)?;
        let r = check_gentle_type(&p);
        let clauses: Vec<Value> = r.clauses.iter().map(|c| json!({"clause": c.name, "holds": c.holds, "detail": c.detail})).collect();
        let text = format!("{}{}\n", r, if r.passes { "gentle type" } else { "not of gentle type" });
        return Ok(Report { ok: r.passes, text, json: json!({"gentle_type": r.passes, "clauses": clauses}) });
    }
    let (q, ideal) = load_mq(file)?;
    let j = complexify_ideal(&q, &ideal);
    let d = d_transform(&q, &j, &classify_vertices(&q, &ideal)).map_err(Failure::Negative)?;
    let r = is_locally_gentle(&d);
    let mut text = String::new();
    for (&v, fails) in &r.vertex_failures {
        let _ = writeln!(text, "{}: {}", d.gamma.vertices[v].name, fails.join("; "));
    }
    if !r.monomial {
        let _ = writeln!(text, "relations are not monomial in {} block(s)", r.non_monomial.len());
    }
    text.push_str(if r.passes { "locally gentle\n" } else { "not locally gentle\n" });
    Ok(Report { ok: r.passes, text, json: gentle::report_json(&d, &r) })
}

fn classify(file: &Path) -> Outcome {
    let (q, ideal) = load_mq(file)?;
    let av = classify_algebra(&q, &ideal);
    let name = match &av.kind {
        AlgebraType::UniformR => "UniformR",
        AlgebraType::UniformH => "UniformH",
        AlgebraType::SpecialType => "SpecialType",
        AlgebraType::NotClassified { .. } => "NotClassified",
    };
    let mut text = String::new();
    for vv in &av.vertices {
        let verdicts: Vec<String> = vv.verdicts.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(text, "{}: {}", q.vertices[vv.vertex].name, verdicts.join(" / "));
    }
    let _ = writeln!(text, "{name}");
    let ok = !matches!(av.kind, AlgebraType::NotClassified { .. });
    Ok(Report { ok, text, json: gentle::algebra_json(&q, &ideal, &av) })
}

fn to_clannish(file: &Path) -> Outcome {
    let (q, ideal) = load_mq(file)?;
    let pair = build_qs(&q, &ideal, &classify_algebra(&q, &ideal)).map_err(Failure::Negative)?;
    let mut text = serialize_slq(&pair.twisted);
    for (from, to) in &pair.renamed {
        let _ = writeln!(text, "# partner arrow {from} returns as {to}");
    }
    let json = json!({
        "twisted": clannish::presentation_json(&pair.twisted),
        "gentle": clannish::presentation_json(&pair.gentle),
        "renamed": pair.renamed.iter().map(|(x, y)| json!({"from": x, "to": y})).collect::<Vec<_>>(),
    });
    Ok(Report { ok: true, text, json })
}

fn from_clannish(file: &Path) -> Outcome {
    let p = load_slq(file)?;
    let b = build_qb(&p);
    let ideal = induced_ideal(&p, &b).map_err(Failure::Negative)?;
    let json = json!({"basic": b.to_json(&p), "presentation": mqtext::presentation_json(&b.quiver, &ideal)});
    Ok(Report { ok: true, text: serialize_mq(&b.quiver, &ideal), json })
}

fn roundtrip_text(label: &str, r: &clannish::RoundtripReport) -> String {
    let mut s = format!("{label}: {}\n", if r.passes() { "pass" } else { "FAIL" });
    for d in &r.details {
        let _ = writeln!(s, "  {d}");
    }
    s
}

fn roundtrip(file: Option<&Path>, seed: Option<u64>, count: usize, max_vertices: usize) -> Outcome {
    if let Some(file) = file {
        let (q, ideal) = load_mq(file)?;
        let r = roundtrip_check(&q, &ideal).map_err(Failure::Negative)?;
        return Ok(Report { ok: r.passes(), text: roundtrip_text(&file.display().to_string(), &r), json: r.to_json() });
    }
    let seed = seed.ok_or_else(|| Failure::Usage("roundtrip needs a file or --seed".into()))?;
    if max_vertices < 2 {
        return Err(Failure::Usage("--max-vertices must be at least 2".into()));
    }
    let (mut ok, mut text, mut reports) = (true, String::new(), Vec::new());
    for (k, inst) in instances(Condition::Special, seed, count, max_vertices).iter().enumerate() {
        let r = roundtrip_check(&inst.quiver, &inst.ideal).map_err(Failure::Negative)?;
        ok &= r.passes();
        text.push_str(&roundtrip_text(&format!("instance {k}"), &r));
        reports.push(r.to_json());
    }
    let passed = reports.iter().filter(|r| r["passes"] == true).count();
    let _ = writeln!(text, "{passed}/{count} instances round trip (seed {seed})");
    Ok(Report { ok, text, json: json!({"seed": seed, "passed": passed, "instances": reports}) })
}

fn verify_tables(which: &str) -> Outcome {
    let mut sections: Vec<(&str, Vec<Check>)> = Vec::new();
    if matches!(which, "1" | "all") {
        sections.push(("table 1", verify::table1()));
    }
    if matches!(which, "2" | "all") {
        sections.push(("table 2", verify::table2()));
        sections.push(("table 2 membership", verify::table2_membership()));
    }
    if matches!(which, "3" | "all") {
        sections.push(("table 3", verify::table3()));
        sections.push(("table 3 spans", verify::table3_spans()));
    }
    let (mut ok, mut text, mut json_sections) = (true, String::new(), Vec::new());
    for (name, checks) in &sections {
        let passed = checks.iter().filter(|c| c.passed).count();
        ok &= passed == checks.len();
        let _ = writeln!(text, "{name}: {passed}/{} entries match", checks.len());
        for c in checks.iter().filter(|c| !c.passed) {
            let _ = writeln!(text, "  {} {}: expected {}, computed {}", c.row, c.label, c.expected, c.computed);
        }
        json_sections.push(json!({
            "name": name,
            "passed": passed,
            "total": checks.len(),
            "entries": checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        }));
    }
    Ok(Report { ok, text, json: json!({"passes": ok, "sections": json_sections}) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Parse { file } => parse(file),
        Command::Complexify { file } => complexify(file),
        Command::Normalize { file } => normalize(file),
        Command::CheckGentle { file } => check_gentle(file),
        Command::Classify { file } => classify(file),
        Command::ToClannish { file } => to_clannish(file),
        Command::FromClannish { file } => from_clannish(file),
        Command::Roundtrip { file, seed, count, max_vertices } => roundtrip(file.as_deref(), *seed, *count, *max_vertices),
        Command::VerifyTables { table } => verify_tables(table),
    };
    match outcome {
        Ok(r) => {
            match cli.out {
                Format::Text => print!("{}", r.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&r.json).expect("values serialize")),
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Negative(msg)) => {
            match cli.out {
                Format::Text => println!("{msg}"),
                Format::Json => println!("{}", json!({"passes": false, "error": msg})),
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
