use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use spherebraid::amalgams::{
    distinguish_k1_k2, find_extension, gluing_certificates, named_amalgam, normal_form_consistency, to_semidirect,
    AmalgamSpec,
};
use spherebraid::braid_words::parse_braid;
use spherebraid::cli_verifier::{render_records, render_suite, run_suite, Format, NRange, SUITES};
use spherebraid::finite_groups::{
    abelian_invariants, automorphisms, center, identify, is_isomorphic, lattice_summary, make_group,
    semidirect_classes, subgroups, GroupFamily,
};
use spherebraid::sphere_oracle::{central_class, equals, order, Central};
use spherebraid::vc_classifier::{
    attach_witnesses, enumerate_v, enumerate_vtilde, find_class, finite_classes, witness, witness_passed,
};

#[derive(Parser)]
#[command(name = "spherebraid", version, about = "Braid groups of the 2-sphere: word problem, finite subgroups, virtually cyclic subgroups")]
struct Cli {
    /// Output format: json, csv or text
    #[arg(long, global = true, default_value = "json")]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the virtually cyclic subgroup classes of B_n(S²) or MCG(S², n)
    Classify {
        #[arg(long)]
        n: usize,
        /// Mapping class group instead of the braid group
        #[arg(long)]
        mcg: bool,
        /// realized, open, not_realized or all
        #[arg(long, default_value = "all")]
        status: String,
        /// Attach verified witnesses where a construction exists
        #[arg(long)]
        witnesses: bool,
    },
    /// Finite subgroup classes of B_n(S²)
    Finite {
        #[arg(long)]
        n: usize,
    },
    /// Braid witness for one class, e.g. --class "Q8 x_alpha Z"
    Witness {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        class: String,
    },
    /// Run a regression suite (or `all`)
    Verify {
        #[arg(long)]
        suite: String,
        /// Inclusive range a..b, or a single n
        #[arg(long)]
        n: Option<String>,
        /// Keep per-check wall times in the report
        #[arg(long)]
        timings: bool,
    },
    /// Order of a braid in B_n(S²)
    Order(WordArgs),
    /// Whether a braid lies in the centre ⟨Δ²⟩
    Central(WordArgs),
    /// Whether two braids are equal in B_n(S²)
    Equal {
        #[arg(long)]
        n: usize,
        w1: String,
        w2: String,
    },
    /// Finite group queries on catalog groups such as Q16, Dic12, T*, O*, I*
    #[command(subcommand)]
    Group(GroupCommand),
    /// Amalgamated products: K1, K2, K1', K2', phi1..phi6, or G1,F,G2
    #[command(subcommand)]
    Amalgam(AmalgamCommand),
}

#[derive(Args)]
struct WordArgs {
    #[arg(long)]
    n: usize,
    /// Letters ±i for σ_i^{±1}, e.g. "1 2 -1" or "s1 s2 S1"
    #[arg(long)]
    word: String,
}

#[derive(Subcommand)]
enum GroupCommand {
    Order { group: String },
    Subgroups { group: String },
    Aut { group: String },
    Iso { a: String, b: String },
}

#[derive(Subcommand)]
enum AmalgamCommand {
    /// Factor and amalgamated subgroup data
    Build { name: String },
    /// Order of a word such as "a1 b1 a-2" (factor a or b, signed generator)
    Order { name: String, word: String },
    /// Normal-form uniqueness up to a syllable length
    NormalForms {
        name: String,
        #[arg(long, default_value_t = 3)]
        len: usize,
    },
    /// Z ⋊ G1 form when the gluing extends to the factors
    Semidirect { name: String },
    /// Certificates separating K1 from K2
    K1k2 {
        #[arg(long)]
        dihedral: bool,
    },
}

type Failure = Box<dyn std::error::Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let format: Format = cli.format.parse()?;
    match cli.command {
        Command::Classify { n, mcg, status, witnesses } => {
            let mut records = if mcg { enumerate_vtilde(n)? } else { enumerate_v(n)? };
            if status != "all" {
                let want = status.parse()?;
                records.retain(|r| r.status == want);
            }
            if witnesses && !mcg {
                attach_witnesses(&mut records)?;
            }
            print!("{}", render_records(&records, format)?);
            Ok(records.iter().filter_map(|r| r.witness.as_ref()).all(|w| witness_passed(w)))
        }
        Command::Finite { n } => {
            let rows: Vec<Value> = finite_classes(n)?
                .into_iter()
                .map(|c| {
                    let within: Vec<String> = c.containing_maximal.iter().map(|g| g.to_string()).collect();
                    json!({"group": c.group.to_string(), "order": c.order, "maximal": c.maximal, "containing_maximal": within.join(" ")})
                })
                .collect();
            emit(&Value::Array(rows), format);
            Ok(true)
        }
        Command::Witness { n, class } => {
            let mut record = find_class(n, &class, false)?;
            let w = witness(&record)?;
            let ok = witness_passed(&w);
            record.witness = Some(w);
            print!("{}", render_records(std::slice::from_ref(&record), format)?);
            Ok(ok)
        }
        Command::Verify { suite, n, timings } => {
            let range = n.map(|s| s.parse::<NRange>()).transpose()?;
            let ids: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let mut ok = true;
            for id in ids {
                let mut r = run_suite(id, range)?;
                if !timings {
                    r = r.without_timings();
                }
                ok &= r.passed;
                print!("{}", render_suite(&r, format)?);
            }
            Ok(ok)
        }
        Command::Order(WordArgs { n, word }) => {
            let w = parse_braid(&word, n)?;
            emit(&json!({"n": n, "word": w.to_string(), "order": order(&w).to_string()}), format);
            Ok(true)
        }
        Command::Central(WordArgs { n, word }) => {
            let w = parse_braid(&word, n)?;
            let class = match central_class(&w) {
                Central::Trivial => "trivial",
                Central::FullTwist => "full_twist",
                Central::NotCentral => "not_central",
            };
            emit(&json!({"n": n, "word": w.to_string(), "central": class}), format);
            Ok(true)
        }
        Command::Equal { n, w1, w2 } => {
            let (a, b) = (parse_braid(&w1, n)?, parse_braid(&w2, n)?);
            emit(&json!({"n": n, "w1": a.to_string(), "w2": b.to_string(), "equal": equals(&a, &b)?}), format);
            Ok(true)
        }
        Command::Group(g) => group(g, format),
        Command::Amalgam(a) => amalgam(a, format),
    }
}

fn family(s: &str) -> Result<GroupFamily, Failure> {
    Ok(s.parse::<GroupFamily>()?)
}

fn group(cmd: GroupCommand, format: Format) -> Result<bool, Failure> {
    match cmd {
        GroupCommand::Order { group } => {
            let g = make_group(family(&group)?)?;
            let hist: Vec<String> = g.order_histogram().iter().map(|(o, c)| format!("{o}:{c}")).collect();
            emit(
                &json!({
                    "group": group,
                    "order": g.order(),
                    "center": center(&g).len(),
                    "abelianization": abelian_invariants(&g),
                    "element_orders": hist.join(" "),
                }),
                format,
            );
        }
        GroupCommand::Subgroups { group } => {
            let g = make_group(family(&group)?)?;
            let s = lattice_summary(&g, &subgroups(&g)?);
            let join = |v: &std::collections::BTreeSet<String>| v.iter().cloned().collect::<Vec<_>>().join(" ");
            emit(
                &json!({
                    "group": group,
                    "subgroups": s.subgroup_count,
                    "proper": join(&s.proper),
                    "maximal": join(&s.maximal),
                    "maximal_cyclic": join(&s.maximal_cyclic),
                    "normal": join(&s.normal),
                }),
                format,
            );
        }
        GroupCommand::Aut { group } => {
            let g = make_group(family(&group)?)?;
            let aut = automorphisms(&g)?;
            let out = aut.outer()?;
            emit(
                &json!({
                    "group": group,
                    "aut": aut.maps.len(),
                    "inn": aut.inner.len(),
                    "out": out.order(),
                    "out_structure": identify(&out),
                    "semidirect_classes": semidirect_classes(&aut).len(),
                }),
                format,
            );
        }
        GroupCommand::Iso { a, b } => {
            let (ga, gb) = (make_group(family(&a)?)?, make_group(family(&b)?)?);
            emit(&json!({"a": a, "b": b, "isomorphic": is_isomorphic(&ga, &gb)}), format);
        }
    }
    Ok(true)
}

fn parse_amalgam_word(spec: &AmalgamSpec, word: &str) -> Result<Vec<(usize, usize)>, Failure> {
    word.split_whitespace()
        .map(|tok| {
            let k = match tok.chars().next() {
                Some('a') => 0,
                Some('b') => 1,
                _ => return Err(format!("bad letter {tok:?}; use a<i> or b<i>").into()),
            };
            let gen: i32 = tok[1..].parse().map_err(|_| format!("bad letter {tok:?}"))?;
            let g = &spec.factors[k];
            if gen == 0 || gen.unsigned_abs() as usize > g.gens().len() {
                return Err(format!("{tok:?}: factor has {} generators", g.gens().len()).into());
            }
            Ok((k, g.eval(&[gen])))
        })
        .collect()
}

fn amalgam(cmd: AmalgamCommand, format: Format) -> Result<bool, Failure> {
    match cmd {
        AmalgamCommand::Build { name } => {
            let s = named_amalgam(&name)?;
            emit(
                &json!({
                    "name": s.name,
                    "g1": identify(&s.factors[0]),
                    "g2": identify(&s.factors[1]),
                    "f": identify(&s.f),
                    "gluing_extends": find_extension(&s).is_some(),
                }),
                format,
            );
            Ok(true)
        }
        AmalgamCommand::Order { name, word } => {
            let s = named_amalgam(&name)?;
            let e = s.from_word(&parse_amalgam_word(&s, &word)?);
            emit(
                &json!({"name": s.name, "word": word, "syllables": e.syllable_length(), "order": s.element_order(&e).to_string()}),
                format,
            );
            Ok(true)
        }
        AmalgamCommand::NormalForms { name, len } => {
            let s = named_amalgam(&name)?;
            let (total, bad) = normal_form_consistency(&s, len);
            emit(&json!({"name": s.name, "max_len": len, "products": total, "mismatches": bad}), format);
            Ok(bad == 0)
        }
        AmalgamCommand::Semidirect { name } => {
            let s = named_amalgam(&name)?;
            let Some(iota) = find_extension(&s) else {
                emit(&json!({"name": s.name, "semidirect": false, "reason": "gluing does not extend"}), format);
                return Ok(false);
            };
            let f = to_semidirect(&s, &iota)?;
            emit(
                &json!({
                    "name": s.name,
                    "semidirect": f.passed(),
                    "t_order": f.t_order.to_string(),
                    "checked": f.checked,
                    "failures": f.failures.len(),
                }),
                format,
            );
            Ok(f.passed())
        }
        AmalgamCommand::K1k2 { dihedral } => {
            let r = distinguish_k1_k2(dihedral)?;
            let certs = gluing_certificates(dihedral)?;
            let ok = r.passed() && certs.iter().all(|c| c.passed());
            let mut rows: Vec<Value> = r
                .k2_cycle
                .iter()
                .chain(&r.k1_semidirect)
                .map(|c| json!({"check": c.name, "passed": c.passed}))
                .collect();
            rows.extend(certs.iter().map(|c| json!({"check": format!("{} ≅ {}", c.from, c.to), "passed": c.passed()})));
            emit(&Value::Array(rows), format);
            Ok(ok)
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Flat objects (or arrays of them) in the requested format.
fn emit(value: &Value, format: Format) {
    let rows: Vec<&serde_json::Map<String, Value>> = match value {
        Value::Array(items) => items.iter().filter_map(Value::as_object).collect(),
        Value::Object(m) => vec![m],
        _ => Vec::new(),
    };
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("json value")),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            if let Some(first) = rows.first() {
                w.write_record(first.keys()).expect("stdout");
            }
            for r in &rows {
                w.write_record(r.values().map(scalar)).expect("stdout");
            }
            w.flush().expect("stdout");
        }
        Format::Text => {
            for r in &rows {
                let line: Vec<String> = r.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect();
                println!("{}", line.join("  "));
            }
        }
    }
}
