//! Command-line front end: `brauer <verb> ...`.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 verification mismatch,
//! 3 resource bound exceeded.

mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use brauer_core::burnside::{BurnsideElement, SubgroupClassTable};
use brauer_core::catalog::GroupSpec;
use brauer_core::classifier::{self, classify, verify_theorem_a, TheoremACase};
use brauer_core::group::{Permutation, Subgroup};
use brauer_core::linalg::AbelianInvariants;
use brauer_core::primitivity::prim_structure;
use brauer_core::regulator::{
    critical_subquotient, has_nonzero_ordl, ord_l_functional, regulator_constant_trivial,
    CriticalKind,
};
use brauer_core::relations::{
    artin_relation, coefficient_gcd_at_top, kernel_lattice, solomon_relation,
};
use brauer_core::Error;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

pub const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "brauer", version, about = "Brauer relations of finite groups")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Relation lattice K(G) with its HNF basis.
    Kernel { group: String },
    /// Prim(G) computed from the relation lattice.
    Prim { group: String },
    /// Case of the classification; `--verify` also computes Prim(G) and compares.
    Classify {
        group: String,
        #[arg(long)]
        verify: bool,
    },
    /// Checks a relation file: is it a relation, and is it imprimitive.
    Check { relation: PathBuf },
    /// Builds an explicit relation and prints it as relation JSON.
    BuildRelation {
        kind: String,
        group: String,
        /// Subgroup parameter: a class index or `;`-separated generators in cycle notation.
        #[arg(long)]
        h: Option<String>,
        /// Second subgroup parameter.
        #[arg(long)]
        h2: Option<String>,
        /// Integer parameter (`j`, `i`, `m`, or a subgroup order, depending on the kind).
        #[arg(long)]
        index: Option<u64>,
        /// `coeff:subgroup` terms for `mod-c`.
        #[arg(long = "term", allow_hyphen_values = true)]
        terms: Vec<String>,
    },
    /// Regulator constant of a relation file, or the ord_l criterion for a group.
    Regulator {
        relation: Option<PathBuf>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Runs the full pipeline on every corpus group.
    VerifyCorpus {
        #[arg(long)]
        parallel: Option<usize>,
        #[arg(long)]
        extended: bool,
        /// Emit one JSON document instead of text lines.
        #[arg(long)]
        json: bool,
    },
}

/// A failure carrying its exit code.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Resource(_)) {
            3
        } else {
            1
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

type CliResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.verb) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(verb: Verb) -> CliResult {
    match verb {
        Verb::Kernel { group } => kernel(&group),
        Verb::Prim { group } => prim(&group),
        Verb::Classify { group, verify } => classify_verb(&group, verify),
        Verb::Check { relation } => check(&relation),
        Verb::BuildRelation {
            kind,
            group,
            h,
            h2,
            index,
            terms,
        } => build_relation(&kind, &group, h.as_deref(), h2.as_deref(), index, &terms),
        Verb::Regulator {
            relation,
            group,
            prime,
        } => regulator(relation.as_deref(), group.as_deref(), prime),
        Verb::VerifyCorpus {
            parallel,
            extended,
            json,
        } => verify::verify_corpus(parallel, extended, json),
    }
}

/// Writes a line to stdout; a closed pipe is not an error.
pub fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

pub fn print(value: Value) {
    emit(&serde_json::to_string_pretty(&value).expect("JSON values serialize"));
}

pub fn load_table(arg: &str) -> Result<(String, Arc<SubgroupClassTable>), Failure> {
    let spec = GroupSpec::from_arg(arg);
    let g = spec.load()?;
    Ok((spec.label(), SubgroupClassTable::new(Arc::new(g))?))
}

fn generators_json(t: &SubgroupClassTable, h: &Subgroup) -> Vec<String> {
    h.generators()
        .iter()
        .map(|&a| t.group().element(a).to_string())
        .collect()
}

pub fn invariants_json(a: &AbelianInvariants) -> Value {
    json!({
        "free": a.free_rank.to_string(),
        "torsion": a.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "display": a.to_string(),
    })
}

fn relation_json(theta: &BurnsideElement, label: &str, kind: Option<&str>) -> Value {
    let mut v = theta.to_json(label);
    let obj = v.as_object_mut().expect("relation JSON is an object");
    obj.insert("schema".into(), json!(SCHEMA));
    if let Some(k) = kind {
        obj.insert("kind".into(), json!(k));
    }
    v
}

fn kernel(arg: &str) -> CliResult {
    let (label, t) = load_table(arg)?;
    let k = kernel_lattice(&t)?;
    let classes: Vec<Value> = t
        .classes()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            json!({
                "class": i.to_string(),
                "order": c.order().to_string(),
                "size": c.size().to_string(),
                "cyclic": c.is_cyclic(),
                "generators": generators_json(&t, c.rep()),
            })
        })
        .collect();
    let basis: Vec<Value> = k
        .basis()
        .iter()
        .map(|b| relation_json(b, &label, None))
        .collect();
    print(json!({
        "schema": SCHEMA,
        "group": label,
        "order": t.group().order().to_string(),
        "rank": k.rank().to_string(),
        "non_cyclic_classes": t.non_cyclic_count().to_string(),
        "coefficient_gcd_at_top": coefficient_gcd_at_top(&k).to_string(),
        "classes": classes,
        "basis": basis,
    }));
    Ok(0)
}

fn prim(arg: &str) -> CliResult {
    let (label, t) = load_table(arg)?;
    let p = prim_structure(&t)?;
    print(json!({
        "schema": SCHEMA,
        "group": label,
        "order": t.group().order().to_string(),
        "kernel_rank": p.kernel().rank().to_string(),
        "imprimitive_rank": p.imprimitive_lattice().rank().to_string(),
        "prim": invariants_json(p.invariants()),
    }));
    Ok(0)
}

fn case_json(t: &SubgroupClassTable, case: &TheoremACase) -> Value {
    let witnesses: Vec<Value> = case
        .witnesses
        .iter()
        .map(|(name, h)| json!({ "name": name, "order": h.order().to_string(), "generators": generators_json(t, h) }))
        .collect();
    let graph = case.graph.as_ref().map(|g| {
        json!({
            "vertices": g.vertices.iter().map(|v| generators_json(t, v)).collect::<Vec<_>>(),
            "edges": g.edges.iter().map(|(a, b, r)| json!([a.to_string(), b.to_string(), r.as_str()])).collect::<Vec<_>>(),
            "components": g.components.to_string(),
        })
    });
    json!({
        "tag": case.tag.as_str(),
        "predicted": invariants_json(&case.predicted),
        "prime": case.prime.map(|p| p.to_string()),
        "reason": case.reason,
        "witnesses": witnesses,
        "graph": graph,
    })
}

fn classify_verb(arg: &str, verify: bool) -> CliResult {
    let (label, t) = load_table(arg)?;
    if !verify {
        let case = classify(t.group())?;
        print(json!({ "schema": SCHEMA, "group": label, "case": case_json(&t, &case) }));
        return Ok(0);
    }
    let report = verify_theorem_a(&t)?;
    let matches = report.matches();
    print(json!({
        "schema": SCHEMA,
        "group": label,
        "case": case_json(&t, &report.case),
        "computed": invariants_json(&report.computed),
        "matches": matches,
    }));
    Ok(if matches { 0 } else { 2 })
}

fn read_relation(
    path: &std::path::Path,
) -> Result<(String, Arc<SubgroupClassTable>, BurnsideElement), Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let group = value
        .get("group")
        .and_then(Value::as_str)
        .ok_or_else(|| usage("relation JSON has no \"group\""))?;
    let (label, t) = load_table(group)?;
    let theta = BurnsideElement::from_json(&t, &value)?;
    Ok((label, t, theta))
}

fn check(path: &std::path::Path) -> CliResult {
    let (label, t, theta) = read_relation(path)?;
    let is_relation = theta.is_relation();
    let mut out = json!({
        "schema": SCHEMA,
        "group": label,
        "is_relation": is_relation,
        "cyclic_marks": theta.cyclic_marks().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "imprimitive": Value::Null,
        "prim_class": Value::Null,
    });
    if is_relation {
        let p = prim_structure(&t)?;
        out["imprimitive"] = json!(p.is_imprimitive(&theta)?);
        out["prim_class"] = json!(p
            .prim_class(&theta)?
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>());
        out["prim"] = invariants_json(p.invariants());
    }
    print(out);
    Ok(if is_relation { 0 } else { 2 })
}

/// A class index, or `;`-separated generators in cycle notation.
fn parse_subgroup(t: &SubgroupClassTable, arg: &str) -> Result<Subgroup, Failure> {
    if let Ok(i) = arg.trim().parse::<usize>() {
        if i >= t.len() {
            return Err(usage(format!(
                "class index {i} out of range (0..{})",
                t.len()
            )));
        }
        return Ok(t.rep(i).clone());
    }
    let perms = arg
        .split(';')
        .map(|s| Permutation::parse_cycles(t.group().degree(), s))
        .collect::<brauer_core::Result<Vec<_>>>()?;
    Ok(t.group().subgroup_from_perms(&perms)?)
}

fn required<'a>(v: Option<&'a str>, name: &str, kind: &str) -> Result<&'a str, Failure> {
    v.ok_or_else(|| usage(format!("{kind} needs --{name}")))
}

pub const KINDS: &[&str] = &[
    "cpcp",
    "cyclic-semidirect",
    "dihedral",
    "heisenberg",
    "pgroup-bouc",
    "serre",
    "g20-prime-power",
    "g20-composite",
    "mod-c",
    "case4a",
    "case4b",
    "case4c",
    "theorem-b1",
    "theorem-b2",
    "theorem-b3",
    "artin",
    "solomon",
];

fn build_relation(
    kind: &str,
    arg: &str,
    h: Option<&str>,
    h2: Option<&str>,
    index: Option<u64>,
    terms: &[String],
) -> CliResult {
    let (label, t) = load_table(arg)?;
    let sub = |v: Option<&str>, name: &str| -> Result<Subgroup, Failure> {
        parse_subgroup(&t, required(v, name, kind)?)
    };
    let index_or =
        |name: &str| index.ok_or_else(|| usage(format!("{kind} needs --index ({name})")));
    let theta = match kind {
        "cpcp" => classifier::cpcp(&t)?,
        "cyclic-semidirect" => {
            classifier::cyclic_semidirect(&t, index_or("subgroup order")? as usize)?
        }
        "dihedral" => classifier::dihedral(&t)?,
        "heisenberg" => classifier::heisenberg(&t, index.unwrap_or(0))?,
        "pgroup-bouc" => {
            let l = h
                .map(|x| parse_subgroup(&t, x))
                .transpose()?
                .unwrap_or_else(|| t.group().whole());
            let n = h2
                .map(|x| parse_subgroup(&t, x))
                .transpose()?
                .unwrap_or_else(|| t.group().trivial_subgroup());
            classifier::pgroup_bouc(&t, &l, &n)?
        }
        "serre" => classifier::serre(&t)?,
        "g20-prime-power" => classifier::g20_prime_power(&t)?,
        "g20-composite" => classifier::g20_composite(&t, index)?,
        "mod-c" => {
            if terms.is_empty() {
                return Err(usage("mod-c needs at least one --term coeff:subgroup"));
            }
            let parsed = terms
                .iter()
                .map(|s| {
                    let (c, h) = s
                        .split_once(':')
                        .ok_or_else(|| usage(format!("bad term {s:?}, expected coeff:subgroup")))?;
                    let c: i64 = c
                        .trim()
                        .parse()
                        .map_err(|_| usage(format!("bad coefficient in {s:?}")))?;
                    Ok((c, parse_subgroup(&t, h)?))
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            classifier::mod_c(&t, &parsed)?
        }
        "case4a" => classifier::case4a(&t)?,
        "case4b" => classifier::case4b(&t, index.unwrap_or(2) as usize)?,
        "case4c" => classifier::case4c(&t, &sub(h, "h")?, &sub(h2, "h2")?)?,
        "theorem-b1" => classifier::theorem_b1(&t, &sub(h, "h")?)?,
        "theorem-b2" => classifier::theorem_b2(&t)?,
        "theorem-b3" => classifier::theorem_b3(&t, &sub(h, "h")?, &sub(h2, "h2")?)?,
        "artin" => artin_relation(&t, t.class_of(&sub(h, "h")?)?)?,
        "solomon" => solomon_relation(&t)?
            .ok_or_else(|| usage("solomon relation is zero for quasi-elementary groups"))?,
        other => {
            return Err(usage(format!(
                "unknown kind {other:?}; expected one of {}",
                KINDS.join(", ")
            )))
        }
    };
    print(relation_json(&theta, &label, Some(kind)));
    Ok(0)
}

fn regulator(
    relation: Option<&std::path::Path>,
    group: Option<&str>,
    prime: Option<u64>,
) -> CliResult {
    match (relation, group) {
        (Some(path), None) => {
            let (label, _, theta) = read_relation(path)?;
            let v = match regulator_constant_trivial(&theta) {
                Ok(v) => v,
                Err(Error::NotRelation) => {
                    print(json!({ "schema": SCHEMA, "group": label, "is_relation": false }));
                    return Ok(2);
                }
                Err(e) => return Err(e.into()),
            };
            let ord: serde_json::Map<String, Value> = v
                .ord
                .iter()
                .map(|(p, e)| (p.to_string(), json!(e.to_string())))
                .collect();
            let mut out = json!({
                "schema": SCHEMA,
                "group": label,
                "is_relation": true,
                "value": v.to_string(),
                "numerator": v.value.numer().to_string(),
                "denominator": v.value.denom().to_string(),
                "ord": ord,
            });
            if let Some(l) = prime {
                out["ord_l"] = json!(v.ord_at(l).to_string());
            }
            print(out);
            Ok(0)
        }
        (None, Some(arg)) => {
            let l = prime.ok_or_else(|| usage("regulator --group needs --prime"))?;
            let (label, t) = load_table(arg)?;
            let k = kernel_lattice(&t)?;
            let nonzero = has_nonzero_ordl(&t, l)?;
            let witness = critical_subquotient(&t, l)?;
            let critical = witness.as_ref().map(|w| {
                let kind = match w.kind {
                    CriticalKind::Elementary => "elementary".to_string(),
                    CriticalKind::Frobenius { p } => format!("frobenius:{p}"),
                };
                json!({ "h": generators_json(&t, &w.h), "n": generators_json(&t, &w.n), "kind": kind })
            });
            let agree = nonzero == witness.is_some();
            print(json!({
                "schema": SCHEMA,
                "group": label,
                "prime": l.to_string(),
                "ord_l_on_basis": ord_l_functional(&k, l).iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "has_nonzero_ordl": nonzero,
                "critical_subquotient": critical,
                "agree": agree,
            }));
            Ok(if agree { 0 } else { 2 })
        }
        _ => Err(usage("regulator takes either a relation file or --group")),
    }
}
