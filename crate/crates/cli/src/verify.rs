//! `verify-corpus`: the whole pipeline on each corpus group.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use brauer_core::burnside::{quotient_table, subgroup_table, BurnsideElement, SubgroupClassTable};
use brauer_core::catalog::parse_group_spec;
use brauer_core::classifier::{
    gamma_graph, primitive_generators, qe_decomposition, signatures, verify_theorem_a,
};
use brauer_core::corpus::{load_corpus, CorpusEntry};
use brauer_core::linalg::{quotient_invariants, IntMatrix, LatticeBasis};
use brauer_core::primitivity::prim_structure;
use brauer_core::regulator::{
    has_critical_subquotient, has_nonzero_ordl, ord_l_functional, regulator_constant_trivial,
};
use brauer_core::relations::{
    artin_relation, coefficient_gcd_at_top, kernel_lattice, solomon_relation,
};
use brauer_core::util::primes_up_to;
use brauer_core::Error;
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{emit, print, Failure, SCHEMA};

/// Operations the corpus run is expected to exercise.
pub const OPERATIONS: &[&str] = &[
    "parse_group_spec",
    "semidirect_product",
    "all_subgroups",
    "conjugacy_classes_of_subgroups",
    "mark",
    "normalizer",
    "centre",
    "derived_subgroup",
    "frattini_subgroup",
    "normal_subgroups",
    "quotient_group",
    "hnf",
    "snf",
    "integer_kernel",
    "lattice_membership",
    "quotient_invariants",
    "cyclic_marks",
    "is_relation",
    "multiply",
    "induct",
    "restrict",
    "inflate",
    "deflate",
    "kernel_lattice",
    "artin_relation",
    "solomon_relation",
    "coefficient_gcd_at_top",
    "imprimitive_sublattice",
    "prim_structure",
    "is_imprimitive",
    "qe_decomposition",
    "signatures",
    "gamma_graph",
    "classify",
    "verify_theorem_a",
    "build_relation",
    "regulator_constant_trivial",
    "ord_l_functional",
    "has_nonzero_ordl",
    "has_critical_subquotient",
    "relation_json",
];

struct Report {
    name: String,
    failures: Vec<String>,
    resource: bool,
    detail: String,
    ops: BTreeSet<&'static str>,
    seconds: f64,
}

#[derive(Default)]
struct Run {
    failures: Vec<String>,
    ops: BTreeSet<&'static str>,
}

impl Run {
    fn op(&mut self, name: &'static str) {
        debug_assert!(OPERATIONS.contains(&name), "{name}");
        self.ops.insert(name);
    }

    fn expect(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(msg());
        }
    }
}

fn verify_group(entry: &CorpusEntry) -> Report {
    let start = Instant::now();
    let mut run = Run::default();
    let outcome = pipeline(entry, &mut run);
    let (resource, detail) = match outcome {
        Ok(detail) => (false, detail),
        Err(e) => {
            let resource = matches!(e, Error::Resource(_));
            run.failures.push(e.to_string());
            (resource, String::new())
        }
    };
    Report {
        name: entry.name.clone(),
        failures: run.failures,
        resource,
        detail,
        ops: run.ops,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn pipeline(entry: &CorpusEntry, run: &mut Run) -> brauer_core::Result<String> {
    let g = Arc::new(parse_group_spec(&entry.name)?);
    run.op("parse_group_spec");
    if entry.name.starts_with("sd:") {
        run.op("semidirect_product");
    }
    run.expect(g.order() == entry.order, || {
        format!("order {} but the fixture says {}", g.order(), entry.order)
    });

    let t = SubgroupClassTable::new(g.clone())?;
    run.op("all_subgroups");
    run.op("conjugacy_classes_of_subgroups");
    run.op("mark");
    run.expect(
        (0..t.len()).all(|h| t.mark(0, h) as usize * t.class(h).order() == g.order()),
        || "marks at the trivial subgroup are not indices".into(),
    );
    let centre = g.centre();
    run.op("centre");
    run.expect(g.normalizer(&centre)?.order() == g.order(), || {
        "centre is not normal".into()
    });
    run.op("normalizer");
    run.expect(g.is_normal(&g.derived_subgroup()), || {
        "derived subgroup is not normal".into()
    });
    run.op("derived_subgroup");
    run.expect(g.is_normal(&g.frattini_subgroup()?), || {
        "Frattini subgroup is not normal".into()
    });
    run.op("frattini_subgroup");
    let normals = g.normal_subgroups()?;
    run.op("normal_subgroups");

    let k = kernel_lattice(&t)?;
    run.op("kernel_lattice");
    run.op("integer_kernel");
    run.op("hnf");
    run.expect(k.rank() == t.non_cyclic_count(), || {
        format!(
            "rank {} but {} non-cyclic classes",
            k.rank(),
            t.non_cyclic_count()
        )
    });
    let basis = k.basis();
    for b in &basis {
        run.expect(b.cyclic_marks().iter().all(Zero::is_zero), || {
            format!("basis element {b} has nonzero cyclic marks")
        });
        run.expect(b.is_relation(), || {
            format!("basis element {b} is not a relation")
        });
    }
    run.op("cyclic_marks");
    run.op("is_relation");

    let gcd = coefficient_gcd_at_top(&k);
    run.op("coefficient_gcd_at_top");
    let qe = g.quasi_elementary_primes(&g.whole());
    if !g.is_cyclic() {
        let expected = if qe.len() == 1 { qe[0] } else { 1 };
        run.expect(gcd == BigInt::from(expected), || {
            format!("coefficient gcd {gcd}, expected {expected}")
        });
    }

    for i in (0..t.len()).filter(|&i| !t.class(i).is_cyclic()) {
        let a = artin_relation(&t, i)?;
        run.expect(a.is_relation(), || {
            format!("Artin relation for {} is not a relation", t.label(i))
        });
        run.op("artin_relation");
    }
    if let Some(s) = solomon_relation(&t)? {
        run.expect(s.is_relation(), || {
            "Solomon relation is not a relation".into()
        });
    }
    run.op("solomon_relation");

    let report = verify_theorem_a(&t)?;
    run.op("verify_theorem_a");
    run.op("classify");
    run.op("prim_structure");
    run.op("imprimitive_sublattice");
    run.op("snf");
    let case = &report.case;
    run.expect(report.matches(), || {
        format!(
            "predicted {} ({}) but computed {}",
            case.predicted, case.tag, report.computed
        )
    });
    if let Some(tag) = entry.tag {
        run.expect(tag == case.tag, || {
            format!("tag {} but the fixture says {tag}", case.tag)
        });
    }
    if let Some(p) = &entry.prim {
        run.expect(*p == report.computed, || {
            format!("Prim {} but the fixture says {p}", report.computed)
        });
    }
    if let Some(dec) = qe_decomposition(&g)? {
        run.op("qe_decomposition");
        if !g.is_cyclic() {
            signatures(&g, &dec)?;
            run.op("signatures");
            if !dec.k.is_trivial() {
                gamma_graph(&g, &dec)?;
                run.op("gamma_graph");
            }
        }
    }

    let p = prim_structure(&t)?;
    if case.tag.has_primitive() {
        let gens = primitive_generators(&t, case)?;
        run.op("build_relation");
        let mut rows: Vec<Vec<_>> = p
            .imprimitive_basis()
            .iter()
            .map(|b| b.coeffs().to_vec())
            .collect();
        for b in &gens {
            run.expect(k.contains(b)?, || format!("generator {b} is not in K(G)"));
            run.expect(!p.is_imprimitive(b)?, || {
                format!("generator {b} is imprimitive")
            });
            rows.push(b.coeffs().to_vec());
        }
        run.op("lattice_membership");
        run.op("is_imprimitive");
        let span = LatticeBasis::from_generators_reduced(&IntMatrix::from_rows(t.len(), rows));
        let q = quotient_invariants(k.lattice(), &span)?;
        run.op("quotient_invariants");
        run.expect(q.is_trivial(), || {
            format!("generators and imprimitive relations leave K/span = {q}")
        });
    }

    let mut product = brauer_core::regulator::RegulatorValue::one();
    for b in &basis {
        product = product.mul(&regulator_constant_trivial(b)?);
    }
    run.op("regulator_constant_trivial");
    let sum = basis
        .iter()
        .try_fold(BurnsideElement::zero(&t), |acc, b| acc.add(b))?;
    run.expect(regulator_constant_trivial(&sum)? == product, || {
        "regulator constant is not multiplicative".into()
    });
    for l in primes_up_to(13) {
        let ordl = ord_l_functional(&k, l);
        run.op("ord_l_functional");
        let nonzero = has_nonzero_ordl(&t, l)?;
        let critical = has_critical_subquotient(&t, l)?;
        run.op("has_nonzero_ordl");
        run.op("has_critical_subquotient");
        run.expect(nonzero == critical, || {
            format!("l = {l}: nonzero ord_l {nonzero} but critical subquotient {critical}")
        });
        run.expect(
            nonzero == ordl.iter().any(|x| !x.is_zero()) || g.order() as u64 % l != 0,
            || format!("l = {l}: ord_l functional disagrees with has_nonzero_ordl"),
        );
    }

    transport(&t, &normals, &basis, run)?;

    if let Some(b) = basis.first() {
        let back = BurnsideElement::from_json(&t, &b.to_json(&entry.name))?;
        run.expect(back == *b, || "relation JSON does not round-trip".into());
        run.op("relation_json");
    }

    Ok(format!(
        "order {} tag {} prim {}",
        g.order(),
        case.tag,
        report.computed
    ))
}

/// One deterministic instance of each transport identity.
fn transport(
    t: &Arc<SubgroupClassTable>,
    normals: &[brauer_core::group::Subgroup],
    basis: &[BurnsideElement],
    run: &mut Run,
) -> brauer_core::Result<()> {
    let theta = basis
        .iter()
        .try_fold(BurnsideElement::basis(t, t.top()), |acc, b| acc.add(b))?;
    if let Some(h) = (1..t.len()).find(|&i| i != t.top()) {
        let (ht, emb) = subgroup_table(t, t.rep(h))?;
        let lhs = theta.multiply(&BurnsideElement::basis(t, h))?;
        let rhs = theta.restrict(&emb, &ht)?.induct(&emb, t)?;
        run.op("multiply");
        run.op("restrict");
        run.op("induct");
        run.expect(lhs == rhs, || {
            format!("Θ·[G/{}] differs from Ind Res Θ", t.label(h))
        });
        for b in basis {
            run.expect(b.restrict(&emb, &ht)?.is_relation(), || {
                format!("restriction to {} breaks a relation", t.label(h))
            });
        }
    }
    if let Some(n) = normals.iter().find(|n| !n.is_trivial()) {
        let (q, epi) = quotient_table(t, n)?;
        run.op("quotient_group");
        for b in basis {
            run.expect(b.deflate(&epi, &q)?.is_relation(), || {
                "deflation breaks a relation".into()
            });
        }
        run.op("deflate");
        for b in kernel_lattice(&q)?.basis() {
            run.expect(b.inflate(&epi, t)?.is_relation(), || {
                "inflation breaks a relation".into()
            });
        }
        run.op("inflate");
    }
    Ok(())
}

pub fn verify_corpus(
    parallel: Option<usize>,
    extended: bool,
    as_json: bool,
) -> Result<u8, Failure> {
    let corpus = load_corpus()?;
    let entries: Vec<&CorpusEntry> = corpus.entries(extended).collect();
    let start = Instant::now();
    let threads = parallel.unwrap_or(1).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure {
            code: 1,
            message: e.to_string(),
        })?;
    let reports: Vec<Report> =
        pool.install(|| entries.par_iter().map(|e| verify_group(e)).collect());

    let mut ops: BTreeSet<&'static str> = BTreeSet::new();
    for r in &reports {
        ops.extend(r.ops.iter().copied());
    }
    let missing: Vec<&str> = OPERATIONS
        .iter()
        .copied()
        .filter(|o| !ops.contains(o))
        .collect();
    let failed = reports.iter().filter(|r| !r.failures.is_empty()).count();
    let resource = reports.iter().any(|r| r.resource);
    let elapsed = start.elapsed().as_secs_f64();

    if as_json {
        let groups: Vec<Value> = reports
            .iter()
            .map(|r| {
                json!({
                    "name": r.name,
                    "pass": r.failures.is_empty(),
                    "failures": r.failures,
                    "detail": r.detail,
                    "seconds": format!("{:.3}", r.seconds),
                })
            })
            .collect();
        print(json!({
                "schema": SCHEMA,
                "groups": groups,
                "passed": (reports.len() - failed).to_string(),
                "failed": failed.to_string(),
                "operations_exercised": ops.iter().collect::<Vec<_>>(),
                "operations_missing": missing,
            "seconds": format!("{elapsed:.3}"),
        }));
    } else {
        for r in &reports {
            if r.failures.is_empty() {
                emit(&format!("PASS {} ({}) {:.3}s", r.name, r.detail, r.seconds));
            } else {
                emit(&format!("FAIL {}: {}", r.name, r.failures.join("; ")));
            }
        }
        emit(&format!(
            "summary: {} groups, {} passed, {} failed; operations exercised {}/{}{}; {elapsed:.2}s",
            reports.len(),
            reports.len() - failed,
            failed,
            OPERATIONS.len() - missing.len(),
            OPERATIONS.len(),
            if missing.is_empty() {
                String::new()
            } else {
                format!(" (missing: {})", missing.join(", "))
            },
        ));
    }
    Ok(if resource {
        3
    } else if failed > 0 || !missing.is_empty() {
        2
    } else {
        0
    })
}
