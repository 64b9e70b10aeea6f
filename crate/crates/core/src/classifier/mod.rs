//! Which groups have primitive relations, and what Prim(G) should be.

mod builders;
mod qe;

use std::fmt;
use std::sync::Arc;

use crate::burnside::{BurnsideElement, SubgroupClassTable};
use crate::error::Result;
use crate::group::{PermGroup, Subgroup};
use crate::linalg::AbelianInvariants;
use crate::primitivity::prim_structure;
use crate::util::factorize;

pub use builders::*;
pub use qe::{gamma_graph, is_dihedral_2group, is_heisenberg, k_is_admissible, qe_decomposition, signatures, EdgeReason, GammaGraph, QEDecomposition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    Cyclic,
    Dihedral2n,
    Heisenberg,
    Case3a,
    Case3b,
    Case4a,
    Case4b,
    Case4c,
    NoPrimitive,
}

impl CaseTag {
    pub const ALL: [CaseTag; 9] = [
        CaseTag::Cyclic,
        CaseTag::Dihedral2n,
        CaseTag::Heisenberg,
        CaseTag::Case3a,
        CaseTag::Case3b,
        CaseTag::Case4a,
        CaseTag::Case4b,
        CaseTag::Case4c,
        CaseTag::NoPrimitive,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Cyclic => "cyclic",
            CaseTag::Dihedral2n => "dihedral",
            CaseTag::Heisenberg => "heisenberg",
            CaseTag::Case3a => "3a",
            CaseTag::Case3b => "3b",
            CaseTag::Case4a => "4a",
            CaseTag::Case4b => "4b",
            CaseTag::Case4c => "4c",
            CaseTag::NoPrimitive => "none",
        }
    }

    pub fn parse(s: &str) -> Option<CaseTag> {
        CaseTag::ALL.into_iter().find(|t| t.as_str() == s)
    }

    /// Whether groups with this tag carry primitive relations.
    pub fn has_primitive(self) -> bool {
        !matches!(self, CaseTag::Cyclic | CaseTag::NoPrimitive)
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of the structural classification.
#[derive(Clone, Debug)]
pub struct TheoremACase {
    pub tag: CaseTag,
    pub predicted: AbelianInvariants,
    pub prime: Option<u64>,
    pub reason: String,
    /// Named subgroups supporting the decision.
    pub witnesses: Vec<(String, Subgroup)>,
    pub decomposition: Option<QEDecomposition>,
    pub graph: Option<GammaGraph>,
}

impl TheoremACase {
    fn new(tag: CaseTag, predicted: AbelianInvariants, reason: impl Into<String>) -> Self {
        TheoremACase {
            tag,
            predicted,
            prime: None,
            reason: reason.into(),
            witnesses: Vec::new(),
            decomposition: None,
            graph: None,
        }
    }

    fn none(reason: impl Into<String>) -> Self {
        TheoremACase::new(CaseTag::NoPrimitive, AbelianInvariants::trivial(), reason)
    }

    fn with_prime(mut self, p: u64) -> Self {
        self.prime = Some(p);
        self
    }

    fn witness(mut self, name: &str, h: &Subgroup) -> Self {
        self.witnesses.push((name.to_string(), h.clone()));
        self
    }
}

/// Classifies `G` from its subgroup structure alone, without computing K(G).
pub fn classify(g: &PermGroup) -> Result<TheoremACase> {
    if g.is_cyclic() {
        return Ok(TheoremACase::new(CaseTag::Cyclic, AbelianInvariants::trivial(), "cyclic"));
    }
    if let Some(p) = g.p_group_prime() {
        return Ok(classify_p_group(g, p).with_prime(p));
    }
    match qe_decomposition(g)? {
        None => classify_not_quasi_elementary(g),
        Some(dec) => classify_quasi_elementary(g, dec),
    }
}

fn classify_p_group(g: &PermGroup, p: u64) -> TheoremACase {
    if is_dihedral_2group(g) {
        return TheoremACase::new(CaseTag::Dihedral2n, AbelianInvariants::elementary(2, 1), "dihedral 2-group of order at least 8");
    }
    if is_heisenberg(g).is_some() {
        return TheoremACase::new(CaseTag::Heisenberg, AbelianInvariants::elementary(p, p as usize), "Heisenberg group of order p^3");
    }
    if g.order() as u64 == p * p {
        return TheoremACase::new(CaseTag::Case3b, AbelianInvariants::free(1), "elementary abelian of rank 2");
    }
    TheoremACase::none("p-group that is not C_p x C_p, dihedral or Heisenberg")
}

fn classify_not_quasi_elementary(g: &PermGroup) -> Result<TheoremACase> {
    let mut all_cyclic = true;
    let mut candidates: Vec<u64> = factorize(g.order() as u64).into_iter().map(|(p, _)| p).collect();
    let mut blocker = None;
    for n in g.normal_subgroups()? {
        if n.is_trivial() || n.order() == g.order() {
            continue;
        }
        let (q, _) = g.quotient(&n)?;
        if q.is_cyclic() {
            continue;
        }
        all_cyclic = false;
        let whole = q.whole();
        candidates.retain(|&p| q.is_p_quasi_elementary(&whole, p));
        if candidates.is_empty() && blocker.is_none() {
            blocker = Some(n);
        }
    }
    let minimal = g.minimal_normal_subgroups()?;
    let tag = if minimal.len() == 1 { CaseTag::Case3a } else { CaseTag::Case3b };
    if all_cyclic {
        let mut case = TheoremACase::new(tag, AbelianInvariants::free(1), "not quasi-elementary, every proper quotient cyclic");
        for m in &minimal {
            case = case.witness("minimal normal", m);
        }
        return Ok(case);
    }
    if let Some(&p) = candidates.first() {
        let mut case = TheoremACase::new(
            tag,
            AbelianInvariants::elementary(p, 1),
            format!("not quasi-elementary, every proper quotient {p}-quasi-elementary"),
        )
        .with_prime(p);
        for m in &minimal {
            case = case.witness("minimal normal", m);
        }
        return Ok(case);
    }
    let mut case = TheoremACase::none("not quasi-elementary, some proper quotients are not p-quasi-elementary for a common p");
    if let Some(n) = blocker {
        case = case.witness("kernel of a blocking quotient", &n);
    }
    Ok(case)
}

fn classify_quasi_elementary(g: &PermGroup, dec: QEDecomposition) -> Result<TheoremACase> {
    let p = dec.p;
    let decided = decide_quasi_elementary(g, &dec)?;
    let mut case = decided.with_prime(p).witness("C", &dec.c).witness("P", &dec.p_sub).witness("K", &dec.k);
    case.decomposition = Some(dec);
    Ok(case)
}

fn decide_quasi_elementary(g: &PermGroup, dec: &QEDecomposition) -> Result<TheoremACase> {
    let p = dec.p;
    let t = dec.t();
    if !dec.squarefree {
        return Ok(TheoremACase::none("|C| is not squarefree"));
    }
    if !dec.k.is_trivial() && !k_is_admissible(g, dec)? {
        return Ok(TheoremACase::none("K is neither D8 nor of normal p-rank one"));
    }
    if dec.kj.iter().any(|kj| *kj == dec.k) {
        return Ok(TheoremACase::none("some K_j equals K"));
    }
    if dec.k.is_trivial() {
        if t == 1 {
            return Ok(TheoremACase::new(CaseTag::Case3a, AbelianInvariants::free(1), "C_l x| P with P acting faithfully"));
        }
        let sigs = signatures(g, dec)?;
        let ones = sigs.iter().find(|(_, s)| s.iter().all(|&b| b));
        let zeros = sigs.iter().find(|(_, s)| s.iter().all(|&b| !b));
        let only_extremes = sigs.iter().all(|(_, s)| s.iter().all(|&b| b) || s.iter().all(|&b| !b));
        return Ok(match (ones, zeros, only_extremes) {
            (Some((m, _)), Some((m2, _)), true) => TheoremACase::new(
                CaseTag::Case4a,
                AbelianInvariants::elementary(p, 1),
                "K trivial and the signatures are exactly all-ones and all-zeros",
            )
            .witness("M", m)
            .witness("M'", m2),
            _ => TheoremACase::none("K trivial with t > 1 and other signatures"),
        });
    }
    if dec.k.order() as u64 == p {
        if let Some(h) = direct_complement(g, dec)? {
            let phi = g.frattini_of(&dec.p_sub)?;
            let images: Vec<Subgroup> = dec.kj.iter().map(|kj| g.join(kj, &phi)).collect();
            let equal = images.iter().all(|x| *x == images[0]);
            let two_dim = images[0].order() == phi.order() * (p * p) as usize;
            if equal && two_dim {
                if p == 2 {
                    return Ok(TheoremACase::none("P = K x H with p = 2 gives rank p - 2 = 0"));
                }
                return Ok(TheoremACase::new(
                    CaseTag::Case4b,
                    AbelianInvariants::elementary(p, p as usize - 2),
                    "P = K x H and all K_j have the same two-dimensional Frattini image",
                )
                .witness("H", &h));
            }
            return Ok(TheoremACase::none("P = K x H but the Frattini images of K_j differ or are not two-dimensional"));
        }
    }
    let graph = gamma_graph(g, dec)?;
    let d = graph.components;
    let mut case = if d > 1 {
        TheoremACase::new(CaseTag::Case4c, AbelianInvariants::elementary(p, d - 1), format!("graph has {d} components"))
    } else {
        TheoremACase::none("graph is connected")
    };
    case.graph = Some(graph);
    Ok(case)
}

/// An index-`p` subgroup of `P` not containing `K`, when `|K| = p`.
fn direct_complement(g: &PermGroup, dec: &QEDecomposition) -> Result<Option<Subgroup>> {
    Ok(g.maximal_subgroups_of(&dec.p_sub)?.into_iter().find(|m| !dec.k.is_subgroup_of(m)))
}

/// Relations generating Prim(G) according to the classification, one per
/// primitive generator. Empty when no primitive relations exist.
pub fn primitive_generators(table: &Arc<SubgroupClassTable>, case: &TheoremACase) -> Result<Vec<BurnsideElement>> {
    let g = table.group();
    Ok(match case.tag {
        CaseTag::Cyclic | CaseTag::NoPrimitive => Vec::new(),
        CaseTag::Dihedral2n => vec![dihedral(table)?],
        CaseTag::Heisenberg => heisenberg_family(table)?,
        CaseTag::Case3a | CaseTag::Case3b => {
            if g.p_group_prime().is_some() {
                vec![cpcp(table)?]
            } else if let Some(theta) = soluble_case3_relation(table)? {
                vec![theta]
            } else {
                crate::relations::solomon_relation(table)?.into_iter().collect()
            }
        }
        CaseTag::Case4a => vec![case4a(table)?],
        CaseTag::Case4b => case4b_family(table)?,
        CaseTag::Case4c => case4c_family(table)?,
    })
}

/// Structural prediction next to the computed Prim(G).
#[derive(Clone, Debug)]
pub struct TheoremACheck {
    pub case: TheoremACase,
    pub computed: AbelianInvariants,
}

impl TheoremACheck {
    pub fn matches(&self) -> bool {
        self.case.predicted == self.computed
    }
}

pub fn verify_theorem_a(table: &Arc<SubgroupClassTable>) -> Result<TheoremACheck> {
    let case = classify(table.group())?;
    let computed = prim_structure(table)?.invariants().clone();
    Ok(TheoremACheck { case, computed })
}
