//! The verification corpus shipped as a fixture.

use num_bigint::BigInt;
use serde::Deserialize;

use crate::classifier::CaseTag;
use crate::error::{Error, Result};
use crate::linalg::AbelianInvariants;

const FIXTURE: &str = include_str!("../fixtures/corpus.json");

#[derive(Deserialize)]
struct RawInvariants {
    free: usize,
    torsion: Vec<String>,
}

#[derive(Deserialize)]
struct RawEntry {
    name: String,
    order: usize,
    tag: Option<String>,
    prim: Option<RawInvariants>,
    basis: String,
    slow: bool,
    prim_optional: bool,
}

#[derive(Deserialize)]
struct RawCorpus {
    schema: u32,
    standard: Vec<RawEntry>,
    extended: Vec<RawEntry>,
}

/// How an expected value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    /// Follows from the group's structure by a short hand argument.
    ClosedForm,
    /// Stated in the source literature as a worked example.
    WorkedExample,
    /// No independent expectation; the classifier is compared with brute force.
    CrossCheck,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub order: usize,
    pub tag: Option<CaseTag>,
    pub prim: Option<AbelianInvariants>,
    pub basis: Basis,
    pub slow: bool,
    pub prim_optional: bool,
}

#[derive(Clone, Debug)]
pub struct Corpus {
    pub standard: Vec<CorpusEntry>,
    pub extended: Vec<CorpusEntry>,
}

impl Corpus {
    pub fn entries(&self, extended: bool) -> impl Iterator<Item = &CorpusEntry> {
        self.standard.iter().chain(self.extended.iter().filter(move |_| extended))
    }
}

fn convert(raw: RawEntry) -> Result<CorpusEntry> {
    let tag = match raw.tag {
        Some(t) => Some(CaseTag::parse(&t).ok_or_else(|| Error::Parse(format!("unknown tag {t:?}")))?),
        None => None,
    };
    let prim = match raw.prim {
        Some(p) => {
            let torsion = p
                .torsion
                .iter()
                .map(|s| s.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad torsion entry {s:?}"))))
                .collect::<Result<Vec<_>>>()?;
            Some(AbelianInvariants { free_rank: p.free, torsion })
        }
        None => None,
    };
    let basis = match raw.basis.as_str() {
        "closed-form" => Basis::ClosedForm,
        "worked-example" => Basis::WorkedExample,
        "cross-check" => Basis::CrossCheck,
        other => return Err(Error::Parse(format!("unknown basis {other:?}"))),
    };
    Ok(CorpusEntry {
        name: raw.name,
        order: raw.order,
        tag,
        prim,
        basis,
        slow: raw.slow,
        prim_optional: raw.prim_optional,
    })
}

pub fn load_corpus() -> Result<Corpus> {
    let raw: RawCorpus = serde_json::from_str(FIXTURE).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.schema != 1 {
        return Err(Error::Parse(format!("unsupported corpus schema {}", raw.schema)));
    }
    Ok(Corpus {
        standard: raw.standard.into_iter().map(convert).collect::<Result<_>>()?,
        extended: raw.extended.into_iter().map(convert).collect::<Result<_>>()?,
    })
}
