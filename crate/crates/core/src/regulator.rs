//! Regulator constants of the trivial module.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::burnside::{BurnsideElement, SubgroupClassTable};
use crate::error::{Error, Result};
use crate::group::{PermGroup, Subgroup};
use crate::relations::{kernel_lattice, RelationLattice};
use crate::util::{factorize, is_prime, valuation};

/// `∏ p^ord(p)` as an exact rational, with the valuations kept alongside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegulatorValue {
    pub value: BigRational,
    /// Nonzero valuations only.
    pub ord: BTreeMap<u64, BigInt>,
}

impl RegulatorValue {
    pub fn one() -> Self {
        RegulatorValue { value: BigRational::one(), ord: BTreeMap::new() }
    }

    pub fn ord_at(&self, l: u64) -> BigInt {
        self.ord.get(&l).cloned().unwrap_or_default()
    }

    fn from_ord(ord: BTreeMap<u64, BigInt>) -> Result<Self> {
        let ord: BTreeMap<u64, BigInt> = ord.into_iter().filter(|(_, e)| !e.is_zero()).collect();
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (&p, e) in &ord {
            let k = e.abs().to_u32().ok_or_else(|| Error::Resource(format!("valuation {e} at {p} is too large")))?;
            let f = BigInt::from(p).pow(k);
            if e.is_positive() {
                num *= f;
            } else {
                den *= f;
            }
        }
        Ok(RegulatorValue { value: BigRational::new(num, den), ord })
    }

    /// The product of two values.
    pub fn mul(&self, other: &Self) -> Self {
        let mut ord = self.ord.clone();
        for (&p, e) in &other.ord {
            *ord.entry(p).or_default() += e;
        }
        RegulatorValue::from_ord(ord).expect("valuations of a product of representable values stay representable")
    }
}

impl fmt::Display for RegulatorValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.value.numer(), self.value.denom())
    }
}

fn ord_map(theta: &BurnsideElement) -> BTreeMap<u64, BigInt> {
    let table = theta.table();
    let mut ord: BTreeMap<u64, BigInt> = BTreeMap::new();
    for i in theta.support() {
        let n = theta.coeff(i);
        for (p, e) in factorize(table.class(i).order() as u64) {
            *ord.entry(p).or_default() -= n * e;
        }
    }
    ord
}

/// `∏_H |H|^{-n_H}` for a relation `Θ = Σ n_H H`.
pub fn regulator_constant_trivial(theta: &BurnsideElement) -> Result<RegulatorValue> {
    if !theta.is_relation() {
        return Err(Error::NotRelation);
    }
    RegulatorValue::from_ord(ord_map(theta))
}

/// `ord_l` of the regulator constant on each HNF basis element of K(G).
pub fn ord_l_functional(k: &RelationLattice, l: u64) -> Vec<BigInt> {
    let table = k.table();
    let weights: Vec<u32> = table.classes().iter().map(|c| valuation(c.order() as u64, l)).collect();
    k.lattice()
        .basis_rows()
        .iter()
        .map(|row| -row.iter().zip(&weights).filter(|(_, &w)| w > 0).map(|(n, &w)| n * w).sum::<BigInt>())
        .collect()
}

/// Whether some relation of `G` has nonzero `ord_l` regulator constant.
pub fn has_nonzero_ordl(table: &Arc<SubgroupClassTable>, l: u64) -> Result<bool> {
    if table.group().order() as u64 % l != 0 {
        return Ok(false);
    }
    let k = kernel_lattice(table)?;
    Ok(ord_l_functional(&k, l).iter().any(|x| !x.is_zero()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriticalKind {
    /// `C_l × C_l`.
    Elementary,
    /// `C_l ⋊ C_p` with `C_p` acting faithfully.
    Frobenius { p: u64 },
}

/// A subquotient `H/N` realising one of the two critical shapes at `l`.
#[derive(Clone, Debug)]
pub struct CriticalSubquotient {
    pub h: Subgroup,
    pub n: Subgroup,
    pub kind: CriticalKind,
}

/// Searches pairs `N ⊴ H` over subgroup class representatives.
pub fn critical_subquotient(table: &SubgroupClassTable, l: u64) -> Result<Option<CriticalSubquotient>> {
    if !is_prime(l) {
        return Err(Error::Param(format!("{l} is not prime")));
    }
    let g = table.group();
    for class in table.classes() {
        let h = class.rep();
        let order = h.order() as u64;
        if order % l != 0 || order < l * 2 {
            continue;
        }
        for n in g.normal_subgroups_of(h)? {
            let q = order / n.order() as u64;
            if q == l * l {
                if h.elements().all(|x| n.contains(g.pow(x, l as usize))) {
                    return Ok(Some(CriticalSubquotient { h: h.clone(), n, kind: CriticalKind::Elementary }));
                }
            } else if q % l == 0 && is_prime(q / l) && q / l < l && !abelian_mod(g, h, &n) {
                return Ok(Some(CriticalSubquotient { h: h.clone(), n, kind: CriticalKind::Frobenius { p: q / l } }));
            }
        }
    }
    Ok(None)
}

fn abelian_mod(g: &PermGroup, h: &Subgroup, n: &Subgroup) -> bool {
    let gens = h.generators();
    gens.iter().all(|&a| gens.iter().all(|&b| n.contains(g.commutator(a, b))))
}

pub fn has_critical_subquotient(table: &SubgroupClassTable, l: u64) -> Result<bool> {
    Ok(critical_subquotient(table, l)?.is_some())
}
