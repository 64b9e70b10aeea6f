#![allow(dead_code)]

use std::sync::Arc;

use brauer_core::burnside::{BurnsideElement, SubgroupClassTable};
use brauer_core::catalog::parse_group_spec;
use brauer_core::group::{PermGroup, Subgroup};
use brauer_core::relations::RelationLattice;
use num_bigint::BigInt;
use rand::Rng;

pub mod props;

pub fn table(name: &str) -> Arc<SubgroupClassTable> {
    SubgroupClassTable::new(Arc::new(parse_group_spec(name).unwrap())).unwrap()
}

/// First class of the given order satisfying `pred`.
pub fn class_where(t: &SubgroupClassTable, order: usize, pred: impl Fn(&Subgroup) -> bool) -> usize {
    (0..t.len()).find(|&i| t.class(i).order() == order && pred(t.rep(i))).unwrap_or_else(|| panic!("no class of order {order}"))
}

/// The unique class of the given order.
pub fn class_of_order(t: &SubgroupClassTable, order: usize) -> usize {
    let found: Vec<usize> = (0..t.len()).filter(|&i| t.class(i).order() == order).collect();
    assert_eq!(found.len(), 1, "classes of order {order}: {found:?}");
    found[0]
}

pub fn elem(t: &Arc<SubgroupClassTable>, terms: &[(i64, usize)]) -> BurnsideElement {
    let mut e = BurnsideElement::zero(t);
    for &(c, i) in terms {
        e.add_term(i, &BigInt::from(c));
    }
    e
}

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Permutation character of `G/H`, one value per element of `G`.
pub fn perm_character(g: &PermGroup, h: &Subgroup) -> Vec<i64> {
    let n = g.order();
    (0..n)
        .map(|a| {
            let fixing = (0..n).filter(|&x| h.contains(g.conj(g.inv(x), a))).count();
            (fixing / h.order()) as i64
        })
        .collect()
}

/// Whether `Σ n_H C[G/H]` vanishes, computed from permutation characters.
pub fn is_relation_by_characters(theta: &BurnsideElement) -> bool {
    let t = theta.table();
    let g = t.group();
    let mut total = vec![BigInt::from(0); g.order()];
    for i in theta.support() {
        for (slot, v) in total.iter_mut().zip(perm_character(g, t.rep(i))) {
            *slot += theta.coeff(i) * v;
        }
    }
    total.iter().all(|v| v == &BigInt::from(0))
}

/// `[G/H]·[G/K]` as the sum over double cosets `HxK` of `[G/(H ∩ xKx⁻¹)]`.
pub fn double_coset_product(t: &Arc<SubgroupClassTable>, h: &Subgroup, k: &Subgroup) -> BurnsideElement {
    let g = t.group();
    let mut seen = vec![false; g.order()];
    let mut out = BurnsideElement::zero(t);
    for x in 0..g.order() {
        if seen[x] {
            continue;
        }
        for a in h.elements() {
            for b in k.elements() {
                seen[g.mul(g.mul(a, x), b)] = true;
            }
        }
        let meet = g.intersection(h, &g.conjugate(k, x));
        out.add_term(t.class_of(&meet).unwrap(), &BigInt::from(1));
    }
    out
}

pub fn random_element(t: &Arc<SubgroupClassTable>, rng: &mut impl Rng, bound: i64) -> BurnsideElement {
    let coeffs: Vec<BigInt> = (0..t.len()).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    BurnsideElement::from_coeffs(t, coeffs).unwrap()
}

pub fn random_relation(k: &RelationLattice, rng: &mut impl Rng, bound: i64) -> BurnsideElement {
    let mut out = BurnsideElement::zero(k.table());
    for b in k.basis() {
        out = out.add(&b.scale(&BigInt::from(rng.gen_range(-bound..=bound)))).unwrap();
    }
    out
}
