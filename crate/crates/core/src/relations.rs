//! Brauer relations: the kernel K(G), Artin relations and Solomon relations.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::burnside::{BurnsideElement, SubgroupClassTable};
use crate::error::{Error, Result};
use crate::linalg::{hnf_only, integer_kernel, IntMatrix, LatticeBasis};

/// The lattice K(G) in class coordinates.
#[derive(Clone, Debug)]
pub struct RelationLattice {
    table: Arc<SubgroupClassTable>,
    lattice: LatticeBasis,
}

impl RelationLattice {
    pub fn table(&self) -> &Arc<SubgroupClassTable> {
        &self.table
    }

    pub fn lattice(&self) -> &LatticeBasis {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// The HNF basis as Burnside ring elements.
    pub fn basis(&self) -> Vec<BurnsideElement> {
        self.lattice
            .basis_rows()
            .into_iter()
            .map(|r| BurnsideElement::from_coeffs(&self.table, r).expect("row length matches the table"))
            .collect()
    }

    /// Coordinates of `theta` in the HNF basis, or `None` if it is not a relation.
    pub fn coordinates(&self, theta: &BurnsideElement) -> Result<Option<Vec<BigInt>>> {
        if theta.table().group().id() != self.table.group().id() {
            return Err(Error::TableMismatch);
        }
        Ok(self.lattice.coordinates_in_hnf(theta.coeffs()))
    }

    pub fn contains(&self, theta: &BurnsideElement) -> Result<bool> {
        Ok(self.coordinates(theta)?.is_some())
    }
}

/// Integer kernel of the cyclic-marks matrix. Its rank must equal the number of
/// non-cyclic classes; anything else is reported as an internal error.
pub fn kernel_lattice(table: &Arc<SubgroupClassTable>) -> Result<RelationLattice> {
    let m = IntMatrix::from_rows(table.cyclic_class_indices().len(), table.cyclic_marks_matrix());
    let lattice = integer_kernel(&m);
    if lattice.rank() != table.non_cyclic_count() {
        return Err(Error::Internal(format!(
            "kernel rank {} differs from the {} non-cyclic classes",
            lattice.rank(),
            table.non_cyclic_count()
        )));
    }
    Ok(RelationLattice { table: table.clone(), lattice })
}

/// The relation `|H|·H − Σ n_C C` with `C` running over cyclic subgroups of `H`.
///
/// The cyclic-marks matrix is triangular on cyclic classes, so the `n_C` are unique.
pub fn artin_relation(table: &Arc<SubgroupClassTable>, h: usize) -> Result<BurnsideElement> {
    if table.class(h).is_cyclic() {
        return Err(Error::Param(format!("class {h} is cyclic")));
    }
    let order = BigInt::from(table.class(h).order());
    let cyclic = table.cyclic_class_indices();
    let mut n: Vec<BigInt> = vec![BigInt::zero(); cyclic.len()];
    for a in (0..cyclic.len()).rev() {
        let l = cyclic[a];
        let mut r = &order * table.mark(l, h);
        for b in a + 1..cyclic.len() {
            if !n[b].is_zero() {
                r -= &n[b] * table.mark(l, cyclic[b]);
            }
        }
        let (q, rem) = r.div_rem(&BigInt::from(table.mark(l, l)));
        if !rem.is_zero() {
            return Err(Error::Internal(format!("non-integral Artin coefficient at class {l}")));
        }
        if !q.is_zero() && table.mark(l, h) == 0 {
            return Err(Error::Internal(format!("Artin relation leaves the subgroups of class {h}")));
        }
        n[a] = q;
    }
    let mut theta = BurnsideElement::zero(table);
    theta.add_term(h, &order);
    for (a, &c) in cyclic.iter().enumerate() {
        theta.add_term(c, &-&n[a]);
    }
    Ok(theta)
}

/// A relation with coefficient 1 at `G`, supported otherwise on quasi-elementary classes.
///
/// Returns `Ok(None)` when `G` is itself quasi-elementary: then `G` is an allowed
/// term and no such relation exists with proper support.
pub fn solomon_relation(table: &Arc<SubgroupClassTable>) -> Result<Option<BurnsideElement>> {
    let g = table.group();
    let top = table.top();
    if g.is_quasi_elementary(table.rep(top)) {
        return Ok(None);
    }
    let k = kernel_lattice(table)?;
    let basis = k.lattice().basis_matrix();
    let forbidden: Vec<usize> =
        (0..top).filter(|&i| !g.is_quasi_elementary(table.rep(i))).collect();
    // combinations of basis rows vanishing on the forbidden classes
    let restricted = IntMatrix::from_rows(
        forbidden.len(),
        (0..basis.rows()).map(|r| forbidden.iter().map(|&j| basis.get(r, j).clone()).collect()).collect(),
    );
    let combos = integer_kernel(&restricted).basis_matrix();
    let allowed = combos.mul(&basis);
    // put G first so the HNF pivot there is the gcd of achievable coefficients
    let order: Vec<usize> = std::iter::once(top).chain(0..top).collect();
    let permuted = IntMatrix::from_rows(
        order.len(),
        (0..allowed.rows()).map(|r| order.iter().map(|&j| allowed.get(r, j).clone()).collect()).collect(),
    );
    let h = hnf_only(&permuted);
    if h.rows() == 0 || !h.get(0, 0).is_one() {
        return Err(Error::Internal("no Solomon relation with coefficient 1 at G".into()));
    }
    let mut coeffs = vec![BigInt::zero(); table.len()];
    for (pos, &j) in order.iter().enumerate() {
        coeffs[j] = h.get(0, pos).clone();
    }
    let theta = BurnsideElement::from_coeffs(table, coeffs)?;
    debug_assert!(theta.is_relation());
    Ok(Some(theta))
}

/// gcd of the coefficients of `G` over K(G); 0 when every relation avoids `G`.
pub fn coefficient_gcd_at_top(k: &RelationLattice) -> BigInt {
    let top = k.table().top();
    k.lattice().basis_rows().iter().fold(BigInt::zero(), |acc, r| acc.gcd(&r[top]))
}
