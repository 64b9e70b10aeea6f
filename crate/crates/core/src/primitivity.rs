//! Imprimitive relations and the quotient Prim(G).

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::burnside::{quotient_table, subgroup_table, BurnsideElement, SubgroupClassTable};
use crate::error::{Error, Result};
use crate::linalg::{relative_coordinates, snf, AbelianInvariants, IntMatrix, LatticeBasis, Snf};
use crate::relations::{kernel_lattice, RelationLattice};

/// Relations induced from every proper class representative and inflated from
/// every quotient by a nontrivial normal subgroup. Cyclic subgroups and cyclic
/// quotients contribute nothing and are skipped.
pub fn imprimitive_sublattice(table: &Arc<SubgroupClassTable>) -> Result<Vec<BurnsideElement>> {
    let g = table.group();
    let mut out = Vec::new();
    for i in 0..table.top() {
        let class = table.class(i);
        if class.is_cyclic() {
            continue;
        }
        let (sub, emb) = subgroup_table(table, class.rep())?;
        for b in kernel_lattice(&sub)?.basis() {
            out.push(b.induct(&emb, table)?);
        }
    }
    for n in g.normal_subgroups()? {
        if n.is_trivial() {
            continue;
        }
        let (q, epi) = quotient_table(table, &n)?;
        if q.group().is_cyclic() {
            continue;
        }
        for b in kernel_lattice(&q)?.basis() {
            out.push(b.inflate(&epi, table)?);
        }
    }
    Ok(out)
}

/// K(G), its imprimitive sublattice and the Smith form of the inclusion.
#[derive(Clone, Debug)]
pub struct PrimStructure {
    kernel: RelationLattice,
    imprimitive: LatticeBasis,
    smith: Snf,
    invariants: AbelianInvariants,
}

impl PrimStructure {
    pub fn invariants(&self) -> &AbelianInvariants {
        &self.invariants
    }

    pub fn kernel(&self) -> &RelationLattice {
        &self.kernel
    }

    pub fn table(&self) -> &Arc<SubgroupClassTable> {
        self.kernel.table()
    }

    /// The HNF basis of the imprimitive sublattice.
    pub fn imprimitive_basis(&self) -> Vec<BurnsideElement> {
        self.imprimitive
            .basis_rows()
            .into_iter()
            .map(|r| BurnsideElement::from_coeffs(self.kernel.table(), r).expect("row length matches the table"))
            .collect()
    }

    pub fn imprimitive_lattice(&self) -> &LatticeBasis {
        &self.imprimitive
    }

    /// Image of a relation in Prim(G): torsion coordinates modulo the invariant
    /// factors, then free coordinates.
    pub fn prim_class(&self, theta: &BurnsideElement) -> Result<Vec<BigInt>> {
        let x = self.kernel.coordinates(theta)?.ok_or(Error::NotRelation)?;
        Ok(self.smith.cokernel_coordinates(&x))
    }

    pub fn is_imprimitive(&self, theta: &BurnsideElement) -> Result<bool> {
        Ok(self.prim_class(theta)?.iter().all(Zero::is_zero))
    }
}

pub fn prim_structure(table: &Arc<SubgroupClassTable>) -> Result<PrimStructure> {
    let kernel = kernel_lattice(table)?;
    let gens = imprimitive_sublattice(table)?;
    let rows: Vec<Vec<BigInt>> = gens.iter().map(|b| b.coeffs().to_vec()).collect();
    let imprimitive = LatticeBasis::from_generators_reduced(&IntMatrix::from_rows(table.len(), rows));
    let rel = relative_coordinates(kernel.lattice(), &imprimitive)?;
    let smith = snf(&rel);
    let invariants = smith.cokernel();
    Ok(PrimStructure { kernel, imprimitive, smith, invariants })
}
