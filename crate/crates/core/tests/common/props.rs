//! Seeded randomized Burnside-ring checks, each returning the first failure.

use std::sync::Arc;

use brauer_core::burnside::{quotient_table, subgroup_table, BurnsideElement, SubgroupClassTable};
use brauer_core::relations::kernel_lattice;
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use super::{double_coset_product, random_element, random_relation};

pub const TRIALS: usize = 50;

pub type Check = std::result::Result<(), String>;

pub fn rng_for(name: &str, salt: u64) -> ChaCha8Rng {
    let seed = name.bytes().fold(salt, |h, b| h.wrapping_mul(0x100000001b3).wrapping_add(b as u64));
    ChaCha8Rng::seed_from_u64(seed)
}

fn proper_subgroups(t: &SubgroupClassTable) -> Vec<usize> {
    (0..t.len()).filter(|&i| i != t.top()).collect()
}

fn nontrivial_normals(t: &SubgroupClassTable) -> Vec<usize> {
    (1..t.len()).filter(|&i| t.class(i).is_normal()).collect()
}

pub fn marks_multiplicative(t: &Arc<SubgroupClassTable>, rng: &mut ChaCha8Rng) -> Check {
    for trial in 0..TRIALS {
        let i = rng.gen_range(0..t.len());
        let j = rng.gen_range(0..t.len());
        let expected = double_coset_product(t, t.rep(i), t.rep(j));
        let got = BurnsideElement::basis(t, i).multiply(&BurnsideElement::basis(t, j)).map_err(|e| e.to_string())?;
        if got != expected {
            return Err(format!("trial {trial}: [{}][{}] disagrees with double cosets", t.label(i), t.label(j)));
        }
        let x = random_element(t, rng, 4);
        let y = random_element(t, rng, 4);
        let xy = x.multiply(&y).map_err(|e| e.to_string())?;
        let prod: Vec<BigInt> = x.full_marks().iter().zip(y.full_marks()).map(|(a, b)| a * b).collect();
        if xy.full_marks() != prod {
            return Err(format!("trial {trial}: marks of a product are not the product of marks"));
        }
    }
    Ok(())
}

pub fn product_is_ind_res(t: &Arc<SubgroupClassTable>, rng: &mut ChaCha8Rng) -> Check {
    let k = kernel_lattice(t).map_err(|e| e.to_string())?;
    let subs = proper_subgroups(t);
    let tables: Vec<_> = subs.iter().map(|&h| subgroup_table(t, t.rep(h)).unwrap()).collect();
    for trial in 0..TRIALS {
        let s = rng.gen_range(0..subs.len().max(1));
        let h = subs.get(s).copied().unwrap_or(t.top());
        let theta = if k.rank() > 0 && trial % 2 == 0 { random_relation(&k, rng, 3) } else { random_element(t, rng, 3) };
        let lhs = theta.multiply(&BurnsideElement::basis(t, h)).map_err(|e| e.to_string())?;
        let rhs = match tables.get(s) {
            Some((ht, emb)) => theta.restrict(emb, ht).and_then(|r| r.induct(emb, t)).map_err(|e| e.to_string())?,
            None => theta.clone(),
        };
        if lhs != rhs {
            return Err(format!("trial {trial}: Θ·[G/{}] differs from Ind Res Θ", t.label(h)));
        }
        if theta.is_relation() && !lhs.is_relation() {
            return Err(format!("trial {trial}: Θ·[G/{}] is not a relation", t.label(h)));
        }
    }
    Ok(())
}

pub fn transport_preserves_relations(t: &Arc<SubgroupClassTable>, rng: &mut ChaCha8Rng) -> Check {
    let k = kernel_lattice(t).map_err(|e| e.to_string())?;
    let subs = proper_subgroups(t);
    let normals = nontrivial_normals(t);
    let sub_tables: Vec<_> = subs.iter().map(|&h| subgroup_table(t, t.rep(h)).unwrap()).collect();
    let sub_kernels: Vec<_> = sub_tables.iter().map(|(ht, _)| kernel_lattice(ht).unwrap()).collect();
    let quotients: Vec<_> = normals.iter().map(|&n| quotient_table(t, t.rep(n)).unwrap()).collect();
    let quot_kernels: Vec<_> = quotients.iter().map(|(q, _)| kernel_lattice(q).unwrap()).collect();
    let err = |e: brauer_core::Error| e.to_string();
    for trial in 0..TRIALS {
        if let Some(s) = (0..subs.len()).collect::<Vec<_>>().choose(rng).copied() {
            let (ht, emb) = &sub_tables[s];
            let up = random_relation(&sub_kernels[s], rng, 3).induct(emb, t).map_err(err)?;
            if !up.is_relation() {
                return Err(format!("trial {trial}: induction from {} broke a relation", t.label(subs[s])));
            }
            let down = random_relation(&k, rng, 3).restrict(emb, ht).map_err(err)?;
            if !down.is_relation() {
                return Err(format!("trial {trial}: restriction to {} broke a relation", t.label(subs[s])));
            }
        }
        if let Some(n) = (0..normals.len()).collect::<Vec<_>>().choose(rng).copied() {
            let (q, epi) = &quotients[n];
            let up = random_relation(&quot_kernels[n], rng, 3).inflate(epi, t).map_err(err)?;
            if !up.is_relation() {
                return Err(format!("trial {trial}: inflation from G/{} broke a relation", t.label(normals[n])));
            }
            let down = random_relation(&k, rng, 3).deflate(epi, q).map_err(err)?;
            if !down.is_relation() {
                return Err(format!("trial {trial}: deflation to G/{} broke a relation", t.label(normals[n])));
            }
        }
    }
    Ok(())
}

pub fn restriction_matches_marks(t: &Arc<SubgroupClassTable>, rng: &mut ChaCha8Rng) -> Check {
    let subs = proper_subgroups(t);
    let tables: Vec<_> = subs.iter().map(|&h| subgroup_table(t, t.rep(h)).unwrap()).collect();
    for trial in 0..TRIALS {
        let Some(s) = (0..subs.len()).collect::<Vec<_>>().choose(rng).copied() else {
            return Ok(());
        };
        let (ht, emb) = &tables[s];
        let x = random_element(t, rng, 4);
        let r = x.restrict(emb, ht).map_err(|e| e.to_string())?;
        let marks = r.full_marks();
        for j in 0..ht.len() {
            let l = emb.to_ambient(ht.rep(j)).map_err(|e| e.to_string())?;
            let ambient = x.mark_at(t.class_of(&l).map_err(|e| e.to_string())?);
            if marks[j] != ambient {
                return Err(format!("trial {trial}: Res to {} has mark {} at {}, ambient mark {}", t.label(subs[s]), marks[j], ht.label(j), ambient));
            }
        }
    }
    Ok(())
}

/// All four properties for one group, with the property name on failure.
pub fn all_properties(name: &str, t: &Arc<SubgroupClassTable>) -> Check {
    let checks: [(&str, fn(&Arc<SubgroupClassTable>, &mut ChaCha8Rng) -> Check); 4] = [
        ("marks multiplicativity", marks_multiplicative),
        ("product with G/H equals Ind Res", product_is_ind_res),
        ("transport preserves relations", transport_preserves_relations),
        ("restriction matches marks", restriction_matches_marks),
    ];
    for (salt, (label, check)) in checks.iter().enumerate() {
        check(t, &mut rng_for(name, salt as u64)).map_err(|e| format!("{name}: {label}: {e}"))?;
    }
    Ok(())
}
