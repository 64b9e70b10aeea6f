mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use brauer_core::burnside::SubgroupClassTable;
use brauer_core::catalog::parse_group_spec;
use brauer_core::classifier::*;
use brauer_core::group::{PermGroup, Permutation, Subgroup};
use brauer_core::linalg::{integer_kernel, AbelianInvariants, IntMatrix};
use brauer_core::primitivity::prim_structure;
use brauer_core::relations::kernel_lattice;
use brauer_core::Error;
use common::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn group(name: &str) -> PermGroup {
    parse_group_spec(name).unwrap()
}

/// Generator `k` of the catalog presentation, as an element index.
fn gen(g: &PermGroup, k: usize) -> usize {
    g.generator_indices()[k]
}

#[test]
fn qe_decomposition_examples() {
    let g = group("F20");
    let d = qe_decomposition(&g).unwrap().unwrap();
    assert_eq!((d.p, d.c.order(), d.p_sub.order(), d.k.order(), d.t()), (2, 5, 4, 1, 1));
    assert_eq!(d.kj, vec![d.p_sub.clone()]);
    assert!(d.squarefree && d.zp.is_none() && d.c_k.is_none());

    let g = group("sd:C7:C3xC3:2;1");
    let d = qe_decomposition(&g).unwrap().unwrap();
    assert_eq!((d.p, d.k.order(), d.chat.order(), d.t()), (3, 3, 21, 1));
    assert_eq!(d.c_k.as_ref(), Some(&d.k));
    assert_eq!(d.zp.as_ref(), Some(&d.k));

    let g = group("sd:C5xC13:C4xC2:2,5;4,1");
    let d = qe_decomposition(&g).unwrap().unwrap();
    let (a, b) = (gen(&g, 2), gen(&g, 3));
    assert_eq!(d.primes, vec![5, 13]);
    assert!(d.k.is_trivial());
    assert_eq!(d.kj[0], g.cyclic_subgroup(b));
    assert_eq!(d.kj[1], g.cyclic_subgroup(g.mul(g.pow(a, 2), b)));

    assert!(qe_decomposition(&group("A4")).unwrap().is_none());
    assert!(qe_decomposition(&group("S4")).unwrap().is_none());
    let d = qe_decomposition(&group("sd:C9:C4:8")).unwrap().unwrap();
    assert!(!d.squarefree);
}

#[test]
fn signature_examples() {
    let g = group("sd:C5xC13:C4xC2:2,5;4,1");
    let d = qe_decomposition(&g).unwrap().unwrap();
    let sigs: BTreeSet<Vec<bool>> = signatures(&g, &d).unwrap().into_iter().map(|(_, s)| s).collect();
    assert_eq!(sigs, BTreeSet::from([vec![true, true], vec![false, false]]));

    let g = group("F20");
    let d = qe_decomposition(&g).unwrap().unwrap();
    assert!(signatures(&g, &d).unwrap().iter().all(|(_, s)| s == &vec![false]));
}

#[test]
fn gamma_graph_examples() {
    let g = group("sd:C5:C4xC4:2;1");
    let d = qe_decomposition(&g).unwrap().unwrap();
    let (a, b) = (gen(&g, 1), gen(&g, 2));
    let h = |j: usize| g.cyclic_subgroup(g.mul(a, g.pow(b, j)));
    let graph = gamma_graph(&g, &d).unwrap();
    let expected: BTreeSet<Vec<usize>> = (0..4).map(|j| h(j).element_vec()).collect();
    let got: BTreeSet<Vec<usize>> = graph.vertices.iter().map(|v| v.element_vec()).collect();
    assert_eq!(got, expected);
    assert_eq!(graph.components, 2);
    let pos = |s: &Subgroup| graph.vertices.iter().position(|v| v == s).unwrap();
    let comp = |j: usize| graph.component[pos(&h(j))];
    assert_eq!(comp(0), comp(2));
    assert_eq!(comp(1), comp(3));
    assert_ne!(comp(0), comp(1));
    assert!(graph.edges.iter().all(|&(_, _, r)| r == EdgeReason::ProperJoin));

    let g = group("sd:C5:C8:2");
    let d = qe_decomposition(&g).unwrap().unwrap();
    let graph = gamma_graph(&g, &d).unwrap();
    assert_eq!(graph.vertices.len(), 1);
    assert!(graph.vertices[0].is_trivial());
    assert_eq!(graph.components, 1);

    let g = group("F20");
    let d = qe_decomposition(&g).unwrap().unwrap();
    assert!(matches!(gamma_graph(&g, &d), Err(Error::Shape(_))));
}

#[test]
fn classify_examples() {
    let cases: [(&str, CaseTag, AbelianInvariants); 12] = [
        ("D16", CaseTag::Dihedral2n, AbelianInvariants::elementary(2, 1)),
        ("D8", CaseTag::Dihedral2n, AbelianInvariants::elementary(2, 1)),
        ("Heis3", CaseTag::Heisenberg, AbelianInvariants::elementary(3, 3)),
        ("S4", CaseTag::Case3a, AbelianInvariants::elementary(2, 1)),
        ("A5", CaseTag::Case3a, AbelianInvariants::free(1)),
        ("F20", CaseTag::Case3a, AbelianInvariants::free(1)),
        ("C3xC3", CaseTag::Case3b, AbelianInvariants::free(1)),
        ("sd:C7:C3xC3:2;1", CaseTag::Case4b, AbelianInvariants::elementary(3, 1)),
        ("sd:C5:C4xC4:2;1", CaseTag::Case4c, AbelianInvariants::elementary(2, 1)),
        ("sd:C5xC13:C4xC2:2,5;4,1", CaseTag::Case4a, AbelianInvariants::elementary(2, 1)),
        ("C6", CaseTag::Cyclic, AbelianInvariants::trivial()),
        ("sd:C3xC5:C4:2,2", CaseTag::NoPrimitive, AbelianInvariants::trivial()),
    ];
    for (name, tag, prim) in cases {
        let c = classify(&group(name)).unwrap();
        assert_eq!(c.tag, tag, "{name}");
        assert_eq!(c.predicted, prim, "{name}");
    }
    let c = classify(&group("sd:C5:C4xC4:2;1")).unwrap();
    assert_eq!(c.graph.unwrap().components, 2);
}

#[test]
fn verify_reports_match() {
    for name in ["A5", "C6", "SL(2,3)", "sd:C7:C3xC3:2;1"] {
        let check = verify_theorem_a(&table(name)).unwrap();
        assert!(check.matches(), "{name}: {} vs {}", check.case.predicted, check.computed);
    }
}

#[test]
fn worked_builder_examples() {
    let t = table("F20");
    let g = t.group().clone();
    let (c2, c4, c5, d10) = (class_of_order(&t, 2), class_of_order(&t, 4), class_of_order(&t, 5), class_of_order(&t, 10));
    let theta = mod_c(&t, &[(1, g.trivial_subgroup()), (-2, t.rep(c2).clone())]).unwrap();
    assert_eq!(theta, elem(&t, &[(1, 0), (-1, c5), (-2, c2), (2, d10)]));

    let b1 = theorem_b1(&t, t.rep(c2)).unwrap();
    assert_eq!(b1, elem(&t, &[(2, t.top()), (-2, c4), (1, c2), (-1, d10)]));
    assert_eq!(cyclic_semidirect(&t, 2).unwrap(), b1);
    assert_eq!(g20_prime_power(&t).unwrap(), b1);
    assert_eq!(cyclic_semidirect(&t, 1).unwrap(), elem(&t, &[(4, t.top()), (-4, c4), (1, 0), (-1, c5)]));
    assert!(matches!(cyclic_semidirect(&t, 4), Err(Error::Param(_))));
    assert!(matches!(cyclic_semidirect(&t, 3), Err(Error::Param(_))));

    let a4 = table("A4");
    let expected = elem(&a4, &[(1, a4.top()), (-1, class_of_order(&a4, 3)), (1, class_of_order(&a4, 2)), (-1, class_of_order(&a4, 4))]);
    assert_eq!(serre(&a4).unwrap(), expected);
    assert_eq!(theorem_b2(&a4).unwrap(), expected);

    let t = table("sd:C5:C4xC4:2;1");
    let g = t.group().clone();
    let (a, b) = (gen(&g, 1), gen(&g, 2));
    let theta = case4c(&t, &g.cyclic_subgroup(a), &g.cyclic_subgroup(g.mul(a, b))).unwrap();
    let ps = prim_structure(&t).unwrap();
    assert!(!ps.is_imprimitive(&theta).unwrap());
    assert_eq!(ps.invariants(), &AbelianInvariants::elementary(2, 1));
    assert!(matches!(case4c(&t, &g.cyclic_subgroup(a), &g.cyclic_subgroup(g.mul(a, g.pow(b, 2)))), Err(Error::Param(_))));
}

#[test]
fn shape_errors() {
    assert!(matches!(dihedral(&table("Q8")), Err(Error::Shape(_))));
    assert!(matches!(heisenberg(&table("D8"), 1), Err(Error::Shape(_))));
    assert!(matches!(heisenberg(&table("Heis3"), 4), Err(Error::Param(_))));
    assert!(matches!(cpcp(&table("C4")), Err(Error::Shape(_))));
    assert!(matches!(serre(&table("F20")), Err(Error::Shape(_))));
    assert!(matches!(g20_prime_power(&table("A4")), Err(Error::Shape(_))));
    assert!(matches!(g20_composite(&table("F20"), None), Err(Error::Param(_))));
    assert!(matches!(case4a(&table("F20")), Err(Error::Shape(_))));
    assert!(matches!(case4b_family(&table("F20")), Err(Error::Shape(_))));
    assert!(matches!(mod_c(&table("A4"), &[]), Err(Error::Shape(_))));
    // K = C2 x C2 is not admissible, so the Möbius sum over Ĉ need not be a relation
    let v4 = table("C2xC2");
    assert!(matches!(case4c_family(&v4), Err(Error::Shape(_))));
    let lines: Vec<_> = (1..v4.len()).filter(|&i| v4.class(i).order() == 2).map(|i| v4.rep(i).clone()).collect();
    assert!(matches!(mod_c(&v4, &[(1, lines[0].clone()), (-1, lines[1].clone())]), Err(Error::Shape(_))));
    assert!(matches!(mod_c(&table("sd:C9:C4:8"), &[]), Err(Error::Shape(_))));
    let t = table("F20");
    let c5 = t.rep(class_of_order(&t, 5)).clone();
    assert!(matches!(mod_c(&t, &[(1, c5.clone()), (-1, c5)]), Err(Error::Param(_))));
}

#[test]
fn g20_composite_coefficients() {
    let t = table("sd:C7:C6:3");
    for m in [None, Some(2), Some(3)] {
        let theta = g20_composite(&t, m).unwrap();
        assert!(is_relation_by_characters(&theta));
        assert_eq!(theta.coeff(t.top()), &BigInt::from(1));
    }
    // m = 2, n = 3: α = 2⁻¹ mod 3 = 2, β = (1 − 4)/3 = −1
    let theta = g20_composite(&t, Some(2)).unwrap();
    assert_eq!(theta.coeff(class_of_order(&t, 3)), &BigInt::from(2));
    assert_eq!(theta.coeff(class_of_order(&t, 2)), &BigInt::from(-1));
    assert!(matches!(g20_composite(&t, Some(6)), Err(Error::Param(_))));
}

#[test]
fn pgroup_bouc_subquotients() {
    let t = table("D16");
    let g = t.group().clone();
    let whole = g.whole();
    let theta = pgroup_bouc(&t, &whole, &g.trivial_subgroup()).unwrap();
    assert_eq!(theta, dihedral(&t).unwrap());
    let ps = prim_structure(&t).unwrap();
    // D16 / Z is D8, whose relation lifts to an imprimitive one
    let lifted = pgroup_bouc(&t, &whole, &g.centre()).unwrap();
    assert!(ps.is_imprimitive(&lifted).unwrap());
    let d8 = t.rep(class_where(&t, 8, |h| !g.subgroup_is_cyclic(h))).clone();
    assert!(ps.is_imprimitive(&pgroup_bouc(&t, &d8, &g.trivial_subgroup()).unwrap()).unwrap());

    let t = table("Q8");
    let g = t.group().clone();
    let theta = pgroup_bouc(&t, &g.whole(), &g.centre()).unwrap();
    assert!(is_relation_by_characters(&theta) && !theta.is_zero());

    let t = table("Heis3");
    let g = t.group().clone();
    let theta = pgroup_bouc(&t, &g.whole(), &g.trivial_subgroup()).unwrap();
    assert!(!prim_structure(&t).unwrap().is_imprimitive(&theta).unwrap());
    let v = t.rep(class_where(&t, 9, |_| true)).clone();
    assert!(pgroup_bouc(&t, &v, &g.trivial_subgroup()).is_ok());
    assert!(matches!(pgroup_bouc(&t, &g.whole(), &g.centre()), Ok(_)));
    assert!(matches!(pgroup_bouc(&t, &g.trivial_subgroup(), &g.whole()), Err(Error::NotNormal)));
}

#[test]
fn every_builder_produces_relations() {
    for name in ["Heis3", "Heis5"] {
        let t = table(name);
        let fam = heisenberg_family(&t).unwrap();
        assert_eq!(fam.len() as u64, t.group().p_group_prime().unwrap());
        for theta in fam {
            assert!(theta.is_relation());
        }
    }
    for name in ["C2xC2", "C3xC3", "C5xC5"] {
        assert!(is_relation_by_characters(&cpcp(&table(name)).unwrap()));
    }
    for name in ["S4", "A4", "C3xS3", "S3xS3", "sd:C3xC3:C2:2,2", "sd:C3xC3:C4:[0 1],[2 0]", "C2xC2", "sd:C4xC4:C3:[0 1],[3 3]"] {
        let theta = serre(&table(name));
        if name == "sd:C4xC4:C3:[0 1],[3 3]" {
            assert!(theta.is_err());
        } else {
            assert!(is_relation_by_characters(&theta.unwrap()), "{name}");
        }
    }
    let t = table("sd:C7:C3xC3:2;1");
    let fam = case4b_family(&t).unwrap();
    assert_eq!(fam.len(), 1);
    assert!(case4b(&t, 2).is_ok() && case4b(&t, 3).is_err());
    let t = table("sd:C5xC13:C4xC2:2,5;4,1");
    assert!(case4a(&t).unwrap().is_relation());
}

#[test]
fn mod_c_condition_is_equivalent() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in ["F20", "sd:C5:C4xC4:2;1", "sd:C7:C3xC3:2;1", "sd:C5:C8:2", "sd:C3xC5:C4:2,2"] {
        let t = table(name);
        let g = t.group().clone();
        let d = qe_decomposition(&g).unwrap().unwrap();
        let pool: Vec<Subgroup> =
            g.all_subgroups().unwrap().iter().filter(|h| g.intersection(h, &d.chat).is_trivial()).cloned().collect();
        for _ in 0..30 {
            let k = rng.gen_range(1..=3);
            let terms: Vec<(i64, Subgroup)> =
                (0..k).map(|_| (rng.gen_range(-3..=3), pool.choose(&mut rng).unwrap().clone())).collect();
            let sum: BigRational = terms.iter().map(|(n, h)| BigRational::new((*n).into(), h.order().into())).sum();
            let theta = mod_c_sum(&t, &terms).unwrap();
            assert_eq!(theta.is_relation(), sum.is_zero(), "{name}: {theta}");
            assert_eq!(mod_c(&t, &terms).is_ok(), sum.is_zero());
        }
    }
}

/// Conjugate of `h` lying in `p`, if any.
fn conjugate_into(g: &PermGroup, h: &Subgroup, p: &Subgroup) -> Option<Subgroup> {
    (0..g.order()).map(|x| g.conjugate(h, x)).find(|c| c.is_subgroup_of(p))
}

#[test]
fn cyclic_kj_congruence() {
    let t = table("sd:C5xC13:C4xC2:2,5;4,1");
    let g = t.group().clone();
    let d = qe_decomposition(&g).unwrap().unwrap();
    let p = d.p as usize;
    let k = kernel_lattice(&t).unwrap();
    let basis = k.lattice().basis_matrix();
    for j0 in 0..d.t() {
        let kj = &d.kj[j0];
        assert!(g.subgroup_is_cyclic(kj));
        let cl = &d.c_parts[j0];
        let forbidden: Vec<usize> = (0..t.len()).filter(|&i| cl.is_subgroup_of(t.rep(i))).collect();
        let restricted = IntMatrix::from_rows(
            forbidden.len(),
            (0..basis.rows()).map(|r| forbidden.iter().map(|&c| basis.get(r, c).clone()).collect()).collect(),
        );
        let combos = integer_kernel(&restricted).basis_matrix();
        let allowed = combos.mul(&basis);
        assert!(allowed.rows() > 0);
        let mut bound = 1;
        while bound <= kj.order() {
            for r in 0..allowed.rows() {
                let mut total = BigInt::zero();
                for i in 0..t.len() {
                    let n = allowed.get(r, i);
                    if n.is_zero() || !g.intersection(t.rep(i), &d.chat).is_trivial() {
                        continue;
                    }
                    let h = conjugate_into(&g, t.rep(i), &d.p_sub).unwrap();
                    if g.intersection(&h, kj).order() <= bound && g.join(&h, kj) == d.p_sub {
                        total += n;
                    }
                }
                assert!(total.is_multiple_of(&BigInt::from(p)), "j0 = {j0}, bound {bound}: {total}");
            }
            bound *= p;
        }
    }
}

fn relabelled(g: &PermGroup, rng: &mut ChaCha8Rng) -> PermGroup {
    let n = g.degree();
    let mut sigma: Vec<usize> = (0..n).collect();
    sigma.shuffle(rng);
    let sigma = Permutation::from_images(sigma).unwrap();
    let mut gens: Vec<Permutation> = g.generators().iter().map(|x| sigma.inverse().then(x).then(&sigma)).collect();
    gens.shuffle(rng);
    if gens.len() >= 2 {
        let extra = gens[0].then(&gens[1]);
        gens.push(extra);
    }
    PermGroup::from_generators(n, gens).unwrap()
}

#[test]
fn classification_is_isomorphism_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for name in ["D16", "Heis3", "S4", "A5", "F20", "sd:C7:C3xC3:2;1", "sd:C5:C4xC4:2;1", "sd:C3xC5:C4:2,2", "SL(2,3)", "C3xS3"] {
        let g = group(name);
        let base = classify(&g).unwrap();
        for _ in 0..3 {
            let h = relabelled(&g, &mut rng);
            assert_eq!(h.order(), g.order());
            let c = classify(&h).unwrap();
            assert_eq!((c.tag, &c.predicted), (base.tag, &base.predicted), "{name}");
            let t = SubgroupClassTable::new(Arc::new(h)).unwrap();
            assert_eq!(prim_structure(&t).unwrap().invariants(), &base.predicted, "{name}");
        }
    }
}
