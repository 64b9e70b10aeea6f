use brauer_core::catalog::{self, parse_group_spec};
use brauer_core::group::{semidirect_product, PermGroup, Permutation, Subgroup};

fn perm(degree: usize, s: &str) -> Permutation {
    Permutation::parse_cycles(degree, s).unwrap()
}

fn group(degree: usize, gens: &[&str]) -> PermGroup {
    PermGroup::from_generators(degree, gens.iter().map(|g| perm(degree, g)).collect()).unwrap()
}

fn elements_of(g: &PermGroup, h: &Subgroup) -> Vec<Permutation> {
    h.elements().map(|i| g.element(i).clone()).collect()
}

#[test]
fn orders_from_generators() {
    assert_eq!(group(5, &["(0 1 2 3 4)", "(2 3 4)"]).order(), 60);
    assert_eq!(PermGroup::from_generators(1, vec![]).unwrap().order(), 1);
    assert_eq!(group(8, &["(0 1 2 3 4 5 6 7)", "(0 7)(1 6)(2 5)(3 4)"]).order(), 16);
}

#[test]
fn invalid_generators_are_rejected() {
    assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
    assert!(Permutation::parse_cycles(3, "(0 3)").is_err());
    let g = perm(4, "(0 1)");
    assert!(PermGroup::from_generators(3, vec![g]).is_err());
}

#[test]
fn identity_is_index_zero_and_table_is_associative() {
    let g = parse_group_spec("S4").unwrap();
    assert!(g.element(0).is_identity());
    for a in 0..g.order() {
        assert_eq!(g.mul(a, g.inv(a)), 0);
        for b in (0..g.order()).step_by(5) {
            for c in (0..g.order()).step_by(7) {
                assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
            }
            assert_eq!(g.element(g.mul(a, b)), &g.element(a).then(g.element(b)));
        }
    }
}

#[test]
fn subgroup_counts() {
    let s3 = parse_group_spec("S3").unwrap();
    let subs = s3.all_subgroups().unwrap();
    assert_eq!(subs.len(), 6);
    let mut orders: Vec<usize> = subs.iter().map(Subgroup::order).collect();
    orders.sort();
    assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
    assert_eq!(parse_group_spec("C6").unwrap().all_subgroups().unwrap().len(), 4);
    assert_eq!(catalog::sl23().unwrap().all_subgroups().unwrap().len(), 15);
    assert_eq!(parse_group_spec("A5").unwrap().all_subgroups().unwrap().len(), 59);
    assert_eq!(parse_group_spec("S4").unwrap().all_subgroups().unwrap().len(), 30);
}

#[test]
fn subgroup_limit_is_a_resource_error() {
    let s4 = parse_group_spec("S4").unwrap();
    assert!(matches!(s4.enumerate_subgroups_bounded(10), Err(brauer_core::Error::Resource(_))));
    assert_eq!(s4.enumerate_subgroups_bounded(30).unwrap().len(), 30);
}

#[test]
fn centre_frattini_normalizer() {
    let d16 = group(8, &["(0 1 2 3 4 5 6 7)", "(0 7)(1 6)(2 5)(3 4)"]);
    assert_eq!(d16.centre().order(), 2);

    let c4c2 = parse_group_spec("C4xC2").unwrap();
    let phi = c4c2.frattini_subgroup().unwrap();
    let a = c4c2.generator_indices()[0];
    assert_eq!(phi, c4c2.generate(&[c4c2.mul(a, a)]));
    assert_eq!(phi.order(), 2);

    let a5 = group(5, &["(0 1 2 3 4)", "(2 3 4)"]);
    let c2 = a5.subgroup_from_perms(&[perm(5, "(0 1)(2 3)")]).unwrap();
    let n = a5.normalizer(&c2).unwrap();
    assert_eq!(n.order(), 4);
    assert!(a5.subgroup_is_abelian(&n) && !a5.subgroup_is_cyclic(&n));
}

#[test]
fn normal_subgroups_examples() {
    assert_eq!(parse_group_spec("A5").unwrap().normal_subgroups().unwrap().len(), 2);
    let d8 = parse_group_spec("D8").unwrap();
    let normals = d8.normal_subgroups().unwrap();
    assert_eq!(d8.all_subgroups().unwrap().len(), 10);
    let mut orders: Vec<usize> = normals.iter().map(Subgroup::order).collect();
    orders.sort();
    assert_eq!(orders, vec![1, 2, 4, 4, 4, 8]);
    let s4 = parse_group_spec("S4").unwrap();
    let orders: Vec<usize> = s4.normal_subgroups().unwrap().iter().map(Subgroup::order).collect();
    assert_eq!(orders, vec![1, 4, 12, 24]);
}

#[test]
fn quotient_examples() {
    let d8 = parse_group_spec("D8").unwrap();
    let (q, _) = d8.quotient(&d8.centre()).unwrap();
    assert_eq!(q.order(), 4);
    assert_eq!(q.exponent(), 2);
    let (t, _) = d8.quotient(&d8.whole()).unwrap();
    assert_eq!(t.order(), 1);
    let sl = catalog::sl23().unwrap();
    let (a4, _) = sl.quotient(&sl.centre()).unwrap();
    assert_eq!(a4.order(), 12);
    assert!(a4.all_subgroups().unwrap().iter().all(|h| h.order() != 6));
    let s3 = parse_group_spec("S3").unwrap();
    let c2 = s3.all_subgroups().unwrap().iter().find(|h| h.order() == 2).unwrap().clone();
    assert!(matches!(s3.quotient(&c2), Err(brauer_core::Error::NotNormal)));
}

#[test]
fn quotient_epimorphism_is_a_homomorphism() {
    let g = parse_group_spec("SL(2,3)").unwrap();
    for n in g.normal_subgroups().unwrap() {
        let (q, epi) = g.quotient(&n).unwrap();
        assert_eq!(q.order() * n.order(), g.order());
        for a in (0..g.order()).step_by(3) {
            for b in 0..g.order() {
                assert_eq!(epi.apply(g.mul(a, b)), q.mul(epi.apply(a), epi.apply(b)));
            }
        }
        // seeded subgroup list agrees with a fresh enumeration
        let fresh = PermGroup::from_generators(q.degree(), q.generators().to_vec()).unwrap();
        assert_eq!(fresh.all_subgroups().unwrap().len(), q.all_subgroups().unwrap().len());
        for h in q.all_subgroups().unwrap() {
            let pre = epi.preimage(&g, h).unwrap();
            assert_eq!(pre.order(), h.order() * n.order());
            assert_eq!(&epi.image(&pre).unwrap(), h);
        }
    }
}

#[test]
fn semidirect_examples() {
    let c5 = catalog::cyclic(5).unwrap();
    let c4 = catalog::cyclic(4).unwrap();
    let x = c5.generator_indices()[0];
    let f20 = semidirect_product(&c5, &c4, &[vec![c5.pow(x, 2)]]).unwrap();
    assert_eq!(f20.order(), 20);
    assert_eq!(f20.centre().order(), 1);

    let c3 = catalog::cyclic(3).unwrap();
    let c2 = catalog::cyclic(2).unwrap();
    let y = c3.generator_indices()[0];
    let s3 = semidirect_product(&c3, &c2, &[vec![c3.pow(y, 2)]]).unwrap();
    assert_eq!(s3.order(), 6);
    assert!(!s3.is_abelian());

    let c7 = catalog::cyclic(7).unwrap();
    let z = c7.generator_indices()[0];
    let c21 = semidirect_product(&c7, &c3, &[vec![z]]).unwrap();
    assert_eq!(c21.order(), 21);
    assert!(c21.is_cyclic());

    // x -> x^2 has order 3 in Aut(C7) and cannot be the image of an element of order 2.
    assert!(semidirect_product(&c7, &c2, &[vec![c7.pow(z, 2)]]).is_err());
}

#[test]
fn subgroup_group_embedding() {
    let s4 = parse_group_spec("S4").unwrap();
    let a4 = s4.all_subgroups().unwrap().iter().find(|h| h.order() == 12).unwrap().clone();
    let (h, emb) = s4.subgroup_group(&a4).unwrap();
    assert_eq!(h.order(), 12);
    assert_eq!(h.all_subgroups().unwrap().len(), 10);
    for k in h.all_subgroups().unwrap() {
        let up = emb.to_ambient(k).unwrap();
        assert_eq!(elements_of(&h, k), elements_of(&s4, &up));
        assert_eq!(&emb.from_ambient(&up).unwrap(), k);
    }
}

#[test]
fn catalog_groups() {
    let cases = [
        ("C1", 1),
        ("C12", 12),
        ("D8", 8),
        ("D4", 4),
        ("Q8", 8),
        ("Q16", 16),
        ("SD16", 16),
        ("Heis3", 27),
        ("SL(2,3)", 24),
        ("GL(2,3)", 48),
        ("A4", 12),
        ("S4", 24),
        ("A5", 60),
        ("F20", 20),
        ("C3xC3", 9),
        ("(C2xC2)xC3", 12),
        ("sd:C5xC13:C4xC2:2,5;4,1", 520),
        ("sd:C3xC3:C4:[0 1],[2 0]", 36),
        ("wr:C3:C4", 324),
    ];
    for (name, order) in cases {
        assert_eq!(parse_group_spec(name).unwrap().order(), order, "{name}");
    }
    let h = parse_group_spec("Heis3").unwrap();
    assert_eq!(h.exponent(), 3);
    assert_eq!(h.centre().order(), 3);
    assert_eq!(parse_group_spec("Q8").unwrap().centre().order(), 2);
    assert_eq!(parse_group_spec("SD16").unwrap().centre().order(), 2);
    assert!(parse_group_spec("Q12").is_err());
    assert!(parse_group_spec("Foo").is_err());
    assert!(parse_group_spec("sd:C7:C2:2").is_err());
}

#[test]
fn catalog_is_deterministic() {
    for name in ["sd:C5xC13:C4xC2:2,5;4,1", "Heis5", "S4xC2"] {
        let a = parse_group_spec(name).unwrap();
        let b = parse_group_spec(name).unwrap();
        assert_eq!(a.generators(), b.generators());
    }
}

#[test]
fn text_format_round_trip() {
    let g = parse_group_spec("D10").unwrap();
    let text = g.to_text();
    let h = PermGroup::parse_text(&text).unwrap();
    assert_eq!(h.generators(), g.generators());
    let id = PermGroup::parse_text("degree 3\n()\n").unwrap();
    assert_eq!(id.order(), 1);
    assert!(PermGroup::parse_text("deg 3\n").is_err());
}
