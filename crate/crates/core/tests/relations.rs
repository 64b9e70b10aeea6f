mod common;

use brauer_core::burnside::BurnsideElement;
use brauer_core::linalg::{IntMatrix, LatticeBasis};
use brauer_core::relations::{artin_relation, coefficient_gcd_at_top, kernel_lattice, solomon_relation};
use common::*;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn s3_kernel_is_one_relation() {
    let t = table("S3");
    let k = kernel_lattice(&t).unwrap();
    assert_eq!(k.rank(), 1);
    let theta = elem(&t, &[(1, 0), (-2, class_of_order(&t, 2)), (-1, class_of_order(&t, 3)), (2, t.top())]);
    let b = &k.basis()[0];
    assert!(*b == theta || *b == theta.neg());
}

#[test]
fn cyclic_groups_have_no_relations() {
    for n in 1..=24 {
        let t = table(&format!("C{n}"));
        assert_eq!(kernel_lattice(&t).unwrap().rank(), 0, "C{n}");
        assert!(coefficient_gcd_at_top(&kernel_lattice(&t).unwrap()) == BigInt::from(0));
    }
}

#[test]
fn sl23_kernel() {
    let t = table("SL(2,3)");
    let k = kernel_lattice(&t).unwrap();
    assert_eq!(k.rank(), 2);
    let (c2, c4, q8, c6) = (class_of_order(&t, 2), class_of_order(&t, 4), class_of_order(&t, 8), class_of_order(&t, 6));
    assert!(k.contains(&elem(&t, &[(1, c4), (-1, c6), (-1, q8), (1, t.top())])).unwrap());
    assert!(k.contains(&elem(&t, &[(1, c2), (-3, c4), (2, q8)])).unwrap());
    assert!(!k.contains(&elem(&t, &[(1, c2), (-3, c4), (1, q8)])).unwrap());
}

#[test]
fn kernel_basis_agrees_with_characters() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in ["S3", "D8", "Q8", "A4", "SL(2,3)", "F20", "C3xS3", "C2xC2xC2", "Heis3"] {
        let t = table(name);
        let k = kernel_lattice(&t).unwrap();
        assert_eq!(k.rank(), t.non_cyclic_count(), "{name}");
        for b in k.basis() {
            assert!(is_relation_by_characters(&b), "{name}: {b}");
        }
        for _ in 0..20 {
            let x = random_element(&t, &mut rng, 3);
            assert_eq!(x.is_relation(), is_relation_by_characters(&x), "{name}: {x}");
            assert_eq!(k.contains(&x).unwrap(), x.is_relation());
            let r = random_relation(&k, &mut rng, 4);
            assert!(is_relation_by_characters(&r));
            let coords = k.coordinates(&r).unwrap().unwrap();
            let mut back = BurnsideElement::zero(&t);
            for (c, b) in coords.iter().zip(k.basis()) {
                back = back.add(&b.scale(c)).unwrap();
            }
            assert_eq!(back, r);
        }
    }
}

#[test]
fn artin_relations_span_rationally() {
    for name in ["S3", "D8", "A4", "S4", "SL(2,3)", "F20", "C3xC3", "A5"] {
        let t = table(name);
        let k = kernel_lattice(&t).unwrap();
        let mut rows = Vec::new();
        for h in 0..t.len() {
            if t.class(h).is_cyclic() {
                assert!(artin_relation(&t, h).is_err());
                continue;
            }
            let theta = artin_relation(&t, h).unwrap();
            assert!(theta.is_relation() && is_relation_by_characters(&theta), "{name} class {h}");
            assert_eq!(theta.coeff(h), &BigInt::from(t.class(h).order()));
            for i in theta.support() {
                assert!(i == h || t.class(i).is_cyclic());
                let inside = t.class(i).members().iter().any(|&pos| t.group().all_subgroups().unwrap()[pos].is_subgroup_of(t.rep(h)));
                assert!(inside, "{name}: term {i} is not inside class {h}");
            }
            rows.push(theta.coeffs().to_vec());
        }
        let span = LatticeBasis::from_generators_reduced(&IntMatrix::from_rows(t.len(), rows));
        assert_eq!(span.rank(), k.rank(), "{name}");
    }
}

#[test]
fn solomon_relations() {
    for name in ["A5", "S4", "A4", "SL(2,3)", "S3xS3"] {
        let t = table(name);
        let g = t.group();
        let theta = solomon_relation(&t).unwrap().unwrap();
        assert!(is_relation_by_characters(&theta), "{name}");
        assert_eq!(theta.coeff(t.top()), &BigInt::from(1));
        for i in theta.support() {
            assert!(i == t.top() || g.is_quasi_elementary(t.rep(i)), "{name}: class {i}");
        }
    }
    for name in ["F20", "D8", "C6", "sd:C7:C3xC3:2;1"] {
        assert!(solomon_relation(&table(name)).unwrap().is_none(), "{name}");
    }
}

#[test]
fn gcd_of_top_coefficients() {
    for (name, expected) in [("F20", 2), ("D8", 2), ("Heis3", 3), ("C3xC3", 3), ("S3", 2), ("sd:C7:C3xC3:2;1", 3), ("A5", 1), ("S4", 1), ("A4", 1), ("C6", 0)] {
        let k = kernel_lattice(&table(name)).unwrap();
        assert_eq!(coefficient_gcd_at_top(&k), BigInt::from(expected), "{name}");
    }
}
