use std::collections::BTreeSet;

use proptest::prelude::*;
use zerosum::*;

const SMALL: [&[u64]; 12] = [
    &[2],
    &[6],
    &[2, 2],
    &[3, 3],
    &[2, 4],
    &[2, 2, 2],
    &[4, 4],
    &[2, 2, 4],
    &[2, 2, 6],
    &[3, 9],
    &[2, 2, 2, 2, 2],
    &[2, 4, 8],
];

fn spec(o: &[u64]) -> GroupSpec {
    GroupSpec::new(o.to_vec()).unwrap()
}

#[test]
fn additive_laws_exhaustive() {
    for o in SMALL {
        let s = spec(o);
        let els: Vec<_> = s.elements().collect();
        let zero = s.zero();
        let exp = s.exponent() as i64;
        for a in &els {
            assert_eq!(s.add(a, &zero).unwrap(), *a);
            assert!(s.add(a, &s.neg(a).unwrap()).unwrap().is_zero());
            assert!(s.scale(a, exp).unwrap().is_zero());
            assert_eq!(s.exponent() % s.order_of(a).unwrap(), 0);
            for b in &els {
                assert_eq!(s.add(a, b).unwrap(), s.add(b, a).unwrap());
            }
        }
        // Associativity on a stride of triples keeps this fast for |G| = 64.
        for a in els.iter().step_by(3) {
            for b in els.iter().step_by(2) {
                for c in &els {
                    let l = s.add(&s.add(a, b).unwrap(), c).unwrap();
                    let r = s.add(a, &s.add(b, c).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }
}

#[test]
fn table_arithmetic_matches_residues() {
    for o in SMALL {
        let g = Group::new(spec(o)).unwrap();
        for a in 0..g.len() as u8 {
            assert_eq!(
                g.element(g.neg_rank(a)),
                &g.spec().neg(g.element(a)).unwrap()
            );
            for b in 0..g.len() as u8 {
                let sum = g.spec().add(g.element(a), g.element(b)).unwrap();
                assert_eq!(g.element(g.add_rank(a, b)), &sum);
            }
        }
    }
}

#[test]
fn ranks_follow_order_then_residues() {
    let g = Group::new(spec(&[2, 2, 6])).unwrap();
    assert!(g.element(0).is_zero());
    let keys: Vec<_> = (0..g.len() as u8)
        .map(|r| (g.order_rank(r), g.element(r).clone()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn bases_span_the_group() {
    for (o, profile) in [
        (&[2u64, 2, 4][..], &[2u64, 2, 4][..]),
        (&[2, 2, 6], &[2, 2, 6]),
        (&[4, 4], &[4, 4]),
        (&[12], &[3, 4]),
    ] {
        let g = Group::new(spec(o)).unwrap();
        let bases = enumerate_bases(&g, profile);
        assert!(!bases.is_empty());
        for b in bases.iter().step_by(7) {
            let mut spanned = BTreeSet::new();
            let mut coeffs = vec![0i64; profile.len()];
            loop {
                spanned.insert(b.combination(g.spec(), &coeffs).unwrap());
                let mut i = 0;
                while i < coeffs.len() {
                    coeffs[i] += 1;
                    if coeffs[i] < profile[i] as i64 {
                        break;
                    }
                    coeffs[i] = 0;
                    i += 1;
                }
                if i == coeffs.len() {
                    break;
                }
            }
            assert_eq!(spanned.len(), g.len(), "{:?}", b.generators());
        }
    }
}

#[test]
fn automorphism_counts() {
    // |GL(3,2)| and the order of Aut(C2+C2+C4).
    let cases: [(&[u64], usize); 5] = [
        (&[7], 6),
        (&[2, 2], 6),
        (&[2, 2, 2], 168),
        (&[2, 4], 8),
        (&[2, 2, 4], 192),
    ];
    for (o, count) in cases {
        let g = Group::new(spec(o)).unwrap();
        assert_eq!(enumerate_automorphisms(&g).len(), count, "{o:?}");
    }
}

#[test]
fn automorphisms_form_a_group() {
    for o in [&[2u64, 2, 4][..], &[2, 6], &[3, 3]] {
        let g = Group::new(spec(o)).unwrap();
        let auts = enumerate_automorphisms(&g);
        assert!(auts[0].is_identity());
        let tables: BTreeSet<Vec<u8>> = auts.iter().map(|a| a.table().to_vec()).collect();
        assert_eq!(tables.len(), auts.len());
        for (i, a) in auts.iter().enumerate().step_by(5) {
            assert_eq!(a.apply_rank(0), 0);
            assert!(tables.contains(a.inverse(&g).table()));
            assert!(a.compose(&a.inverse(&g), &g).is_identity());
            let b = &auts[(i * 31 + 7) % auts.len()];
            let ab = a.compose(b, &g);
            assert!(tables.contains(ab.table()));
            for x in 0..g.len() as u8 {
                assert_eq!(ab.apply_rank(x), a.apply_rank(b.apply_rank(x)));
                for y in 0..g.len() as u8 {
                    assert_eq!(
                        a.apply_rank(g.add_rank(x, y)),
                        g.add_rank(a.apply_rank(x), a.apply_rank(y))
                    );
                }
            }
        }
    }
}

#[test]
fn canonical_split_is_a_homomorphism() {
    for n in 1..=8 {
        let g = Group::new(GroupSpec::c2c2c2n(n)).unwrap();
        let split = canonical_split(&g).unwrap();
        let s = g.spec();
        let q = &split.quotient_spec;
        let els: Vec<_> = s.elements().collect();
        for a in &els {
            for b in &els {
                let lhs = split.project(&s.add(a, b).unwrap()).unwrap();
                let rhs = q
                    .add(split.project(a).unwrap(), split.project(b).unwrap())
                    .unwrap();
                assert_eq!(lhs, &rhs);
            }
        }
        let kernel: BTreeSet<_> = els
            .iter()
            .filter(|a| split.project(a).unwrap().is_zero())
            .cloned()
            .collect();
        assert_eq!(kernel, split.subgroup_elements);
        assert_eq!(kernel.len() as u64, n);
    }
}

#[test]
fn split_by_explicit_subgroup() {
    let g = Group::new(spec(&[2, 4])).unwrap();
    let split = split_by(&g, &[g.spec().element(&[0, 2]).unwrap()]).unwrap();
    assert_eq!(split.subgroup_elements.len(), 2);
    assert_eq!(split.quotient_spec.cardinality(), 4);
}

#[test]
fn parse_and_display() {
    let s = GroupSpec::parse("2,2,4").unwrap();
    assert_eq!(s, GroupSpec::c2c2c2n(2));
    assert!(GroupSpec::parse("2,x").is_err());
    assert!(GroupSpec::parse("").is_err());
    assert_eq!(s.c2c2c2n_parameter(), Some(2));
    assert_eq!(spec(&[2, 6, 2]).c2c2c2n_parameter(), Some(3));
    assert_eq!(spec(&[2, 2, 5]).c2c2c2n_parameter(), None);
    assert_eq!(spec(&[6, 4]).invariant_factors(), vec![2, 12]);
}

#[test]
fn cap_is_enforced() {
    assert!(matches!(
        Group::new(spec(&[17, 17])),
        Err(Error::CapExceeded { .. })
    ));
    assert!(Group::with_cap(spec(&[4, 4]), 15).is_err());
}

proptest! {
    #[test]
    fn scale_is_repeated_addition(i in 0usize..SMALL.len(), r in 0u64..1000, k in -20i64..20) {
        let s = spec(SMALL[i]);
        let a = s.elements().nth((r % s.cardinality()) as usize).unwrap();
        let mut acc = s.zero();
        for _ in 0..k.unsigned_abs() {
            acc = s.add(&acc, &a).unwrap();
        }
        if k < 0 {
            acc = s.neg(&acc).unwrap();
        }
        prop_assert_eq!(s.scale(&a, k).unwrap(), acc);
    }

    #[test]
    fn combine_matches_add_and_scale(i in 0usize..SMALL.len(), x in 0u64..1000, y in 0u64..1000, k in -9i64..9) {
        let s = spec(SMALL[i]);
        let a = s.elements().nth((x % s.cardinality()) as usize).unwrap();
        let b = s.elements().nth((y % s.cardinality()) as usize).unwrap();
        prop_assert_eq!(s.combine(&a, &b, k).unwrap(), s.add(&a, &s.scale(&b, k).unwrap()).unwrap());
    }
}
