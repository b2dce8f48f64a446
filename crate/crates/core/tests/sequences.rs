use proptest::prelude::*;
use zerosum::*;

const GROUPS: [&[u64]; 6] = [&[5], &[2, 2], &[2, 4], &[2, 2, 4], &[3, 6], &[2, 2, 6]];

fn seq_strategy() -> impl Strategy<Value = (GroupSpec, Vec<GroupElement>)> {
    (0..GROUPS.len()).prop_flat_map(|i| {
        let spec = GroupSpec::new(GROUPS[i].to_vec()).unwrap();
        let card = spec.cardinality();
        let elems = proptest::collection::vec(0..card, 0..14);
        (Just(spec), elems).prop_map(|(spec, codes)| {
            let all: Vec<_> = spec.elements().collect();
            let xs = codes.iter().map(|&c| all[c as usize].clone()).collect();
            (spec, xs)
        })
    })
}

proptest! {
    #[test]
    fn translation_shifts_the_sum((spec, xs) in seq_strategy(), h in 0u64..100) {
        let s = Sequence::from_elements(spec.clone(), xs).unwrap();
        let h = spec.elements().nth((h % spec.cardinality()) as usize).unwrap();
        let t = s.translate(&h).unwrap();
        prop_assert_eq!(t.len(), s.len());
        prop_assert_eq!(t.sum(), spec.combine(&s.sum(), &h, s.len() as i64).unwrap());
    }

    #[test]
    fn product_adds_lengths_and_sums((spec, xs) in seq_strategy(), split in 0usize..14) {
        let cut = split.min(xs.len());
        let a = Sequence::from_elements(spec.clone(), xs[..cut].iter().cloned()).unwrap();
        let b = Sequence::from_elements(spec.clone(), xs[cut..].iter().cloned()).unwrap();
        let ab = a.product(&b).unwrap();
        prop_assert_eq!(ab.stats().length, a.len() + b.len());
        prop_assert_eq!(ab.sum(), spec.add(&a.sum(), &b.sum()).unwrap());
        prop_assert!(a.divides(&ab));
        prop_assert_eq!(b.product(&ab.divide(&b).unwrap()).unwrap(), ab.clone());
        prop_assert_eq!(ab.divide(&a).unwrap(), b);
    }

    #[test]
    fn insertion_order_is_irrelevant((spec, mut xs) in seq_strategy(), seed in any::<u64>()) {
        let a = Sequence::from_elements(spec.clone(), xs.clone()).unwrap();
        let n = xs.len().max(1);
        xs.rotate_left(seed as usize % n);
        xs.reverse();
        let b = Sequence::from_elements(spec, xs).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn json_round_trip((spec, xs) in seq_strategy()) {
        let s = Sequence::from_elements(spec, xs).unwrap();
        let text = s.to_json();
        let back = Sequence::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
        prop_assert_eq!(back, s);
    }
}

#[test]
fn stats_of_a_fixed_sequence() {
    let spec = GroupSpec::c2c2c2n(2);
    let e = |r: &[u64]| spec.element(r).unwrap();
    let s = Sequence::from_counts(spec.clone(), [(e(&[0, 0, 1]), 3), (e(&[1, 1, 0]), 2)]).unwrap();
    let st = s.stats();
    assert_eq!(st.length, 5);
    assert_eq!(st.height, 3);
    assert_eq!(st.sum, e(&[0, 0, 3]));
    assert!(!st.squarefree);
    assert_eq!(
        s.to_json(),
        r#"{"group":[2,2,4],"elements":[[[0,0,1],3],[[1,1,0],2]]}"#
    );
}

#[test]
fn malformed_json_is_rejected() {
    for bad in [
        r#"{"group":[2,2,4],"elements":[[[0,0,5],1]]}"#,
        r#"{"group":[2,2,4],"elements":[[[0,0],1]]}"#,
        r#"{"group":[2,2,4],"elements":[[[0,0,1],0]]}"#,
        r#"{"group":[2,2,4]}"#,
    ] {
        assert!(Sequence::from_json(bad).is_err(), "{bad}");
    }
}

#[test]
fn divide_needs_a_divisor() {
    let spec = GroupSpec::cyclic(5);
    let one = spec.element(&[1]).unwrap();
    let a = Sequence::power(spec.clone(), one.clone(), 2).unwrap();
    let b = Sequence::power(spec, one, 3).unwrap();
    assert_eq!(a.divide(&b), Err(Error::NotADivisor));
}

#[test]
fn length_sets_parse_and_print() {
    for text in ["short", "exp", "any", "2..5", "3..", "1,3,5"] {
        let l: LengthSet = text.parse().unwrap();
        assert_eq!(l.to_string(), text);
    }
    for (text, shown) in [
        ("[1,3]", "1..3"),
        ("[2,5)", "2..4"),
        ("[1,exp]", "short"),
        ("[1,∞)", "any"),
        ("[3,inf)", "3.."),
    ] {
        assert_eq!(text.parse::<LengthSet>().unwrap().to_string(), shown);
    }
    for bad in [
        "", "5..2", "0..3", "x", "1,,2", "[2,exp]", "[1,3", "[3]", "[1,1)",
    ] {
        assert!(bad.parse::<LengthSet>().is_err(), "{bad}");
    }
    let spec = GroupSpec::c2c2c2n(3);
    assert!(LengthSet::ExactExponent.permits_translation(&spec));
    assert!(LengthSet::explicit([6, 12])
        .unwrap()
        .permits_translation(&spec));
    assert!(!LengthSet::Short.permits_translation(&spec));
    assert!(!LengthSet::Any.permits_translation(&spec));
}
