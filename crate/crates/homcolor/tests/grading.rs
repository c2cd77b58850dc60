use homcolor::{validate_commutation_factor, AbelianGroupSpec, Bicharacter, GroupElement, Scalar};
use proptest::prelude::*;

fn z2() -> Bicharacter {
    Bicharacter::superalgebra()
}

/// `ε((i1,i2),(j1,j2)) = (-1)^{i1 j2 - i2 j1}` on Z2 × Z2.
fn klein() -> Bicharacter {
    Bicharacter::new(AbelianGroupSpec::new(vec![2, 2], 0).unwrap(), vec![vec![1, -1], vec![-1, 1]]).unwrap()
}

fn el(b: &Bicharacter, coords: &[i64]) -> GroupElement {
    b.group().element(coords).unwrap()
}

#[test]
fn super_sign_of_two_odd_elements() {
    let b = z2();
    assert_eq!(b.eps(&el(&b, &[1]), &el(&b, &[1])).unwrap(), Scalar::from_int(-1));
    assert_eq!(b.eps(&el(&b, &[1]), &el(&b, &[0])).unwrap(), Scalar::one());
}

#[test]
fn zero_degree_commutes_with_everything() {
    for b in [z2(), klein()] {
        let zero = b.group().zero();
        for coords in [[0, 0], [1, 0], [0, 1], [1, 1]] {
            let a = el(&b, &coords[..b.group().rank()]);
            assert_eq!(b.sign(&a, &zero), 1);
            assert_eq!(b.sign(&zero, &a), 1);
        }
    }
}

#[test]
fn klein_factor_on_distinct_generators() {
    let b = klein();
    assert_eq!(b.eps(&el(&b, &[1, 0]), &el(&b, &[0, 1])).unwrap(), Scalar::from_int(-1));
    assert_eq!(b.sign(&el(&b, &[1, 0]), &el(&b, &[1, 0])), 1);
}

#[test]
fn elements_outside_the_group_are_errors() {
    let b = z2();
    let other = AbelianGroupSpec::new(vec![2, 2], 0).unwrap().element(&[1, 1]).unwrap();
    assert!(b.eps(&other, &el(&b, &[1])).is_err());
}

#[test]
fn validation_examples() {
    assert!(validate_commutation_factor(&z2()).passed());
    let free = AbelianGroupSpec::new(vec![], 2).unwrap();
    let skew = Bicharacter::new(free.clone(), vec![vec![1, -1], vec![-1, 1]]).unwrap();
    assert!(validate_commutation_factor(&skew).passed());
    let broken = Bicharacter::new(free, vec![vec![1, 1], vec![-1, 1]]).unwrap();
    let r = validate_commutation_factor(&broken);
    assert_eq!(r.witness().unwrap().tuple, vec![0, 1]);
}

#[test]
fn non_sign_entries_are_rejected() {
    let g = AbelianGroupSpec::new(vec![2], 0).unwrap();
    assert!(Bicharacter::new(g.clone(), vec![vec![2]]).is_err());
    assert!(Bicharacter::new(g, vec![vec![1, 1]]).is_err());
    assert!(AbelianGroupSpec::new(vec![1], 0).is_err());
}

fn group_and_factor() -> impl Strategy<Value = Bicharacter> {
    (0usize..=2, 0usize..=2)
        .prop_filter("nonempty", |(t, f)| t + f > 0)
        .prop_flat_map(|(t, f)| {
            let r = t + f;
            (Just(t), Just(f), prop::collection::vec(any::<bool>(), r * r), prop::collection::vec(any::<bool>(), r))
        })
        .prop_map(|(t, f, upper, diag)| {
            let r = t + f;
            let mut m = vec![vec![1i64; r]; r];
            for i in 0..r {
                m[i][i] = if diag[i] { -1 } else { 1 };
                for j in i + 1..r {
                    let v = if upper[i * r + j] { -1 } else { 1 };
                    m[i][j] = v;
                    m[j][i] = v;
                }
            }
            Bicharacter::new(AbelianGroupSpec::new(vec![2; t], f).unwrap(), m).unwrap()
        })
}

fn element(b: &Bicharacter, raw: &[i64]) -> GroupElement {
    b.group().element(&raw[..b.group().rank()]).unwrap()
}

proptest! {
    #[test]
    fn factor_axioms(b in group_and_factor(), x in prop::collection::vec(-5i64..5, 4), y in prop::collection::vec(-5i64..5, 4), z in prop::collection::vec(-5i64..5, 4)) {
        prop_assert!(validate_commutation_factor(&b).passed());
        let (x, y, z) = (element(&b, &x), element(&b, &y), element(&b, &z));
        let g = b.group();
        prop_assert_eq!(b.sign(&x, &y) * b.sign(&y, &x), 1);
        prop_assert!(b.sign(&x, &x) == 1 || b.sign(&x, &x) == -1);
        prop_assert_eq!(b.sign(&g.add(&x, &y), &z), b.sign(&x, &z) * b.sign(&y, &z));
        prop_assert_eq!(b.sign(&x, &g.add(&y, &z)), b.sign(&x, &y) * b.sign(&x, &z));
        prop_assert_eq!(b.sign(&g.neg(&x), &y), b.sign(&x, &y));
    }

    #[test]
    fn torsion_coordinates_are_reduced(raw in prop::collection::vec(-20i64..20, 3)) {
        let g = AbelianGroupSpec::new(vec![2, 4], 1).unwrap();
        let e = g.element(&raw).unwrap();
        prop_assert_eq!(e.coords()[0], raw[0].rem_euclid(2));
        prop_assert_eq!(e.coords()[1], raw[1].rem_euclid(4));
        prop_assert_eq!(e.coords()[2], raw[2]);
        prop_assert_eq!(g.add(&e, &g.neg(&e)), g.zero());
    }
}
