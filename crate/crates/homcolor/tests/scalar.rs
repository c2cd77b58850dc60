use homcolor::{Scalar, ScalarContext, ScalarError, Symbol};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn ctx() -> ScalarContext {
    let mut c = ScalarContext::new();
    c.add_param("lambda1").unwrap();
    c.add_param("lambda2").unwrap();
    c.add_root("s2", BigRational::from_integer(2.into())).unwrap();
    c
}

fn parse(text: &str) -> Scalar {
    ctx().parse(text).unwrap()
}

#[test]
fn halves_add_to_one() {
    assert_eq!(&Scalar::ratio(1, 2) + &Scalar::ratio(1, 2), Scalar::one());
    assert_eq!(parse("1/2 + 1/2"), Scalar::one());
}

#[test]
fn root_squares_to_radicand() {
    let r = parse("sqrt(2)");
    assert!(r.as_rational().is_none());
    assert_eq!(&r * &r, Scalar::from_int(2));
    assert_eq!(parse("s2 * s2"), Scalar::from_int(2));
}

#[test]
fn difference_of_squares_expands() {
    let product = parse("(lambda1 + 1) * (lambda1 - 1)");
    assert_eq!(product, parse("lambda1*lambda1 - 1"));
    // Term-by-term expansion written out by hand.
    let l = Scalar::param("lambda1");
    let naive = &(&(&l * &l) - &l) + &(&l - &Scalar::one());
    assert_eq!(product, naive);
}

#[test]
fn zero_tests() {
    assert!(Scalar::zero().is_zero());
    assert!((&Scalar::param("lambda1") * &Scalar::zero()).is_zero());
    let d = parse("sqrt(2)*sqrt(2) - 2");
    assert!(d.is_zero());
    let value = (&parse("sqrt(2)") * &parse("sqrt(2)")).to_f64(&|_| std::f64::consts::SQRT_2) - 2.0;
    assert!(value.abs() < 1e-9);
}

#[test]
fn zero_has_one_representation() {
    let a = parse("lambda1 - lambda1");
    assert_eq!(a, Scalar::zero());
    assert!(a.terms().is_empty());
}

#[test]
fn mismatched_roots_are_rejected() {
    let mut other = ScalarContext::new();
    other.add_root("s2", BigRational::from_integer(3.into())).unwrap();
    let a = parse("sqrt(2)");
    let b = other.parse("s2").unwrap();
    assert!(matches!(a.checked_add(&b), Err(ScalarError::ContextMismatch(_))));
    assert!(matches!(a.checked_mul(&b), Err(ScalarError::ContextMismatch(_))));
}

#[test]
fn grammar_errors() {
    let c = ctx();
    assert!(c.parse("mu1").is_err(), "undeclared parameter");
    assert!(c.parse("sqrt(3)").is_err(), "undeclared radicand");
    assert!(c.parse("sqrt(sqrt(2))").is_err(), "nested radical");
    assert!(c.parse("1/0").is_err(), "zero denominator");
    assert!(c.parse("2 +").is_err());
    assert!(c.parse("(1").is_err());
    assert!(c.parse("Lambda1").is_err());
}

#[test]
fn dependent_roots_are_rejected() {
    let mut c = ctx();
    assert!(c.add_root("s8", BigRational::from_integer(8.into())).is_err());
    assert!(c.add_root("s4", BigRational::from_integer(4.into())).is_err());
    assert!(c.add_root("neg", BigRational::from_integer((-2).into())).is_err());
    c.add_root("s3", BigRational::from_integer(3.into())).unwrap();
    assert!(c.add_root("s6", BigRational::from_integer(6.into())).is_err());
}

#[test]
fn display_round_trips() {
    for text in ["0", "-3/4", "lambda1*lambda2 - 2*s2 + 1/3", "s2*lambda1*lambda1"] {
        let a = parse(text);
        assert_eq!(parse(&a.to_string()), a, "{text} printed as {a}");
    }
}

fn scalar() -> impl Strategy<Value = Scalar> {
    let leaf = prop_oneof![
        (-6i64..=6).prop_map(Scalar::from_int),
        (-6i64..=6, 1i64..=5).prop_map(|(n, d)| Scalar::ratio(n, d)),
        Just(Scalar::param("lambda1")),
        Just(Scalar::param("lambda2")),
        Just(parse("sqrt(2)")),
    ];
    leaf.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a + &b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a * &b),
            inner.prop_map(|a| -a),
        ]
    })
}

/// 2^((p+1)/4) squares to 2 modulo p = 10^9 + 7, since p ≡ 7 (mod 8).
fn residues(l1: i64, l2: i64) -> (BigInt, impl Fn(&Symbol) -> BigInt) {
    let p = BigInt::from(1_000_000_007u64);
    let root = BigInt::from(2).modpow(&((&p + 1) / 4), &p);
    assert_eq!((&root * &root) % &p, BigInt::from(2));
    let value = move |s: &Symbol| match s.name() {
        "lambda1" => BigInt::from(l1),
        "lambda2" => BigInt::from(l2),
        _ => root.clone(),
    };
    (p, value)
}

proptest! {
    #[test]
    fn ring_axioms_hold_structurally(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(a in scalar(), b in scalar(), l1 in -1000i64..1000, l2 in -1000i64..1000) {
        let (p, value) = residues(l1, l2);
        let ev = |s: &Scalar| s.eval_mod(&p, &value).unwrap();
        prop_assert_eq!(ev(&(&a * &b)), (ev(&a) * ev(&b)) % &p);
        prop_assert_eq!(ev(&(&a + &b)), (ev(&a) + ev(&b)) % &p);
    }

    #[test]
    fn zero_evaluates_to_zero(a in scalar(), b in scalar(), l1 in -50i64..50, l2 in -50i64..50) {
        let z = &(&a * &b) - &(&b * &a);
        prop_assert!(z.is_zero());
        let (p, value) = residues(l1, l2);
        prop_assert_eq!(z.eval_mod(&p, &value), Some(BigInt::from(0)));
    }

    #[test]
    fn substitution_commutes_with_products(a in scalar(), b in scalar(), n in -9i64..9, d in 1i64..9) {
        let v = Scalar::ratio(n, d);
        let f = |s: &Symbol| (s.name() == "lambda1").then(|| v.clone());
        prop_assert_eq!((&a * &b).substitute(&f), &a.substitute(&f) * &b.substitute(&f));
    }
}
