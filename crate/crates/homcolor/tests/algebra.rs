mod common;

use common::*;
use homcolor::format::parse_presentation;
use homcolor::*;
use proptest::prelude::*;
use serde_json::json;

#[test]
fn basis_products_of_the_three_dim_example() {
    let a = load("eps_comm_assoc_3dim");
    let (e1, e2, e3) = (a.basis(0), a.basis(1), a.basis(2));
    assert_eq!(a.mul("dot", &e1, &e2).unwrap(), vector(&a, &[("e3", int(-2))]));
    let zero = vec![Scalar::zero(); 3];
    assert_eq!(a.mul("dot", &zero, &e3).unwrap(), zero);
    let sum: Vec<Scalar> = e1.iter().zip(&e2).map(|(x, y)| x + y).collect();
    let got = a.mul("dot", &sum, &e2).unwrap();
    assert_eq!(got, vector(&a, &[("e3", int(-2))]));
    assert_eq!(got, Dense::new(&a).mul("dot", &sum, &e2));
}

#[test]
fn unknown_role_is_an_error() {
    let a = load("eps_comm_assoc_3dim");
    assert!(matches!(a.mul("bracket", &a.basis(0), &a.basis(1)), Err(Error::MissingRole(_))));
    assert!(a.product("diamond").is_err());
}

#[test]
fn twist_images_and_powers() {
    let a = load("eps_comm_assoc_3dim");
    let root = a.scalars().parse("sqrt(2)").unwrap();
    let e1 = a.basis(0);
    assert_eq!(a.apply_alpha(&e1), vector(&a, &[("e1", root)]));
    assert_eq!(EvenLinearMap::identity(3).apply(&e1), e1);
    let squared = a.alpha().compose(a.alpha());
    assert_eq!(squared.apply(&e1), vector(&a, &[("e1", int(2))]));
    assert_eq!(squared.apply(&e1), a.apply_alpha(&a.apply_alpha(&e1)));
    assert_eq!(a.alpha().pow(2), squared);
    assert!(a.alpha().matrix().try_apply(&[Scalar::one()]).is_err());
}

#[test]
fn multiplicativity_examples() {
    for name in loadable_fixtures() {
        let a = load(&name);
        for role in a.roles() {
            assert!(a.is_multiplicative(role, &EvenLinearMap::identity(a.dim())).unwrap().passed());
        }
    }

    let gd = load("gd_multiplicative");
    let e3 = gd.basis(idx(&gd, "e3"));
    let lhs = gd.apply_alpha(&gd.mul("dot", &e3, &e3).unwrap());
    let rhs = gd.mul("dot", &gd.apply_alpha(&e3), &gd.apply_alpha(&e3)).unwrap();
    assert_eq!(lhs, vector(&gd, &[("e1", int(1))]));
    assert_eq!(lhs, rhs);
    assert!(gd.is_multiplicative("dot", gd.alpha()).unwrap().passed());

    let adm = load("admissible_hnp");
    let r = adm.is_multiplicative("dot", adm.alpha()).unwrap();
    assert_eq!(r.witness().unwrap().names, ["e2", "e4"]);
}

#[test]
fn derivation_examples() {
    let a = load("eps_comm_assoc_3dim");
    let zero_deg = a.grading().group().zero();
    assert!(a.is_derivation("dot", &Matrix::zero(3, 3), &zero_deg).unwrap().passed());
    let d = Matrix::diagonal(vec![int(1), int(1), int(2)]);
    assert!(a.is_derivation("dot", &d, &zero_deg).unwrap().passed());
    let not_d = Matrix::diagonal(vec![int(1), int(1), int(1)]);
    let r = a.is_derivation("dot", &not_d, &zero_deg).unwrap();
    assert_eq!(r.witness().unwrap().names, ["e1", "e2"]);

    let trivial = parse_presentation(
        &json!({"basis": [{"name": "u"}, {"name": "v"}], "products": {"dot": []}}).to_string(),
    )
    .unwrap();
    let any = Matrix::from_rows(vec![vec![int(3), int(-1)], vec![q(1, 2), int(7)]]).unwrap();
    assert!(trivial
        .is_derivation("dot", &any, &trivial.grading().group().zero())
        .unwrap()
        .passed());
}

#[test]
fn odd_derivation_picks_up_signs() {
    // On the exterior algebra, the odd map e2 ↦ e1, e4 ↦ e3 satisfies the
    // signed Leibniz rule D(xy) = D(x)y + ε(d,x) xD(y).
    let a = load("exterior_4dim");
    let odd = a.grading().group().element(&[1]).unwrap();
    let mut d = Matrix::zero(4, 4);
    d.set(idx(&a, "e1"), idx(&a, "e2"), int(1));
    d.set(idx(&a, "e3"), idx(&a, "e4"), int(1));
    let r = a.is_derivation("dot", &d, &odd).unwrap();
    let dense = Dense::new(&a);
    let mut expected = true;
    for x in 0..4 {
        for y in 0..4 {
            let apply = |v: &[Scalar]| d.apply(v);
            let lhs = apply(&dense.mul("dot", &a.basis(x), &a.basis(y)));
            let mut rhs = dense.mul("dot", &apply(&a.basis(x)), &a.basis(y));
            let s = int(a.grading().sign(&odd, a.space().degree(x)) as i64);
            let second = dense.mul("dot", &a.basis(x), &apply(&a.basis(y)));
            for (acc, t) in rhs.iter_mut().zip(&second) {
                *acc = &*acc + &(&s * t);
            }
            expected &= lhs == rhs;
        }
    }
    assert_eq!(r.passed(), expected);
}

#[test]
fn morphism_examples() {
    let a = load("hnp_4dim");
    assert!(is_morphism(&Matrix::identity(4), &a, &a).unwrap().passed());

    let adm = load("admissible_hnp");
    let as_morphism = is_morphism(adm.alpha().matrix(), &adm, &adm).unwrap();
    let as_mult = adm.is_multiplicative("dot", adm.alpha()).unwrap();
    assert_eq!(as_morphism.witness().unwrap().tuple, as_mult.witness().unwrap().tuple);

    let z = load("zero");
    let target = parse_presentation(
        &json!({"group": {"torsion": [2], "free": 0}, "bichar": [[-1]], "basis": [],
                "products": {"dot": [], "bracket": []}})
        .to_string(),
    )
    .unwrap();
    assert!(is_morphism(&Matrix::zero(0, z.dim()), &z, &target).unwrap().passed());
    assert!(is_morphism(&Matrix::identity(4), &a, &adm).is_err() || !is_morphism(&Matrix::identity(4), &a, &adm).unwrap().passed());
}

#[test]
fn load_time_invariants() {
    let base = json!({
        "group": {"torsion": [2], "free": 0}, "bichar": [[-1]],
        "basis": [{"name": "e1", "deg": [0]}, {"name": "e2", "deg": [1]}],
    });
    let with = |extra: serde_json::Value| {
        let mut doc = base.clone();
        for (k, v) in extra.as_object().unwrap() {
            doc[k] = v.clone();
        }
        parse_presentation(&doc.to_string())
    };
    assert!(with(json!({"products": {"dot": [["e1", "e2", [["e2", 1]]]]}})).is_ok());
    assert!(with(json!({"products": {"dot": [["e1", "e2", [["e1", 1]]]]}})).is_err(), "ungraded product");
    assert!(with(json!({"alpha": [[1, 1], [0, 1]]})).is_err(), "odd twist");
    assert!(with(json!({"basis": [{"name": "e1", "deg": [0]}, {"name": "e1", "deg": [1]}]})).is_err(), "duplicate name");
}

fn graded_vector(n: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec((-4i64..=4, 1i64..=3).prop_map(|(a, b)| q(a, b)), n)
}

proptest! {
    #[test]
    fn products_are_bilinear(
        name in prop::sample::select(vec!["hnp_4dim", "gd_4dim", "eps_comm_assoc_3dim", "derivation_tp_4dim"]),
        x in graded_vector(4), y in graded_vector(4), z in graded_vector(4),
        s in (-5i64..5, 1i64..4), t in (-5i64..5, 1i64..4),
    ) {
        let a = load(name);
        let n = a.dim();
        let (x, y, z) = (&x[..n], &y[..n], &z[..n]);
        let (s, t) = (q(s.0, s.1), q(t.0, t.1));
        let combo: Vec<Scalar> = x.iter().zip(y).map(|(u, v)| &(&s * u) + &(&t * v)).collect();
        let dense = Dense::new(&a);
        for role in a.roles() {
            let lhs = a.mul(role, &combo, z).unwrap();
            let rx = a.mul(role, x, z).unwrap();
            let ry = a.mul(role, y, z).unwrap();
            let rhs: Vec<Scalar> = rx.iter().zip(&ry).map(|(u, v)| &(&s * u) + &(&t * v)).collect();
            prop_assert_eq!(&lhs, &rhs);
            prop_assert_eq!(&lhs, &dense.mul(role, &combo, z));
            let right = a.mul(role, z, &combo).unwrap();
            prop_assert_eq!(&right, &dense.mul(role, z, &combo));
        }
    }

    #[test]
    fn even_maps_compose_to_even_maps(d1 in graded_vector(4), d2 in graded_vector(4), off in graded_vector(4)) {
        // Degrees (0, 1, 1, 0): the even maps are block-diagonal on {e1, e4} and {e2, e3}.
        let a = load("exterior_4dim");
        let build = |d: &[Scalar], o: &[Scalar]| {
            let mut m = Matrix::diagonal(d.to_vec());
            m.set(0, 3, o[0].clone());
            m.set(3, 0, o[1].clone());
            m.set(1, 2, o[2].clone());
            m.set(2, 1, o[3].clone());
            a.even_map(m).unwrap()
        };
        let f = build(&d1, &off);
        let g = build(&d2, &d1);
        let fg = f.compose(&g);
        prop_assert!(a.even_map(fg.matrix().clone()).is_ok());
        let x = a.basis(1);
        prop_assert_eq!(fg.apply(&x), f.apply(&g.apply(&x)));
    }
}
