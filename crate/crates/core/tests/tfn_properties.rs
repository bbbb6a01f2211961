use fahp_core::fuzzy::{tfn_add, tfn_invert, tfn_mul, FuzzyMatrix, ONE};
use fahp_core::{defuzzify, scale_to_tfn, Attitude, FuzzyError, Strictness, Tfn};
use proptest::prelude::*;

fn arb_tfn() -> impl Strategy<Value = Tfn> {
    prop::array::uniform3(0.01f64..10.0).prop_map(|mut v| {
        v.sort_by(f64::total_cmp);
        Tfn::new(v[0], v[1], v[2]).unwrap()
    })
}

fn ordered(t: Tfn) -> bool {
    t.l() <= t.m() && t.m() <= t.u()
}

fn close(a: Tfn, b: Tfn, rel: f64) -> bool {
    let c = |x: f64, y: f64| (x - y).abs() <= rel * x.abs().max(y.abs()).max(1.0);
    c(a.l(), b.l()) && c(a.m(), b.m()) && c(a.u(), b.u())
}

proptest! {
    #[test]
    fn operations_keep_ordering(a in arb_tfn(), b in arb_tfn()) {
        prop_assert!(ordered(tfn_add(a, b)));
        prop_assert!(ordered(tfn_mul(a, b).unwrap()));
        prop_assert!(ordered(tfn_invert(a).unwrap()));
    }

    #[test]
    fn add_commutes_and_associates(a in arb_tfn(), b in arb_tfn(), c in arb_tfn()) {
        prop_assert_eq!(tfn_add(a, b), tfn_add(b, a));
        prop_assert!(close(tfn_add(tfn_add(a, b), c), tfn_add(a, tfn_add(b, c)), 1e-12));
    }

    #[test]
    fn mul_associates(a in arb_tfn(), b in arb_tfn(), c in arb_tfn()) {
        let left = tfn_mul(tfn_mul(a, b).unwrap(), c).unwrap();
        let right = tfn_mul(a, tfn_mul(b, c).unwrap()).unwrap();
        prop_assert!(close(left, right, 1e-12));
        prop_assert_eq!(tfn_mul(a, b).unwrap(), tfn_mul(b, a).unwrap());
    }

    #[test]
    fn invert_is_an_involution(a in arb_tfn()) {
        prop_assert!(close(tfn_invert(tfn_invert(a).unwrap()).unwrap(), a, 1e-12));
        prop_assert!(a.is_reciprocal_of(&tfn_invert(a).unwrap(), 1e-12));
    }

    #[test]
    fn membership_in_unit_interval(a in arb_tfn(), x in -1.0f64..12.0) {
        let mu = a.membership_at(x);
        prop_assert!((0.0..=1.0).contains(&mu));
        prop_assert_eq!(a.membership_at(a.m()), 1.0);
        if x < a.l() || x > a.u() {
            prop_assert_eq!(mu, 0.0);
        }
    }

    #[test]
    fn attitudes_are_ordered(a in arb_tfn()) {
        let p = defuzzify(a, Attitude::Pessimistic);
        let m = defuzzify(a, Attitude::Moderate);
        let o = defuzzify(a, Attitude::Optimistic);
        prop_assert!(p <= m && m <= o);
    }

    #[test]
    fn crisp_numbers_defuzzify_to_themselves(v in 0.01f64..10.0) {
        let t = Tfn::crisp(v);
        for att in Attitude::ALL {
            prop_assert_eq!(defuzzify(t, att), v);
        }
    }

    #[test]
    fn display_round_trips(a in arb_tfn()) {
        let text = format!("{}/{}/{}", a.l(), a.m(), a.u());
        let back: Tfn = text.parse().unwrap();
        prop_assert_eq!(back, a);
    }
}

#[test]
fn membership_examples() {
    let t = Tfn::new(1.0, 3.0, 5.0).unwrap();
    assert_eq!(t.membership_at(2.0), 0.5);
    assert_eq!(t.membership_at(4.5), 0.25);
    assert_eq!(t.membership_at(0.5), 0.0);
    // vertical legs
    let step = Tfn::new(7.0, 9.0, 9.0).unwrap();
    assert_eq!(step.membership_at(9.0), 1.0);
    assert_eq!(step.membership_at(9.1), 0.0);
    assert_eq!(ONE.membership_at(1.0), 1.0);
}

#[test]
fn arithmetic_examples() {
    let a = Tfn::new(1.0, 3.0, 5.0).unwrap();
    let b = Tfn::new(3.0, 5.0, 7.0).unwrap();
    assert_eq!(tfn_add(a, b), Tfn::new(4.0, 8.0, 12.0).unwrap());
    assert_eq!(tfn_mul(a, b).unwrap(), Tfn::new(3.0, 15.0, 35.0).unwrap());
    assert_eq!(tfn_invert(b).unwrap(), Tfn::new(1.0 / 7.0, 0.2, 1.0 / 3.0).unwrap());
    let zero = Tfn::crisp(0.0);
    assert!(matches!(tfn_invert(zero), Err(FuzzyError::NonPositiveOperand(_))));
    assert!(matches!(tfn_mul(zero, a), Err(FuzzyError::NonPositiveOperand(_))));
    assert!(matches!(Tfn::new(3.0, 2.0, 4.0), Err(FuzzyError::Malformed { .. })));
}

#[test]
fn scale_mapping() {
    let cases = [
        (1, (1.0, 1.0, 1.0)),
        (2, (1.0, 2.0, 4.0)),
        (3, (1.0, 3.0, 5.0)),
        (4, (2.0, 4.0, 6.0)),
        (5, (3.0, 5.0, 7.0)),
        (6, (4.0, 6.0, 8.0)),
        (7, (5.0, 7.0, 9.0)),
        (8, (6.0, 8.0, 9.0)),
        (9, (7.0, 9.0, 9.0)),
    ];
    for (k, (l, m, u)) in cases {
        assert_eq!(scale_to_tfn(k, false).unwrap(), Tfn::new(l, m, u).unwrap(), "k = {k}");
        assert_eq!(scale_to_tfn(k, true).unwrap(), Tfn::new(1.0 / u, 1.0 / m, 1.0 / l).unwrap());
    }
    assert_eq!(scale_to_tfn(0, false), Err(FuzzyError::OutOfScale(0)));
    assert_eq!(scale_to_tfn(10, true), Err(FuzzyError::OutOfScale(10)));
}

#[test]
fn parse_forms() {
    let expected = Tfn::new(0.2, 0.33, 1.0).unwrap();
    for text in ["[0.2, 0.33, 1]", "(0.2,0.33,1)", "0.2/0.33/1", " 0.2 / 0.33 / 1 "] {
        assert_eq!(text.parse::<Tfn>().unwrap(), expected, "{text:?}");
    }
    assert!("0.2/0.1/1".parse::<Tfn>().is_err());
    assert!("1/2".parse::<Tfn>().is_err());
    assert_eq!("optimistic".parse::<Attitude>().unwrap(), Attitude::Optimistic);
    assert_eq!("Pessimistic".parse::<Attitude>().unwrap(), Attitude::Pessimistic);
}

#[test]
fn malformed_cell_needs_repair() {
    // a lower cell typed out of order, as in the typed uncertainty block
    let raw = vec![
        vec![[1.0; 3], [1.0, 3.0, 5.0], [5.0, 7.0, 9.0]],
        vec![[0.2, 0.33, 1.0], [1.0; 3], [5.0, 7.0, 9.0]],
        vec![[0.11, 0.143, 0.2], [0.11, 0.2, 0.14], [1.0; 3]],
    ];
    assert!(matches!(
        FuzzyMatrix::load(&raw, Strictness::Strict),
        Err(FuzzyError::MalformedCell { i: 2, j: 1, .. })
    ));
    let (m, log) = FuzzyMatrix::load(&raw, Strictness::Lenient).unwrap();
    assert_eq!(log.len(), 1);
    assert_eq!((log[0].i, log[0].j), (2, 1));
    assert!(m.get(2, 1).is_reciprocal_of(&m.get(1, 2), 1e-12));
    // acceptable cells stay as typed
    assert_eq!(m.get(1, 0), Tfn::new(0.2, 0.33, 1.0).unwrap());
}
