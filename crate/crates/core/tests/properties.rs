use horadam_core::exact::{Decimal, Rat, Sign, QF};
use horadam_core::families::{byproduct_relation_residual, Relation};
use horadam_core::horadam::identity_4_1_residual;
use horadam_core::oracle::{telescope_check, Window};
use horadam_core::{
    direct_finite, direct_infinite, eval_finite_closed, eval_finite_equivalent,
    eval_infinite_closed, validate, FamilyId, HoradamParams, SeqKind, SpecRecord, SumSpec,
};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rat> {
    (-30i64..=30, 1i64..=7).prop_map(|(n, d)| Rat::new(n, d).unwrap())
}

fn small_int() -> impl Strategy<Value = Rat> {
    (-5i64..=5).prop_map(Rat::from)
}

fn nonsquare() -> impl Strategy<Value = Rat> {
    prop::sample::select(vec![2i64, 3, 5, 6, 7, 10, 13, -1, -3]).prop_map(Rat::from)
}

fn qf() -> impl Strategy<Value = QF> {
    (rat(), rat(), nonsquare()).prop_map(|(x, y, d)| QF::new(x, y, d).unwrap())
}

fn params() -> impl Strategy<Value = HoradamParams> {
    (small_int(), small_int(), small_int(), small_int())
        .prop_filter_map("q = 0 or Δ = 0", |(a, b, p, q)| {
            HoradamParams::new(a, b, p, q).ok()
        })
}

/// Same `√d` for both operands.
fn qf_pair() -> impl Strategy<Value = (QF, QF)> {
    (rat(), rat(), rat(), rat(), nonsquare())
        .prop_map(|(a, b, c, e, d)| (QF::new(a, b, d.clone()).unwrap(), QF::new(c, e, d).unwrap()))
}

proptest! {
    #[test]
    fn rat_field_axioms(a in rat(), b in rat(), c in rat()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !b.is_zero() {
            prop_assert_eq!(a.checked_div(&b).unwrap() * &b, a);
        }
    }

    #[test]
    fn qf_conjugate_and_norm_are_multiplicative((x, y) in qf_pair()) {
        let xy = x.try_mul(&y).unwrap();
        prop_assert_eq!(xy.conj(), x.conj().try_mul(&y.conj()).unwrap());
        prop_assert_eq!(xy.norm(), x.norm() * y.norm());
        if !y.is_zero() {
            prop_assert_eq!(xy.try_div(&y).unwrap(), x);
        }
    }

    #[test]
    fn qf_sign_agrees_with_decimal(x in qf()) {
        prop_assume!(x.disc().is_positive());
        let s = x.sign().unwrap();
        let d = Decimal::from_qf(&x, 60).unwrap();
        match s {
            Sign::Zero => prop_assert!(x.is_zero()),
            Sign::Negative => prop_assert!(d.negative),
            Sign::Positive => prop_assert!(!d.negative && d.digits != "0"),
        }
        let lo = x.lower_rat(60).unwrap();
        let hi = x.upper_rat(60).unwrap();
        prop_assert!(lo <= hi);
        prop_assert!(&hi - &lo <= Rat::new(1, 1).unwrap().scale10(-59));
    }

    #[test]
    fn qf_pow_is_additive(x in qf(), m in -6i64..=6, n in -6i64..=6) {
        prop_assume!(!x.is_zero());
        let lhs = x.pow(m + n).unwrap();
        let rhs = x.pow(m).unwrap().try_mul(&x.pow(n).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn recurrence_holds_both_ways(w in params()) {
        for n in -20i64..=20 {
            prop_assert_eq!(w.term(n), w.p() * w.term(n - 1) - w.q() * w.term(n - 2));
        }
    }

    #[test]
    fn binet_form(w in params()) {
        let (alpha, beta) = (w.alpha(), w.beta());
        let root = alpha.try_sub(beta).unwrap();
        for n in -20i64..=20 {
            let binet = w
                .big_a()
                .try_mul(&alpha.pow(n).unwrap())
                .unwrap()
                .try_sub(&w.big_b().try_mul(&beta.pow(n).unwrap()).unwrap())
                .unwrap()
                .try_div(&root)
                .unwrap();
            let direct = QF::from_rat(w.term(n), alpha.disc()).unwrap();
            prop_assert_eq!(binet, direct, "n = {}", n);
        }
    }

    #[test]
    fn lucas_identities(w in params()) {
        for n in -20i64..=20 {
            let qn = w.q().pow(n).unwrap();
            let (u, v) = (w.u(n), w.v(n));
            prop_assert_eq!(&v * &v - w.disc() * &u * &u, Rat::from(4) * &qn);
            prop_assert_eq!(w.u(-n), -(u.checked_div(&qn).unwrap()));
            prop_assert_eq!(w.v(-n), v.checked_div(&qn).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn identity_4_1(w in params(), n in -15i64..=15, r in -15i64..=15, s in -15i64..=15) {
        prop_assert!(identity_4_1_residual(&w, n, r, s).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn telescoping(
        values in prop::collection::vec(rat(), 34),
        big_n in 0i64..=8,
        t in 0i64..=8,
        alternating in any::<bool>(),
    ) {
        let f = Window { start: 0, values };
        prop_assert!(telescope_check(&f, big_n, t, alternating).unwrap().is_zero());
    }
}

fn finite_family() -> impl Strategy<Value = FamilyId> {
    prop::sample::select(
        FamilyId::ALL
            .iter()
            .copied()
            .filter(|f| f.is_finite())
            .collect::<Vec<_>>(),
    )
}

fn infinite_family() -> impl Strategy<Value = FamilyId> {
    prop::sample::select(
        FamilyId::ALL
            .iter()
            .copied()
            .filter(|f| f.is_infinite())
            .collect::<Vec<_>>(),
    )
}

fn sign() -> impl Strategy<Value = i8> {
    prop::sample::select(vec![1i8, -1])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn finite_closed_forms_match_direct_sums(
        family in finite_family(),
        (a, b, p, q) in (small_int(), small_int(), small_int(), small_int()),
        m in -4i64..=4,
        k in 1i64..=4,
        n in -3i64..=4,
        big_n in 0i64..=8,
        sign in sign(),
    ) {
        let Ok(spec) = SumSpec::new(family, SeqKind::W, a, b, p, q, m, k, n, Some(big_n), sign) else {
            return Ok(());
        };
        if validate(&spec).is_err() {
            return Ok(());
        }
        let closed = eval_finite_closed(&spec).unwrap().exact;
        let equivalent = eval_finite_equivalent(&spec).unwrap().exact;
        let direct = direct_finite(&spec).unwrap();
        prop_assert_eq!(closed.as_rat(), Some(&direct), "{}", spec);
        prop_assert_eq!(&equivalent, &closed, "{}", spec);
    }

    #[test]
    fn relations_vanish(
        w in params(),
        m in -4i64..=4,
        k in 1i64..=4,
        big_n in 0i64..=8,
    ) {
        prop_assume!(m != 0);
        for which in [Relation::First, Relation::Second] {
            if let Ok(r) = byproduct_relation_residual(which, &w, m, k, big_n) {
                prop_assert!(r.is_zero(), "relation {} at {} m={} k={} N={}", which, w, m, k, big_n);
            }
        }
    }

    #[test]
    fn spec_records_round_trip(
        family in finite_family(),
        (a, b, p, q) in (small_int(), small_int(), small_int(), small_int()),
        m in -4i64..=4,
        k in 1i64..=4,
        big_n in 0i64..=8,
        sign in sign(),
    ) {
        let Ok(spec) = SumSpec::new(family, SeqKind::W, a, b, p, q, m, k, 1, Some(big_n), sign) else {
            return Ok(());
        };
        let rec = spec.record();
        let back: SpecRecord = serde_json::from_str(&serde_json::to_string(&rec).unwrap()).unwrap();
        prop_assert_eq!(&back, &rec);
        prop_assert_eq!(back.to_spec().unwrap(), spec);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn infinite_closed_forms_lie_in_oracle_brackets(
        family in infinite_family(),
        (a, b) in (small_int(), small_int()),
        p in 1i64..=4,
        q in -3i64..=3,
        m in 1i64..=3,
        k in 1i64..=3,
        n in 1i64..=3,
    ) {
        let Ok(spec) = SumSpec::new(family, SeqKind::W, a, b, p.into(), q.into(), m, k, n, None, 1) else {
            return Ok(());
        };
        if validate(&spec).is_err() {
            return Ok(());
        }
        let exact = eval_infinite_closed(&spec).unwrap().exact;
        let bracket = direct_infinite(&spec, &"1e-30".parse().unwrap()).unwrap();
        prop_assert!(bracket.contains(&exact).unwrap(), "{} = {}", spec, exact);
    }
}
