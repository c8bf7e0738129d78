use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use proptest::prelude::*;

use so3inv::cli::{format_manifold, parse_manifold};
use so3inv::cyclotomic::{divides, ev, gauss_sum, xi_sum, CycElem, QuadSum, QuadTerm};
use so3inv::jones::{habiro_coeffs_from_colored, twist_colored_jones, twist_knot_coeffs};
use so3inv::laplace::laplace_at_root;
use so3inv::numtheory::{cf_value, dedekind_sum, jacobi, neg_continued_fraction_with, Fraction, Rounding};
use so3inv::qring::QLaurent;
use so3inv::unified::{consistency, unified_invariant};
use so3inv::wrt::{tau, tau_lens_closed, SurgeryPresentation};

fn laurent(d: u64) -> impl Strategy<Value = QLaurent> {
    prop::collection::vec((-12i64..12, -5i64..6), 0..6).prop_map(move |ts| {
        QLaurent::from_terms(d, ts.into_iter().map(|(e, c)| (e, BigRational::from_integer(BigInt::from(c)))))
    })
}

fn odd_order() -> impl Strategy<Value = u64> {
    (1u64..8).prop_map(|h| 2 * h + 1)
}

fn cyc(r: u64) -> impl Strategy<Value = CycElem> {
    prop::collection::vec(-4i64..5, r as usize).prop_map(move |v| {
        CycElem::new(r, v.into_iter().map(|c| BigRational::from_integer(BigInt::from(c))).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_ring_laws(f in laurent(2), g in laurent(3), h in laurent(1)) {
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
        prop_assert!((&f * &g).raw_terms().values().all(|c| c != &BigRational::from_integer(0.into())));
    }

    #[test]
    fn laurent_division_inverts_product(f in laurent(2), g in laurent(4)) {
        prop_assume!(!g.is_zero());
        prop_assert_eq!((&f * &g).div_exact(&g).unwrap(), f);
    }

    #[test]
    fn laurent_rescaling_is_equality(f in laurent(3), m in 1u64..4) {
        prop_assert_eq!(f.rescaled(3 * m), f.clone());
        prop_assert_eq!(QLaurent::from_text(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn ev_is_a_homomorphism(f in laurent(1), g in laurent(2), r in odd_order()) {
        prop_assert_eq!(ev(&(&f * &g), r).unwrap(), &ev(&f, r).unwrap() * &ev(&g, r).unwrap());
        prop_assert_eq!(ev(&(&f + &g), r).unwrap(), &ev(&f, r).unwrap() + &ev(&g, r).unwrap());
    }

    #[test]
    fn cyclotomic_division((x, y) in odd_order().prop_flat_map(|r| (cyc(r), cyc(r)))) {
        prop_assume!(!y.is_zero());
        prop_assert_eq!(divides(&(&x * &y), &y).unwrap(), Some(x.clone()));
        if !x.is_zero() {
            prop_assert!((&x * &x.inverse().unwrap()).is_one());
        }
        prop_assert_eq!(x == y, x.coeffs() == y.coeffs());
    }

    #[test]
    fn gauss_sum_norm(r in odd_order(), d in -40i64..40) {
        prop_assume!(d != 0 && d.gcd(&(r as i64)) == 1);
        let g = gauss_sum(d, r);
        prop_assert_eq!(&g * &g.conj(), CycElem::from_int(r, r as i64));
    }

    #[test]
    fn laplace_matches_gauss_weighted_sum(r in odd_order(), d in 1i64..20, beta in -20i64..20, gamma in -3i64..4) {
        prop_assume!(d.gcd(&(r as i64)) == 1);
        let f = QuadSum::new(vec![QuadTerm::new(QLaurent::one(), 0.into(), beta.into(), gamma.into())]);
        let weighted = QuadSum::new(vec![QuadTerm::new(
            QLaurent::one(),
            Rational64::new(d, 4),
            beta.into(),
            Rational64::new(-d, 4) + gamma,
        )]);
        let lhs = xi_sum(&weighted, r).unwrap();
        let rhs = &gauss_sum(d, r) * &laplace_at_root(&f, d, r).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dedekind_reciprocity(a in 2i64..400, b in 1i64..400) {
        prop_assume!(a.gcd(&b) == 1);
        let lhs = dedekind_sum(b, a).unwrap() + dedekind_sum(a, b).unwrap();
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        prop_assert_eq!(lhs, (r(a, b) + r(b, a) + r(1, a * b)) / r(12, 1) - r(1, 4));
    }

    #[test]
    fn jacobi_is_multiplicative(d1 in -50i64..50, d2 in -50i64..50, r in odd_order()) {
        let j = |d| jacobi(d, r).unwrap() as i64;
        prop_assert_eq!(j(d1 * d2), j(d1) * j(d2));
    }

    #[test]
    fn continued_fractions_expand(n in -60i64..60, d in 1i64..40) {
        prop_assume!(n != 0);
        let x = Fraction::new(n, d);
        prop_assert!(x.numer().gcd(x.denom()) == 1 && *x.denom() > 0);
        for rule in [Rounding::Ceil, Rounding::Floor] {
            prop_assert_eq!(cf_value(&neg_continued_fraction_with(x, rule)), Some(x));
        }
    }

    #[test]
    fn habiro_coefficients_round_trip(p in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]), n in 1u64..5) {
        let values: Vec<QLaurent> = (1..=n).map(|c| twist_colored_jones(p, c)).collect();
        let h = habiro_coeffs_from_colored(&values).unwrap();
        h.validate_divisibility().unwrap();
        let t = twist_knot_coeffs(p, n - 1);
        for k in 0..n {
            prop_assert_eq!(h.get(&[k]), t.get(&[k]));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lens_chain_matches_closed_form(a in 1i64..12, b in -12i64..12, r in odd_order()) {
        prop_assume!(b != 0 && a.gcd(&b) == 1 && (r as i64).gcd(&(a * b)) == 1);
        prop_assert_eq!(tau(&SurgeryPresentation::lens(a, b), r).unwrap(), tau_lens_closed(a, b, r).unwrap());
    }

    #[test]
    fn orientation_reversal_conjugates(a in 1i64..10, b in 1i64..10, r in odd_order()) {
        prop_assume!(a.gcd(&b) == 1);
        let t = tau(&SurgeryPresentation::lens(a, b), r).unwrap();
        prop_assert_eq!(tau(&SurgeryPresentation::lens(a, -b), r).unwrap(), t.conj());
    }

    #[test]
    fn tau_is_integral(p in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3]), a in -7i64..8, b in 1i64..4, r in odd_order()) {
        prop_assume!(a != 0 && a.gcd(&b) == 1);
        prop_assert!(tau(&SurgeryPresentation::twist(p, a, b), r).unwrap().is_integral());
    }

    #[test]
    fn unified_matches_wrt(p in prop::sample::select(vec![-2i64, -1, 1, 2]), a in -5i64..6, b in 1i64..3, r in prop::sample::select(vec![3u64, 5, 7, 9])) {
        prop_assume!(a != 0 && a.gcd(&b) == 1 && (r as i64).gcd(&a) == 1);
        let m = SurgeryPresentation::twist(p, a, b);
        let i = unified_invariant(&m, r as usize - 2).unwrap();
        let (lhs, rhs) = consistency(&m, &i, r).unwrap();
        prop_assert_eq!(lhs, rhs);
        let longer = unified_invariant(&m, r as usize + 1).unwrap();
        prop_assert_eq!(longer.eval(r).unwrap(), i.eval(r).unwrap());
    }

    #[test]
    fn connected_sum_is_consistent(a1 in 1i64..5, a2 in -4i64..5, r in prop::sample::select(vec![5u64, 7])) {
        prop_assume!(a2 != 0 && (r as i64).gcd(&(a1 * a2)) == 1);
        let m = SurgeryPresentation::ConnectedSum(vec![SurgeryPresentation::lens(a1, 1), SurgeryPresentation::twist(1, a2, 1)]);
        let i = unified_invariant(&m, r as usize - 2).unwrap();
        let (lhs, rhs) = consistency(&m, &i, r).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

fn presentation() -> impl Strategy<Value = SurgeryPresentation> {
    let leaf = prop_oneof![
        (1i64..20, -20i64..20).prop_filter("coprime", |(a, b)| *b != 0 && a.gcd(b) == 1)
            .prop_map(|(a, b)| SurgeryPresentation::lens(a, b)),
        (prop::sample::select(vec![-2i64, -1, 1, 2]), -9i64..9, 1i64..5)
            .prop_filter("framing", |(_, a, b)| *a != 0 && a.gcd(b) == 1)
            .prop_map(|(p, a, b)| SurgeryPresentation::twist(p, a, b)),
        (-3i64..3, prop::collection::vec((2i64..8, 1i64..8), 1..4))
            .prop_map(|(b, ps)| {
                let pairs: Vec<(i64, i64)> = ps.into_iter().filter(|(a, b)| b < a && a.gcd(b) == 1).collect();
                SurgeryPresentation::seifert(b, &pairs)
            })
            .prop_filter("valid", |m| m.validate().is_ok()),
    ];
    prop_oneof![
        3 => leaf.clone(),
        1 => prop::collection::vec(leaf, 2..4).prop_map(SurgeryPresentation::ConnectedSum),
    ]
}

proptest! {
    #[test]
    fn manifold_descriptions_round_trip(m in presentation()) {
        prop_assert_eq!(parse_manifold(&format_manifold(&m)).unwrap(), m);
    }

    #[test]
    fn parser_never_panics(s in "[a-z0-9 (),;{}=/\\[\\]-]{0,30}") {
        let _ = parse_manifold(&s);
    }
}
