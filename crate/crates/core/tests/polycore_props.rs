//! Property tests for the polynomial substrate: print/parse round-trips,
//! ring laws, and elimination symmetries on randomized inputs.

use proptest::prelude::*;

use webflat_core::polycore::{
    gcd, parse_poly, resultant, squarefree_part, GaussRat, MPoly, VarSet,
};

fn vars3() -> VarSet {
    VarSet::new(vec!["x", "y", "z"])
}

fn arb_coeff() -> impl Strategy<Value = GaussRat> {
    (-6i64..=6, 1i64..=3, -2i64..=2).prop_map(|(n, d, i)| {
        GaussRat::new(
            webflat_core::polycore::rat(n, d),
            webflat_core::polycore::rat(i, 1),
        )
    })
}

fn arb_poly(max_deg: u32, max_terms: usize) -> impl Strategy<Value = MPoly> {
    prop::collection::vec(
        (
            prop::collection::vec(0..=max_deg, 3),
            arb_coeff(),
        ),
        0..=max_terms,
    )
    .prop_map(|terms| MPoly::from_terms(&vars3(), terms))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_parse_roundtrip(f in arb_poly(4, 6)) {
        let text = f.to_string();
        let back = parse_poly(&text, &vars3()).unwrap();
        prop_assert_eq!(&back, &f);
        // canonical: printing the reparse is byte-identical
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn ring_laws(f in arb_poly(3, 5), g in arb_poly(3, 5), h in arb_poly(2, 4)) {
        prop_assert_eq!(f.add(&g), g.add(&f));
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        prop_assert!(f.sub(&f).is_zero());
    }

    #[test]
    fn gcd_divides_both(f in arb_poly(2, 4), g in arb_poly(2, 4)) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let d = gcd(&f, &g);
        prop_assert!(webflat_core::polycore::divides(&d, &f));
        prop_assert!(webflat_core::polycore::divides(&d, &g));
    }

    #[test]
    fn squarefree_part_divides(f in arb_poly(2, 4)) {
        prop_assume!(!f.is_zero());
        let s = squarefree_part(&f.mul(&f));
        prop_assert!(webflat_core::polycore::divides(&s, &f.mul(&f)));
    }

    #[test]
    fn resultant_vanishes_iff_shared_factor(f in arb_poly(2, 3), g in arb_poly(2, 3), c in arb_poly(1, 3)) {
        prop_assume!(f.degree_in(0) >= 1 && g.degree_in(0) >= 1 && c.degree_in(0) >= 1);
        // A deliberately shared factor forces a zero resultant.
        let fc = f.mul(&c);
        let gc = g.mul(&c);
        let r = resultant(&fc, &gc, 0).unwrap();
        prop_assert!(r.is_zero());
    }

    #[test]
    fn substitution_is_evaluation_compatible(f in arb_poly(3, 5), n in -4i64..=4) {
        // substituting a constant equals partial evaluation
        let v = vars3();
        let cst = MPoly::int(&v, n);
        let sub = f.substitute_name("y", &cst);
        let p0 = GaussRat::from_int(2);
        let p2 = GaussRat::from_int(-3);
        let lhs = sub.eval_exact(&[p0.clone(), GaussRat::zero(), p2.clone()]);
        let rhs = f.eval_exact(&[p0, GaussRat::from_int(n), p2]);
        prop_assert_eq!(lhs, rhs);
    }
}
