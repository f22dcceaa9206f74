mod common;

use common::poly;
use planar_lnd::expr::parse_poly;
use planar_lnd::polyring::{express_in, jacobian_det};
use planar_lnd::{Poly, Rat, UniPoly, Var};
use proptest::prelude::*;

proptest! {
    #![proptest_config(common::config(128))]

    #[test]
    fn ring_axioms(a in poly(4, 8), b in poly(4, 8), c in poly(4, 8)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Poly::one(), a.clone());
    }

    #[test]
    fn mixed_partials_commute(p in poly(6, 12)) {
        prop_assert_eq!(p.partial(Var::X).partial(Var::Y), p.partial(Var::Y).partial(Var::X));
    }

    #[test]
    fn jacobian_leibniz(f in poly(4, 6), g in poly(3, 6), h in poly(3, 6)) {
        let lhs = jacobian_det(&f, &(&g * &h));
        let rhs = &(&g * &jacobian_det(&f, &h)) + &(&h * &jacobian_det(&f, &g));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_is_a_homomorphism(a in poly(3, 6), b in poly(3, 6), ix in poly(3, 5), iy in poly(3, 5)) {
        let s = |p: &Poly| p.substitute(&ix, &iy);
        prop_assert_eq!(s(&(&a * &b)), &s(&a) * &s(&b));
        prop_assert_eq!(s(&(&a + &b)), &s(&a) + &s(&b));
    }

    #[test]
    fn express_in_recovers_univariate(coeffs in prop::collection::vec((-9i64..=9, 1i64..=9), 0..=7), a in poly(4, 6)) {
        prop_assume!(!a.is_constant());
        let f = UniPoly::new(coeffs.into_iter().map(|(n, d)| Rat::new(n.into(), d.into())).collect());
        let g = f.eval_poly(&a);
        let back = express_in(&g, &a).unwrap();
        prop_assert_eq!(back.eval_poly(&a), g);
        prop_assert_eq!(back, f);
    }

    #[test]
    fn print_parse_print_is_fixed(p in poly(6, 12)) {
        let printed = p.to_string();
        let reparsed = parse_poly(&printed).unwrap();
        prop_assert_eq!(&reparsed, &p);
        prop_assert_eq!(reparsed.to_string(), printed);
    }
}
