mod common;

use common::{derivation, light_bounds, poly};
use planar_lnd::derivation::{
    hamiltonian_root, is_locally_nilpotent, iterated_jacobian, kernel_generator, LndVerdict,
};
use planar_lnd::polyring::{jacobian_det, normalize_generator};
use planar_lnd::{Derivation, Poly};
use proptest::prelude::*;

proptest! {
    #![proptest_config(common::config(96))]

    #[test]
    fn jacobi_identity(a in derivation(3, 5), b in derivation(3, 5), c in derivation(3, 5)) {
        let sum = a.bracket(&b.bracket(&c)) + b.bracket(&c.bracket(&a)) + c.bracket(&a.bracket(&b));
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn bracket_of_jacobian_derivations(f in poly(5, 10), g in poly(5, 10)) {
        let lhs = Derivation::jacobian(&f).bracket(&Derivation::jacobian(&g));
        prop_assert_eq!(lhs, Derivation::jacobian(&jacobian_det(&f, &g)));
    }

    #[test]
    fn bracket_of_multiples(a in poly(3, 5), b in poly(3, 5), d1 in derivation(3, 5), d2 in derivation(3, 5)) {
        let lhs = d1.mul_poly(&a).bracket(&d2.mul_poly(&b));
        let rhs = d1.bracket(&d2).mul_poly(&(&a * &b))
            + d2.mul_poly(&(&a * &d1.apply(&b)))
            - d1.mul_poly(&(&b * &d2.apply(&a)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn engel_identity(f in poly(4, 8), g in poly(4, 8)) {
        // [D_f, D_g, ..., D_g] is the Jacobian derivation of [f, g, ..., g],
        // which equals (-1)^k D_g^k(f)
        let dg = Derivation::jacobian(&g);
        let mut chain = Derivation::jacobian(&f);
        for k in 1..=5usize {
            chain = chain.bracket(&dg);
            let h = iterated_jacobian(&f, &g, k);
            prop_assert_eq!(&chain, &Derivation::jacobian(&h));
            let sign = if k % 2 == 0 { Poly::one() } else { -Poly::one() };
            prop_assert_eq!(h, &sign * &dg.iterate(&f, k));
        }
    }

}

proptest! {
    #![proptest_config(common::config(32))]

    #[test]
    fn lnd_certificates_are_sound(seed in any::<u64>()) {
        let (_, gens) = common::conjugated_algebra(seed, &light_bounds());
        for d in &gens {
            match is_locally_nilpotent(d) {
                LndVerdict::Lnd { form, index_x, index_y } => {
                    prop_assert!(d.divergence().is_zero());
                    prop_assert_eq!(&form.reconstruct(), d);
                    // least n with D^n = 0, found by iteration
                    prop_assert_eq!(d.nilpotency_index(&Poly::x(), index_x), Some(index_x));
                    prop_assert_eq!(d.nilpotency_index(&Poly::y(), index_y), Some(index_y));
                }
                LndVerdict::NotLnd(reason) => prop_assert!(false, "{d} rejected: {reason}"),
            }
        }
    }

    #[test]
    fn kernel_routes_agree(seed in any::<u64>()) {
        // small conjugates so the null-space route stays cheap
        let bounds = planar_lnd::random::ChainBounds { max_len: 2, max_shear_degree: 2, max_degree: 4 };
        let (_, gens) = common::conjugated_algebra(seed, &bounds);
        for d in gens.iter().filter(|d| !d.is_zero() && d.degree().unwrap_or(0) <= 6) {
            let (root, _) = hamiltonian_root(&d.hamiltonian().unwrap());
            let a = kernel_generator(d, root.degree().unwrap()).unwrap();
            prop_assert!(d.apply(&a).is_zero());
            prop_assert_eq!(a, normalize_generator(&root));
        }
    }
}
