use phantom_core::{OrderKind, Phantom, PhantomError};
use proptest::prelude::*;

fn phantom(range: f64) -> impl Strategy<Value = Phantom> {
    (-range..range, -range..range).prop_map(|(a, b)| Phantom::new(a, b))
}

proptest! {
    #[test]
    fn realization_is_a_ring_homomorphism(z in phantom(10.0), w in phantom(10.0)) {
        let (s, p) = (z + w, z * w);
        prop_assert!((s.reduction() - (z.reduction() + w.reduction())).abs() <= 1e-12 * (1.0 + s.reduction().abs()) * 10.0);
        let want = z.reduction() * w.reduction();
        prop_assert!((p.reduction() - want).abs() <= 1e-12 * (1.0 + want.abs()) * 10.0);
        prop_assert_eq!(p.re, z.re * w.re);
    }

    #[test]
    fn conjugation_is_an_involution(z in phantom(1e6)) {
        prop_assert!(z.conjugate().conjugate().approx_eq_rel(z, 1e-15));
    }

    #[test]
    fn zero_divisors_are_never_inverted(a in -10.0..10.0f64) {
        for z in [Phantom::new(0.0, a), Phantom::new(a, -a)] {
            prop_assert!(z.is_zero_divisor());
            let rejected = matches!(z.inverse(), Err(PhantomError::NotInvertible(_)));
            prop_assert!(rejected);
        }
    }

    #[test]
    fn division_undoes_multiplication(z in phantom(10.0), w in phantom(10.0)) {
        prop_assume!(w.re.abs() > 1e-3 && w.reduction().abs() > 1e-3);
        prop_assert!((z * w).div(w).unwrap().approx_eq_rel(z, 1e-9));
    }

    #[test]
    fn exp_turns_sums_into_products(z in phantom(3.0), w in phantom(3.0)) {
        prop_assert!((z + w).exp().approx_eq_rel(z.exp() * w.exp(), 1e-12));
    }

    #[test]
    fn ln_inverts_exp(z in phantom(5.0)) {
        prop_assert!(z.exp().ln().unwrap().approx_eq(z, 1e-10));
    }

    #[test]
    fn roots_invert_powers(a in 0.1..10.0f64, b in 0.1..10.0f64, n in 1u32..7) {
        let z = Phantom::from_components(a, b);
        let r = z.nth_root(n).unwrap();
        prop_assert!(r.pow_int(n as i32).unwrap().approx_eq_rel(z, 1e-12));
    }

    #[test]
    fn lex_is_a_total_order(z in phantom(5.0), w in phantom(5.0), v in phantom(5.0)) {
        let ord = OrderKind::Lex;
        prop_assert!(ord.compare(z, w).is_le() || ord.compare(w, z).is_le());
        if ord.compare(z, w).is_le() && ord.compare(w, v).is_le() {
            prop_assert!(ord.compare(z, v).is_le());
        }
    }

    #[test]
    fn alpha_order_respects_translation(z in phantom(5.0), w in phantom(5.0), s in phantom(5.0), alpha in 0.0..1.0f64) {
        let ord = OrderKind::alpha(alpha).unwrap();
        if ord.compare(z, w).is_le() {
            prop_assert!(ord.compare_tol(z + s, w + s, 1e-9).is_le());
        }
    }

    #[test]
    fn metric_is_symmetric(z in phantom(10.0), w in phantom(10.0)) {
        prop_assert_eq!(z.distance(w), w.distance(z));
    }
}
