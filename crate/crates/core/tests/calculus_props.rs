use phantom_core::calculus::{path_integral_full, Path, PhantomPolynomial, QuadratureConfig};
use phantom_core::Phantom;
use proptest::collection::vec;
use proptest::prelude::*;

fn phantom(range: f64) -> impl Strategy<Value = Phantom> {
    (-range..range, -range..range).prop_map(|(a, b)| Phantom::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn horner_matches_componentwise(coeffs in vec(phantom(3.0), 1..8), z in phantom(2.0)) {
        let p = PhantomPolynomial::new(coeffs);
        prop_assert!(p.eval(z).approx_eq_rel(p.eval_ring(z), 1e-10));
    }

    #[test]
    fn conjugate_polynomial_evaluates_at_conjugate(coeffs in vec(phantom(3.0), 1..8), z in phantom(2.0)) {
        let p = PhantomPolynomial::new(coeffs);
        let lhs = p.conjugate().eval(z.conjugate());
        prop_assert!(lhs.approx_eq_rel(p.eval(z).conjugate(), 1e-10));
    }

    #[test]
    fn antiderivative_then_derivative_is_identity(coeffs in vec(phantom(3.0), 1..8), z in phantom(2.0)) {
        let p = PhantomPolynomial::new(coeffs);
        prop_assert!(p.antiderivative().derivative().eval(z).approx_eq_rel(p.eval(z), 1e-10));
    }

    #[test]
    fn polynomial_integral_is_path_independent(
        coeffs in vec(phantom(2.0), 1..5),
        start in phantom(1.0),
        end in phantom(1.0),
        bend in -1.0..1.0f64,
    ) {
        let p = PhantomPolynomial::new(coeffs);
        let big_p = p.antiderivative();
        let exact = big_p.eval(end) - big_p.eval(start);
        let d = end - start;
        let curved = Path::new(
            move |t| start.re + d.re * t,
            move |t| start.ph + d.ph * t + bend * (std::f64::consts::PI * t).sin(),
            0.0,
            1.0,
        )
        .unwrap();
        let got = path_integral_full(|z| p.eval(z), &curved, &QuadratureConfig::default()).unwrap();
        prop_assert!(got.approx_eq(exact, 1e-7 * (1.0 + exact.abs())), "{} vs {}", got, exact);
    }
}
