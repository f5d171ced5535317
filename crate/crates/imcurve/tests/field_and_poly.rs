mod common;

use imcurve::gaussian::GaussianRational as GR;
use imcurve::poly::{Chart, PlanePoly};
use imcurve::resultant;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;

fn arb_form(max_deg: u32) -> impl Strategy<Value = PlanePoly> {
    (1..=max_deg, any::<u64>()).prop_map(|(d, s)| common::random_dense_form(&mut common::rng(s), d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conj_is_a_degree_preserving_involution(f in arb_form(5), g in arb_form(4)) {
        prop_assert_eq!(f.conj().conj(), f.clone());
        prop_assert_eq!(f.conj().degree(), f.degree());
        prop_assert_eq!(f.mul(&g).conj(), f.conj().mul(&g.conj()));
        prop_assert_eq!(f.add(&g).conj(), f.conj().add(&g.conj()));
    }

    #[test]
    fn real_imag_split_reassembles(f in arb_form(6)) {
        let (g, h) = f.real_imag_split();
        prop_assert!(g.is_real() && h.is_real());
        prop_assert_eq!(g.add(&h.scale(&GR::i())), f);
    }

    #[test]
    fn identity_monomial_substitution(f in arb_form(6)) {
        let id = f.monomial_substitute(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]], None, false).unwrap();
        prop_assert_eq!(id, f);
    }

    #[test]
    fn resultant_swap_sign_and_sylvester(s in any::<u64>(), dp in 1u32..4, dq in 1u32..4) {
        let mut r = common::rng(s);
        let p = common::random_affine(&mut r, 2, dp);
        let q = common::random_affine(&mut r, 2, dq);
        let rpq = resultant::resultant(&p, &q, 1).unwrap();
        let rqp = resultant::resultant(&q, &p, 1).unwrap();
        let sign = if (dp * dq) % 2 == 0 { GR::from_int(1) } else { GR::from_int(-1) };
        prop_assert_eq!(rpq.clone(), rqp.scale(&sign));
        for x in -2i64..=2 {
            let xv = GR::from_int(x);
            let oracle = common::sylvester(&common::y_coeffs_at(&p, &xv, dp), &common::y_coeffs_at(&q, &xv, dq));
            prop_assert_eq!(rpq.eval(&[xv, GR::from_int(0)]), oracle);
        }
    }
}

#[test]
fn norm_form_is_nonnegative_on_ten_thousand_real_points() {
    let mut r = common::rng(7);
    let mut checked = 0;
    for _ in 0..100 {
        let d = r.gen_range(1..=5);
        let f = common::random_dense_form(&mut r, d);
        let pts: Vec<[BigRational; 3]> = (0..100)
            .map(|_| {
                let mut c = || {
                    BigRational::new(
                        BigInt::from(r.gen_range(-50..=50)),
                        BigInt::from(r.gen_range(1..=20)),
                    )
                };
                [c(), c(), c()]
            })
            .collect();
        assert!(common::norm_form_nonnegative(&f, &pts));
        checked += pts.len();
    }
    assert_eq!(checked, 10_000);
}

#[test]
fn parse_display_roundtrip() {
    let f = PlanePoly::parse("x0^2*x1 + (1/2-3*i)*x2^3 - i*x0*x1*x2").unwrap();
    assert_eq!(PlanePoly::parse(&f.to_string()).unwrap(), f);
    assert_eq!(f.chart(), Chart::Projective);
    assert!(f.is_imaginary());
}
