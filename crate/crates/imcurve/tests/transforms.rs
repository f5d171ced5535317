mod common;

use imcurve::gaussian::GaussianRational as GR;
use imcurve::pipeline::{self, PipelineOptions};
use imcurve::poly::{PlanePoly, ProjectivePoint};
use imcurve::real_solve;
use imcurve::transforms::{self, RealFrame};
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn cremona_twice_is_identity_up_to_monomial_on_100_curves() {
    let mut r = common::rng(21);
    for _ in 0..100 {
        let d = r.gen_range(1..=5);
        let f = common::random_dense_form(&mut r, d);
        assert!(common::cremona_involution_holds(&f), "{f}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn squaring_pullback_is_deck_invariant(s in any::<u64>(), d in 1u32..6) {
        let f = common::random_dense_form(&mut common::rng(s), d);
        let g = transforms::squaring_pullback(&f).unwrap();
        prop_assert_eq!(g.degree(), 2 * d);
        for (m, _) in g.terms() {
            prop_assert!(m.0.iter().all(|e| e % 2 == 0));
        }
        for k in 0..3 {
            let mut flip = [[1i64, 0, 0], [0, 1, 0], [0, 0, 1]];
            flip[k][k] = -1;
            let frame = RealFrame::from_ints(flip).unwrap();
            prop_assert_eq!(transforms::apply_frame(&g, &frame).unwrap(), g.clone());
        }
    }

    #[test]
    fn tangent_conic_touches_the_line(s in any::<u64>()) {
        let mut r = common::rng(s);
        let (a, b) = (common::small_gr(&mut r), common::small_gr(&mut r));
        prop_assume!(!a.is_real() || !b.is_real());
        let z1 = ProjectivePoint::new([GR::from_int(1), a, b]).unwrap();
        // an imaginary line through z1
        let w = ProjectivePoint::new([GR::from_int(0), GR::from_int(1), common::small_gr(&mut r)]).unwrap();
        let l1 = PlanePoly::linear(&z1.cross(&w));
        prop_assume!(!l1.is_real());
        let (k, _) = transforms::tangent_conic_frame(&z1, &l1, s).unwrap();
        prop_assert!(k.is_real());
        // K(z1 + t w) = c0 + c1 t + c2 t^2 with c0 = c1 = 0
        let at = |t: i64| {
            let tt = GR::from_int(t);
            let p: Vec<GR> = (0..3).map(|j| &z1.coords[j] + &(&tt * &w.coords[j])).collect();
            k.eval(&p)
        };
        prop_assert!(at(0).is_zero());
        prop_assert!((&at(1) - &at(-1)).is_zero());
        prop_assert!(!at(1).is_zero());
    }
}

#[test]
fn frames_preserve_census_and_multiplicities() {
    let opts = PipelineOptions::default();
    let s = pipeline::seed_nodal_cubic(opts.seed).unwrap();
    let frame = RealFrame::from_ints([[2, 1, 0], [0, 1, -1], [1, 0, 3]]).unwrap();
    let g = transforms::apply_frame(&s.poly, &frame).unwrap();
    assert_eq!(
        real_solve::real_points(&g, 30).unwrap().count,
        s.census.count
    );
    for rec in &s.singularities {
        let z = frame.apply_point(&rec.center);
        assert_eq!(
            imcurve::local::multiplicity_at(&g, &z).unwrap(),
            rec.multiplicity
        );
    }
}
