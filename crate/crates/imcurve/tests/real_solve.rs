mod common;

use imcurve::pipeline;
use imcurve::real_solve::{self, DEFAULT_REFINE_BITS};
use imcurve::transforms::{self, RealFrame};
use imcurve::univariate::{self, IntPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn sturm_matches_constructed_roots_on_1000_polynomials() {
    let mut r = common::rng(11);
    for _ in 0..1000 {
        let (p, roots) = common::constructed_poly(&mut r, 30);
        assert_eq!(common::sturm_total(&p), roots.len(), "{p:?}");
        // counts on a random open interval
        let lo = BigRational::new(BigInt::from(r.gen_range(-45..=0)), BigInt::from(7));
        let hi = BigRational::new(BigInt::from(r.gen_range(0..=45)), BigInt::from(5));
        let inside = roots.iter().filter(|x| **x > lo && **x < hi).count();
        assert_eq!(
            univariate::sturm_count_int(&p, &Some(lo), &Some(hi)).unwrap(),
            inside
        );
    }
}

#[test]
fn sturm_matches_numeric_roots_on_random_polynomials() {
    let mut r = common::rng(12);
    let mut compared = 0;
    while compared < 1000 {
        let d = r.gen_range(1..=12);
        let mut c: Vec<i64> = (0..=d).map(|_| r.gen_range(-20..=20)).collect();
        c[d] = r.gen_range(1..=20);
        let p = IntPoly::from_i64(&c).squarefree();
        if p.degree() == 0 {
            continue;
        }
        if let Some(n) = common::numeric_real_root_count(&p) {
            assert_eq!(common::sturm_total(&p), n, "{c:?}");
            compared += 1;
        }
    }
}

#[test]
fn isolation_agrees_with_sturm() {
    let mut r = common::rng(13);
    for _ in 0..200 {
        let (p, roots) = common::constructed_poly(&mut r, 16);
        let iso = univariate::isolate_real_roots(&p).unwrap();
        assert_eq!(iso.roots.len(), roots.len());
        for (root, want) in iso.roots.iter().zip(&roots) {
            let (a, b) = root.bounds();
            assert!(&a <= want && want <= &b);
        }
    }
}

fn seed() -> pipeline::CurveCertificate {
    pipeline::seed_nodal_cubic(42).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn census_is_chart_consistent(m in proptest::array::uniform3(proptest::array::uniform3(-3i64..=3))) {
        let frame = RealFrame::from_ints(m);
        prop_assume!(frame.is_ok());
        let s = seed();
        let moved = transforms::apply_frame(&s.poly, &frame.unwrap()).unwrap();
        let c = real_solve::real_points(&moved, DEFAULT_REFINE_BITS).unwrap();
        prop_assert_eq!(c.count, 9);
        prop_assert!(c.count <= c.cap);
    }
}

#[test]
fn refine_width_does_not_change_the_count() {
    let s = seed();
    for bits in [8, 20, 30, 48] {
        let c = real_solve::real_points(&s.poly, bits).unwrap();
        assert_eq!(c.count, 9, "bits {bits}");
        for b in &c.boxes {
            assert!(
                b.width() <= BigRational::new(BigInt::from(1), BigInt::from(2).pow(bits as u32))
            );
        }
    }
}

#[test]
fn bezout_cap_on_random_imaginary_curves() {
    let mut r = common::rng(14);
    for _ in 0..20 {
        let d = r.gen_range(1..=3);
        let f = common::random_dense_form(&mut r, d);
        if !f.is_imaginary() {
            continue;
        }
        match real_solve::real_points(&f, 16) {
            Ok(c) => assert!(c.count <= (d * d) as usize && c.cap == (d * d) as usize),
            Err(imcurve::Error::PositiveDimensional(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }
}
