mod common;

use imcurve::gaussian::GaussianRational as GR;
use imcurve::linalg;
use imcurve::local::{self, SingularityKind};
use imcurve::pipeline::{self, PipelineOptions};
use imcurve::poly::{PlanePoly, ProjectivePoint};
use imcurve::transforms::{self, RealFrame};
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn random_point(r: &mut ChaCha8Rng) -> ProjectivePoint {
    ProjectivePoint::new([GR::from_int(1), common::small_gr(r), common::small_gr(r)]).unwrap()
}

/// A line through `z` and a random second point.
fn line_through(r: &mut ChaCha8Rng, z: &ProjectivePoint) -> Option<PlanePoly> {
    let w = random_point(r);
    let c = z.cross(&w);
    if c.iter().all(|v| v.is_zero()) {
        return None;
    }
    Some(PlanePoly::linear(&c))
}

fn random_matrix(r: &mut ChaCha8Rng) -> Option<[[GR; 3]; 3]> {
    let a: [[GR; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| common::small_gr(r)));
    if linalg::det3(&a).is_zero() {
        None
    } else {
        Some(a)
    }
}

/// `f(A y)` has the same multiplicity at `A^-1 z` as `f` at `z`.
fn moved(f: &PlanePoly, z: &ProjectivePoint, a: &[[GR; 3]; 3]) -> (PlanePoly, ProjectivePoint) {
    let inv = linalg::inv3(a).unwrap();
    let g = transforms::compose_linear(f, a);
    let w = ProjectivePoint::new(linalg::apply3(&inv, &z.coords)).unwrap();
    (g, w)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplicity_is_projectively_invariant(s in any::<u64>(), m in 1u32..4) {
        let mut r = common::rng(s);
        let z = random_point(&mut r);
        // product of m lines through z times a form not vanishing there
        let mut f = PlanePoly::constant(imcurve::Chart::Projective, GR::from_int(1));
        for _ in 0..m {
            let Some(l) = line_through(&mut r, &z) else { return Ok(()) };
            f = f.mul(&l);
        }
        let u = common::random_dense_form(&mut r, 1);
        prop_assume!(!u.eval_point(&z).is_zero());
        let f = f.mul(&u);
        let Some(a) = random_matrix(&mut r) else { return Ok(()) };
        let (g, w) = moved(&f, &z, &a);
        prop_assert_eq!(local::multiplicity_at(&f, &z).unwrap(), m);
        prop_assert_eq!(local::multiplicity_at(&g, &w).unwrap(), m);
    }

    #[test]
    fn product_of_transverse_smooth_curves_is_an_ordinary_node(s in any::<u64>()) {
        let mut r = common::rng(s);
        let z = random_point(&mut r);
        let (Some(l1), Some(l2), Some(l3), Some(l4)) =
            (line_through(&mut r, &z), line_through(&mut r, &z), line_through(&mut r, &z), line_through(&mut r, &z))
        else {
            return Ok(());
        };
        let (u, v) = (common::random_dense_form(&mut r, 1), common::random_dense_form(&mut r, 1));
        prop_assume!(!u.eval_point(&z).is_zero() && !v.eval_point(&z).is_zero());
        // f has tangent l1 at z, g has tangent l2
        let f = l1.mul(&u).add(&l3.mul(&l4));
        let g = l2.mul(&v).add(&l3.mul(&l4).scale(&GR::from_int(2)));
        prop_assert_eq!(local::multiplicity_at(&f, &z).unwrap(), 1);
        prop_assert_eq!(local::multiplicity_at(&g, &z).unwrap(), 1);
        let c1 = ProjectivePoint::new(transforms::line_coeffs(&l1)).unwrap();
        let c2 = ProjectivePoint::new(transforms::line_coeffs(&l2)).unwrap();
        prop_assume!(!c1.same_point(&c2));
        let fg = f.mul(&g);
        prop_assert_eq!(local::multiplicity_at(&fg, &z).unwrap(), 2);
        prop_assert!(local::is_ordinary(&fg, &z).unwrap());
        // a tangency between the branches is not ordinary
        let ff = f.mul(&f.add(&l3.mul(&l4)));
        prop_assert!(!local::is_ordinary(&ff, &z).unwrap());
    }
}

#[test]
fn constraint_count_matches_enumeration() {
    for m in 1..=64u32 {
        let n = local::constraint_count(m) as u64;
        assert_eq!(n, (m as u64) * (m as u64 + 1));
        assert_eq!(n, common::enumerated_constraints(m as u64));
    }
}

#[test]
fn tangential_profile_is_frame_invariant() {
    let opts = PipelineOptions::default();
    let sq =
        pipeline::square_stage(&pipeline::seed_nodal_cubic(opts.seed).unwrap(), &opts).unwrap();
    let mut r = common::rng(5);
    let mut checked = 0;
    for rec in &sq.singularities {
        let SingularityKind::Tangential { branches, line } = &rec.kind else {
            continue;
        };
        assert!(local::tangential_branch_profile(&sq.poly, &rec.center, line, *branches).unwrap());
        for _ in 0..4 {
            let m: [[i64; 3]; 3] =
                std::array::from_fn(|_| std::array::from_fn(|_| r.gen_range(-3..=3)));
            let Ok(frame) = RealFrame::from_ints(m) else {
                continue;
            };
            let g = transforms::apply_frame(&sq.poly, &frame).unwrap();
            let z = frame.apply_point(&rec.center);
            let l = transforms::apply_frame(line, &frame).unwrap();
            assert!(local::tangential_branch_profile(&g, &z, &l, *branches).unwrap());
            assert!(!local::tangential_branch_profile(&g, &z, &l, *branches + 1).unwrap_or(false));
            checked += 1;
        }
    }
    assert!(checked > 0);
}
