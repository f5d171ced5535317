mod common;

use imcurve::patchwork::{chart_map, standard_lifting, NewtonSubdivision};

#[test]
fn subdivision_tiles_for_d_up_to_16() {
    for d in 1..=16 {
        let s = NewtonSubdivision::new(d);
        assert!(s.verify_tiling(), "d = {d}");
        let total: i64 = (0..4).map(|k| s.double_area(k)).sum();
        assert_eq!(total, (4 * d as i64).pow(2));
    }
}

#[test]
fn lifting_is_convex_for_d_up_to_16() {
    for d in 1..=16 {
        assert!(common::lifting_convex(d), "d = {d}");
        assert!(standard_lifting(d).verify());
    }
}

/// `nu - l_k` vanishes on `Δk` and is positive elsewhere, so `t^(nu - l_k)` leaves
/// exactly the monomials of `F_k` at `t = 0`.
#[test]
fn chart_rescaling_keeps_exactly_one_triangle() {
    for d in 1..=8 {
        let l = standard_lifting(d);
        let s = NewtonSubdivision::new(d);
        for p in s.lattice() {
            for k in 0..4 {
                let e = l.nu(p) as i64 - l.eval_form(k, p);
                assert!(e >= 0);
                assert_eq!(e == 0, s.contains(k, p));
            }
        }
    }
}

#[test]
fn chart_maps_are_bijections_onto_the_triangles() {
    for d in 1..=8 {
        let s = NewtonSubdivision::new(d);
        let base: Vec<_> = s
            .lattice()
            .into_iter()
            .filter(|&p| s.contains(0, p))
            .collect();
        for k in 0..4 {
            let mut img: Vec<_> = base.iter().map(|&p| chart_map(d, k, p)).collect();
            img.sort();
            img.dedup();
            assert_eq!(img.len(), base.len());
            assert!(img.iter().all(|&p| s.contains(k, p)));
            let count = s
                .lattice()
                .into_iter()
                .filter(|&p| s.contains(k, p))
                .count();
            assert_eq!(count, base.len());
        }
    }
}
