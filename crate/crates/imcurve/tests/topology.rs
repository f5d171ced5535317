mod common;

use imcurve::topology::{self, BranchClass, IntersectionLattice, Provenance};
use proptest::prelude::*;

#[test]
fn signature_is_16k_up_to_1000() {
    for k in 0..=1000 {
        assert_eq!(topology::signature_Y(k) - 16 * k as i64, 0, "k = {k}");
    }
}

#[test]
fn lattice_and_closed_form_agree() {
    for k in 0..=100 {
        assert_eq!(
            topology::signature_Y(k),
            common::closed_form_signature(k as i64)
        );
        assert_eq!(IntersectionLattice::blown_up(k).signature(), -(k as i64));
        assert_eq!(
            topology::arnold_class(k).self_intersection(&IntersectionLattice::blown_up(k)),
            -36 * k as i64
        );
    }
}

#[test]
fn w2_sweep_over_even_coefficients() {
    for k in 1..=20 {
        let l = IntersectionLattice::blown_up(k);
        for c in [2i64, 4, 6, 8] {
            let w = topology::branched_w2(&l, &BranchClass::uniform(k, c)).unwrap();
            let expect = (1 + c / 2) % 2;
            assert!(w.0.iter().all(|&b| b as i64 == expect), "k = {k}, c = {c}");
        }
    }
}

#[test]
fn odd_branch_class_is_rejected() {
    let l = IntersectionLattice::blown_up(2);
    assert!(topology::branched_w2(
        &l,
        &BranchClass {
            coefficients: vec![6, 5]
        }
    )
    .is_err());
}

#[test]
fn spin_reports() {
    for k in 1..=100 {
        let r = topology::spin_report(k).unwrap();
        assert_eq!(r.sigma_y, 16 * k as i64);
        assert_eq!(r.sigma_y % 16, 0);
        assert!(r.spin && r.w2_y.is_zero());
        assert_eq!(r.simply_connected, Provenance::Assumed);
    }
    let r = topology::spin_report(3).unwrap();
    assert_eq!(r.sigma_y, 48);
    assert_eq!(r.to_value()["simply_connected"], "assumed");
}

proptest! {
    #[test]
    fn signature_is_a_congruence_invariant(k in 1usize..6, s in any::<u64>()) {
        // P^T G P for a unimodular upper-triangular P
        use rand::Rng;
        let mut r = common::rng(s);
        let n = k + 1;
        let mut g = vec![vec![0i64; n]; n];
        for i in 0..n {
            g[i][i] = if i == 0 { 1 } else { -1 };
        }
        let mut p = vec![vec![0i64; n]; n];
        for i in 0..n {
            p[i][i] = 1;
            for j in i + 1..n {
                p[i][j] = r.gen_range(-2..=2);
            }
        }
        let mut h = vec![vec![0i64; n]; n];
        for a in 0..n {
            for b in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        h[a][b] += p[i][a] * g[i][j] * p[j][b];
                    }
                }
            }
        }
        let l = IntersectionLattice::from_gram(&h).unwrap();
        prop_assert_eq!(l.signature(), 1 - k as i64);
        // w2 is the characteristic class: w.x = x.x mod 2 on the basis
        let w = l.wu_class().unwrap();
        let wv: Vec<i64> = w.0.iter().map(|&b| b as i64).collect();
        for i in 0..n {
            let mut e = vec![0i64; n];
            e[i] = 1;
            prop_assert_eq!(l.pairing(&wv, &e).rem_euclid(2), l.pairing(&e, &e).rem_euclid(2));
        }
    }
}
