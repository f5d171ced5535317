#![allow(dead_code)]
//! Independent oracles shared by the integration tests.

use imcurve::gaussian::GaussianRational as GR;
use imcurve::local;
use imcurve::patchwork::{Lifting, NewtonSubdivision};
use imcurve::poly::{Chart, Monomial, PlanePoly};
use imcurve::topology;
use imcurve::transforms;
use imcurve::univariate::{self, IntPoly};
use num_bigint::BigInt;
use num_complex::Complex64 as C;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_gr(r: &mut ChaCha8Rng) -> GR {
    GR::from_ints(r.gen_range(-4..=4), r.gen_range(-4..=4))
}

/// Random form of degree `d` with small Gaussian-integer coefficients, all of
/// them nonzero, so the curve avoids the coordinate points.
pub fn random_dense_form(r: &mut ChaCha8Rng, d: u32) -> PlanePoly {
    let mut f = PlanePoly::zero(Chart::Projective);
    for m in local::form_monomials(d) {
        let c = loop {
            let c = small_gr(r);
            if !c.is_zero() {
                break c;
            }
        };
        f.add_term(m, c);
    }
    f
}

pub fn random_affine(r: &mut ChaCha8Rng, dx: u32, dy: u32) -> PlanePoly {
    let mut f = PlanePoly::zero(Chart::Affine);
    for i in 0..=dx {
        for j in 0..=dy {
            if r.gen_bool(0.7) {
                f.add_term(Monomial::xy(i, j), small_gr(r));
            }
        }
    }
    f.add_term(Monomial::xy(0, dy), GR::from_ints(1, 1));
    f
}

/// Determinant by fraction Gaussian elimination.
pub fn det(mut m: Vec<Vec<GR>>) -> GR {
    let n = m.len();
    let mut d = GR::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return GR::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -&d;
        }
        d = &d * &m[c][c];
        let inv = m[c][c].inv().unwrap();
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] * &inv;
            for k in c..n {
                let v = &f * &m[c][k];
                m[r][k] = &m[r][k] - &v;
            }
        }
    }
    d
}

/// Sylvester resultant of coefficient vectors (low to high, formal degrees).
pub fn sylvester(a: &[GR], b: &[GR]) -> GR {
    let (p, q) = (a.len() - 1, b.len() - 1);
    let n = p + q;
    if n == 0 {
        return GR::one();
    }
    let mut m = vec![vec![GR::zero(); n]; n];
    for r in 0..q {
        for (k, c) in a.iter().rev().enumerate() {
            m[r][r + k] = c.clone();
        }
    }
    for r in 0..p {
        for (k, c) in b.iter().rev().enumerate() {
            m[q + r][r + k] = c.clone();
        }
    }
    det(m)
}

/// Coefficients in `y` of an affine `f(x0, y)` (low to high, formal degree `dy`).
pub fn y_coeffs_at(f: &PlanePoly, x: &GR, dy: u32) -> Vec<GR> {
    let mut out = vec![GR::zero(); dy as usize + 1];
    for (m, c) in f.terms() {
        out[m.0[1] as usize] = &out[m.0[1] as usize] + &(c * &x.pow(m.0[0]));
    }
    out
}

/// Integer polynomial with prescribed distinct rational real roots `num/den` and
/// real-rootless quadratic factors `x^2 + a x + b`, `a^2 < 4b`.
pub fn constructed_poly(r: &mut ChaCha8Rng, max_deg: usize) -> (IntPoly, Vec<BigRational>) {
    let mut roots: Vec<BigRational> = Vec::new();
    let mut p = vec![BigInt::one()];
    let mul = |p: &[BigInt], f: &[i64]| -> Vec<BigInt> {
        let mut o = vec![BigInt::zero(); p.len() + f.len() - 1];
        for (i, a) in p.iter().enumerate() {
            for (j, &b) in f.iter().enumerate() {
                o[i + j] += a * b;
            }
        }
        o
    };
    let target = r.gen_range(1..=max_deg);
    while p.len() - 1 < target {
        let room = target - (p.len() - 1);
        if room >= 2 && r.gen_bool(0.35) {
            let a: i64 = r.gen_range(-6..=6);
            let b: i64 = a * a / 4 + r.gen_range(1..=9);
            p = mul(&p, &[b, a, 1]);
        } else {
            let den: i64 = r.gen_range(1..=6);
            let num: i64 = r.gen_range(-40..=40);
            let q = BigRational::new(num.into(), den.into());
            if roots.contains(&q) {
                continue;
            }
            roots.push(q);
            p = mul(&p, &[-num, den]);
        }
    }
    roots.sort();
    (IntPoly::new(p), roots)
}

/// Durand-Kerner roots of a polynomial with f64 coefficients (low to high).
pub fn numeric_roots(c: &[f64]) -> Vec<C> {
    let n = c.len() - 1;
    let lc = c[n];
    let a: Vec<f64> = c.iter().map(|v| v / lc).collect();
    let ev = |z: C| a.iter().rev().fold(C::new(0.0, 0.0), |acc, &v| acc * z + v);
    let rad = 1.0 + a[..n].iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut z: Vec<C> = (0..n)
        .map(|k| {
            C::from_polar(
                rad * 0.9,
                0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64,
            )
        })
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = C::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = ev(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 * rad {
            break;
        }
    }
    z
}

/// Numeric oracle for the number of distinct real roots: Durand-Kerner on the
/// squarefree part, with a real/imaginary gap check. `None` when undecided.
pub fn numeric_real_root_count(p: &IntPoly) -> Option<usize> {
    let s = p.squarefree();
    let c: Vec<f64> =
        s.0.iter()
            .map(|v| v.to_string().parse::<f64>().unwrap())
            .collect();
    if c.len() <= 1 {
        return Some(0);
    }
    let roots = numeric_roots(&c);
    let mut n = 0;
    for z in roots {
        let scale = 1.0 + z.norm();
        let im = z.im.abs() / scale;
        if im < 1e-7 {
            n += 1;
        } else if im < 1e-4 {
            return None;
        }
    }
    Some(n)
}

pub fn sturm_total(p: &IntPoly) -> usize {
    univariate::sturm_count_int(p, &None, &None).unwrap()
}

/// Cremona twice returns `f` up to a monomial factor and a nonzero scalar.
pub fn cremona_involution_holds(f: &PlanePoly) -> bool {
    let g = transforms::cremona(&transforms::cremona(f).unwrap()).unwrap();
    // g = c * x^e * f: compare after dividing by the lowest exponents
    let strip = |h: &PlanePoly| {
        let lo: Vec<u32> = (0..3)
            .map(|k| h.terms().map(|(m, _)| m.0[k]).min().unwrap())
            .collect();
        PlanePoly::from_terms(
            Chart::Projective,
            h.terms().map(|(m, c)| {
                (
                    Monomial([m.0[0] - lo[0], m.0[1] - lo[1], m.0[2] - lo[2]]),
                    c.clone(),
                )
            }),
        )
    };
    let (a, b) = (strip(&g), strip(f));
    let (ma, ca) = a.terms().next_back().unwrap();
    let cb = b.coeff(ma);
    if cb.is_zero() {
        return false;
    }
    let s = &cb * &ca.inv().unwrap();
    a.scale(&s) == b && !ca.is_zero()
}

/// Enumerates `(i, j)` with `i/(2m) + j/m < 1` independently of the library.
pub fn enumerated_constraints(m: u64) -> u64 {
    let mut n = 0;
    for i in 0..=2 * m {
        for j in 0..=m {
            if i + 2 * j < 2 * m {
                n += 1;
            }
        }
    }
    n
}

/// Convexity of `nu` on all lattice triples `p, q, (p+q)/2` of `T_{4d}`.
pub fn lifting_convex(d: u32) -> bool {
    let l = Lifting { d };
    let pts = NewtonSubdivision::new(d).lattice();
    for &p in &pts {
        for &q in &pts {
            if (p.0 + q.0) % 2 != 0 || (p.1 + q.1) % 2 != 0 {
                continue;
            }
            let r = ((p.0 + q.0) / 2, (p.1 + q.1) / 2);
            if 2 * l.nu(r) > l.nu(p) + l.nu(q) {
                return false;
            }
        }
    }
    true
}

/// `sigma(Y)` from the closed form `2 * (-k) + 36k / 2`.
pub fn closed_form_signature(k: i64) -> i64 {
    -2 * k + 36 * k / 2
}

pub fn topology_ok(k: usize) -> bool {
    topology::signature_Y(k) == 16 * k as i64
        && topology::signature_Y(k) == closed_form_signature(k as i64)
        && topology::w2_Y(k).map(|w| w.is_zero()).unwrap_or(false)
}

/// Real-valued `f * conj(f)` at real rational points, checked exactly.
pub fn norm_form_nonnegative(f: &PlanePoly, pts: &[[BigRational; 3]]) -> bool {
    let g = f.mul(&f.conj());
    pts.iter().all(|p| {
        let v = g.eval(&[
            GR::from_real(p[0].clone()),
            GR::from_real(p[1].clone()),
            GR::from_real(p[2].clone()),
        ]);
        v.im().is_zero() && *v.re() >= BigRational::zero()
    })
}
