//! Projective frames, the squaring pullback, the standard Cremona involution,
//! tangent conic selection and square-coordinate normalization.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gaussian::{ratio_to_f64, GaussianRational as GR};
use crate::linalg::{self, Matrix};
use crate::poly::{Chart, Monomial, PlanePoly, ProjectivePoint};
use crate::{Error, Result};

pub type Mat3 = [[BigRational; 3]; 3];

/// Invertible rational 3x3 matrix acting on points: `p -> M p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealFrame {
    pub matrix: Mat3,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

impl RealFrame {
    pub fn new(matrix: Mat3) -> Result<Self> {
        let f = RealFrame { matrix };
        if f.det().is_zero() {
            return Err(Error::Degenerate("singular frame matrix".into()));
        }
        Ok(f)
    }

    pub fn identity() -> Self {
        let mut m: Mat3 = Default::default();
        for (k, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = q((k == j) as i64);
            }
        }
        RealFrame { matrix: m }
    }

    pub fn from_ints(m: [[i64; 3]; 3]) -> Result<Self> {
        let mut r: Mat3 = Default::default();
        for k in 0..3 {
            for j in 0..3 {
                r[k][j] = q(m[k][j]);
            }
        }
        Self::new(r)
    }

    pub fn to_gr(&self) -> [[GR; 3]; 3] {
        let mut r: [[GR; 3]; 3] = Default::default();
        for k in 0..3 {
            for j in 0..3 {
                r[k][j] = GR::from_real(self.matrix[k][j].clone());
            }
        }
        r
    }

    fn from_gr(m: &[[GR; 3]; 3]) -> Self {
        let mut r: Mat3 = Default::default();
        for k in 0..3 {
            for j in 0..3 {
                r[k][j] = m[k][j].re().clone();
            }
        }
        RealFrame { matrix: r }
    }

    pub fn det(&self) -> BigRational {
        linalg::det3(&self.to_gr()).re().clone()
    }

    pub fn inverse(&self) -> RealFrame {
        Self::from_gr(&linalg::inv3(&self.to_gr()).expect("frame is invertible"))
    }

    /// `self` after `first`: points map by `self.matrix * first.matrix`.
    pub fn after(&self, first: &RealFrame) -> RealFrame {
        Self::from_gr(&linalg::mul3(&self.to_gr(), &first.to_gr()))
    }

    pub fn apply_point(&self, p: &ProjectivePoint) -> ProjectivePoint {
        ProjectivePoint {
            coords: linalg::apply3(&self.to_gr(), &p.coords),
        }
    }

    pub fn apply_f64(&self, p: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for k in 0..3 {
            out[k] = (0..3)
                .map(|j| ratio_to_f64(&self.matrix[k][j]) * p[j])
                .sum();
        }
        out
    }

    /// Row-major entries as text.
    pub fn entries(&self) -> Vec<String> {
        self.matrix
            .iter()
            .flatten()
            .map(crate::gaussian::fmt_rational)
            .collect()
    }

    pub fn from_entries(e: &[String]) -> Result<Self> {
        if e.len() != 9 {
            return Err(Error::Parse("a frame has 9 entries".into()));
        }
        let mut m: Mat3 = Default::default();
        for k in 0..9 {
            m[k / 3][k % 3] = crate::poly::parse_ratio(&e[k])?;
        }
        Self::new(m)
    }
}

/// `f(A y)` for a Gaussian-rational matrix `A`.
pub fn compose_linear(f: &PlanePoly, a: &[[GR; 3]; 3]) -> PlanePoly {
    let vals: Vec<PlanePoly> = (0..3)
        .map(|r| PlanePoly::linear(&[a[r][0].clone(), a[r][1].clone(), a[r][2].clone()]))
        .collect();
    f.substitute(&vals)
}

/// The curve `f` in the coordinates `y = M x`, i.e. `f(M^-1 y)`.
pub fn apply_frame(f: &PlanePoly, m: &RealFrame) -> Result<PlanePoly> {
    if f.chart() != Chart::Projective || !f.is_homogeneous() {
        return Err(Error::Chart("frames act on forms".into()));
    }
    Ok(compose_linear(f, &m.inverse().to_gr()))
}

/// Real line through `z` and its conjugate, as a primitive integer linear form.
pub fn line_through_conj_pair(z: &ProjectivePoint) -> Result<PlanePoly> {
    if z.is_real() {
        return Err(Error::Degenerate("point is real".into()));
    }
    let c = z.cross(&z.conj());
    // c is purely imaginary
    let r: Vec<BigRational> = c.iter().map(|v| v.im().clone()).collect();
    let l = primitive_real(&r);
    Ok(PlanePoly::linear(&[
        GR::from_real(l[0].clone()),
        GR::from_real(l[1].clone()),
        GR::from_real(l[2].clone()),
    ]))
}

/// Scales a rational vector to coprime integers with positive first nonzero entry.
pub fn primitive_real(v: &[BigRational]) -> Vec<BigRational> {
    let den = v.iter().fold(BigInt::one(), |a, x| a.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let mut g = ints.iter().fold(BigInt::zero(), |a, x| a.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    if ints
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| x.is_negative())
        .unwrap_or(false)
    {
        g = -g;
    }
    ints.into_iter()
        .map(|x| BigRational::from_integer(x / &g))
        .collect()
}

pub fn line_coeffs(l: &PlanePoly) -> [GR; 3] {
    let mut c: [GR; 3] = Default::default();
    for k in 0..3 {
        let mut e = [0u32; 3];
        e[k] = 1;
        c[k] = l.coeff(&Monomial(e));
    }
    c
}

/// `f(x0^2, x1^2, x2^2)`.
pub fn squaring_pullback(f: &PlanePoly) -> Result<PlanePoly> {
    if f.chart() != Chart::Projective {
        return Err(Error::Chart("squaring acts on forms".into()));
    }
    f.monomial_substitute(&[[2, 0, 0], [0, 2, 0], [0, 0, 2]], None, false)
}

/// Proper transform under `[x1 x2 : x0 x2 : x0 x1]`, together with the stripped monomial.
pub fn cremona_with_factor(f: &PlanePoly) -> Result<(PlanePoly, [u32; 3])> {
    if f.chart() != Chart::Projective || !f.is_homogeneous() {
        return Err(Error::Chart("Cremona acts on forms".into()));
    }
    let raw = f.monomial_substitute(&[[0, 1, 1], [1, 0, 1], [1, 1, 0]], None, false)?;
    let out = f.monomial_substitute(&[[0, 1, 1], [1, 0, 1], [1, 1, 0]], None, true)?;
    if out.degree() == 0 {
        return Err(Error::Degenerate(
            "curve is supported on the coordinate triangle".into(),
        ));
    }
    let mut strip = [0u32; 3];
    for k in 0..3 {
        strip[k] = raw.terms().map(|(m, _)| m.0[k]).min().unwrap_or(0);
    }
    Ok((out, strip))
}

pub fn cremona(f: &PlanePoly) -> Result<PlanePoly> {
    Ok(cremona_with_factor(f)?.0)
}

/// Image of a point off the coordinate triangle under the Cremona map.
pub fn cremona_point(p: &ProjectivePoint) -> Result<ProjectivePoint> {
    let c = &p.coords;
    if c.iter().any(|v| v.is_zero()) {
        return Err(Error::Degenerate("point on the coordinate triangle".into()));
    }
    ProjectivePoint::new([&c[1] * &c[2], &c[0] * &c[2], &c[0] * &c[1]])
}

/// Result of the tangent conic search.
#[derive(Clone, Debug)]
pub struct ConicChoice {
    pub conic: PlanePoly,
    /// Sends the three chosen points of the conic to the coordinate points.
    pub frame: RealFrame,
    pub points: [ProjectivePoint; 3],
    pub score: f64,
    pub tried: usize,
    pub certified: usize,
}

fn quad_monomials() -> Vec<Monomial> {
    crate::local::form_monomials(2)
}

fn real_pt(v: [BigRational; 3]) -> ProjectivePoint {
    ProjectivePoint {
        coords: [
            GR::from_real(v[0].clone()),
            GR::from_real(v[1].clone()),
            GR::from_real(v[2].clone()),
        ],
    }
}

/// Basis of the real conics through `z1` tangent to `l1` there.
pub fn tangent_conic_pencil(
    z1: &ProjectivePoint,
    l1: &PlanePoly,
) -> Result<(PlanePoly, PlanePoly)> {
    if z1.is_real() {
        return Err(Error::Degenerate("tangency point must be imaginary".into()));
    }
    if !l1.eval_point(z1).is_zero() {
        return Err(Error::NotOnCurve(
            "tangency point is not on the line".into(),
        ));
    }
    let l = line_coeffs(l1);
    // a second point of l1
    let qpt = (0..3)
        .map(|k| {
            let mut e: [GR; 3] = Default::default();
            e[k] = GR::one();
            ProjectivePoint { coords: e }.cross(&ProjectivePoint { coords: l.clone() })
        })
        .filter(|c| c.iter().any(|v| !v.is_zero()))
        .map(|c| ProjectivePoint { coords: c })
        .find(|p| !p.same_point(z1))
        .ok_or_else(|| Error::Degenerate("degenerate tangency line".into()))?;
    let mons = quad_monomials();
    let mut value = Vec::new();
    let mut polar = Vec::new();
    for m in &mons {
        let basis = PlanePoly::monomial(Chart::Projective, *m, GR::one());
        value.push(basis.eval_point(z1));
        let mut s = GR::zero();
        for k in 0..3 {
            s += &(&qpt.coords[k] * &basis.derivative(k).eval_point(z1));
        }
        polar.push(s);
    }
    let mut rows: Matrix = Vec::new();
    for cond in [&value, &polar] {
        rows.push(cond.iter().map(|c| GR::from_real(c.re().clone())).collect());
        rows.push(cond.iter().map(|c| GR::from_real(c.im().clone())).collect());
    }
    let ns = linalg::nullspace(&rows, mons.len());
    if ns.len() != 2 {
        return Err(Error::RankDeficient(format!(
            "tangent conic pencil has dimension {}",
            ns.len()
        )));
    }
    let mk = |v: &Vec<GR>| {
        PlanePoly::from_terms(
            Chart::Projective,
            mons.iter().cloned().zip(v.iter().cloned()),
        )
    };
    Ok((mk(&ns[0]), mk(&ns[1])))
}

fn conic_matrix_det(k: &PlanePoly) -> GR {
    let mut s: [[GR; 3]; 3] = Default::default();
    let two = GR::from_int(2);
    for a in 0..3 {
        for b in 0..3 {
            let mut e = [0u32; 3];
            e[a] += 1;
            e[b] += 1;
            let c = k.coeff(&Monomial(e));
            s[a][b] = if a == b { c } else { &c / &two };
        }
    }
    linalg::det3(&s)
}

fn rand_ratio(rng: &mut ChaCha8Rng, num: i64, den: i64) -> BigRational {
    BigRational::new(
        rng.gen_range(-num..=num).into(),
        rng.gen_range(1..=den).into(),
    )
}

/// One seeded candidate: a conic of the pencil through a rational point and two more points on it.
fn conic_candidate(
    ka: &PlanePoly,
    kb: &PlanePoly,
    rng: &mut ChaCha8Rng,
) -> Option<(PlanePoly, [ProjectivePoint; 3], RealFrame)> {
    let p0 = [q(1), rand_ratio(rng, 6, 3), rand_ratio(rng, 6, 3)];
    let dirs: Vec<[BigRational; 3]> = (0..2)
        .map(|_| {
            [
                q(rng.gen_range(-3..=3)),
                q(rng.gen_range(-3..=3)),
                q(rng.gen_range(-3..=3)),
            ]
        })
        .collect();
    let p0pt = real_pt(p0.clone());
    let (va, vb) = (ka.eval_point(&p0pt), kb.eval_point(&p0pt));
    if va.is_zero() && vb.is_zero() {
        return None;
    }
    let k = kb.scale(&va).sub(&ka.scale(&vb));
    let k = k.scale(&k.terms().next_back()?.1.inv()?);
    if !k.is_real() || conic_matrix_det(&k).is_zero() {
        return None;
    }
    let grad: Vec<GR> = (0..3).map(|j| k.derivative(j).eval_point(&p0pt)).collect();
    let mut pts = vec![p0.clone()];
    for d in &dirs {
        let dpt = real_pt(d.clone());
        let kd = k.eval_point(&dpt);
        if kd.is_zero() {
            return None;
        }
        let lin = (0..3).fold(GR::zero(), |acc, j| {
            &acc + &(&grad[j] * &GR::from_real(d[j].clone()))
        });
        let t = -(&lin / &kd);
        if t.is_zero() {
            return None;
        }
        let t = t.re().clone();
        pts.push([
            &p0[0] + &t * &d[0],
            &p0[1] + &t * &d[1],
            &p0[2] + &t * &d[2],
        ]);
    }
    let mut cols: Mat3 = Default::default();
    for (j, p) in pts.iter().enumerate() {
        for r in 0..3 {
            cols[r][j] = p[r].clone();
        }
    }
    let pm = RealFrame::new(cols).ok()?;
    let points = [
        real_pt(pts[0].clone()),
        real_pt(pts[1].clone()),
        real_pt(pts[2].clone()),
    ];
    Some((k, points, pm.inverse()))
}

/// Certified genericity of a candidate relative to `curve` and the tangency data.
fn conic_generic(
    frame: &RealFrame,
    points: &[ProjectivePoint; 3],
    z1: &ProjectivePoint,
    l1: &PlanePoly,
    curve: Option<&PlanePoly>,
) -> bool {
    for p in points {
        if l1.eval_point(p).is_zero() {
            return false;
        }
        if let Some(f) = curve {
            if f.eval_point(p).is_zero() {
                return false;
            }
        }
    }
    let zi = frame.apply_point(z1);
    if zi.coords.iter().any(|c| c.is_zero()) {
        return false;
    }
    true
}

/// Images of the real points in the four patchwork charts, `(u, v)`,
/// `(1/v, 1/u)`, `(u, u/v)` and `(v/u, v)`, where `(u, v)` is the chart-0 image.
fn chart_images(uv: &[(f64, f64)]) -> [Vec<(f64, f64)>; 4] {
    [
        uv.to_vec(),
        uv.iter().map(|&(u, v)| (1.0 / v, 1.0 / u)).collect(),
        uv.iter().map(|&(u, v)| (u, u / v)).collect(),
        uv.iter().map(|&(u, v)| (v / u, v)).collect(),
    ]
}

/// Power-of-two exponents centering `log2|u|` and `log2|v|` at their medians.
fn centering_exponents(uv: &[(f64, f64)]) -> (i64, i64) {
    let med = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v.get(v.len() / 2).copied().unwrap_or(0.0)
    };
    let lx = med(uv.iter().map(|p| p.0.abs().log2()).collect());
    let ly = med(uv.iter().map(|p| p.1.abs().log2()).collect());
    (lx.round() as i64, ly.round() as i64)
}

/// Quality of a frame for the curve's real points: the worst relative separation
/// of their Cremona images over the four patchwork charts, after centering by
/// powers of two, damped by the log-distance of the image of `z1` from the
/// center. Returns the score and the centering exponents.
/// `f(A y)` with f64 coefficients.
fn compose_f64(f: &PlanePoly, a: &[[f64; 3]; 3]) -> BTreeMap<[u32; 3], C64> {
    type P = BTreeMap<[u32; 3], C64>;
    let mul = |x: &P, y: &P| {
        let mut r = P::new();
        for (m, c) in x {
            for (n, e) in y {
                *r.entry([m[0] + n[0], m[1] + n[1], m[2] + n[2]])
                    .or_default() += c * e;
            }
        }
        r
    };
    let d = f.degree() as usize;
    let mut pows: Vec<Vec<P>> = Vec::with_capacity(3);
    for row in a {
        let lin: P = (0..3)
            .map(|j| {
                let mut m = [0; 3];
                m[j] = 1;
                (m, C64::new(row[j], 0.0))
            })
            .collect();
        let mut p = vec![P::from([([0; 3], C64::new(1.0, 0.0))])];
        for e in 1..=d {
            let next = mul(&p[e - 1], &lin);
            p.push(next);
        }
        pows.push(p);
    }
    let mut out = P::new();
    for (m, c) in f.terms() {
        let (re, im) = c.to_c64();
        let t = mul(
            &mul(&pows[0][m.0[0] as usize], &pows[1][m.0[1] as usize]),
            &pows[2][m.0[2] as usize],
        );
        for (n, e) in t {
            *out.entry(n).or_default() += e * C64::new(re, im);
        }
    }
    out
}

fn monomial_mass<'a>(terms: impl Iterator<Item = ([u32; 3], C64)>, p: &[f64; 3]) -> f64 {
    terms
        .map(|(m, c)| {
            c.norm()
                * (0..3)
                    .map(|k| p[k].abs().powi(m[k] as i32))
                    .product::<f64>()
        })
        .sum()
}

/// Worst ratio over the real points between the monomial mass of `f` in the new
/// coordinates and in the old ones; cancellation in the Cremona image grows with it.
fn expansion_blowup(f: &PlanePoly, frame: &RealFrame, real_points: &[[f64; 3]]) -> f64 {
    let inv = frame.inverse();
    let mut a = [[0.0; 3]; 3];
    for k in 0..3 {
        for j in 0..3 {
            a[k][j] = ratio_to_f64(&inv.matrix[k][j]);
        }
    }
    let moved = compose_f64(f, &a);
    let orig: Vec<([u32; 3], C64)> = f
        .terms()
        .map(|(m, c)| {
            let (re, im) = c.to_c64();
            (m.0, C64::new(re, im))
        })
        .collect();
    real_points
        .iter()
        .map(|p| {
            let w = frame.apply_f64(*p);
            monomial_mass(moved.iter().map(|(m, c)| (*m, *c)), &w)
                / monomial_mass(orig.iter().cloned(), p)
        })
        .fold(1.0, f64::max)
}

pub fn conic_score(
    frame: &RealFrame,
    curve: &PlanePoly,
    real_points: &[[f64; 3]],
    z1: &ProjectivePoint,
) -> (f64, (i64, i64)) {
    let mut uv = Vec::with_capacity(real_points.len());
    for p in real_points {
        let w = frame.apply_f64(*p);
        if w.iter()
            .any(|c| c.abs() < 1e-12 * (w[0].abs() + w[1].abs() + w[2].abs()))
        {
            return (0.0, (0, 0));
        }
        uv.push((w[0] / w[1], w[0] / w[2]));
    }
    if uv.is_empty() {
        return (1.0, (0, 0));
    }
    let (ex, ey) = centering_exponents(&uv);
    let (sx, sy) = (2f64.powi(-ex as i32), 2f64.powi(-ey as i32));
    let uv: Vec<(f64, f64)> = uv.iter().map(|&(u, v)| (u * sx, v * sy)).collect();
    let score = chart_images(&uv)
        .iter()
        .map(|pts| crate::real_solve::spread_score(pts))
        .fold(f64::INFINITY, f64::min);
    // |u*|, |v*| of the Cremona image of z1 after centering
    let zc = linalg::apply3(&frame.to_gr(), &z1.coords);
    let n: Vec<f64> = zc
        .iter()
        .map(|c| {
            let (a, b) = c.to_c64();
            (a * a + b * b).sqrt().log2()
        })
        .collect();
    let (lu, lv) = (n[0] - n[1] - ex as f64, n[0] - n[2] - ey as f64);
    let off = lu.abs() + lv.abs() + (lu - lv).abs();
    let blowup = expansion_blowup(curve, frame, real_points);
    let score = score * (-off).exp2() / (blowup * blowup);
    (if score.is_finite() { score } else { 0.0 }, (ex, ey))
}

/// `diag(1, 2^ex, 2^ey) * frame`: scales the chart-0 Cremona image by `(2^-ex, 2^-ey)`.
fn centered_frame(frame: &RealFrame, (ex, ey): (i64, i64)) -> RealFrame {
    let mut m = frame.matrix.clone();
    let (a, b) = (
        crate::dyadic::Dyadic::pow2(ex).to_rational(),
        crate::dyadic::Dyadic::pow2(ey).to_rational(),
    );
    for j in 0..3 {
        m[1][j] = &m[1][j] * &a;
        m[2][j] = &m[2][j] * &b;
    }
    RealFrame::new(m).expect("diagonal scaling is invertible")
}

/// `diag(2^-e_k)` bringing the median size of each coordinate of `pts` near 1.
fn balancing_frame(pts: &[[f64; 3]]) -> RealFrame {
    let mut e = [0i64; 3];
    if !pts.is_empty() {
        for k in 0..3 {
            let mut l: Vec<f64> = pts
                .iter()
                .map(|p| {
                    (p[k].abs() / p.iter().fold(0.0f64, |a, c| a.max(c.abs())))
                        .max(1e-300)
                        .log2()
                })
                .collect();
            l.sort_by(|a, b| a.total_cmp(b));
            e[k] = l[l.len() / 2].round() as i64;
        }
    }
    let mut m = RealFrame::identity().matrix;
    for k in 0..3 {
        m[k][k] = crate::dyadic::Dyadic::pow2(e[0] - e[k]).to_rational();
    }
    RealFrame::new(m).expect("diagonal frame")
}

/// Seeded search for a real conic tangent to `l1` at `z1` and a frame sending three
/// of its rational points to the coordinate points. Without a curve the first
/// certified candidate is returned; with one, the best scoring of `trials`.
pub fn tangent_conic_frame_with(
    z1: &ProjectivePoint,
    l1: &PlanePoly,
    seed: u64,
    curve: Option<(&PlanePoly, &[[f64; 3]])>,
    trials: usize,
) -> Result<ConicChoice> {
    // candidates are drawn in coordinates where the real points have balanced size
    let norm = match curve {
        Some((_, pts)) => balancing_frame(pts),
        None => RealFrame::identity(),
    };
    let back = norm.inverse();
    let (ka, kb) = tangent_conic_pencil(&norm.apply_point(z1), &apply_frame(l1, &norm)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<ConicChoice> = None;
    let mut certified = 0;
    for tried in 1..=trials {
        let Some((k, points, frame)) = conic_candidate(&ka, &kb, &mut rng) else {
            continue;
        };
        let (k, points, frame) = (
            apply_frame(&k, &back)?,
            points.map(|p| back.apply_point(&p)),
            frame.after(&norm),
        );
        if !conic_generic(&frame, &points, z1, l1, curve.map(|c| c.0)) {
            continue;
        }
        certified += 1;
        let (score, frame) = match curve {
            Some(c) => {
                let (score, e) = conic_score(&frame, c.0, c.1, z1);
                (score, centered_frame(&frame, e))
            }
            None => (1.0, frame),
        };
        let better = best.as_ref().map(|b| score > b.score).unwrap_or(true);
        if better {
            best = Some(ConicChoice {
                conic: k,
                frame,
                points,
                score,
                tried,
                certified,
            });
        }
        if curve.is_none() {
            break;
        }
    }
    match best {
        Some(mut b) => {
            b.certified = certified;
            Ok(b)
        }
        None => Err(Error::SearchExhausted(format!(
            "no certified tangent conic among {trials} candidates"
        ))),
    }
}

pub fn tangent_conic_frame(
    z1: &ProjectivePoint,
    l1: &PlanePoly,
    seed: u64,
) -> Result<(PlanePoly, RealFrame)> {
    let c = tangent_conic_frame_with(z1, l1, seed, None, 400)?;
    Ok((c.conic, c.frame))
}

/// Square-coordinate normalization outcome.
#[derive(Clone, Debug)]
pub struct SquareNormalization {
    pub frame: RealFrame,
    pub poly: PlanePoly,
    /// `witness^2` is the normalized coordinate.
    pub witness: GR,
    pub coordinate: GR,
}

/// For `z = [0 : a : 1]` (after normalization at `x2`), translates `x1 -> x1 + c x2`
/// so that `a + c` is a square in Q(i). Identity when `a` is already a square.
pub fn normalize_square_coordinate(
    f: &PlanePoly,
    z: &ProjectivePoint,
) -> Result<SquareNormalization> {
    let zn = z
        .normalized_at(2)
        .ok_or_else(|| Error::Degenerate("point has x2 = 0".into()))?;
    if !zn.coords[0].is_zero() {
        return Err(Error::Degenerate("point must lie on x0 = 0".into()));
    }
    let a = zn.coords[1].clone();
    if a.is_real() {
        return Err(Error::Degenerate("coordinate is real".into()));
    }
    let (c, w) = match a.sqrt() {
        Some(s) => (BigRational::zero(), s),
        None => {
            let w = BigRational::one();
            let im = a.im().clone();
            let four = q(4);
            let c = &w * &w - &im * &im / (&four * &w * &w) - a.re();
            let s = GR::new(w.clone(), &im / (q(2) * &w));
            (c, s)
        }
    };
    let mut m = RealFrame::identity().matrix;
    m[1][2] = c.clone();
    let frame = RealFrame::new(m)?;
    let poly = apply_frame(f, &frame)?;
    let coordinate = &a + &GR::from_real(c);
    if &w * &w != coordinate {
        return Err(Error::Internal("square witness mismatch".into()));
    }
    Ok(SquareNormalization {
        frame,
        poly,
        witness: w,
        coordinate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PlanePoly {
        PlanePoly::parse(s).unwrap()
    }

    fn pt(s: &str) -> ProjectivePoint {
        crate::poly::parse_point(s).unwrap()
    }

    #[test]
    fn conj_pair_lines() {
        assert_eq!(line_through_conj_pair(&pt("[0 : i : 1]")).unwrap(), p("x0"));
        assert_eq!(line_through_conj_pair(&pt("[1 : i : 0]")).unwrap(), p("x2"));
        let z = pt("[1 : (1+1*i) : (2-1*i)]");
        let l = line_through_conj_pair(&z).unwrap();
        assert!(l.is_real());
        assert!(l.eval_point(&z).is_zero() && l.eval_point(&z.conj()).is_zero());
        assert!(line_through_conj_pair(&pt("[1 : 2 : 3]")).is_err());
    }

    #[test]
    fn squaring_and_cremona() {
        assert_eq!(
            squaring_pullback(&p("x1 - 3*x0")).unwrap(),
            p("x1^2 - 3*x0^2")
        );
        assert_eq!(
            cremona(&p("x0 + x1 + x2")).unwrap(),
            p("x1*x2 + x0*x2 + x0*x1")
        );
        assert_eq!(
            cremona(&p("x0*x1 + x1*x2 + x0*x2")).unwrap(),
            p("x0 + x1 + x2")
        );
        assert!(cremona(&p("x0*x1")).is_err());
    }

    #[test]
    fn frames() {
        let f = p("x0^2 + (2+1*i)*x1*x2 - x2^2");
        assert_eq!(apply_frame(&f, &RealFrame::identity()).unwrap(), f);
        let m = RealFrame::from_ints([[1, 2, 0], [0, 1, 3], [1, 0, 1]]).unwrap();
        let z = pt("[1 : 2 : (1+1*i)]");
        let fz = apply_frame(&f, &m).unwrap();
        assert_eq!(fz.eval_point(&m.apply_point(&z)), f.eval_point(&z));
        // line(z, conj z) sent to x0
        let z = pt("[1 : (1+1*i) : (2-1*i)]");
        let l = line_coeffs(&line_through_conj_pair(&z).unwrap());
        let mut rows = RealFrame::identity().matrix;
        for k in 0..3 {
            rows[0][k] = l[k].re().clone();
        }
        let fr = RealFrame::new(rows).unwrap();
        assert!(fr.apply_point(&z).coords[0].is_zero());
    }

    #[test]
    fn square_normalization() {
        let f = p("x0^3 + x1^3 + x2^3");
        let n = normalize_square_coordinate(&f, &pt("[0 : (2*i) : 1]")).unwrap();
        assert_eq!(n.frame, RealFrame::identity());
        assert_eq!(n.witness, GR::from_ints(1, 1));
        let n = normalize_square_coordinate(&f, &pt("[0 : (3+4*i) : 1]")).unwrap();
        assert_eq!(n.witness, GR::from_ints(2, 1));
        let n = normalize_square_coordinate(&f, &pt("[0 : (1+1*i) : 1]")).unwrap();
        assert_eq!(&n.witness * &n.witness, n.coordinate);
        assert!(n.coordinate.sqrt().is_some());
    }

    #[test]
    fn tangent_conic() {
        let z1 = pt("[0 : (1+1*i) : 1]");
        let l1 = p("x1 - (1+1*i)*x2");
        let (k, m) = tangent_conic_frame(&z1, &l1, 7).unwrap();
        assert!(k.is_real());
        assert!(k.eval_point(&z1).is_zero());
        // restriction to l1 has a double root: gradient proportional to l1
        let g: Vec<GR> = (0..3).map(|j| k.derivative(j).eval_point(&z1)).collect();
        let l = line_coeffs(&l1);
        let c = ProjectivePoint {
            coords: [g[0].clone(), g[1].clone(), g[2].clone()],
        }
        .cross(&ProjectivePoint { coords: l });
        assert!(c.iter().all(|v| v.is_zero()));
        let kk = apply_frame(&k, &m).unwrap();
        assert_eq!(cremona(&kk).unwrap().degree(), 1);
        let (k2, m2) = tangent_conic_frame(&z1, &l1, 7).unwrap();
        assert_eq!((k2, m2), (k, m));
    }
}
