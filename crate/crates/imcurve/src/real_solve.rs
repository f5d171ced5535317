//! Certified real points of imaginary plane curves.
//!
//! A real point of `f = g + i*h` is a common real zero of `g` and `h`. In the
//! chart `x0 = 1` both resultants `Res_y(g, h)` and `Res_x(g, h)` are isolated;
//! each pair of closed, pairwise disjoint root enclosures contains at most one
//! common zero, which is then confirmed or excluded with interval arithmetic
//! (Krawczyk) or exact computations. The line `x0 = 0` is handled exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dyadic::{DInterval, Dyadic, FInterval};
use crate::gaussian::GaussianRational as GR;
use crate::poly::{Chart, PlanePoly, ProjectivePoint};
use crate::resultant::resultant_int;
use crate::univariate::{isolate_real_roots, sturm_count_int, IntPoly, Isolation, RealRoot};
use crate::{Error, Result};

pub const DEFAULT_REFINE_BITS: i64 = 30;
const DECIDE_BUDGET: usize = 600;

/// Box in one of the standard affine charts. Chart `k` uses the coordinates
/// `(x_a/x_k, x_b/x_k)` with `a < b` the remaining indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingBox {
    pub chart: usize,
    pub x: (BigRational, BigRational),
    pub y: (BigRational, BigRational),
}

impl IsolatingBox {
    pub fn from_dyadic(chart: usize, x: &DInterval, y: &DInterval) -> Self {
        IsolatingBox {
            chart,
            x: x.to_rational_pair(),
            y: y.to_rational_pair(),
        }
    }

    pub fn center(&self) -> (BigRational, BigRational) {
        let two = BigRational::from_integer(2.into());
        (
            (&self.x.0 + &self.x.1) / &two,
            (&self.y.0 + &self.y.1) / two,
        )
    }

    pub fn center_f64(&self) -> (f64, f64) {
        let (a, b) = self.center();
        (
            crate::gaussian::ratio_to_f64(&a),
            crate::gaussian::ratio_to_f64(&b),
        )
    }

    pub fn width(&self) -> BigRational {
        let wx = &self.x.1 - &self.x.0;
        let wy = &self.y.1 - &self.y.0;
        if wx > wy {
            wx
        } else {
            wy
        }
    }

    pub fn is_point(&self) -> bool {
        self.x.0 == self.x.1 && self.y.0 == self.y.1
    }

    /// Center as a projective point.
    pub fn center_point(&self) -> ProjectivePoint {
        let (a, b) = self.center();
        let mut c = [GR::zero(), GR::zero(), GR::zero()];
        let rest: Vec<usize> = (0..3).filter(|&k| k != self.chart).collect();
        c[self.chart] = GR::one();
        c[rest[0]] = GR::from_real(a);
        c[rest[1]] = GR::from_real(b);
        ProjectivePoint::new(c).expect("chart point is nonzero")
    }

    /// Closed dyadic enclosure (outward at `bits`).
    pub fn to_dyadic(&self, bits: i64) -> (DInterval, DInterval) {
        (
            DInterval::outward(&self.x.0, &self.x.1, bits),
            DInterval::outward(&self.y.0, &self.y.1, bits),
        )
    }

    fn sort_key(&self) -> (usize, BigRational, BigRational) {
        (self.chart, self.x.0.clone(), self.y.0.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub count: usize,
    pub boxes: Vec<IsolatingBox>,
    pub cap: usize,
    pub maximal: bool,
}

impl Census {
    pub fn new(mut boxes: Vec<IsolatingBox>, cap: usize) -> Self {
        boxes.sort_by_key(|b| b.sort_key());
        let count = boxes.len();
        Census {
            count,
            boxes,
            cap,
            maximal: count == cap,
        }
    }
}

/// Census plus per-point transversality verdicts (aligned with `boxes`).
#[derive(Clone, Debug)]
pub struct CensusDetail {
    pub census: Census,
    pub transversal: Vec<bool>,
    pub candidates: usize,
}

/// Dense integer polynomial in two variables, `c[i][j]` the coefficient of `x^i y^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntBiPoly {
    pub c: Vec<Vec<BigInt>>,
}

impl IntBiPoly {
    /// Integer multiple of a real polynomial in two variables. `vars` picks the
    /// two variables playing x and y; any others must not occur.
    pub fn from_real(p: &PlanePoly, vars: (usize, usize)) -> Result<Self> {
        let ints = p.primitive_integer()?;
        let dx = p.degree_in(vars.0) as usize;
        let dy = p.degree_in(vars.1) as usize;
        let mut c = vec![vec![BigInt::zero(); dy + 1]; dx + 1];
        for (m, v) in ints {
            c[m.0[vars.0] as usize][m.0[vars.1] as usize] += v;
        }
        Ok(IntBiPoly { c })
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|r| r.iter().all(|v| v.is_zero()))
    }

    pub fn deg_x(&self) -> usize {
        self.c.len() - 1
    }

    pub fn deg_y(&self) -> usize {
        self.c[0].len() - 1
    }

    pub fn transpose(&self) -> IntBiPoly {
        let (nx, ny) = (self.c.len(), self.c[0].len());
        let mut c = vec![vec![BigInt::zero(); nx]; ny];
        for i in 0..nx {
            for j in 0..ny {
                c[j][i] = self.c[i][j].clone();
            }
        }
        IntBiPoly { c }
    }

    /// Coefficients of `y^j` as dense polynomials in `x`, trimmed to the actual y-degree.
    fn y_rows(&self) -> Vec<Vec<BigInt>> {
        let t = self.transpose();
        let mut rows = t.c;
        while rows.len() > 1 && rows.last().unwrap().iter().all(|v| v.is_zero()) {
            rows.pop();
        }
        rows
    }

    pub fn derivative_x(&self) -> IntBiPoly {
        let ny = self.c[0].len();
        if self.c.len() == 1 {
            return IntBiPoly {
                c: vec![vec![BigInt::zero(); ny]],
            };
        }
        let c = (1..self.c.len())
            .map(|i| self.c[i].iter().map(|v| v * BigInt::from(i)).collect())
            .collect();
        IntBiPoly { c }
    }

    pub fn derivative_y(&self) -> IntBiPoly {
        self.transpose().derivative_x().transpose()
    }

    pub fn mul(&self, o: &IntBiPoly) -> IntBiPoly {
        let nx = self.c.len() + o.c.len() - 1;
        let ny = self.c[0].len() + o.c[0].len() - 1;
        let mut c = vec![vec![BigInt::zero(); ny]; nx];
        for (i, r) in self.c.iter().enumerate() {
            for (j, a) in r.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, s) in o.c.iter().enumerate() {
                    for (l, b) in s.iter().enumerate() {
                        c[i + k][j + l] += a * b;
                    }
                }
            }
        }
        IntBiPoly { c }
    }

    pub fn sub(&self, o: &IntBiPoly) -> IntBiPoly {
        let nx = self.c.len().max(o.c.len());
        let ny = self.c[0].len().max(o.c[0].len());
        let mut c = vec![vec![BigInt::zero(); ny]; nx];
        for (i, r) in self.c.iter().enumerate() {
            for (j, a) in r.iter().enumerate() {
                c[i][j] += a;
            }
        }
        for (i, r) in o.c.iter().enumerate() {
            for (j, a) in r.iter().enumerate() {
                c[i][j] -= a;
            }
        }
        IntBiPoly { c }
    }

    pub fn eval_rational(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for r in self.c.iter().rev() {
            let mut inner = BigRational::zero();
            for a in r.iter().rev() {
                inner = inner * y + BigRational::from_integer(a.clone());
            }
            acc = acc * x + inner;
        }
        acc
    }

    pub fn eval_dyadic(&self, x: &Dyadic, y: &Dyadic) -> Dyadic {
        let mut acc = Dyadic::zero();
        for r in self.c.iter().rev() {
            let mut inner = Dyadic::zero();
            for a in r.iter().rev() {
                inner = &(&inner * y) + &Dyadic::from_bigint(a.clone());
            }
            acc = &(&acc * x) + &inner;
        }
        acc
    }

    /// `p(a, y)` scaled to an integer polynomial in `y`.
    pub fn subs_x(&self, a: &BigRational) -> IntPoly {
        let n = self.c.len() - 1;
        let (num, den) = (a.numer(), a.denom());
        let ny = self.c[0].len();
        let mut out = vec![BigInt::zero(); ny];
        for j in 0..ny {
            let mut acc = BigInt::zero();
            let mut dp = BigInt::one();
            for (idx, r) in self.c.iter().rev().enumerate() {
                if idx > 0 {
                    dp *= den;
                    acc = acc * num + &r[j] * &dp;
                } else {
                    acc = r[j].clone();
                }
            }
            let _ = n;
            out[j] = acc;
        }
        IntPoly::new(out)
    }

    pub fn finterval_coeffs(&self) -> Vec<Vec<FInterval>> {
        self.c
            .iter()
            .map(|r| r.iter().map(FInterval::from_bigint).collect())
            .collect()
    }

    /// Exact Taylor coefficients at `(mx, my)`: `T[a][b]` multiplies `u^a v^b`.
    pub fn taylor(&self, mx: &Dyadic, my: &Dyadic) -> Vec<Vec<Dyadic>> {
        let nx = self.c.len();
        let ny = self.c[0].len();
        let mut t: Vec<Vec<Dyadic>> = self
            .c
            .iter()
            .map(|r| r.iter().map(|v| Dyadic::from_bigint(v.clone())).collect())
            .collect();
        if !mx.is_zero() {
            for j in 0..ny {
                for i in 0..nx {
                    for k in (i..nx - 1).rev() {
                        let add = mx * &t[k + 1][j];
                        t[k][j] = &t[k][j] + &add;
                    }
                }
            }
        }
        if !my.is_zero() {
            for row in t.iter_mut() {
                for i in 0..ny {
                    for k in (i..ny - 1).rev() {
                        let add = my * &row[k + 1];
                        row[k] = &row[k] + &add;
                    }
                }
            }
        }
        t
    }
}

pub(crate) fn feval(c: &[Vec<FInterval>], x: FInterval, y: FInterval) -> FInterval {
    let mut acc = FInterval { lo: 0.0, hi: 0.0 };
    for r in c.iter().rev() {
        let mut inner = FInterval { lo: 0.0, hi: 0.0 };
        for a in r.iter().rev() {
            inner = inner.mul(y).add(*a);
        }
        acc = acc.mul(x).add(inner);
    }
    acc
}

/// The real system `g = h = 0` of `f` in one affine chart.
#[derive(Clone, Debug)]
pub struct RealSystem {
    pub chart: usize,
    pub g: IntBiPoly,
    pub h: IntBiPoly,
    gf: Vec<Vec<FInterval>>,
    hf: Vec<Vec<FInterval>>,
}

/// Outcome of one Krawczyk test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Krawczyk {
    /// A unique zero in the box, with a nonsingular Jacobian throughout.
    Unique,
    /// No zero in the box.
    Empty,
    Unknown,
}

/// Chart variables: chart `k` dehomogenizes at `x_k` and keeps the other two in order.
pub fn chart_vars(chart: usize) -> (usize, usize) {
    match chart {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Homogeneous form of `f` (affine input is homogenized at its degree, with
/// `x, y` becoming `x1/x0, x2/x0`).
pub fn projective_form(f: &PlanePoly) -> Result<PlanePoly> {
    match f.chart() {
        Chart::Projective => Ok(f.clone()),
        Chart::Affine => f.homogenize(f.degree()),
    }
}

impl RealSystem {
    pub fn new(f: &PlanePoly, chart: usize) -> Result<Self> {
        let f = projective_form(f)?;
        if !f.is_imaginary() {
            return Err(Error::NotImaginary(
                "real points are counted for imaginary curves only".into(),
            ));
        }
        let (g, h) = f.real_imag_split();
        let fixed = {
            let mut v: Vec<PlanePoly> = (0..3)
                .map(|k| PlanePoly::var(Chart::Projective, k))
                .collect();
            v[chart] = PlanePoly::constant(Chart::Projective, GR::one());
            v
        };
        let g = g.substitute(&fixed);
        let h = h.substitute(&fixed);
        let vars = chart_vars(chart);
        let g = IntBiPoly::from_real(&g, vars)?;
        let h = IntBiPoly::from_real(&h, vars)?;
        Ok(Self::from_parts(chart, g, h))
    }

    pub fn from_parts(chart: usize, g: IntBiPoly, h: IntBiPoly) -> Self {
        let gf = g.finterval_coeffs();
        let hf = h.finterval_coeffs();
        RealSystem {
            chart,
            g,
            h,
            gf,
            hf,
        }
    }

    /// Quick `f64` exclusion over a box.
    pub fn excludes(&self, x: &DInterval, y: &DInterval) -> bool {
        let fx = FInterval::from_dyadic(&x.lo, &x.hi);
        let fy = FInterval::from_dyadic(&y.lo, &y.hi);
        feval(&self.gf, fx, fy).excludes_zero() || feval(&self.hf, fx, fy).excludes_zero()
    }

    /// Krawczyk test on the box `x * y`, exact dyadic arithmetic with a Taylor-form enclosure.
    pub fn krawczyk(&self, x: &DInterval, y: &DInterval) -> Krawczyk {
        if self.excludes(x, y) {
            return Krawczyk::Empty;
        }
        let (mx, my) = (x.mid(), y.mid());
        let (rx, ry) = (x.rad(), y.rad());
        let tg = self.g.taylor(&mx, &my);
        let th = self.h.taylor(&mx, &my);
        let eg = Enclosure::new(&tg, &rx, &ry);
        let eh = Enclosure::new(&th, &rx, &ry);
        if eg.excludes_zero() || eh.excludes_zero() {
            return Krawczyk::Empty;
        }
        if rx.is_zero() || ry.is_zero() {
            return Krawczyk::Unknown;
        }
        let j = [
            [eg.dx.clone(), eg.dy.clone()],
            [eh.dx.clone(), eh.dy.clone()],
        ];
        let Some(yinv) = approx_inverse(&j) else {
            return Krawczyk::Unknown;
        };
        let fm = [eg.value.clone(), eh.value.clone()];
        let du = [
            DInterval::symmetric(rx.clone()),
            DInterval::symmetric(ry.clone()),
        ];
        let mut k = Vec::with_capacity(2);
        for r in 0..2 {
            // -(Y F(m))_r
            let c = -&(&(&yinv[r][0] * &fm[0]) + &(&yinv[r][1] * &fm[1]));
            let mut acc = DInterval::point(c);
            for col in 0..2 {
                // (I - Y J)_{r,col}
                let yj = j[0][col]
                    .scale(&yinv[r][0])
                    .add(&j[1][col].scale(&yinv[r][1]));
                let ident = if r == col {
                    Dyadic::one()
                } else {
                    Dyadic::zero()
                };
                let m = DInterval::point(ident).sub(&yj);
                acc = acc.add(&m.mul(&du[col]));
            }
            k.push(acc);
        }
        if k[0].inside(&du[0]) && k[1].inside(&du[1]) {
            Krawczyk::Unique
        } else if k[0].disjoint(&du[0]) || k[1].disjoint(&du[1]) {
            Krawczyk::Empty
        } else {
            Krawczyk::Unknown
        }
    }

    /// Exact Jacobian determinant `g_x h_y - g_y h_x` as a polynomial.
    pub fn jacobian(&self) -> IntBiPoly {
        let gx = self.g.derivative_x();
        let gy = self.g.derivative_y();
        let hx = self.h.derivative_x();
        let hy = self.h.derivative_y();
        gx.mul(&hy).sub(&gy.mul(&hx))
    }
}

/// Taylor-form enclosures of a polynomial and its gradient over `m + [-rx,rx] x [-ry,ry]`.
struct Enclosure {
    value: Dyadic,
    rest: Dyadic,
    dx: DInterval,
    dy: DInterval,
}

impl Enclosure {
    fn new(t: &[Vec<Dyadic>], rx: &Dyadic, ry: &Dyadic) -> Self {
        let nx = t.len();
        let ny = t[0].len();
        let mut px = vec![Dyadic::one()];
        for k in 1..nx {
            px.push(&px[k - 1] * rx);
        }
        let mut py = vec![Dyadic::one()];
        for k in 1..ny {
            py.push(&py[k - 1] * ry);
        }
        let mut rest = Dyadic::zero();
        let mut ex = Dyadic::zero();
        let mut ey = Dyadic::zero();
        for a in 0..nx {
            for b in 0..ny {
                let c = &t[a][b];
                if c.is_zero() || (a == 0 && b == 0) {
                    continue;
                }
                let c = c.abs();
                rest = &rest + &(&c * &(&px[a] * &py[b]));
                if a >= 1 && !(a == 1 && b == 0) {
                    let term = &(&c * &Dyadic::from_int(a as i64)) * &(&px[a - 1] * &py[b]);
                    ex = &ex + &term;
                }
                if b >= 1 && !(a == 0 && b == 1) {
                    let term = &(&c * &Dyadic::from_int(b as i64)) * &(&px[a] * &py[b - 1]);
                    ey = &ey + &term;
                }
            }
        }
        let t10 = if nx > 1 {
            t[1][0].clone()
        } else {
            Dyadic::zero()
        };
        let t01 = if ny > 1 {
            t[0][1].clone()
        } else {
            Dyadic::zero()
        };
        Enclosure {
            value: t[0][0].clone(),
            rest,
            dx: DInterval::new(&t10 - &ex, &t10 + &ex),
            dy: DInterval::new(&t01 - &ey, &t01 + &ey),
        }
    }

    fn excludes_zero(&self) -> bool {
        self.value.abs() > self.rest
    }
}

/// Approximate inverse of the midpoint matrix, rows scaled to keep `f64` in range.
fn approx_inverse(j: &[[DInterval; 2]; 2]) -> Option<[[Dyadic; 2]; 2]> {
    let mut scale = [0i64; 2];
    let mut m = [[0f64; 2]; 2];
    for r in 0..2 {
        let mids = [j[r][0].mid(), j[r][1].mid()];
        let e = mids.iter().filter_map(|d| d.magnitude()).max()?;
        scale[r] = e;
        for c in 0..2 {
            m[r][c] = mids[c].mul_pow2(-e).to_f64();
        }
    }
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if !det.is_finite() || det.abs() < 1e-300 {
        return None;
    }
    let inv = [
        [m[1][1] / det, -m[0][1] / det],
        [-m[1][0] / det, m[0][0] / det],
    ];
    let mut out = [
        [Dyadic::zero(), Dyadic::zero()],
        [Dyadic::zero(), Dyadic::zero()],
    ];
    for r in 0..2 {
        for c in 0..2 {
            if !inv[r][c].is_finite() {
                return None;
            }
            // Y = inv(S J) S with S = diag(2^-e)
            out[r][c] = Dyadic::from_f64(inv[r][c]).mul_pow2(-scale[c]);
        }
    }
    Some(out)
}

/// Real roots of a squarefree integer polynomial with closed, pairwise disjoint
/// dyadic enclosures.
#[derive(Clone, Debug)]
pub struct RootSet {
    iso: Isolation,
    bits: Vec<i64>,
}

impl RootSet {
    pub fn new(p: &IntPoly) -> Result<Self> {
        let iso = isolate_real_roots(p)?;
        let n = iso.roots.len();
        let mut rs = RootSet {
            iso,
            bits: vec![8; n],
        };
        rs.separate();
        Ok(rs)
    }

    pub fn len(&self) -> usize {
        self.iso.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iso.roots.is_empty()
    }

    pub fn exact(&self, k: usize) -> Option<BigRational> {
        match &self.iso.roots[k] {
            RealRoot::Exact(r) => Some(r.clone()),
            _ => None,
        }
    }

    pub fn enclosure(&self, k: usize) -> DInterval {
        match &self.iso.roots[k] {
            RealRoot::Exact(r) => DInterval::outward(r, r, self.bits[k]),
            RealRoot::Interval { lo, hi, .. } => DInterval::new(lo.clone(), hi.clone()),
        }
    }

    pub fn refine(&mut self, k: usize) {
        match &self.iso.roots[k] {
            RealRoot::Exact(_) => self.bits[k] += 4,
            RealRoot::Interval { .. } => self.iso.bisect(k),
        }
    }

    /// Refines root `k` until its enclosure is at most `2^-bits` wide.
    pub fn refine_to(&mut self, k: usize, bits: i64) {
        let w = Dyadic::pow2(-bits);
        while self.enclosure(k).width() > w {
            self.refine(k);
        }
    }

    fn separate(&mut self) {
        loop {
            let mut order: Vec<usize> = (0..self.len()).collect();
            order.sort_by(|&a, &b| self.enclosure(a).lo.cmp(&self.enclosure(b).lo));
            let mut clean = true;
            for w in order.windows(2) {
                let (a, b) = (self.enclosure(w[0]), self.enclosure(w[1]));
                if a.hi >= b.lo {
                    clean = false;
                    if a.width() >= b.width() {
                        self.refine(w[0]);
                    } else {
                        self.refine(w[1]);
                    }
                }
            }
            if clean {
                return;
            }
        }
    }
}

fn closed_count(p: &IntPoly, iv: &DInterval) -> Result<usize> {
    if p.degree() == 0 {
        return Ok(0);
    }
    let (lo, hi) = iv.to_rational_pair();
    let mut n = 0;
    if p.sign_at_rational(&lo) == 0 {
        n += 1;
    }
    if hi != lo {
        if p.sign_at_rational(&hi) == 0 {
            n += 1;
        }
        n += sturm_count_int(p, &Some(lo), &Some(hi))?;
    }
    Ok(n)
}

fn gcd_or(a: &IntPoly, b: &IntPoly) -> IntPoly {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => IntPoly::new(vec![]),
        (true, false) => b.primitive(),
        (false, true) => a.primitive(),
        _ => a.gcd(b),
    }
}

/// Decision for one candidate pair of root enclosures.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Verdict {
    Point { transversal: bool },
    Empty,
}

/// Exact check with one coordinate known exactly. `swap` means `y` is the exact one.
fn decide_mixed(
    sys: &RealSystem,
    a: &BigRational,
    other: &DInterval,
    swap: bool,
) -> Result<Verdict> {
    let (g, h) = if swap {
        (sys.g.transpose(), sys.h.transpose())
    } else {
        (sys.g.clone(), sys.h.clone())
    };
    let gy = gcd_or(&g.subs_x(a), &h.subs_x(a));
    if gy.is_zero() {
        return Err(Error::PositiveDimensional(
            "a real line component through a candidate point".into(),
        ));
    }
    if closed_count(&gy, other)? == 0 {
        return Ok(Verdict::Empty);
    }
    let mut jac = sys.jacobian();
    if swap {
        jac = jac.transpose();
    }
    let d = jac.subs_x(a);
    let common = gcd_or(&gy, &d);
    let singular = !common.is_zero() && closed_count(&common, other)? > 0 || d.is_zero();
    Ok(Verdict::Point {
        transversal: !singular,
    })
}

fn decide(
    sys: &RealSystem,
    xs: &mut RootSet,
    i: usize,
    ys: &mut RootSet,
    j: usize,
) -> Result<Verdict> {
    for _ in 0..DECIDE_BUDGET {
        let (x, y) = (xs.enclosure(i), ys.enclosure(j));
        if sys.excludes(&x, &y) {
            return Ok(Verdict::Empty);
        }
        match (xs.exact(i), ys.exact(j)) {
            (Some(a), Some(b)) => {
                let zero =
                    sys.g.eval_rational(&a, &b).is_zero() && sys.h.eval_rational(&a, &b).is_zero();
                if !zero {
                    return Ok(Verdict::Empty);
                }
                let det = sys.jacobian().eval_rational(&a, &b);
                return Ok(Verdict::Point {
                    transversal: !det.is_zero(),
                });
            }
            (Some(a), None) => return decide_mixed(sys, &a, &y, false),
            (None, Some(b)) => return decide_mixed(sys, &b, &x, true),
            (None, None) => match sys.krawczyk(&x, &y) {
                Krawczyk::Unique => return Ok(Verdict::Point { transversal: true }),
                Krawczyk::Empty => return Ok(Verdict::Empty),
                Krawczyk::Unknown => {}
            },
        }
        // Refine the relatively wider side.
        let wx = x.width();
        let wy = y.width();
        if wx >= wy {
            xs.refine(i);
        } else {
            ys.refine(j);
        }
    }
    Err(Error::Indeterminate(format!(
        "candidate ({i}, {j}) undecided after {DECIDE_BUDGET} refinements"
    )))
}

/// Real points of an imaginary curve in the three charts, with early exit at the Bezout cap.
pub fn real_points_detailed(f: &PlanePoly, refine_bits: i64) -> Result<CensusDetail> {
    let ff = projective_form(f)?;
    let d = ff.degree() as usize;
    let cap = d * d;
    let sys = RealSystem::new(&ff, 0)?;
    let mut boxes = Vec::new();
    let mut transversal = Vec::new();
    let mut candidates = 0;

    // Line x0 = 0 first: exact.
    let (g, h) = ff.real_imag_split();
    let at_inf = |p: &PlanePoly, x1: i64| -> Result<IntPoly> {
        let vals = [
            PlanePoly::zero(Chart::Projective),
            PlanePoly::constant(Chart::Projective, GR::from_int(x1)),
            PlanePoly::var(Chart::Projective, 2),
        ];
        let s = p.substitute(&vals);
        if s.is_zero() {
            return Ok(IntPoly::new(vec![]));
        }
        let ints = s.primitive_integer()?;
        let mut c = vec![BigInt::zero(); d + 1];
        for (m, v) in ints {
            c[m.0[2] as usize] += v;
        }
        Ok(IntPoly::new(c))
    };
    let gi = at_inf(&g, 1)?;
    let hi = at_inf(&h, 1)?;
    if gi.is_zero() && hi.is_zero() {
        return Err(Error::PositiveDimensional(
            "the line x0 = 0 is a common real component".into(),
        ));
    }
    let common = gcd_or(&gi, &hi);
    if common.degree() >= 1 {
        let sys1 = RealSystem::new(&ff, 1)?;
        let mut rs = RootSet::new(&common)?;
        for k in 0..rs.len() {
            rs.refine_to(k, refine_bits);
            let y = rs.enclosure(k);
            let zero = DInterval::point(Dyadic::zero());
            let t = match rs.exact(k) {
                Some(b) => {
                    let det = sys1.jacobian().eval_rational(&BigRational::zero(), &b);
                    !det.is_zero()
                }
                None => {
                    decide_mixed(&sys1, &BigRational::zero(), &y, false)?
                        == Verdict::Point { transversal: true }
                }
            };
            let b = match rs.exact(k) {
                Some(r) => IsolatingBox {
                    chart: 1,
                    x: (BigRational::zero(), BigRational::zero()),
                    y: (r.clone(), r),
                },
                None => IsolatingBox::from_dyadic(1, &zero, &y),
            };
            boxes.push(b);
            transversal.push(t);
        }
    }
    let corner = ProjectivePoint::from_ints([(0, 0), (0, 0), (1, 0)])?;
    if ff.eval_point(&corner).is_zero() {
        let sys2 = RealSystem::new(&ff, 2)?;
        let det = sys2
            .jacobian()
            .eval_rational(&BigRational::zero(), &BigRational::zero());
        let z = (BigRational::zero(), BigRational::zero());
        boxes.push(IsolatingBox {
            chart: 2,
            x: z.clone(),
            y: z,
        });
        transversal.push(!det.is_zero());
    }

    // Affine chart.
    let (ry, rx) = rayon::join(
        || resultant_int(&sys.g.y_rows(), &sys.h.y_rows()),
        || resultant_int(&sys.g.transpose().y_rows(), &sys.h.transpose().y_rows()),
    );
    let (ry, rx) = (IntPoly::new(ry), IntPoly::new(rx));
    let only_x = sys.g.deg_y() == 0 && sys.h.deg_y() == 0;
    let only_y = sys.g.deg_x() == 0 && sys.h.deg_x() == 0;
    let xpoly = if only_x {
        gcd_or(&rowpoly(&sys.g, false), &rowpoly(&sys.h, false))
    } else {
        ry
    };
    let ypoly = if only_y {
        gcd_or(&rowpoly(&sys.g, true), &rowpoly(&sys.h, true))
    } else {
        rx
    };
    if xpoly.is_zero() || ypoly.is_zero() {
        return Err(Error::PositiveDimensional(
            "resultant vanishes identically: g and h share a component".into(),
        ));
    }
    // A system free of one variable: every value of that variable pairs with the other's roots.
    if only_x || only_y {
        return Err(Error::PositiveDimensional(
            "real part and imaginary part depend on one variable only".into(),
        ));
    }
    if xpoly.degree() >= 1 && ypoly.degree() >= 1 {
        let mut xs = RootSet::new(&xpoly)?;
        let mut ys = RootSet::new(&ypoly)?;
        'outer: for i in 0..xs.len() {
            for j in 0..ys.len() {
                if boxes.len() >= cap {
                    break 'outer;
                }
                candidates += 1;
                if let Verdict::Point { transversal: t } = decide(&sys, &mut xs, i, &mut ys, j)? {
                    xs.refine_to(i, refine_bits);
                    ys.refine_to(j, refine_bits);
                    let b = match (xs.exact(i), ys.exact(j)) {
                        (Some(a), Some(b)) => IsolatingBox {
                            chart: 0,
                            x: (a.clone(), a),
                            y: (b.clone(), b),
                        },
                        (Some(a), None) => IsolatingBox {
                            chart: 0,
                            x: (a.clone(), a),
                            y: ys.enclosure(j).to_rational_pair(),
                        },
                        (None, Some(b)) => IsolatingBox {
                            chart: 0,
                            x: xs.enclosure(i).to_rational_pair(),
                            y: (b.clone(), b),
                        },
                        (None, None) => {
                            IsolatingBox::from_dyadic(0, &xs.enclosure(i), &ys.enclosure(j))
                        }
                    };
                    boxes.push(b);
                    transversal.push(t);
                }
            }
        }
    }
    if boxes.len() > cap {
        return Err(Error::Internal(format!(
            "census {} exceeds the Bezout cap {cap}",
            boxes.len()
        )));
    }
    let mut pairs: Vec<(IsolatingBox, bool)> = boxes.into_iter().zip(transversal).collect();
    pairs.sort_by_key(|(b, _)| b.sort_key());
    let (boxes, transversal): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    Ok(CensusDetail {
        census: Census::new(boxes, cap),
        transversal,
        candidates,
    })
}

fn rowpoly(p: &IntBiPoly, ycol: bool) -> IntPoly {
    if ycol {
        IntPoly::new(p.c[0].clone())
    } else {
        IntPoly::new(p.c.iter().map(|r| r[0].clone()).collect())
    }
}

/// Certified census of the real points of an imaginary curve.
pub fn real_points(f: &PlanePoly, refine_bits: i64) -> Result<Census> {
    Ok(real_points_detailed(f, refine_bits)?.census)
}

/// Whether the real Jacobian of `(g, h)` is nonsingular at the point isolated by `b`.
pub fn transversal_at(f: &PlanePoly, b: &IsolatingBox) -> Result<bool> {
    let sys = RealSystem::new(f, b.chart)?;
    let xp = b.x.0 == b.x.1;
    let yp = b.y.0 == b.y.1;
    if xp && yp {
        let (x, y) = (&b.x.0, &b.y.0);
        if !(sys.g.eval_rational(x, y).is_zero() && sys.h.eval_rational(x, y).is_zero()) {
            return Err(Error::NotOnCurve("box point is not a real point".into()));
        }
        return Ok(!sys.jacobian().eval_rational(x, y).is_zero());
    }
    if xp || yp {
        let (a, other, swap) = if xp {
            (&b.x.0, &b.y, false)
        } else {
            (&b.y.0, &b.x, true)
        };
        let iv = DInterval::outward(&other.0, &other.1, 0);
        // Use the exact rational interval where possible.
        let iv = if Dyadic::floor_rational(&other.0, 200).to_rational() == other.0
            && Dyadic::ceil_rational(&other.1, 200).to_rational() == other.1
        {
            DInterval::outward(&other.0, &other.1, 200)
        } else {
            iv
        };
        return match decide_mixed(&sys, a, &iv, swap)? {
            Verdict::Point { transversal } => Ok(transversal),
            Verdict::Empty => Err(Error::NotOnCurve("box contains no real point".into())),
        };
    }
    // Interval box: contract with Krawczyk.
    let (mut x, mut y) = b.to_dyadic(256);
    for _ in 0..DECIDE_BUDGET {
        match sys.krawczyk(&x, &y) {
            Krawczyk::Unique => return Ok(true),
            Krawczyk::Empty => return Err(Error::NotOnCurve("box contains no real point".into())),
            Krawczyk::Unknown => {}
        }
        // Bisect and keep the halves that are not excluded.
        let split_x = x.width() >= y.width();
        let (a, c) = if split_x { halves(&x) } else { halves(&y) };
        let keep: Vec<DInterval> = [a, c]
            .into_iter()
            .filter(|h| {
                if split_x {
                    !sys.excludes(h, &y)
                } else {
                    !sys.excludes(&x, h)
                }
            })
            .collect();
        if keep.len() != 1 {
            break;
        }
        if split_x {
            x = keep[0].clone();
        } else {
            y = keep[0].clone();
        }
    }
    Err(Error::Indeterminate(
        "transversality undecided at the refinement limit".into(),
    ))
}

fn halves(iv: &DInterval) -> (DInterval, DInterval) {
    let m = iv.mid();
    (
        DInterval::new(iv.lo.clone(), m.clone()),
        DInterval::new(m, iv.hi.clone()),
    )
}

/// Certifies predicted chart-0 boxes: each must contain a unique real point
/// (Krawczyk), and the boxes must be pairwise disjoint. Returns the certified
/// boxes. When their number reaches the Bezout cap they are the full census.
pub fn certify_boxes(f: &PlanePoly, boxes: &[(DInterval, DInterval)]) -> Result<Vec<IsolatingBox>> {
    use rayon::prelude::*;
    let sys = RealSystem::new(f, 0)?;
    let results: Vec<Krawczyk> = boxes.par_iter().map(|(x, y)| sys.krawczyk(x, y)).collect();
    for (k, r) in results.iter().enumerate() {
        if *r != Krawczyk::Unique {
            return Err(Error::Indeterminate(format!(
                "predicted box {k} not certified ({r:?})"
            )));
        }
    }
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by(|&a, &b| boxes[a].0.lo.cmp(&boxes[b].0.lo));
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            let (p, q) = (&boxes[order[a]], &boxes[order[b]]);
            if q.0.lo > p.0.hi {
                break;
            }
            if !p.0.disjoint(&q.0) && !p.1.disjoint(&q.1) {
                return Err(Error::Certificate(format!(
                    "predicted boxes {} and {} overlap",
                    order[a], order[b]
                )));
            }
        }
    }
    Ok(boxes
        .iter()
        .map(|(x, y)| IsolatingBox::from_dyadic(0, x, y))
        .collect())
}

/// Re-validates stored boxes: each must certify (by Krawczyk, or exactly for
/// degenerate boxes) and boxes must be pairwise disjoint in their charts.
pub fn revalidate_boxes(f: &PlanePoly, boxes: &[IsolatingBox]) -> Result<()> {
    for b in boxes {
        if b.is_point() || b.x.0 == b.x.1 || b.y.0 == b.y.1 {
            transversal_at(f, b).or_else(|e| match e {
                Error::Indeterminate(_) => Ok(false),
                e => Err(e),
            })?;
            continue;
        }
        let sys = RealSystem::new(f, b.chart)?;
        let dy = |r: &BigRational| Dyadic::from_rational(r);
        let (Some(x0), Some(x1), Some(y0), Some(y1)) =
            (dy(&b.x.0), dy(&b.x.1), dy(&b.y.0), dy(&b.y.1))
        else {
            return Err(Error::Certificate("box endpoints are not dyadic".into()));
        };
        let (x, y) = (DInterval::new(x0, x1), DInterval::new(y0, y1));
        if sys.krawczyk(&x, &y) != Krawczyk::Unique {
            return Err(Error::Certificate(format!(
                "box in chart {} not certified",
                b.chart
            )));
        }
    }
    for (k, a) in boxes.iter().enumerate() {
        for b in &boxes[k + 1..] {
            if a.chart == b.chart
                && a.x.0 <= b.x.1
                && b.x.0 <= a.x.1
                && a.y.0 <= b.y.1
                && b.y.0 <= a.y.1
            {
                return Err(Error::Certificate("census boxes overlap".into()));
            }
        }
    }
    Ok(())
}

/// Converts a projective point with real coordinates to its chart box if it
/// has rational coordinates in the first chart where it is finite.
pub fn point_box(p: &ProjectivePoint) -> Option<IsolatingBox> {
    if !p.is_real() {
        return None;
    }
    let k = (0..3).find(|&k| !p.coords[k].is_zero())?;
    let q = p.normalized_at(k)?;
    let (a, b) = chart_vars(k);
    let x = q.coords[a].re().clone();
    let y = q.coords[b].re().clone();
    Some(IsolatingBox {
        chart: k,
        x: (x.clone(), x),
        y: (y.clone(), y),
    })
}

fn poly_mod_eval(c: &[Vec<BigInt>], p: u64, x: Option<u64>, y: Option<u64>) -> Vec<u64> {
    use crate::modular::{add_mod, mul_mod, reduce};
    // Exactly one of x, y is given; returns the univariate residue in the other variable.
    match (x, y) {
        (Some(r), None) => {
            let dy = c.iter().map(|row| row.len()).max().unwrap_or(0);
            let mut out = vec![0u64; dy];
            let mut pw = 1u64;
            for row in c {
                for (j, v) in row.iter().enumerate() {
                    out[j] = add_mod(out[j], mul_mod(reduce(v, p), pw, p), p);
                }
                pw = mul_mod(pw, r, p);
            }
            out
        }
        (None, Some(s)) => {
            let mut out = vec![0u64; c.len()];
            for (i, row) in c.iter().enumerate() {
                let mut pw = 1u64;
                for v in row {
                    out[i] = add_mod(out[i], mul_mod(reduce(v, p), pw, p), p);
                    pw = mul_mod(pw, s, p);
                }
            }
            out
        }
        _ => unreachable!(),
    }
}

fn trim_mod(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn gcd_degree_mod(a: Vec<u64>, b: Vec<u64>, p: u64) -> usize {
    use crate::modular::{inv_mod, mul_mod, sub_mod};
    let (mut a, mut b) = (trim_mod(a), trim_mod(b));
    while !b.is_empty() {
        let inv = inv_mod(*b.last().unwrap(), p);
        while a.len() >= b.len() && !a.is_empty() {
            let f = mul_mod(*a.last().unwrap(), inv, p);
            let off = a.len() - b.len();
            for (k, v) in b.iter().enumerate() {
                a[off + k] = sub_mod(a[off + k], mul_mod(f, *v, p), p);
            }
            a = trim_mod(a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// Certifies that the real and imaginary parts of `f` have no common factor, so
/// that Bezout bounds the number of their common zeros by `deg(f)^2`.
///
/// Specializing one variable modulo a prime at a value where the leading
/// coefficient in the other variable survives preserves the degree of any common
/// factor, so trivial modular gcds in both directions exclude common factors.
pub fn real_parts_coprime(f: &PlanePoly) -> Result<bool> {
    let f = projective_form(f)?;
    if !f.terms().any(|(m, _)| m.0[0] == 0) {
        return Ok(false);
    }
    let sys = RealSystem::new(&f, 0)?;
    let (g, h) = (&sys.g.c, &sys.h.c);
    let (gt, ht) = (sys.g.transpose().c, sys.h.transpose().c);
    let lead_ok = |c: &[Vec<BigInt>], p: u64, r: u64| {
        // leading coefficient in the second variable, evaluated at the first
        let d = c.iter().map(|row| row.len()).max().unwrap_or(0);
        if d == 0 {
            return true;
        }
        let col: Vec<Vec<BigInt>> = c
            .iter()
            .map(|row| vec![row.get(d - 1).cloned().unwrap_or_default()])
            .collect();
        poly_mod_eval(&col, p, Some(r), None)
            .first()
            .map(|v| *v != 0)
            .unwrap_or(false)
    };
    let mut y_ok = false;
    let mut x_ok = false;
    for (k, (p, _)) in crate::modular::PrimeStream::new().take(8).enumerate() {
        let r = 3 + 7 * k as u64;
        if !y_ok && lead_ok(g, p, r) && lead_ok(h, p, r) {
            y_ok = gcd_degree_mod(
                poly_mod_eval(g, p, Some(r), None),
                poly_mod_eval(h, p, Some(r), None),
                p,
            ) == 0;
        }
        if !x_ok && lead_ok(&gt, p, r) && lead_ok(&ht, p, r) {
            x_ok = gcd_degree_mod(
                poly_mod_eval(g, p, None, Some(r)),
                poly_mod_eval(h, p, None, Some(r)),
                p,
            ) == 0;
        }
        if x_ok && y_ok {
            return Ok(true);
        }
    }
    Ok(false)
}

pub(crate) type F64Terms = Vec<(u32, u32, f64, f64)>;

/// Affine chart-0 terms of `f` as `(i, j, re, im)`.
pub(crate) fn f64_terms(f: &PlanePoly) -> F64Terms {
    let a = match f.chart() {
        Chart::Affine => f.clone(),
        Chart::Projective => f.dehomogenize(0).expect("projective"),
    };
    a.terms()
        .map(|(m, c)| {
            (
                m.0[0],
                m.0[1],
                crate::gaussian::ratio_to_f64(c.re()),
                crate::gaussian::ratio_to_f64(c.im()),
            )
        })
        .collect()
}

/// f64 Newton on the real system `(Re f, Im f)`.
pub(crate) fn newton_real(
    f: &[(u32, u32, f64, f64)],
    mut x: f64,
    mut y: f64,
) -> Option<(f64, f64)> {
    let eval = |x: f64, y: f64| {
        let mut v = [0.0; 6];
        for &(i, j, re, im) in f {
            let (ii, jj) = (i as i32, j as i32);
            let m = x.powi(ii) * y.powi(jj);
            let mx = if i > 0 {
                i as f64 * x.powi(ii - 1) * y.powi(jj)
            } else {
                0.0
            };
            let my = if j > 0 {
                j as f64 * x.powi(ii) * y.powi(jj - 1)
            } else {
                0.0
            };
            v[0] += re * m;
            v[1] += im * m;
            v[2] += re * mx;
            v[3] += re * my;
            v[4] += im * mx;
            v[5] += im * my;
        }
        v
    };
    for _ in 0..60 {
        let v = eval(x, y);
        let det = v[2] * v[5] - v[3] * v[4];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dx = (v[0] * v[5] - v[3] * v[1]) / det;
        let dy = (v[2] * v[1] - v[0] * v[4]) / det;
        x -= dx;
        y -= dy;
        if dx.abs() + dy.abs() <= 1e-15 * (1.0 + x.abs() + y.abs()) {
            return Some((x, y));
        }
    }
    Some((x, y)).filter(|(a, b)| a.is_finite() && b.is_finite())
}

/// Newton iteration on `(g, h)` in exact arithmetic, rounded to `bits` fractional
/// bits after each step.
pub fn newton_refine(sys: &RealSystem, x: f64, y: f64, bits: i64) -> Option<(Dyadic, Dyadic)> {
    if !x.is_finite() || !y.is_finite() {
        return None;
    }
    let (gx, gy) = (sys.g.derivative_x(), sys.g.derivative_y());
    let (hx, hy) = (sys.h.derivative_x(), sys.h.derivative_y());
    let mut cx = Dyadic::from_f64(x);
    let mut cy = Dyadic::from_f64(y);
    let tol = BigRational::new(BigInt::one(), BigInt::one() << (bits.max(1) as usize));
    for _ in 0..12 {
        let (g, h) = (sys.g.eval_dyadic(&cx, &cy), sys.h.eval_dyadic(&cx, &cy));
        let j = [
            gx.eval_dyadic(&cx, &cy),
            gy.eval_dyadic(&cx, &cy),
            hx.eval_dyadic(&cx, &cy),
            hy.eval_dyadic(&cx, &cy),
        ];
        let det = (&(&j[0] * &j[3]) - &(&j[1] * &j[2])).to_rational();
        if det.is_zero() {
            return None;
        }
        let dx = (&(&g * &j[3]) - &(&j[1] * &h)).to_rational() / &det;
        let dy = (&(&j[0] * &h) - &(&g * &j[2])).to_rational() / &det;
        cx = Dyadic::floor_rational(&(cx.to_rational() - &dx), bits);
        cy = Dyadic::floor_rational(&(cy.to_rational() - &dy), bits);
        if dx.abs() < tol && dy.abs() < tol {
            break;
        }
    }
    Some((cx, cy))
}

/// Krawczyk-certified box near a predicted point: f64 Newton, exact refinement,
/// then shrinking radii starting below `sep / 8`.
pub(crate) fn certify_near(
    sys: &RealSystem,
    terms: &F64Terms,
    x: f64,
    y: f64,
    sep: f64,
) -> Option<(DInterval, DInterval)> {
    let (nx, ny) = match newton_real(terms, x, y) {
        Some((a, b)) if (a - x).abs().max((b - y).abs()) < sep / 4.0 => (a, b),
        _ => (x, y),
    };
    let (cx, cy) = newton_refine(sys, nx, ny, 200)?;
    if (cx.to_f64() - x).abs().max((cy.to_f64() - y).abs()) >= sep / 2.0 {
        return None;
    }
    let scale = 1.0 + nx.abs().max(ny.abs());
    let r = (scale * 2f64.powi(-30)).min(sep / 8.0);
    let mut e = r.log2().floor() as i64;
    for _ in 0..6 {
        let rad = Dyadic::pow2(e);
        let bx = DInterval::new(&cx - &rad, &cx + &rad);
        let by = DInterval::new(&cy - &rad, &cy + &rad);
        if sys.krawczyk(&bx, &by) == Krawczyk::Unique {
            return Some((bx, by));
        }
        e -= 16;
    }
    None
}

/// Minimal sup-distance from each prediction to the others.
pub fn separations(preds: &[(f64, f64)]) -> Vec<f64> {
    let mut sep = vec![f64::INFINITY; preds.len()];
    let mut order: Vec<usize> = (0..preds.len()).collect();
    order.sort_by(|&a, &b| preds[a].0.total_cmp(&preds[b].0));
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            let (p, q) = (preds[order[a]], preds[order[b]]);
            let dx = (q.0 - p.0).abs();
            if dx > sep[order[a]] {
                break;
            }
            let dd = dx.max((p.1 - q.1).abs());
            sep[order[a]] = sep[order[a]].min(dd);
            sep[order[b]] = sep[order[b]].min(dd);
        }
    }
    sep
}

/// Minimal separation of the points relative to their extent.
pub fn spread_score(pts: &[(f64, f64)]) -> f64 {
    let sep = separations(pts).into_iter().fold(f64::INFINITY, f64::min);
    let ext = pts
        .iter()
        .fold(0.0f64, |m, p| m.max(p.0.abs()).max(p.1.abs()));
    if !sep.is_finite() {
        return 1.0 / (1.0 + ext);
    }
    sep / (1.0 + ext)
}

/// Certified boxes around predicted chart-0 points. Predictions that fail are
/// reported by index.
pub fn certify_predictions(
    f: &PlanePoly,
    preds: &[(f64, f64)],
) -> Result<(Vec<IsolatingBox>, Vec<usize>)> {
    use rayon::prelude::*;
    let sys = RealSystem::new(f, 0)?;
    let terms = f64_terms(f);
    let sep = separations(preds);
    let res: Vec<Option<IsolatingBox>> = preds
        .par_iter()
        .enumerate()
        .map(|(k, &(x, y))| {
            certify_near(&sys, &terms, x, y, sep[k])
                .map(|(bx, by)| IsolatingBox::from_dyadic(0, &bx, &by))
        })
        .collect();
    let failed: Vec<usize> = res
        .iter()
        .enumerate()
        .filter(|(_, b)| b.is_none())
        .map(|(k, _)| k)
        .collect();
    let boxes: Vec<IsolatingBox> = res.into_iter().flatten().collect();
    Ok((boxes, failed))
}

/// Like [`certify_predictions`], but stops at the first prediction that fails.
pub fn certify_all_predictions(
    f: &PlanePoly,
    preds: &[(f64, f64)],
) -> Result<std::result::Result<Vec<IsolatingBox>, usize>> {
    let sys = RealSystem::new(f, 0)?;
    let terms = f64_terms(f);
    let sep = separations(preds);
    let mut boxes = Vec::with_capacity(preds.len());
    for (k, &(x, y)) in preds.iter().enumerate() {
        match certify_near(&sys, &terms, x, y, sep[k]) {
            Some((bx, by)) => boxes.push(IsolatingBox::from_dyadic(0, &bx, &by)),
            None => return Ok(Err(k)),
        }
    }
    Ok(Ok(boxes))
}

/// Whether two boxes of the same chart intersect.
pub fn boxes_meet(a: &IsolatingBox, b: &IsolatingBox) -> bool {
    a.chart == b.chart && a.x.0 <= b.x.1 && b.x.0 <= a.x.1 && a.y.0 <= b.y.1 && b.y.0 <= a.y.1
}

/// Indices of some pair of intersecting boxes, if any.
pub fn first_overlap(boxes: &[IsolatingBox]) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by(|&a, &b| (boxes[a].chart, &boxes[a].x.0).cmp(&(boxes[b].chart, &boxes[b].x.0)));
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            let (p, q) = (&boxes[order[a]], &boxes[order[b]]);
            if q.chart != p.chart || q.x.0 > p.x.1 {
                break;
            }
            if boxes_meet(p, q) {
                return Some((order[a], order[b]));
            }
        }
    }
    None
}

/// Census assembled from certified boxes and exact real points, closed by Bezout.
#[derive(Clone, Debug)]
pub struct PredictedCensus {
    pub census: Census,
    pub transversal: Vec<bool>,
    /// Lower bound for the total real intersection multiplicity of `Re f` and `Im f`.
    pub bound: usize,
    pub coprime: bool,
    /// All real points are found: the bound reaches `deg(f)^2` and the parts are coprime.
    pub complete: bool,
    pub failed: Vec<usize>,
}

/// Lower bound `mult(Re f) * mult(Im f)` for the intersection multiplicity at an exact real point.
pub fn exact_point_weight(f: &PlanePoly, p: &ProjectivePoint) -> Result<usize> {
    let f = projective_form(f)?;
    if !p.is_real() || !f.eval_point(p).is_zero() {
        return Err(Error::NotOnCurve(format!("{p}")));
    }
    let (g, h) = f.real_imag_split();
    let mg = crate::local::multiplicity_at(&g, p)?;
    let mh = crate::local::multiplicity_at(&h, p)?;
    Ok((mg * mh) as usize)
}

pub fn census_from_predictions(
    f: &PlanePoly,
    preds: &[(f64, f64)],
    exact: &[ProjectivePoint],
) -> Result<PredictedCensus> {
    let f = projective_form(f)?;
    let d = f.degree() as usize;
    let cap = d * d;
    let (mut boxes, failed) = certify_predictions(&f, preds)?;
    if let Some((a, b)) = first_overlap(&boxes) {
        return Err(Error::Certificate(format!(
            "certified boxes {a} and {b} overlap"
        )));
    }
    let mut transversal = vec![true; boxes.len()];
    let mut bound = boxes.len();
    for p in exact {
        let pb = point_box(p)
            .ok_or_else(|| Error::Degenerate(format!("exact point {p} is not real")))?;
        if boxes.iter().any(|b| boxes_meet(b, &pb)) {
            return Err(Error::Certificate(format!(
                "exact point {p} lies in a certified box"
            )));
        }
        bound += exact_point_weight(&f, p)?;
        transversal.push(transversal_at(&f, &pb).unwrap_or(false));
        boxes.push(pb);
    }
    let coprime = real_parts_coprime(&f)?;
    if coprime && bound > cap {
        return Err(Error::Internal(format!(
            "intersection bound {bound} exceeds {cap}"
        )));
    }
    // keep verdicts aligned with the sorted census boxes
    let mut paired: Vec<(IsolatingBox, bool)> = boxes.into_iter().zip(transversal).collect();
    paired.sort_by(|a, b| (a.0.chart, &a.0.x.0, &a.0.y.0).cmp(&(b.0.chart, &b.0.x.0, &b.0.y.0)));
    let (boxes, transversal): (Vec<_>, Vec<_>) = paired.into_iter().unzip();
    let census = Census::new(boxes, cap);
    Ok(PredictedCensus {
        census,
        transversal,
        bound,
        coprime,
        complete: coprime && bound == cap,
        failed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PlanePoly {
        PlanePoly::parse(s).unwrap()
    }

    #[test]
    fn coprime_parts() {
        assert!(real_parts_coprime(&p("x^2 + y^2 - 1 + i*(x - y)")).unwrap());
        assert!(!real_parts_coprime(&p("(x - y)*(x + 1) + i*(x - y)*(y - 2)")).unwrap());
        // x0 divides both parts
        assert!(!real_parts_coprime(&p("x0*x1 + i*x0*x2")).unwrap());
    }

    #[test]
    fn predicted_census_closes() {
        // two transversal points; Bezout cap 4 needs the weight of nothing else
        let f = p("x^2 + y^2 - 1 + i*(x - y)");
        let s = 0.5f64.sqrt();
        let c = census_from_predictions(&f, &[(s, s), (-s, -s)], &[]).unwrap();
        assert_eq!(c.census.count, 2);
        assert_eq!(c.bound, 2);
        assert!(c.coprime && !c.complete);
        // x^2 + i*y^2: the origin has weight 4 = cap
        let g = p("x^2 + i*y^2");
        let o = ProjectivePoint::from_ints([(1, 0), (0, 0), (0, 0)]).unwrap();
        let c = census_from_predictions(&g, &[], &[o]).unwrap();
        assert!(c.complete);
        assert_eq!(c.transversal, vec![false]);
    }

    #[test]
    fn linear_imaginary() {
        let c = real_points(&p("x + i*y"), 30).unwrap();
        assert_eq!(c.count, 1);
        assert_eq!(c.cap, 1);
        assert!(c.maximal);
        assert_eq!(
            c.boxes[0].center(),
            (BigRational::zero(), BigRational::zero())
        );
    }

    #[test]
    fn transversal_examples() {
        let b = IsolatingBox {
            chart: 0,
            x: (BigRational::zero(), BigRational::zero()),
            y: (BigRational::zero(), BigRational::zero()),
        };
        assert!(transversal_at(&p("x + i*y"), &b).unwrap());
        assert!(!transversal_at(&p("x^2 + i*y"), &b).unwrap());
    }

    #[test]
    fn conic_pair_points() {
        // g = x^2 + y^2 - 1, h = x - y: two irrational real points.
        let c = real_points_detailed(&p("x^2 + y^2 - 1 + i*x - i*y"), 30).unwrap();
        assert_eq!(c.census.count, 2);
        assert!(c.transversal.iter().all(|&t| t));
        for b in &c.census.boxes {
            let (x, y) = b.center_f64();
            assert!((x * x - 0.5).abs() < 1e-6 && (x - y).abs() < 1e-6);
            assert!(b.width() <= BigRational::new(1.into(), BigInt::one() << 30usize));
        }
    }

    #[test]
    fn real_curve_rejected() {
        assert!(matches!(
            real_points(&p("x^2 + y^2 - 1"), 30),
            Err(Error::NotImaginary(_))
        ));
        assert!(matches!(
            real_points(&p("i*x^2 + i*y^2 - i"), 30),
            Err(Error::NotImaginary(_))
        ));
    }

    #[test]
    fn points_at_infinity() {
        // g = x0*x1, h = x1*x2 - x0^2: real points [0:0:1] and [1:0:0]... only where both vanish.
        let f = p("x0*x1 + i*x1*x2 - i*x0^2");
        let c = real_points(&f, 30).unwrap();
        // x1 = 0 -> x0 = 0 -> [0:0:1]; x0 = 0 -> x1*x2 = 0 -> [0:0:1], [0:1:0]
        assert_eq!(c.count, 2);
        assert!(c.boxes.iter().any(|b| b.chart == 2));
        assert!(c.boxes.iter().any(|b| b.chart == 1));
    }

    #[test]
    fn predicted_boxes() {
        let f = p("x^2 + y^2 - 1 + i*x - i*y");
        let s = Dyadic::from_f64(std::f64::consts::FRAC_1_SQRT_2);
        let r = Dyadic::pow2(-20);
        let iv = |c: &Dyadic| DInterval::new(c - &r, c + &r);
        let boxes = vec![(iv(&s), iv(&s)), (iv(&-&s), iv(&-&s))];
        let out = certify_boxes(&f, &boxes).unwrap();
        assert_eq!(out.len(), 2);
        revalidate_boxes(&f, &out).unwrap();
        let bad = vec![(iv(&s), iv(&-&s))];
        assert!(certify_boxes(&f, &bad).is_err());
    }
}
