//! Viro-type patchworking of the four chart polynomials `F0..F3` into one curve
//! of degree `4d`, keeping a prescribed tangential singular point.
//!
//! Lattice points `(i, j)` index affine monomials `x^i y^j`; `D = 2d` throughout.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::gaussian::GaussianRational as GR;
use crate::linalg::Matrix;
use crate::local;
use crate::poly::{Chart, Monomial, PlanePoly, ProjectivePoint};
use crate::real_solve::{self, Census, IsolatingBox};
use crate::{Error, Result};

pub type Lattice = (u32, u32);

/// The subdivision of `T_{4d}` into `Δ0..Δ3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NewtonSubdivision {
    pub d: u32,
}

impl NewtonSubdivision {
    pub fn new(d: u32) -> Self {
        NewtonSubdivision { d }
    }

    pub fn triangle(&self, k: usize) -> [(i64, i64); 3] {
        let d = 2 * self.d as i64;
        match k {
            0 => [(d, 0), (0, d), (d, d)],
            1 => [(0, 0), (d, 0), (0, d)],
            2 => [(0, d), (0, 2 * d), (d, d)],
            _ => [(d, 0), (2 * d, 0), (d, d)],
        }
    }

    pub fn contains(&self, k: usize, (i, j): Lattice) -> bool {
        let d = 2 * self.d;
        match k {
            0 => i <= d && j <= d && i + j >= d,
            1 => i + j <= d,
            2 => i <= d && j >= d && i + j <= 2 * d,
            _ => j <= d && i >= d && i + j <= 2 * d,
        }
    }

    pub fn lattice(&self) -> Vec<Lattice> {
        let n = 4 * self.d;
        (0..=n)
            .flat_map(|i| (0..=n - i).map(move |j| (i, j)))
            .collect()
    }

    /// Twice the area of triangle `k`.
    pub fn double_area(&self, k: usize) -> i64 {
        let [a, b, c] = self.triangle(k);
        ((b.0 - a.0) * (c.1 - a.1) - (c.0 - a.0) * (b.1 - a.1)).abs()
    }

    /// Areas add up to `T_{4d}`, every lattice point lies in some triangle, and no
    /// point lies in the interior of two triangles.
    pub fn verify_tiling(&self) -> bool {
        let n = 4 * self.d as i64;
        let total: i64 = (0..4).map(|k| self.double_area(k)).sum();
        if total != n * n {
            return false;
        }
        self.lattice().into_iter().all(|p| {
            let hits = (0..4).filter(|&k| self.contains(k, p)).count();
            let interior = (0..4).filter(|&k| self.strictly_inside(k, p)).count();
            hits >= 1 && interior <= 1 && (interior == 0 || hits == 1)
        })
    }

    fn strictly_inside(&self, k: usize, (i, j): Lattice) -> bool {
        let d = 2 * self.d;
        match k {
            0 => i < d && j < d && i + j > d,
            1 => i > 0 && j > 0 && i + j < d,
            2 => i > 0 && j > d && i + j < 2 * d,
            _ => j > 0 && i > d && i + j < 2 * d,
        }
    }
}

/// `ν(i, j) = max(0, D - i - j, i - D, j - D)`, with linear forms
/// `l_k = γ0 + γ1*i + γ2*j` on `Δk`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lifting {
    pub d: u32,
}

impl Lifting {
    pub fn nu(&self, (i, j): Lattice) -> u32 {
        let d = 2 * self.d as i64;
        let (i, j) = (i as i64, j as i64);
        [0, d - i - j, i - d, j - d].into_iter().max().unwrap() as u32
    }

    pub fn form(&self, k: usize) -> (i64, i64, i64) {
        let d = 2 * self.d as i64;
        match k {
            0 => (0, 0, 0),
            1 => (d, -1, -1),
            2 => (-d, 0, 1),
            _ => (-d, 1, 0),
        }
    }

    pub fn eval_form(&self, k: usize, (i, j): Lattice) -> i64 {
        let (g0, g1, g2) = self.form(k);
        g0 + g1 * i as i64 + g2 * j as i64
    }

    /// Convex max of the forms, attained exactly on the matching triangle, zero on `Δ0`.
    pub fn verify(&self) -> bool {
        let sub = NewtonSubdivision::new(self.d);
        sub.lattice().into_iter().all(|p| {
            let nu = self.nu(p) as i64;
            (0..4).all(|k| {
                let v = self.eval_form(k, p);
                v <= nu && ((v == nu) == sub.contains(k, p))
            }) && (!sub.contains(0, p) || nu == 0)
        })
    }
}

pub fn standard_lifting(d: u32) -> Lifting {
    let l = Lifting { d };
    debug_assert!(l.verify());
    l
}

fn support(f: &PlanePoly) -> BTreeMap<Lattice, GR> {
    f.terms()
        .map(|(m, c)| ((m.0[0], m.0[1]), c.clone()))
        .collect()
}

fn from_support(s: &BTreeMap<Lattice, GR>) -> PlanePoly {
    PlanePoly::from_terms(
        Chart::Affine,
        s.iter().map(|(&(i, j), c)| (Monomial::xy(i, j), c.clone())),
    )
}

/// Exponent maps taking `Δ0` onto `Δ1`, `Δ2`, `Δ3`.
pub fn chart_map(d: u32, k: usize, (i, j): Lattice) -> Lattice {
    let dd = 2 * d;
    match k {
        0 => (i, j),
        1 => (dd - j, dd - i),
        2 => (i + j - dd, 2 * dd - j),
        _ => (2 * dd - i, i + j - dd),
    }
}

/// Affine `F1, F2, F3` from `F0`.
pub fn chart_polys(f0: &PlanePoly, d: u32) -> Result<(PlanePoly, PlanePoly, PlanePoly)> {
    if f0.chart() != Chart::Affine {
        return Err(Error::Chart("chart polynomials expect an affine F0".into()));
    }
    let sub = NewtonSubdivision::new(d);
    let s0 = support(f0);
    if let Some(p) = s0.keys().find(|p| !sub.contains(0, **p)) {
        return Err(Error::Degenerate(format!(
            "monomial {p:?} of F0 lies outside the first triangle"
        )));
    }
    let map = |k| {
        s0.iter()
            .map(|(&p, c)| (chart_map(d, k, p), c.clone()))
            .collect::<BTreeMap<_, _>>()
    };
    let (s1, s2, s3) = (map(1), map(2), map(3));
    let all = [&s0, &s1, &s2, &s3];
    for a in 0..4 {
        for b in a + 1..4 {
            for (p, c) in all[a] {
                if let Some(o) = all[b].get(p) {
                    if o != c {
                        return Err(Error::Internal(format!(
                            "charts {a} and {b} disagree at {p:?}"
                        )));
                    }
                }
            }
        }
    }
    Ok((from_support(&s1), from_support(&s2), from_support(&s3)))
}

/// Merged coefficients `a_ij` of `F0..F3`.
pub fn base_coefficients(f0: &PlanePoly, d: u32) -> Result<BTreeMap<Lattice, GR>> {
    let (f1, f2, f3) = chart_polys(f0, d)?;
    let mut a = support(f0);
    for f in [f1, f2, f3] {
        a.extend(support(&f));
    }
    Ok(a)
}

/// Conditions `α^(k)_ij`: row `k` is the coefficient of the `k`-th constraint
/// monomial in the local expansion of `x^i y^j`.
#[derive(Clone, Debug)]
pub struct TangencySystem {
    pub m: u32,
    pub conditions: Vec<Lattice>,
    pub lattice: Vec<Lattice>,
    pub alpha: Matrix,
}

impl TangencySystem {
    pub fn column(&self, p: Lattice) -> Option<usize> {
        self.lattice.binary_search(&p).ok()
    }

    pub fn residuals(&self, coeffs: &BTreeMap<Lattice, GR>) -> Vec<GR> {
        self.alpha
            .iter()
            .map(|row| {
                coeffs
                    .iter()
                    .fold(GR::zero(), |acc, (p, c)| match self.column(*p) {
                        Some(k) => &acc + &(&row[k] * c),
                        None => acc,
                    })
            })
            .collect()
    }
}

pub fn tangency_constraints(
    z1star: &ProjectivePoint,
    lstar: &PlanePoly,
    m: u32,
    d: u32,
) -> Result<TangencySystem> {
    if m == 0 {
        return Err(Error::Degenerate("multiplicity must be positive".into()));
    }
    let z = z1star
        .normalized_at(0)
        .ok_or_else(|| Error::Degenerate("tangency point must be finite".into()))?;
    if lstar.degree() != 1 || !lstar.is_real() {
        return Err(Error::Degenerate(
            "tangency line must be a real line".into(),
        ));
    }
    if !real_solve::projective_form(lstar)?.eval_point(&z).is_zero() {
        return Err(Error::NotOnCurve("tangency line misses the point".into()));
    }
    let l = crate::transforms::line_coeffs(&real_solve::projective_form(lstar)?);
    let (p, q) = (z.coords[1].clone(), z.coords[2].clone());
    // Local coordinates: Y = L*, X = x - p (or y - q when L* is vertical).
    let aff = |c0: GR, cx: GR, cy: GR| {
        PlanePoly::from_terms(
            Chart::Affine,
            [
                (Monomial::xy(0, 0), c0),
                (Monomial::xy(1, 0), cx),
                (Monomial::xy(0, 1), cy),
            ],
        )
    };
    let (xl, yl) = if !l[2].is_zero() {
        let inv = l[2].inv().unwrap();
        (aff(p, GR::one(), GR::zero()), aff(q, -(&l[1] * &inv), inv))
    } else {
        let inv = l[1].inv().unwrap();
        (aff(p, GR::zero(), inv), aff(q, GR::one(), GR::zero()))
    };
    let conditions: Vec<Lattice> = local::constraint_monomials(m);
    let sub = NewtonSubdivision::new(d);
    let lattice = sub.lattice();
    let n = 4 * d as usize;
    let mut px = vec![PlanePoly::constant(Chart::Affine, GR::one())];
    let mut py = px.clone();
    // Only monomials of weight below 2m matter; truncating keeps products small.
    let trunc = |f: PlanePoly| {
        PlanePoly::from_terms(
            Chart::Affine,
            f.terms()
                .filter(|(mm, _)| mm.0[0] + 2 * mm.0[1] < 2 * m)
                .map(|(a, b)| (*a, b.clone())),
        )
    };
    for _ in 0..n {
        px.push(trunc(px.last().unwrap().mul(&xl)));
        py.push(trunc(py.last().unwrap().mul(&yl)));
    }
    let mut alpha = vec![vec![GR::zero(); lattice.len()]; conditions.len()];
    for (col, &(i, j)) in lattice.iter().enumerate() {
        let e = trunc(px[i as usize].mul(&py[j as usize]));
        for (row, &(a, b)) in conditions.iter().enumerate() {
            alpha[row][col] = e.coeff(&Monomial::xy(a, b));
        }
    }
    Ok(TangencySystem {
        m,
        conditions,
        lattice,
        alpha,
    })
}

/// The deformation family around `F0`.
#[derive(Clone, Debug)]
pub struct ViroFamily {
    pub d: u32,
    pub base: BTreeMap<Lattice, GR>,
    pub lifting: Lifting,
    pub system: TangencySystem,
    pub pivots: Vec<Lattice>,
    pub f0: PlanePoly,
    /// Real points of `F0` in the torus, chart 0.
    pub f0_points: Vec<IsolatingBox>,
}

/// Greedy pivots over the `Δ0` block, in the order of decreasing `i + j`, then `i`, then `j`.
pub fn select_pivots(system: &TangencySystem, d: u32) -> Result<Vec<Lattice>> {
    let sub = NewtonSubdivision::new(d);
    let mut cols: Vec<Lattice> = system
        .lattice
        .iter()
        .copied()
        .filter(|p| sub.contains(0, *p))
        .collect();
    cols.sort_by_key(|&(i, j)| {
        (
            std::cmp::Reverse(i + j),
            std::cmp::Reverse(i),
            std::cmp::Reverse(j),
        )
    });
    let mut rows: Matrix = system
        .alpha
        .iter()
        .map(|r| {
            cols.iter()
                .map(|p| r[system.column(*p).unwrap()].clone())
                .collect()
        })
        .collect();
    let need = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols.len() {
        if r == need {
            break;
        }
        let Some(pr) = (r..need).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].inv().unwrap();
        rows[r] = rows[r].iter().map(|v| v * &inv).collect();
        for k in 0..need {
            if k != r && !rows[k][c].is_zero() {
                let f = rows[k][c].clone();
                let pivot_row = rows[r].clone();
                for (v, w) in rows[k].iter_mut().zip(pivot_row.iter()) {
                    *v = &*v - &(&f * w);
                }
            }
        }
        pivots.push(cols[c]);
        r += 1;
    }
    if r < need {
        return Err(Error::RankDeficient(format!(
            "tangency conditions have rank {r} < {need} on the first triangle"
        )));
    }
    Ok(pivots)
}

impl ViroFamily {
    /// `f0` is the affine chart `x0 = 1` of the Cremona-stage curve; `f0_points` its
    /// real points off the coordinate axes.
    pub fn new(
        f0: &PlanePoly,
        d: u32,
        z1star: &ProjectivePoint,
        lstar: &PlanePoly,
        m: u32,
        f0_points: Vec<IsolatingBox>,
    ) -> Result<Self> {
        let base = base_coefficients(f0, d)?;
        let system = tangency_constraints(z1star, lstar, m, d)?;
        let res = system.residuals(&support(f0));
        if res.iter().any(|r| !r.is_zero()) {
            return Err(Error::JetCondition(
                "F0 does not have the prescribed tangential point".into(),
            ));
        }
        let pivots = select_pivots(&system, d)?;
        Ok(ViroFamily {
            d,
            base,
            lifting: standard_lifting(d),
            system,
            pivots,
            f0: f0.clone(),
            f0_points,
        })
    }
}

/// Coefficients `A_ij(t)` at one rational `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolvedFamily {
    pub t: BigRational,
    pub coeffs: BTreeMap<Lattice, GR>,
}

fn rpow(t: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(t.clone(), e as usize)
    } else {
        num_traits::pow(t.recip(), (-e) as usize)
    }
}

pub fn solve_family_at(family: &ViroFamily, t: &BigRational) -> Result<SolvedFamily> {
    if t.is_negative() {
        return Err(Error::Degenerate("t must be non-negative".into()));
    }
    let sys = &family.system;
    let mut scaled: BTreeMap<Lattice, GR> = BTreeMap::new();
    for (p, a) in &family.base {
        if family.pivots.contains(p) {
            continue;
        }
        let w = rpow(t, family.lifting.nu(*p) as i64);
        if !w.is_zero() {
            scaled.insert(*p, a.scale(&w));
        }
    }
    let rhs: Vec<GR> = sys.residuals(&scaled).into_iter().map(|r| -r).collect();
    let mat: Matrix = sys
        .alpha
        .iter()
        .map(|row| {
            family
                .pivots
                .iter()
                .map(|p| row[sys.column(*p).unwrap()].clone())
                .collect()
        })
        .collect();
    let sol = crate::linalg::solve(&mat, &rhs)
        .ok_or_else(|| Error::RankDeficient("pivot minor is singular".into()))?;
    let mut coeffs: BTreeMap<Lattice, GR> = family
        .base
        .iter()
        .filter(|(p, _)| !family.pivots.contains(p))
        .map(|(p, a)| (*p, a.clone()))
        .collect();
    let mut full = scaled;
    for (p, s) in family.pivots.iter().zip(sol) {
        // pivots lie in Δ0, where ν = 0
        coeffs.insert(*p, s.clone());
        full.insert(*p, s);
    }
    if sys.residuals(&full).iter().any(|r| !r.is_zero()) {
        return Err(Error::Internal(
            "solved family violates the tangency conditions".into(),
        ));
    }
    coeffs.retain(|_, c| !c.is_zero());
    Ok(SolvedFamily {
        t: t.clone(),
        coeffs,
    })
}

impl SolvedFamily {
    /// `Φ_t` as an affine polynomial.
    pub fn phi_affine(&self, lifting: &Lifting) -> PlanePoly {
        self.chart_poly(lifting, 0)
    }

    /// `Φ_t` as a form of degree `4d`.
    pub fn phi(&self, lifting: &Lifting) -> Result<PlanePoly> {
        self.phi_affine(lifting).homogenize(4 * lifting.d)
    }

    /// `t^{-γ0} Φ_t(x t^{-γ1}, y t^{-γ2})`, coefficients `A_ij t^{ν - l_k}`.
    /// Chart 0 is `Φ_t` itself.
    pub fn chart_poly(&self, lifting: &Lifting, k: usize) -> PlanePoly {
        PlanePoly::from_terms(
            Chart::Affine,
            self.coeffs.iter().filter_map(|(&p, a)| {
                let e = lifting.nu(p) as i64 - lifting.eval_form(k, p);
                let w = rpow(&self.t, e);
                (!w.is_zero()).then(|| (Monomial::xy(p.0, p.1), a.scale(&w)))
            }),
        )
    }
}

/// Per-chart certified real points of `Φ_t`.
#[derive(Clone, Debug)]
pub struct ChartCensus {
    pub t: BigRational,
    /// Boxes in `Φ_t` coordinates (chart 0), grouped by region.
    pub regions: [Vec<IsolatingBox>; 4],
    pub counts: [usize; 4],
    pub disjoint: bool,
    pub success: bool,
    pub census: Census,
    pub diagnostics: Vec<String>,
}

/// Images of an `F0` point `(u, v)` on the chart polynomials `F1..F3`.
fn chart_point(k: usize, (u, v): (f64, f64)) -> (f64, f64) {
    match k {
        0 => (u, v),
        1 => (1.0 / v, 1.0 / u),
        2 => (u, u / v),
        _ => (v / u, v),
    }
}

fn scale_box(b: &IsolatingBox, sx: &BigRational, sy: &BigRational) -> IsolatingBox {
    let s = |iv: &(BigRational, BigRational), f: &BigRational| {
        let (a, c) = (&iv.0 * f, &iv.1 * f);
        if a <= c {
            (a, c)
        } else {
            (c, a)
        }
    };
    IsolatingBox {
        chart: 0,
        x: s(&b.x, sx),
        y: s(&b.y, sy),
    }
}

/// Bounding box of `(|x|, |y|)` over a region.
fn abs_envelope(bs: &[IsolatingBox]) -> Option<[(BigRational, BigRational); 2]> {
    let abs_iv = |iv: &(BigRational, BigRational)| {
        if iv.0.is_negative() && iv.1.is_positive() || iv.0.is_zero() || iv.1.is_zero() {
            (BigRational::zero(), iv.0.abs().max(iv.1.abs()))
        } else {
            let (a, b) = (iv.0.abs(), iv.1.abs());
            (a.clone().min(b.clone()), a.max(b))
        }
    };
    let mut it = bs.iter();
    let first = it.next()?;
    let mut env = [abs_iv(&first.x), abs_iv(&first.y)];
    for b in it {
        for (e, iv) in env.iter_mut().zip([abs_iv(&b.x), abs_iv(&b.y)]) {
            e.0 = e.0.clone().min(iv.0);
            e.1 = e.1.clone().max(iv.1);
        }
    }
    Some(env)
}

fn envelopes_disjoint(
    a: &[(BigRational, BigRational); 2],
    b: &[(BigRational, BigRational); 2],
) -> bool {
    (0..2).any(|k| a[k].1 < b[k].0 || b[k].1 < a[k].0)
}

/// Certifies the real points of `Φ_t` near the images of `F0`'s points in the
/// four charts, and checks that the four regions are disjoint.
pub fn chart_census(family: &ViroFamily, solved: &SolvedFamily) -> Result<ChartCensus> {
    let d = family.d;
    let need = (d * d) as usize * 4;
    let cap = need * 4;
    let lifting = &family.lifting;
    let t = &solved.t;
    if !t.is_positive() {
        return Err(Error::Degenerate("census needs t > 0".into()));
    }
    let mut diagnostics = Vec::new();
    let base: Vec<(f64, f64)> = family.f0_points.iter().map(|b| b.center_f64()).collect();
    if base.len() < need {
        diagnostics.push(format!("F0 has only {} torus points", base.len()));
    }
    let mut regions: [Vec<IsolatingBox>; 4] = Default::default();
    for k in 0..4usize {
        let fk = solved.chart_poly(lifting, k);
        let preds: Vec<(f64, f64)> = base.iter().map(|&p| chart_point(k, p)).collect();
        let certified = match real_solve::certify_all_predictions(&fk, &preds)? {
            Ok(bs) => bs,
            Err(i) => {
                diagnostics.push(format!("chart {k}: prediction {i} not certified"));
                break;
            }
        };
        if let Some((a, b)) = real_solve::first_overlap(&certified) {
            diagnostics.push(format!("chart {k}: boxes {a} and {b} overlap"));
            break;
        }
        let (_, g1, g2) = lifting.form(k);
        let sx = rpow(t, -g1);
        let sy = rpow(t, -g2);
        regions[k] = certified.iter().map(|b| scale_box(b, &sx, &sy)).collect();
    }
    let counts = [
        regions[0].len(),
        regions[1].len(),
        regions[2].len(),
        regions[3].len(),
    ];
    let envs: Vec<_> = regions.iter().map(|r| abs_envelope(r)).collect();
    let mut disjoint = true;
    for a in 0..4 {
        for b in a + 1..4 {
            if let (Some(ea), Some(eb)) = (&envs[a], &envs[b]) {
                if !envelopes_disjoint(ea, eb) {
                    disjoint = false;
                    diagnostics.push(format!("regions {a} and {b} overlap"));
                }
            }
        }
    }
    let all: Vec<IsolatingBox> = regions.iter().flatten().cloned().collect();
    let success = disjoint && counts.iter().all(|&c| c >= need) && all.len() == cap;
    Ok(ChartCensus {
        t: t.clone(),
        regions,
        counts,
        disjoint,
        success,
        census: Census::new(all, cap),
        diagnostics,
    })
}

/// Outcome of the halving search for `t`.
#[derive(Clone, Debug)]
pub struct TChoice {
    pub t: BigRational,
    pub halvings: u32,
    pub solved: SolvedFamily,
    pub census: ChartCensus,
}

pub const T_HALVING_BUDGET: u32 = 64;

pub fn choose_t(family: &ViroFamily, t0: &BigRational) -> Result<TChoice> {
    if !t0.is_positive() {
        return Err(Error::Degenerate("t0 must be positive".into()));
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let mut t = t0.clone();
    let mut last = String::new();
    for halvings in 0..=T_HALVING_BUDGET {
        match solve_family_at(family, &t) {
            Ok(solved) => {
                let census = chart_census(family, &solved)?;
                if census.success {
                    return Ok(TChoice {
                        t,
                        halvings,
                        solved,
                        census,
                    });
                }
                last = census.diagnostics.join("; ");
            }
            Err(Error::RankDeficient(e)) => last = e,
            Err(e) => return Err(e),
        }
        t = &t / &two;
    }
    Err(Error::SearchExhausted(format!(
        "no valid t after {T_HALVING_BUDGET} halvings: {last}"
    )))
}

/// `2^{-k}` as a rational.
pub fn dyadic_t(k: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << k as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subdivision_tiles() {
        for d in 1..=16 {
            assert!(NewtonSubdivision::new(d).verify_tiling(), "d = {d}");
            assert!(Lifting { d }.verify(), "d = {d}");
        }
    }

    #[test]
    fn lifting_values() {
        let l = standard_lifting(3);
        assert_eq!(l.nu((6, 0)), 0);
        assert_eq!(l.nu((0, 0)), 6);
        assert_eq!(l.nu((0, 12)), 6);
        assert_eq!(l.nu((12, 0)), 6);
    }

    #[test]
    fn chart_maps() {
        let f0 = PlanePoly::parse("x^2*y^2 + 3*x*y^2 + (1+i)*x^2*y").unwrap();
        let (f1, f2, f3) = chart_polys(&f0, 1).unwrap();
        assert_eq!(f1, PlanePoly::parse("1 + 3*y + (1+i)*x").unwrap());
        // x^{-2d} y^{4d} F0(x, x/y)
        assert_eq!(
            f2,
            PlanePoly::parse("x^2*y^2 + 3*x*y^2 + (1+i)*x*y^3").unwrap()
        );
        // x^{4d} y^{-2d} F0(y/x, y)
        assert_eq!(
            f3,
            PlanePoly::parse("x^2*y^2 + 3*x^3*y + (1+i)*x^2*y").unwrap()
        );
        assert!(chart_polys(&PlanePoly::parse("x").unwrap(), 1).is_err());
    }

    #[test]
    fn tangency_counts() {
        let z = ProjectivePoint::from_ints([(1, 0), (1, 1), (2, 0)]).unwrap();
        let l = PlanePoly::parse("x2 - 2*x0").unwrap();
        for m in 1..=3 {
            let s = tangency_constraints(&z, &l, m, 3).unwrap();
            assert_eq!(s.alpha.len() as u32, m * (m + 1));
        }
        let s = tangency_constraints(&z, &l, 2, 3).unwrap();
        assert_eq!(select_pivots(&s, 3).unwrap().len(), 6);
    }
}
