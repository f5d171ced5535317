//! Exact local analysis of singular points: multiplicity, ordinariness, the
//! quadratic-tangency branch profile, and jet prescription.

use num_traits::{One, Zero};

use crate::gaussian::GaussianRational as GR;
use crate::linalg::{self, Matrix};
use crate::poly::{Chart, Monomial, PlanePoly, ProjectivePoint};
use crate::{Error, Result};

/// Affine chart centered at `center` in which `axis_line` becomes `{Y = 0}`.
/// Old coordinates are `x = matrix * w`, and the chart is `w0 = 1`, `(X, Y) = (w1, w2)`.
#[derive(Clone, Debug)]
pub struct LocalFrame {
    pub center: ProjectivePoint,
    pub axis_line: PlanePoly,
    pub matrix: [[GR; 3]; 3],
}

impl LocalFrame {
    pub fn new(center: &ProjectivePoint, axis_line: &PlanePoly) -> Result<Self> {
        if axis_line.degree() != 1
            || !axis_line.is_homogeneous()
            || axis_line.chart() != Chart::Projective
        {
            return Err(Error::Degenerate(
                "frame axis must be a projective line".into(),
            ));
        }
        let l = line_coeffs(axis_line);
        if !axis_line.eval_point(center).is_zero() {
            return Err(Error::Degenerate(
                "frame axis does not pass through the center".into(),
            ));
        }
        let basis = |k: usize| {
            let mut c = [GR::zero(), GR::zero(), GR::zero()];
            c[k] = GR::one();
            ProjectivePoint { coords: c }
        };
        // a second point on the axis
        let q = (0..3)
            .map(|k| {
                let e = basis(k);
                let c = cross(&l, &e.coords);
                c
            })
            .filter(|c| c.iter().any(|v| !v.is_zero()))
            .map(|c| ProjectivePoint { coords: c })
            .find(|p| !p.same_point(center))
            .ok_or_else(|| Error::Degenerate("no second point on the axis".into()))?;
        let off = (0..3)
            .map(basis)
            .find(|e| !dot(&l, &e.coords).is_zero())
            .ok_or_else(|| Error::Degenerate("zero line".into()))?;
        let mut m = [
            [GR::zero(), GR::zero(), GR::zero()],
            [GR::zero(), GR::zero(), GR::zero()],
            [GR::zero(), GR::zero(), GR::zero()],
        ];
        for r in 0..3 {
            m[r][0] = center.coords[r].clone();
            m[r][1] = q.coords[r].clone();
            m[r][2] = off.coords[r].clone();
        }
        Ok(LocalFrame {
            center: center.clone(),
            axis_line: axis_line.clone(),
            matrix: m,
        })
    }

    /// A frame centered at `z` with some line through `z` as axis.
    pub fn centered(z: &ProjectivePoint) -> Result<Self> {
        let e = (0..3)
            .map(|k| {
                let mut c = [GR::zero(), GR::zero(), GR::zero()];
                c[k] = GR::one();
                ProjectivePoint { coords: c }
            })
            .find(|e| !e.same_point(z))
            .unwrap();
        let c = z.cross(&e);
        Self::new(z, &PlanePoly::linear(&c))
    }

    /// `f` in the local affine coordinates `(X, Y)`.
    pub fn local_poly(&self, f: &PlanePoly) -> Result<PlanePoly> {
        if f.chart() != Chart::Projective || !f.is_homogeneous() {
            return Err(Error::Chart("local analysis expects a form".into()));
        }
        let vals: Vec<PlanePoly> = (0..3)
            .map(|r| {
                PlanePoly::linear(&[
                    self.matrix[r][0].clone(),
                    self.matrix[r][1].clone(),
                    self.matrix[r][2].clone(),
                ])
            })
            .collect();
        f.substitute(&vals).dehomogenize(0)
    }
}

fn line_coeffs(l: &PlanePoly) -> [GR; 3] {
    let mut c = [GR::zero(), GR::zero(), GR::zero()];
    for k in 0..3 {
        let mut e = [0u32; 3];
        e[k] = 1;
        c[k] = l.coeff(&Monomial(e));
    }
    c
}

fn cross(a: &[GR; 3], b: &[GR; 3]) -> [GR; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot(a: &[GR; 3], b: &[GR; 3]) -> GR {
    &(&a[0] * &b[0] + &a[1] * &b[1]) + &(&a[2] * &b[2])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SingularityKind {
    Ordinary,
    Tangential { branches: u32, line: PlanePoly },
    Other,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularityRecord {
    pub center: ProjectivePoint,
    pub multiplicity: u32,
    pub kind: SingularityKind,
    pub certified: bool,
}

impl SingularityRecord {
    pub fn kind_name(&self) -> String {
        match &self.kind {
            SingularityKind::Ordinary => "ordinary".into(),
            SingularityKind::Tangential { branches, line } => {
                format!("tangential({branches}, {line})")
            }
            SingularityKind::Other => "other".into(),
        }
    }
}

fn check_on_curve(f: &PlanePoly, z: &ProjectivePoint) -> Result<()> {
    let f = crate::real_solve::projective_form(f)?;
    if !f.eval_point(z).is_zero() {
        return Err(Error::NotOnCurve(format!("{z}")));
    }
    Ok(())
}

pub fn multiplicity_at(f: &PlanePoly, z: &ProjectivePoint) -> Result<u32> {
    check_on_curve(f, z)?;
    let f = crate::real_solve::projective_form(f)?;
    let local = LocalFrame::centered(z)?.local_poly(&f)?;
    Ok(local.min_degree())
}

/// Binary form of the given degree of an affine polynomial, as `phi(t, 1)` low to high
/// together with the number of factors `Y` (i.e. the order of vanishing at `X`-direction infinity).
fn initial_form(local: &PlanePoly, m: u32) -> Vec<GR> {
    // phi(X, Y) = sum c_{a,b} X^a Y^b, a + b = m;  u(t) = phi(t, 1)
    let mut u = vec![GR::zero(); m as usize + 1];
    for (mon, c) in local.terms() {
        if mon.degree() == m {
            u[mon.0[0] as usize] = c.clone();
        }
    }
    u
}

/// Whether a binary form, given as `phi(t, 1)` with formal degree `u.len() - 1`, is squarefree.
fn binary_form_squarefree(u: &[GR]) -> bool {
    let m = u.len() - 1;
    let t = trim(u.to_vec());
    if t.is_empty() {
        return false;
    }
    let deg = t.len() - 1;
    // Y^(m - deg) divides phi.
    if m - deg >= 2 {
        return false;
    }
    let d = derivative(&t);
    gcd(&t, &d).len() <= 1
}

pub fn is_ordinary(f: &PlanePoly, z: &ProjectivePoint) -> Result<bool> {
    let m = multiplicity_at(f, z)?;
    let f = crate::real_solve::projective_form(f)?;
    let local = LocalFrame::centered(z)?.local_poly(&f)?;
    Ok(binary_form_squarefree(&initial_form(&local, m)))
}

/// Newton-diagram test for `m` smooth branches quadratically tangent to `line` at `z`.
pub fn tangential_branch_profile(
    f: &PlanePoly,
    z: &ProjectivePoint,
    line: &PlanePoly,
    m: u32,
) -> Result<bool> {
    check_on_curve(f, z)?;
    let f = crate::real_solve::projective_form(f)?;
    let local = LocalFrame::new(z, line)?.local_poly(&f)?;
    Ok(profile_of_local(&local, m))
}

fn profile_of_local(local: &PlanePoly, m: u32) -> bool {
    let mut edge = vec![GR::zero(); m as usize + 1];
    for (mon, c) in local.terms() {
        let (i, j) = (mon.0[0], mon.0[1]);
        if i + 2 * j < 2 * m {
            return false;
        }
        if i + 2 * j == 2 * m {
            edge[j as usize] = c.clone();
        }
    }
    if edge[m as usize].is_zero() || edge[0].is_zero() {
        return false;
    }
    let d = derivative(&edge);
    gcd(&edge, &d).len() <= 1
}

/// Lattice points `(i, j)` with `i + 2j < 2m`.
pub fn constraint_monomials(m: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for j in 0..m {
        for i in 0..(2 * m - 2 * j) {
            out.push((i, j));
        }
    }
    out
}

pub fn constraint_count(m: u32) -> usize {
    let n = constraint_monomials(m).len();
    assert_eq!(
        n as u64,
        m as u64 * (m as u64 + 1),
        "constraint count mismatch"
    );
    n
}

/// Full analysis of a point of `f`; `line` requests the tangential profile with `m` branches.
pub fn analyze(
    f: &PlanePoly,
    z: &ProjectivePoint,
    line: Option<(&PlanePoly, u32)>,
) -> Result<SingularityRecord> {
    let m = multiplicity_at(f, z)?;
    if let Some((l, branches)) = line {
        if tangential_branch_profile(f, z, l, branches)? {
            return Ok(SingularityRecord {
                center: z.clone(),
                multiplicity: m,
                kind: SingularityKind::Tangential {
                    branches,
                    line: l.clone(),
                },
                certified: true,
            });
        }
    }
    let kind = if m >= 2 && is_ordinary(f, z)? {
        SingularityKind::Ordinary
    } else {
        SingularityKind::Other
    };
    Ok(SingularityRecord {
        center: z.clone(),
        multiplicity: m,
        kind,
        certified: true,
    })
}

#[derive(Clone, Debug)]
pub struct JetEntry {
    pub point: ProjectivePoint,
    pub order: u32,
    /// Taylor coefficients `(a, b, value)` for `X^a Y^b`, `a + b <= order`; missing ones are zero.
    pub jet: Vec<(u32, u32, GR)>,
}

#[derive(Clone, Debug)]
pub struct JetSpec {
    pub entries: Vec<JetEntry>,
}

impl JetSpec {
    pub fn satisfies_bound(&self, d: u32) -> bool {
        self.entries.iter().map(|e| e.order as u64 + 1).sum::<u64>() <= d as u64 + 1
    }
}

/// Monomials of degree `d` forms in graded order.
pub fn form_monomials(d: u32) -> Vec<Monomial> {
    let mut v = Vec::new();
    for a in 0..=d {
        for b in 0..=(d - a) {
            v.push(Monomial([d - a - b, a, b]));
        }
    }
    v.sort();
    v
}

fn binom(n: u32, k: u32) -> GR {
    if k > n {
        return GR::zero();
    }
    let mut r = num_bigint::BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    GR::from_real(num_rational::BigRational::from_integer(r))
}

/// Rows expressing the Taylor coefficients of order `<= order` at `p`, in the chart
/// where `p` has its first nonzero coordinate, as linear forms in the coefficients
/// of a degree-`d` form (columns follow `form_monomials(d)`).
pub fn jet_rows(p: &ProjectivePoint, order: u32, d: u32) -> Vec<(u32, u32, Vec<GR>)> {
    let k = p.coords.iter().position(|c| !c.is_zero()).unwrap();
    let q = p.normalized_at(k).unwrap();
    let rest: Vec<usize> = (0..3).filter(|&j| j != k).collect();
    let (u, v) = (&q.coords[rest[0]], &q.coords[rest[1]]);
    let mons = form_monomials(d);
    let upow: Vec<GR> = (0..=d).map(|e| u.pow(e)).collect();
    let vpow: Vec<GR> = (0..=d).map(|e| v.pow(e)).collect();
    let mut rows = Vec::new();
    for s in 0..=order {
        for a in 0..=s {
            let b = s - a;
            let row: Vec<GR> = mons
                .iter()
                .map(|m| {
                    let (i, j) = (m.0[rest[0]], m.0[rest[1]]);
                    if i < a || j < b {
                        return GR::zero();
                    }
                    &(&binom(i, a) * &binom(j, b))
                        * &(&upow[(i - a) as usize] * &vpow[(j - b) as usize])
                })
                .collect();
            rows.push((a, b, row));
        }
    }
    rows
}

/// Degree-`d` affine polynomial with the prescribed jets (points need `x0 != 0`).
pub fn prescribe_jets(spec: &JetSpec, d: u32) -> Result<PlanePoly> {
    if !spec.satisfies_bound(d) {
        return Err(Error::JetCondition(format!(
            "sum of (m_i + 1) exceeds d + 1 = {}",
            d + 1
        )));
    }
    let mons = form_monomials(d);
    let mut a: Matrix = Vec::new();
    let mut rhs = Vec::new();
    for e in &spec.entries {
        if e.point.coords[0].is_zero() {
            return Err(Error::Chart(
                "jet points must lie in the chart x0 != 0".into(),
            ));
        }
        for (i, j, row) in jet_rows(&e.point, e.order, d) {
            let val = e
                .jet
                .iter()
                .find(|(a, b, _)| *a == i && *b == j)
                .map(|t| t.2.clone())
                .unwrap_or_else(GR::zero);
            a.push(row);
            rhs.push(val);
        }
    }
    let rank = linalg::rank(&a);
    if rank < a.len() {
        return Err(Error::RankDeficient(format!(
            "jet system has rank {rank} < {} rows: {:?}",
            a.len(),
            a
        )));
    }
    // augmented rref, free variables zero
    let aug: Matrix = a
        .iter()
        .zip(&rhs)
        .map(|(r, v)| {
            r.iter()
                .cloned()
                .chain(std::iter::once(v.clone()))
                .collect()
        })
        .collect();
    let (red, pivots) = linalg::rref(&aug);
    let mut sol = vec![GR::zero(); mons.len()];
    for (r, &c) in pivots.iter().enumerate() {
        if c == mons.len() {
            return Err(Error::RankDeficient("inconsistent jet system".into()));
        }
        sol[c] = red[r][mons.len()].clone();
    }
    let form = PlanePoly::from_terms(Chart::Projective, mons.into_iter().zip(sol));
    form.dehomogenize(0)
}

fn univariate_in(p: &PlanePoly, var: usize) -> Vec<GR> {
    let n = p.degree_in(var) as usize;
    let mut u = vec![GR::zero(); n + 1];
    for (m, c) in p.terms() {
        u[m.0[var] as usize] += c;
    }
    trim(u)
}

/// Removes every factor `(x - a)` for `a` in `roots`; true if only a constant remains.
fn divides_out(mut g: Vec<GR>, roots: &[GR]) -> bool {
    for a in roots {
        loop {
            if g.len() <= 1 {
                break;
            }
            let lin = vec![-a, GR::one()];
            if rem(&g, &lin).is_empty() {
                g = quotient(&g, &lin);
            } else {
                break;
            }
        }
    }
    g.len() <= 1
}

fn quotient(a: &[GR], b: &[GR]) -> Vec<GR> {
    let mut r = trim(a.to_vec());
    let lb = b.last().unwrap().inv().unwrap();
    let mut q = vec![GR::zero(); r.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let f = r.last().unwrap() * &lb;
        let off = r.len() - b.len();
        for (k, c) in b.iter().enumerate() {
            r[off + k] = &r[off + k] - &(&f * c);
        }
        q[off] = f;
        r.pop();
        r = trim(r);
    }
    trim(q)
}

/// Exact check that every singular point of `f` is one of `expected`.
///
/// Affine singular points have x-coordinates among the roots of resultants of
/// the partial derivatives; for each candidate x the remaining univariate gcd is
/// matched against the expected y-coordinates. The line `x0 = 0` is checked
/// through the restrictions of the projective partials.
pub fn singular_points_confined(f: &PlanePoly, expected: &[ProjectivePoint]) -> Result<bool> {
    use crate::resultant::resultant;
    let f = crate::real_solve::projective_form(f)?;
    let grads: Vec<PlanePoly> = (0..3).map(|k| f.derivative(k)).collect();
    let aff = |p: &PlanePoly| p.dehomogenize(0);
    let fa = aff(&f)?;
    let fx = fa.derivative(0);
    let fy = fa.derivative(1);
    let finite: Vec<ProjectivePoint> = expected.iter().filter_map(|p| p.normalized_at(0)).collect();
    let xs: Vec<GR> = finite.iter().map(|p| p.coords[1].clone()).collect();
    let mut g: Vec<GR> = Vec::new();
    for (a, b) in [(&fx, &fy), (&fa, &fx), (&fa, &fy)] {
        if a.degree_in(1) == 0 && b.degree_in(1) == 0 {
            continue;
        }
        let r = univariate_in(&resultant(a, b, 1)?, 0);
        if !r.is_empty() {
            g = if g.is_empty() { r } else { gcd(&g, &r) };
        }
        if g.len() <= 1 && !g.is_empty() {
            break;
        }
    }
    if g.is_empty() {
        // All three in one variable or resultants vanish; fall back to the x-only system.
        let cands: Vec<Vec<GR>> = [&fa, &fx, &fy]
            .iter()
            .map(|p| univariate_in(p, 0))
            .collect();
        if fa.degree_in(1) > 0 || cands.iter().all(|c| c.is_empty()) {
            return Err(Error::Degenerate(
                "singular locus is not zero-dimensional".into(),
            ));
        }
        g = cands
            .into_iter()
            .filter(|c| !c.is_empty())
            .fold(
                Vec::new(),
                |acc, c| if acc.is_empty() { c } else { gcd(&acc, &c) },
            );
    }
    if !divides_out(g, &xs) {
        return Ok(false);
    }
    let mut seen: Vec<GR> = Vec::new();
    for a in &xs {
        if seen.contains(a) {
            continue;
        }
        seen.push(a.clone());
        let at = |p: &PlanePoly| -> Vec<GR> {
            let s = p.substitute(&[
                PlanePoly::constant(Chart::Affine, a.clone()),
                PlanePoly::var(Chart::Affine, 1),
            ]);
            univariate_in(&s, 1)
        };
        let parts = [at(&fa), at(&fx), at(&fy)];
        let mut h: Vec<GR> = Vec::new();
        for p in parts.iter().filter(|p| !p.is_empty()) {
            h = if h.is_empty() { p.clone() } else { gcd(&h, p) };
        }
        if h.is_empty() {
            return Err(Error::Degenerate("a vertical line is singular".into()));
        }
        let ys: Vec<GR> = finite
            .iter()
            .filter(|p| &p.coords[1] == a)
            .map(|p| p.coords[2].clone())
            .collect();
        if !divides_out(h, &ys) {
            return Ok(false);
        }
    }
    // x0 = 0: points [0 : 1 : t], then [0 : 0 : 1].
    let infinite: Vec<ProjectivePoint> = expected
        .iter()
        .filter(|p| p.coords[0].is_zero())
        .cloned()
        .collect();
    let ts: Vec<GR> = infinite
        .iter()
        .filter_map(|p| p.normalized_at(1))
        .map(|p| p.coords[2].clone())
        .collect();
    let line = [
        PlanePoly::zero(Chart::Affine),
        PlanePoly::constant(Chart::Affine, GR::one()),
        PlanePoly::var(Chart::Affine, 0),
    ];
    let mut h: Vec<GR> = Vec::new();
    for gk in &grads {
        let u = univariate_in(&gk.substitute(&line), 0);
        if !u.is_empty() {
            h = if h.is_empty() { u } else { gcd(&h, &u) };
        }
    }
    if h.is_empty() {
        return Err(Error::Degenerate("the line x0 = 0 is singular".into()));
    }
    if !divides_out(h, &ts) {
        return Ok(false);
    }
    let corner = ProjectivePoint::from_ints([(0, 0), (0, 0), (1, 0)])?;
    if grads.iter().all(|gk| gk.eval_point(&corner).is_zero())
        && !expected.iter().any(|p| p.same_point(&corner))
    {
        return Ok(false);
    }
    Ok(true)
}

fn trim(mut v: Vec<GR>) -> Vec<GR> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn derivative(u: &[GR]) -> Vec<GR> {
    trim(
        u.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &GR::from_int(k as i64))
            .collect(),
    )
}

fn rem(a: &[GR], b: &[GR]) -> Vec<GR> {
    let mut r = trim(a.to_vec());
    let lb = b.last().unwrap().inv().unwrap();
    while r.len() >= b.len() && !r.is_empty() {
        let f = r.last().unwrap() * &lb;
        let off = r.len() - b.len();
        for (k, c) in b.iter().enumerate() {
            r[off + k] = &r[off + k] - &(&f * c);
        }
        r.pop();
        r = trim(r);
    }
    r
}

/// Monic gcd over Q(i), low to high.
pub fn gcd(a: &[GR], b: &[GR]) -> Vec<GR> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        let inv = l.inv().unwrap();
        x = x.iter().map(|c| c * &inv).collect();
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PlanePoly {
        PlanePoly::parse(s).unwrap()
    }

    fn origin() -> ProjectivePoint {
        ProjectivePoint::from_ints([(1, 0), (0, 0), (0, 0)]).unwrap()
    }

    #[test]
    fn multiplicities() {
        assert_eq!(multiplicity_at(&p("x*y"), &origin()).unwrap(), 2);
        assert_eq!(multiplicity_at(&p("y^2 - x^3"), &origin()).unwrap(), 2);
        let six = p("x*y*(x - y)*(x + y)*(x - 2*y)*(x + 3*y)");
        assert_eq!(multiplicity_at(&six, &origin()).unwrap(), 6);
        assert!(is_ordinary(&six, &origin()).unwrap());
        assert!(matches!(
            multiplicity_at(&p("x*y - 1"), &origin()),
            Err(Error::NotOnCurve(_))
        ));
    }

    #[test]
    fn ordinariness() {
        assert!(is_ordinary(&p("x*y"), &origin()).unwrap());
        assert!(!is_ordinary(&p("y^2 - x^3"), &origin()).unwrap());
        // node at an imaginary point
        let z = ProjectivePoint::from_ints([(1, 0), (0, 1), (0, 0)]).unwrap();
        assert!(is_ordinary(&p("(x - i)*y + y^3 + (x - i)^3"), &z).unwrap());
    }

    #[test]
    fn profiles() {
        let axis = p("x2");
        let f = p("x2^2*x0^3 + x1^3*x2*x0 - x1^4*x0 - x1^5");
        assert!(tangential_branch_profile(&f, &origin(), &axis, 2).unwrap());
        let cusp = p("x2^2*x0 - x1^3");
        assert!(!tangential_branch_profile(&cusp, &origin(), &axis, 2).unwrap());
    }

    #[test]
    fn counts() {
        assert_eq!(constraint_count(1), 2);
        assert_eq!(constraint_count(2), 6);
        assert_eq!(constraint_count(6), 42);
    }

    #[test]
    fn jets() {
        let v = GR::from_ints(3, -1);
        let spec = JetSpec {
            entries: vec![JetEntry {
                point: origin(),
                order: 0,
                jet: vec![(0, 0, v.clone())],
            }],
        };
        assert_eq!(
            prescribe_jets(&spec, 0).unwrap(),
            PlanePoly::constant(Chart::Affine, v)
        );
        let spec = JetSpec {
            entries: vec![JetEntry {
                point: origin(),
                order: 1,
                jet: vec![(1, 0, GR::one())],
            }],
        };
        assert_eq!(prescribe_jets(&spec, 1).unwrap(), p("x"));
        let q = ProjectivePoint::from_ints([(1, 0), (2, 0), (-1, 1)]).unwrap();
        let spec = JetSpec {
            entries: vec![
                JetEntry {
                    point: origin(),
                    order: 1,
                    jet: vec![(0, 1, GR::one())],
                },
                JetEntry {
                    point: q.clone(),
                    order: 1,
                    jet: vec![(0, 0, GR::from_int(5))],
                },
            ],
        };
        let f = prescribe_jets(&spec, 3).unwrap();
        let h = f.homogenize(3).unwrap();
        assert_eq!(h.eval_point(&q), GR::from_int(5));
        assert_eq!(f.derivative(1).eval(&[GR::zero(), GR::zero()]), GR::one());
        let bad = JetSpec {
            entries: vec![
                JetEntry {
                    point: origin(),
                    order: 2,
                    jet: vec![],
                },
                JetEntry {
                    point: q,
                    order: 2,
                    jet: vec![],
                },
            ],
        };
        assert!(matches!(
            prescribe_jets(&bad, 3),
            Err(Error::JetCondition(_))
        ));
    }

    #[test]
    fn singular_locus() {
        let f = p("x0*x2^2 - x1^3 - x0*x1^2");
        assert!(singular_points_confined(&f, &[origin()]).unwrap());
        assert!(!singular_points_confined(&f, &[]).unwrap());
        let two = p("x1*x2*(x1 + x2 - x0)");
        let a = ProjectivePoint::from_ints([(1, 0), (0, 0), (1, 0)]).unwrap();
        let b = ProjectivePoint::from_ints([(1, 0), (1, 0), (0, 0)]).unwrap();
        assert!(singular_points_confined(&two, &[origin(), a.clone(), b.clone()]).unwrap());
        assert!(!singular_points_confined(&two, &[origin(), a]).unwrap());
        // singular point at infinity
        let inf = p("x1*x2^2 - x0^3");
        let c = ProjectivePoint::from_ints([(0, 0), (1, 0), (0, 0)]).unwrap();
        assert!(!singular_points_confined(&inf, &[]).unwrap());
        assert!(singular_points_confined(&inf, &[c]).unwrap());
    }
}
