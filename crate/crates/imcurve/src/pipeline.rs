//! Stage drivers: the seed, the doubling round (squaring, Cremona, patchwork,
//! squaring), the n-round, and the conjugate-pair perturbation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dyadic::{DInterval, Dyadic};
use crate::gaussian::GaussianRational as GR;
use crate::local::{self, SingularityKind, SingularityRecord};
use crate::patchwork::{self, ViroFamily};
use crate::poly::{Chart, Monomial, PlanePoly, ProjectivePoint};
use crate::real_solve::{self, chart_vars, Census, IsolatingBox};
use crate::transforms::{self, RealFrame};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    Seed,
    Squared,
    Cremona,
    Patchworked,
    Doubled,
    Perturbed,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Seed => "seed",
            Stage::Squared => "squared",
            Stage::Cremona => "cremona",
            Stage::Patchworked => "patchworked",
            Stage::Doubled => "doubled",
            Stage::Perturbed => "perturbed",
        }
    }

    pub fn parse(s: &str) -> Result<Stage> {
        Ok(match s {
            "seed" => Stage::Seed,
            "squared" => Stage::Squared,
            "cremona" => Stage::Cremona,
            "patchworked" => Stage::Patchworked,
            "doubled" => Stage::Doubled,
            "perturbed" => Stage::Perturbed,
            _ => return Err(Error::Parse(format!("unknown stage {s}"))),
        })
    }
}

/// How the census of a certificate was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusStatus {
    /// Full resultant-based isolation.
    Exact,
    /// Certified boxes and exact points whose intersection weights reach the Bezout cap.
    Predicted,
    /// Uncertified predicted boxes only.
    Deferred,
    /// Real curves (the perturbed stage) have no finite census.
    NotApplicable,
}

impl CensusStatus {
    pub fn name(self) -> &'static str {
        match self {
            CensusStatus::Exact => "exact",
            CensusStatus::Predicted => "predicted",
            CensusStatus::Deferred => "deferred",
            CensusStatus::NotApplicable => "n/a",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "exact" => CensusStatus::Exact,
            "predicted" => CensusStatus::Predicted,
            "deferred" => CensusStatus::Deferred,
            "n/a" => CensusStatus::NotApplicable,
            _ => return Err(Error::Parse(format!("unknown census status {s}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Certified oval around one real point of `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct OvalWitness {
    pub point: IsolatingBox,
    /// Upper bound of `g_eps` on the point's box (negative).
    pub center_bound: BigRational,
    /// Circle center, in the chart of `point`.
    pub center: (BigRational, BigRational),
    /// Lower bound of `g_eps` over the certified circle (positive).
    pub circle_bound: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OvalReport {
    pub eps: BigRational,
    pub radius: BigRational,
    pub arcs: usize,
    pub witnesses: Vec<OvalWitness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveCertificate {
    pub stage: Stage,
    pub poly: PlanePoly,
    pub degree: u32,
    pub census: Census,
    pub census_status: CensusStatus,
    pub singularities: Vec<SingularityRecord>,
    /// The singular points listed are all singular points of the curve.
    pub singular_locus_complete: bool,
    pub imaginary: bool,
    pub maximal: bool,
    pub parent: Option<String>,
    pub params: BTreeMap<String, String>,
    pub ovals: Option<OvalReport>,
    pub log: Vec<Check>,
}

impl CurveCertificate {
    pub fn digest(&self) -> String {
        crate::certificate::digest(self)
    }

    pub fn tracked(&self) -> impl Iterator<Item = &SingularityRecord> {
        self.singularities.iter().filter(|r| !r.center.is_real())
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) -> Result<()> {
        let detail = detail.into();
        self.log.push(Check::new(name, passed, detail.clone()));
        if passed {
            Ok(())
        } else {
            Err(Error::Internal(format!("{name}: {detail}")).at_stage(self.stage.name()))
        }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub seed: u64,
    /// Certify censuses above degree 12 as well.
    pub deep_verify: bool,
    pub refine_bits: i64,
    /// Initial `t = 2^-t0_exp` for the patchwork.
    pub t0_exp: u32,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            seed: 42,
            deep_verify: false,
            refine_bits: real_solve::DEFAULT_REFINE_BITS,
            t0_exp: 8,
        }
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn base_cert(stage: Stage, poly: PlanePoly, parent: Option<&CurveCertificate>) -> CurveCertificate {
    let degree = poly.degree();
    CurveCertificate {
        stage,
        imaginary: poly.is_imaginary(),
        poly,
        degree,
        census: Census::new(Vec::new(), (degree * degree) as usize),
        census_status: CensusStatus::Deferred,
        singularities: Vec::new(),
        singular_locus_complete: false,
        maximal: false,
        parent: parent.map(|p| p.digest()),
        params: BTreeMap::new(),
        ovals: None,
        log: Vec::new(),
    }
}

fn set_census(cert: &mut CurveCertificate, census: Census, status: CensusStatus) {
    cert.maximal = matches!(status, CensusStatus::Exact | CensusStatus::Predicted)
        && census.count == census.cap;
    cert.census = census;
    cert.census_status = status;
}

// ---------------------------------------------------------------- seed

pub fn seed_nodal_cubic(seed: u64) -> Result<CurveCertificate> {
    let s = crate::seed::seed_nodal_cubic(seed).map_err(|e| e.at_stage("seed"))?;
    let mut cert = base_cert(Stage::Seed, s.poly.clone(), None);
    cert.params.insert("seed".into(), seed.to_string());
    cert.params
        .insert("attempts".into(), s.attempts.to_string());
    cert.check(
        "imaginary",
        cert.imaginary,
        "coefficients are not a multiple of a real form",
    )?;
    let transversal = s.census.transversal.iter().all(|&t| t);
    set_census(&mut cert, s.census.census.clone(), CensusStatus::Exact);
    cert.check(
        "census",
        cert.census.count == 9,
        format!("{} real points, cap 9", cert.census.count),
    )?;
    cert.check(
        "transversal",
        transversal,
        "every real point is a transversal zero of the real and imaginary parts",
    )?;
    cert.singularities = s.singularities.clone();
    cert.singular_locus_complete = true;
    cert.check(
        "node",
        s.singularities[0].kind == SingularityKind::Ordinary,
        format!("ordinary double point at {}", s.node),
    )?;
    cert.check(
        "singular locus",
        true,
        "the node is the only singular point",
    )?;
    Ok(cert)
}

// ---------------------------------------------------------------- frames and boxes

/// Closed rational interval.
#[derive(Clone, Debug, PartialEq)]
struct RI(BigRational, BigRational);

impl RI {
    fn point(a: BigRational) -> Self {
        RI(a.clone(), a)
    }
    fn add(&self, o: &RI) -> RI {
        RI(&self.0 + &o.0, &self.1 + &o.1)
    }
    fn scale(&self, c: &BigRational) -> RI {
        let (a, b) = (&self.0 * c, &self.1 * c);
        if a <= b {
            RI(a, b)
        } else {
            RI(b, a)
        }
    }
    fn contains_zero(&self) -> bool {
        !self.0.is_positive() && !self.1.is_negative()
    }
    fn div(&self, o: &RI) -> Option<RI> {
        if o.contains_zero() {
            return None;
        }
        let c = [
            &self.0 / &o.0,
            &self.0 / &o.1,
            &self.1 / &o.0,
            &self.1 / &o.1,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Some(RI(lo, hi))
    }
}

/// Encloses the chart-0 coordinates of each box's point after the frame.
fn map_boxes(boxes: &[IsolatingBox], frame: &RealFrame) -> Result<Vec<(RI, RI)>> {
    let m = &frame.matrix;
    boxes
        .iter()
        .map(|b| {
            let (a, c) = chart_vars(b.chart);
            let mut p = [RI::point(q(0)), RI::point(q(0)), RI::point(q(0))];
            p[b.chart] = RI::point(q(1));
            p[a] = RI(b.x.0.clone(), b.x.1.clone());
            p[c] = RI(b.y.0.clone(), b.y.1.clone());
            let row =
                |r: usize| (0..3).fold(RI::point(q(0)), |acc, j| acc.add(&p[j].scale(&m[r][j])));
            let (q0, q1, q2) = (row(0), row(1), row(2));
            match (q1.div(&q0), q2.div(&q0)) {
                (Some(x), Some(y)) => Ok((x, y)),
                _ => Err(Error::Degenerate(
                    "a real point lies on the line x0 = 0 of the frame".into(),
                )),
            }
        })
        .collect()
}

fn shift_frame(c1: &BigRational, c2: &BigRational) -> RealFrame {
    let mut m = RealFrame::identity().matrix;
    m[1][0] = c1.clone();
    m[2][0] = c2.clone();
    RealFrame::new(m).expect("unimodular")
}

fn frame_params(cert: &mut CurveCertificate, key: &str, f: &RealFrame) {
    cert.params.insert(key.into(), f.entries().join(" "));
}

/// `w = p + i*Im(u)/(2p)` and the real `c` with `w^2 = u + c`.
fn square_at(u: &GR, p: &BigRational) -> (BigRational, GR) {
    let qv = u.im() / (q(2) * p);
    let c = p * p - &qv * &qv - u.re();
    (c, GR::new(p.clone(), qv))
}

/// `square_at` for the least `p` in `(1/8)Z_{>0}` with `c >= cmin`.
fn square_shift(u: &GR, cmin: &BigRational) -> (BigRational, GR) {
    let mut k = 1i64;
    loop {
        let p = BigRational::new(k.into(), 8.into());
        let (c, w) = square_at(u, &p);
        if &c >= cmin {
            return (c, w);
        }
        k += if k < 64 { 1 } else { k / 8 };
    }
}

fn box_centers(boxes: &[IsolatingBox]) -> Vec<[f64; 3]> {
    boxes
        .iter()
        .map(|b| {
            let (x, y) = b.center_f64();
            let (a, c) = chart_vars(b.chart);
            let mut p = [0.0; 3];
            p[b.chart] = 1.0;
            p[a] = x;
            p[c] = y;
            p
        })
        .collect()
}

fn chart0_f64(frame: &RealFrame, pts: &[[f64; 3]]) -> Option<Vec<(f64, f64)>> {
    pts.iter()
        .map(|p| {
            let w = frame.apply_f64(*p);
            let n = w[0].abs().max(w[1].abs()).max(w[2].abs());
            (w[0].abs() > 1e-9 * n).then(|| (w[1] / w[0], w[2] / w[0]))
        })
        .collect()
}

fn pow2_near(x: f64) -> BigRational {
    let e = if x > 0.0 && x.is_finite() {
        x.log2().round().clamp(-40.0, 40.0) as i64
    } else {
        0
    };
    Dyadic::pow2(e).to_rational()
}

const SHIFT_FACTORS: [f64; 4] = [1.0, 0.25, 1.0 / 16.0, 1.0 / 64.0];

/// Margins `(dx, dy)` left between the real points and the coordinate axes, with
/// the spread score of the squared configuration.
fn best_margins(pts: &[(f64, f64)]) -> (f64, BigRational, BigRational) {
    let (mut lx, mut hx, mut ly, mut hy) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for &(x, y) in pts {
        lx = lx.min(x);
        hx = hx.max(x);
        ly = ly.min(y);
        hy = hy.max(y);
    }
    let (sx, sy) = ((hx - lx).max(1e-6), (hy - ly).max(1e-6));
    let mut best = (f64::NEG_INFINITY, q(1), q(1));
    for fx in SHIFT_FACTORS {
        for fy in SHIFT_FACTORS {
            let (dx, dy) = (pow2_near(sx * fx), pow2_near(sy * fy));
            let (ex, ey) = (
                crate::gaussian::ratio_to_f64(&dx),
                crate::gaussian::ratio_to_f64(&dy),
            );
            // the preimages are (±u, ±v); reflections are at least 2u or 2v apart
            let sq: Vec<(f64, f64)> = pts
                .iter()
                .map(|&(x, y)| ((x - lx + ex).sqrt(), (y - ly + ey).sqrt()))
                .collect();
            let sep = real_solve::separations(&sq)
                .into_iter()
                .chain(sq.iter().flat_map(|&(u, v)| [2.0 * u, 2.0 * v]))
                .fold(f64::INFINITY, f64::min);
            let ext = sq.iter().fold(0.0f64, |m, p| m.max(p.0).max(p.1));
            let sc = sep / (1.0 + ext);
            if sc > best.0 {
                best = (sc, dx, dy);
            }
        }
    }
    best
}

/// Exact shift `x -> x + c` with `lo + c >= margin` for all lower bounds.
fn margin_shift(lows: impl Iterator<Item = BigRational>, margin: &BigRational) -> BigRational {
    let min = lows.min().unwrap_or_else(|| q(0));
    Dyadic::ceil_rational(&-min, 24).to_rational() + margin
}

fn small_vectors() -> Vec<[i64; 3]> {
    let mut v = Vec::new();
    for a in -1..=1 {
        for b in -1..=1 {
            for c in -1..=1 {
                if (a, b, c) != (0, 0, 0) {
                    v.push([a, b, c]);
                }
            }
        }
    }
    v
}

fn frame_from_rows(rows: [[BigRational; 3]; 3]) -> Option<RealFrame> {
    RealFrame::new(rows).ok()
}

fn int_row(r: [i64; 3]) -> [BigRational; 3] {
    [q(r[0]), q(r[1]), q(r[2])]
}

struct FrameCandidate {
    score: f64,
    frame: RealFrame,
    margins: (BigRational, BigRational),
    roots: Vec<GR>,
}

/// Shifts a scored frame into the positive quadrant, exactly. Fails when a real
/// point box meets the line `x0 = 0` of the frame.
fn finish_frame(c: &FrameCandidate, boxes: &[IsolatingBox]) -> Option<RealFrame> {
    let mapped = map_boxes(boxes, &c.frame).ok()?;
    let c1 = margin_shift(mapped.iter().map(|(x, _)| x.0.clone()), &c.margins.0);
    let c2 = margin_shift(mapped.iter().map(|(_, y)| y.0.clone()), &c.margins.1);
    Some(shift_frame(&c1, &c2).after(&c.frame))
}

/// Frame for a squaring ramified along the line through `z` and `conj(z)`: that line
/// becomes `x0 = 0`, `z` becomes `[0 : w^2 : 1]`, and the real points move into the
/// positive quadrant of the chart `x0 = 1`. Among small integer completions the one
/// keeping the squared real points best separated is used.
fn ramified_frame(z: &ProjectivePoint, boxes: &[IsolatingBox]) -> Result<(RealFrame, GR)> {
    let l = transforms::line_through_conj_pair(z)?;
    let lc: [BigRational; 3] = {
        let c = transforms::line_coeffs(&l);
        [c[0].re().clone(), c[1].re().clone(), c[2].re().clone()]
    };
    let pts = box_centers(boxes);
    let lf = lc.clone().map(|v| crate::gaussian::ratio_to_f64(&v));
    let zf: Vec<C64> = z
        .coords
        .iter()
        .map(|c| {
            let (a, b) = c.to_c64();
            C64::new(a, b)
        })
        .collect();
    let zmax = zf.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    let zf: Vec<C64> = zf.iter().map(|c| c / zmax).collect();
    // scored in f64 first; only the best few are built exactly
    let mut pre: Vec<(f64, [i64; 3], [i64; 3], i64, BigRational, BigRational)> = Vec::new();
    let vecs = small_vectors();
    for r1 in &vecs {
        for r2 in &vecs {
            let rows = [lf, r1.map(|v| v as f64), r2.map(|v| v as f64)];
            let det = rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
                - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
                + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]);
            if det == 0.0 {
                continue;
            }
            let img = |r: &[f64; 3]| (0..3).fold(C64::new(0.0, 0.0), |acc, j| acc + zf[j] * r[j]);
            let (z1, z2) = (img(&rows[1]), img(&rows[2]));
            if z2.norm() < 1e-12 {
                continue;
            }
            let a = z1 / z2;
            for p in 1..=3i64 {
                let pf = p as f64;
                let qv = a.im / (2.0 * pf);
                let c = pf * pf - qv * qv - a.re;
                let mut m = rows;
                for j in 0..3 {
                    m[1][j] += c * m[2][j];
                }
                let mapped: Option<Vec<(f64, f64)>> = pts
                    .iter()
                    .map(|p| {
                        let w: Vec<f64> = (0..3)
                            .map(|k| (0..3).map(|j| m[k][j] * p[j]).sum())
                            .collect();
                        let n = w[0].abs().max(w[1].abs()).max(w[2].abs());
                        (w[0].abs() > 1e-9 * n).then(|| (w[1] / w[0], w[2] / w[0]))
                    })
                    .collect();
                let Some(mapped) = mapped else { continue };
                let (score, dx, dy) = best_margins(&mapped);
                pre.push((score, *r1, *r2, p, dx, dy));
            }
        }
    }
    pre.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut cands: Vec<FrameCandidate> = Vec::new();
    for (score, r1, r2, p, dx, dy) in pre.into_iter().take(16) {
        let Some(m0) = frame_from_rows([lc.clone(), int_row(r1), int_row(r2)]) else {
            continue;
        };
        let zz = m0.apply_point(z);
        if zz.coords[2].is_zero() {
            continue;
        }
        let a = &zz.coords[1] * &zz.coords[2].inv().unwrap();
        let (c, w) = square_at(&a, &q(p));
        let mut rows = m0.matrix.clone();
        for j in 0..3 {
            rows[1][j] = &rows[1][j] + &(&c * &rows[2][j]);
        }
        let Some(n) = frame_from_rows(rows) else {
            continue;
        };
        cands.push(FrameCandidate {
            score,
            frame: n,
            margins: (dx, dy),
            roots: vec![w],
        });
    }
    for c in &cands {
        let Some(frame) = finish_frame(c, boxes) else {
            continue;
        };
        let w = c.roots[0].clone();
        let zz = frame.apply_point(z).normalized_at(2).unwrap();
        if !zz.coords[0].is_zero() || &w * &w != zz.coords[1] {
            return Err(Error::Internal("ramified frame misplaces the point".into()));
        }
        return Ok((frame, w));
    }
    Err(Error::SearchExhausted(
        "no frame keeps the real points off the branch line".into(),
    ))
}

/// Frame for an unramified squaring: `z` becomes `[1 : w1^2 : w2^2]` off the coordinate
/// triangle and the real points move into the positive quadrant.
fn unramified_frame(z: &ProjectivePoint, boxes: &[IsolatingBox]) -> Result<(RealFrame, GR, GR)> {
    let pts = box_centers(boxes);
    let e = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let pairs = [(1, 2), (2, 1), (0, 2), (0, 1), (1, 0), (2, 0)];
    let mut cands: Vec<FrameCandidate> = Vec::new();
    for r0 in small_vectors() {
        for (a, b) in pairs {
            let Some(m0) = frame_from_rows([int_row(r0), int_row(e[a]), int_row(e[b])]) else {
                continue;
            };
            let zp = m0.apply_point(z);
            if zp.coords[0].is_zero() {
                continue;
            }
            let Some(mapped) = chart0_f64(&m0, &pts) else {
                continue;
            };
            let (_, dx, dy) = best_margins(&mapped);
            let zn = zp.normalized_at(0).unwrap();
            let minx = mapped.iter().fold(f64::INFINITY, |m, p| m.min(p.0));
            let miny = mapped.iter().fold(f64::INFINITY, |m, p| m.min(p.1));
            let need =
                |lo: f64, d: &BigRational| BigRational::from_float(-lo).unwrap_or_else(|| q(0)) + d;
            let (c1, w1) = square_shift(&zn.coords[1], &need(minx, &dx));
            let (c2, w2) = square_shift(&zn.coords[2], &need(miny, &dy));
            let (f1, f2) = (
                crate::gaussian::ratio_to_f64(&c1),
                crate::gaussian::ratio_to_f64(&c2),
            );
            let mut sq = Vec::with_capacity(4 * mapped.len());
            for &(x, y) in &mapped {
                let (u, v) = ((x + f1).max(0.0).sqrt(), (y + f2).max(0.0).sqrt());
                sq.extend([(u, v), (u, -v), (-u, v), (-u, -v)]);
            }
            let frame = shift_frame(&c1, &c2).after(&m0);
            cands.push(FrameCandidate {
                score: real_solve::spread_score(&sq),
                frame,
                margins: (q(0), q(0)),
                roots: vec![w1, w2],
            });
        }
    }
    cands.sort_by(|a, b| b.score.total_cmp(&a.score));
    for c in cands.iter().take(16) {
        let Ok(mapped) = map_boxes(boxes, &c.frame) else {
            continue;
        };
        if !mapped
            .iter()
            .all(|(x, y)| x.0.is_positive() && y.0.is_positive())
        {
            continue;
        }
        let (w1, w2) = (c.roots[0].clone(), c.roots[1].clone());
        let zz = c.frame.apply_point(z).normalized_at(0).unwrap();
        if &w1 * &w1 != zz.coords[1] || &w2 * &w2 != zz.coords[2] || w1.is_zero() || w2.is_zero() {
            return Err(Error::Internal(
                "unramified frame misplaces the point".into(),
            ));
        }
        return Ok((c.frame.clone(), w1, w2));
    }
    Err(Error::SearchExhausted(
        "no frame moves the point off the coordinate triangle".into(),
    ))
}

/// All preimages of `p` under `[x0^2 : x1^2 : x2^2]`, when they are Q(i)-rational.
pub fn squaring_preimages(p: &ProjectivePoint) -> Option<Vec<ProjectivePoint>> {
    let k = (0..3).rev().find(|&k| !p.coords[k].is_zero())?;
    let pn = p.normalized_at(k)?;
    let roots: Vec<GR> = (0..3)
        .map(|j| pn.coords[j].sqrt())
        .collect::<Option<Vec<_>>>()?;
    let others: Vec<usize> = (0..3).filter(|&j| j != k).collect();
    let mut out: Vec<ProjectivePoint> = Vec::new();
    for s in 0..4 {
        let mut c = roots.clone();
        if s & 1 == 1 {
            c[others[0]] = -&c[others[0]];
        }
        if s & 2 == 2 {
            c[others[1]] = -&c[others[1]];
        }
        let pt = ProjectivePoint::new([c[0].clone(), c[1].clone(), c[2].clone()]).ok()?;
        if !out.iter().any(|o| o.same_point(&pt)) {
            out.push(pt);
        }
    }
    Some(out)
}

/// Local analysis of a preimage: tangential to the line through the point and a
/// vertex whose coordinate vanishes, else ordinary/other.
fn analyze_preimage(f: &PlanePoly, p: &ProjectivePoint) -> Result<SingularityRecord> {
    let plain = local::analyze(f, p, None)?;
    if plain.kind == SingularityKind::Ordinary || plain.multiplicity < 2 {
        return Ok(plain);
    }
    for k in 0..3 {
        if !p.coords[k].is_zero() {
            continue;
        }
        let mut e: [GR; 3] = Default::default();
        e[k] = GR::one();
        let line = PlanePoly::linear(&p.cross(&ProjectivePoint { coords: e }));
        let rec = local::analyze(f, p, Some((&line, plain.multiplicity)))?;
        if matches!(rec.kind, SingularityKind::Tangential { .. }) {
            return Ok(rec);
        }
    }
    Ok(plain)
}

fn predictions_after_squaring(mapped: &[(RI, RI)]) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(mapped.len() * 4);
    for (x, y) in mapped {
        let cx = crate::gaussian::ratio_to_f64(&((&x.0 + &x.1) / q(2))).sqrt();
        let cy = crate::gaussian::ratio_to_f64(&((&y.0 + &y.1) / q(2))).sqrt();
        for (sx, sy) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            out.push((sx * cx, sy * cy));
        }
    }
    out
}

fn deferred_boxes(preds: &[(f64, f64)]) -> Census {
    let boxes = preds
        .iter()
        .map(|&(x, y)| {
            let r = Dyadic::pow2(-30);
            let cx = Dyadic::from_f64(x).truncate(64);
            let cy = Dyadic::from_f64(y).truncate(64);
            IsolatingBox::from_dyadic(
                0,
                &DInterval::new(&cx - &r, &cx + &r),
                &DInterval::new(&cy - &r, &cy + &r),
            )
        })
        .collect();
    Census::new(boxes, 0)
}

/// Census of a new curve from predicted chart-0 points (and exact real points):
/// resultants up to degree 6, certified predictions up to degree 12 (or always when
/// `deep`), deferred beyond.
fn census_for(
    cert: &mut CurveCertificate,
    preds: &[(f64, f64)],
    exact: &[ProjectivePoint],
    opts: &PipelineOptions,
) -> Result<()> {
    let d = cert.degree as usize;
    let cap = d * d;
    if d <= 6 {
        let detail = real_solve::real_points_detailed(&cert.poly, opts.refine_bits)?;
        set_census(cert, detail.census, CensusStatus::Exact);
        let c = cert.census.count;
        return cert.check(
            "census",
            c == preds.len() + exact.len(),
            format!("{c} real points by resultants, cap {cap}"),
        );
    }
    if d <= 12 || opts.deep_verify {
        let pc = real_solve::census_from_predictions(&cert.poly, preds, exact)?;
        let detail = format!(
            "{} certified points, intersection bound {} of {}, parts coprime: {}, failed predictions: {}",
            pc.census.count,
            pc.bound,
            cap,
            pc.coprime,
            pc.failed.len()
        );
        let complete = pc.complete;
        set_census(cert, pc.census, CensusStatus::Predicted);
        return cert.check("census", complete, detail);
    }
    let mut c = deferred_boxes(preds);
    c.cap = cap;
    set_census(cert, c, CensusStatus::Deferred);
    cert.log.push(Check::new(
        "census",
        true,
        format!("deferred: {} predicted points, cap {cap}", preds.len()),
    ));
    Ok(())
}

// ---------------------------------------------------------------- squaring stages

/// Squaring ramified along the line through the first tracked point and its
/// conjugate.
pub fn ramified_squaring(
    parent: &CurveCertificate,
    stage: Stage,
    opts: &PipelineOptions,
) -> Result<CurveCertificate> {
    let tag = stage.name();
    let z = parent
        .tracked()
        .next()
        .ok_or_else(|| Error::Degenerate("no imaginary singular point".into()).at_stage(tag))?
        .clone();
    let (frame, w) =
        ramified_frame(&z.center, &parent.census.boxes).map_err(|e| e.at_stage(tag))?;
    let moved = transforms::apply_frame(&parent.poly, &frame).map_err(|e| e.at_stage(tag))?;
    let poly = transforms::squaring_pullback(&moved).map_err(|e| e.at_stage(tag))?;
    let mut cert = base_cert(stage, poly, Some(parent));
    frame_params(&mut cert, "frame", &frame);
    cert.params.insert("square_root".into(), w.to_string());
    cert.check("imaginary", cert.imaginary, "imaginary after squaring")?;
    let mapped = map_boxes(&parent.census.boxes, &frame)?;
    let positive = mapped
        .iter()
        .all(|(x, y)| x.0.is_positive() && y.0.is_positive());
    cert.check(
        "positive quadrant",
        positive,
        "real points lie in x1/x0 > 0, x2/x0 > 0 and off x0 = 0",
    )?;
    let preds = predictions_after_squaring(&mapped);
    census_for(&mut cert, &preds, &[], opts)?;
    let zs = [
        ProjectivePoint::new([GR::zero(), w.clone(), GR::one()])?,
        ProjectivePoint::new([GR::zero(), -&w, GR::one()])?,
    ];
    for p in &zs {
        let rec = analyze_preimage(&cert.poly, p)?;
        let expect = match &z.kind {
            SingularityKind::Ordinary => {
                matches!(rec.kind, SingularityKind::Tangential { branches, .. } if branches == z.multiplicity)
            }
            SingularityKind::Tangential { branches, .. } => {
                rec.kind == SingularityKind::Ordinary && rec.multiplicity == 2 * branches
            }
            SingularityKind::Other => true,
        };
        cert.check(
            "singularity",
            expect,
            format!(
                "{} at {} of multiplicity {}",
                rec.kind_name(),
                p,
                rec.multiplicity
            ),
        )?;
        cert.singularities.push(rec);
    }
    follow_other_points(parent, &mut cert, &frame, &z.center)?;
    Ok(cert)
}

/// Follows further tracked points whose preimages are rational.
fn follow_other_points(
    parent: &CurveCertificate,
    cert: &mut CurveCertificate,
    frame: &RealFrame,
    main: &ProjectivePoint,
) -> Result<()> {
    let mut lost = 0;
    for r in parent.tracked().filter(|r| !r.center.same_point(main)) {
        match squaring_preimages(&frame.apply_point(&r.center)) {
            Some(ps) => {
                for p in ps {
                    let rec = analyze_preimage(&cert.poly, &p)?;
                    cert.singularities.push(rec);
                }
            }
            None => lost += 1,
        }
    }
    if lost > 0 {
        cert.log.push(Check::new(
            "untracked",
            true,
            format!("{lost} singular points have irrational preimages and are not followed"),
        ));
    }
    Ok(())
}

pub fn square_stage(parent: &CurveCertificate, opts: &PipelineOptions) -> Result<CurveCertificate> {
    ramified_squaring(parent, Stage::Squared, opts)
}

pub fn double_stage(parent: &CurveCertificate, opts: &PipelineOptions) -> Result<CurveCertificate> {
    ramified_squaring(parent, Stage::Doubled, opts)
}

/// An unramified squaring; every followed singular point has four preimages
/// of the same type, and the census quadruples.
pub fn n_round(parent: &CurveCertificate, opts: &PipelineOptions) -> Result<CurveCertificate> {
    let tag = "n-round";
    let z = parent
        .tracked()
        .next()
        .ok_or_else(|| Error::Degenerate("no imaginary singular point".into()).at_stage(tag))?
        .clone();
    let (frame, w1, w2) =
        unramified_frame(&z.center, &parent.census.boxes).map_err(|e| e.at_stage(tag))?;
    let moved = transforms::apply_frame(&parent.poly, &frame).map_err(|e| e.at_stage(tag))?;
    let poly = transforms::squaring_pullback(&moved).map_err(|e| e.at_stage(tag))?;
    let mut cert = base_cert(Stage::Squared, poly, Some(parent));
    cert.params.insert("mode".into(), "unramified".into());
    frame_params(&mut cert, "frame", &frame);
    cert.check("imaginary", cert.imaginary, "imaginary after squaring")?;
    let mapped = map_boxes(&parent.census.boxes, &frame)?;
    let positive = mapped
        .iter()
        .all(|(x, y)| x.0.is_positive() && y.0.is_positive());
    cert.check(
        "positive quadrant",
        positive,
        "real points lie in the open positive quadrant",
    )?;
    let preds = predictions_after_squaring(&mapped);
    census_for(&mut cert, &preds, &[], opts)?;
    let pts =
        squaring_preimages(&ProjectivePoint::new([GR::one(), &w1 * &w1, &w2 * &w2])?).unwrap();
    for p in &pts {
        let rec = analyze_preimage(&cert.poly, p)?;
        let same = rec.multiplicity == z.multiplicity
            && (rec.kind == z.kind || z.kind == SingularityKind::Other);
        let same = same
            || (matches!(z.kind, SingularityKind::Tangential { .. })
                && rec.multiplicity == z.multiplicity);
        cert.check(
            "singularity",
            same,
            format!(
                "{} at {} of multiplicity {}",
                rec.kind_name(),
                p,
                rec.multiplicity
            ),
        )?;
        cert.singularities.push(rec);
    }
    follow_other_points(parent, &mut cert, &frame, &z.center)?;
    Ok(cert)
}

// ---------------------------------------------------------------- Cremona

pub const CONIC_TRIALS: usize = 400;

pub fn cremona_stage(
    parent: &CurveCertificate,
    opts: &PipelineOptions,
) -> Result<CurveCertificate> {
    let tag = "cremona";
    let (z1, l1, m) = parent
        .tracked()
        .find_map(|r| match &r.kind {
            SingularityKind::Tangential { branches, line } => {
                Some((r.center.clone(), line.clone(), *branches))
            }
            _ => None,
        })
        .ok_or_else(|| {
            Error::Degenerate("no tangential point to transform".into()).at_stage(tag)
        })?;
    let pts: Vec<[f64; 3]> = parent
        .census
        .boxes
        .iter()
        .map(|b| {
            let c = b.center_point();
            let v: Vec<f64> = c
                .coords
                .iter()
                .map(|x| crate::gaussian::ratio_to_f64(x.re()))
                .collect();
            [v[0], v[1], v[2]]
        })
        .collect();
    let d = parent.degree / 2;
    let mut last = None;
    for attempt in 0..4u64 {
        let choice = transforms::tangent_conic_frame_with(
            &z1,
            &l1,
            opts.seed.wrapping_add(attempt),
            Some((&parent.poly, &pts)),
            CONIC_TRIALS,
        )
        .map_err(|e| e.at_stage(tag))?;
        match cremona_with_choice(parent, &choice, &z1, m, d, &pts, opts) {
            Ok(mut cert) => {
                cert.params
                    .insert("conic_attempt".into(), attempt.to_string());
                return Ok(cert);
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap())
}

fn cremona_with_choice(
    parent: &CurveCertificate,
    choice: &transforms::ConicChoice,
    z1: &ProjectivePoint,
    m: u32,
    d: u32,
    pts: &[[f64; 3]],
    opts: &PipelineOptions,
) -> Result<CurveCertificate> {
    let tag = "cremona";
    let frame = &choice.frame;
    let moved = transforms::apply_frame(&parent.poly, frame).map_err(|e| e.at_stage(tag))?;
    let (poly, strip) = transforms::cremona_with_factor(&moved).map_err(|e| e.at_stage(tag))?;
    let kmoved = transforms::apply_frame(&choice.conic, frame)?;
    let lstar = transforms::cremona(&kmoved)?;
    let z1s = transforms::cremona_point(&frame.apply_point(z1))?;
    let mut cert = base_cert(Stage::Cremona, poly, Some(parent));
    frame_params(&mut cert, "frame", frame);
    cert.params.insert("conic".into(), choice.conic.to_string());
    cert.params.insert(
        "strip".into(),
        format!("{} {} {}", strip[0], strip[1], strip[2]),
    );
    cert.params.insert("line".into(), lstar.to_string());
    cert.check(
        "degree",
        cert.degree == 4 * d,
        format!("degree {} from a curve of degree {}", cert.degree, 2 * d),
    )?;
    cert.check(
        "line",
        lstar.degree() == 1 && lstar.is_real(),
        format!("conic maps to the real line {lstar}"),
    )?;
    cert.check(
        "imaginary",
        cert.imaginary,
        "imaginary after the Cremona map",
    )?;
    let vertices: Vec<ProjectivePoint> = (0..3)
        .map(|k| {
            let mut c: [GR; 3] = Default::default();
            c[k] = GR::one();
            ProjectivePoint { coords: c }
        })
        .collect();
    for v in &vertices {
        let rec = local::analyze(&cert.poly, v, None)?;
        let ok = rec.kind == SingularityKind::Ordinary && rec.multiplicity == 2 * d;
        cert.check(
            "vertex",
            ok,
            format!(
                "{} of multiplicity {} at {v}",
                rec.kind_name(),
                rec.multiplicity
            ),
        )?;
        cert.singularities.push(rec);
    }
    let rec = local::analyze(&cert.poly, &z1s, Some((&lstar, m)))?;
    let ok = matches!(rec.kind, SingularityKind::Tangential { .. });
    cert.check(
        "tangential point",
        ok,
        format!("{} at {z1s}", rec.kind_name()),
    )?;
    cert.singularities.push(rec);
    for r in parent.tracked().filter(|r| !r.center.same_point(z1)) {
        if let Ok(p) = transforms::cremona_point(&frame.apply_point(&r.center)) {
            if cert.poly.eval_point(&p).is_zero() {
                cert.singularities
                    .push(local::analyze(&cert.poly, &p, None)?);
            }
        }
    }
    let preds: Vec<(f64, f64)> = pts
        .iter()
        .map(|p| {
            let w = frame.apply_f64(*p);
            (w[0] / w[1], w[0] / w[2])
        })
        .collect();
    census_for(&mut cert, &preds, &vertices, opts)?;
    let smooth = cert.census.count - 3;
    cert.check(
        "smooth real points",
        smooth == parent.census.count,
        format!("{smooth} smooth real points"),
    )?;
    Ok(cert)
}

// ---------------------------------------------------------------- patchwork

pub fn patchwork_stage(
    parent: &CurveCertificate,
    opts: &PipelineOptions,
) -> Result<CurveCertificate> {
    let tag = "patchwork";
    let d = parent.degree / 4;
    let (z1s, lstar, m) = parent
        .tracked()
        .find_map(|r| match &r.kind {
            SingularityKind::Tangential { branches, line } => {
                Some((r.center.clone(), line.clone(), *branches))
            }
            _ => None,
        })
        .ok_or_else(|| Error::Degenerate("no tangential point".into()).at_stage(tag))?;
    let f0 = parent.poly.dehomogenize(0)?;
    let torus: Vec<IsolatingBox> = parent
        .census
        .boxes
        .iter()
        .filter(|b| b.chart == 0 && !b.is_point())
        .cloned()
        .collect();
    let family = ViroFamily::new(&f0, d, &z1s, &lstar, m, torus).map_err(|e| e.at_stage(tag))?;
    let t0 = patchwork::dyadic_t(opts.t0_exp);
    let choice = patchwork::choose_t(&family, &t0).map_err(|e| e.at_stage(tag))?;
    let poly = choice.solved.phi(&family.lifting)?;
    let mut cert = base_cert(Stage::Patchworked, poly, Some(parent));
    cert.params
        .insert("t".into(), crate::gaussian::fmt_rational(&choice.t));
    cert.params
        .insert("halvings".into(), choice.halvings.to_string());
    let piv: Vec<String> = family
        .pivots
        .iter()
        .map(|(i, j)| format!("{i},{j}"))
        .collect();
    cert.params.insert("pivots".into(), piv.join(" "));
    cert.params.insert("line".into(), lstar.to_string());
    cert.check("imaginary", cert.imaginary, "imaginary after patchworking")?;
    cert.check(
        "constraints",
        family.pivots.len() as u32 == m * (m + 1),
        format!(
            "{} tangency conditions solved exactly on the pivots",
            family.pivots.len()
        ),
    )?;
    let counts = choice.census.counts;
    cert.check(
        "regions",
        choice.census.disjoint && counts.iter().all(|&c| c >= (4 * d * d) as usize),
        format!(
            "region counts {counts:?}, disjoint: {}",
            choice.census.disjoint
        ),
    )?;
    let coprime = real_solve::real_parts_coprime(&cert.poly)?;
    let total = choice.census.census.count;
    set_census(
        &mut cert,
        choice.census.census.clone(),
        CensusStatus::Predicted,
    );
    cert.check(
        "census",
        coprime && total == cert.census.cap,
        format!("{total} certified points of cap {}", cert.census.cap),
    )?;
    let rec = local::analyze(&cert.poly, &z1s, Some((&lstar, m)))?;
    let ok = matches!(rec.kind, SingularityKind::Tangential { .. });
    cert.check(
        "tangential point",
        ok,
        format!("{} at {z1s}", rec.kind_name()),
    )?;
    cert.singularities.push(rec);
    for r in parent.tracked().filter(|r| !r.center.same_point(&z1s)) {
        if cert.poly.eval_point(&r.center).is_zero() {
            cert.singularities
                .push(local::analyze(&cert.poly, &r.center, None)?);
        }
    }
    Ok(cert)
}

// ---------------------------------------------------------------- drivers

/// One doubling round as a chain of certificates: squared, cremona, patchworked, doubled.
pub fn doubling_round_chain(
    cert: &CurveCertificate,
    opts: &PipelineOptions,
) -> Result<Vec<CurveCertificate>> {
    let s = square_stage(cert, opts)?;
    let c = cremona_stage(&s, opts)?;
    let p = patchwork_stage(&c, opts)?;
    let d = double_stage(&p, opts)?;
    Ok(vec![s, c, p, d])
}

pub fn doubling_round(cert: &CurveCertificate, opts: &PipelineOptions) -> Result<CurveCertificate> {
    Ok(doubling_round_chain(cert, opts)?.pop().unwrap())
}

/// Seed, `rounds` doubling rounds, then `n` unramified squarings.
pub fn run_pipeline(rounds: u32, n: u32, opts: &PipelineOptions) -> Result<Vec<CurveCertificate>> {
    let mut chain = vec![seed_nodal_cubic(opts.seed)?];
    for _ in 0..rounds {
        let next = doubling_round_chain(chain.last().unwrap(), opts)?;
        chain.extend(next);
    }
    for _ in 0..n {
        let next = n_round(chain.last().unwrap(), opts)?;
        chain.push(next);
    }
    Ok(chain)
}

// ---------------------------------------------------------------- §3 perturbation

/// Real form `h` of degree `deg(B)` vanishing to order `mult_floor` at every tracked
/// imaginary singular point of `B` (hence at the conjugates), nonzero at the real points.
pub fn choose_h(b: &CurveCertificate, mult_floor: u32) -> Result<PlanePoly> {
    let d = b.degree;
    let mons = local::form_monomials(d);
    let mut rows: Vec<Vec<GR>> = Vec::new();
    for r in b.tracked() {
        for (_, _, row) in local::jet_rows(&r.center, mult_floor.saturating_sub(1), d) {
            rows.push(row.iter().map(|c| GR::from_real(c.re().clone())).collect());
            rows.push(row.iter().map(|c| GR::from_real(c.im().clone())).collect());
        }
    }
    let basis = if rows.is_empty() {
        (0..mons.len())
            .map(|k| {
                let mut v = vec![GR::zero(); mons.len()];
                v[k] = GR::one();
                v
            })
            .collect()
    } else {
        crate::linalg::nullspace(&rows, mons.len())
    };
    if basis.is_empty() {
        return Err(Error::RankDeficient(format!(
            "no real form of degree {d} with multiplicity {mult_floor} at the points"
        )));
    }
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(d as u64);
    for attempt in 0..200 {
        let coeffs: Vec<i64> = (0..basis.len())
            .map(|k| {
                if attempt == 0 {
                    (k as i64 % 3) + 1
                } else {
                    rng.gen_range(-3..=3)
                }
            })
            .collect();
        let mut v = vec![GR::zero(); mons.len()];
        for (c, bv) in coeffs.iter().zip(&basis) {
            for (x, y) in v.iter_mut().zip(bv) {
                *x = &*x + &(y * &GR::from_int(*c));
            }
        }
        let h = PlanePoly::from_terms(Chart::Projective, mons.iter().copied().zip(v));
        if h.is_zero() {
            continue;
        }
        if b.census
            .boxes
            .iter()
            .all(|bx| sign_on_box(&h, bx).map(|s| s != 0).unwrap_or(false))
        {
            return Ok(h);
        }
    }
    Err(Error::SearchExhausted("no h avoids the real points".into()))
}

/// Real polynomial in a chart as an integer bivariate polynomial with the same signs.
fn chart_int(f: &PlanePoly, chart: usize) -> Result<real_solve::IntBiPoly> {
    if !f.is_real() {
        return Err(Error::Degenerate("expected a real polynomial".into()));
    }
    let mut fixed: Vec<PlanePoly> = (0..3)
        .map(|k| PlanePoly::var(Chart::Projective, k))
        .collect();
    fixed[chart] = PlanePoly::constant(Chart::Projective, GR::one());
    let g = f.substitute(&fixed);
    let l = BigRational::from_integer(g.denom_lcm());
    let (a, b) = chart_vars(chart);
    let dx = g.degree_in(a) as usize;
    let dy = g.degree_in(b) as usize;
    let mut c = vec![vec![BigInt::zero(); dy + 1]; dx + 1];
    for (m, v) in g.terms() {
        c[m.0[a] as usize][m.0[b] as usize] = (v.re() * &l).to_integer();
    }
    Ok(real_solve::IntBiPoly { c })
}

/// Range of a Taylor expansion over offsets `(x, y)`.
fn taylor_range(t: &[Vec<Dyadic>], x: &DInterval, y: &DInterval) -> DInterval {
    let mut acc = DInterval::point(Dyadic::zero());
    for row in t.iter().rev() {
        let mut r = DInterval::point(Dyadic::zero());
        for c in row.iter().rev() {
            r = r.mul(y).add(&DInterval::point(c.clone()));
        }
        acc = acc.mul(x).add(&r);
    }
    acc
}

fn rational_dyadic(r: &BigRational) -> Dyadic {
    Dyadic::floor_rational(r, 96)
}

/// Sign of a real form over a census box: +1, -1, or 0 when undecided.
fn sign_on_box(f: &PlanePoly, b: &IsolatingBox) -> Result<i32> {
    if b.is_point() {
        let v = f.eval_point(&b.center_point());
        return Ok(if v.is_zero() {
            0
        } else if v.re().is_positive() {
            1
        } else {
            -1
        });
    }
    let ib = chart_int(f, b.chart)?;
    let (cx, cy) = b.center();
    let (mx, my) = (rational_dyadic(&cx), rational_dyadic(&cy));
    let t = ib.taylor(&mx, &my);
    let (bx, by) = b.to_dyadic(128);
    let r = taylor_range(
        &t,
        &bx.sub(&DInterval::point(mx)),
        &by.sub(&DInterval::point(my)),
    );
    Ok(if r.positive() {
        1
    } else if r.negative() {
        -1
    } else {
        0
    })
}

/// `f * conj(f) - eps * h^2`.
pub fn perturbation(f: &PlanePoly, h: &PlanePoly, eps: &BigRational) -> Result<PlanePoly> {
    let f = real_solve::projective_form(f)?;
    Ok(f.mul(&f.conj())
        .sub(&h.mul(h).scale(&GR::from_real(eps.clone()))))
}

pub const OVAL_ARCS: usize = 64;

/// Radius: a power of two at most half the minimal sup-distance between census boxes.
fn oval_radius(boxes: &[IsolatingBox]) -> Result<BigRational> {
    let mut best: Option<BigRational> = None;
    for (k, a) in boxes.iter().enumerate() {
        for b in &boxes[k + 1..] {
            if a.chart != b.chart {
                continue;
            }
            let gx = (&b.x.0 - &a.x.1).max(&a.x.0 - &b.x.1);
            let gy = (&b.y.0 - &a.y.1).max(&a.y.0 - &b.y.1);
            let g = gx.max(gy);
            best = Some(best.map_or(g.clone(), |v: BigRational| v.min(g)));
        }
    }
    let half = best.unwrap_or_else(|| q(2)) / q(2);
    if !half.is_positive() {
        return Err(Error::Degenerate("census boxes touch".into()));
    }
    let mut r = q(1);
    while r > half {
        r /= q(2);
    }
    while &r * q(2) <= half && r < q(1) {
        r *= q(2);
    }
    Ok(r)
}

/// Exact rational point of the circle at angle about `theta`, in `(-pi, pi]`.
fn circle_point(
    c: &(BigRational, BigRational),
    r: &BigRational,
    theta: f64,
) -> (BigRational, BigRational) {
    if theta <= -std::f64::consts::PI || theta >= std::f64::consts::PI {
        return (&c.0 - r, c.1.clone());
    }
    let s = Dyadic::from_f64((theta / 2.0).tan())
        .truncate(24)
        .to_rational();
    let den = q(1) + &s * &s;
    let x = &c.0 + r * (q(1) - &s * &s) / &den;
    let y = &c.1 + r * (q(2) * &s) / &den;
    (x, y)
}

/// Points `P_0 .. P_{n-1}` on the circle, in angular order, exactly rational.
fn circle_points(
    c: &(BigRational, BigRational),
    r: &BigRational,
    n: usize,
) -> Vec<(BigRational, BigRational)> {
    (0..n)
        .map(|k| {
            circle_point(
                c,
                r,
                -std::f64::consts::PI + 2.0 * std::f64::consts::PI * k as f64 / n as f64,
            )
        })
        .collect()
}

/// Maximal bisection depth of an arc whose enclosing box does not certify.
pub const ARC_DEPTH: u32 = 12;

/// Lower bound of the Taylor expansion `t` (at `center`) over the circle arc from
/// `a` to `c`, bisecting in angle where the enclosure is not positive.
#[allow(clippy::too_many_arguments)]
fn arc_bound(
    t: &[Vec<Dyadic>],
    center: &(BigRational, BigRational),
    r: &BigRational,
    a: &(BigRational, BigRational),
    c: &(BigRational, BigRational),
    th: (f64, f64),
    depth: u32,
    arcs: &mut usize,
) -> Option<Dyadic> {
    let chord2 = (&a.0 - &c.0) * (&a.0 - &c.0) + (&a.1 - &c.1) * (&a.1 - &c.1);
    let sag = &chord2 / (q(4) * r);
    let xlo = a.0.clone().min(c.0.clone()) - &sag - &center.0;
    let xhi = a.0.clone().max(c.0.clone()) + &sag - &center.0;
    let ylo = a.1.clone().min(c.1.clone()) - &sag - &center.1;
    let yhi = a.1.clone().max(c.1.clone()) + &sag - &center.1;
    let v = taylor_range(
        t,
        &DInterval::outward(&xlo, &xhi, 96),
        &DInterval::outward(&ylo, &yhi, 96),
    );
    if v.positive() {
        *arcs += 1;
        return Some(v.lo);
    }
    if depth == 0 || v.hi.to_f64() <= 0.0 {
        return None;
    }
    let mid = 0.5 * (th.0 + th.1);
    let m = circle_point(center, r, mid);
    let l = arc_bound(t, center, r, a, &m, (th.0, mid), depth - 1, arcs)?;
    let h = arc_bound(t, center, r, &m, c, (mid, th.1), depth - 1, arcs)?;
    Some(Dyadic::min(&l, &h))
}

fn witness_at(
    ib: &real_solve::IntBiPoly,
    b: &IsolatingBox,
    r: &BigRational,
) -> Option<(OvalWitness, usize)> {
    let (cx, cy) = b.center();
    let (mx, my) = (rational_dyadic(&cx), rational_dyadic(&cy));
    let center = (mx.to_rational(), my.to_rational());
    let t = ib.taylor(&mx, &my);
    let (bx, by) = b.to_dyadic(128);
    let inner = taylor_range(
        &t,
        &bx.sub(&DInterval::point(mx.clone())),
        &by.sub(&DInterval::point(my.clone())),
    );
    if !inner.negative() {
        return None;
    }
    let pi = std::f64::consts::PI;
    let step = 2.0 * pi / OVAL_ARCS as f64;
    let pts = circle_points(&center, r, OVAL_ARCS);
    let mut low: Option<Dyadic> = None;
    let mut arcs = 0;
    for k in 0..pts.len() {
        let (a, c) = (&pts[k], &pts[(k + 1) % pts.len()]);
        let th = (-pi + step * k as f64, -pi + step * (k + 1) as f64);
        let v = arc_bound(&t, &center, r, a, c, th, ARC_DEPTH, &mut arcs)?;
        low = Some(match low {
            Some(l) => Dyadic::min(&l, &v),
            None => v,
        });
    }
    let w = OvalWitness {
        point: b.clone(),
        center_bound: inner.hi.to_rational(),
        center,
        circle_bound: low?.to_rational(),
    };
    Some((w, arcs))
}

/// Certifies one oval of `g` around each census point of `b`.
/// Returns the witnesses and the total number of certified arcs.
pub fn oval_witnesses(
    g: &PlanePoly,
    boxes: &[IsolatingBox],
    radius: &BigRational,
) -> Result<Option<(Vec<OvalWitness>, usize)>> {
    use rayon::prelude::*;
    let ints: Vec<real_solve::IntBiPoly> =
        (0..3).map(|k| chart_int(g, k)).collect::<Result<_>>()?;
    let res: Vec<Option<(OvalWitness, usize)>> = boxes
        .par_iter()
        .map(|b| witness_at(&ints[b.chart], b, radius))
        .collect();
    let res: Option<Vec<(OvalWitness, usize)>> = res.into_iter().collect();
    Ok(res.map(|v| {
        let arcs = v.iter().map(|w| w.1).sum();
        (v.into_iter().map(|w| w.0).collect(), arcs)
    }))
}

pub fn perturb_conjugate_pair(
    b: &CurveCertificate,
    h: &PlanePoly,
    eps: &BigRational,
) -> Result<(PlanePoly, OvalReport)> {
    let g = perturbation(&b.poly, h, eps)?;
    let radius = oval_radius(&b.census.boxes)?;
    match oval_witnesses(&g, &b.census.boxes, &radius)? {
        Some((witnesses, arcs)) => Ok((
            g,
            OvalReport {
                eps: eps.clone(),
                radius,
                arcs,
                witnesses,
            },
        )),
        None => Err(Error::Indeterminate(format!(
            "oval witness fails at eps = {eps}"
        ))),
    }
}

pub const EPS_HALVINGS: u32 = 80;

/// `choose_h` with `mult_floor = floor(m/2) + 1`, then `eps = 2^-10, 2^-11, ...`.
pub fn perturb_stage(b: &CurveCertificate) -> Result<CurveCertificate> {
    let tag = "perturb";
    if !matches!(
        b.census_status,
        CensusStatus::Exact | CensusStatus::Predicted
    ) || !b.maximal
    {
        return Err(
            Error::Degenerate("perturbation needs a certified maximal census".into()).at_stage(tag),
        );
    }
    let m = b.tracked().map(|r| r.multiplicity).max().unwrap_or(0);
    let floor = m / 2 + 1;
    let h = choose_h(b, floor).map_err(|e| e.at_stage(tag))?;
    let mut eps = BigRational::new(BigInt::one(), BigInt::from(1024));
    for _ in 0..EPS_HALVINGS {
        match perturb_conjugate_pair(b, &h, &eps) {
            Ok((g, report)) => {
                let mut cert = base_cert(Stage::Perturbed, g, Some(b));
                cert.census_status = CensusStatus::NotApplicable;
                cert.census = Census::new(Vec::new(), 0);
                cert.params.insert("h".into(), h.to_string());
                cert.params
                    .insert("eps".into(), crate::gaussian::fmt_rational(&eps));
                cert.params.insert("mult_floor".into(), floor.to_string());
                cert.check(
                    "real",
                    cert.poly.is_real(),
                    "f*conj(f) - eps*h^2 has real coefficients",
                )?;
                cert.check(
                    "ovals",
                    report.witnesses.len() == b.census.count,
                    format!(
                        "{} oval witnesses, radius {}",
                        report.witnesses.len(),
                        crate::gaussian::fmt_rational(&report.radius)
                    ),
                )?;
                for r in b.tracked() {
                    for z in [r.center.clone(), r.center.conj()] {
                        let mg = local::multiplicity_at(&cert.poly, &z)?;
                        let mh = local::multiplicity_at(&h, &z).unwrap_or(0);
                        cert.check(
                            "multiplicity",
                            mg == r.multiplicity && 2 * mh > r.multiplicity,
                            format!("multiplicity {mg} at {z}, h vanishes to order {mh}"),
                        )?;
                        cert.singularities.push(SingularityRecord {
                            center: z,
                            multiplicity: mg,
                            kind: SingularityKind::Other,
                            certified: true,
                        });
                    }
                }
                cert.ovals = Some(report);
                return Ok(cert);
            }
            Err(Error::Indeterminate(_)) => eps /= q(2),
            Err(e) => return Err(e.at_stage(tag)),
        }
    }
    Err(Error::SearchExhausted("no eps certifies the ovals".into()).at_stage(tag))
}

/// `x0^a x1^b x2^c` monomial helper for tests and callers.
pub fn monomial(e: [u32; 3]) -> PlanePoly {
    PlanePoly::monomial(Chart::Projective, Monomial(e), GR::one())
}

#[allow(dead_code)]
fn gcd_u(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preimages() {
        let p = ProjectivePoint::from_ints([(0, 0), (0, 2), (1, 0)]).unwrap();
        let ps = squaring_preimages(&p).unwrap();
        assert_eq!(ps.len(), 2);
        let r = ProjectivePoint::from_ints([(1, 0), (4, 0), (9, 0)]).unwrap();
        assert_eq!(squaring_preimages(&r).unwrap().len(), 4);
        assert!(
            squaring_preimages(&ProjectivePoint::from_ints([(1, 0), (2, 0), (1, 0)]).unwrap())
                .is_none()
        );
    }

    #[test]
    fn square_shift_is_square() {
        let u = GR::new(q(3), q(5));
        let (c, w) = square_shift(&u, &q(7));
        assert!(c >= q(7));
        assert_eq!(&w * &w, &u + &GR::from_real(c.clone()));
        let (c, w) = square_at(&u, &q(2));
        assert_eq!(&w * &w, &u + &GR::from_real(c));
    }

    #[test]
    fn circle_points_lie_on_circle() {
        let c = (q(1), BigRational::new(1.into(), 3.into()));
        let r = BigRational::new(1.into(), 8.into());
        for (x, y) in circle_points(&c, &r, 16) {
            assert_eq!(
                (&x - &c.0) * (&x - &c.0) + (&y - &c.1) * (&y - &c.1),
                &r * &r
            );
        }
    }

    #[test]
    fn seed_and_square() {
        let opts = PipelineOptions::default();
        let s = seed_nodal_cubic(opts.seed).unwrap();
        assert!(s.maximal);
        let sq = square_stage(&s, &opts).unwrap();
        assert_eq!(sq.degree, 6);
        assert_eq!(sq.census.count, 36);
        assert!(sq.maximal);
        let tangential = sq
            .singularities
            .iter()
            .filter(|r| matches!(r.kind, SingularityKind::Tangential { branches: 2, .. }))
            .count();
        assert_eq!(tangential, 2);
    }
}
