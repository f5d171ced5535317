//! Sparse plane polynomials over Q(i), affine in (x, y) or homogeneous in (x0, x1, x2).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::gaussian::{fmt_rational, parse_rational, GaussianRational};
use crate::{Error, Result};

type GR = GaussianRational;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Chart {
    Affine,
    Projective,
}

impl Chart {
    pub fn nvars(self) -> usize {
        match self {
            Chart::Affine => 2,
            Chart::Projective => 3,
        }
    }

    fn var_name(self, k: usize) -> &'static str {
        match (self, k) {
            (Chart::Affine, 0) => "x",
            (Chart::Affine, 1) => "y",
            (Chart::Projective, 0) => "x0",
            (Chart::Projective, 1) => "x1",
            (Chart::Projective, 2) => "x2",
            _ => unreachable!("variable index out of range"),
        }
    }
}

/// Exponent vector. Affine monomials leave the last slot at zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub fn new(e: [u32; 3]) -> Self {
        Monomial(e)
    }

    pub fn xy(i: u32, j: u32) -> Self {
        Monomial([i, j, 0])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exps(&self) -> [u32; 3] {
        self.0
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

/// Graded lex: total degree first, then exponents lexicographically.
impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

type ZTerms = BTreeMap<Monomial, (BigInt, BigInt)>;

fn zmul(a: &ZTerms, b: &ZTerms) -> ZTerms {
    let mut r = ZTerms::new();
    for (m, (ar, ai)) in a {
        for (n, (br, bi)) in b {
            let e = r
                .entry(m.mul(n))
                .or_insert_with(|| (BigInt::zero(), BigInt::zero()));
            e.0 += ar * br - ai * bi;
            e.1 += ar * bi + ai * br;
        }
    }
    r
}

fn denominator_lcm<'a>(cs: impl Iterator<Item = &'a GR>) -> BigInt {
    cs.fold(BigInt::one(), |a, c| {
        a.lcm(c.re().denom()).lcm(c.im().denom())
    })
}

fn to_gaussian_int(c: &GR, den: &BigInt) -> (BigInt, BigInt) {
    let d = BigRational::from_integer(den.clone());
    ((c.re() * &d).to_integer(), (c.im() * &d).to_integer())
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PlanePoly {
    chart: Chart,
    terms: BTreeMap<Monomial, GR>,
}

impl PlanePoly {
    pub fn zero(chart: Chart) -> Self {
        PlanePoly {
            chart,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(chart: Chart, c: GR) -> Self {
        let mut p = Self::zero(chart);
        p.add_term(Monomial::default(), c);
        p
    }

    pub fn var(chart: Chart, k: usize) -> Self {
        assert!(k < chart.nvars());
        let mut e = [0; 3];
        e[k] = 1;
        Self::monomial(chart, Monomial(e), GR::one())
    }

    pub fn monomial(chart: Chart, m: Monomial, c: GR) -> Self {
        let mut p = Self::zero(chart);
        p.add_term(m, c);
        p
    }

    /// Linear form `c0*x0 + c1*x1 + c2*x2`.
    pub fn linear(c: &[GR; 3]) -> Self {
        let mut p = Self::zero(Chart::Projective);
        for (k, ck) in c.iter().enumerate() {
            let mut e = [0; 3];
            e[k] = 1;
            p.add_term(Monomial(e), ck.clone());
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, GR)>>(chart: Chart, it: I) -> Self {
        let mut p = Self::zero(chart);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn nvars(&self) -> usize {
        self.chart.nvars()
    }

    pub fn add_term(&mut self, m: Monomial, c: GR) {
        if c.is_zero() {
            return;
        }
        if self.chart == Chart::Affine {
            debug_assert_eq!(m.0[2], 0);
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GR)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GR {
        self.terms.get(m).cloned().unwrap_or_else(GR::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximal total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, k: usize) -> u32 {
        self.terms.keys().map(|m| m.0[k]).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).min().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn constant_term(&self) -> GR {
        self.coeff(&Monomial::default())
    }

    pub fn map_coeffs<F: Fn(&GR) -> GR>(&self, f: F) -> Self {
        Self::from_terms(self.chart, self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn scale(&self, c: &GR) -> Self {
        self.map_coeffs(|v| v * c)
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|v| -v)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.chart, o.chart, "chart mismatch");
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.chart, o.chart, "chart mismatch");
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, -c);
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.chart, o.chart, "chart mismatch");
        let mut acc: BTreeMap<Monomial, GR> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let e = acc.entry(m1.mul(m2)).or_insert_with(GR::zero);
                *e += &(c1 * c2);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        PlanePoly {
            chart: self.chart,
            terms: acc,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.chart, GR::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn conj(&self) -> Self {
        self.map_coeffs(|c| c.conj())
    }

    /// `f = g + i*h` with `g`, `h` real.
    pub fn real_imag_split(&self) -> (Self, Self) {
        let g = self.map_coeffs(|c| GR::from_real(c.re().clone()));
        let h = self.map_coeffs(|c| GR::from_real(c.im().clone()));
        (g, h)
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }

    /// True iff no nonzero scalar multiple of `self` has real coefficients.
    pub fn is_imaginary(&self) -> bool {
        let mut it = self.terms.values();
        let c0 = match it.next() {
            Some(c) => c.clone(),
            None => return false,
        };
        let inv = c0.inv().expect("stored coefficients are nonzero");
        it.any(|c| !(c * &inv).is_real())
    }

    /// Divides by a coefficient so that the leading term (graded lex) is 1.
    pub fn monic(&self) -> Self {
        match self.terms.values().next_back() {
            Some(c) => self.scale(&c.inv().unwrap()),
            None => self.clone(),
        }
    }

    pub fn derivative(&self, k: usize) -> Self {
        let mut r = Self::zero(self.chart);
        for (m, c) in &self.terms {
            let e = m.0[k];
            if e == 0 {
                continue;
            }
            let mut nm = *m;
            nm.0[k] -= 1;
            r.add_term(nm, c * &GR::from_int(e as i64));
        }
        r
    }

    pub fn eval(&self, vals: &[GR]) -> GR {
        assert_eq!(vals.len(), self.nvars(), "chart mismatch in evaluation");
        let n = self.nvars();
        let mut powers: Vec<Vec<GR>> = Vec::with_capacity(n);
        for (k, v) in vals.iter().enumerate() {
            let d = self.degree_in(k) as usize;
            let mut p = Vec::with_capacity(d + 1);
            p.push(GR::one());
            for e in 1..=d {
                let next = &p[e - 1] * v;
                p.push(next);
            }
            powers.push(p);
        }
        let mut acc = GR::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, pk) in powers.iter().enumerate() {
                let e = m.0[k] as usize;
                if e > 0 {
                    t = &t * &pk[e];
                }
            }
            acc += &t;
        }
        acc
    }

    pub fn eval_point(&self, p: &ProjectivePoint) -> GR {
        assert_eq!(
            self.chart,
            Chart::Projective,
            "projective evaluation of an affine polynomial"
        );
        self.eval(&p.coords)
    }

    /// Substitutes polynomial `vals[k]` (all in one chart) for variable `k`.
    pub fn substitute(&self, vals: &[PlanePoly]) -> PlanePoly {
        assert_eq!(vals.len(), self.nvars());
        let chart = vals[0].chart;
        // expanded over Z[i] after clearing denominators, divided back at the end
        let dens: Vec<BigInt> = vals
            .iter()
            .map(|v| denominator_lcm(v.terms.values()))
            .collect();
        let degs: Vec<u32> = (0..vals.len()).map(|k| self.degree_in(k)).collect();
        let mut powers: Vec<Vec<ZTerms>> = Vec::with_capacity(vals.len());
        let mut den_pows: Vec<Vec<BigInt>> = Vec::with_capacity(vals.len());
        for (k, v) in vals.iter().enumerate() {
            let z: ZTerms = v
                .terms
                .iter()
                .map(|(m, c)| (*m, to_gaussian_int(c, &dens[k])))
                .collect();
            let d = degs[k] as usize;
            let mut p = Vec::with_capacity(d + 1);
            let mut dp = Vec::with_capacity(d + 1);
            p.push(ZTerms::from([(
                Monomial([0; 3]),
                (BigInt::one(), BigInt::zero()),
            )]));
            dp.push(BigInt::one());
            for e in 1..=d {
                let next = zmul(&p[e - 1], &z);
                p.push(next);
                let next = &dp[e - 1] * &dens[k];
                dp.push(next);
            }
            powers.push(p);
            den_pows.push(dp);
        }
        let df = denominator_lcm(self.terms.values());
        let mut acc = ZTerms::new();
        let mut cache: BTreeMap<(u32, u32), ZTerms> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0;
            let head = cache
                .entry((e[0], e[1]))
                .or_insert_with(|| zmul(&powers[0][e[0] as usize], &powers[1][e[1] as usize]));
            let full = if vals.len() == 3 && e[2] > 0 {
                zmul(head, &powers[2][e[2] as usize])
            } else {
                head.clone()
            };
            let (mut cr, mut ci) = to_gaussian_int(c, &df);
            for k in 0..vals.len() {
                let s = &den_pows[k][(degs[k] - e[k]) as usize];
                cr *= s;
                ci *= s;
            }
            for (mm, (fr, fi)) in full {
                let v = acc
                    .entry(mm)
                    .or_insert_with(|| (BigInt::zero(), BigInt::zero()));
                v.0 += &cr * &fr - &ci * &fi;
                v.1 += &cr * &fi + &ci * &fr;
            }
        }
        let total = (0..vals.len()).fold(df, |a, k| a * &den_pows[k][degs[k] as usize]);
        let terms = acc
            .into_iter()
            .filter(|(_, (a, b))| !a.is_zero() || !b.is_zero())
            .map(|(m, (a, b))| {
                (
                    m,
                    GR::new(
                        BigRational::new(a, total.clone()),
                        BigRational::new(b, total.clone()),
                    ),
                )
            })
            .collect();
        PlanePoly { chart, terms }
    }

    /// Affine `f(x, y)` to the degree-`d` form `x0^d f(x1/x0, x2/x0)`.
    pub fn homogenize(&self, d: u32) -> Result<PlanePoly> {
        if self.chart != Chart::Affine {
            return Err(Error::Chart(
                "homogenize expects an affine polynomial".into(),
            ));
        }
        if self.degree() > d {
            return Err(Error::Chart(format!(
                "degree {} exceeds {}",
                self.degree(),
                d
            )));
        }
        Ok(PlanePoly::from_terms(
            Chart::Projective,
            self.terms
                .iter()
                .map(|(m, c)| (Monomial([d - m.degree(), m.0[0], m.0[1]]), c.clone())),
        ))
    }

    /// Sets projective variable `k` to 1; the two remaining variables keep their order.
    pub fn dehomogenize(&self, k: usize) -> Result<PlanePoly> {
        if self.chart != Chart::Projective {
            return Err(Error::Chart(
                "dehomogenize expects a projective polynomial".into(),
            ));
        }
        let rest: Vec<usize> = (0..3).filter(|&j| j != k).collect();
        Ok(PlanePoly::from_terms(
            Chart::Affine,
            self.terms
                .iter()
                .map(|(m, c)| (Monomial([m.0[rest[0]], m.0[rest[1]], 0]), c.clone())),
        ))
    }

    /// Substitutes Laurent monomials `images[k]` for variable `k`, after multiplying
    /// by `premul`. With `strip`, negative exponents are cleared and the gcd
    /// monomial is divided out.
    pub fn monomial_substitute(
        &self,
        images: &[[i64; 3]],
        premul: Option<[i64; 3]>,
        strip: bool,
    ) -> Result<PlanePoly> {
        let n = self.nvars();
        assert_eq!(images.len(), n);
        let pre = premul.unwrap_or([0; 3]);
        let mut raw: BTreeMap<[i64; 3], GR> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = pre;
            for k in 0..n {
                for j in 0..3 {
                    e[j] += m.0[k] as i64 * images[k][j];
                }
            }
            let v = raw.entry(e).or_insert_with(GR::zero);
            *v += c;
        }
        raw.retain(|_, c| !c.is_zero());
        if raw.is_empty() {
            return Err(Error::Degenerate(
                "monomial substitution produced the zero polynomial".into(),
            ));
        }
        let mut shift = [0i64; 3];
        if strip {
            for j in 0..3 {
                shift[j] = raw.keys().map(|e| e[j]).min().unwrap();
            }
        }
        let mut out = PlanePoly::zero(self.chart);
        for (e, c) in raw {
            let mut u = [0u32; 3];
            for j in 0..3 {
                let v = e[j] - shift[j];
                if v < 0 {
                    return Err(Error::Degenerate(
                        "negative exponent after monomial substitution".into(),
                    ));
                }
                u[j] = v as u32;
            }
            if self.chart == Chart::Affine && u[2] != 0 {
                return Err(Error::Chart("affine image uses a third variable".into()));
            }
            out.add_term(Monomial(u), c);
        }
        Ok(out)
    }

    /// Common denominator of all coefficients.
    pub fn denom_lcm(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(&c.denom_lcm()))
    }

    /// Real polynomial scaled to coprime integer coefficients with positive leading term.
    pub fn primitive_integer(&self) -> Result<Vec<(Monomial, BigInt)>> {
        if !self.is_real() {
            return Err(Error::Degenerate(
                "integer scaling of a non-real polynomial".into(),
            ));
        }
        let l = self.denom_lcm();
        let mut out: Vec<(Monomial, BigInt)> = self
            .terms
            .iter()
            .map(|(m, c)| {
                (
                    *m,
                    (c.re() * BigRational::from_integer(l.clone())).to_integer(),
                )
            })
            .collect();
        let g = out.iter().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c));
        if g.is_zero() {
            return Ok(out);
        }
        let neg = out.last().map(|(_, c)| c.is_negative()).unwrap_or(false);
        for (_, c) in out.iter_mut() {
            *c = &*c / &g;
            if neg {
                *c = -&*c;
            }
        }
        Ok(out)
    }

    pub fn parse(s: &str) -> Result<PlanePoly> {
        Parser::new(s)?.parse_all()
    }
}

impl fmt::Display for PlanePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mono: Vec<String> = (0..self.nvars())
                .filter(|&k| m.0[k] > 0)
                .map(|k| {
                    let name = self.chart.var_name(k);
                    if m.0[k] == 1 {
                        name.to_string()
                    } else {
                        format!("{}^{}", name, m.0[k])
                    }
                })
                .collect();
            let mono = mono.join("*");
            let (neg, body) = if c.is_real() {
                let a = c.re().abs();
                let body = if mono.is_empty() {
                    fmt_rational(&a)
                } else if a.is_one() {
                    mono.clone()
                } else {
                    format!("{}*{}", fmt_rational(&a), mono)
                };
                (c.re().is_negative(), body)
            } else if mono.is_empty() {
                (false, c.to_string())
            } else {
                (false, format!("{}*{}", c, mono))
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                write!(f, "{}", body)?;
                first = false;
            } else {
                write!(f, " {} {}", if neg { "-" } else { "+" }, body)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    I,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    chart: Chart,
}

impl Parser {
    fn new(s: &str) -> Result<Parser> {
        let mut toks = Vec::new();
        let mut names: Vec<String> = Vec::new();
        let b = s.as_bytes();
        let mut i = 0;
        while i < b.len() {
            let ch = b[i] as char;
            if ch.is_whitespace() {
                i += 1;
                continue;
            }
            if ch.is_ascii_digit() {
                let st = i;
                while i < b.len() && (b[i] as char).is_ascii_digit() {
                    i += 1;
                }
                toks.push(Tok::Num(s[st..i].parse().unwrap()));
                continue;
            }
            if ch.is_ascii_alphabetic() {
                let st = i;
                while i < b.len() && (b[i] as char).is_ascii_alphanumeric() {
                    i += 1;
                }
                let w = &s[st..i];
                match w {
                    "i" => toks.push(Tok::I),
                    "x" | "y" | "x0" | "x1" | "x2" => {
                        names.push(w.to_string());
                        toks.push(Tok::Var(match w {
                            "x" | "x0" => 0,
                            "y" | "x1" => 1,
                            _ => 2,
                        }));
                    }
                    _ => return Err(Error::Parse(format!("unknown identifier `{w}`"))),
                }
                continue;
            }
            toks.push(match ch {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => return Err(Error::Parse(format!("unexpected character `{ch}`"))),
            });
            i += 1;
        }
        let proj = names.iter().any(|n| n.starts_with("x") && n.len() == 2);
        let aff = names.iter().any(|n| n == "x" || n == "y");
        if proj && aff {
            return Err(Error::Parse("mixed affine and projective variables".into()));
        }
        let chart = if proj {
            Chart::Projective
        } else {
            Chart::Affine
        };
        Ok(Parser {
            toks,
            pos: 0,
            chart,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn parse_all(mut self) -> Result<PlanePoly> {
        if self.toks.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let p = self.expr()?;
        if self.pos != self.toks.len() {
            return Err(Error::Parse(format!(
                "trailing input at token {}",
                self.pos
            )));
        }
        if p.chart == Chart::Projective && !p.is_homogeneous() {
            return Err(Error::Parse(
                "projective polynomial is not homogeneous".into(),
            ));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<PlanePoly> {
        let mut neg = false;
        match self.peek() {
            Some(Tok::Minus) => {
                neg = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<PlanePoly> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<u32> {
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.next() {
                Some(Tok::Num(n)) => {
                    u32::try_from(&n).map_err(|_| Error::Parse("exponent too large".into()))
                }
                _ => Err(Error::Parse("expected exponent".into())),
            }
        } else {
            Ok(1)
        }
    }

    fn factor(&mut self) -> Result<PlanePoly> {
        let chart = self.chart;
        let base = match self.next() {
            Some(Tok::Num(n)) => {
                let mut r = BigRational::from_integer(n);
                if let Some(Tok::Slash) = self.peek() {
                    self.pos += 1;
                    match self.next() {
                        Some(Tok::Num(d)) if !d.is_zero() => r /= BigRational::from_integer(d),
                        _ => return Err(Error::Parse("expected nonzero denominator".into())),
                    }
                }
                PlanePoly::constant(chart, GR::from_real(r))
            }
            Some(Tok::I) => PlanePoly::constant(chart, GR::i()),
            Some(Tok::Var(k)) => PlanePoly::var(chart, k),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(Error::Parse("expected `)`".into()));
                }
                e
            }
            Some(Tok::Minus) => return Ok(self.factor()?.neg()),
            t => return Err(Error::Parse(format!("unexpected token {:?}", t))),
        };
        let e = self.exponent()?;
        Ok(if e == 1 { base } else { base.pow(e) })
    }
}

/// A point of the projective plane with coordinates in Q(i).
#[derive(Clone, Debug)]
pub struct ProjectivePoint {
    pub coords: [GR; 3],
}

impl ProjectivePoint {
    pub fn new(coords: [GR; 3]) -> Result<Self> {
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::Degenerate(
                "all projective coordinates vanish".into(),
            ));
        }
        Ok(ProjectivePoint { coords })
    }

    pub fn affine(x: GR, y: GR) -> Self {
        ProjectivePoint {
            coords: [GR::one(), x, y],
        }
    }

    pub fn from_ints(c: [(i64, i64); 3]) -> Result<Self> {
        Self::new([
            GR::from_ints(c[0].0, c[0].1),
            GR::from_ints(c[1].0, c[1].1),
            GR::from_ints(c[2].0, c[2].1),
        ])
    }

    /// Scaled so that the first nonzero coordinate is 1.
    pub fn normalized(&self) -> Self {
        let k = self.coords.iter().position(|c| !c.is_zero()).unwrap();
        let inv = self.coords[k].inv().unwrap();
        ProjectivePoint {
            coords: [
                &self.coords[0] * &inv,
                &self.coords[1] * &inv,
                &self.coords[2] * &inv,
            ],
        }
    }

    /// Scaled so that coordinate `k` is 1, if it is nonzero.
    pub fn normalized_at(&self, k: usize) -> Option<Self> {
        let inv = self.coords[k].inv()?;
        Some(ProjectivePoint {
            coords: [
                &self.coords[0] * &inv,
                &self.coords[1] * &inv,
                &self.coords[2] * &inv,
            ],
        })
    }

    pub fn conj(&self) -> Self {
        ProjectivePoint {
            coords: [
                self.coords[0].conj(),
                self.coords[1].conj(),
                self.coords[2].conj(),
            ],
        }
    }

    pub fn is_real(&self) -> bool {
        self.normalized().coords.iter().all(|c| c.is_real())
    }

    pub fn scale(&self, l: &GR) -> Self {
        ProjectivePoint {
            coords: [
                &self.coords[0] * l,
                &self.coords[1] * l,
                &self.coords[2] * l,
            ],
        }
    }

    pub fn cross(&self, o: &Self) -> [GR; 3] {
        let a = &self.coords;
        let b = &o.coords;
        [
            &a[1] * &b[2] - &a[2] * &b[1],
            &a[2] * &b[0] - &a[0] * &b[2],
            &a[0] * &b[1] - &a[1] * &b[0],
        ]
    }

    pub fn same_point(&self, o: &Self) -> bool {
        self.cross(o).iter().all(|c| c.is_zero())
    }
}

impl PartialEq for ProjectivePoint {
    fn eq(&self, o: &Self) -> bool {
        self.same_point(o)
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.normalized();
        write!(f, "[{} : {} : {}]", n.coords[0], n.coords[1], n.coords[2])
    }
}

pub fn parse_point(s: &str) -> Result<ProjectivePoint> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("expected three coordinates in `{s}`")));
    }
    let c: Vec<GR> = parts.iter().map(|p| p.parse()).collect::<Result<_>>()?;
    ProjectivePoint::new([c[0].clone(), c[1].clone(), c[2].clone()])
}

pub fn parse_ratio(s: &str) -> Result<BigRational> {
    parse_rational(s).ok_or_else(|| Error::Parse(format!("bad rational `{s}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PlanePoly {
        PlanePoly::parse(s).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let f = p("(1/2+3*i)*x0^2*x1 - x2^3");
        assert_eq!(f.chart(), Chart::Projective);
        assert_eq!(f.to_string(), "(1/2+3*i)*x0^2*x1 - x2^3");
        assert_eq!(p(&f.to_string()), f);
        let g = p("x^2 - 2*x*y + 3/4 + (-2*i)*y");
        assert_eq!(p(&g.to_string()), g);
        assert!(PlanePoly::parse("x0^2 + x1").is_err());
        assert!(PlanePoly::parse("x + x1").is_err());
        assert_eq!(p("(x+y)^2"), p("x^2 + 2*x*y + y^2"));
    }

    #[test]
    fn conj_and_split() {
        let f = p("x0 + i*x1");
        assert_eq!(f.conj(), p("x0 - i*x1"));
        let (g, h) = p("(2+3*i)*x^2").real_imag_split();
        assert_eq!(g, p("2*x^2"));
        assert_eq!(h, p("3*x^2"));
        assert!(p("x + i*y").is_imaginary());
        assert!(!p("(1+i)*x + (1+i)*y").is_imaginary());
    }

    #[test]
    fn monomial_maps() {
        let f = p("x1 - x0");
        let sq = f
            .monomial_substitute(&[[2, 0, 0], [0, 2, 0], [0, 0, 2]], None, false)
            .unwrap();
        assert_eq!(sq, p("x1^2 - x0^2"));
        let c = p("x0*x1 + x1*x2 + x0*x2");
        let cr = c
            .monomial_substitute(&[[0, 1, 1], [1, 0, 1], [1, 1, 0]], None, true)
            .unwrap();
        assert_eq!(cr, p("x0 + x1 + x2"));
        let d = 3i64;
        let m = p("x^2*y^5");
        let f1 = m
            .monomial_substitute(&[[0, -1, 0], [-1, 0, 0]], Some([2 * d, 2 * d, 0]), false)
            .unwrap();
        assert_eq!(f1, p("x*y^4"));
        let id = p("x^3 + (2*i)*y - 1");
        assert_eq!(
            id.monomial_substitute(&[[1, 0, 0], [0, 1, 0]], None, false)
                .unwrap(),
            id
        );
        assert!(p("x - y")
            .monomial_substitute(&[[1, 0, 0], [1, 0, 0]], None, false)
            .is_err());
    }

    #[test]
    fn evaluation() {
        let f = p("x0 + x1");
        let pt = ProjectivePoint::from_ints([(1, 0), (1, 0), (0, 0)]).unwrap();
        assert_eq!(f.eval_point(&pt), GR::from_int(2));
        let g = p("x0^2*x1 + (3*i)*x2^3");
        let q = ProjectivePoint::from_ints([(1, 1), (2, 0), (0, -1)]).unwrap();
        let lam = GR::from_ints(2, -1);
        assert_eq!(
            g.eval_point(&q.scale(&lam)),
            &lam.pow(3) * &g.eval_point(&q)
        );
    }

    #[test]
    fn homog_roundtrip() {
        let f = p("x^2 + (1+i)*y - 3");
        let h = f.homogenize(2).unwrap();
        assert_eq!(h, p("x1^2 + (1+i)*x0*x2 - 3*x0^2"));
        assert_eq!(h.dehomogenize(0).unwrap(), f);
    }

    #[test]
    fn points() {
        let z = ProjectivePoint::from_ints([(0, 0), (0, 1), (1, 0)]).unwrap();
        assert!(!z.is_real());
        assert_eq!(z.scale(&GR::from_ints(3, 2)), z);
        assert_eq!(parse_point(&z.to_string()).unwrap(), z);
    }
}
