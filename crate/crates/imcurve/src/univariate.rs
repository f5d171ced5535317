//! Dense univariate integer polynomials: Sturm counting, Descartes isolation
//! and exact sign evaluation at rational and dyadic points.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dyadic::Dyadic;
use crate::modular::{self, mul_mod, sub_mod};
use crate::poly::{Chart, PlanePoly};
use crate::{Error, Result};

/// Coefficients low to high, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntPoly(pub Vec<BigInt>);

impl IntPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().map(|v| v.is_zero()).unwrap_or(false) {
            c.pop();
        }
        IntPoly(c)
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// A univariate real `PlanePoly` (affine, one variable used) scaled to integers.
    pub fn from_plane(p: &PlanePoly) -> Result<Self> {
        if p.chart() != Chart::Affine {
            return Err(Error::Chart("univariate polynomial must be affine".into()));
        }
        if p.degree_in(0) > 0 && p.degree_in(1) > 0 {
            return Err(Error::Chart("polynomial is not univariate".into()));
        }
        let var = if p.degree_in(1) > 0 { 1 } else { 0 };
        let ints = p.primitive_integer()?;
        let n = p.degree() as usize;
        let mut c = vec![BigInt::zero(); n + 1];
        for (m, v) in ints {
            c[m.0[var] as usize] = v;
        }
        Ok(IntPoly::new(c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lc(&self) -> &BigInt {
        self.0.last().expect("zero polynomial")
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        IntPoly(self.0.iter().map(|c| c / &g).collect())
    }

    pub fn neg_var(&self) -> IntPoly {
        IntPoly(
            self.0
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `p(a/b) * b^deg`, an integer with the sign of `p(a/b)` when `b > 0`.
    pub fn eval_scaled(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let n = self.degree();
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        // Horner on the homogenized form: sum c_k a^k b^(n-k)
        for (idx, c) in self.0.iter().rev().enumerate() {
            if idx == 0 {
                acc = c.clone();
                continue;
            }
            bpow *= b;
            acc = acc * a + c * &bpow;
        }
        let _ = n;
        acc
    }

    pub fn sign_at_rational(&self, r: &BigRational) -> i32 {
        sign_of(&self.eval_scaled(r.numer(), r.denom()))
    }

    pub fn sign_at_dyadic(&self, d: &Dyadic) -> i32 {
        if d.exponent() >= 0 {
            let v = d.mantissa() << d.exponent() as usize;
            sign_of(&self.eval_scaled(&v, &BigInt::one()))
        } else {
            sign_of(&self.eval_scaled(d.mantissa(), &(BigInt::one() << (-d.exponent()) as usize)))
        }
    }

    pub fn eval_rational(&self, r: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * r + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn prem(&self, b: &IntPoly) -> IntPoly {
        let mut r = self.0.clone();
        let db = b.degree();
        let lb = b.lc();
        if self.degree() < db {
            return self.clone();
        }
        let mut steps = self.degree() - db + 1;
        while r.len() > db && !r.is_empty() {
            let top = r.len() - 1;
            let lr = r[top].clone();
            for c in r.iter_mut() {
                *c *= lb;
            }
            for (k, bc) in b.0.iter().enumerate() {
                let idx = top - db + k;
                r[idx] -= &lr * bc;
            }
            r.pop();
            while r.last().map(|v| v.is_zero()).unwrap_or(false) {
                r.pop();
            }
            steps = steps.saturating_sub(1);
        }
        let mut out = IntPoly::new(r);
        if steps > 0 {
            let f = num_traits::pow(lb.clone(), steps);
            out = IntPoly(out.0.iter().map(|c| c * &f).collect());
        }
        out
    }

    /// Exact quotient by a divisor (panics if the division is not exact).
    pub fn div_exact(&self, b: &IntPoly) -> IntPoly {
        let mut r = self.0.clone();
        let db = b.degree();
        let lb = b.lc();
        let mut q = vec![BigInt::zero(); self.degree() - db + 1];
        while r.len() > db {
            let top = r.len() - 1;
            let (c, rem) = r[top].div_rem(lb);
            assert!(rem.is_zero(), "inexact polynomial division");
            for (k, bc) in b.0.iter().enumerate() {
                r[top - db + k] -= &c * bc;
            }
            q[top - db] = c;
            r.pop();
        }
        assert!(r.iter().all(|v| v.is_zero()), "inexact polynomial division");
        IntPoly::new(q)
    }

    /// Greatest common divisor via primitive pseudo-remainder sequences.
    pub fn gcd(&self, o: &IntPoly) -> IntPoly {
        let (mut a, mut b) = if self.degree() >= o.degree() {
            (self.primitive(), o.primitive())
        } else {
            (o.primitive(), self.primitive())
        };
        if b.is_zero() {
            return a;
        }
        loop {
            let r = a.prem(&b);
            if r.is_zero() {
                return b.primitive();
            }
            if r.degree() == 0 {
                return IntPoly::from_i64(&[1]);
            }
            a = b;
            b = r.primitive();
        }
    }

    /// Squarefree part, with a modular shortcut when already squarefree.
    pub fn squarefree(&self) -> IntPoly {
        let p = self.primitive();
        if p.degree() <= 1 {
            return p;
        }
        let d = p.derivative();
        for (prime, _) in modular::PrimeStream::new().take(2) {
            if modular::reduce(p.lc(), prime) == 0 {
                continue;
            }
            if gcd_degree_mod(&p, &d, prime) == 0 {
                return p;
            }
        }
        let g = p.gcd(&d);
        if g.degree() == 0 {
            return p;
        }
        p.div_exact(&g).primitive()
    }

    fn taylor_shift_one(c: &mut [BigInt]) {
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = c[j + 1].clone();
                c[j] += t;
            }
        }
    }

    /// Sign variations of the coefficients of `(x+1)^n p(1/(x+1))`: a bound on
    /// (and parity of) the number of roots in (0, 1).
    fn descartes01(c: &[BigInt]) -> usize {
        let mut r: Vec<BigInt> = c.iter().rev().cloned().collect();
        Self::taylor_shift_one(&mut r);
        variations(&r)
    }
}

fn sign_of(v: &BigInt) -> i32 {
    if v.is_zero() {
        0
    } else if v.is_negative() {
        -1
    } else {
        1
    }
}

fn variations(c: &[BigInt]) -> usize {
    let mut last = 0;
    let mut v = 0;
    for x in c {
        let s = sign_of(x);
        if s != 0 {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
    }
    v
}

fn gcd_degree_mod(a: &IntPoly, b: &IntPoly, p: u64) -> usize {
    let red = |x: &IntPoly| -> Vec<u64> {
        let mut v: Vec<u64> = x.0.iter().map(|c| modular::reduce(c, p)).collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    let mut x = red(a);
    let mut y = red(b);
    while !y.is_empty() {
        // x mod y
        let ly = modular::inv_mod(*y.last().unwrap(), p);
        while x.len() >= y.len() && !x.is_empty() {
            let f = mul_mod(*x.last().unwrap(), ly, p);
            let off = x.len() - y.len();
            for (k, &c) in y.iter().enumerate() {
                x[off + k] = sub_mod(x[off + k], mul_mod(f, c, p), p);
            }
            while x.last() == Some(&0) {
                x.pop();
            }
        }
        std::mem::swap(&mut x, &mut y);
    }
    x.len().saturating_sub(1)
}

/// A real root: either exactly rational, or the unique root in the open
/// interval `(lo, hi)`, where the isolating polynomial has sign `sign_lo` at `lo`.
#[derive(Clone, Debug)]
pub enum RealRoot {
    Exact(BigRational),
    Interval {
        lo: Dyadic,
        hi: Dyadic,
        sign_lo: i32,
    },
}

impl RealRoot {
    pub fn bounds(&self) -> (BigRational, BigRational) {
        match self {
            RealRoot::Exact(r) => (r.clone(), r.clone()),
            RealRoot::Interval { lo, hi, .. } => (lo.to_rational(), hi.to_rational()),
        }
    }

    pub fn approx(&self) -> f64 {
        let (a, b) = self.bounds();
        crate::gaussian::ratio_to_f64(&((a + b) / BigRational::from_integer(2.into())))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, RealRoot::Exact(_))
    }
}

/// Isolated real roots of a squarefree polynomial, sorted increasingly.
/// `poly` is the polynomial the intervals refer to (dyadic roots divided out).
#[derive(Clone, Debug)]
pub struct Isolation {
    pub poly: IntPoly,
    pub roots: Vec<RealRoot>,
}

impl Isolation {
    /// Halves interval `k` until its width is at most `2^-bits`, or it becomes exact.
    pub fn refine(&mut self, k: usize, bits: i64) {
        let target = Dyadic::pow2(-bits);
        loop {
            let (lo, hi, s) = match &self.roots[k] {
                RealRoot::Exact(_) => return,
                RealRoot::Interval { lo, hi, sign_lo } => (lo.clone(), hi.clone(), *sign_lo),
            };
            if &hi - &lo <= target {
                return;
            }
            self.bisect_with(k, &lo, &hi, s);
        }
    }

    /// One bisection step of interval `k`.
    pub fn bisect(&mut self, k: usize) {
        if let RealRoot::Interval { lo, hi, sign_lo } = self.roots[k].clone() {
            self.bisect_with(k, &lo, &hi, sign_lo);
        }
    }

    fn bisect_with(&mut self, k: usize, lo: &Dyadic, hi: &Dyadic, s: i32) {
        let mid = (lo + hi).half();
        let sm = self.poly.sign_at_dyadic(&mid);
        self.roots[k] = if sm == 0 {
            RealRoot::Exact(mid.to_rational())
        } else if sm == s {
            RealRoot::Interval {
                lo: mid,
                hi: hi.clone(),
                sign_lo: s,
            }
        } else {
            RealRoot::Interval {
                lo: lo.clone(),
                hi: mid,
                sign_lo: s,
            }
        };
    }
}

/// Isolates all real roots of `p` (made squarefree first).
pub fn isolate_real_roots(p: &IntPoly) -> Result<Isolation> {
    if p.is_zero() {
        return Err(Error::Degenerate(
            "zero polynomial has no isolated roots".into(),
        ));
    }
    let mut q = p.squarefree();
    let mut exact: Vec<BigRational> = Vec::new();
    if q.0[0].is_zero() {
        exact.push(BigRational::zero());
        q = IntPoly::new(q.0[1..].to_vec());
    }
    loop {
        let (found, intervals) = isolate_nonzero(&q);
        if found.is_empty() {
            let mut iso = Isolation {
                poly: q,
                roots: Vec::new(),
            };
            for (lo, hi) in intervals {
                let s = iso.poly.sign_at_dyadic(&lo);
                debug_assert!(s != 0);
                iso.roots.push(RealRoot::Interval { lo, hi, sign_lo: s });
            }
            // intervals of the deflated polynomial may still contain divided-out roots
            for k in 0..iso.roots.len() {
                while exact.iter().any(|e| {
                    let (a, b) = iso.roots[k].bounds();
                    !iso.roots[k].is_exact() && &a <= e && e <= &b
                }) {
                    iso.bisect(k);
                }
            }
            iso.roots.extend(exact.into_iter().map(RealRoot::Exact));
            iso.roots.sort_by(|a, b| a.bounds().0.cmp(&b.bounds().0));
            return Ok(iso);
        }
        for d in found {
            // divide out (2^k x - m)
            let r = d.to_rational();
            let lin = IntPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
            q = q.div_exact(&lin);
            exact.push(r);
        }
    }
}

/// Roots of `q` (with `q(0) != 0`): dyadic roots hit exactly, and isolating intervals.
fn isolate_nonzero(q: &IntPoly) -> (Vec<Dyadic>, Vec<(Dyadic, Dyadic)>) {
    let mut found = Vec::new();
    let mut intervals = Vec::new();
    if q.degree() == 0 {
        return (found, intervals);
    }
    for neg in [false, true] {
        let p = if neg { q.neg_var() } else { q.clone() };
        let (f, iv) = isolate_positive(&p);
        for d in f {
            found.push(if neg { -&d } else { d });
        }
        for (lo, hi) in iv {
            intervals.push(if neg { (-&hi, -&lo) } else { (lo, hi) });
        }
    }
    (found, intervals)
}

/// Positive roots of `p`, `p(0) != 0`.
fn isolate_positive(p: &IntPoly) -> (Vec<Dyadic>, Vec<(Dyadic, Dyadic)>) {
    let n = p.degree();
    let bn = p.lc().bits() as i64;
    let mut k: i64 = 0;
    for i in 1..=n {
        let c = &p.0[n - i];
        if c.is_zero() {
            continue;
        }
        let e = c.bits() as i64 - bn + 1;
        k = k.max((e + i as i64 - 1).div_euclid(i as i64));
    }
    k += 1;
    // q(x) = p(2^k x)
    let base: Vec<BigInt> = if k >= 0 {
        p.0.iter()
            .enumerate()
            .map(|(i, c)| c << (k as usize * i))
            .collect()
    } else {
        let m = (-k) as usize;
        p.0.iter()
            .enumerate()
            .map(|(i, c)| c << (m * (n - i)))
            .collect()
    };
    let mut found = Vec::new();
    let mut out = Vec::new();
    // (poly on (0,1), c, j): represents (c/2^j, (c+1)/2^j) * 2^k
    let mut stack: Vec<(Vec<BigInt>, BigInt, i64)> = vec![(strip_pow2(base), BigInt::zero(), 0)];
    while let Some((c, num, j)) = stack.pop() {
        let v = IntPoly::descartes01(&c);
        if v == 0 {
            continue;
        }
        let scale = |t: &BigInt, jj: i64| Dyadic::new(t.clone(), k - jj);
        if v == 1 {
            out.push((scale(&num, j), scale(&(&num + 1), j)));
            continue;
        }
        // left half: 2^n c(x/2)
        let left: Vec<BigInt> = c.iter().enumerate().map(|(i, a)| a << (n - i)).collect();
        let mut right = left.clone();
        IntPoly::taylor_shift_one(&mut right);
        // midpoint value: right(0) = 2^n c(1/2)
        if right[0].is_zero() {
            found.push(scale(&(2 * &num + 1), j + 1));
        }
        stack.push((strip_pow2(right), 2 * &num + 1, j + 1));
        stack.push((strip_pow2(left), 2 * &num, j + 1));
    }
    (found, out)
}

fn strip_pow2(c: Vec<BigInt>) -> Vec<BigInt> {
    let tz = c
        .iter()
        .filter(|v| !v.is_zero())
        .map(|v| v.trailing_zeros().unwrap_or(0))
        .min()
        .unwrap_or(0);
    if tz == 0 {
        return c;
    }
    c.into_iter().map(|v| v >> tz as usize).collect()
}

/// Sturm sequence of `p` (integer-scaled, signs preserved).
pub fn sturm_sequence(p: &IntPoly) -> Vec<IntPoly> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        let b = &seq[n - 1];
        if b.is_zero() {
            seq.pop();
            break;
        }
        let a = &seq[n - 2];
        if b.degree() == 0 {
            break;
        }
        let r = a.prem(b);
        if r.is_zero() {
            break;
        }
        // prem = lc(b)^e * rem; Sturm needs -rem up to a positive factor.
        let e = a.degree() - b.degree() + 1;
        let flip = b.lc().is_negative() && e % 2 == 1;
        let mut next = r.primitive();
        let sign_r = r.lc().is_negative();
        // r.primitive() has positive leading coefficient; restore the sign of -rem.
        let want_negative = !(sign_r ^ flip);
        if want_negative {
            next = IntPoly(next.0.iter().map(|c| -c).collect());
        }
        seq.push(next);
    }
    seq
}

fn sign_limit(p: &IntPoly, at: &Option<BigRational>, right: bool, plus_inf: bool) -> i32 {
    match at {
        None => {
            let s = sign_of(p.lc());
            if plus_inf || p.degree() % 2 == 0 {
                s
            } else {
                -s
            }
        }
        Some(a) => {
            let mut q = p.clone();
            let mut k = 0;
            loop {
                let s = q.sign_at_rational(a);
                if s != 0 {
                    return if right || k % 2 == 0 { s } else { -s };
                }
                q = q.derivative();
                k += 1;
            }
        }
    }
}

/// Number of distinct real roots of `p` in the open interval `(lo, hi)`;
/// `None` bounds mean infinity.
pub fn sturm_count_int(
    p: &IntPoly,
    lo: &Option<BigRational>,
    hi: &Option<BigRational>,
) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::Degenerate(
            "Sturm count of the zero polynomial".into(),
        ));
    }
    if let (Some(a), Some(b)) = (lo, hi) {
        if a >= b {
            return Ok(0);
        }
    }
    let seq = sturm_sequence(p);
    let count = |right: bool, at: &Option<BigRational>, plus_inf: bool| -> usize {
        let signs: Vec<i32> = seq
            .iter()
            .map(|q| sign_limit(q, at, right, plus_inf))
            .collect();
        let mut v = 0;
        let mut last = 0;
        for s in signs {
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    };
    let va = count(true, lo, false);
    let vb = count(false, hi, true);
    Ok(va.saturating_sub(vb))
}

/// Distinct real roots of a univariate real polynomial in `(lo, hi)`.
pub fn sturm_count(
    p: &PlanePoly,
    lo: &Option<BigRational>,
    hi: &Option<BigRational>,
) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::Degenerate(
            "Sturm count of the zero polynomial".into(),
        ));
    }
    sturm_count_int(&IntPoly::from_plane(p)?, lo, hi)
}

/// The rational with smallest denominator in the closed interval `[lo, hi]`.
pub fn simplest_rational(lo: &BigRational, hi: &BigRational) -> BigRational {
    if lo > hi {
        return simplest_rational(hi, lo);
    }
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return BigRational::zero();
    }
    if hi.is_negative() {
        return -simplest_rational(&-hi, &-lo);
    }
    // 0 < lo <= hi
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    if fl.clone() + BigRational::one() <= *hi {
        return fl + BigRational::one();
    }
    let frac_lo = lo - &fl;
    let frac_hi = hi - &fl;
    // recurse on reciprocals
    let inner = simplest_rational(&frac_hi.recip(), &frac_lo.recip());
    fl + inner.recip()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sturm_examples() {
        let p = IntPoly::from_i64(&[1, 0, 1]);
        assert_eq!(
            sturm_count_int(&p, &Some(q(-10, 1)), &Some(q(10, 1))).unwrap(),
            0
        );
        let p = IntPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(
            sturm_count_int(&p, &Some(q(0, 1)), &Some(q(2, 1))).unwrap(),
            1
        );
        let p = IntPoly::from_i64(&[0, -3, 0, 1]);
        assert_eq!(
            sturm_count_int(&p, &Some(q(-2, 1)), &Some(q(2, 1))).unwrap(),
            3
        );
        // endpoints at roots are excluded from the open interval
        let p = IntPoly::from_i64(&[-1, 0, 1]);
        assert_eq!(
            sturm_count_int(&p, &Some(q(-1, 1)), &Some(q(1, 1))).unwrap(),
            0
        );
        assert_eq!(sturm_count_int(&p, &None, &None).unwrap(), 2);
        let p = IntPoly::from_i64(&[1, -2, 1]); // (x-1)^2
        assert_eq!(sturm_count_int(&p, &None, &None).unwrap(), 1);
    }

    #[test]
    fn isolation_examples() {
        let iso = isolate_real_roots(&IntPoly::from_i64(&[-2, 0, 1])).unwrap();
        assert_eq!(iso.roots.len(), 2);
        let iso = isolate_real_roots(&IntPoly::from_i64(&[-6, 11, -6, 1])).unwrap();
        assert_eq!(iso.roots.len(), 3);
        let vals: Vec<f64> = iso.roots.iter().map(|r| r.approx()).collect();
        assert!(vals[0] < vals[1] && vals[1] < vals[2]);
        for (r, k) in iso.roots.iter().zip(1..) {
            let (a, b) = r.bounds();
            assert!(a <= q(k, 1) && q(k, 1) <= b);
        }
        let mut iso = isolate_real_roots(&IntPoly::from_i64(&[-2, 0, 3])).unwrap();
        iso.refine(1, 40);
        let (a, b) = iso.roots[1].bounds();
        let t = q(2, 3);
        assert!(&a * &a < t && t < &b * &b);
    }

    #[test]
    fn squarefree_and_gcd() {
        // (x-1)^2 (x+2)
        let p = IntPoly::from_i64(&[2, -3, 0, 1]);
        assert_eq!(p.squarefree(), IntPoly::from_i64(&[-2, 1, 1]));
        let a = IntPoly::from_i64(&[-1, 0, 1]);
        let b = IntPoly::from_i64(&[1, 1]);
        assert_eq!(a.gcd(&b), IntPoly::from_i64(&[1, 1]));
    }

    #[test]
    fn simplest() {
        assert_eq!(simplest_rational(&q(3, 10), &q(4, 10)), q(1, 3));
        assert_eq!(simplest_rational(&q(-1, 2), &q(1, 2)), q(0, 1));
        assert_eq!(simplest_rational(&q(5, 2), &q(5, 2)), q(5, 2));
    }
}
