//! Exact dyadic numbers `m * 2^e`, intervals over them, and outward-rounded
//! `f64` intervals for cheap exclusion tests.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Dyadic {
    m: BigInt,
    e: i64,
}

impl Dyadic {
    pub fn new(m: BigInt, e: i64) -> Self {
        if m.is_zero() {
            return Dyadic { m, e: 0 };
        }
        let tz = m.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            Dyadic {
                m: m >> tz as usize,
                e: e + tz as i64,
            }
        } else {
            Dyadic { m, e }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            m: BigInt::zero(),
            e: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            m: BigInt::one(),
            e: 0,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Dyadic::new(n, 0)
    }

    pub fn pow2(e: i64) -> Self {
        Dyadic {
            m: BigInt::one(),
            e,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }

    pub fn exponent(&self) -> i64 {
        self.e
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.m.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            m: self.m.abs(),
            e: self.e,
        }
    }

    pub fn half(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            m: self.m.clone(),
            e: self.e - 1,
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            m: self.m.clone(),
            e: self.e + k,
        }
    }

    /// Binary magnitude: `2^(mag-1) <= |x| < 2^mag`; `None` for zero.
    pub fn magnitude(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.m.bits() as i64 + self.e)
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.e >= 0 {
            BigRational::from_integer(&self.m << self.e as usize)
        } else {
            BigRational::new(self.m.clone(), BigInt::one() << (-self.e) as usize)
        }
    }

    /// `r` itself when its denominator is a power of two.
    pub fn from_rational(r: &BigRational) -> Option<Self> {
        let d = r.denom();
        let k = d.trailing_zeros().unwrap_or(0);
        (d >> k as usize == BigInt::one()).then(|| Dyadic::new(r.numer().clone(), -(k as i64)))
    }

    /// Largest dyadic with denominator `2^bits` not above `r`.
    pub fn floor_rational(r: &BigRational, bits: i64) -> Self {
        let scaled = if bits >= 0 {
            r * BigRational::from_integer(BigInt::one() << bits as usize)
        } else {
            r / BigRational::from_integer(BigInt::one() << (-bits) as usize)
        };
        Dyadic::new(scaled.floor().to_integer(), -bits)
    }

    pub fn ceil_rational(r: &BigRational, bits: i64) -> Self {
        let scaled = if bits >= 0 {
            r * BigRational::from_integer(BigInt::one() << bits as usize)
        } else {
            r / BigRational::from_integer(BigInt::one() << (-bits) as usize)
        };
        Dyadic::new(scaled.ceil().to_integer(), -bits)
    }

    /// Truncates the mantissa to at most `prec` bits (toward zero).
    pub fn truncate(&self, prec: u64) -> Self {
        let b = self.m.bits();
        if b <= prec {
            return self.clone();
        }
        let sh = (b - prec) as usize;
        let neg = self.m.is_negative();
        let mag = self.m.abs() >> sh;
        Dyadic::new(if neg { -mag } else { mag }, self.e + sh as i64)
    }

    pub fn to_f64(&self) -> f64 {
        let (f, e) = self.to_f64_exp();
        if e > 1023 {
            return if f > 0.0 {
                f64::INFINITY
            } else if f < 0.0 {
                f64::NEG_INFINITY
            } else {
                0.0
            };
        }
        if e < -1074 {
            return 0.0;
        }
        f * 2f64.powi(e as i32)
    }

    /// `(f, e)` with `self ≈ f * 2^e` and `f` of moderate size.
    pub fn to_f64_exp(&self) -> (f64, i64) {
        if self.is_zero() {
            return (0.0, 0);
        }
        let b = self.m.bits() as i64;
        let sh = (b - 60).max(0);
        let top = (&self.m >> sh as usize).to_f64().unwrap();
        let e = self.e + sh;
        (top * 2f64.powi(-(b - sh) as i32), e + (b - sh))
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite value");
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        Dyadic::new(BigInt::from(sign) * BigInt::from(m), e)
    }

    pub fn min(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        let sa = self.signum();
        let sb = o.signum();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        (self - o).signum().cmp(&0)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.e.min(o.e);
        let a = &self.m << (self.e - e) as usize;
        let b = &o.m << (o.e - e) as usize;
        Dyadic::new(a + b, e)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, o: &Dyadic) -> Dyadic {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, o: &Dyadic) -> Dyadic {
        if self.is_zero() || o.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            m: &self.m * &o.m,
            e: self.e + o.e,
        }
    }
}

impl<'a> Neg for &'a Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            m: -&self.m,
            e: self.e,
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::gaussian::fmt_rational(&self.to_rational()))
    }
}

/// Closed interval `[lo, hi]` with exact dyadic endpoints.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl DInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi);
        DInterval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        DInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    /// `[-r, r]`
    pub fn symmetric(r: Dyadic) -> Self {
        DInterval { lo: -&r, hi: r }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn negative(&self) -> bool {
        self.hi.signum() < 0
    }

    pub fn mid(&self) -> Dyadic {
        (&self.lo + &self.hi).half()
    }

    pub fn rad(&self) -> Dyadic {
        (&self.hi - &self.lo).half()
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn mag(&self) -> Dyadic {
        Dyadic::max(&self.lo.abs(), &self.hi.abs())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Strict containment in the interior of `o`.
    pub fn inside(&self, o: &DInterval) -> bool {
        self.lo > o.lo && self.hi < o.hi
    }

    pub fn subset(&self, o: &DInterval) -> bool {
        self.lo >= o.lo && self.hi <= o.hi
    }

    pub fn disjoint(&self, o: &DInterval) -> bool {
        self.hi < o.lo || o.hi < self.lo
    }

    pub fn add(&self, o: &DInterval) -> DInterval {
        DInterval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn sub(&self, o: &DInterval) -> DInterval {
        DInterval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }

    pub fn neg(&self) -> DInterval {
        DInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, o: &DInterval) -> DInterval {
        if self.is_point() && o.is_point() {
            return DInterval::point(&self.lo * &o.lo);
        }
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for v in &c[1..] {
            if *v < lo {
                lo = v.clone();
            }
            if *v > hi {
                hi = v.clone();
            }
        }
        DInterval { lo, hi }
    }

    pub fn scale(&self, d: &Dyadic) -> DInterval {
        if d.signum() >= 0 {
            DInterval {
                lo: &self.lo * d,
                hi: &self.hi * d,
            }
        } else {
            DInterval {
                lo: &self.hi * d,
                hi: &self.lo * d,
            }
        }
    }

    pub fn hull(&self, o: &DInterval) -> DInterval {
        DInterval {
            lo: Dyadic::min(&self.lo, &o.lo),
            hi: Dyadic::max(&self.hi, &o.hi),
        }
    }

    pub fn to_rational_pair(&self) -> (BigRational, BigRational) {
        (self.lo.to_rational(), self.hi.to_rational())
    }

    /// Smallest dyadic interval with denominator `2^bits` containing `[lo, hi]`.
    pub fn outward(lo: &BigRational, hi: &BigRational, bits: i64) -> DInterval {
        DInterval {
            lo: Dyadic::floor_rational(lo, bits),
            hi: Dyadic::ceil_rational(hi, bits),
        }
    }
}

/// Outward-rounded `f64` interval. Any operation touching a non-finite bound
/// yields the whole line, so results are always enclosures.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FInterval {
    pub lo: f64,
    pub hi: f64,
}

impl FInterval {
    pub const ENTIRE: FInterval = FInterval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    fn widen(lo: f64, hi: f64) -> FInterval {
        if lo.is_nan() || hi.is_nan() {
            return Self::ENTIRE;
        }
        FInterval {
            lo: lo.next_down(),
            hi: hi.next_up(),
        }
    }

    pub fn from_bigint(n: &BigInt) -> FInterval {
        match n.to_f64() {
            Some(v) if v.is_finite() => FInterval {
                lo: v.next_down().next_down(),
                hi: v.next_up().next_up(),
            },
            _ => Self::ENTIRE,
        }
    }

    pub fn from_dyadic(lo: &Dyadic, hi: &Dyadic) -> FInterval {
        let tiny = |d: &Dyadic| d.magnitude().map(|m| m < -1000).unwrap_or(false);
        if tiny(lo) || tiny(hi) {
            return Self::ENTIRE;
        }
        let (a, b) = (lo.to_f64(), hi.to_f64());
        if !a.is_finite() || !b.is_finite() {
            return Self::ENTIRE;
        }
        // to_f64 truncates the mantissa and rescales; allow a few ulps.
        FInterval {
            lo: a.next_down().next_down().next_down(),
            hi: b.next_up().next_up().next_up(),
        }
    }

    pub fn add(self, o: FInterval) -> FInterval {
        Self::widen(self.lo + o.lo, self.hi + o.hi)
    }

    pub fn mul(self, o: FInterval) -> FInterval {
        let c = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        if c.iter().any(|v| v.is_nan()) {
            return Self::ENTIRE;
        }
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Self::widen(lo, hi)
    }

    pub fn excludes_zero(self) -> bool {
        self.lo > 0.0 || self.hi < 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = Dyadic::new(BigInt::from(3), -2); // 3/4
        let b = Dyadic::from_int(5);
        assert_eq!(
            (&a + &b).to_rational(),
            BigRational::new(23.into(), 4.into())
        );
        assert_eq!(
            (&a * &b).to_rational(),
            BigRational::new(15.into(), 4.into())
        );
        assert!(a < b);
        assert_eq!(Dyadic::from_f64(0.375), Dyadic::new(BigInt::from(3), -3));
        assert_eq!(Dyadic::from_f64(-1e300).to_f64(), -1e300);
        let r = BigRational::new(1.into(), 3.into());
        let lo = Dyadic::floor_rational(&r, 10);
        let hi = Dyadic::ceil_rational(&r, 10);
        assert!(lo.to_rational() < r && r < hi.to_rational());
    }

    #[test]
    fn intervals() {
        let x = DInterval::new(Dyadic::from_int(-1), Dyadic::from_int(2));
        let y = x.mul(&x);
        assert_eq!(y.lo, Dyadic::from_int(-2));
        assert_eq!(y.hi, Dyadic::from_int(4));
        let f = FInterval::from_bigint(&BigInt::from(7)).mul(FInterval { lo: 1.0, hi: 1.0 });
        assert!(f.lo < 7.0 && f.hi > 7.0);
    }
}
