//! Word-size prime field arithmetic used by the modular resultant.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes `p ≡ 1 (mod 4)` below 2^62, descending, each with a square root of -1.
pub struct PrimeStream {
    next: u64,
}

impl PrimeStream {
    pub fn new() -> Self {
        PrimeStream {
            next: (1u64 << 62) - 3,
        }
    }
}

impl Default for PrimeStream {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for PrimeStream {
    type Item = (u64, u64);
    fn next(&mut self) -> Option<(u64, u64)> {
        loop {
            let n = self.next;
            self.next -= 4;
            if n % 4 == 1 && is_prime(n) {
                return Some((n, sqrt_minus_one(n)));
            }
        }
    }
}

pub fn sqrt_minus_one(p: u64) -> u64 {
    for a in 2u64.. {
        if pow_mod(a, (p - 1) / 2, p) == p - 1 {
            return pow_mod(a, (p - 1) / 4, p);
        }
    }
    unreachable!()
}

pub fn reduce(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

/// Determinant modulo `p` by Gaussian elimination (the matrix is consumed).
pub fn det_mod(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| m[r][c] != 0) else {
            return 0;
        };
        if piv != c {
            m.swap(piv, c);
            det = p - det;
            if det == p {
                det = 0;
            }
        }
        det = mul_mod(det, m[c][c], p);
        let inv = inv_mod(m[c][c], p);
        for r in c + 1..n {
            if m[r][c] == 0 {
                continue;
            }
            let f = mul_mod(m[r][c], inv, p);
            for j in c..n {
                let t = mul_mod(f, m[c][j], p);
                m[r][j] = sub_mod(m[r][j], t, p);
            }
        }
    }
    det
}

/// Coefficients (low to high) of the polynomial through `(xs[k], ys[k])`.
pub fn interpolate(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    let n = xs.len();
    // Newton divided differences.
    let mut c = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = sub_mod(c[i], c[i - 1], p);
            let den = sub_mod(xs[i], xs[i - j], p);
            c[i] = mul_mod(num, inv_mod(den, p), p);
        }
    }
    let mut poly = vec![0u64; n];
    for i in (0..n).rev() {
        // poly = poly * (x - xs[i]) + c[i]
        let mut next = vec![0u64; n];
        for k in 0..n {
            if poly[k] == 0 {
                continue;
            }
            if k + 1 < n {
                next[k + 1] = add_mod(next[k + 1], poly[k], p);
            }
            next[k] = sub_mod(next[k], mul_mod(poly[k], xs[i], p), p);
        }
        next[0] = add_mod(next[0], c[i], p);
        poly = next;
    }
    poly
}

/// Incremental Chinese remaindering with symmetric lifting.
pub struct Crt {
    pub modulus: BigInt,
    pub values: Vec<BigInt>,
}

impl Crt {
    pub fn new(len: usize) -> Self {
        Crt {
            modulus: BigInt::from(1),
            values: vec![BigInt::zero(); len],
        }
    }

    pub fn add(&mut self, residues: &[u64], p: u64) {
        let m_mod_p = reduce(&self.modulus, p);
        let inv = inv_mod(m_mod_p, p);
        let pb = BigInt::from(p);
        for (v, &r) in self.values.iter_mut().zip(residues) {
            let cur = reduce(v, p);
            let t = mul_mod(sub_mod(r, cur, p), inv, p);
            if t != 0 {
                *v += &self.modulus * BigInt::from(t);
            }
        }
        self.modulus *= pb;
    }

    pub fn symmetric(&self) -> Vec<BigInt> {
        let half = &self.modulus >> 1usize;
        self.values
            .iter()
            .map(|v| {
                if v > &half {
                    v - &self.modulus
                } else {
                    v.clone()
                }
            })
            .collect()
    }
}

pub fn bits_of(n: &BigInt) -> u64 {
    if n.sign() == Sign::NoSign {
        0
    } else {
        n.abs().bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_have_i() {
        let mut s = PrimeStream::new();
        for _ in 0..3 {
            let (p, i) = s.next().unwrap();
            assert_eq!(p % 4, 1);
            assert_eq!(mul_mod(i, i, p), p - 1);
        }
    }

    #[test]
    fn interpolation_roundtrip() {
        let p = 1_000_000_007u64;
        let coeffs = [5u64, 0, 3, 7];
        let xs: Vec<u64> = (0..4).collect();
        let ys: Vec<u64> = xs
            .iter()
            .map(|&x| {
                coeffs
                    .iter()
                    .rev()
                    .fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
            })
            .collect();
        assert_eq!(interpolate(&xs, &ys, p), coeffs.to_vec());
    }

    #[test]
    fn crt_signed() {
        let mut c = Crt::new(1);
        let v = BigInt::from(-123456789012345i64) * BigInt::from(987654321u64);
        for p in [1_000_000_007u64, 998_244_353, 1_000_000_009] {
            let r = reduce(&v, p);
            c.add(&[r], p);
        }
        assert_eq!(c.symmetric()[0], v);
    }
}
