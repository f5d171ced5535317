//! Resultants by evaluation/interpolation modulo primes and Chinese remaindering.
//!
//! The Sylvester matrix is laid out with coefficients in ascending order, so
//! `resultant(x - a, x - b) = b - a`. Swapping the arguments multiplies the
//! result by `(-1)^(deg p * deg q)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::gaussian::GaussianRational as GR;
use crate::modular::{self, add_mod, mul_mod, sub_mod, Crt, PrimeStream};
use crate::poly::{Chart, Monomial, PlanePoly};
use crate::{Error, Result};

/// Gaussian integer `(re, im)`.
pub type GInt = (BigInt, BigInt);

/// Resultant of `p` and `q` with respect to variable `var`.
///
/// Affine inputs give an affine polynomial in the remaining variable (kept in
/// its own slot); projective inputs give a binary form of degree
/// `deg p * deg q` in the two remaining variables.
pub fn resultant(p: &PlanePoly, q: &PlanePoly, var: usize) -> Result<PlanePoly> {
    if p.chart() != q.chart() {
        return Err(Error::Chart(
            "resultant of polynomials in different charts".into(),
        ));
    }
    match p.chart() {
        Chart::Affine => {
            let w = 1 - var;
            let (a, na) = coeffs_in(p, var, w, None);
            let (b, nb) = coeffs_in(q, var, w, None);
            if na == 0 && nb == 0 {
                return Err(Error::Degenerate(
                    "both polynomials are constant in the eliminated variable".into(),
                ));
            }
            let r = resultant_dense(&a, &b);
            let mut out = PlanePoly::zero(Chart::Affine);
            for (k, c) in r.into_iter().enumerate() {
                let mut e = [0u32; 3];
                e[w] = k as u32;
                out.add_term(Monomial(e), c);
            }
            Ok(out)
        }
        Chart::Projective => {
            if !p.is_homogeneous() || !q.is_homogeneous() {
                return Err(Error::Chart("projective resultant needs forms".into()));
            }
            let rest: Vec<usize> = (0..3).filter(|&j| j != var).collect();
            let (u, v) = (rest[0], rest[1]);
            let dp = p.degree();
            let dq = q.degree();
            if p.degree_in(var) == 0 && q.degree_in(var) == 0 {
                return Err(Error::Degenerate(
                    "both polynomials are constant in the eliminated variable".into(),
                ));
            }
            let (a, _) = coeffs_in(p, var, u, Some(dp));
            let (b, _) = coeffs_in(q, var, u, Some(dq));
            let r = resultant_dense(&a, &b);
            let total = dp * dq;
            let mut out = PlanePoly::zero(Chart::Projective);
            for (k, c) in r.into_iter().enumerate() {
                let mut e = [0u32; 3];
                e[u] = k as u32;
                e[v] = total - k as u32;
                out.add_term(Monomial(e), c);
            }
            Ok(out)
        }
    }
}

/// Coefficients of `f` as a polynomial in `var`, each a dense polynomial in `w`
/// (other variables are ignored, i.e. set to 1). `formal` overrides the degree.
fn coeffs_in(f: &PlanePoly, var: usize, w: usize, formal: Option<u32>) -> (Vec<Vec<GR>>, usize) {
    let n = formal.unwrap_or_else(|| f.degree_in(var)) as usize;
    let dw = f.degree_in(w) as usize;
    let mut out = vec![vec![GR::zero(); dw + 1]; n + 1];
    for (m, c) in f.terms() {
        out[m.0[var] as usize][m.0[w] as usize] += c;
    }
    (out, n)
}

/// Resultant of `sum a[k] y^k` and `sum b[k] y^k` with coefficients dense in `w`.
/// Formal degrees are `a.len() - 1` and `b.len() - 1`.
pub fn resultant_dense(a: &[Vec<GR>], b: &[Vec<GR>]) -> Vec<GR> {
    let (ai, la) = to_gaussian_integers(a);
    let (bi, lb) = to_gaussian_integers(b);
    let na = a.len() - 1;
    let nb = b.len() - 1;
    let r = resultant_gint(&ai, &bi);
    // Res(la*A, lb*B) = la^nb * lb^na * Res(A, B); the evaluation path computes
    // (-1)^(na*nb) Res(A, B)
    let mut scale = BigRational::from_integer(num_traits::pow(la, nb) * num_traits::pow(lb, na));
    if na * nb % 2 == 1 {
        scale = -scale;
    }
    let mut out: Vec<GR> = r
        .into_iter()
        .map(|(re, im)| {
            GR::new(
                BigRational::new(re, BigInt::one()) / &scale,
                BigRational::new(im, BigInt::one()) / &scale,
            )
        })
        .collect();
    while out.len() > 1 && out.last().unwrap().is_zero() {
        out.pop();
    }
    if out.len() == 1 && out[0].is_zero() {
        out.clear();
    }
    out
}

fn to_gaussian_integers(a: &[Vec<GR>]) -> (Vec<Vec<GInt>>, BigInt) {
    let mut l = BigInt::one();
    for row in a {
        for c in row {
            l = l.lcm(&c.denom_lcm());
        }
    }
    let lr = BigRational::from_integer(l.clone());
    let out = a
        .iter()
        .map(|row| {
            row.iter()
                .map(|c| ((c.re() * &lr).to_integer(), (c.im() * &lr).to_integer()))
                .collect()
        })
        .collect();
    (out, l)
}

/// Integer-coefficient real variant; returns coefficients low to high (empty if zero).
pub fn resultant_int(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<BigInt> {
    let lift = |v: &[Vec<BigInt>]| -> Vec<Vec<GInt>> {
        v.iter()
            .map(|r| r.iter().map(|c| (c.clone(), BigInt::zero())).collect())
            .collect()
    };
    let mut r: Vec<BigInt> = resultant_gint(&lift(a), &lift(b))
        .into_iter()
        .map(|(re, _)| re)
        .collect();
    while r.last().map(|c| c.is_zero()).unwrap_or(false) {
        r.pop();
    }
    r
}

fn degree_of(v: &[GInt]) -> Option<usize> {
    v.iter()
        .rposition(|(re, im)| !re.is_zero() || !im.is_zero())
}

/// Upper bound on deg_w of the resultant.
fn degree_bound(a: &[Vec<GInt>], b: &[Vec<GInt>]) -> usize {
    let na = a.len() - 1;
    let nb = b.len() - 1;
    let ma = a.iter().filter_map(|r| degree_of(r)).max().unwrap_or(0);
    let mb = b.iter().filter_map(|r| degree_of(r)).max().unwrap_or(0);
    let naive = nb * ma + na * mb;
    let ta = a
        .iter()
        .enumerate()
        .filter_map(|(k, r)| degree_of(r).map(|d| d + k))
        .max()
        .unwrap_or(0);
    let tb = b
        .iter()
        .enumerate()
        .filter_map(|(k, r)| degree_of(r).map(|d| d + k))
        .max()
        .unwrap_or(0);
    naive.min(ta.max(na) * tb.max(nb))
}

/// log2 of a Hadamard bound on every coefficient of the resultant.
fn coefficient_bits(a: &[Vec<GInt>], b: &[Vec<GInt>]) -> u64 {
    let row_bits = |v: &[Vec<GInt>]| -> u64 {
        let mut s = BigInt::zero();
        for e in v {
            let one_norm: BigInt = e.iter().map(|(re, im)| re.abs() + im.abs()).sum();
            s += &one_norm * &one_norm;
        }
        modular::bits_of(&s) / 2 + 1
    };
    let na = (a.len() - 1) as u64;
    let nb = (b.len() - 1) as u64;
    nb * row_bits(a) + na * row_bits(b) + 2
}

fn reduce_rows(v: &[Vec<GInt>], p: u64, iota: u64) -> Vec<Vec<u64>> {
    v.iter()
        .map(|r| {
            r.iter()
                .map(|(re, im)| {
                    if im.is_zero() {
                        modular::reduce(re, p)
                    } else {
                        add_mod(
                            modular::reduce(re, p),
                            mul_mod(modular::reduce(im, p), iota, p),
                            p,
                        )
                    }
                })
                .collect()
        })
        .collect()
}

fn eval_mod(poly: &[u64], x: u64, p: u64) -> u64 {
    poly.iter()
        .rev()
        .fold(0u64, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
}

fn sylvester_mod(av: &[u64], bv: &[u64]) -> Vec<Vec<u64>> {
    let na = av.len() - 1;
    let nb = bv.len() - 1;
    let n = na + nb;
    let mut m = vec![vec![0u64; n]; n];
    for r in 0..nb {
        for (k, &c) in av.iter().enumerate() {
            m[r][r + k] = c;
        }
    }
    for r in 0..na {
        for (k, &c) in bv.iter().enumerate() {
            m[nb + r][r + k] = c;
        }
    }
    m
}

/// Core engine over Z[i]; returns coefficients low to high, trailing zeros kept.
pub fn resultant_gint(a: &[Vec<GInt>], b: &[Vec<GInt>]) -> Vec<GInt> {
    let na = a.len() - 1;
    let nb = b.len() - 1;
    if na + nb == 0 {
        return vec![(BigInt::one(), BigInt::zero())];
    }
    let real = a
        .iter()
        .chain(b.iter())
        .all(|r| r.iter().all(|(_, im)| im.is_zero()));
    let deg = degree_bound(a, b);
    let npts = deg + 1;
    let need_bits = coefficient_bits(a, b) + 1;
    let mut crt_re = Crt::new(npts);
    let mut crt_im = Crt::new(npts);
    let xs: Vec<u64> = (0..npts as u64).collect();
    for (p, iota) in PrimeStream::new() {
        let image = |io: u64| -> Vec<u64> {
            let ar = reduce_rows(a, p, io);
            let br = reduce_rows(b, p, io);
            let ys: Vec<u64> = xs
                .iter()
                .map(|&x| {
                    let av: Vec<u64> = ar.iter().map(|r| eval_mod(r, x, p)).collect();
                    let bv: Vec<u64> = br.iter().map(|r| eval_mod(r, x, p)).collect();
                    modular::det_mod(sylvester_mod(&av, &bv), p)
                })
                .collect();
            modular::interpolate(&xs, &ys, p)
        };
        if real {
            crt_re.add(&image(iota), p);
        } else {
            let plus = image(iota);
            let minus = image(p - iota);
            let inv2 = modular::inv_mod(2, p);
            let inv2i = modular::inv_mod(mul_mod(2, iota, p), p);
            let re: Vec<u64> = plus
                .iter()
                .zip(&minus)
                .map(|(&x, &y)| mul_mod(add_mod(x, y, p), inv2, p))
                .collect();
            let im: Vec<u64> = plus
                .iter()
                .zip(&minus)
                .map(|(&x, &y)| mul_mod(sub_mod(x, y, p), inv2i, p))
                .collect();
            crt_re.add(&re, p);
            crt_im.add(&im, p);
        }
        if modular::bits_of(&crt_re.modulus) > need_bits {
            break;
        }
    }
    let re = crt_re.symmetric();
    let im = if real {
        vec![BigInt::zero(); npts]
    } else {
        crt_im.symmetric()
    };
    re.into_iter().zip(im).collect()
}

/// Sylvester determinant over Q(i) for constant coefficients (reference path).
pub fn sylvester_det(a: &[GR], b: &[GR]) -> GR {
    let na = a.len() - 1;
    let nb = b.len() - 1;
    let n = na + nb;
    if n == 0 {
        return GR::one();
    }
    let mut m = vec![vec![GR::zero(); n]; n];
    for r in 0..nb {
        for (k, c) in a.iter().rev().enumerate() {
            m[r][r + k] = c.clone();
        }
    }
    for r in 0..na {
        for (k, c) in b.iter().rev().enumerate() {
            m[nb + r][r + k] = c.clone();
        }
    }
    let mut det = GR::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return GR::zero();
        };
        if piv != c {
            m.swap(piv, c);
            det = -det;
        }
        det = &det * &m[c][c];
        let inv = m[c][c].inv().unwrap();
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] * &inv;
            for j in c..n {
                let t = &f * &m[c][j];
                m[r][j] -= &t;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PlanePoly {
        PlanePoly::parse(s).unwrap()
    }

    #[test]
    fn small_examples() {
        assert!(resultant(&p("x^2 - 1"), &p("x - 1"), 0).unwrap().is_zero());
        assert_eq!(resultant(&p("x^2 + 1"), &p("x^2 - 2"), 0).unwrap(), p("9"));
        assert_eq!(resultant(&p("x - 3"), &p("x - 5"), 0).unwrap(), p("-2"));
        let r = resultant(&p("x - y"), &p("x + y - 2"), 0).unwrap();
        assert_eq!(r, p("2*y - 2"));
        assert!(resultant(&p("y"), &p("y + 1"), 0).is_err());
    }

    #[test]
    fn gaussian_coefficients() {
        // Res(x - i, x + i) = (x + i) at x = i
        assert_eq!(resultant(&p("x - i"), &p("x + i"), 0).unwrap(), p("(2*i)"));
        let f = p("x^2 + (1+i)*x*y + y^2 - 1");
        let g = p("x*y + (2*i)*x - 3");
        let r = resultant(&f, &g, 1).unwrap();
        // at x = 2: direct Sylvester determinant in y
        let x0 = GR::from_int(2);
        let fy: Vec<GR> = vec![
            &(&x0 * &x0) - &GR::one(),
            &GR::from_ints(1, 1) * &x0,
            GR::one(),
        ];
        let gy: Vec<GR> = vec![&(&GR::from_ints(0, 2) * &x0) - &GR::from_int(3), x0.clone()];
        assert_eq!(r.eval(&[x0, GR::zero()]), sylvester_det(&fy, &gy));
    }

    #[test]
    fn projective_form() {
        let f = p("x0*x1 - x2^2");
        let g = p("x1 - x2");
        let r = resultant(&f, &g, 2).unwrap();
        assert!(r.is_homogeneous());
        assert_eq!(r.degree(), 2);
        // common points have x1 = x2 and x0*x1 = x1^2, i.e. x1 (x0 - x1) = 0
        let at = |a: i64, b: i64| r.eval(&[GR::from_int(a), GR::from_int(b), GR::zero()]);
        assert!(at(1, 1).is_zero());
        assert!(at(1, 0).is_zero());
        assert!(!at(1, 2).is_zero());
    }
}
