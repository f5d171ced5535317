//! Dense exact linear algebra over Q(i).

use num_traits::{One, Zero};

use crate::gaussian::GaussianRational as GR;

pub type Matrix = Vec<Vec<GR>>;

/// Reduced row echelon form; pivots are chosen left to right, so the returned
/// pivot columns are the greedy independent set in column order.
pub fn rref(a: &Matrix) -> (Matrix, Vec<usize>) {
    let mut m = a.clone();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for j in c..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..cols {
                let t = &f * &m[r][j];
                m[i][j] -= &t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(a: &Matrix) -> usize {
    rref(a).1.len()
}

/// Solves a square nonsingular system.
pub fn solve(a: &Matrix, b: &[GR]) -> Option<Vec<GR>> {
    let n = a.len();
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (m, piv) = rref(&aug);
    if piv.len() != n || piv.iter().any(|&c| c >= n) {
        return None;
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}

/// Basis of the right kernel of `a` (with `cols` columns).
pub fn nullspace(a: &Matrix, cols: usize) -> Vec<Vec<GR>> {
    let (m, piv) = rref(a);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![GR::zero(); cols];
            v[f] = GR::one();
            for (r, &pc) in piv.iter().enumerate() {
                v[pc] = -&m[r][f];
            }
            v
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[GR]) -> Vec<GR> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(GR::zero(), |acc, (x, y)| &acc + &(x * y))
        })
        .collect()
}

pub fn det3(m: &[[GR; 3]; 3]) -> GR {
    let a = &m[0][0] * &(&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]);
    let b = &m[0][1] * &(&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0]);
    let c = &m[0][2] * &(&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
    &(&a - &b) + &c
}

pub fn inv3(m: &[[GR; 3]; 3]) -> Option<[[GR; 3]; 3]> {
    let d = det3(m);
    let di = d.inv()?;
    let c = |i: usize, j: usize| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0]
    };
    let mut out: [[GR; 3]; 3] = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            out[j][i] = &c(i, j) * &di;
        }
    }
    Some(out)
}

pub fn mul3(a: &[[GR; 3]; 3], b: &[[GR; 3]; 3]) -> [[GR; 3]; 3] {
    let mut out: [[GR; 3]; 3] = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            let mut s = GR::zero();
            for k in 0..3 {
                s += &(&a[i][k] * &b[k][j]);
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn apply3(m: &[[GR; 3]; 3], v: &[GR; 3]) -> [GR; 3] {
    let mut out: [GR; 3] = Default::default();
    for i in 0..3 {
        let mut s = GR::zero();
        for k in 0..3 {
            s += &(&m[i][k] * &v[k]);
        }
        out[i] = s;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64) -> GR {
        GR::from_int(n)
    }

    #[test]
    fn solve_and_kernel() {
        let a = vec![vec![g(2), g(1)], vec![g(1), g(3)]];
        let x = solve(&a, &[g(3), g(5)]).unwrap();
        assert_eq!(mat_vec(&a, &x), vec![g(3), g(5)]);
        let b = vec![vec![g(1), g(2), g(3)], vec![g(2), g(4), g(6)]];
        assert_eq!(rank(&b), 1);
        let ns = nullspace(&b, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(mat_vec(&b, &v).iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn inverse3() {
        let m = [
            [g(1), g(2), g(0)],
            [g(0), g(1), GR::i()],
            [g(3), g(0), g(1)],
        ];
        let inv = inv3(&m).unwrap();
        let id = mul3(&m, &inv);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(id[i][j], if i == j { g(1) } else { g(0) });
            }
        }
    }
}
