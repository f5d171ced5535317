//! Invariants of the quotient `Y = X/conj` of the double cover branched along an
//! Arnold surface in `Q = #k CP2bar`: signature by Hirzebruch's formula and `w2`
//! by the mod-2 branched-cover formula, both read off the intersection lattice.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::{Error, Result};

/// Symmetric integer intersection form in a fixed basis, stored by sparse rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionLattice {
    rank: usize,
    gram: Vec<BTreeMap<usize, i64>>,
}

impl IntersectionLattice {
    pub fn from_gram(gram: &[Vec<i64>]) -> Result<Self> {
        let n = gram.len();
        let mut rows = vec![BTreeMap::new(); n];
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Degenerate("Gram matrix is not square".into()));
            }
            for (j, &v) in row.iter().enumerate() {
                if v != gram[j][i] {
                    return Err(Error::Degenerate("Gram matrix is not symmetric".into()));
                }
                if v != 0 {
                    rows[i].insert(j, v);
                }
            }
        }
        Ok(IntersectionLattice {
            rank: n,
            gram: rows,
        })
    }

    /// `H_2(#k CP2bar)` with the exceptional classes `[E_i]`, `E_i.E_j = -delta_ij`.
    pub fn blown_up(k: usize) -> Self {
        let gram = (0..k).map(|i| BTreeMap::from([(i, -1)])).collect();
        IntersectionLattice { rank: k, gram }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.gram[i].get(&j).copied().unwrap_or(0)
    }

    pub fn pairing(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, row) in self.gram.iter().enumerate() {
            if a[i] == 0 {
                continue;
            }
            for (&j, &g) in row {
                s += a[i] * g * b[j];
            }
        }
        s
    }

    /// Signature by congruence diagonalization over Q.
    pub fn signature(&self) -> i64 {
        let n = self.rank;
        let mut a: Vec<BTreeMap<usize, BigRational>> = self
            .gram
            .iter()
            .map(|r| {
                r.iter()
                    .map(|(&j, &v)| (j, BigRational::from_integer(BigInt::from(v))))
                    .collect()
            })
            .collect();
        let get = |a: &Vec<BTreeMap<usize, BigRational>>, i: usize, j: usize| {
            a[i].get(&j).cloned().unwrap_or_else(BigRational::zero)
        };
        let mut alive: Vec<bool> = vec![true; n];
        let (mut pos, mut neg) = (0i64, 0i64);
        for _ in 0..n {
            let mut piv = (0..n).find(|&i| alive[i] && !get(&a, i, i).is_zero());
            if piv.is_none() {
                // all remaining diagonal entries vanish: e_j += e_l makes a_jj = 2 a_jl
                let pair = (0..n).filter(|&i| alive[i]).find_map(|j| {
                    a[j].iter()
                        .find(|(&l, v)| l != j && alive[l] && !v.is_zero())
                        .map(|(&l, _)| (j, l))
                });
                let Some((j, l)) = pair else { break };
                let row_l = a[l].clone();
                for (&c, v) in &row_l {
                    let e = a[j].entry(c).or_insert_with(BigRational::zero);
                    *e += v;
                }
                let col: Vec<(usize, BigRational)> = (0..n)
                    .filter(|&r| alive[r])
                    .map(|r| (r, get(&a, r, l)))
                    .collect();
                for (r, v) in col {
                    if v.is_zero() {
                        continue;
                    }
                    let e = a[r].entry(j).or_insert_with(BigRational::zero);
                    *e += v;
                }
                for r in 0..n {
                    a[r].retain(|_, v| !v.is_zero());
                }
                piv = Some(j);
            }
            let p = piv.unwrap();
            let d = get(&a, p, p);
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            alive[p] = false;
            let row_p: Vec<(usize, BigRational)> = a[p]
                .iter()
                .filter(|(&j, _)| alive[j])
                .map(|(&j, v)| (j, v.clone()))
                .collect();
            for (r, arp) in &row_p {
                let f = arp / &d;
                for (c, apc) in &row_p {
                    let e = a[*r].entry(*c).or_insert_with(BigRational::zero);
                    *e -= &f * apc;
                    if e.is_zero() {
                        a[*r].remove(c);
                    }
                }
            }
        }
        pos - neg
    }

    /// Characteristic class mod 2: the unique `w` with `w.x = x.x (mod 2)` for all `x`
    /// (Wu's formula), by elimination over GF(2).
    pub fn wu_class(&self) -> Result<Mod2Class> {
        let n = self.rank;
        let mut m: Vec<Vec<u8>> = (0..n)
            .map(|i| {
                let mut row: Vec<u8> = (0..n)
                    .map(|j| (self.entry(i, j).rem_euclid(2)) as u8)
                    .collect();
                row.push((self.entry(i, i).rem_euclid(2)) as u8);
                row
            })
            .collect();
        let mut r = 0;
        let mut cols = Vec::new();
        for c in 0..n {
            let Some(p) = (r..n).find(|&i| m[i][c] == 1) else {
                continue;
            };
            m.swap(r, p);
            for i in 0..n {
                if i != r && m[i][c] == 1 {
                    let src = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(src) {
                        *x ^= y;
                    }
                }
            }
            cols.push(c);
            r += 1;
        }
        if r < n {
            return Err(Error::Degenerate(
                "intersection form is degenerate mod 2".into(),
            ));
        }
        let mut w = vec![0u8; n];
        for (i, &c) in cols.iter().enumerate() {
            w[c] = m[i][n];
        }
        Ok(Mod2Class(w))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchClass {
    pub coefficients: Vec<i64>,
}

impl BranchClass {
    pub fn uniform(k: usize, c: i64) -> Self {
        BranchClass {
            coefficients: vec![c; k],
        }
    }

    pub fn self_intersection(&self, lattice: &IntersectionLattice) -> i64 {
        lattice.pairing(&self.coefficients, &self.coefficients)
    }
}

/// Element of `H_2(-; Z/2)` in the `[E_i]` basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mod2Class(pub Vec<u8>);

impl Mod2Class {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    pub fn add(&self, other: &Mod2Class) -> Mod2Class {
        Mod2Class(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect())
    }
}

impl std::fmt::Display for Mod2Class {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(i, _)| format!("[E{}]", i + 1))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Class of the Arnold surface: `6 * sum [E_i]`.
pub fn arnold_class(k: usize) -> BranchClass {
    BranchClass::uniform(k, 6)
}

/// `sigma(Y) = 2 sigma(Q) - A.A / 2` for the double cover branched along `a`.
pub fn branched_signature(lattice: &IntersectionLattice, a: &BranchClass) -> Result<i64> {
    let aa = a.self_intersection(lattice);
    if aa % 2 != 0 {
        return Err(Error::Degenerate(
            "branch class has odd self-intersection".into(),
        ));
    }
    Ok(2 * lattice.signature() - aa / 2)
}

/// `w2(Y)` pulled back from `w2(Q) + (A/2)_2`; the class must be divisible by two.
pub fn branched_w2(lattice: &IntersectionLattice, a: &BranchClass) -> Result<Mod2Class> {
    if a.coefficients.iter().any(|c| c % 2 != 0) {
        return Err(Error::Degenerate(
            "branch class is not divisible by 2".into(),
        ));
    }
    let half = Mod2Class(
        a.coefficients
            .iter()
            .map(|c| (c / 2).rem_euclid(2) as u8)
            .collect(),
    );
    Ok(lattice.wu_class()?.add(&half))
}

#[allow(non_snake_case)]
pub fn signature_Y(k: usize) -> i64 {
    branched_signature(&IntersectionLattice::blown_up(k), &arnold_class(k))
        .expect("6 * sum E_i has even square")
}

#[allow(non_snake_case)]
pub fn w2_Y(k: usize) -> Result<Mod2Class> {
    branched_w2(&IntersectionLattice::blown_up(k), &arnold_class(k))
}

/// Provenance of a property that is not computed here.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Verified,
    Assumed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinReport {
    pub k: usize,
    pub sigma_q: i64,
    pub branch_class: BranchClass,
    pub branch_square: i64,
    pub sigma_y: i64,
    pub w2_y: Mod2Class,
    pub spin: bool,
    pub simply_connected: Provenance,
}

pub fn spin_report(k: usize) -> Result<SpinReport> {
    if k == 0 {
        return Err(Error::Degenerate("k must be at least 1".into()));
    }
    let lattice = IntersectionLattice::blown_up(k);
    let a = arnold_class(k);
    let w2 = branched_w2(&lattice, &a)?;
    Ok(SpinReport {
        k,
        sigma_q: lattice.signature(),
        branch_square: a.self_intersection(&lattice),
        sigma_y: branched_signature(&lattice, &a)?,
        spin: w2.is_zero(),
        w2_y: w2,
        branch_class: a,
        simply_connected: Provenance::Assumed,
    })
}

impl SpinReport {
    pub fn to_value(&self) -> Value {
        json!({
            "schema": crate::certificate::SCHEMA_VERSION,
            "kind": "spin-report",
            "k": self.k,
            "sigma_Q": self.sigma_q,
            "branch_class": self.branch_class.coefficients,
            "branch_self_intersection": self.branch_square,
            "sigma_Y": self.sigma_y,
            "w2_Y": self.w2_y.0,
            "spin": self.spin,
            "simply_connected": match self.simply_connected {
                Provenance::Verified => "verified",
                Provenance::Assumed => "assumed",
            },
        })
    }
}

impl std::fmt::Display for SpinReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "k = {}", self.k)?;
        writeln!(f, "sigma(Q) = {}", self.sigma_q)?;
        writeln!(f, "A.A = {}", self.branch_square)?;
        writeln!(f, "σ = {}", self.sigma_y)?;
        writeln!(f, "w2 = {}", self.w2_y)?;
        writeln!(f, "spin = {}", self.spin)?;
        write!(f, "simply connected = assumed")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arnold_class_squares() {
        let l = IntersectionLattice::blown_up(2);
        assert_eq!(arnold_class(2).self_intersection(&l), -72);
        assert_eq!(
            arnold_class(0).self_intersection(&IntersectionLattice::blown_up(0)),
            0
        );
    }

    #[test]
    fn signatures() {
        assert_eq!(signature_Y(0), 0);
        assert_eq!(signature_Y(1), 16);
        assert_eq!(signature_Y(5), 80);
    }

    #[test]
    fn hyperbolic_signature_needs_off_diagonal_pivot() {
        let h = IntersectionLattice::from_gram(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(h.signature(), 0);
        assert!(h.wu_class().unwrap().is_zero());
        let m = IntersectionLattice::from_gram(&[vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, -1]])
            .unwrap();
        assert_eq!(m.signature(), -1);
    }

    #[test]
    fn w2_vanishes_only_for_odd_halves() {
        let l = IntersectionLattice::blown_up(3);
        for c in [2, 4, 6, 8] {
            let w = branched_w2(&l, &BranchClass::uniform(3, c)).unwrap();
            assert_eq!(w.is_zero(), (c / 2) % 2 == 1, "c = {c}");
        }
        assert!(branched_w2(&l, &BranchClass::uniform(3, 3)).is_err());
    }

    #[test]
    fn report_k1() {
        let r = spin_report(1).unwrap();
        assert_eq!((r.sigma_y, r.spin), (16, true));
        assert_eq!(r.simply_connected, Provenance::Assumed);
        assert!(spin_report(0).is_err());
    }
}
