//! Real representations of cyclic groups, the weights of `λ(a, b, m)`, and the
//! dimension-function map `Ψ'` from `RO(C_m)` to functions on subgroups.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, SemigroupPair};
use crate::dense::{hnf_rows, kernel_basis, IntMatrix};
use crate::{Error, Result};

pub fn divisors(m: u64) -> Vec<u64> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

/// The smallest `0 < d <= b` with `ad ≡ 1 (mod b)`, and `c = (ad - 1)/b`, so
/// that `ad - bc = 1`.
pub fn canonical_cd(sg: SemigroupPair) -> (i64, i64) {
    let (a, b) = (sg.a(), sg.b());
    let d = (1..=b).find(|&d| (a * d) % b == 1).expect("a is invertible modulo b");
    (((a * d - 1) / b) as i64, d as i64)
}

/// Integers strictly between `cm/a` and `dm/b` for a given `(c, d)` with `ad - bc = 1`.
pub fn lambda_weights_with(sg: SemigroupPair, m: u64, c: i64, d: i64) -> Vec<i64> {
    let (a, b, m) = (sg.a() as i64, sg.b() as i64, m as i64);
    // ν > cm/a  ⟺  νa > cm,  ν < dm/b  ⟺  νb < dm
    let lo = (c * m).div_euclid(a) + 1;
    let hi = (d * m + b - 1).div_euclid(b) - 1;
    (lo..=hi).filter(|&nu| nu * a > c * m && nu * b < d * m).collect()
}

/// Weights of `λ(a, b, m) = ⊕ C(ν)` over `ν ∈ (cm/a, dm/b)`; there are `ℓ(a, b, m)` of them.
pub fn lambda_weights(sg: SemigroupPair, m: u64) -> Result<Vec<i64>> {
    if m == 0 {
        return Err(Error::InvalidParameter("λ needs m >= 1".into()));
    }
    let (c, d) = canonical_cd(sg);
    let w = lambda_weights_with(sg, m, c, d);
    let l = sg.ell(m as i64);
    if w.len() as u64 != l {
        return Err(Error::CardinalityMismatch {
            what: "λ(a, b, m) weights",
            expected: l,
            found: w.len() as u64,
        });
    }
    Ok(w)
}

/// A virtual real representation of `C_m`: trivial and sign summands and the
/// planes `C(ν)` for `1 <= ν < m/2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VirtualRep {
    pub m: u64,
    pub trivial: i64,
    pub sign: i64,
    pub weights: BTreeMap<u64, i64>,
}

impl VirtualRep {
    pub fn zero(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("C_0 is not a finite cyclic group".into()));
        }
        Ok(Self {
            m,
            trivial: 0,
            sign: 0,
            weights: BTreeMap::new(),
        })
    }

    pub fn trivial(m: u64, n: i64) -> Result<Self> {
        let mut r = Self::zero(m)?;
        r.trivial = n;
        Ok(r)
    }

    pub fn sign(m: u64, n: i64) -> Result<Self> {
        if m % 2 == 1 && n != 0 {
            return Err(Error::InvalidParameter(format!("C_{m} has no sign representation")));
        }
        let mut r = Self::zero(m)?;
        r.sign = n;
        Ok(r)
    }

    /// `Σ C(ν)` over the given weights (any integers; normalized mod m).
    pub fn from_weights(m: u64, weights: &[i64]) -> Result<Self> {
        let mut r = Self::zero(m)?;
        for &nu in weights {
            r.add_plane(nu, 1);
        }
        Ok(r)
    }

    /// Adds `k` copies of `C(ν)`: `ν ≡ 0` is two trivial lines, `ν ≡ m/2` two
    /// sign lines, and `C(ν) ≅ C(m - ν)` as real representations.
    pub fn add_plane(&mut self, nu: i64, k: i64) {
        let m = self.m as i64;
        let mut nu = nu.rem_euclid(m);
        if nu == 0 {
            self.trivial += 2 * k;
            return;
        }
        if 2 * nu == m {
            self.sign += 2 * k;
            return;
        }
        if 2 * nu > m {
            nu = m - nu;
        }
        let e = self.weights.entry(nu as u64).or_insert(0);
        *e += k;
        if *e == 0 {
            self.weights.remove(&(nu as u64));
        }
    }

    pub fn plus(&self, other: &VirtualRep) -> Result<VirtualRep> {
        self.combine(other, 1)
    }

    pub fn minus(&self, other: &VirtualRep) -> Result<VirtualRep> {
        self.combine(other, -1)
    }

    fn combine(&self, other: &VirtualRep, k: i64) -> Result<VirtualRep> {
        if self.m != other.m {
            return Err(Error::InvalidParameter("representations of different groups".into()));
        }
        let mut r = self.clone();
        r.trivial += k * other.trivial;
        r.sign += k * other.sign;
        for (&nu, &n) in &other.weights {
            r.add_plane(nu as i64, k * n);
        }
        Ok(r)
    }

    pub fn scale(&self, k: i64) -> VirtualRep {
        let mut r = self.clone();
        r.trivial *= k;
        r.sign *= k;
        r.weights = self.weights.iter().map(|(&nu, &n)| (nu, k * n)).filter(|e| e.1 != 0).collect();
        r
    }

    pub fn is_zero(&self) -> bool {
        self.trivial == 0 && self.sign == 0 && self.weights.is_empty()
    }

    /// All multiplicities nonnegative.
    pub fn is_actual(&self) -> bool {
        self.trivial >= 0 && self.sign >= 0 && self.weights.values().all(|&n| n >= 0)
    }

    pub fn real_dimension(&self) -> i64 {
        self.trivial + self.sign + 2 * self.weights.values().sum::<i64>()
    }

    /// `+1` if the generator preserves orientation, `-1` otherwise.
    pub fn orientation_character(&self) -> i8 {
        if self.sign.rem_euclid(2) == 1 {
            -1
        } else {
            1
        }
    }

    /// The `C_d`-fixed subrepresentation, as a representation of `C_m / C_d ≅ C_{m/d}`.
    pub fn fixed_points(&self, d: u64) -> Result<VirtualRep> {
        if d == 0 || !self.m.is_multiple_of(d) {
            return Err(Error::NotDivisor { d, m: self.m });
        }
        let q = self.m / d;
        let mut r = VirtualRep::zero(q)?;
        r.trivial = self.trivial;
        // C_d is generated by τ^{m/d}, which acts on the sign line by (-1)^{m/d}
        if q.is_multiple_of(2) {
            r.sign = self.sign;
        }
        for (&nu, &n) in &self.weights {
            if nu % d == 0 {
                r.add_plane((nu / d) as i64, n);
            }
        }
        Ok(r)
    }

    /// Restriction along `C_{m'} ⊂ C_m` (the subgroup generated by `τ^{m/m'}`).
    pub fn restrict(&self, m_sub: u64) -> Result<VirtualRep> {
        if m_sub == 0 || !self.m.is_multiple_of(m_sub) {
            return Err(Error::NotDivisor { d: m_sub, m: self.m });
        }
        let step = self.m / m_sub;
        let mut r = VirtualRep::zero(m_sub)?;
        r.trivial = self.trivial;
        if step.is_multiple_of(2) {
            r.trivial += self.sign;
        } else {
            r.sign = self.sign;
        }
        for (&nu, &n) in &self.weights {
            // τ^{step} rotates C(ν) by ν/m' turns
            r.add_plane(nu as i64, n);
        }
        Ok(r)
    }
}

pub fn restrict_weights(rep: &VirtualRep, m_sub: u64) -> Result<VirtualRep> {
    rep.restrict(m_sub)
}

/// `Ψ'(α)(C_d) = dim (V^{C_d}) - dim (W^{C_d})` over the divisors `d | m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionFunction {
    pub m: u64,
    pub divisors: Vec<u64>,
    pub values: Vec<i64>,
}

pub fn fixed_dims(rep: &VirtualRep) -> DimensionFunction {
    let divs = divisors(rep.m);
    let values = divs
        .iter()
        .map(|&d| {
            let sign_fixed = (rep.m / d).is_multiple_of(2);
            rep.trivial
                + if sign_fixed { rep.sign } else { 0 }
                + rep
                    .weights
                    .iter()
                    .map(|(&nu, &n)| if nu % d == 0 { 2 * n } else { 0 })
                    .sum::<i64>()
        })
        .collect();
    DimensionFunction {
        m: rep.m,
        divisors: divs,
        values,
    }
}

/// Basis of `RO(C_m)`: trivial, sign (m even), then `C(ν)` for `1 <= ν < m/2`.
pub fn ro_basis(m: u64) -> Vec<VirtualRep> {
    let mut out = vec![VirtualRep::trivial(m, 1).expect("m >= 1")];
    if m.is_multiple_of(2) {
        out.push(VirtualRep::sign(m, 1).expect("m even"));
    }
    for nu in 1..m {
        if 2 * nu < m {
            out.push(VirtualRep::from_weights(m, &[nu as i64]).expect("m >= 1"));
        }
    }
    out
}

/// Matrix of `Ψ'` with one column per basis element of `RO(C_m)` and one row per divisor.
pub fn psi_matrix(m: u64) -> IntMatrix {
    let basis = ro_basis(m);
    let divs = divisors(m);
    let mut a = IntMatrix::zeros(divs.len(), basis.len());
    for (j, rep) in basis.iter().enumerate() {
        for (i, v) in fixed_dims(rep).values.into_iter().enumerate() {
            a.set(i, j, BigInt::from(v));
        }
    }
    a
}

fn rep_from_coords(m: u64, coords: &[BigInt]) -> Result<VirtualRep> {
    let basis = ro_basis(m);
    let mut r = VirtualRep::zero(m)?;
    for (b, x) in basis.iter().zip(coords) {
        let k = i64::try_from(x).map_err(|_| Error::Overflow("kernel coordinates"))?;
        r = r.plus(&b.scale(k))?;
    }
    Ok(r)
}

/// Integer kernel of `Ψ'` on `RO(C_m)`, in Hermite normal form.
pub fn psi_kernel(m: u64) -> Result<Vec<VirtualRep>> {
    if m < 2 {
        return Err(Error::InvalidParameter("psi_kernel needs m >= 2".into()));
    }
    let k = kernel_basis(&psi_matrix(m));
    if k.cols() == 0 {
        return Ok(Vec::new());
    }
    let h = hnf_rows(&k.transpose());
    (0..h.rows()).map(|i| rep_from_coords(m, h.row(i))).collect()
}

/// The image of `Ψ'` on `RO(C_p)` is `{(x, y) : x ≡ y mod 2}` (values at `e` and `C_p`).
pub fn image_congruence_cp(p: u64) -> Result<bool> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not an odd prime")));
    }
    let image = hnf_rows(&psi_matrix(p).transpose());
    let target = hnf_rows(&IntMatrix::from_rows(&[vec![1, 1], vec![2, 0]]));
    Ok(image == target)
}

/// Whether the lattice spanned by `reps` contains `rep`.
pub fn lattice_contains(reps: &[VirtualRep], rep: &VirtualRep) -> Result<bool> {
    let m = rep.m;
    let basis = ro_basis(m);
    let coords = |r: &VirtualRep| -> Vec<BigInt> {
        basis
            .iter()
            .map(|b| {
                if b.trivial == 1 {
                    BigInt::from(r.trivial)
                } else if b.sign == 1 {
                    BigInt::from(r.sign)
                } else {
                    let nu = *b.weights.keys().next().expect("plane");
                    BigInt::from(*r.weights.get(&nu).unwrap_or(&0))
                }
            })
            .collect()
    };
    let rows: Vec<Vec<BigInt>> = reps.iter().map(coords).collect();
    if rows.is_empty() {
        return Ok(rep.is_zero());
    }
    let lattice = hnf_rows(&IntMatrix::from_rows(&rows));
    let mut with = rows.clone();
    with.push(coords(rep));
    Ok(hnf_rows(&IntMatrix::from_rows(&with)) == lattice)
}

pub fn kernel_rank(m: u64) -> Result<usize> {
    Ok(psi_kernel(m)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(a: u64, b: u64) -> SemigroupPair {
        SemigroupPair::new(a, b).unwrap()
    }

    #[test]
    fn canonical_cd_examples() {
        assert_eq!(canonical_cd(sg(2, 3)), (1, 2));
        assert_eq!(canonical_cd(sg(3, 5)), (1, 2));
        for &(a, b) in &[(2, 3), (2, 5), (3, 4), (3, 5), (4, 7), (5, 9)] {
            let (c, d) = canonical_cd(sg(a, b));
            assert_eq!(a as i64 * d - b as i64 * c, 1);
            assert!(0 < d && d <= b as i64);
        }
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_weights(sg(2, 3), 5).unwrap(), vec![3]);
        assert_eq!(lambda_weights(sg(2, 3), 6).unwrap(), Vec::<i64>::new());
        assert_eq!(lambda_weights(sg(3, 5), 8).unwrap(), vec![3]);
    }

    #[test]
    fn fixed_dims_examples() {
        let r = VirtualRep::from_weights(5, &[1]).unwrap();
        assert_eq!(fixed_dims(&r).values, vec![2, 0]);
        let s = VirtualRep::sign(4, 1).unwrap();
        assert_eq!(fixed_dims(&s).values, vec![1, 1, 0]);
        let k = VirtualRep::from_weights(5, &[1]).unwrap().minus(&VirtualRep::from_weights(5, &[2]).unwrap()).unwrap();
        assert_eq!(fixed_dims(&k).values, vec![0, 0]);
    }

    #[test]
    fn kernel_examples() {
        assert!(psi_kernel(4).unwrap().is_empty());
        let k5 = psi_kernel(5).unwrap();
        assert_eq!(k5.len(), 1);
        let expected = VirtualRep::from_weights(5, &[1]).unwrap().minus(&VirtualRep::from_weights(5, &[2]).unwrap()).unwrap();
        assert!(k5[0] == expected || k5[0] == expected.scale(-1));
        let k8 = psi_kernel(8).unwrap();
        assert!(!k8.is_empty());
        let d13 = VirtualRep::from_weights(8, &[1]).unwrap().minus(&VirtualRep::from_weights(8, &[3]).unwrap()).unwrap();
        assert!(lattice_contains(&k8, &d13).unwrap());
    }

    #[test]
    fn image_congruence() {
        for p in [3, 5, 7, 11] {
            assert!(image_congruence_cp(p).unwrap());
        }
        assert!(image_congruence_cp(2).is_err());
        assert!(image_congruence_cp(9).is_err());
    }

    #[test]
    fn restriction_examples() {
        let r = VirtualRep::from_weights(6, &[3]).unwrap();
        assert_eq!(r.sign, 2);
        let r = VirtualRep {
            m: 6,
            trivial: 0,
            sign: 0,
            weights: BTreeMap::from([(3, 1)]),
        };
        assert_eq!(r.restrict(3).unwrap(), VirtualRep::trivial(3, 2).unwrap());
        assert_eq!(r.restrict(2).unwrap(), VirtualRep::sign(2, 2).unwrap());
        let l = VirtualRep::from_weights(12, &[1, 5]).unwrap();
        assert_eq!(l.restrict(12).unwrap(), l);
    }
}
