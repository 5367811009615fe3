//! Combinatorics of the numerical semigroup generated by a coprime pair
//! `(a, b)`: representation counts, truncation sets, the level sets used by
//! the K-group order formula, and exact big-integer valuation helpers.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A coprime pair `a, b >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SemigroupPair {
    a: u64,
    b: u64,
}

impl SemigroupPair {
    pub fn new(a: u64, b: u64) -> Result<Self> {
        if a < 2 || b < 2 || a.gcd(&b) != 1 {
            return Err(Error::InvalidPair { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn ab(&self) -> u64 {
        self.a * self.b
    }

    /// `(a-1)(b-1)`, the rank of the iterated kernel module.
    pub fn genus2(&self) -> u64 {
        (self.a - 1) * (self.b - 1)
    }

    /// Number of gaps of the semigroup, `(a-1)(b-1)/2`.
    pub fn gaps(&self) -> u64 {
        self.genus2() / 2
    }

    /// `#{(i, j) : i, j >= 1, ai + bj = m}`.
    pub fn ell(&self, m: i64) -> u64 {
        if m <= 0 {
            return 0;
        }
        let m = m as u64;
        (1..=m / self.a)
            .filter(|&i| {
                let rest = m - self.a * i;
                rest > 0 && rest.is_multiple_of(self.b)
            })
            .count() as u64
    }

    /// `#{(i, j) : i, j >= 0, ai + bj = m}`.
    pub fn reps_nonneg(&self, m: i64) -> u64 {
        if m < 0 {
            return 0;
        }
        let m = m as u64;
        (0..=m / self.a)
            .filter(|&i| (m - self.a * i).is_multiple_of(self.b))
            .count() as u64
    }

    /// Whether `m` lies in the semigroup `<a, b>` (0 included).
    pub fn contains(&self, m: i64) -> bool {
        self.reps_nonneg(m) > 0
    }

    /// Positive elements of the semigroup, as used for cyclic gaps.
    pub fn is_gap_length(&self, g: u64) -> bool {
        g > 0 && self.contains(g as i64)
    }

    /// The set `{k <= abi : ell(k) = i}`; its size is always `(a-1)(b-1)/2`.
    pub fn m_set(&self, i: u64) -> Result<Vec<u64>> {
        if i == 0 {
            return Err(Error::InvalidParameter("m_set needs i >= 1".into()));
        }
        let set: Vec<u64> = (1..=self.ab() * i)
            .filter(|&k| self.ell(k as i64) == i)
            .collect();
        if set.len() as u64 != self.gaps() {
            return Err(Error::CardinalityMismatch {
                what: "M_i",
                expected: self.gaps(),
                found: set.len() as u64,
            });
        }
        Ok(set)
    }

    /// `#{j >= 1 : ell(j) = i}`.
    pub fn count_ell_equal(&self, i: u64) -> u64 {
        (1..self.ab() * (i + 2))
            .filter(|&j| self.ell(j as i64) == i)
            .count() as u64
    }

    /// Exclusive upper bound past which `ell(m) > r` for every `m`.
    ///
    /// `ell(m) = reps_nonneg(m - a - b) >= floor((m - a - b) / ab)`, and
    /// `a + b <= ab` for `a, b >= 2`, so `m >= ab(r + 2)` forces `ell(m) >= r + 1`.
    pub fn ell_bound(&self, r: u64) -> u64 {
        self.ab() * (r + 2)
    }
}

impl fmt::Display for SemigroupPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Semigroup { a: u64, b: u64, r: u64 },
    Derived,
}

/// A finite set of positive integers, sorted and without duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationSet {
    elements: Vec<u64>,
    provenance: Provenance,
}

impl TruncationSet {
    /// `S(a, b, r) = {m >= 1 : ell(a, b, m) <= r}`.
    pub fn new(sg: SemigroupPair, r: u64) -> Self {
        let bound = sg.ell_bound(r);
        let elements: Vec<u64> = (1..bound).filter(|&m| sg.ell(m as i64) <= r).collect();
        // completeness certificate for the scan bound
        assert!(
            (bound..bound + sg.ab()).all(|m| sg.ell(m as i64) > r),
            "truncation set scan bound is not a certificate for {sg}, r = {r}"
        );
        Self {
            elements,
            provenance: Provenance::Semigroup {
                a: sg.a(),
                b: sg.b(),
                r,
            },
        }
    }

    pub fn from_elements(mut elements: Vec<u64>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() == Some(&0) {
            return Err(Error::InvalidParameter(
                "truncation sets contain positive integers only".into(),
            ));
        }
        Ok(Self {
            elements,
            provenance: Provenance::Derived,
        })
    }

    /// `S/d = {s >= 1 : d s in S}`.
    pub fn quot(&self, d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("quotient by 0".into()));
        }
        let elements = self
            .elements
            .iter()
            .filter(|&&m| m % d == 0)
            .map(|&m| m / d)
            .collect();
        Ok(Self {
            elements,
            provenance: Provenance::Derived,
        })
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, m: u64) -> bool {
        self.elements.binary_search(&m).is_ok()
    }

    pub fn max(&self) -> Option<u64> {
        self.elements.last().copied()
    }

    pub fn is_subset(&self, other: &TruncationSet) -> bool {
        self.elements.iter().all(|&m| other.contains(m))
    }
}

pub fn truncation_set(sg: SemigroupPair, r: u64) -> TruncationSet {
    TruncationSet::new(sg, r)
}

pub fn quot_set(s: &TruncationSet, d: u64) -> Result<TruncationSet> {
    s.quot(d)
}

/// Trial division; adequate for the primes that occur here (`p <= abi`).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

/// Prime factorization by trial division, as (prime, exponent) in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Exact p-adic valuation of a positive big integer.
pub fn nu(p: u64, n: &BigUint) -> Result<u64> {
    check_prime(p)?;
    if n.is_zero() {
        return Err(Error::InvalidParameter("valuation of 0".into()));
    }
    let p = BigUint::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Ok(v);
        }
        n = q;
        v += 1;
    }
}

pub fn nu_u64(p: u64, mut n: u64) -> Result<u64> {
    check_prime(p)?;
    if n == 0 {
        return Err(Error::InvalidParameter("valuation of 0".into()));
    }
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    Ok(v)
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Legendre's formula `sum_k floor(n / p^k)`.
pub fn factorial_valuation(p: u64, n: u64) -> Result<u64> {
    check_prime(p)?;
    let mut v = 0;
    let mut q = n;
    while q > 0 {
        q /= p;
        v += q;
    }
    Ok(v)
}
