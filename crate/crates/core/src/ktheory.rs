//! Orders and ranks of the relative K-groups of `Z[x, y]/(x^b - y^a)`, the
//! prime-by-prime corner sums behind them, and cardinalities for the square of
//! Verschiebung maps over `F_p`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{factorial, factorial_valuation, is_prime, nu_u64, primes_up_to, truncation_set, SemigroupPair};
use crate::{Error, Result};

/// Serialize big integers as decimal strings.
pub mod big_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Rank of `K_{2i}`: `(a-1)(b-1)` for `i >= 1`, `(a-1)(b-1)/2` for `i = 0`.
pub fn k_even_rank(sg: SemigroupPair, i: u64) -> u64 {
    if i == 0 {
        sg.gaps()
    } else {
        sg.genus2()
    }
}

/// `ν_p` of `i!^{(a-1)(b-1)} i! (abi)! / (i^{(a-1)(b-1)/2} M_i (ai)! (bi)!)`.
pub fn odd_order_valuation(sg: SemigroupPair, i: u64, p: u64) -> Result<i64> {
    if i == 0 {
        return Err(Error::InvalidParameter("odd K-groups start at i = 1".into()));
    }
    let (a, b, n) = (sg.a(), sg.b(), sg.genus2());
    let fv = |x: u64| -> Result<i64> { Ok(factorial_valuation(p, x)? as i64) };
    let mut v = (n as i64 + 1) * fv(i)? + fv(a * b * i)? - fv(a * i)? - fv(b * i)?;
    v -= sg.gaps() as i64 * nu_u64(p, i)? as i64;
    for k in sg.m_set(i)? {
        v -= nu_u64(p, k)? as i64;
    }
    Ok(v)
}

/// `|K_{2i-1}|` as `prime -> exponent`.
pub fn k_odd_order_factored(sg: SemigroupPair, i: u64) -> Result<BTreeMap<u64, u64>> {
    let mut out = BTreeMap::new();
    for p in primes_up_to(sg.ab() * i) {
        let v = odd_order_valuation(sg, i, p)?;
        if v < 0 {
            return Err(Error::InexactDivision(format!(
                "ν_{p} of the K_{} order formula is {v} for ({}, {})",
                2 * i - 1,
                sg.a(),
                sg.b()
            )));
        }
        if v > 0 {
            out.insert(p, v as u64);
        }
    }
    Ok(out)
}

pub fn from_factored(f: &BTreeMap<u64, u64>) -> BigUint {
    f.iter().fold(BigUint::one(), |acc, (&p, &e)| acc * BigUint::from(p).pow(e as u32))
}

/// `|K_{2i-1}|`, assembled from its factorization.
pub fn k_odd_order(sg: SemigroupPair, i: u64) -> Result<BigUint> {
    Ok(from_factored(&k_odd_order_factored(sg, i)?))
}

/// The same order by evaluating the formula with big integers and dividing exactly.
pub fn k_odd_order_direct(sg: SemigroupPair, i: u64) -> Result<BigUint> {
    if i == 0 {
        return Err(Error::InvalidParameter("odd K-groups start at i = 1".into()));
    }
    let (a, b, n) = (sg.a(), sg.b(), sg.genus2());
    let fi = factorial(i);
    let num = fi.pow(n as u32 + 1) * factorial(a * b * i);
    let mi: BigUint = sg.m_set(i)?.into_iter().map(BigUint::from).product();
    let den = BigUint::from(i).pow(sg.gaps() as u32) * mi * factorial(a * i) * factorial(b * i);
    if &num % &den != BigUint::ZERO {
        return Err(Error::InexactDivision(format!(
            "K_{} order formula for ({a}, {b})",
            2 * i - 1
        )));
    }
    Ok(num / den)
}

/// The four corner sums at a prime, laid out as in the square: upper left
/// runs over `a, b | m`, upper right over `b | m`, lower left over `a | m`,
/// lower right over all `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerValuations {
    pub upper_left: u64,
    pub upper_right: u64,
    pub lower_left: u64,
    pub lower_right: u64,
}

impl CornerValuations {
    /// Valuation of the iterated cokernel when all Verschiebungs are injective.
    pub fn combined(&self) -> i64 {
        self.lower_right as i64 + self.upper_left as i64 - self.lower_left as i64 - self.upper_right as i64
    }
}

/// `Σ ν_p(i - ℓ(m)) + ν_p(m / d)` over `m` divisible by `d` with `ℓ(m) < i`.
fn corner(sg: SemigroupPair, i: u64, p: u64, d: u64) -> Result<u64> {
    // ℓ(m) >= i once m >= ab(i + 1)
    let bound = sg.ab() * (i + 1);
    let mut s = 0;
    let mut m = d;
    while m < bound {
        let l = sg.ell(m as i64);
        if l < i {
            s += nu_u64(p, i - l)? + nu_u64(p, m / d)?;
        }
        m += d;
    }
    Ok(s)
}

pub fn corner_valuations(sg: SemigroupPair, i: u64, p: u64) -> Result<CornerValuations> {
    if i == 0 {
        return Err(Error::InvalidParameter("corner sums need i >= 1".into()));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let (a, b) = (sg.a(), sg.b());
    Ok(CornerValuations {
        upper_left: corner(sg, i, p, a * b)?,
        upper_right: corner(sg, i, p, b)?,
        lower_left: corner(sg, i, p, a)?,
        lower_right: corner(sg, i, p, 1)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationCheck {
    pub p: u64,
    pub corners: CornerValuations,
    /// `ν_p` of `i!^2`, `i!^a (ai)!`, `i!^b (bi)!`, `i!^{ab} (abi)! / (i^{(a-1)(b-1)/2} M_i)`.
    pub closed_forms: [i64; 4],
    pub formula: i64,
    pub from_order: u64,
    pub holds: bool,
}

/// Compares, at one prime, the corner sums, their closed forms, the valuation
/// of the order formula and the valuation of the computed order.
pub fn valuation_check(sg: SemigroupPair, i: u64, p: u64) -> Result<ValuationCheck> {
    let c = corner_valuations(sg, i, p)?;
    let (a, b) = (sg.a(), sg.b());
    let fv = |x: u64| -> Result<i64> { Ok(factorial_valuation(p, x)? as i64) };
    let vi = fv(i)?;
    let mut lr = (a * b) as i64 * vi + fv(a * b * i)? - sg.gaps() as i64 * nu_u64(p, i)? as i64;
    for k in sg.m_set(i)? {
        lr -= nu_u64(p, k)? as i64;
    }
    let closed = [2 * vi, a as i64 * vi + fv(a * i)?, b as i64 * vi + fv(b * i)?, lr];
    let formula = odd_order_valuation(sg, i, p)?;
    let order = k_odd_order_factored(sg, i)?;
    let from_order = order.get(&p).copied().unwrap_or(0);
    // the b | m corner runs over m = bk with k <= ai, the a | m corner over k <= bi
    let holds = closed[0] == c.upper_left as i64
        && closed[1] == c.upper_right as i64
        && closed[2] == c.lower_left as i64
        && closed[3] == c.lower_right as i64
        && c.combined() == formula
        && formula == from_order as i64;
    Ok(ValuationCheck {
        p,
        corners: c,
        closed_forms: closed,
        formula,
        from_order,
        holds,
    })
}

pub fn valuation_crosscheck(sg: SemigroupPair, i: u64, p: u64) -> Result<bool> {
    Ok(valuation_check(sg, i, p)?.holds)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorIdentities {
    /// `(abi)! / M_i = ∏_{ℓ(k) < i} k`
    pub abi: bool,
    /// `(ai)! = ∏_{ℓ(bk) < i} k`
    pub ai: bool,
    /// `(bi)! = ∏_{ℓ(ak) < i} k`
    pub bi: bool,
    /// `i! = ∏_{ℓ(abk) < i} k`
    pub i: bool,
}

impl FactorIdentities {
    pub fn all(&self) -> bool {
        self.abi && self.ai && self.bi && self.i
    }
}

fn product_below(sg: SemigroupPair, i: u64, step: u64) -> BigUint {
    let bound = sg.ab() * (i + 1) / step + 1;
    (1..=bound)
        .filter(|&k| sg.ell((k * step) as i64) < i)
        .map(BigUint::from)
        .product()
}

pub fn factor_identities(sg: SemigroupPair, i: u64) -> Result<FactorIdentities> {
    if i == 0 {
        return Err(Error::InvalidParameter("factor identities need i >= 1".into()));
    }
    let (a, b) = (sg.a(), sg.b());
    let mi: BigUint = sg.m_set(i)?.into_iter().map(BigUint::from).product();
    let abi = factorial(a * b * i);
    Ok(FactorIdentities {
        abi: &abi % &mi == BigUint::ZERO && abi / mi == product_below(sg, i, 1),
        ai: factorial(a * i) == product_below(sg, i, b),
        bi: factorial(b * i) == product_below(sg, i, a),
        i: factorial(i) == product_below(sg, i, a * b),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KGroupReport {
    pub a: u64,
    pub b: u64,
    pub i: u64,
    /// Rank of `K_{2i}`.
    pub even_rank: u64,
    /// Order of `K_{2i-1}` (absent for `i = 0`).
    #[serde(with = "opt_big")]
    pub odd_order: Option<BigUint>,
    pub odd_order_factored: BTreeMap<u64, u64>,
    pub corner_valuations: BTreeMap<u64, CornerValuations>,
}

mod opt_big {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_str(&x.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| s.parse().map_err(serde::de::Error::custom)).transpose()
    }
}

impl KGroupReport {
    /// `p1^e1·p2^e2·...`
    pub fn factorization_string(&self) -> String {
        if self.odd_order_factored.is_empty() {
            return "1".into();
        }
        self.odd_order_factored
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect::<Vec<_>>()
            .join("·")
    }
}

pub fn k_group_report(sg: SemigroupPair, i: u64) -> Result<KGroupReport> {
    let mut report = KGroupReport {
        a: sg.a(),
        b: sg.b(),
        i,
        even_rank: k_even_rank(sg, i),
        odd_order: None,
        odd_order_factored: BTreeMap::new(),
        corner_valuations: BTreeMap::new(),
    };
    if i >= 1 {
        let f = k_odd_order_factored(sg, i)?;
        report.odd_order = Some(from_factored(&f));
        for p in primes_up_to(sg.ab() * i) {
            report.corner_valuations.insert(p, corner_valuations(sg, i, p)?);
        }
        report.odd_order_factored = f;
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpSquareOrders {
    pub p: u64,
    pub r: u64,
    pub s: usize,
    pub s_a: usize,
    pub s_b: usize,
    pub s_ab: usize,
    /// `|S| - |S/a| - |S/b| + |S/ab|`: the iterated cokernel has order `p^exponent`.
    pub exponent: i64,
}

/// Cardinalities of `S = S(a, b, r)` and its quotients, with `|W_S(F_p)| = p^{|S|}`.
pub fn fp_square_orders(sg: SemigroupPair, r: u64, p: u64) -> Result<FpSquareOrders> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if sg.a().is_multiple_of(p) {
        return Err(Error::OutOfRegime(format!("p = {p} divides a = {}", sg.a())));
    }
    let s = truncation_set(sg, r);
    let (s_a, s_b, s_ab) = (s.quot(sg.a())?.len(), s.quot(sg.b())?.len(), s.quot(sg.ab())?.len());
    Ok(FpSquareOrders {
        p,
        r,
        s: s.len(),
        s_a,
        s_b,
        s_ab,
        exponent: s.len() as i64 - s_a as i64 - s_b as i64 + s_ab as i64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(a: u64, b: u64) -> SemigroupPair {
        SemigroupPair::new(a, b).unwrap()
    }

    #[test]
    fn ranks() {
        assert_eq!(k_even_rank(sg(3, 5), 0), 4);
        assert_eq!(k_even_rank(sg(3, 5), 2), 8);
        assert_eq!(k_even_rank(sg(2, 3), 1), 2);
    }

    #[test]
    fn orders() {
        let o = k_odd_order(sg(3, 5), 1).unwrap();
        assert_eq!(o, BigUint::from(113400u32));
        assert_eq!(k_odd_order_factored(sg(3, 5), 1).unwrap(), BTreeMap::from([(2, 3), (3, 4), (5, 2), (7, 1)]));
        assert_eq!(k_odd_order(sg(2, 3), 1).unwrap(), BigUint::from(12u32));
        for i in 1..=6 {
            assert_eq!(k_odd_order(sg(3, 4), i).unwrap(), k_odd_order_direct(sg(3, 4), i).unwrap());
        }
    }

    #[test]
    fn corners() {
        let c = corner_valuations(sg(3, 5), 1, 2).unwrap();
        assert_eq!(c.lower_right, 7);
        assert_eq!(c.upper_left, 0);
        assert_eq!(corner_valuations(sg(3, 5), 1, 3).unwrap().lower_left, 1);
        for (p, v) in [(2, 3), (3, 4), (5, 2), (7, 1)] {
            let ch = valuation_check(sg(3, 5), 1, p).unwrap();
            assert!(ch.holds, "{ch:?}");
            assert_eq!(ch.formula, v);
        }
        assert_eq!(valuation_check(sg(2, 3), 1, 2).unwrap().formula, 2);
        let far = valuation_check(sg(2, 3), 1, 11).unwrap();
        assert!(far.holds && far.formula == 0);
    }

    #[test]
    fn factor_identity_examples() {
        assert!(factor_identities(sg(3, 5), 1).unwrap().all());
        assert!(factor_identities(sg(2, 3), 2).unwrap().all());
    }

    #[test]
    fn fp_examples() {
        let f = fp_square_orders(sg(3, 5), 0, 2).unwrap();
        assert_eq!((f.s, f.s_a, f.s_b, f.s_ab, f.exponent), (11, 5, 3, 1, 4));
        assert_eq!(fp_square_orders(sg(2, 3), 0, 5).unwrap().exponent, 1);
        assert!(fp_square_orders(sg(3, 5), 0, 3).is_err());
    }
}
