//! The cyclic complexes `Σ(a, b, m)`, `X(a, b, m) = Δ^{m-1}/Σ(a, b, m)` and
//! `X_{s,a}`, with boundary maps and the rotation `v -> v + 1`.
//!
//! A simplex is a nonempty subset of `Z/m`, stored as a bitmask. Each family
//! is described by a condition on the cyclic gaps `r_1 - r_0, ..., r_0 + m - r_e`;
//! faces outside the family are dropped, which makes the same boundary rule
//! serve the subcomplex `Σ`, the relative complex `X` and the pointed
//! simplicial set `X_{s,a}`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::arith::SemigroupPair;
use crate::homology::ChainComplex;
use crate::sparse::{SignedPerm, SparseIntMatrix};
use crate::{Error, Result};

pub const MAX_AMBIENT: u64 = 62;
pub const MAX_X_AMBIENT: u64 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexKind {
    Sigma,
    XQuotient,
    Truncated,
    /// A subcomplex of `X_{s,a}` with the same homology but no rotation.
    TruncatedReduced,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Simplex {
    pub vertices: Vec<u32>,
    pub ambient: u64,
}

impl Simplex {
    pub fn from_mask(mask: u64, ambient: u64) -> Self {
        Self {
            vertices: (0..ambient as u32).filter(|&v| mask >> v & 1 == 1).collect(),
            ambient,
        }
    }

    pub fn mask(&self) -> u64 {
        self.vertices.iter().fold(0, |m, &v| m | 1 << v)
    }

    pub fn dimension(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Cyclic gaps `r_1 - r_0, ..., r_e - r_{e-1}, r_0 + m - r_e`.
    pub fn gaps(&self) -> Vec<u64> {
        gaps(self.mask(), self.ambient)
    }
}

pub fn gaps(mask: u64, m: u64) -> Vec<u64> {
    let v: Vec<u64> = (0..m).filter(|&k| mask >> k & 1 == 1).collect();
    let mut g: Vec<u64> = v.windows(2).map(|w| w[1] - w[0]).collect();
    if let (Some(&first), Some(&last)) = (v.first(), v.last()) {
        g.push(first + m - last);
    }
    g
}

/// Rotation `v -> v + 1` of a vertex set, with the sign of the re-sorting.
pub fn rotate_mask(mask: u64, m: u64) -> (u64, i8) {
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let top = mask >> (m - 1) & 1 == 1;
    let rotated = ((mask << 1) & full) | u64::from(top);
    let e = mask.count_ones() - 1;
    let sign = if top && e % 2 == 1 { -1 } else { 1 };
    (rotated, sign)
}

/// The marked word `t^{i-1} t_0 t^{k-i} ⊗ t^{k_1} ⊗ ... ⊗ t^{k_e}` of a simplex,
/// as `(k, i, [k_1, ..., k_e])`.
pub fn simplex_to_word(mask: u64, m: u64) -> (u64, u64, Vec<u64>) {
    let v: Vec<u64> = (0..m).filter(|&k| mask >> k & 1 == 1).collect();
    let (r0, re) = (v[0], *v.last().expect("nonempty simplex"));
    let factors = v.windows(2).map(|w| w[1] - w[0]).collect();
    (r0 + m - re, m - re, factors)
}

pub fn word_to_simplex(k: u64, i: u64, factors: &[u64], m: u64) -> Option<u64> {
    if i == 0 || i > k || k < i {
        return None;
    }
    let r0 = k - i;
    let mut mask = 1u64 << r0;
    let mut r = r0;
    for &f in factors {
        r += f;
        if f == 0 || r >= m {
            return None;
        }
        mask |= 1 << r;
    }
    (r == m - i).then_some(mask)
}

/// The action on words: lower the marker, or wrap the last factor
/// around to the front with sign `(-1)^e`.
pub fn word_tau(k: u64, i: u64, factors: &[u64]) -> (i8, (u64, u64, Vec<u64>)) {
    if i > 1 {
        return (1, (k, i - 1, factors.to_vec()));
    }
    match factors.split_last() {
        None => (1, (k, k, Vec::new())),
        Some((&last, rest)) => {
            let mut f = Vec::with_capacity(factors.len());
            f.push(k);
            f.extend_from_slice(rest);
            let sign = if factors.len() % 2 == 1 { -1 } else { 1 };
            (sign, (last, last, f))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicComplex {
    pub kind: ComplexKind,
    /// `(a, b)` for `Σ` and `X`, `(a, 0)` for the truncated families.
    pub a: u64,
    pub b: u64,
    /// Ambient cyclic order (`m`, or `s` for the truncated families).
    pub m: u64,
    cells: Vec<Vec<u64>>,
    boundary: Vec<SparseIntMatrix>,
    rotation: Vec<SignedPerm>,
}

impl CyclicComplex {
    fn from_cells(kind: ComplexKind, a: u64, b: u64, m: u64, mut all: Vec<u64>, with_rotation: bool) -> Result<Self> {
        all.sort_unstable_by_key(|&c| (c.count_ones(), c));
        all.dedup();
        let top = all.last().map_or(0, |c| c.count_ones() as usize);
        let mut cells: Vec<Vec<u64>> = vec![Vec::new(); top];
        for c in all {
            cells[c.count_ones() as usize - 1].push(c);
        }
        let index: Vec<HashMap<u64, u32>> = cells
            .iter()
            .map(|cs| cs.iter().enumerate().map(|(k, &c)| (c, k as u32)).collect())
            .collect();
        let mut boundary = Vec::with_capacity(top);
        for q in 0..top {
            if q == 0 {
                boundary.push(SparseIntMatrix::zero(0, cells[0].len()));
                continue;
            }
            let mut columns = Vec::with_capacity(cells[q].len());
            for &c in &cells[q] {
                let mut col = Vec::with_capacity(q + 1);
                let mut rest = c;
                let mut j = 0;
                while rest != 0 {
                    let bit = rest & rest.wrapping_neg();
                    rest ^= bit;
                    if let Some(&f) = index[q - 1].get(&(c ^ bit)) {
                        col.push((f, if j % 2 == 0 { 1 } else { -1 }));
                    }
                    j += 1;
                }
                col.sort_unstable_by_key(|e: &(u32, i64)| e.0);
                columns.push(col);
            }
            boundary.push(SparseIntMatrix::from_columns(cells[q - 1].len(), columns));
        }
        let mut rotation = Vec::new();
        if with_rotation {
            for q in 0..top {
                let mut images = Vec::with_capacity(cells[q].len());
                for &c in &cells[q] {
                    let (r, s) = rotate_mask(c, m);
                    let t = *index[q].get(&r).ok_or_else(|| {
                        Error::Inconsistent(format!("cell family is not rotation invariant at {c:#b}"))
                    })?;
                    images.push((t, s));
                }
                rotation.push(SignedPerm::new(images)?);
            }
        }
        let cx = Self {
            kind,
            a,
            b,
            m,
            cells,
            boundary,
            rotation,
        };
        cx.check()?;
        Ok(cx)
    }

    /// `∂∂ = 0`, `ρ∂ = ∂ρ` and `ρ^m = 1` in every degree.
    pub fn check(&self) -> Result<()> {
        for q in 2..self.cells.len() {
            if !self.boundary[q - 1].mul(&self.boundary[q])?.is_zero() {
                return Err(Error::Inconsistent(format!("∂∂ ≠ 0 in degree {q}")));
            }
        }
        if self.rotation.is_empty() {
            return Ok(());
        }
        for q in 1..self.cells.len() {
            let (rho, rho_low) = (&self.rotation[q], &self.rotation[q - 1]);
            for x in 0..self.cells[q].len() {
                let (t, s) = rho.image(x);
                let lhs: Vec<(u32, i64)> = self.boundary[q]
                    .column(t as usize)
                    .iter()
                    .map(|&(r, v)| (r, v * i64::from(s)))
                    .collect();
                let rhs = rho_low.apply(self.boundary[q].column(x));
                if lhs != rhs {
                    return Err(Error::Inconsistent(format!("rotation is not a chain map in degree {q}")));
                }
            }
        }
        for (q, rho) in self.rotation.iter().enumerate() {
            if !rho.pow(self.m).is_identity() {
                return Err(Error::Inconsistent(format!("rotation^m ≠ 1 in degree {q}")));
            }
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.cells.len().checked_sub(1)
    }

    pub fn cells(&self, q: usize) -> &[u64] {
        self.cells.get(q).map_or(&[], Vec::as_slice)
    }

    pub fn simplex(&self, q: usize, k: usize) -> Simplex {
        Simplex::from_mask(self.cells[q][k], self.m)
    }

    pub fn cell_index(&self, q: usize, mask: u64) -> Option<u32> {
        let cs = self.cells.get(q)?;
        let key = (mask.count_ones(), mask);
        cs.binary_search_by_key(&key, |&c| (c.count_ones(), c)).ok().map(|k| k as u32)
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(q, c)| if q % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) })
            .sum()
    }

    pub fn has_rotation(&self) -> bool {
        !self.rotation.is_empty()
    }

    pub fn rotation_matrix(&self, q: usize) -> Option<SparseIntMatrix> {
        self.rotation.get(q).map(SignedPerm::to_sparse)
    }
}

impl ChainComplex for CyclicComplex {
    fn num_degrees(&self) -> usize {
        self.cells.len()
    }
    fn dim(&self, q: usize) -> usize {
        self.cells[q].len()
    }
    fn boundary(&self, q: usize) -> &SparseIntMatrix {
        &self.boundary[q]
    }
    fn rotation(&self, q: usize) -> Option<&SignedPerm> {
        self.rotation.get(q)
    }
    fn order(&self) -> u64 {
        self.m
    }
    fn augmented(&self) -> bool {
        self.kind == ComplexKind::Sigma
    }
}

fn check_ambient(m: u64, max: u64) -> Result<()> {
    if m == 0 || m > max {
        return Err(Error::OutOfRegime(format!("ambient order {m} must lie in 1..={max}")));
    }
    Ok(())
}

/// All vertex sets of `Z/m` whose cyclic gaps all satisfy `ok`, enumerated by
/// extending from the smallest vertex.
fn cyclic_sets(m: u64, ok: &dyn Fn(u64) -> bool) -> Vec<u64> {
    fn extend(r0: u64, last: u64, mask: u64, m: u64, ok: &dyn Fn(u64) -> bool, parts: &[u64], out: &mut Vec<u64>) {
        if ok(r0 + m - last) {
            out.push(mask);
        }
        for &g in parts {
            let v = last + g;
            if v >= m {
                break;
            }
            extend(r0, v, mask | 1 << v, m, ok, parts, out);
        }
    }
    let parts: Vec<u64> = (1..m).filter(|&g| ok(g)).collect();
    let mut out = Vec::new();
    for r0 in 0..m {
        extend(r0, r0, 1 << r0, m, ok, &parts, &mut out);
    }
    out
}

/// `Σ(a, b, m)`: vertex sets of `Z/m` all of whose cyclic gaps lie in `<a, b>`.
pub fn build_sigma(sg: SemigroupPair, m: u64) -> Result<CyclicComplex> {
    check_ambient(m, MAX_AMBIENT)?;
    let cells = cyclic_sets(m, &|g| sg.is_gap_length(g));
    CyclicComplex::from_cells(ComplexKind::Sigma, sg.a(), sg.b(), m, cells, true)
}

/// Relative chains of `(Δ^{m-1}, Σ(a, b, m))`.
pub fn build_x(sg: SemigroupPair, m: u64) -> Result<CyclicComplex> {
    check_ambient(m, MAX_X_AMBIENT)?;
    let member = |mask: u64| gaps(mask, m).into_iter().all(|g| sg.is_gap_length(g));
    let cells: Vec<u64> = (1u64..1 << m).filter(|&c| !member(c)).collect();
    CyclicComplex::from_cells(ComplexKind::XQuotient, sg.a(), sg.b(), m, cells, true)
}

fn check_truncated(a: u64, s: u64) -> Result<()> {
    if a < 2 {
        return Err(Error::InvalidParameter(format!("truncation exponent a = {a} must be at least 2")));
    }
    check_ambient(s, MAX_AMBIENT)
}

/// `X_{s,a}`: vertex sets of `Z/s` all of whose cyclic gaps are below `a`,
/// i.e. the cyclic words in `x_0, x` of degree `s` with no run `x^a`.
pub fn build_truncated(a: u64, s: u64) -> Result<CyclicComplex> {
    check_truncated(a, s)?;
    let cells = cyclic_sets(s, &|g| g < a);
    CyclicComplex::from_cells(ComplexKind::Truncated, a, 0, s, cells, true)
}

/// Number of cells of `X_{s,a}`, without building it.
pub fn truncated_cell_count(a: u64, s: u64) -> u64 {
    // closed walks on Z/s with steps in 1..a, counted by the first vertex
    let mut total = 0u64;
    let mut ways = vec![0u64; s as usize + 1];
    ways[0] = 1;
    for n in 1..=s as usize {
        ways[n] = (1..a.min(n as u64 + 1)).map(|g| ways[n - g as usize]).sum();
    }
    for g in 1..a.min(s + 1) {
        // wrap gap g: the remaining s - g is split into steps below a; g positions for r_0
        total += g * ways[(s - g) as usize];
    }
    total
}

/// A subcomplex of `X_{s,a}` carrying the same homology: with fixed vertices
/// `F = {0, a, ..., ka}`, `k = floor(s/a) - 1`, keep the vertex sets containing
/// `F` in which every fixed vertex has neighbouring gaps summing to at least `a`.
///
/// Each fixed vertex `v` gives an acyclic matching `S <-> S ∪ {v}`; the
/// unmatched cells form a subcomplex, so the inclusion is a quasi-isomorphism.
pub fn build_truncated_reduced(a: u64, s: u64) -> Result<CyclicComplex> {
    check_truncated(a, s)?;
    if s < a {
        let cells = cyclic_sets(s, &|g| g < a);
        return CyclicComplex::from_cells(ComplexKind::TruncatedReduced, a, 0, s, cells, false);
    }
    let fixed: Vec<u64> = (0..s / a).map(|j| j * a).collect();
    let fmask = fixed.iter().fold(0u64, |m, &v| m | 1 << v);
    let cells: Vec<u64> = cyclic_sets(s, &|g| g < a)
        .into_iter()
        .filter(|&c| c & fmask == fmask && fixed.iter().all(|&v| neighbour_gaps(c, v, s) >= a))
        .collect();
    CyclicComplex::from_cells(ComplexKind::TruncatedReduced, a, 0, s, cells, false)
}

fn neighbour_gaps(mask: u64, v: u64, m: u64) -> u64 {
    let next = (1..=m).find(|&d| mask >> ((v + d) % m) & 1 == 1).expect("v is in mask");
    let prev = (1..=m).find(|&d| mask >> ((v + m - d) % m) & 1 == 1).expect("v is in mask");
    next + prev
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixedSubcomplex {
    pub complex: CyclicComplex,
    pub d: u64,
    pub m: u64,
    /// Result of comparing with the `C_d`-invariant simplices of `Σ(a, b, m)`;
    /// `None` when `Σ(a, b, m)` was too large to enumerate.
    pub certificate: Option<bool>,
}

pub const FIXED_CERTIFICATE_MAX: u64 = 24;

/// `C_d`-fixed points of `Σ(a, b, m)`, realized as `Σ(a, b, m/d)`.
pub fn fixed_subcomplex(sg: SemigroupPair, m: u64, d: u64) -> Result<FixedSubcomplex> {
    if d == 0 || !m.is_multiple_of(d) {
        return Err(Error::NotDivisor { d, m });
    }
    let complex = build_sigma(sg, m / d)?;
    let certificate = (m <= FIXED_CERTIFICATE_MAX).then(|| fixed_certificate(sg, m, d, &complex));
    Ok(FixedSubcomplex {
        complex,
        d,
        m,
        certificate,
    })
}

/// Invariant simplices of `Σ(a, b, m)` under `v -> v + m/d` correspond, by
/// intersecting with `[0, m/d)`, to the simplices of `Σ(a, b, m/d)` with the
/// same gap sequences.
fn fixed_certificate(sg: SemigroupPair, m: u64, d: u64, small: &CyclicComplex) -> bool {
    let period = m / d;
    let window = (1u64 << period) - 1;
    let big = cyclic_sets(m, &|g| sg.is_gap_length(g));
    let mut image: Vec<u64> = Vec::new();
    for c in big {
        let mut shifted = c;
        for _ in 0..period {
            shifted = rotate_mask(shifted, m).0;
        }
        if shifted != c {
            continue;
        }
        let low = c & window;
        let g_big = gaps(c, m);
        let g_small = gaps(low, period);
        if g_big[..g_small.len()] != g_small[..] {
            return false;
        }
        image.push(low);
    }
    image.sort_unstable();
    let mut expected: Vec<u64> = small.cells.iter().flatten().copied().collect();
    expected.sort_unstable();
    image == expected
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(a: u64, b: u64) -> SemigroupPair {
        SemigroupPair::new(a, b).unwrap()
    }

    fn brute_sigma(a: u64, b: u64, m: u64) -> Vec<usize> {
        let s = sg(a, b);
        let mut dims = vec![0usize; m as usize];
        for c in 1u64..1 << m {
            if gaps(c, m).iter().all(|&g| s.is_gap_length(g)) {
                dims[c.count_ones() as usize - 1] += 1;
            }
        }
        while dims.last() == Some(&0) {
            dims.pop();
        }
        dims
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(build_sigma(sg(2, 3), 5).unwrap().dims(), vec![5, 5]);
        let c = build_sigma(sg(2, 3), 6).unwrap();
        assert_eq!(c.dims(), vec![6, 9, 2]);
        assert_eq!(c.euler_characteristic(), -1);
        assert!(build_sigma(sg(2, 3), 1).unwrap().is_empty());
    }

    #[test]
    fn sigma_matches_brute_force() {
        for &(a, b) in &[(2, 3), (2, 5), (3, 4), (3, 5)] {
            for m in 1..=14 {
                assert_eq!(build_sigma(sg(a, b), m).unwrap().dims(), brute_sigma(a, b, m), "({a},{b}) m={m}");
            }
        }
    }

    #[test]
    fn sigma_and_x_partition_the_simplex() {
        for &(a, b) in &[(2, 3), (3, 5)] {
            for m in 1..=15 {
                let s = build_sigma(sg(a, b), m).unwrap().total_cells();
                let x = build_x(sg(a, b), m).unwrap().total_cells();
                assert_eq!(s + x, (1usize << m) - 1);
            }
        }
    }

    #[test]
    fn rotation_is_the_word_action() {
        for m in 1..=9u64 {
            for mask in 1u64..1 << m {
                let (k, i, f) = simplex_to_word(mask, m);
                assert_eq!(word_to_simplex(k, i, &f, m), Some(mask));
                let (sign, (k2, i2, f2)) = word_tau(k, i, &f);
                let (r, s) = rotate_mask(mask, m);
                assert_eq!(word_to_simplex(k2, i2, &f2, m), Some(r));
                assert_eq!(sign, s);
            }
        }
    }

    #[test]
    fn truncated_examples() {
        let c = build_truncated(2, 2).unwrap();
        assert_eq!(c.dims(), vec![0, 1]);
        let c = build_truncated(3, 3).unwrap();
        assert_eq!(c.dims(), vec![0, 3, 1]);
        for a in 2..=5 {
            for s in 1..=14 {
                let c = build_truncated(a, s).unwrap();
                assert_eq!(c.total_cells() as u64, truncated_cell_count(a, s), "a={a} s={s}");
            }
        }
    }

    #[test]
    fn fixed_certificates() {
        for &(a, b) in &[(2, 3), (2, 5), (3, 4), (3, 5)] {
            for m in 1..=12 {
                for d in (1..=m).filter(|d| m % d == 0) {
                    let f = fixed_subcomplex(sg(a, b), m, d).unwrap();
                    assert_eq!(f.certificate, Some(true), "({a},{b}) m={m} d={d}");
                }
            }
        }
        assert_eq!(fixed_subcomplex(sg(2, 3), 6, 2).unwrap().complex.dims(), vec![3]);
        assert!(fixed_subcomplex(sg(2, 3), 6, 6).unwrap().complex.is_empty());
        assert!(fixed_subcomplex(sg(2, 3), 6, 4).is_err());
        assert_eq!(fixed_subcomplex(sg(2, 3), 9, 1).unwrap().complex, build_sigma(sg(2, 3), 9).unwrap());
    }
}
