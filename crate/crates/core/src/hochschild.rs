//! The small complex `R̃(A) = Ã ⊗ Λ(dx, dy) ⊗ Γ(z)` in a fixed `t`-degree,
//! explicit generator cycles, their representatives in the cyclic bar
//! complex `B^{cy}(A; Ã)`, and the chain-level check of the rotation formula.
//!
//! A basis word of `Ã` is `t^{i-1} t_0 t^{k-i}`, stored as `(k, i)`; multiplying
//! by `t^c` on the left gives `(k + c, i + c)`, on the right `(k + c, i)`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::arith::SemigroupPair;
use crate::equivariant::ModuleCase;
use crate::homology::{homology, ExplicitComplex, GradedHomology, HomologyOptions};
use crate::simplicial::{word_tau, word_to_simplex, CyclicComplex};
use crate::sparse::{Chain, SparseIntMatrix};
use crate::{Error, Result};

pub const DX: u8 = 1;
pub const DY: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SmallTerm {
    pub k: u64,
    pub i: u64,
    /// Bits `DX`, `DY`.
    pub form: u8,
    pub r: u64,
}

impl SmallTerm {
    pub fn degree(&self) -> usize {
        self.form.count_ones() as usize + 2 * self.r as usize
    }

    pub fn t_degree(&self, sg: SemigroupPair) -> u64 {
        let (a, b) = (sg.a(), sg.b());
        self.k + if self.form & DX != 0 { a } else { 0 } + if self.form & DY != 0 { b } else { 0 } + a * b * self.r
    }
}

fn add_to<K: Ord>(map: &mut BTreeMap<K, i64>, key: K, c: i64) {
    if c == 0 {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if *o.get() == 0 {
                o.remove();
            }
        }
    }
}

/// A `Z`-linear combination of basis symbols of `R̃(A)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallChain {
    pub terms: BTreeMap<SmallTerm, i64>,
}

impl SmallChain {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add(&mut self, t: SmallTerm, c: i64) {
        add_to(&mut self.terms, t, c);
    }

    pub fn add_chain(&mut self, other: &SmallChain, c: i64) {
        for (&t, &v) in &other.terms {
            self.add(t, c * v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common homological degree, if the chain is homogeneous.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(SmallTerm::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }
}

/// `δ` on one basis symbol:
/// `δ(ã z^[r]) = X(ã) dx z^[r-1] - Y(ã) dy z^[r-1]`,
/// `δ(ã dx z^[r]) = (xã - ãx) z^[r] - Y(ã) dxdy z^[r-1]`,
/// `δ(ã dy z^[r]) = (yã - ãy) z^[r] - X(ã) dxdy z^[r-1]`,
/// `δ(ã dxdy z^[r]) = (yã - ãy) dx z^[r] - (xã - ãx) dy z^[r]`,
/// with `X(ã) = Σ_{u=1}^{b} x^{u-1} ã x^{b-u}` and `Y(ã) = Σ_{v=1}^{a} y^{v-1} ã y^{a-v}`.
fn delta_term(sg: SemigroupPair, t: SmallTerm, c: i64, out: &mut SmallChain) {
    let (a, b) = (sg.a(), sg.b());
    let SmallTerm { k, i, form, r } = t;
    let comm = |out: &mut SmallChain, s: u64, form: u8, c: i64| {
        out.add(SmallTerm { k: k + s, i: i + s, form, r }, c);
        out.add(SmallTerm { k: k + s, i, form, r }, -c);
    };
    let xsum = |out: &mut SmallChain, form: u8, c: i64| {
        for u in 1..=b {
            out.add(SmallTerm { k: k + a * b - a, i: i + a * (u - 1), form, r: r - 1 }, c);
        }
    };
    let ysum = |out: &mut SmallChain, form: u8, c: i64| {
        for v in 1..=a {
            out.add(SmallTerm { k: k + a * b - b, i: i + b * (v - 1), form, r: r - 1 }, c);
        }
    };
    match form {
        0 => {
            if r > 0 {
                xsum(out, DX, c);
                ysum(out, DY, -c);
            }
        }
        DX => {
            comm(out, a, 0, c);
            if r > 0 {
                ysum(out, DX | DY, -c);
            }
        }
        DY => {
            comm(out, b, 0, c);
            if r > 0 {
                xsum(out, DX | DY, -c);
            }
        }
        _ => {
            comm(out, b, DX, c);
            comm(out, a, DY, -c);
        }
    }
}

pub fn boundary(sg: SemigroupPair, c: &SmallChain) -> SmallChain {
    let mut out = SmallChain::zero();
    for (&t, &v) in &c.terms {
        delta_term(sg, t, v, &mut out);
    }
    out
}

pub fn is_cycle(sg: SemigroupPair, c: &SmallChain) -> bool {
    boundary(sg, c).is_zero()
}

/// The `t`-degree `m` part of `R̃(A)`.
#[derive(Debug, Clone)]
pub struct SmallComplex {
    pub sg: SemigroupPair,
    pub m: u64,
    pub basis: Vec<Vec<SmallTerm>>,
    index: Vec<HashMap<SmallTerm, u32>>,
    pub complex: ExplicitComplex,
}

impl SmallComplex {
    pub fn index_of(&self, t: &SmallTerm) -> Option<u32> {
        self.index.get(t.degree())?.get(t).copied()
    }

    /// The chain in this complex's basis, with its degree.
    pub fn to_chain(&self, c: &SmallChain) -> Result<(usize, Chain)> {
        let q = c
            .degree()
            .ok_or_else(|| Error::InvalidParameter("chain is empty or not homogeneous".into()))?;
        let mut out: Chain = Vec::with_capacity(c.len());
        for (t, &v) in &c.terms {
            let k = self
                .index_of(t)
                .ok_or_else(|| Error::InvalidParameter(format!("{t:?} is not a basis symbol in t-degree {}", self.m)))?;
            out.push((k, v));
        }
        out.sort_unstable();
        Ok((q, out))
    }

    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }
}

pub fn build_small_complex(sg: SemigroupPair, m: u64) -> Result<SmallComplex> {
    let (a, b) = (sg.a(), sg.b());
    let mut basis: Vec<Vec<SmallTerm>> = Vec::new();
    for r in 0..=m / (a * b) {
        for form in [0, DX, DY, DX | DY] {
            let t = SmallTerm { k: 0, i: 0, form, r };
            let used = t.t_degree(sg);
            if used >= m || !sg.contains((m - used) as i64) {
                continue;
            }
            let k = m - used;
            let q = t.degree();
            if basis.len() <= q {
                basis.resize(q + 1, Vec::new());
            }
            basis[q].extend((1..=k).map(|i| SmallTerm { k, i, form, r }));
        }
    }
    for level in &mut basis {
        level.sort_unstable();
    }
    let index: Vec<HashMap<SmallTerm, u32>> = basis
        .iter()
        .map(|l| l.iter().enumerate().map(|(k, t)| (*t, k as u32)).collect())
        .collect();
    let dims: Vec<usize> = basis.iter().map(Vec::len).collect();
    let mut boundaries: Vec<SparseIntMatrix> = dims.first().map(|&d| SparseIntMatrix::zero(0, d)).into_iter().collect();
    for q in 1..dims.len() {
        let mut cols = Vec::with_capacity(dims[q]);
        for t in &basis[q] {
            let mut d = SmallChain::zero();
            delta_term(sg, *t, 1, &mut d);
            let mut col: Vec<(u32, i64)> = Vec::with_capacity(d.len());
            for (s, &v) in &d.terms {
                let k = index[q - 1]
                    .get(s)
                    .ok_or_else(|| Error::Inconsistent(format!("δ{t:?} leaves the complex at {s:?}")))?;
                col.push((*k, v));
            }
            col.sort_unstable();
            cols.push(col);
        }
        boundaries.push(SparseIntMatrix::from_columns(dims[q - 1], cols));
    }
    let complex = ExplicitComplex::new(dims, boundaries)?;
    Ok(SmallComplex {
        sg,
        m,
        basis,
        index,
        complex,
    })
}

/// Which of the four cases `m` falls in, or `None` when `m ∉ ⟨a, b⟩`.
pub fn sigma_case(sg: SemigroupPair, m: u64) -> Option<ModuleCase> {
    if m == 0 || !sg.contains(m as i64) {
        return None;
    }
    Some(match (m.is_multiple_of(sg.a()), m.is_multiple_of(sg.b())) {
        (false, false) => ModuleCase::FullQuotient,
        (true, false) => ModuleCase::KernelA,
        (false, true) => ModuleCase::KernelB,
        (true, true) => ModuleCase::IteratedKernel,
    })
}

/// The largest `q` accepted by `generator_chain` (1 in the first case).
pub fn generator_count(sg: SemigroupPair, m: u64) -> Option<u64> {
    Some(match sigma_case(sg, m)? {
        ModuleCase::FullQuotient => 1,
        ModuleCase::KernelA => sg.a() - 1,
        ModuleCase::KernelB => sg.b() - 1,
        ModuleCase::IteratedKernel => sg.genus2(),
    })
}

/// `Σ_{v=1}^{len} t^{v-1} t_0 t^{len-v}` between `t^pre` and `t^post`, as words.
fn marked_sum(pre: u64, len: u64, post: u64) -> Vec<(u64, u64)> {
    (1..=len).map(|v| (pre + len + post, pre + v)).collect()
}

/// `t^pre (ỹ dx - x̃ dy) t^post z^[r]`.
fn ydx_minus_xdy(sg: SemigroupPair, pre: u64, post: u64, r: u64, out: &mut SmallChain) {
    for (k, i) in marked_sum(pre, sg.b(), post) {
        out.add(SmallTerm { k, i, form: DX, r }, 1);
    }
    for (k, i) in marked_sum(pre, sg.a(), post) {
        out.add(SmallTerm { k, i, form: DY, r }, -1);
    }
}

/// `w̃ = Σ t^e t_0 t^{N-e} - Σ t^{e+1} t_0 t^{N-e-1}` over `e ∈ ⟨a, b⟩`
/// (`e <= N`, resp. `e <= N - 1`), `N = (a-1)(b-1)`.
fn w_tilde(sg: SemigroupPair) -> Vec<((u64, u64), i64)> {
    let n = sg.genus2();
    let mut out = Vec::new();
    for e in 0..=n {
        if sg.contains(e as i64) {
            out.push(((n + 1, e + 1), 1));
            if e < n {
                out.push(((n + 1, e + 2), -1));
            }
        }
    }
    out
}

/// The explicit generator cycle of the homology of `Σ(a, b, m)` in `R̃(A)`.
/// `q` selects among the generators in cases (2) to (4) and is ignored in
/// case (1); `None` picks `q = 1` in cases (2), (3) and `q = (a-1)(b-1)` in case (4).
pub fn generator_chain(sg: SemigroupPair, m: u64, q: Option<u64>) -> Result<SmallChain> {
    let case = sigma_case(sg, m).ok_or_else(|| Error::InvalidParameter(format!("{m} is not in the semigroup")))?;
    let (a, b) = (sg.a(), sg.b());
    let ab = a * b;
    let n = sg.genus2();
    let count = generator_count(sg, m).expect("m is representable");
    let q = q.unwrap_or(if case == ModuleCase::IteratedKernel { n } else { 1 });
    if case != ModuleCase::FullQuotient && !(1..=count).contains(&q) {
        return Err(Error::InvalidParameter(format!("q = {q} outside 1..={count}")));
    }
    let mut out = SmallChain::zero();
    match case {
        ModuleCase::FullQuotient => {
            // m = a i + b j + ab r with 0 < i < b, 0 < j < a
            let (i, j, r) = (1..b)
                .flat_map(|i| (1..a).map(move |j| (i, j)))
                .find_map(|(i, j)| {
                    let used = a * i + b * j;
                    (used <= m && (m - used).is_multiple_of(ab)).then(|| (i, j, (m - used) / ab))
                })
                .ok_or_else(|| Error::Inconsistent(format!("no normal form for {m}")))?;
            ydx_minus_xdy(sg, a * (i - 1) + b * (j - 1), 0, r, &mut out);
        }
        ModuleCase::KernelA | ModuleCase::KernelB => {
            let (big, other) = if case == ModuleCase::KernelA { (a, b) } else { (b, a) };
            let (i, r) = (1..other)
                .find_map(|i| {
                    let used = big * i;
                    (used <= m && (m - used).is_multiple_of(ab)).then(|| (i, (m - used) / ab))
                })
                .ok_or_else(|| Error::Inconsistent(format!("no normal form for {m}")))?;
            let pre = big * (i - 1);
            // t^{q-1} (t_0 t - t t_0) t^{big-1-q}
            out.add(SmallTerm { k: pre + big, i: pre + q, form: 0, r }, 1);
            out.add(SmallTerm { k: pre + big, i: pre + q + 1, form: 0, r }, -1);
            if r > 0 {
                for ((k, i), c) in w_tilde(sg) {
                    let t = SmallTerm {
                        k: pre + (q - 1) + k + (big - 1 - q),
                        i: pre + (q - 1) + i,
                        form: DX | DY,
                        r: r - 1,
                    };
                    out.add(t, c);
                }
            }
        }
        ModuleCase::IteratedKernel => {
            let r = sg.ell(m as i64);
            ydx_minus_xdy(sg, q - 1, n - q, r, &mut out);
        }
    }
    Ok(out)
}

/// Index of `e_i` among the case-(4) generators: `e_i` has `q = (a-1)(b-1) + 1 - i`.
pub fn e_generator(sg: SemigroupPair, m: u64, i: u64) -> Result<SmallChain> {
    let n = sg.genus2();
    if sigma_case(sg, m) != Some(ModuleCase::IteratedKernel) || !(1..=n).contains(&i) {
        return Err(Error::InvalidParameter(format!("e_{i} needs a | m, b | m and 1 <= i <= {n}")));
    }
    generator_chain(sg, m, Some(n + 1 - i))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub equal: bool,
    pub small: Vec<(usize, usize, Vec<num_bigint::BigInt>)>,
    pub simplicial: Vec<(usize, usize, Vec<num_bigint::BigInt>)>,
}

/// Unreduced homology of `Σ(a, b, m)` against the homology of `R̃(A)[m]`.
pub fn oracle_report(sg: SemigroupPair, m: u64) -> Result<OracleReport> {
    let small = build_small_complex(sg, m)?;
    let hs = homology(&small.complex, HomologyOptions::ranks_only())?;
    let sigma = crate::simplicial::build_sigma(sg, m)?;
    let hx = homology(&unaugmented(&sigma)?, HomologyOptions::ranks_only())?;
    let (s, x) = (hs.signature(), hx.signature());
    Ok(OracleReport {
        equal: s == x,
        small: s,
        simplicial: x,
    })
}

pub fn oracle_equiv(sg: SemigroupPair, m: u64) -> Result<bool> {
    Ok(oracle_report(sg, m)?.equal)
}

/// The chains of `Σ` itself rather than of `Σ_+ -> S^0`.
pub fn unaugmented(c: &CyclicComplex) -> Result<ExplicitComplex> {
    use crate::homology::ChainComplex;
    let n = c.num_degrees();
    let dims: Vec<usize> = (0..n).map(|q| c.dim(q)).collect();
    let mut boundaries: Vec<SparseIntMatrix> = dims.first().map(|&d| SparseIntMatrix::zero(0, d)).into_iter().collect();
    boundaries.extend((1..n).map(|q| c.boundary(q).clone()));
    ExplicitComplex::new(dims, boundaries)
}

/// A tensor `(k, i) ⊗ t^{k_1} ⊗ ... ⊗ t^{k_n}` in `B^{cy}(A; Ã)`.
pub type BarTerm = (u64, u64, Vec<u64>);

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarChain {
    pub terms: BTreeMap<BarTerm, i64>,
}

/// An element `t^c ⊗ t^{k_1} ⊗ ... ⊗ t^{k_n}` of the bar construction on `A`,
/// used for the representatives of `z` and its divided powers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct ABar {
    terms: BTreeMap<(u64, Vec<u64>), i64>,
}

/// All `(positions of f, sign)` for the shuffles of `p` and `q` letters of odd degree.
/// A shuffle pattern (`true` where the letter comes from the left factor) and its sign.
type Shuffle = (Vec<bool>, i64);

fn shuffles(p: usize, q: usize) -> Vec<Shuffle> {
    let mut out = Vec::new();
    let mut pattern = Vec::with_capacity(p + q);
    fn rec(p: usize, q: usize, inv: usize, pattern: &mut Vec<bool>, out: &mut Vec<Shuffle>) {
        if p == 0 && q == 0 {
            out.push((pattern.clone(), if inv.is_multiple_of(2) { 1 } else { -1 }));
            return;
        }
        if p > 0 {
            pattern.push(true);
            rec(p - 1, q, inv, pattern, out);
            pattern.pop();
        }
        if q > 0 {
            // placing a g-letter before the remaining p f-letters
            pattern.push(false);
            rec(p, q - 1, inv + p, pattern, out);
            pattern.pop();
        }
    }
    rec(p, q, 0, &mut pattern, &mut out);
    out
}

fn interleave(f: &[u64], g: &[u64], pattern: &[bool]) -> Vec<u64> {
    let (mut x, mut y) = (f.iter(), g.iter());
    pattern
        .iter()
        .map(|&from_f| *if from_f { x.next() } else { y.next() }.expect("pattern matches lengths"))
        .collect()
}

impl ABar {
    fn one() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((0, Vec::new()), 1);
        Self { terms }
    }

    /// `Σ_{u=1}^{b-1} x^{u-1} ⊗ x^{b-u} ⊗ x - Σ_{v=1}^{a-1} y^{v-1} ⊗ y^{a-v} ⊗ y`.
    fn z(sg: SemigroupPair) -> Self {
        let (a, b) = (sg.a(), sg.b());
        let mut z = Self::default();
        for u in 1..b {
            add_to(&mut z.terms, (a * (u - 1), vec![a * (b - u), a]), 1);
        }
        for v in 1..a {
            add_to(&mut z.terms, (b * (v - 1), vec![b * (a - v), b]), -1);
        }
        z
    }

    fn shuffle(&self, other: &ABar) -> ABar {
        let mut out = ABar::default();
        let mut cache: HashMap<(usize, usize), Vec<Shuffle>> = HashMap::new();
        for ((c, f), x) in &self.terms {
            for ((e, g), y) in &other.terms {
                let sh = cache.entry((f.len(), g.len())).or_insert_with(|| shuffles(f.len(), g.len()));
                for (pattern, s) in sh.iter() {
                    add_to(&mut out.terms, (c + e, interleave(f, g, pattern)), s * x * y);
                }
            }
        }
        out
    }

    /// `γ_r(z)`, through `γ_{r} = γ_{r-1} z / r` with exact division.
    fn gamma(sg: SemigroupPair, r: u64) -> Result<ABar> {
        let z = Self::z(sg);
        let mut g = Self::one();
        for s in 1..=r as i64 {
            let p = g.shuffle(&z);
            let mut next = ABar::default();
            for (t, c) in p.terms {
                if c % s != 0 {
                    return Err(Error::InexactDivision(format!("γ_{s}(z) coefficient {c}")));
                }
                next.terms.insert(t, c / s);
            }
            g = next;
        }
        Ok(g)
    }
}

impl BarChain {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add(&mut self, t: BarTerm, c: i64) {
        add_to(&mut self.terms, t, c);
    }

    pub fn add_chain(&mut self, other: &BarChain, c: i64) {
        for (t, &v) in &other.terms {
            self.add(t.clone(), c * v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `d = Σ (-1)^j d_j` with `d_0 = ã a_1`, `d_n = a_n ã`.
    pub fn differential(&self) -> BarChain {
        let mut out = BarChain::zero();
        for ((k, i, f), &c) in &self.terms {
            let n = f.len();
            for j in 0..=n {
                if n == 0 {
                    break;
                }
                let s = if j % 2 == 0 { c } else { -c };
                let t = if j == 0 {
                    (k + f[0], *i, f[1..].to_vec())
                } else if j == n {
                    (k + f[n - 1], i + f[n - 1], f[..n - 1].to_vec())
                } else {
                    let mut g = f[..j - 1].to_vec();
                    g.push(f[j - 1] + f[j]);
                    g.extend_from_slice(&f[j + 1..]);
                    (*k, *i, g)
                };
                out.add(t, s);
            }
        }
        out
    }

    pub fn tau(&self) -> BarChain {
        let mut out = BarChain::zero();
        for ((k, i, f), &c) in &self.terms {
            let (s, t) = word_tau(*k, *i, f);
            out.add(t, c * s as i64);
        }
        out
    }

    /// `(self) ⋆ w` where the `A`-coefficient of `w` multiplies the marked word on the left.
    fn shuffle_left(&self, w: &ABar) -> BarChain {
        let mut out = BarChain::zero();
        for ((k, i, f), x) in &self.terms {
            for ((c, g), y) in &w.terms {
                for (pattern, s) in shuffles(f.len(), g.len()) {
                    out.add((k + c, i + c, interleave(f, g, &pattern)), s * x * y);
                }
            }
        }
        out
    }

    /// The simplicial chain with the same words, in `Σ(a, b, m)`'s cell order.
    pub fn to_simplicial(&self, c: &CyclicComplex) -> Result<(usize, Chain)> {
        let mut degree = None;
        let mut out: Chain = Vec::with_capacity(self.len());
        for ((k, i, f), &v) in &self.terms {
            let q = f.len();
            if *degree.get_or_insert(q) != q {
                return Err(Error::InvalidParameter("bar chain is not homogeneous".into()));
            }
            let mask = word_to_simplex(*k, *i, f, c.m)
                .ok_or_else(|| Error::InvalidParameter(format!("({k}, {i}, {f:?}) is not a word of t-degree {}", c.m)))?;
            let idx = c
                .cell_index(q, mask)
                .ok_or_else(|| Error::InvalidParameter(format!("({k}, {i}, {f:?}) is not a simplex of Σ")))?;
            out.push((idx, v));
        }
        out.sort_unstable();
        Ok((degree.unwrap_or(0), out))
    }
}

/// `ã ω z^[r] ↦ (ã ⊗ ω) ⋆ γ_r(z)` with `dx ↦ ⊗ x`, `dy ↦ ⊗ y`,
/// `dxdy ↦ ⊗ x ⊗ y - ⊗ y ⊗ x`.
pub fn to_bar(sg: SemigroupPair, c: &SmallChain) -> Result<BarChain> {
    let (a, b) = (sg.a(), sg.b());
    let mut by_r: BTreeMap<u64, BarChain> = BTreeMap::new();
    for (t, &v) in &c.terms {
        let base = by_r.entry(t.r).or_default();
        match t.form {
            0 => base.add((t.k, t.i, vec![]), v),
            DX => base.add((t.k, t.i, vec![a]), v),
            DY => base.add((t.k, t.i, vec![b]), v),
            _ => {
                base.add((t.k, t.i, vec![a, b]), v);
                base.add((t.k, t.i, vec![b, a]), -v);
            }
        }
    }
    let mut out = BarChain::zero();
    for (r, base) in by_r {
        if r == 0 {
            out.add_chain(&base, 1);
        } else {
            out.add_chain(&base.shuffle_left(&ABar::gamma(sg, r)?), 1);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub a: u64,
    pub b: u64,
    pub m: u64,
    pub holds: bool,
    /// Terms of `τ e_N - Σ (-e_{w+1} + e_{w+2})`.
    pub lhs_terms: usize,
    /// Terms of the correction chain.
    pub correction_terms: usize,
    /// `lhs = sign · d(correction)`.
    pub sign: i8,
}

/// Checks, as an identity of bar chains, that `τ e_N` differs from
/// `Σ (-e_{w+1} + e_{w+2})` by the boundary of
/// `Σ_{u=1}^{b-2} -x^{u-1} t^{a-1} t_0 ⊗ x^{b-u-1} ⊗ x + Σ_{v=1}^{a-2} y^{v-1} t^{b-1} t_0 ⊗ y^{a-v-1} ⊗ y`.
pub fn tau_witness_r0(sg: SemigroupPair, m: u64) -> Result<WitnessReport> {
    let (a, b) = (sg.a(), sg.b());
    if m != a * b {
        return Err(Error::OutOfRegime(format!(
            "the rotation witness is implemented for a | m, b | m, ℓ(a, b, m) = 0, i.e. m = {}",
            a * b
        )));
    }
    let n = sg.genus2();
    let e = |i: u64| -> Result<BarChain> { to_bar(sg, &e_generator(sg, m, i)?) };
    let mut lhs = e(n)?.tau();
    for w in 0..n.saturating_sub(1) {
        if sg.contains(w as i64) {
            lhs.add_chain(&e(w + 1)?, 1);
            lhs.add_chain(&e(w + 2)?, -1);
        }
    }
    let mut corr = BarChain::zero();
    for u in 1..b {
        if b - u > 1 {
            corr.add((a * u, a * u, vec![a * (b - u - 1), a]), -1);
        }
    }
    for v in 1..a {
        if a - v > 1 {
            corr.add((b * v, b * v, vec![b * (a - v - 1), b]), 1);
        }
    }
    let dc = corr.differential();
    let mut diff = lhs.clone();
    diff.add_chain(&dc, 1);
    Ok(WitnessReport {
        a,
        b,
        m,
        holds: diff.is_zero(),
        lhs_terms: lhs.len(),
        correction_terms: corr.len(),
        sign: -1,
    })
}

/// Coordinates, in the computed homology basis of `Σ(a, b, m)`, of the class of
/// the translated generator cycle; errors if the translation is not a cycle.
pub fn generator_class(
    sg: SemigroupPair,
    m: u64,
    sigma: &CyclicComplex,
    h: &GradedHomology,
) -> Result<(usize, Vec<num_bigint::BigInt>)> {
    let bar = to_bar(sg, &generator_chain(sg, m, None)?)?;
    if !bar.differential().is_zero() {
        return Err(Error::Inconsistent(format!("bar representative for m = {m} is not a cycle")));
    }
    let (q, chain) = bar.to_simplicial(sigma)?;
    Ok((q, crate::equivariant::class_coordinates(h, q, &chain)?))
}
