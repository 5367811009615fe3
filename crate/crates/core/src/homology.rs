//! Integral homology of a chain complex with explicit generator cycles, dual
//! cocycles, and the matrix of a chain automorphism on the free part.
//!
//! The complex is first shrunk by eliminating unit pivots (see `reduce`),
//! the remainder is handled by dense Smith normal forms, and generators and
//! cocycles are transported back to the original basis by replaying the
//! eliminations.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::dense::{snf, IntMatrix};
use crate::reduce::{reduce, Elimination, Integers, ModP, Ring};
use crate::sparse::{dot, Chain, SignedPerm, SparseIntMatrix};
use crate::{Error, Result};

/// A finite chain complex in degrees `0..num_degrees()`.
pub trait ChainComplex {
    fn num_degrees(&self) -> usize;
    fn dim(&self, q: usize) -> usize;
    /// `∂_q : C_q -> C_{q-1}` for `q >= 1`.
    fn boundary(&self, q: usize) -> &SparseIntMatrix;
    fn rotation(&self, _q: usize) -> Option<&SignedPerm> {
        None
    }
    /// Order of the rotation, 1 if there is none.
    fn order(&self) -> u64 {
        1
    }
    /// Whether homology should be reduced by augmenting degree 0.
    fn augmented(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyOptions {
    pub generators: bool,
    pub action: bool,
    /// Compare ranks with a rank modulo a random 30-bit prime.
    pub modp_check: bool,
}

impl HomologyOptions {
    pub fn ranks_only() -> Self {
        Self {
            generators: false,
            action: false,
            modp_check: true,
        }
    }

    pub fn with_action() -> Self {
        Self {
            generators: true,
            action: true,
            modp_check: true,
        }
    }
}

impl Default for HomologyOptions {
    fn default() -> Self {
        Self::ranks_only()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHomology {
    pub degree: usize,
    pub rank: usize,
    pub torsion: Vec<BigInt>,
    pub generators: Vec<Chain>,
    /// Cocycles dual to the generators: `cocycles[i](generators[j]) = δ_ij`.
    #[serde(skip)]
    pub cocycles: Vec<Chain>,
    /// `tau[i][j]`: coefficient of generator `i` in the rotation of generator `j`.
    pub tau: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedHomology {
    pub order: u64,
    pub reduced: bool,
    pub cells: Vec<usize>,
    pub degrees: Vec<DegreeHomology>,
}

impl GradedHomology {
    pub fn rank(&self, q: usize) -> usize {
        self.degrees.get(q).map_or(0, |d| d.rank)
    }

    pub fn torsion(&self, q: usize) -> &[BigInt] {
        self.degrees.get(q).map_or(&[], |d| &d.torsion)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.degrees.iter().all(|d| d.torsion.is_empty())
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.iter().all(|d| d.rank == 0 && d.torsion.is_empty())
    }

    /// Degrees carrying nonzero homology (free or torsion).
    pub fn support(&self) -> Vec<usize> {
        self.degrees
            .iter()
            .filter(|d| d.rank > 0 || !d.torsion.is_empty())
            .map(|d| d.degree)
            .collect()
    }

    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.rank).collect()
    }

    pub fn tau(&self, q: usize) -> Option<IntMatrix> {
        let t = self.degrees.get(q)?.tau.as_ref()?;
        let n = t.len();
        Some(IntMatrix::from_i64(n, n, &t.concat()))
    }

    /// Ranks and torsion only, for comparing two computations.
    pub fn signature(&self) -> Vec<(usize, usize, Vec<BigInt>)> {
        let mut s: Vec<_> = self
            .degrees
            .iter()
            .map(|d| (d.degree, d.rank, d.torsion.clone()))
            .collect();
        while s.last().is_some_and(|(_, r, t)| *r == 0 && t.is_empty()) {
            s.pop();
        }
        s
    }
}

fn random_prime() -> u64 {
    let mut rng = rand::thread_rng();
    loop {
        let p = rng.gen_range((1u64 << 29)..(1u64 << 30)) | 1;
        if is_prime(p) {
            return p;
        }
    }
}

/// Levels of the (possibly augmented) complex: level `l` is degree `l - offset`.
struct Levels {
    offset: usize,
    dims: Vec<usize>,
    cols: Vec<Vec<Vec<(u32, i64)>>>,
}

fn levels<C: ChainComplex + ?Sized>(c: &C) -> Levels {
    let n = c.num_degrees();
    let augment = c.augmented() && n > 0 && c.dim(0) > 0;
    let offset = usize::from(augment);
    let mut dims = Vec::with_capacity(n + offset);
    let mut cols = Vec::with_capacity(n + offset);
    if augment {
        dims.push(1);
        cols.push(Vec::new());
    }
    for q in 0..n {
        dims.push(c.dim(q));
        if q == 0 {
            if augment {
                cols.push(vec![vec![(0u32, 1i64)]; c.dim(0)]);
            } else {
                cols.push(Vec::new());
            }
        } else {
            cols.push(c.boundary(q).columns().to_vec());
        }
    }
    Levels { offset, dims, cols }
}

fn survivors_dense(cols: &[Vec<(u32, i64)>], rows: &[u32], colset: &[u32]) -> IntMatrix {
    let pos: HashMap<u32, usize> = rows.iter().enumerate().map(|(k, &r)| (r, k)).collect();
    let mut m = IntMatrix::zeros(rows.len(), colset.len());
    for (j, &x) in colset.iter().enumerate() {
        for &(r, v) in &cols[x as usize] {
            let i = *pos.get(&r).expect("surviving columns only meet surviving rows");
            m.set(i, j, BigInt::from(v));
        }
    }
    m
}

fn to_i64(v: &BigInt) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow("homology generator coefficient"))
}

fn sparse_of(dense: &[i64]) -> Chain {
    dense
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0)
        .map(|(k, &v)| (k as u32, v))
        .collect()
}

/// `x <- x - c^-1 <∂x, τ> σ`, replayed backwards over the eliminations in `∂_h`.
fn lift_cycle(mut z: Vec<i64>, log: &[Elimination<i64>]) -> Result<Vec<i64>> {
    let ov = || Error::Overflow("cycle lift");
    for e in log.iter().rev() {
        let mut s: i64 = 0;
        for &(x, alpha) in &e.snap {
            let v = z[x as usize];
            if v != 0 {
                s = s.checked_add(v.checked_mul(alpha).ok_or_else(ov)?).ok_or_else(ov)?;
            }
        }
        if s != 0 {
            let k = e.sigma as usize;
            z[k] = z[k].checked_sub(e.c.checked_mul(s).ok_or_else(ov)?).ok_or_else(ov)?;
        }
    }
    Ok(z)
}

/// `φ(τ) <- -c^-1 Σ_{ρ ≠ τ} <∂σ, ρ> φ(ρ)`, replayed backwards over the
/// eliminations in `∂_{h+1}`.
fn pull_back_cocycle(mut phi: Vec<i64>, log: &[Elimination<i64>]) -> Result<Vec<i64>> {
    let ov = || Error::Overflow("cocycle pullback");
    for e in log.iter().rev() {
        let mut s: i64 = 0;
        for &(r, beta) in &e.snap {
            let v = phi[r as usize];
            if v != 0 {
                s = s.checked_add(v.checked_mul(beta).ok_or_else(ov)?).ok_or_else(ov)?;
            }
        }
        phi[e.tau as usize] = -e.c.checked_mul(s).ok_or_else(ov)?;
    }
    Ok(phi)
}

pub fn homology<C: ChainComplex + ?Sized>(c: &C, opts: HomologyOptions) -> Result<GradedHomology> {
    let want_gens = opts.generators || opts.action;
    let lv = levels(c);
    let nl = lv.dims.len();

    let modp_ranks: Option<Vec<usize>> = if opts.modp_check && nl > 0 {
        let ring = ModP { p: random_prime() };
        let cols = lv
            .cols
            .iter()
            .map(|m| {
                m.iter()
                    .map(|col| col.iter().map(|&(r, v)| (r, ring.embed(v))).filter(|e| e.1 != 0).collect())
                    .collect()
            })
            .collect();
        let red = reduce(ring, &lv.dims, cols, &vec![false; nl], &vec![false; nl]);
        Some(red.pivots)
    } else {
        None
    };
    let maybe_nonzero = |l: usize| -> bool {
        match &modp_ranks {
            Some(r) => lv.dims[l] > r[l] + r.get(l + 1).copied().unwrap_or(0),
            None => true,
        }
    };
    let mut log_rows = vec![false; nl];
    let mut log_cols = vec![false; nl];
    if want_gens {
        for l in lv.offset..nl {
            if maybe_nonzero(l) {
                log_rows[l] = true;
                if l + 1 < nl {
                    log_cols[l + 1] = opts.action;
                }
            }
        }
    }
    let red = reduce(Integers, &lv.dims, lv.cols, &log_rows, &log_cols);
    let surv: Vec<Vec<u32>> = (0..nl).map(|l| red.survivors(l)).collect();
    let dense: Vec<IntMatrix> = (0..nl)
        .map(|l| {
            if l == 0 {
                IntMatrix::zeros(0, surv[0].len())
            } else {
                survivors_dense(&red.cols[l], &surv[l - 1], &surv[l])
            }
        })
        .collect();
    let snfs: Vec<_> = dense.iter().map(snf).collect();
    if let Some(rp) = &modp_ranks {
        for l in 1..nl {
            let rq = red.pivots[l] + snfs[l].rank;
            if rq != rp[l] {
                return Err(Error::Inconsistent(format!(
                    "boundary rank {rq} over Q but {} modulo a prime at level {l}",
                    rp[l]
                )));
            }
        }
    }

    let mut degrees = Vec::new();
    for h in lv.offset..nl {
        let n_h = surv[h].len();
        let s1 = &snfs[h];
        let r1 = s1.rank;
        let m = if h + 1 < nl {
            s1.v_inv.mul(&dense[h + 1]).block(r1..n_h, 0..dense[h + 1].cols())
        } else {
            IntMatrix::zeros(n_h - r1, 0)
        };
        let s2 = snf(&m);
        let r2 = s2.rank;
        let rank = n_h - r1 - r2;
        let torsion: Vec<BigInt> = s2.invariant_factors().into_iter().filter(|d| !d.is_one()).collect();
        let mut generators = Vec::new();
        let mut cocycles = Vec::new();
        if want_gens && rank > 0 {
            let k = s1.v.block(0..n_h, r1..n_h);
            let zs = k.mul(&s2.u_inv.block(0..n_h - r1, r2..n_h - r1));
            for j in 0..rank {
                let mut z = vec![0i64; lv.dims[h]];
                for (i, &cell) in surv[h].iter().enumerate() {
                    z[cell as usize] = to_i64(zs.get(i, j))?;
                }
                generators.push(sparse_of(&lift_cycle(z, &red.row_logs[h])?));
            }
            if opts.action {
                let phis = s2.u.block(r2..n_h - r1, 0..n_h - r1).mul(&s1.v_inv.block(r1..n_h, 0..n_h));
                let empty = Vec::new();
                let log = if h + 1 < nl { &red.col_logs[h + 1] } else { &empty };
                for i in 0..rank {
                    let mut phi = vec![0i64; lv.dims[h]];
                    for (j, &cell) in surv[h].iter().enumerate() {
                        phi[cell as usize] = to_i64(phis.get(i, j))?;
                    }
                    cocycles.push(sparse_of(&pull_back_cocycle(phi, log)?));
                }
            }
        }
        degrees.push(DegreeHomology {
            degree: h - lv.offset,
            rank,
            torsion,
            generators,
            cocycles,
            tau: None,
        });
    }
    if lv.offset == 1 && (red.pivots.get(1).copied().unwrap_or(0) + snfs.get(1).map_or(0, |s| s.rank)) != 1 {
        return Err(Error::Inconsistent("augmentation is not surjective".into()));
    }

    let euler_cells: i64 = (0..nl).map(|l| sign(l, lv.offset) * lv.dims[l] as i64).sum();
    let euler_betti: i64 = degrees.iter().map(|d| sign(d.degree + lv.offset, lv.offset) * d.rank as i64).sum();
    if euler_cells != euler_betti {
        return Err(Error::Inconsistent(format!(
            "Euler characteristic {euler_cells} from cells, {euler_betti} from Betti numbers"
        )));
    }

    let mut h = GradedHomology {
        order: c.order(),
        reduced: lv.offset == 1,
        cells: (0..c.num_degrees()).map(|q| c.dim(q)).collect(),
        degrees,
    };
    if want_gens {
        verify_generators(c, &h)?;
    }
    if opts.action {
        let taus = induced_action(c, &h)?;
        for (d, t) in h.degrees.iter_mut().zip(taus) {
            d.tau = t.map(|m| m.to_i64_rows().expect("action entries are small"));
        }
    }
    if !want_gens {
        for d in &mut h.degrees {
            d.generators.clear();
        }
    }
    Ok(h)
}

fn sign(l: usize, offset: usize) -> i64 {
    if (l + 2 - offset).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn boundary_of<C: ChainComplex + ?Sized>(c: &C, q: usize, z: &[(u32, i64)]) -> Result<Chain> {
    if q == 0 {
        if c.augmented() {
            let s: i64 = z.iter().map(|e| e.1).sum();
            return Ok(if s == 0 { Vec::new() } else { vec![(0, s)] });
        }
        return Ok(Vec::new());
    }
    c.boundary(q).apply(z)
}

/// Cycles really are cycles, cocycles vanish on boundaries, and the pairing is the identity.
pub fn verify_generators<C: ChainComplex + ?Sized>(c: &C, h: &GradedHomology) -> Result<()> {
    for d in &h.degrees {
        for z in &d.generators {
            if !boundary_of(c, d.degree, z)?.is_empty() {
                return Err(Error::Inconsistent(format!("generator in degree {} is not a cycle", d.degree)));
            }
        }
        if d.cocycles.is_empty() {
            continue;
        }
        if d.degree + 1 < c.num_degrees() {
            let b = c.boundary(d.degree + 1);
            for phi in &d.cocycles {
                for col in b.columns() {
                    if dot(phi, col).ok_or(Error::Overflow("cocycle check"))? != 0 {
                        return Err(Error::Inconsistent(format!("functional in degree {} is not a cocycle", d.degree)));
                    }
                }
            }
        }
        for (i, phi) in d.cocycles.iter().enumerate() {
            for (j, z) in d.generators.iter().enumerate() {
                let v = dot(phi, z).ok_or(Error::Overflow("pairing"))?;
                if v != i64::from(i == j) {
                    return Err(Error::Inconsistent(format!(
                        "cocycle/cycle pairing is not the identity in degree {}",
                        d.degree
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Matrix of the rotation on the free part of homology, in the generator
/// basis, for each degree; `None` where there is no homology or no rotation.
///
/// Entries are `T_ij = φ_i(ρ z_j)` with `φ_i` the dual cocycles, so `ρ z_j` is
/// homologous to `Σ_i T_ij z_i` modulo torsion.
pub fn induced_action<C: ChainComplex + ?Sized>(c: &C, h: &GradedHomology) -> Result<Vec<Option<IntMatrix>>> {
    let mut out = Vec::with_capacity(h.degrees.len());
    for d in &h.degrees {
        let Some(rho) = c.rotation(d.degree) else {
            out.push(None);
            continue;
        };
        if d.rank == 0 {
            out.push(None);
            continue;
        }
        if d.cocycles.len() != d.rank || d.generators.len() != d.rank {
            return Err(Error::InvalidParameter(
                "induced_action needs homology computed with generators and cocycles".into(),
            ));
        }
        let mut t = IntMatrix::zeros(d.rank, d.rank);
        for (j, z) in d.generators.iter().enumerate() {
            let rz = rho.apply(z);
            for (i, phi) in d.cocycles.iter().enumerate() {
                let v = dot(phi, &rz).ok_or(Error::Overflow("induced action"))?;
                t.set(i, j, BigInt::from(v));
            }
        }
        if t.pow(c.order()) != IntMatrix::identity(d.rank) {
            return Err(Error::Inconsistent(format!(
                "induced rotation in degree {} does not have order dividing {}",
                d.degree,
                c.order()
            )));
        }
        if !t.det().is_zero() && t.det().abs() != BigInt::one() {
            return Err(Error::Inconsistent("induced rotation is not invertible".into()));
        }
        out.push(Some(t));
    }
    Ok(out)
}


/// A chain complex given directly by its boundary matrices.
#[derive(Debug, Clone)]
pub struct ExplicitComplex {
    pub dims: Vec<usize>,
    /// `boundaries[q]` is `∂_q`; entry 0 is an empty `0 x dims[0]` matrix.
    pub boundaries: Vec<SparseIntMatrix>,
    pub rotations: Option<Vec<SignedPerm>>,
    pub order: u64,
    pub augmented: bool,
}

impl ExplicitComplex {
    pub fn new(dims: Vec<usize>, boundaries: Vec<SparseIntMatrix>) -> Result<Self> {
        if boundaries.len() != dims.len() {
            return Err(Error::InvalidParameter("one boundary matrix per degree".into()));
        }
        for q in 1..dims.len() {
            if boundaries[q].rows() != dims[q - 1] || boundaries[q].cols() != dims[q] {
                return Err(Error::InvalidParameter(format!("boundary {q} has the wrong shape")));
            }
            if q >= 2 && !boundaries[q - 1].mul(&boundaries[q])?.is_zero() {
                return Err(Error::Inconsistent(format!("∂∂ ≠ 0 at degree {q}")));
            }
        }
        Ok(Self {
            dims,
            boundaries,
            rotations: None,
            order: 1,
            augmented: false,
        })
    }
}

impl ChainComplex for ExplicitComplex {
    fn num_degrees(&self) -> usize {
        self.dims.len()
    }
    fn dim(&self, q: usize) -> usize {
        self.dims[q]
    }
    fn boundary(&self, q: usize) -> &SparseIntMatrix {
        &self.boundaries[q]
    }
    fn rotation(&self, q: usize) -> Option<&SignedPerm> {
        self.rotations.as_ref().map(|r| &r[q])
    }
    fn order(&self) -> u64 {
        self.order
    }
    fn augmented(&self) -> bool {
        self.augmented
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, t: &[(usize, usize, i64)]) -> SparseIntMatrix {
        SparseIntMatrix::from_triplets(rows, cols, t).unwrap()
    }

    /// Boundary of a triangle, vertices 0,1,2, edges 01,12,02, rotated by v -> v+1.
    fn triangle_boundary() -> ExplicitComplex {
        let d1 = mat(3, 3, &[(0, 0, -1), (1, 0, 1), (1, 1, -1), (2, 1, 1), (0, 2, -1), (2, 2, 1)]);
        let mut c = ExplicitComplex::new(vec![3, 3], vec![SparseIntMatrix::zero(0, 3), d1]).unwrap();
        // edges: 01 -> 12, 12 -> 20 = -02, 02 -> 10 = -01
        c.rotations = Some(vec![
            SignedPerm::new(vec![(1, 1), (2, 1), (0, 1)]).unwrap(),
            SignedPerm::new(vec![(1, 1), (2, -1), (0, -1)]).unwrap(),
        ]);
        c.order = 3;
        c
    }

    #[test]
    fn circle_homology_and_action() {
        let c = triangle_boundary();
        let h = homology(&c, HomologyOptions::with_action()).unwrap();
        assert_eq!(h.betti(), vec![1, 1]);
        assert_eq!(h.degrees[1].tau, Some(vec![vec![1]]));
        assert_eq!(h.degrees[0].tau, Some(vec![vec![1]]));
    }

    #[test]
    fn reduced_circle() {
        let mut c = triangle_boundary();
        c.augmented = true;
        let h = homology(&c, HomologyOptions::with_action()).unwrap();
        assert_eq!(h.betti(), vec![0, 1]);
        assert!(h.reduced);
    }

    #[test]
    fn torsion_is_detected() {
        // one vertex, one loop edge, a 2-cell wrapped twice: RP^2
        let d1 = SparseIntMatrix::zero(1, 1);
        let d2 = mat(1, 1, &[(0, 0, 2)]);
        let c = ExplicitComplex::new(vec![1, 1, 1], vec![SparseIntMatrix::zero(0, 1), d1, d2]).unwrap();
        let h = homology(&c, HomologyOptions::ranks_only()).unwrap();
        assert_eq!(h.betti(), vec![1, 0, 0]);
        assert_eq!(h.torsion(1), &[BigInt::from(2)]);
    }

    #[test]
    fn empty_complex() {
        let c = ExplicitComplex::new(vec![], vec![]).unwrap();
        let h = homology(&c, HomologyOptions::with_action()).unwrap();
        assert!(h.is_zero());
    }
}
