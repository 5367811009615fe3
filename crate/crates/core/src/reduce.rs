//! Elimination of unit pivots across a whole chain complex.
//!
//! Eliminating a pair `(σ, τ)` with `⟨∂σ, τ⟩ = c` a unit replaces the complex
//! by a chain homotopy equivalent one without `σ` and `τ`: columns of `∂`
//! meeting `τ` are cleared against `∂σ`, the row `σ` of the next boundary is
//! dropped, and the column `τ` of the previous boundary is dropped.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Per degree, the columns of a boundary matrix as sorted `(row, entry)` lists.
pub(crate) type Columns<E> = Vec<Vec<Vec<(u32, E)>>>;

pub(crate) trait Ring: Copy {
    type E: Copy + PartialEq + std::fmt::Debug;
    fn embed(&self, x: i64) -> Self::E;
    fn unit_inverse(&self, x: Self::E) -> Option<Self::E>;
    fn mul(&self, a: Self::E, b: Self::E) -> Option<Self::E>;
    fn add(&self, a: Self::E, b: Self::E) -> Option<Self::E>;
    fn neg(&self, a: Self::E) -> Self::E;
    fn is_zero(&self, a: Self::E) -> bool;
}

#[derive(Clone, Copy)]
pub(crate) struct Integers;

impl Ring for Integers {
    type E = i64;
    fn embed(&self, x: i64) -> i64 {
        x
    }
    fn unit_inverse(&self, x: i64) -> Option<i64> {
        (x == 1 || x == -1).then_some(x)
    }
    fn mul(&self, a: i64, b: i64) -> Option<i64> {
        a.checked_mul(b)
    }
    fn add(&self, a: i64, b: i64) -> Option<i64> {
        a.checked_add(b)
    }
    fn neg(&self, a: i64) -> i64 {
        -a
    }
    fn is_zero(&self, a: i64) -> bool {
        a == 0
    }
}

#[derive(Clone, Copy)]
pub(crate) struct ModP {
    pub p: u64,
}

impl ModP {
    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        acc
    }
}

impl Ring for ModP {
    type E = u64;
    fn embed(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }
    fn unit_inverse(&self, x: u64) -> Option<u64> {
        (x != 0).then(|| self.pow(x, self.p - 2))
    }
    fn mul(&self, a: u64, b: u64) -> Option<u64> {
        Some(a * b % self.p)
    }
    fn add(&self, a: u64, b: u64) -> Option<u64> {
        Some((a + b) % self.p)
    }
    fn neg(&self, a: u64) -> u64 {
        (self.p - a) % self.p
    }
    fn is_zero(&self, a: u64) -> bool {
        a == 0
    }
}

/// One elimination, with an optional snapshot: for row logs the entries of
/// row `τ` other than `σ`, for column logs the entries of `∂σ` other than `τ`.
#[derive(Debug, Clone)]
pub(crate) struct Elimination<E> {
    pub sigma: u32,
    pub tau: u32,
    pub c: E,
    pub snap: Vec<(u32, E)>,
}

pub(crate) struct Reduction<E> {
    /// `pivots[l]`: number of eliminations performed in `∂_l`.
    pub pivots: Vec<usize>,
    pub alive: Vec<Vec<bool>>,
    /// Remaining columns of `∂_l`, indexed by original cell; dead columns are empty.
    pub cols: Columns<E>,
    pub row_logs: Vec<Vec<Elimination<E>>>,
    pub col_logs: Vec<Vec<Elimination<E>>>,
}

impl<E: Copy> Reduction<E> {
    pub fn survivors(&self, l: usize) -> Vec<u32> {
        self.alive[l]
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(k, _)| k as u32)
            .collect()
    }
}

fn entry<E: Copy>(col: &[(u32, E)], r: u32) -> Option<E> {
    col.binary_search_by_key(&r, |e| e.0).ok().map(|k| col[k].1)
}

fn axpy<R: Ring>(ring: R, a: &[(u32, R::E)], f: R::E, b: &[(u32, R::E)]) -> Option<Vec<(u32, R::E)>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else {
            let t = ring.mul(f, b[j].1)?;
            if i < a.len() && a[i].0 == b[j].0 {
                let s = ring.add(a[i].1, t)?;
                if !ring.is_zero(s) {
                    out.push((a[i].0, s));
                }
                i += 1;
            } else if !ring.is_zero(t) {
                out.push((b[j].0, t));
            }
            j += 1;
        }
    }
    Some(out)
}

/// Reduces the complex with levels `0..dims.len()`; `boundaries[l]` holds the
/// columns of `∂_l` (level `l` to level `l - 1`), with `boundaries[0]` empty.
pub(crate) fn reduce<R: Ring>(
    ring: R,
    dims: &[usize],
    boundaries: Columns<R::E>,
    log_rows: &[bool],
    log_cols: &[bool],
) -> Reduction<R::E> {
    let levels = dims.len();
    let mut rows: Vec<Vec<Vec<u32>>> = Vec::with_capacity(levels);
    rows.push(Vec::new());
    for l in 1..levels {
        let mut r: Vec<Vec<u32>> = vec![Vec::new(); dims[l - 1]];
        for (x, col) in boundaries[l].iter().enumerate() {
            for &(t, _) in col {
                r[t as usize].push(x as u32);
            }
        }
        rows.push(r);
    }
    let mut st = State {
        ring,
        cols: boundaries,
        rows,
        alive: dims.iter().map(|&n| vec![true; n]).collect(),
        pivots: vec![0; levels],
        row_logs: (0..levels).map(|_| Vec::new()).collect(),
        col_logs: (0..levels).map(|_| Vec::new()).collect(),
    };
    for l in 1..levels {
        loop {
            let done = st.pass(l, log_rows[l], log_cols[l]);
            if done == 0 {
                break;
            }
        }
    }
    Reduction {
        pivots: st.pivots,
        alive: st.alive,
        cols: st.cols,
        row_logs: st.row_logs,
        col_logs: st.col_logs,
    }
}

struct State<R: Ring> {
    ring: R,
    cols: Columns<R::E>,
    rows: Vec<Vec<Vec<u32>>>,
    alive: Vec<Vec<bool>>,
    pivots: Vec<usize>,
    row_logs: Vec<Vec<Elimination<R::E>>>,
    col_logs: Vec<Vec<Elimination<R::E>>>,
}

impl<R: Ring> State<R> {
    /// One sweep over the rows of `∂_l`, lightest rows first. Returns the
    /// number of eliminations performed.
    fn pass(&mut self, l: usize, log_row: bool, log_col: bool) -> usize {
        let ring = self.ring;
        let mut heap = BinaryHeap::new();
        for (t, list) in self.rows[l].iter().enumerate() {
            if self.alive[l - 1][t] && !list.is_empty() {
                heap.push(Reverse((list.len() as u32, t as u32)));
            }
        }
        let mut count = 0;
        let mut skipped = vec![false; self.rows[l].len()];
        while let Some(Reverse((cnt, t))) = heap.pop() {
            let tu = t as usize;
            if !self.alive[l - 1][tu] || skipped[tu] {
                continue;
            }
            let mut list = std::mem::take(&mut self.rows[l][tu]);
            list.sort_unstable();
            list.dedup();
            {
                let cols = &self.cols[l];
                let alive = &self.alive[l];
                list.retain(|&x| alive[x as usize] && entry(&cols[x as usize], t).is_some());
            }
            if list.len() as u32 != cnt {
                if !list.is_empty() {
                    heap.push(Reverse((list.len() as u32, t)));
                }
                self.rows[l][tu] = list;
                continue;
            }
            let mut best: Option<(usize, u32, R::E)> = None;
            for &x in &list {
                let col = &self.cols[l][x as usize];
                let v = entry(col, t).expect("row list is exact here");
                if ring.unit_inverse(v).is_some() && best.is_none_or(|(len, _, _)| col.len() < len) {
                    best = Some((col.len(), x, v));
                }
            }
            let Some((_, s, c)) = best else {
                self.rows[l][tu] = list;
                skipped[tu] = true;
                continue;
            };
            let cinv = ring.unit_inverse(c).expect("unit");
            let col_s = std::mem::take(&mut self.cols[l][s as usize]);
            let mut updates = Vec::with_capacity(list.len());
            let mut overflow = false;
            for &x in &list {
                if x == s {
                    continue;
                }
                let col_x = &self.cols[l][x as usize];
                let alpha = entry(col_x, t).expect("row list is exact here");
                let f = ring.neg(ring.mul(alpha, cinv).expect("unit product"));
                match axpy(ring, col_x, f, &col_s) {
                    Some(v) => updates.push((x, alpha, v)),
                    None => {
                        overflow = true;
                        break;
                    }
                }
            }
            if overflow {
                self.cols[l][s as usize] = col_s;
                self.rows[l][tu] = list;
                skipped[tu] = true;
                continue;
            }
            if log_row {
                self.row_logs[l].push(Elimination {
                    sigma: s,
                    tau: t,
                    c,
                    snap: updates.iter().map(|&(x, alpha, _)| (x, alpha)).collect(),
                });
            }
            if log_col {
                self.col_logs[l].push(Elimination {
                    sigma: s,
                    tau: t,
                    c,
                    snap: col_s.iter().copied().filter(|e| e.0 != t).collect(),
                });
            }
            for (x, _, v) in updates {
                self.cols[l][x as usize] = v;
            }
            for &(r, _) in &col_s {
                if r == t {
                    continue;
                }
                let ru = r as usize;
                for &x in &list {
                    if x != s {
                        self.rows[l][ru].push(x);
                    }
                }
                heap.push(Reverse((self.rows[l][ru].len() as u32, r)));
            }
            self.alive[l][s as usize] = false;
            self.alive[l - 1][tu] = false;
            self.pivots[l] += 1;
            count += 1;
            if l + 1 < self.cols.len() {
                let ys = std::mem::take(&mut self.rows[l + 1][s as usize]);
                for y in ys {
                    let col = &mut self.cols[l + 1][y as usize];
                    if let Ok(k) = col.binary_search_by_key(&s, |e| e.0) {
                        col.remove(k);
                    }
                }
            }
            if l >= 2 {
                self.cols[l - 1][tu].clear();
            }
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> (Vec<usize>, Columns<i64>) {
        // triangle boundary: vertices 0,1,2; edges 01, 12, 02
        let d1 = vec![vec![(0, -1), (1, 1)], vec![(1, -1), (2, 1)], vec![(0, -1), (2, 1)]];
        (vec![3, 3], vec![Vec::new(), d1])
    }

    #[test]
    fn circle_leaves_one_vertex_one_edge() {
        let (dims, b) = circle();
        let r = reduce(Integers, &dims, b, &[false, true], &[false, true]);
        assert_eq!(r.pivots[1], 2);
        assert_eq!(r.survivors(0).len(), 1);
        assert_eq!(r.survivors(1).len(), 1);
        assert_eq!(r.row_logs[1].len(), 2);
    }

    #[test]
    fn mod_p_reduces_fully() {
        let d1: Vec<Vec<(u32, i64)>> = vec![vec![(0, 2)], vec![(0, 3)]];
        let as_mod = |p: u64| -> Vec<Vec<(u32, u64)>> {
            let ring = ModP { p };
            d1.iter()
                .map(|c| c.iter().map(|&(r, v)| (r, ring.embed(v))).filter(|e| e.1 != 0).collect())
                .collect()
        };
        let r = reduce(ModP { p: 1_000_003 }, &[1, 2], vec![Vec::new(), as_mod(1_000_003)], &[false; 2], &[false; 2]);
        assert_eq!(r.pivots[1], 1);
        let r = reduce(ModP { p: 2 }, &[1, 2], vec![Vec::new(), as_mod(2)], &[false; 2], &[false; 2]);
        assert_eq!(r.pivots[1], 1);
        let z = reduce(Integers, &[1, 2], vec![Vec::new(), d1.clone()], &[false; 2], &[false; 2]);
        assert_eq!(z.pivots[1], 0);
    }
}
