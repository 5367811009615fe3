use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::dense::IntMatrix;
use crate::{Error, Result};

/// Column-major sparse integer matrix. Each column is sorted by row index and
/// never stores a zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(u32, i64)>>,
}

impl SparseIntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, i64)]) -> Result<Self> {
        let mut columns: Vec<Vec<(u32, i64)>> = vec![Vec::new(); cols];
        for &(r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::InvalidParameter(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
            columns[c].push((r as u32, v));
        }
        for col in &mut columns {
            *col = normalize(std::mem::take(col))?;
        }
        Ok(Self { rows, cols, columns })
    }

    /// Builds from columns that are already sorted, deduplicated and zero-free.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(u32, i64)>>) -> Self {
        debug_assert!(columns.iter().all(|c| {
            c.windows(2).all(|w| w[0].0 < w[1].0) && c.iter().all(|&(r, v)| v != 0 && (r as usize) < rows)
        }));
        Self {
            rows,
            cols: columns.len(),
            columns,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn column(&self, c: usize) -> &[(u32, i64)] {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[Vec<(u32, i64)>] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<Vec<(u32, i64)>> {
        self.columns
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        let col = &self.columns[c];
        match col.binary_search_by_key(&(r as u32), |e| e.0) {
            Ok(k) => col[k].1,
            Err(_) => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn triplets(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                out.push((r as usize, c, v));
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut columns: Vec<Vec<(u32, i64)>> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                columns[r as usize].push((c as u32, v));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            columns,
        }
    }

    /// `self * other`, with overflow checks.
    pub fn mul(&self, other: &SparseIntMatrix) -> Result<SparseIntMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidParameter(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut columns = Vec::with_capacity(other.cols);
        for col in &other.columns {
            columns.push(self.apply(col)?);
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            columns,
        })
    }

    /// Applies the matrix to a sparse vector given as (index, value) pairs.
    pub fn apply(&self, v: &[(u32, i64)]) -> Result<Vec<(u32, i64)>> {
        let mut acc: Vec<(u32, i64)> = Vec::new();
        for &(k, x) in v {
            for &(r, y) in &self.columns[k as usize] {
                let p = x.checked_mul(y).ok_or(Error::Overflow("sparse product"))?;
                acc.push((r, p));
            }
        }
        normalize(acc)
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                m.set(r as usize, c, BigInt::from(v));
            }
        }
        m
    }

    pub fn from_dense(m: &IntMatrix) -> Result<Self> {
        let mut triplets = Vec::new();
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let v = m.get(r, c);
                let v: i64 = v.try_into().map_err(|_| Error::Overflow("dense to sparse"))?;
                if v != 0 {
                    triplets.push((r, c, v));
                }
            }
        }
        Self::from_triplets(m.rows(), m.cols(), &triplets)
    }
}

/// A signed permutation of basis cells: cell `k` maps to `sign * images[k].0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedPerm {
    images: Vec<(u32, i8)>,
}

impl SignedPerm {
    pub fn new(images: Vec<(u32, i8)>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &(t, s) in &images {
            let t = t as usize;
            if t >= images.len() || seen[t] || (s != 1 && s != -1) {
                return Err(Error::InvalidParameter("not a signed permutation".into()));
            }
            seen[t] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n as u32).map(|k| (k, 1)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, k: usize) -> (u32, i8) {
        self.images[k]
    }

    pub fn apply(&self, v: &[(u32, i64)]) -> Vec<(u32, i64)> {
        let mut out: Vec<(u32, i64)> = v
            .iter()
            .map(|&(k, x)| {
                let (t, s) = self.images[k as usize];
                (t, if s < 0 { -x } else { x })
            })
            .collect();
        out.sort_unstable_by_key(|e| e.0);
        out
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        SignedPerm {
            images: other
                .images
                .iter()
                .map(|&(t, s)| {
                    let (u, r) = self.images[t as usize];
                    (u, s * r)
                })
                .collect(),
        }
    }

    pub fn pow(&self, e: u64) -> SignedPerm {
        let mut acc = SignedPerm::identity(self.len());
        for _ in 0..e {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &(t, s))| t as usize == k && s == 1)
    }

    pub fn to_sparse(&self) -> SparseIntMatrix {
        let n = self.len();
        let mut columns = vec![Vec::new(); n];
        for (k, &(t, s)) in self.images.iter().enumerate() {
            columns[k].push((t, s as i64));
        }
        SparseIntMatrix::from_columns(n, columns)
    }
}

/// A chain as sorted (cell index, coefficient) pairs.
pub type Chain = Vec<(u32, i64)>;

/// Sorts by index, sums duplicates and drops zeros.
pub fn normalize(mut v: Vec<(u32, i64)>) -> Result<Vec<(u32, i64)>> {
    v.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(u32, i64)> = Vec::with_capacity(v.len());
    for (k, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == k => {
                last.1 = last.1.checked_add(x).ok_or(Error::Overflow("sparse sum"))?;
            }
            _ => out.push((k, x)),
        }
    }
    out.retain(|e| e.1 != 0);
    Ok(out)
}

/// `a + f * b` for sorted sparse vectors; `None` on overflow.
pub fn axpy(a: &[(u32, i64)], f: i64, b: &[(u32, i64)]) -> Option<Vec<(u32, i64)>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else {
            let t = f.checked_mul(b[j].1)?;
            if i < a.len() && a[i].0 == b[j].0 {
                let s = a[i].1.checked_add(t)?;
                if s != 0 {
                    out.push((a[i].0, s));
                }
                i += 1;
            } else {
                out.push((b[j].0, t));
            }
            j += 1;
        }
    }
    Some(out)
}

/// Sparse dot product of two sorted vectors.
pub fn dot(a: &[(u32, i64)], b: &[(u32, i64)]) -> Option<i64> {
    let (mut i, mut j) = (0, 0);
    let mut s: i64 = 0;
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                s = s.checked_add(a[i].1.checked_mul(b[j].1)?)?;
                i += 1;
                j += 1;
            }
        }
    }
    Some(s)
}
