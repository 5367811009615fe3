//! Dense matrices over arbitrary-precision integers: Smith and Hermite normal
//! forms, determinants, characteristic polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone().into());
            }
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self {
            rows,
            cols,
            data: data.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Entries as `i64`, or `None` if any entry does not fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|v| i64::try_from(v).ok()).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut p = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        p.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        p
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> IntMatrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Submatrix of the given row range and column range.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> IntMatrix {
        let mut b = Self::zeros(rows.len(), cols.len());
        for (i, r) in rows.clone().enumerate() {
            for (j, c) in cols.clone().enumerate() {
                b.set(i, j, self.get(r, c).clone());
            }
        }
        b
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        let mut prev = BigInt::one();
        for c in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let Some(p) = (rank..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(rank, p);
            for i in rank + 1..a.rows {
                for j in c + 1..a.cols {
                    let v = (a.get(i, j) * a.get(rank, c) - a.get(i, c) * a.get(rank, j)) / &prev;
                    a.set(i, j, v);
                }
                a.set(i, c, BigInt::zero());
            }
            prev = a.get(rank, c).clone();
            rank += 1;
        }
        rank
    }

    /// Coefficients `c_0, ..., c_n` of `det(xI - A)`, by Faddeev-LeVerrier.
    pub fn charpoly(&self) -> Vec<BigInt> {
        assert!(self.is_square());
        let n = self.rows;
        let mut c = vec![BigInt::zero(); n + 1];
        c[n] = BigInt::one();
        let mut mk = IntMatrix::zeros(n, n);
        for k in 1..=n {
            let mut next = self.mul(&mk);
            for i in 0..n {
                next.data[i * n + i] += &c[n - k + 1];
            }
            mk = next;
            let tr = self.mul(&mk).trace();
            let (q, r) = tr.div_rem(&BigInt::from(k));
            debug_assert!(r.is_zero());
            c[n - k] = -q;
        }
        c
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + i, r * self.cols + j);
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -std::mem::take(&mut self.data[i * self.cols + c]);
            self.data[i * self.cols + c] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let v = -std::mem::take(&mut self.data[r * self.cols + j]);
            self.data[r * self.cols + j] = v;
        }
    }

    /// rows (i, j) <- (s r_i + t r_j, p r_i + q r_j)
    fn combine_rows(&mut self, i: usize, j: usize, k: &[BigInt; 4]) {
        let [s, t, p, q] = k;
        for c in 0..self.cols {
            let x = &self.data[i * self.cols + c];
            let y = &self.data[j * self.cols + c];
            if x.is_zero() && y.is_zero() {
                continue;
            }
            let ni = s * x + t * y;
            let nj = p * x + q * y;
            self.data[i * self.cols + c] = ni;
            self.data[j * self.cols + c] = nj;
        }
    }

    /// cols (i, j) <- (s c_i + t c_j, p c_i + q c_j)
    fn combine_cols(&mut self, i: usize, j: usize, k: &[BigInt; 4]) {
        let [s, t, p, q] = k;
        for r in 0..self.rows {
            let x = &self.data[r * self.cols + i];
            let y = &self.data[r * self.cols + j];
            if x.is_zero() && y.is_zero() {
                continue;
            }
            let ni = s * x + t * y;
            let nj = p * x + q * y;
            self.data[r * self.cols + i] = ni;
            self.data[r * self.cols + j] = nj;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Smith normal form `U * M * V = D` together with `U^-1` and `V^-1`.
#[derive(Debug, Clone)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl Snf {
    /// Nonzero invariant factors `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }
}

struct SnfState {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfState {
    fn row_op(&mut self, i: usize, j: usize, k: [BigInt; 4]) {
        self.a.combine_rows(i, j, &k);
        self.u.combine_rows(i, j, &k);
        let [s, t, p, q] = k;
        self.u_inv.combine_cols(i, j, &[q, -p, -t, s]);
    }

    fn col_op(&mut self, i: usize, j: usize, k: [BigInt; 4]) {
        self.a.combine_cols(i, j, &k);
        self.v.combine_cols(i, j, &k);
        let [s, t, p, q] = k;
        self.v_inv.combine_rows(i, j, &[q, -p, -t, s]);
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
}

/// Unimodular 2x2 `[s t; p q]` sending `(x, y)` to `(gcd, 0)`.
fn reducer(x: &BigInt, y: &BigInt) -> [BigInt; 4] {
    if (y % x).is_zero() {
        return [BigInt::one(), BigInt::zero(), -(y / x), BigInt::one()];
    }
    let e = x.extended_gcd(y);
    let g = e.gcd;
    [e.x, e.y, -(y / &g), x / &g]
}

/// Smallest entry of the trailing block, ties broken by least fill.
fn markowitz_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let row_nnz: Vec<usize> = (t..a.rows).map(|i| (t..a.cols).filter(|&j| !a.get(i, j).is_zero()).count()).collect();
    let col_nnz: Vec<usize> = (t..a.cols).map(|j| (t..a.rows).filter(|&i| !a.get(i, j).is_zero()).count()).collect();
    let mut best: Option<(BigInt, usize, usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            let size = x.abs();
            let fill = (row_nnz[i - t] - 1) * (col_nnz[j - t] - 1);
            let better = match &best {
                None => true,
                Some((bs, bf, _, _)) => size < *bs || (size == *bs && fill < *bf),
            };
            if better {
                best = Some((size, fill, i, j));
            }
        }
    }
    best.map(|(_, _, i, j)| (i, j))
}

pub fn snf(m: &IntMatrix) -> Snf {
    let (rows, cols) = (m.rows, m.cols);
    let mut st = SnfState {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = markowitz_pivot(&st.a, t) else { break };
        st.swap_rows(t, pi);
        st.swap_cols(t, pj);
        loop {
            for i in t + 1..rows {
                if !st.a.get(i, t).is_zero() {
                    let k = reducer(st.a.get(t, t), st.a.get(i, t));
                    st.row_op(t, i, k);
                }
            }
            for j in t + 1..cols {
                if !st.a.get(t, j).is_zero() {
                    let k = reducer(st.a.get(t, t), st.a.get(t, j));
                    st.col_op(t, j, k);
                }
            }
            if (t + 1..rows).any(|i| !st.a.get(i, t).is_zero()) {
                continue;
            }
            let p = st.a.get(t, t).clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(st.a.get(i, j) % &p).is_zero()));
            match bad {
                Some(i) => st.row_op(t, i, [BigInt::one(), BigInt::one(), BigInt::zero(), BigInt::one()]),
                None => break,
            }
        }
        if st.a.get(t, t).is_negative() {
            st.negate_row(t);
        }
        t += 1;
    }
    Snf {
        d: st.a,
        u: st.u,
        u_inv: st.u_inv,
        v: st.v,
        v_inv: st.v_inv,
        rank: t,
    }
}

/// Basis of the integer kernel `{x : M x = 0}`, as columns of the returned matrix.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let s = snf(m);
    s.v.block(0..m.cols, s.rank..m.cols)
}

/// Row-style Hermite normal form of the lattice spanned by the rows of `m`;
/// zero rows are dropped, pivots are positive and entries above a pivot are
/// reduced into `[0, pivot)`.
pub fn hnf_rows(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        for i in r + 1..a.rows {
            if !a.get(i, c).is_zero() {
                if a.get(r, c).is_zero() {
                    a.swap_rows(r, i);
                } else {
                    let k = reducer(a.get(r, c), a.get(i, c));
                    a.combine_rows(r, i, &k);
                }
            }
        }
        if a.get(r, c).is_zero() {
            continue;
        }
        if a.get(r, c).is_negative() {
            a.negate_row(r);
        }
        let p = a.get(r, c).clone();
        for i in 0..r {
            let q = a.get(i, c).div_floor(&p);
            if !q.is_zero() {
                a.combine_rows(i, r, &[BigInt::one(), -q, BigInt::zero(), BigInt::one()]);
            }
        }
        r += 1;
    }
    a.block(0..r, 0..a.cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_snf(m: &IntMatrix) -> Snf {
        let s = snf(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(m.rows()));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(m.cols()));
        assert!(s.u.det().abs().is_one());
        assert!(s.v.det().abs().is_one());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        assert!(f.iter().all(|x| x.is_positive()));
        assert!(f.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        assert_eq!(s.rank, m.rank());
        s
    }

    #[test]
    fn snf_examples() {
        let s = check_snf(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.invariant_factors(), vec![BigInt::from(2), BigInt::from(4)]);
        let s = check_snf(&IntMatrix::identity(4));
        assert_eq!(s.invariant_factors(), vec![BigInt::one(); 4]);
        let s = check_snf(&IntMatrix::zeros(3, 2));
        assert_eq!(s.rank, 0);
        assert!(s.d.is_zero());
    }

    #[test]
    fn snf_needs_divisibility_fix() {
        let s = check_snf(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn det_and_charpoly() {
        let m = IntMatrix::from_rows(&[vec![0, -1], vec![1, 1]]);
        assert_eq!(m.det(), BigInt::one());
        let cp: Vec<BigInt> = [1, -1, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(m.charpoly(), cp);
        assert_eq!(m.pow(6), IntMatrix::identity(2));
    }

    #[test]
    fn hnf_is_canonical() {
        let a = IntMatrix::from_rows(&[vec![1, 1], vec![2, 0]]);
        let b = IntMatrix::from_rows(&[vec![3, 1], vec![1, -1], vec![0, 2]]);
        assert_eq!(hnf_rows(&a), hnf_rows(&b));
        assert_eq!(hnf_rows(&a), IntMatrix::from_rows(&[vec![1, 1], vec![0, 2]]));
    }

    #[test]
    fn kernel_of_augmentation() {
        let k = kernel_basis(&IntMatrix::from_rows(&[vec![1, 1, 1]]));
        assert_eq!(k.cols(), 2);
        let zero = IntMatrix::from_rows(&[vec![1, 1, 1]]).mul(&k);
        assert!(zero.is_zero());
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
            prop::collection::vec(-6i64..7, r * c).prop_map(move |d| IntMatrix::from_i64(r, c, &d))
        })
    }

    proptest! {
        #[test]
        fn snf_properties(m in small_matrix()) {
            let s = check_snf(&m);
            if m.is_square() {
                let prod: BigInt = s.diagonal().iter().product();
                prop_assert_eq!(prod, m.det().abs());
            }
        }

        #[test]
        fn charpoly_is_det(m in (1usize..5).prop_flat_map(|n| prop::collection::vec(-4i64..5, n * n)
            .prop_map(move |d| IntMatrix::from_i64(n, n, &d)))) {
            let cp = m.charpoly();
            let n = m.rows();
            for x in -3i64..4 {
                let mut xi = IntMatrix::identity(n);
                for i in 0..n { xi.set(i, i, BigInt::from(x)); }
                let val: BigInt = cp.iter().enumerate().map(|(k, c)| c * BigInt::from(x).pow(k as u32)).sum();
                prop_assert_eq!(val, xi.sub(&m).det());
            }
        }
    }

    #[test]
    fn snf_large_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for &(r, c, density) in &[(40, 60, 0.03), (120, 80, 0.03), (200, 200, 0.015)] {
            let mut m = IntMatrix::zeros(r, c);
            for i in 0..r {
                for j in 0..c {
                    if rng.gen_bool(density) {
                        m.set(i, j, BigInt::from(rng.gen_range(-2i64..=2)));
                    }
                }
            }
            check_snf(&m);
        }
    }
}
