//! Sparse exact-rational matrices and the elimination services built on them.
//!
//! Rows are stored as sorted `(column, value)` lists with no explicit zeros,
//! so structural equality is value equality.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{BggError, Result};
use crate::rational::{format_q, Q};

pub type SparseVec = Vec<(usize, Q)>;

pub fn sv_from_dense(v: &[Q]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn sv_to_dense(v: &SparseVec, n: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

fn sv_get(v: &SparseVec, c: usize) -> Option<&Q> {
    v.binary_search_by_key(&c, |(i, _)| *i).ok().map(|k| &v[k].1)
}

/// `a - c * b` for sorted sparse vectors.
fn sv_sub_scaled(a: &SparseVec, c: &Q, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ka = a.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let kb = b.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ka < kb {
            out.push(a[i].clone());
            i += 1;
        } else if kb < ka {
            out.push((kb, -(c * &b[j].1)));
            j += 1;
        } else {
            let x = &a[i].1 - c * &b[j].1;
            if !x.is_zero() {
                out.push((ka, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Dense accumulator used by products and reductions.
struct Acc {
    vals: Vec<Q>,
    touched: Vec<usize>,
    mark: Vec<bool>,
}

impl Acc {
    fn new(n: usize) -> Self {
        Acc { vals: vec![Q::zero(); n], touched: Vec::new(), mark: vec![false; n] }
    }

    fn add(&mut self, i: usize, x: &Q) {
        if !self.mark[i] {
            self.mark[i] = true;
            self.touched.push(i);
        }
        self.vals[i] += x;
    }

    fn drain(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            self.mark[i] = false;
            let x = std::mem::take(&mut self.vals[i]);
            if !x.is_zero() {
                out.push((i, x));
            }
        }
        self.touched.clear();
        out
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{}", self.rows, self.cols)?;
        for (i, row) in self.data.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            let items: Vec<String> = row.iter().map(|(j, x)| format!("{j}:{}", format_q(x))).collect();
            writeln!(f, "  {i}: {}", items.join(" "))?;
        }
        Ok(())
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &Q::one())
    }

    pub fn scalar(n: usize, a: &Q) -> Self {
        let mut m = Self::zeros(n, n);
        if !a.is_zero() {
            for i in 0..n {
                m.data[i].push((i, a.clone()));
            }
        }
        m
    }

    pub fn from_dense(rows: usize, cols: usize, dense: &[Vec<Q>]) -> Self {
        assert_eq!(dense.len(), rows);
        let data = dense
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols);
                sv_from_dense(r)
            })
            .collect();
        QMatrix { rows, cols, data }
    }

    /// Builds a matrix whose columns are the given dense vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    m.data[i].push((j, x.clone()));
                }
            }
        }
        m
    }

    /// Duplicate positions are summed.
    pub fn from_triplets<I: IntoIterator<Item = (usize, usize, Q)>>(rows: usize, cols: usize, it: I) -> Self {
        let mut maps: Vec<BTreeMap<usize, Q>> = vec![BTreeMap::new(); rows];
        for (i, j, x) in it {
            assert!(i < rows && j < cols, "triplet ({i},{j}) outside {rows}x{cols}");
            *maps[i].entry(j).or_insert_with(Q::zero) += x;
        }
        let data = maps
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        QMatrix { rows, cols, data }
    }

    pub fn from_sparse_rows(cols: usize, data: Vec<SparseVec>) -> Self {
        QMatrix { rows: data.len(), cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        sv_get(&self.data[i], j).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn triplets(&self) -> Vec<(usize, usize, Q)> {
        let mut out = Vec::with_capacity(self.nnz());
        for (i, r) in self.data.iter().enumerate() {
            for (j, x) in r {
                out.push((i, *j, x.clone()));
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        self.data.iter().map(|r| sv_to_dense(r, self.cols)).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Q>> {
        let mut out = vec![vec![Q::zero(); self.rows]; self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for (j, x) in r {
                out[*j][i] = x.clone();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<SparseVec> = vec![Vec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for (j, x) in r {
                data[*j].push((i, x.clone()));
            }
        }
        QMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "product shape {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols);
        let mut acc = Acc::new(other.cols);
        let mut data = Vec::with_capacity(self.rows);
        for r in &self.data {
            for (k, a) in r {
                for (j, b) in &other.data[*k] {
                    acc.add(*j, &(a * b));
                }
            }
            data.push(acc.drain());
        }
        QMatrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        self.data
            .iter()
            .map(|r| {
                let mut s = Q::zero();
                for (j, x) in r {
                    if !v[*j].is_zero() {
                        s += x * &v[*j];
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        self.lin_comb(other, &-Q::one())
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        self.lin_comb(other, &Q::one())
    }

    /// `self - c * other`.
    fn lin_comb(&self, other: &QMatrix, c: &Q) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sum shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| sv_sub_scaled(a, c, b)).collect();
        QMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Q) -> QMatrix {
        if c.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let data = self.data.iter().map(|r| r.iter().map(|(j, x)| (*j, x * c)).collect()).collect();
        QMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> QMatrix {
        self.scale(&-Q::one())
    }

    /// `self - a * I`.
    pub fn shift(&self, a: &Q) -> QMatrix {
        assert_eq!(self.rows, self.cols);
        self.sub(&Self::scalar(self.rows, a))
    }

    pub fn commutator(&self, other: &QMatrix) -> QMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn kron(&self, other: &QMatrix) -> QMatrix {
        let mut t = Vec::new();
        for (i, r) in self.data.iter().enumerate() {
            for (j, a) in r {
                for (k, r2) in other.data.iter().enumerate() {
                    for (l, b) in r2 {
                        t.push((i * other.rows + k, j * other.cols + l, a * b));
                    }
                }
            }
        }
        QMatrix::from_triplets(self.rows * other.rows, self.cols * other.cols, t)
    }

    pub fn select_rows(&self, idx: &[usize]) -> QMatrix {
        QMatrix { rows: idx.len(), cols: self.cols, data: idx.iter().map(|&i| self.data[i].clone()).collect() }
    }

    pub fn select_columns(&self, idx: &[usize]) -> QMatrix {
        let mut pos = vec![usize::MAX; self.cols];
        for (new, &old) in idx.iter().enumerate() {
            pos[old] = new;
        }
        let data = self
            .data
            .iter()
            .map(|r| {
                let mut v: SparseVec = r.iter().filter(|(j, _)| pos[*j] != usize::MAX).map(|(j, x)| (pos[*j], x.clone())).collect();
                v.sort_by_key(|e| e.0);
                v
            })
            .collect();
        QMatrix { rows: self.rows, cols: idx.len(), data }
    }

    pub fn vstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        QMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.rows, other.rows);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut v = a.clone();
                v.extend(b.iter().map(|(j, x)| (j + self.cols, x.clone())));
                v
            })
            .collect();
        QMatrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    pub fn pow(&self, e: usize) -> QMatrix {
        let mut out = Self::identity(self.rows);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Largest absolute numerator and denominator among the entries, as a
    /// crude measure of coefficient growth.
    pub fn max_height(&self) -> (u64, u64) {
        let mut n = 0u64;
        let mut d = 0u64;
        for r in &self.data {
            for (_, x) in r {
                n = n.max(x.numer().bits());
                d = d.max(x.denom().bits());
            }
        }
        (n, d)
    }

    pub fn row_echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.cols);
        for r in &self.data {
            e.insert(r.clone());
        }
        e
    }

    pub fn rank(&self) -> usize {
        // Eliminate along the shorter side.
        if self.rows <= self.cols {
            self.row_echelon().rank()
        } else {
            self.transpose().row_echelon().rank()
        }
    }

    /// Basis of `{x : self x = 0}` with one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        self.row_echelon().nullspace()
    }

    /// Canonical (reduced echelon) basis of the column space.
    pub fn column_space(&self) -> Vec<Vec<Q>> {
        self.transpose().row_echelon().basis_dense()
    }

    /// Some solution of `self x = b`, free variables set to zero.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&QMatrix::from_columns(self.rows, &[b.to_vec()]));
        let e = aug.row_echelon();
        let mut x = vec![Q::zero(); self.cols];
        for (row, &p) in e.rows.iter().zip(&e.pivots) {
            if p == self.cols {
                return None;
            }
            x[p] = sv_get(row, self.cols).cloned().unwrap_or_else(Q::zero);
        }
        Some(x)
    }
}

/// Reduced row echelon form built incrementally; every stored row has a
/// leading one and zeros in all other pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
    pivot_row: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new(), pivots: Vec::new(), pivot_row: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of `v` after subtracting its components along the pivots.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let hits: Vec<(usize, Q)> = v
            .iter()
            .filter_map(|(c, x)| self.pivot_row.get(c).map(|&r| (r, x.clone())))
            .collect();
        if hits.is_empty() {
            return v.clone();
        }
        let mut acc = Acc::new(self.dim);
        for (c, x) in v {
            acc.add(*c, x);
        }
        for (r, x) in &hits {
            let neg = -x;
            for (c, y) in &self.rows[*r] {
                acc.add(*c, &(&neg * y));
            }
        }
        acc.drain()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn contains_dense(&self, v: &[Q]) -> bool {
        self.contains(&sv_from_dense(v))
    }

    /// Adds `v` to the span; returns false when it was already contained.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(&v);
        if r.is_empty() {
            return false;
        }
        let p = r[0].0;
        let lead = r[0].1.clone();
        let r: SparseVec = if lead.is_one() { r } else { r.into_iter().map(|(c, x)| (c, x / &lead)).collect() };
        for row in self.rows.iter_mut() {
            if let Some(x) = sv_get(row, p).cloned() {
                *row = sv_sub_scaled(row, &x, &r);
            }
        }
        self.pivot_row.insert(p, self.rows.len());
        self.rows.push(r);
        self.pivots.push(p);
        true
    }

    pub fn insert_dense(&mut self, v: &[Q]) -> bool {
        self.insert(sv_from_dense(v))
    }

    /// Rows sorted by pivot column.
    pub fn basis(&self) -> Vec<SparseVec> {
        self.pivot_row.values().map(|&r| self.rows[r].clone()).collect()
    }

    pub fn basis_dense(&self) -> Vec<Vec<Q>> {
        self.basis().iter().map(|r| sv_to_dense(r, self.dim)).collect()
    }

    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let mut out = Vec::new();
        for f in 0..self.dim {
            if self.pivot_row.contains_key(&f) {
                continue;
            }
            let mut x = vec![Q::zero(); self.dim];
            x[f] = Q::one();
            for (&c, &r) in &self.pivot_row {
                if let Some(y) = sv_get(&self.rows[r], f) {
                    x[c] = -y.clone();
                }
            }
            out.push(x);
        }
        out
    }
}

/// Coordinates of vectors with respect to a fixed linearly independent list.
#[derive(Clone, Debug)]
pub struct BasisCoords {
    dim: usize,
    len: usize,
    ech: Echelon,
}

impl BasisCoords {
    pub fn new(dim: usize, basis: &[Vec<Q>]) -> Result<Self> {
        let len = basis.len();
        let mut ech = Echelon::new(dim + len);
        for (i, v) in basis.iter().enumerate() {
            if v.len() != dim {
                return Err(BggError::Shape(format!("basis vector of length {} in dimension {dim}", v.len())));
            }
            let mut s = sv_from_dense(v);
            if s.is_empty() {
                return Err(BggError::Internal("zero vector in basis".into()));
            }
            s.push((dim + i, Q::one()));
            ech.insert(s);
            if *ech.pivots.last().unwrap() >= dim {
                return Err(BggError::Internal("basis vectors are linearly dependent".into()));
            }
        }
        Ok(BasisCoords { dim, len, ech })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.coords(v).is_some()
    }

    pub fn coords(&self, v: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(v.len(), self.dim);
        let r = self.ech.reduce(&sv_from_dense(v));
        if r.iter().any(|(c, _)| *c < self.dim) {
            return None;
        }
        let mut x = vec![Q::zero(); self.len];
        for (c, y) in r {
            x[c - self.dim] = -y;
        }
        Some(x)
    }
}

/// Canonical reduced basis of the span of `vecs`.
pub fn span_basis(dim: usize, vecs: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut e = Echelon::new(dim);
    for v in vecs {
        e.insert_dense(v);
    }
    e.basis_dense()
}

pub fn span_rank(dim: usize, vecs: &[Vec<Q>]) -> usize {
    let mut e = Echelon::new(dim);
    for v in vecs {
        e.insert_dense(v);
    }
    e.rank()
}

pub fn vec_is_zero(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn vec_sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_scale(a: &[Q], c: &Q) -> Vec<Q> {
    a.iter().map(|x| x * c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn m(rows: &[&[i64]]) -> QMatrix {
        let dense: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        QMatrix::from_dense(dense.len(), dense[0].len(), &dense)
    }

    #[test]
    fn product_and_transpose() {
        let a = m(&[&[1, 2], &[0, 1], &[3, 0]]);
        let b = m(&[&[1, 0, 1], &[2, 1, 0]]);
        assert_eq!(a.mul(&b), m(&[&[5, 2, 1], &[2, 1, 0], &[3, 0, 3]]));
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.mul(&b).transpose(), b.transpose().mul(&a.transpose()));
    }

    #[test]
    fn rank_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(vec_is_zero(&a.mul_vec(&ns[0])));
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = m(&[&[1, 1], &[1, -1], &[2, 0]]);
        let x = a.solve(&[q(3), q(1), q(4)]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        assert!(a.solve(&[q(3), q(1), q(5)]).is_none());
    }

    #[test]
    fn coords_in_basis() {
        let b = vec![vec![q(1), q(1), q(0)], vec![q(0), q(1), q(1)]];
        let bc = BasisCoords::new(3, &b).unwrap();
        assert_eq!(bc.coords(&[q(2), qf(7, 2), qf(3, 2)]).unwrap(), vec![q(2), qf(3, 2)]);
        assert!(bc.coords(&[q(1), q(0), q(0)]).is_none());
        assert!(BasisCoords::new(3, &[b[0].clone(), b[0].clone()]).is_err());
    }

    #[test]
    fn kron_shape() {
        let a = m(&[&[0, 1], &[1, 0]]);
        let i = QMatrix::identity(3);
        let k = a.kron(&i);
        assert_eq!((k.nrows(), k.ncols()), (6, 6));
        assert_eq!(k.get(0, 3), q(1));
        assert!(k.mul(&k).sub(&QMatrix::identity(6)).is_zero());
    }

    proptest::proptest! {
        #[test]
        fn rank_plus_nullity(entries in proptest::collection::vec(-2i64..3, 20)) {
            let dense: Vec<Vec<Q>> = entries.chunks(5).map(|r| r.iter().map(|&x| q(x)).collect()).collect();
            let a = QMatrix::from_dense(4, 5, &dense);
            let ns = a.nullspace();
            proptest::prop_assert_eq!(a.rank() + ns.len(), 5);
            proptest::prop_assert_eq!(a.rank(), a.transpose().rank());
            for v in &ns {
                proptest::prop_assert!(vec_is_zero(&a.mul_vec(v)));
            }
        }
    }
}
