use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{Mat, Scalar};
use crate::error::{Error, Result};

/// Sorted `(index, value)` pairs with no explicit zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

pub fn sparse_from_dense(v: &[Scalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn sparse_to_dense(v: &SparseVec, len: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// `a + s·b`, merged.
pub fn sparse_axpy(a: &SparseVec, s: &Scalar, b: &SparseVec) -> SparseVec {
    if s.is_zero() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ai = a.get(i).map(|e| e.0);
        let bj = b.get(j).map(|e| e.0);
        match (ai, bj) {
            (Some(x), Some(y)) if x == y => {
                let v = &a[i].1 + s * &b[j].1;
                if !v.is_zero() {
                    out.push((x, v));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(a[i].clone());
                i += 1;
            }
            (Some(x), None) => {
                out.push((x, a[i].1.clone()));
                i += 1;
            }
            (_, Some(y)) => {
                out.push((y, s * &b[j].1));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

pub(crate) fn sparse_get(v: &SparseVec, index: usize) -> Option<&Scalar> {
    v.binary_search_by_key(&index, |e| e.0).ok().map(|p| &v[p].1)
}

/// Row-compressed sparse matrix used for representation operators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseMat {
    rows: usize,
    cols: usize,
    row_entries: Vec<SparseVec>,
}

impl SparseMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMat {
            rows,
            cols,
            row_entries: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMat {
            rows: n,
            cols: n,
            row_entries: (0..n).map(|i| vec![(i, Scalar::one())]).collect(),
        }
    }

    pub fn from_dense(m: &Mat) -> Self {
        SparseMat {
            rows: m.rows(),
            cols: m.cols(),
            row_entries: (0..m.rows()).map(|r| sparse_from_dense(m.row(r))).collect(),
        }
    }

    /// Builds from arbitrary triplets; duplicates are summed.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, Scalar)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r}, {c}) out of bounds");
            *acc[r].entry(c).or_insert_with(Scalar::zero) += v;
        }
        SparseMat {
            rows,
            cols,
            row_entries: acc
                .into_iter()
                .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
                .collect(),
        }
    }

    pub fn to_dense(&self) -> Mat {
        let mut m = Mat::zeros(self.rows, self.cols);
        for (r, row) in self.row_entries.iter().enumerate() {
            for (c, v) in row {
                m[(r, *c)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.row_entries[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        sparse_get(&self.row_entries[r], c).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn nnz(&self) -> usize {
        self.row_entries.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.row_entries.iter().all(Vec::is_empty)
    }

    /// Iterates `(row, col, value)` over the stored nonzeros.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.row_entries
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(self
            .row_entries
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|(c, _)| !v[*c].is_zero())
                    .fold(Scalar::zero(), |acc, (c, x)| acc + x * &v[*c])
            })
            .collect())
    }

    pub fn matmul(&self, other: &SparseMat) -> Result<SparseMat> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                op: "sparse matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let row_entries = self
            .row_entries
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (k, a) in row {
                    for (j, b) in &other.row_entries[*k] {
                        *acc.entry(*j).or_insert_with(Scalar::zero) += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Ok(SparseMat {
            rows: self.rows,
            cols: other.cols,
            row_entries,
        })
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: &Scalar, other: &SparseMat) -> Result<SparseMat> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                op: "sparse axpy",
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(SparseMat {
            rows: self.rows,
            cols: self.cols,
            row_entries: self
                .row_entries
                .iter()
                .zip(&other.row_entries)
                .map(|(a, b)| sparse_axpy(a, s, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &SparseMat) -> Result<SparseMat> {
        self.axpy(&Scalar::one(), other)
    }

    pub fn sub(&self, other: &SparseMat) -> Result<SparseMat> {
        self.axpy(&-Scalar::one(), other)
    }

    pub fn scale(&self, s: &Scalar) -> SparseMat {
        if s.is_zero() {
            return SparseMat::zeros(self.rows, self.cols);
        }
        SparseMat {
            rows: self.rows,
            cols: self.cols,
            row_entries: self
                .row_entries
                .iter()
                .map(|row| row.iter().map(|(c, v)| (*c, v * s)).collect())
                .collect(),
        }
    }

    pub fn neg(&self) -> SparseMat {
        self.scale(&-Scalar::one())
    }

    pub fn transpose(&self) -> SparseMat {
        let mut rows: Vec<SparseVec> = vec![Vec::new(); self.cols];
        for (r, row) in self.row_entries.iter().enumerate() {
            for (c, v) in row {
                rows[*c].push((r, v.clone()));
            }
        }
        SparseMat {
            rows: self.cols,
            cols: self.rows,
            row_entries: rows,
        }
    }

    pub fn commutator(&self, other: &SparseMat) -> Result<SparseMat> {
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &SparseMat) -> SparseMat {
        let (p, q) = other.shape();
        let mut row_entries = Vec::with_capacity(self.rows * p);
        for a_row in &self.row_entries {
            for b_row in &other.row_entries {
                let mut row = Vec::with_capacity(a_row.len() * b_row.len());
                for (ca, a) in a_row {
                    for (cb, b) in b_row {
                        row.push((ca * q + cb, a * b));
                    }
                }
                row_entries.push(row);
            }
        }
        SparseMat {
            rows: self.rows * p,
            cols: self.cols * q,
            row_entries,
        }
    }

    pub fn block_diagonal(blocks: &[SparseMat]) -> SparseMat {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut row_entries = Vec::with_capacity(rows);
        let mut col_offset = 0;
        for b in blocks {
            for row in &b.row_entries {
                row_entries.push(row.iter().map(|(c, v)| (c + col_offset, v.clone())).collect());
            }
            col_offset += b.cols;
        }
        SparseMat {
            rows,
            cols,
            row_entries,
        }
    }

    /// Keeps the listed rows and columns (both sorted ascending), renumbered.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> SparseMat {
        let mut col_map = vec![usize::MAX; self.cols];
        for (new, &old) in cols.iter().enumerate() {
            col_map[old] = new;
        }
        SparseMat {
            rows: rows.len(),
            cols: cols.len(),
            row_entries: rows
                .iter()
                .map(|&r| {
                    self.row_entries[r]
                        .iter()
                        .filter(|(c, _)| col_map[*c] != usize::MAX)
                        .map(|(c, v)| (col_map[*c], v.clone()))
                        .collect()
                })
                .collect(),
        }
    }

    /// `Σ coeffs[i]·mats[i]`; all matrices must share a shape.
    pub fn linear_combination(rows: usize, cols: usize, coeffs: &[Scalar], mats: &[SparseMat]) -> Result<SparseMat> {
        let mut out = SparseMat::zeros(rows, cols);
        for (c, m) in coeffs.iter().zip(mats) {
            if !c.is_zero() {
                out = out.axpy(c, m)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<SparseMat> {
        let mut out = SparseMat::identity(self.rows);
        for _ in 0..k {
            out = out.matmul(self)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_roundtrip_and_products_agree() {
        let a = Mat::from_rows(&[[1, 0, 2], [0, 0, -1], [3, 4, 0]]);
        let b = Mat::from_rows(&[[0, 1, 0], [5, 0, 0], [0, 0, 2]]);
        let (sa, sb) = (SparseMat::from_dense(&a), SparseMat::from_dense(&b));
        assert_eq!(sa.to_dense(), a);
        assert_eq!(sa.matmul(&sb).unwrap().to_dense(), a.matmul(&b).unwrap());
        assert_eq!(sa.kron(&sb).to_dense(), a.kron(&b));
        assert_eq!(sa.transpose().to_dense(), a.transpose());
        assert_eq!(sa.commutator(&sb).unwrap().to_dense(), a.commutator(&b).unwrap());
    }

    #[test]
    fn axpy_cancels_to_empty_rows() {
        let a = SparseMat::identity(3);
        let z = a.sub(&a).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.nnz(), 0);
    }
}
