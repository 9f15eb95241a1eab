use num_traits::One;

use super::sparse::{sparse_axpy, sparse_from_dense, sparse_get, sparse_to_dense};
use super::{Scalar, SparseVec};
use crate::error::{Error, Result};

/// Gauss–Jordan reduction of a list of sparse rows.
///
/// Returns the reduced rows (pivot entries normalised to 1), their pivot
/// columns, and for each reduced row the combination of input rows that
/// produced it. Rows reducing to zero are dropped from all three lists.
fn reduce(rows: Vec<SparseVec>) -> (Vec<SparseVec>, Vec<usize>, Vec<SparseVec>) {
    let mut reduced: Vec<SparseVec> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut transforms: Vec<SparseVec> = Vec::new();
    for (idx, mut row) in rows.into_iter().enumerate() {
        let mut t: SparseVec = vec![(idx, Scalar::one())];
        for (k, p) in pivots.iter().enumerate() {
            if let Some(c) = sparse_get(&row, *p).cloned() {
                let neg = -c;
                row = sparse_axpy(&row, &neg, &reduced[k]);
                t = sparse_axpy(&t, &neg, &transforms[k]);
            }
        }
        let Some((p, lead)) = row.first().cloned() else {
            continue;
        };
        let inv = Scalar::one() / lead;
        let row: SparseVec = row.into_iter().map(|(c, v)| (c, v * &inv)).collect();
        let t: SparseVec = t.into_iter().map(|(c, v)| (c, v * &inv)).collect();
        for k in 0..reduced.len() {
            if let Some(c) = sparse_get(&reduced[k], p).cloned() {
                let neg = -c;
                reduced[k] = sparse_axpy(&reduced[k], &neg, &row);
                transforms[k] = sparse_axpy(&transforms[k], &neg, &t);
            }
        }
        reduced.push(row);
        pivots.push(p);
        transforms.push(t);
    }
    (reduced, pivots, transforms)
}

/// Reduced row echelon basis of the span of `vectors`, ordered by pivot.
pub fn echelon_basis(vectors: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let len = vectors.first().map_or(0, Vec::len);
    let (reduced, pivots, _) = reduce(vectors.iter().map(|v| sparse_from_dense(v)).collect());
    let mut order: Vec<usize> = (0..reduced.len()).collect();
    order.sort_by_key(|&k| pivots[k]);
    order.into_iter().map(|k| sparse_to_dense(&reduced[k], len)).collect()
}

/// Solves for coordinates with respect to a fixed linearly independent list.
#[derive(Clone, Debug)]
pub struct SpanCoords {
    len: usize,
    reduced: Vec<SparseVec>,
    pivots: Vec<usize>,
    transforms: Vec<SparseVec>,
}

impl SpanCoords {
    /// Fails with [`Error::LinearlyDependent`] if the vectors are dependent.
    pub fn new(len: usize, vectors: &[SparseVec]) -> Result<Self> {
        let count = vectors.len();
        let (reduced, pivots, transforms) = reduce(vectors.to_vec());
        if reduced.len() != count {
            return Err(Error::LinearlyDependent);
        }
        Ok(SpanCoords {
            len,
            reduced,
            pivots,
            transforms,
        })
    }

    pub fn from_dense(vectors: &[Vec<Scalar>]) -> Result<Self> {
        let len = vectors.first().map_or(0, Vec::len);
        Self::new(len, &vectors.iter().map(|v| sparse_from_dense(v)).collect::<Vec<_>>())
    }

    pub fn dim(&self) -> usize {
        self.reduced.len()
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }

    /// Sparse coordinates of `y`, or `None` if `y` is outside the span.
    pub fn coordinates_sparse(&self, y: &SparseVec) -> Option<SparseVec> {
        let mut residual = y.clone();
        let mut coords: SparseVec = Vec::new();
        for (k, p) in self.pivots.iter().enumerate() {
            if let Some(u) = sparse_get(&residual, *p).cloned() {
                residual = sparse_axpy(&residual, &-u.clone(), &self.reduced[k]);
                coords = sparse_axpy(&coords, &u, &self.transforms[k]);
            }
        }
        residual.is_empty().then_some(coords)
    }

    pub fn coordinates(&self, y: &[Scalar]) -> Option<Vec<Scalar>> {
        self.coordinates_sparse(&sparse_from_dense(y))
            .map(|c| sparse_to_dense(&c, self.dim()))
    }

    pub fn contains(&self, y: &[Scalar]) -> bool {
        self.coordinates(y).is_some()
    }
}
