use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Mat, Scalar};

/// Outcome of a single exact elimination pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    pub rank: usize,
    /// Pivot column of each echelon row.
    pub pivots: Vec<usize>,
    /// Basis of `{v : Mv = 0}`, one vector per non-pivot column.
    pub kernel: Vec<Vec<Scalar>>,
    /// Present iff the matrix is square.
    pub det: Option<Scalar>,
}

/// Integer row echelon form produced by fraction-free elimination.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    /// `det(original) = sign · last_pivot / row_scale` when square and full rank.
    sign: i8,
    row_scale: BigInt,
}

/// Clears denominators row by row; kernels and ranks are unaffected.
fn integer_rows(m: &Mat) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut total = BigInt::one();
    let rows = (0..m.rows())
        .map(|r| {
            let row = m.row(r);
            let lcm = row
                .iter()
                .filter(|x| !x.is_zero())
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            total *= &lcm;
            row.iter().map(|x| (x * Scalar::from_integer(lcm.clone())).to_integer()).collect()
        })
        .collect();
    (rows, total)
}

/// Bareiss elimination with first-nonzero pivoting in column order.
///
/// Every intermediate entry is a minor of the input, so the division by the
/// previous pivot is exact even when columns are skipped.
fn bareiss(m: &Mat) -> Echelon {
    let (mut a, row_scale) = integer_rows(m);
    let (nrows, ncols) = m.shape();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut sign = 1i8;
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = pivot_row[c].clone();
        for row in bottom.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..ncols {
                let x_zero = row[j].is_zero();
                let y_zero = lead.is_zero() || pivot_row[j].is_zero();
                if x_zero && y_zero {
                    continue;
                }
                let mut v = if x_zero { BigInt::zero() } else { &pivot * &row[j] };
                if !y_zero {
                    v -= &lead * &pivot_row[j];
                }
                if !prev.is_one() {
                    v /= &prev;
                }
                row[j] = v;
            }
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    Echelon {
        rows: a,
        pivots,
        sign,
        row_scale,
    }
}

fn kernel_from_echelon(e: &Echelon, ncols: usize) -> Vec<Vec<Scalar>> {
    let mut is_pivot = vec![false; ncols];
    for &p in &e.pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|free| {
            let mut x = vec![Scalar::zero(); ncols];
            x[free] = Scalar::one();
            for (r, &p) in e.pivots.iter().enumerate().rev() {
                let row = &e.rows[r];
                let mut acc = Scalar::zero();
                for j in p + 1..ncols {
                    if !row[j].is_zero() && !x[j].is_zero() {
                        acc += &x[j] * Scalar::from_integer(row[j].clone());
                    }
                }
                if !acc.is_zero() {
                    x[p] = -acc / Scalar::from_integer(row[p].clone());
                }
            }
            x
        })
        .collect()
}

fn det_from_echelon(e: &Echelon, n: usize) -> Scalar {
    if e.pivots.len() < n {
        return Scalar::zero();
    }
    if n == 0 {
        return Scalar::one();
    }
    let last = e.rows[n - 1][n - 1].clone();
    let last = if e.sign < 0 { -last } else { last };
    Scalar::new(last, e.row_scale.clone())
}

/// Rank, kernel basis and (for square input) determinant in one pass.
pub fn eliminate(m: &Mat) -> Elimination {
    let e = bareiss(m);
    Elimination {
        rank: e.pivots.len(),
        kernel: kernel_from_echelon(&e, m.cols()),
        det: m.is_square().then(|| det_from_echelon(&e, m.rows())),
        pivots: e.pivots,
    }
}

pub fn rank(m: &Mat) -> usize {
    bareiss(m).pivots.len()
}

pub fn kernel(m: &Mat) -> Vec<Vec<Scalar>> {
    kernel_from_echelon(&bareiss(m), m.cols())
}

/// `None` for non-square input.
pub fn det(m: &Mat) -> Option<Scalar> {
    m.is_square().then(|| det_from_echelon(&bareiss(m), m.rows()))
}
