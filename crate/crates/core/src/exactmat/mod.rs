//! Exact rational scalars and matrices.
//!
//! Everything downstream (ranks of β-maps, stabilizer kernels, determinant
//! certificates) is decided here, so nothing in this module ever touches a
//! float. Dense [`Mat`] is used for β-matrices and Lie algebra basis
//! elements; [`SparseMat`] holds representation operators, which are
//! overwhelmingly zero.

mod dense;
mod elim;
mod span;
mod sparse;

pub use dense::Mat;
pub use elim::{det, eliminate, kernel, rank, Elimination};
pub use span::{echelon_basis, SpanCoords};
pub use sparse::{sparse_axpy, sparse_from_dense, sparse_to_dense, SparseMat, SparseVec};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational number, always kept in lowest terms with positive denominator.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn int_vec(values: &[i64]) -> Vec<Scalar> {
    values.iter().map(|&v| int(v)).collect()
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_scalar(text: &str) -> Option<Scalar> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(Scalar::new(n, d))
        }
        None => text.parse::<BigInt>().ok().map(Scalar::from_integer),
    }
}

/// Serde helpers that write scalars as exact `p/q` (or `p`) strings.
pub mod serde_exact {
    use super::Scalar;
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn scalar_vec<S: Serializer>(v: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn scalar_vecs<S: Serializer>(v: &[Vec<Scalar>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for row in v {
            let strings: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            seq.serialize_element(&strings)?;
        }
        seq.end()
    }
}

pub(crate) fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    use num_traits::Zero;
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    use num_traits::Zero;
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_scalars() {
        assert_eq!(parse_scalar("3"), Some(int(3)));
        assert_eq!(parse_scalar("-6/4"), Some(ratio(-3, 2)));
        assert_eq!(parse_scalar("1/0"), None);
        assert_eq!(parse_scalar("x"), None);
        assert_eq!(ratio(2, -4).to_string(), "-1/2");
        assert_eq!(int(0).to_string(), "0");
    }
}
