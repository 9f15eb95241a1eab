//! Representations of matrix Lie algebras, the β-map and everything decided
//! from it: prehomogeneity, étale-ness, stabilizer subalgebras and
//! restriction of a direct sum to the stabilizer of one of its parts.
//!
//! Coordinates on `V` follow the declaration order of the summands. Matrix
//! summands `Mat_{a,b}` are flattened row-major, which coincides with the
//! Kronecker ordering of `C^a ⊗ C^b`, so `X ↦ A X Bᵀ` is the operator `A ⊗ B`.

use std::ops::Range;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmat::{self, serde_exact, Mat, Scalar, SparseMat};
use crate::liealg::LieAlgebra;

/// A block of `V` in a direct-sum decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Summand {
    pub label: String,
    pub dim: usize,
    pub offset: usize,
    /// Tensor shape, e.g. `[4, 3]` for `Mat_{4,3}`; `[d]` for plain vectors.
    pub shape: Vec<usize>,
}

impl Summand {
    pub fn range(&self) -> Range<usize> {
        self.offset..self.offset + self.dim
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    algebra: LieAlgebra,
    dim_v: usize,
    operators: Vec<SparseMat>,
    summands: Vec<Summand>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Etale,
    PrehomogeneousNotEtale,
    NotPrehomogeneousAtPoint,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Etale => "etale",
            Verdict::PrehomogeneousNotEtale => "prehomogeneous-not-etale",
            Verdict::NotPrehomogeneousAtPoint => "not-prehomogeneous-at-point",
        }
    }
}

/// Outcome of an étale check at one point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub description: String,
    pub dim_g: usize,
    pub dim_v: usize,
    #[serde(serialize_with = "serde_exact::scalar_vec")]
    pub point: Vec<Scalar>,
    pub rank_beta: usize,
    /// `None` when β is not square.
    pub det_nonzero: Option<bool>,
    pub verdict: Verdict,
    pub stabilizer_dim: usize,
    #[serde(serialize_with = "serde_exact::scalar_vecs")]
    pub stabilizer_basis: Vec<Vec<Scalar>>,
    pub citations: Vec<String>,
    /// How the point was obtained, e.g. `canonical` or `random(seed=3,bound=10)`.
    pub point_source: String,
}

/// A stabilizer subalgebra together with its action on what is left of `V`.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub rep: Representation,
    /// Basis of the stabilizer in coordinates of the parent algebra.
    pub kernel: Vec<Vec<Scalar>>,
    /// Rank of β on the stabilized block.
    pub rank: usize,
    pub block_dim: usize,
    /// Parent coordinates that survive, in order.
    pub remaining: Vec<usize>,
}

impl Restriction {
    /// The parent action on the block was prehomogeneous at the point.
    pub fn block_prehomogeneous(&self) -> bool {
        self.rank == self.block_dim
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub label: String,
    pub block_dim: usize,
    pub rank: usize,
    pub stabilizer_dim: usize,
}

/// Summand-by-summand reduction: étale iff every step is prehomogeneous and
/// the last stabilizer is zero-dimensional.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionOutcome {
    pub steps: Vec<ReductionStep>,
    pub etale: bool,
}

fn check_len(expected: usize, v: &[Scalar]) -> Result<()> {
    if v.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            found: v.len(),
        });
    }
    Ok(())
}

impl Representation {
    pub fn new(algebra: LieAlgebra, operators: Vec<SparseMat>, summands: Vec<Summand>) -> Result<Self> {
        if operators.len() != algebra.dim() {
            return Err(Error::LengthMismatch {
                expected: algebra.dim(),
                found: operators.len(),
            });
        }
        let dim_v: usize = summands.iter().map(|s| s.dim).sum();
        let mut offset = 0;
        for s in &summands {
            if s.offset != offset {
                return Err(Error::ChainMismatch(format!("summand {} has offset {} (expected {offset})", s.label, s.offset)));
            }
            offset += s.dim;
        }
        for op in &operators {
            if op.shape() != (dim_v, dim_v) {
                return Err(Error::ShapeMismatch {
                    op: "representation operator",
                    left: (dim_v, dim_v),
                    right: op.shape(),
                });
            }
        }
        Ok(Representation {
            algebra,
            dim_v,
            operators,
            summands,
        })
    }

    /// Each basis element acts on the ambient space by itself.
    pub fn standard(algebra: &LieAlgebra) -> Self {
        let n = algebra.ambient();
        Representation {
            operators: algebra.basis().iter().map(SparseMat::from_dense).collect(),
            dim_v: n,
            summands: vec![Summand {
                label: "std".into(),
                dim: n,
                offset: 0,
                shape: vec![n],
            }],
            algebra: algebra.clone(),
        }
    }

    /// Standard action of factor `index` on its own block; every other
    /// factor acts by zero.
    pub fn factor_standard(algebra: &LieAlgebra, index: usize) -> Result<Self> {
        let factor = algebra.factor(index)?.clone();
        let block: Vec<usize> = factor.block.clone().collect();
        let size = block.len();
        let operators = algebra
            .basis()
            .iter()
            .enumerate()
            .map(|(i, b)| {
                if factor.basis.contains(&i) {
                    SparseMat::from_dense(&b.submatrix(factor.block.start, factor.block.start, size, size))
                } else {
                    SparseMat::zeros(size, size)
                }
            })
            .collect();
        Ok(Representation {
            algebra: algebra.clone(),
            dim_v: size,
            operators,
            summands: vec![Summand {
                label: format!("std({})", index + 1),
                dim: size,
                offset: 0,
                shape: vec![size],
            }],
        })
    }

    pub fn trivial(algebra: &LieAlgebra, dim: usize) -> Self {
        Representation {
            algebra: algebra.clone(),
            dim_v: dim,
            operators: vec![SparseMat::zeros(dim, dim); algebra.dim()],
            summands: vec![Summand {
                label: "trivial".into(),
                dim,
                offset: 0,
                shape: vec![dim],
            }],
        }
    }

    /// `X ↦ -Xᵀ` on every operator.
    pub fn dual(&self) -> Self {
        Representation {
            algebra: self.algebra.clone(),
            dim_v: self.dim_v,
            operators: self.operators.iter().map(|op| op.transpose().neg()).collect(),
            summands: self
                .summands
                .iter()
                .map(|s| Summand {
                    label: match s.label.strip_suffix('*') {
                        Some(base) => base.to_string(),
                        None => format!("{}*", s.label),
                    },
                    ..s.clone()
                })
                .collect(),
        }
    }

    /// `X ⊗ I + I ⊗ Y` on the Kronecker-ordered basis of `V1 ⊗ V2`.
    pub fn tensor(&self, other: &Representation) -> Result<Self> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        let (i1, i2) = (SparseMat::identity(self.dim_v), SparseMat::identity(other.dim_v));
        let operators = self
            .operators
            .iter()
            .zip(&other.operators)
            .map(|(x, y)| x.kron(&i2).add(&i1.kron(y)))
            .collect::<Result<Vec<_>>>()?;
        let dim_v = self.dim_v * other.dim_v;
        Ok(Representation {
            algebra: self.algebra.clone(),
            dim_v,
            operators,
            summands: tensor_summands(&self.summands, &other.summands, other.dim_v),
        })
    }

    /// External tensor product, a representation of `L1 × L2`.
    pub fn external_tensor(&self, other: &Representation) -> Result<Self> {
        let algebra = LieAlgebra::product(&[self.algebra.clone(), other.algebra.clone()])?;
        let (i1, i2) = (SparseMat::identity(self.dim_v), SparseMat::identity(other.dim_v));
        let operators = self
            .operators
            .iter()
            .map(|x| x.kron(&i2))
            .chain(other.operators.iter().map(|y| i1.kron(y)))
            .collect();
        Representation::new(algebra, operators, tensor_summands(&self.summands, &other.summands, other.dim_v))
    }

    /// Block-diagonal sum; summand metadata is concatenated.
    pub fn direct_sum(reps: &[Representation]) -> Result<Self> {
        let first = reps.first().ok_or(Error::InvalidSize { kind: "direct sum", n: 0 })?;
        if reps.iter().any(|r| r.algebra != first.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        let dim_v = reps.iter().map(|r| r.dim_v).sum();
        let operators = (0..first.algebra.dim())
            .map(|i| SparseMat::block_diagonal(&reps.iter().map(|r| r.operators[i].clone()).collect::<Vec<_>>()))
            .collect();
        let mut summands = Vec::new();
        let mut offset = 0;
        for r in reps {
            for s in &r.summands {
                summands.push(Summand {
                    offset: offset + s.offset,
                    ..s.clone()
                });
            }
            offset += r.dim_v;
        }
        Ok(Representation {
            algebra: first.algebra.clone(),
            dim_v,
            operators,
            summands,
        })
    }

    /// The chain module `Mat_{m,m-1} ⊕ … ⊕ Mat_{2,1}` where the factor on
    /// `C^(k+1)` multiplies `X_k` from the left and the factor on `C^k` acts
    /// by `X_k ↦ X_k Aᵀ`. Factor sizes must be `m, m-1, …, 1` in order.
    pub fn chain(algebra: &LieAlgebra) -> Result<Self> {
        let factors = algebra.factors();
        let m = factors.len();
        if m < 2 {
            return Err(Error::ChainMismatch(format!("need at least two factors, got {m}")));
        }
        for (i, f) in factors.iter().enumerate() {
            if f.size() != m - i {
                return Err(Error::ChainMismatch(format!(
                    "factor {} acts on C^{} but the chain needs C^{}",
                    i + 1,
                    f.size(),
                    m - i
                )));
            }
        }
        let parts = (0..m - 1)
            .map(|i| {
                let left = Representation::factor_standard(algebra, i)?;
                let right = Representation::factor_standard(algebra, i + 1)?;
                let mut t = left.tensor(&right)?;
                let (a, b) = (m - i, m - i - 1);
                t.summands = vec![Summand {
                    label: format!("Mat_{{{a},{b}}}"),
                    dim: a * b,
                    offset: 0,
                    shape: vec![a, b],
                }];
                Ok(t)
            })
            .collect::<Result<Vec<_>>>()?;
        Representation::direct_sum(&parts)
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_g(&self) -> usize {
        self.algebra.dim()
    }

    pub fn operators(&self) -> &[SparseMat] {
        &self.operators
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    /// Collapses the summand list into one summand with the given label.
    pub fn with_label(mut self, label: &str) -> Self {
        let shape = match self.summands.as_slice() {
            [only] => only.shape.clone(),
            _ => vec![self.dim_v],
        };
        self.summands = vec![Summand {
            label: label.to_string(),
            dim: self.dim_v,
            offset: 0,
            shape,
        }];
        self
    }

    /// Operator of an arbitrary algebra element given in coordinates.
    pub fn operator_of(&self, coords: &[Scalar]) -> Result<SparseMat> {
        check_len(self.dim_g(), coords)?;
        SparseMat::linear_combination(self.dim_v, self.dim_v, coords, &self.operators)
    }

    /// `op([b_i, b_j]) = [op(b_i), op(b_j)]` for all basis pairs.
    pub fn is_homomorphism(&self) -> bool {
        let Some(sc) = self.algebra.structure_constants() else {
            return false;
        };
        let d = self.dim_g();
        for i in 0..d {
            for j in i + 1..d {
                let Ok(lhs) = self.operators[i].commutator(&self.operators[j]) else {
                    return false;
                };
                let mut rhs = SparseMat::zeros(self.dim_v, self.dim_v);
                for (k, c) in sc.get(i, j) {
                    rhs = rhs.axpy(c, &self.operators[*k]).expect("same shape");
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Every operator preserves every summand.
    pub fn is_block_diagonal(&self) -> bool {
        let owner: Vec<usize> = self
            .summands
            .iter()
            .enumerate()
            .flat_map(|(k, s)| std::iter::repeat_n(k, s.dim))
            .collect();
        self.operators
            .iter()
            .all(|op| op.entries().all(|(r, c, _)| owner[r] == owner[c]))
    }

    /// `dim_v × dim_g` matrix whose `i`-th column is `op(b_i)·x`.
    pub fn beta_matrix(&self, x: &[Scalar]) -> Result<Mat> {
        check_len(self.dim_v, x)?;
        let columns = self
            .operators
            .iter()
            .map(|op| op.mul_vec(x))
            .collect::<Result<Vec<_>>>()?;
        Mat::from_columns(self.dim_v, &columns)
    }

    pub fn is_prehomogeneous_at(&self, x: &[Scalar]) -> Result<bool> {
        Ok(exactmat::rank(&self.beta_matrix(x)?) == self.dim_v)
    }

    pub fn is_etale_at(&self, x: &[Scalar]) -> Result<VerificationReport> {
        let beta = self.beta_matrix(x)?;
        let elim = exactmat::eliminate(&beta);
        let det_nonzero = elim.det.as_ref().map(|d| !d.is_zero());
        let verdict = if elim.rank < self.dim_v {
            Verdict::NotPrehomogeneousAtPoint
        } else if self.dim_g() == self.dim_v && det_nonzero == Some(true) {
            Verdict::Etale
        } else {
            Verdict::PrehomogeneousNotEtale
        };
        Ok(VerificationReport {
            description: format!("{} on {}", self.algebra.describe(), self.describe_module()),
            dim_g: self.dim_g(),
            dim_v: self.dim_v,
            point: x.to_vec(),
            rank_beta: elim.rank,
            det_nonzero,
            verdict,
            stabilizer_dim: elim.kernel.len(),
            stabilizer_basis: elim.kernel,
            citations: Vec::new(),
            point_source: "given".into(),
        })
    }

    /// Kernel of β in algebra coordinates.
    pub fn stabilizer_algebra(&self, x: &[Scalar]) -> Result<Vec<Vec<Scalar>>> {
        Ok(exactmat::kernel(&self.beta_matrix(x)?))
    }

    /// `{X : op(X)·x ∈ span(x)}`, from the kernel of `[β | x]`.
    pub fn line_stabilizer_algebra(&self, x: &[Scalar]) -> Result<Vec<Vec<Scalar>>> {
        check_len(self.dim_v, x)?;
        if exactmat::is_zero_vec(x) {
            return Err(Error::ZeroPoint);
        }
        let mut columns = self
            .operators
            .iter()
            .map(|op| op.mul_vec(x))
            .collect::<Result<Vec<_>>>()?;
        columns.push(x.to_vec());
        let augmented = Mat::from_columns(self.dim_v, &columns)?;
        let d = self.dim_g();
        // x ≠ 0, so projecting away the last coordinate is injective on the kernel.
        Ok(exactmat::kernel(&augmented)
            .into_iter()
            .map(|mut v| {
                v.truncate(d);
                v
            })
            .collect())
    }

    /// Restricts to the stabilizer of `x1` in summand `index`, acting on the
    /// other summands.
    pub fn restrict_to_stabilizer(&self, index: usize, x1: &[Scalar]) -> Result<Restriction> {
        let s = self.summands.get(index).ok_or(Error::SummandOutOfRange {
            index,
            count: self.summands.len(),
        })?;
        self.restrict_to_block(&[s.range()], x1)
    }

    /// Like [`Representation::restrict_to_stabilizer`] for an arbitrary set of
    /// coordinates. The stabilizer must leave the remaining coordinates
    /// invariant.
    pub fn restrict_to_block(&self, block: &[Range<usize>], x_block: &[Scalar]) -> Result<Restriction> {
        let mut in_block = vec![false; self.dim_v];
        for r in block {
            if r.end > self.dim_v {
                return Err(Error::LengthMismatch {
                    expected: self.dim_v,
                    found: r.end,
                });
            }
            for i in r.clone() {
                in_block[i] = true;
            }
        }
        let coords: Vec<usize> = (0..self.dim_v).filter(|&i| in_block[i]).collect();
        let remaining: Vec<usize> = (0..self.dim_v).filter(|&i| !in_block[i]).collect();
        check_len(coords.len(), x_block)?;

        let columns = self
            .operators
            .iter()
            .map(|op| op.select(&coords, &coords).mul_vec(x_block))
            .collect::<Result<Vec<_>>>()?;
        let beta = Mat::from_columns(coords.len(), &columns)?;
        let elim = exactmat::eliminate(&beta);

        let mut basis = Vec::with_capacity(elim.kernel.len());
        let mut operators = Vec::with_capacity(elim.kernel.len());
        for v in &elim.kernel {
            let op = self.operator_of(v)?;
            if !op.select(&coords, &remaining).is_zero() {
                return Err(Error::NotInvariant);
            }
            operators.push(op.select(&remaining, &remaining));
            basis.push(self.algebra.element(v)?);
        }

        let mut summands = Vec::new();
        let mut offset = 0;
        for s in &self.summands {
            let kept = s.range().filter(|&i| !in_block[i]).count();
            if kept == 0 {
                continue;
            }
            let whole = kept == s.dim;
            summands.push(Summand {
                label: if whole { s.label.clone() } else { format!("{}'", s.label) },
                dim: kept,
                offset,
                shape: if whole { s.shape.clone() } else { vec![kept] },
            });
            offset += kept;
        }

        let algebra = LieAlgebra::from_basis_unchecked(self.algebra.ambient(), basis);
        Ok(Restriction {
            rep: Representation {
                algebra,
                dim_v: remaining.len(),
                operators,
                summands,
            },
            kernel: elim.kernel,
            rank: elim.rank,
            block_dim: coords.len(),
            remaining,
        })
    }

    /// Decides étale-ness by restricting to stabilizers one summand at a time.
    pub fn etale_by_reduction(&self, x: &[Scalar]) -> Result<ReductionOutcome> {
        check_len(self.dim_v, x)?;
        let mut current = self.clone();
        let mut point = x.to_vec();
        let mut steps = Vec::new();
        let mut prehomogeneous = true;
        while let Some(first) = current.summands.first().cloned() {
            let restriction = current.restrict_to_stabilizer(0, &point[first.range()])?;
            steps.push(ReductionStep {
                label: first.label.clone(),
                block_dim: first.dim,
                rank: restriction.rank,
                stabilizer_dim: restriction.kernel.len(),
            });
            if !restriction.block_prehomogeneous() {
                prehomogeneous = false;
                break;
            }
            point = restriction.remaining.iter().map(|&i| point[i].clone()).collect();
            current = restriction.rep;
        }
        Ok(ReductionOutcome {
            steps,
            etale: prehomogeneous && current.dim_g() == 0,
        })
    }

    /// Integer entries uniform in `[-bound, bound]`, deterministic in `seed`.
    pub fn random_point(&self, bound: u64, seed: u64) -> Vec<Scalar> {
        random_vector(self.dim_v, bound, seed)
    }

    /// `exp(op(N))·x` by the finite exponential series.
    pub fn unipotent_translate(&self, x: &[Scalar], n_coords: &[Scalar]) -> Result<Vec<Scalar>> {
        check_len(self.dim_v, x)?;
        let op = self.operator_of(n_coords)?;
        let mut power = op.clone();
        let mut steps = 1;
        while !power.is_zero() {
            if steps >= self.dim_v.max(1) {
                return Err(Error::NotNilpotent);
            }
            power = power.matmul(&op)?;
            steps += 1;
        }
        let mut out = x.to_vec();
        let mut term = x.to_vec();
        for k in 1..=steps {
            term = op.mul_vec(&term)?;
            let denom = Scalar::from_integer(k.into());
            term.iter_mut().for_each(|t| *t /= &denom);
            if exactmat::is_zero_vec(&term) {
                break;
            }
            for (o, t) in out.iter_mut().zip(&term) {
                *o += t;
            }
        }
        Ok(out)
    }

    pub fn describe_module(&self) -> String {
        self.summands
            .iter()
            .map(|s| s.label.as_str())
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn tensor_summands(left: &[Summand], right: &[Summand], right_dim: usize) -> Vec<Summand> {
    if let [r] = right {
        // (A ⊕ B) ⊗ C keeps each A ⊗ C contiguous in Kronecker order.
        left.iter()
            .map(|l| Summand {
                label: format!("{}*{}", l.label, r.label),
                dim: l.dim * r.dim,
                offset: l.offset * right_dim,
                shape: l.shape.iter().chain(&r.shape).copied().collect(),
            })
            .collect()
    } else {
        let ldim: usize = left.iter().map(|s| s.dim).sum();
        let name = |ss: &[Summand]| ss.iter().map(|s| s.label.as_str()).collect::<Vec<_>>().join("+");
        vec![Summand {
            label: format!("({})*({})", name(left), name(right)),
            dim: ldim * right_dim,
            offset: 0,
            shape: vec![ldim, right_dim],
        }]
    }
}

pub fn random_vector(len: usize, bound: u64, seed: u64) -> Vec<Scalar> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = bound as i64;
    (0..len).map(|_| exactmat::int(rng.gen_range(-b..=b))).collect()
}

/// Unit vector `e_i` of length `len` (0-based).
pub fn unit_vector(len: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); len];
    v[i] = Scalar::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::{int, int_vec};
    use num_traits::Signed;
    use crate::liealg::LieAlgebra;

    fn so2_gl1_on_c2() -> Representation {
        let alg = LieAlgebra::product(&[LieAlgebra::so(2).unwrap(), LieAlgebra::gl(1).unwrap()]).unwrap();
        Representation::chain(&alg).unwrap()
    }

    #[test]
    fn standard_gl2() {
        let r = Representation::standard(&LieAlgebra::gl(2).unwrap());
        assert_eq!((r.dim_v(), r.operators().len()), (2, 4));
        assert!(r.is_homomorphism());
    }

    #[test]
    fn dual_is_involutive() {
        let r = Representation::standard(&LieAlgebra::sl(3).unwrap());
        assert_eq!(r.dual().dual(), r);
        let g = Representation::standard(&LieAlgebra::gl(1).unwrap());
        assert_eq!(g.dual().operators()[0].to_dense(), Mat::from_rows(&[[-1]]));
        let t = Representation::trivial(&LieAlgebra::gl(1).unwrap(), 1);
        assert_eq!(t.dual().operators(), t.operators());
    }

    #[test]
    fn tensor_dims_and_algebra_mismatch() {
        let alg = LieAlgebra::product(&[LieAlgebra::gl(2).unwrap(), LieAlgebra::gl(3).unwrap()]).unwrap();
        let a = Representation::factor_standard(&alg, 0).unwrap();
        let b = Representation::factor_standard(&alg, 1).unwrap();
        let t = a.tensor(&b).unwrap();
        assert_eq!(t.dim_v(), 6);
        assert!(t.is_homomorphism());
        let other = Representation::standard(&LieAlgebra::gl(2).unwrap());
        assert_eq!(a.tensor(&other).unwrap_err(), Error::AlgebraMismatch);
        let gl1 = LieAlgebra::gl(1).unwrap();
        let triv = Representation::trivial(&gl1, 1).tensor(&Representation::trivial(&gl1, 1)).unwrap();
        assert!(triv.operators().iter().all(SparseMat::is_zero));
    }

    #[test]
    fn direct_sum_blocks() {
        let sp2 = LieAlgebra::sp(2).unwrap();
        let r = Representation::standard(&sp2);
        let s = Representation::direct_sum(&[r.clone(), r.clone()]).unwrap();
        assert_eq!(s.dim_v(), 8);
        assert!(s.is_block_diagonal());
        assert_eq!(Representation::direct_sum(std::slice::from_ref(&r)).unwrap(), r);
    }

    #[test]
    fn chain_dimensions() {
        let alg = LieAlgebra::product(&[
            LieAlgebra::gl(4).unwrap(),
            LieAlgebra::gl(3).unwrap(),
            LieAlgebra::gl(2).unwrap(),
            LieAlgebra::gl(1).unwrap(),
        ])
        .unwrap();
        assert_eq!(Representation::chain(&alg).unwrap().dim_v(), 20);
        let r = so2_gl1_on_c2();
        assert_eq!(r.dim_v(), 2);
        let bad = LieAlgebra::product(&[LieAlgebra::gl(3).unwrap(), LieAlgebra::gl(1).unwrap()]).unwrap();
        assert!(matches!(Representation::chain(&bad), Err(Error::ChainMismatch(_))));
    }

    #[test]
    fn beta_of_so2_gl1_at_e1() {
        let r = so2_gl1_on_c2();
        let beta = r.beta_matrix(&int_vec(&[1, 0])).unwrap();
        // so(2) basis E_12 - E_21 sends e_1 to (0, -1); gl(1) scales the column.
        assert_eq!(beta, Mat::from_rows(&[[0, 1], [-1, 0]]));
        assert_eq!(exactmat::det(&beta), Some(int(1)));
        assert!(r.beta_matrix(&int_vec(&[0, 0])).unwrap().is_zero());
        assert!(r.beta_matrix(&int_vec(&[1])).is_err());
    }

    #[test]
    fn prehomogeneity_basic_cases() {
        let gl3 = Representation::standard(&LieAlgebra::gl(3).unwrap());
        assert!(gl3.is_prehomogeneous_at(&int_vec(&[0, 2, -1])).unwrap());
        assert!(!gl3.is_prehomogeneous_at(&int_vec(&[0, 0, 0])).unwrap());
        let sl2 = Representation::standard(&LieAlgebra::sl(2).unwrap());
        let two = Representation::direct_sum(&[sl2.clone(), sl2]).unwrap();
        assert!(!two.is_prehomogeneous_at(&int_vec(&[1, 0, 0, 1])).unwrap());
    }

    #[test]
    fn etale_report_for_dimension_mismatch() {
        let g = Representation::standard(&LieAlgebra::gl(1).unwrap());
        let r = Representation::direct_sum(&[g.clone(), g]).unwrap();
        let rep = r.is_etale_at(&int_vec(&[1, 1])).unwrap();
        assert_eq!(rep.verdict, Verdict::NotPrehomogeneousAtPoint);
        assert_eq!(rep.det_nonzero, None);
        assert_eq!(rep.stabilizer_dim, rep.dim_g - rep.rank_beta);
    }

    #[test]
    fn line_stabilizers() {
        let gl1 = Representation::standard(&LieAlgebra::gl(1).unwrap());
        assert_eq!(gl1.line_stabilizer_algebra(&int_vec(&[1])).unwrap().len(), 1);
        let so2 = Representation::standard(&LieAlgebra::so(2).unwrap());
        assert!(so2.line_stabilizer_algebra(&int_vec(&[1, 0])).unwrap().is_empty());
        let gl2 = Representation::standard(&LieAlgebra::gl(2).unwrap());
        let ls = gl2.line_stabilizer_algebra(&int_vec(&[1, 0])).unwrap();
        assert_eq!(ls.len(), 3);
        // E_21 is the only unit moving e_1 off its line
        assert!(ls.iter().all(|v| v[2].is_zero()));
        assert_eq!(gl2.line_stabilizer_algebra(&int_vec(&[0, 0])).unwrap_err(), Error::ZeroPoint);
    }

    #[test]
    fn restriction_errors() {
        let r = so2_gl1_on_c2();
        assert!(matches!(
            r.restrict_to_stabilizer(3, &int_vec(&[1, 0])),
            Err(Error::SummandOutOfRange { index: 3, count: 1 })
        ));
    }

    #[test]
    fn random_points_are_deterministic() {
        let r = Representation::standard(&LieAlgebra::gl(5).unwrap());
        assert_eq!(r.random_point(10, 7), r.random_point(10, 7));
        assert!(r.random_point(1, 3).iter().all(|x| x.abs() <= int(1)));
    }

    #[test]
    fn unipotent_translate_cases() {
        let r = Representation::standard(&LieAlgebra::gl(3).unwrap());
        let x = int_vec(&[1, 2, 3]);
        let zero = vec![Scalar::zero(); 9];
        assert_eq!(r.unipotent_translate(&x, &zero).unwrap(), x);
        // E_12 + E_23: exp = I + N + N²/2
        let mut n = zero.clone();
        n[1] = int(1);
        n[5] = int(1);
        let y = r.unipotent_translate(&x, &n).unwrap();
        assert_eq!(y, vec![int(1 + 2) + crate::exactmat::ratio(3, 2), int(5), int(3)]);
        let mut diag = zero;
        diag[0] = int(1);
        assert_eq!(r.unipotent_translate(&x, &diag).unwrap_err(), Error::NotNilpotent);
    }
}
