//! Classical matrix Lie algebras, block-diagonal products and structure
//! constants.
//!
//! Basis orderings are fixed so that kernels computed downstream are
//! reproducible:
//!
//! * `gl(n)`: matrix units `E_ij` in row-major order.
//! * `sl(n)`: row-major over positions; `E_ij` off the diagonal and
//!   `E_ii - E_(i+1)(i+1)` at diagonal position `i < n - 1`.
//! * `so(n)`: `E_ij - E_ji` for `i < j`, row-major. The invariant form is the
//!   identity matrix.
//! * `sp(n)`: acts on `C^(2n)` and preserves the form `J` pairing
//!   `e_(2j-1)` with `e_(2j)`. The basis is `-J·S` for `S` running over the
//!   symmetric units (`E_ii`, `E_ij + E_ji`, `i < j`, row-major), which is
//!   exactly the solution set of `AᵀJ + JA = 0`.

use std::fmt;
use std::ops::Range;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmat::{int, sparse_axpy, Mat, Scalar, SpanCoords, SparseMat, SparseVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    Gl,
    Sl,
    So,
    Sp,
    /// A subalgebra given by an explicit basis (e.g. a stabilizer).
    Sub,
}

impl FactorKind {
    pub fn name(self) -> &'static str {
        match self {
            FactorKind::Gl => "gl",
            FactorKind::Sl => "sl",
            FactorKind::So => "so",
            FactorKind::Sp => "sp",
            FactorKind::Sub => "sub",
        }
    }
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One factor of a (possibly trivial) block-diagonal product.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub kind: FactorKind,
    /// The classical parameter, e.g. `2` for `sp(2)` even though it acts on `C^4`.
    pub n: usize,
    /// Indices of this factor's elements in the product basis.
    pub basis: Range<usize>,
    /// Diagonal block of the ambient matrices occupied by this factor.
    pub block: Range<usize>,
}

impl Factor {
    /// Size of the space the factor acts on.
    pub fn size(&self) -> usize {
        self.block.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    ambient: usize,
    basis: Vec<Mat>,
    factors: Vec<Factor>,
}

/// The block-diagonal Gram matrix of the symplectic form on `C^(2n)`.
pub fn symplectic_form(n: usize) -> Mat {
    let mut j = Mat::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(2 * k, 2 * k + 1)] = int(1);
        j[(2 * k + 1, 2 * k)] = int(-1);
    }
    j
}

/// `AᵀJ + JA = 0` for the form of [`symplectic_form`].
pub fn preserves_symplectic_form(a: &Mat) -> bool {
    if !a.is_square() || !a.rows().is_multiple_of(2) {
        return false;
    }
    let j = symplectic_form(a.rows() / 2);
    let lhs = a.transpose().matmul(&j).and_then(|x| x.add(&j.matmul(a)?));
    lhs.map(|m| m.is_zero()).unwrap_or(false)
}

pub fn is_antisymmetric(a: &Mat) -> bool {
    a.is_square() && a.add(&a.transpose()).map(|m| m.is_zero()).unwrap_or(false)
}

fn classical_basis(kind: FactorKind, n: usize) -> Vec<Mat> {
    match kind {
        FactorKind::Gl => (0..n * n).map(|p| Mat::unit(n, n, p / n, p % n)).collect(),
        FactorKind::Sl => {
            let mut basis = Vec::with_capacity(n * n - 1);
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        basis.push(Mat::unit(n, n, i, j));
                    } else if i + 1 < n {
                        let mut h = Mat::unit(n, n, i, i);
                        h[(i + 1, i + 1)] = int(-1);
                        basis.push(h);
                    }
                }
            }
            basis
        }
        FactorKind::So => {
            let mut basis = Vec::with_capacity(n * (n - 1) / 2);
            for i in 0..n {
                for j in i + 1..n {
                    let mut a = Mat::unit(n, n, i, j);
                    a[(j, i)] = int(-1);
                    basis.push(a);
                }
            }
            basis
        }
        FactorKind::Sp => {
            let size = 2 * n;
            let neg_j = symplectic_form(n).neg();
            let mut basis = Vec::with_capacity(2 * n * n + n);
            for i in 0..size {
                for j in i..size {
                    let mut s = Mat::unit(size, size, i, j);
                    s[(j, i)] = int(1);
                    basis.push(neg_j.matmul(&s).expect("square"));
                }
            }
            basis
        }
        FactorKind::Sub => unreachable!("subalgebras have no classical basis"),
    }
}

/// Antisymmetric table of bracket coordinates: `table[i][j]` holds the
/// coordinates of `[b_i, b_j]`.
#[derive(Clone, Debug)]
pub struct StructureConstants {
    table: Vec<Vec<SparseVec>>,
}

impl StructureConstants {
    pub fn get(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i][j]
    }

    pub fn dim(&self) -> usize {
        self.table.len()
    }

    /// Jacobi identity on all basis triples `i < j < k`.
    pub fn satisfies_jacobi(&self) -> bool {
        let d = self.dim();
        let apply = |i: usize, coords: &SparseVec| -> SparseVec {
            let mut acc: SparseVec = Vec::new();
            for (m, c) in coords {
                acc = sparse_axpy(&acc, c, &self.table[i][*m]);
            }
            acc
        };
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let (jk, ki, ij) = (&self.table[j][k], &self.table[k][i], &self.table[i][j]);
                    if jk.is_empty() && ki.is_empty() && ij.is_empty() {
                        continue;
                    }
                    let one = Scalar::one();
                    let sum = sparse_axpy(&apply(i, jk), &one, &apply(j, ki));
                    let sum = sparse_axpy(&sum, &one, &apply(k, ij));
                    if !sum.is_empty() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

impl LieAlgebra {
    /// `gl`, `sl`, `so` or `sp` of parameter `n`; `sp(n)` acts on `C^(2n)`.
    pub fn classical(kind: FactorKind, n: usize) -> Result<Self> {
        if n == 0 || kind == FactorKind::Sub {
            return Err(Error::InvalidSize { kind: kind.name(), n });
        }
        let basis = classical_basis(kind, n);
        let ambient = if kind == FactorKind::Sp { 2 * n } else { n };
        Ok(LieAlgebra {
            ambient,
            factors: vec![Factor {
                kind,
                n,
                basis: 0..basis.len(),
                block: 0..ambient,
            }],
            basis,
        })
    }

    pub fn gl(n: usize) -> Result<Self> {
        Self::classical(FactorKind::Gl, n)
    }

    pub fn sl(n: usize) -> Result<Self> {
        Self::classical(FactorKind::Sl, n)
    }

    pub fn so(n: usize) -> Result<Self> {
        Self::classical(FactorKind::So, n)
    }

    pub fn sp(n: usize) -> Result<Self> {
        Self::classical(FactorKind::Sp, n)
    }

    /// An algebra given by an explicit basis. Checks shapes and linear
    /// independence, not closure: use [`LieAlgebra::verify_lie_axioms`].
    pub fn from_basis(ambient: usize, basis: Vec<Mat>) -> Result<Self> {
        for b in &basis {
            if b.shape() != (ambient, ambient) {
                return Err(Error::ShapeMismatch {
                    op: "lie algebra basis",
                    left: (ambient, ambient),
                    right: b.shape(),
                });
            }
        }
        let alg = Self::from_basis_unchecked(ambient, basis);
        alg.span()?;
        Ok(alg)
    }

    pub(crate) fn from_basis_unchecked(ambient: usize, basis: Vec<Mat>) -> Self {
        LieAlgebra {
            ambient,
            factors: vec![Factor {
                kind: FactorKind::Sub,
                n: basis.len(),
                basis: 0..basis.len(),
                block: 0..ambient,
            }],
            basis,
        }
    }

    /// Block-diagonal product; factor metadata records the offsets.
    pub fn product(algebras: &[LieAlgebra]) -> Result<Self> {
        if algebras.is_empty() {
            return Err(Error::InvalidSize { kind: "product", n: 0 });
        }
        let ambient: usize = algebras.iter().map(|a| a.ambient).sum();
        let mut basis = Vec::new();
        let mut factors = Vec::new();
        let mut offset = 0;
        for alg in algebras {
            let base = basis.len();
            for f in &alg.factors {
                factors.push(Factor {
                    kind: f.kind,
                    n: f.n,
                    basis: base + f.basis.start..base + f.basis.end,
                    block: offset + f.block.start..offset + f.block.end,
                });
            }
            basis.extend(alg.basis.iter().map(|b| b.embed_diagonal(ambient, offset)));
            offset += alg.ambient;
        }
        Ok(LieAlgebra {
            ambient,
            basis,
            factors,
        })
    }

    /// Appends `extra` zero rows and columns; the last factor's block grows
    /// to cover them, so `sp(n)` becomes `diag(A, 0)` inside `gl(2n + extra)`.
    pub fn padded(&self, extra: usize) -> LieAlgebra {
        let ambient = self.ambient + extra;
        let mut factors = self.factors.clone();
        if let Some(last) = factors.last_mut() {
            last.block.end += extra;
        }
        LieAlgebra {
            ambient,
            basis: self.basis.iter().map(|b| b.embed_diagonal(ambient, 0)).collect(),
            factors,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factor(&self, index: usize) -> Result<&Factor> {
        self.factors.get(index).ok_or(Error::FactorOutOfRange {
            index,
            count: self.factors.len(),
        })
    }

    /// The factor owning basis element `i`.
    pub fn factor_of(&self, i: usize) -> Option<usize> {
        self.factors.iter().position(|f| f.basis.contains(&i))
    }

    pub fn bracket(&self, x: &Mat, y: &Mat) -> Result<Mat> {
        for m in [x, y] {
            if m.shape() != (self.ambient, self.ambient) {
                return Err(Error::ShapeMismatch {
                    op: "bracket",
                    left: (self.ambient, self.ambient),
                    right: m.shape(),
                });
            }
        }
        x.commutator(y)
    }

    /// `Σ coords[i]·b_i`.
    pub fn element(&self, coords: &[Scalar]) -> Result<Mat> {
        if coords.len() != self.dim() {
            return Err(Error::LengthMismatch {
                expected: self.dim(),
                found: coords.len(),
            });
        }
        let mut out = Mat::zeros(self.ambient, self.ambient);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = out.add(&b.scale(c))?;
            }
        }
        Ok(out)
    }

    fn sparse_basis(&self) -> Vec<SparseMat> {
        self.basis.iter().map(SparseMat::from_dense).collect()
    }

    fn flatten(m: &SparseMat) -> SparseVec {
        let cols = m.cols();
        m.entries().map(|(r, c, v)| (r * cols + c, v.clone())).collect()
    }

    /// Coordinate solver over the flattened basis.
    pub fn span(&self) -> Result<SpanCoords> {
        let flat: Vec<SparseVec> = self.sparse_basis().iter().map(Self::flatten).collect();
        SpanCoords::new(self.ambient * self.ambient, &flat)
    }

    /// Coordinates of `x` in the basis, or `None` if `x` is not in the span.
    pub fn coordinates(&self, x: &Mat) -> Option<Vec<Scalar>> {
        if x.shape() != (self.ambient, self.ambient) {
            return None;
        }
        self.span().ok()?.coordinates(x.data())
    }

    /// `None` if some bracket leaves the span (or the basis is dependent).
    pub fn structure_constants(&self) -> Option<StructureConstants> {
        let span = self.span().ok()?;
        let sparse = self.sparse_basis();
        let d = self.dim();
        let mut table = vec![vec![SparseVec::new(); d]; d];
        for i in 0..d {
            for j in i + 1..d {
                let (fi, fj) = (self.factor_of(i), self.factor_of(j));
                if fi != fj {
                    continue;
                }
                let br = sparse[i].commutator(&sparse[j]).ok()?;
                if br.is_zero() {
                    continue;
                }
                let coords = span.coordinates_sparse(&Self::flatten(&br))?;
                table[j][i] = coords.iter().map(|(k, v)| (*k, -v)).collect();
                table[i][j] = coords;
            }
        }
        Some(StructureConstants { table })
    }

    /// Closure of the basis under the bracket plus the Jacobi identity.
    pub fn verify_lie_axioms(&self) -> bool {
        if self.basis.iter().any(|b| b.shape() != (self.ambient, self.ambient)) {
            return false;
        }
        match self.structure_constants() {
            Some(sc) => sc.satisfies_jacobi(),
            None => false,
        }
    }

    /// Human-readable factor list such as `sp(2) x gl(3)`.
    pub fn describe(&self) -> String {
        self.factors
            .iter()
            .map(|f| format!("{}({})", f.kind, f.n))
            .collect::<Vec<_>>()
            .join(" x ")
    }
}
