//! Castling transforms on modules of the form `(G' × GL_n, V' ⊗ C^n)`.
//!
//! Shapes keep the core untouched and record whether it enters dualized, so
//! two transforms give back an identical shape.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::rep::Representation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Plain,
    DualCore,
}

impl Side {
    fn flip(self) -> Side {
        match self {
            Side::Plain => Side::DualCore,
            Side::DualCore => Side::Plain,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorShape {
    pub core: Representation,
    pub gl_size: usize,
    pub side: Side,
}

impl TensorShape {
    pub fn new(core: Representation, gl_size: usize, side: Side) -> Self {
        TensorShape { core, gl_size, side }
    }

    pub fn core_dim(&self) -> usize {
        self.core.dim_v()
    }

    pub fn module_dim(&self) -> usize {
        self.core_dim() * self.gl_size
    }

    /// `(G' × GL_n, V' ⊗ C^n) → (G' × GL_(m-n), V'* ⊗ C^(m-n))`, `m = dim V'`.
    pub fn castling_transform(&self) -> Result<TensorShape> {
        let (m, n) = (self.core_dim(), self.gl_size);
        if n == 0 || m <= n {
            return Err(Error::CastlingUndefined { m, n });
        }
        Ok(TensorShape {
            core: self.core.clone(),
            gl_size: m - n,
            side: self.side.flip(),
        })
    }

    /// Minimal dimension under the transform; vacuously true when the
    /// transform is not defined.
    pub fn is_reduced(&self) -> bool {
        let (m, n) = (self.core_dim(), self.gl_size);
        m <= n || n <= m - n
    }

    pub fn is_casual(&self) -> bool {
        self.gl_size >= self.core_dim()
    }

    /// The module as a representation of `G' × gl(n)`.
    pub fn representation(&self) -> Result<Representation> {
        let core = match self.side {
            Side::Plain => self.core.clone(),
            Side::DualCore => self.core.dual(),
        };
        core.external_tensor(&Representation::standard(&LieAlgebra::gl(self.gl_size)?))
    }

    pub fn describe(&self) -> String {
        let dual = if self.side == Side::DualCore { "*" } else { "" };
        format!(
            "({} x gl({}), ({}){dual} (x) C^{})",
            self.core.algebra().describe(),
            self.gl_size,
            self.core.describe_module(),
            self.gl_size
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Draw {
    pub seed: u64,
    pub rank: usize,
    pub dim_v: usize,
    pub stabilizer_dim: usize,
    pub generic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreservationReport {
    pub before: Vec<Draw>,
    pub after: Vec<Draw>,
    /// Every generic draw on either side has the same stabilizer dimension.
    pub stabilizers_agree: bool,
}

impl PreservationReport {
    pub fn generic_counts(&self) -> (usize, usize) {
        let count = |d: &[Draw]| d.iter().filter(|x| x.generic).count();
        (count(&self.before), count(&self.after))
    }
}

fn draws(rep: &Representation, seeds: &[u64], bound: u64) -> Result<Vec<Draw>> {
    seeds
        .iter()
        .map(|&seed| {
            let report = rep.is_etale_at(&rep.random_point(bound, seed))?;
            Ok(Draw {
                seed,
                rank: report.rank_beta,
                dim_v: report.dim_v,
                stabilizer_dim: report.stabilizer_dim,
                generic: report.rank_beta == report.dim_v,
            })
        })
        .collect()
}

/// Prehomogeneity at seeded random points on both sides of a transform.
pub fn preservation_check(shape: &TensorShape, seeds: &[u64], bound: u64) -> Result<PreservationReport> {
    let before = draws(&shape.representation()?, seeds, bound)?;
    let after = draws(&shape.castling_transform()?.representation()?, seeds, bound)?;
    let mut dims = before.iter().chain(&after).filter(|d| d.generic).map(|d| d.stabilizer_dim);
    let stabilizers_agree = match dims.next() {
        Some(first) => dims.all(|d| d == first),
        None => true,
    };
    Ok(PreservationReport {
        before,
        after,
        stabilizers_agree,
    })
}
