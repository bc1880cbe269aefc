use serde::{Deserialize, Serialize};

use super::model::{badea_model, DilationModel};
use super::polynomial::ShiftWeights;
use crate::error::{Error, Result};
use crate::hermitian::{ComplexMatrix, HermitianMatrix};
use crate::operator::OperatorCorner;
use crate::qsolver::QSolution;
use crate::tolerance::Tolerances;

/// `H_N ⊕ (H′)^{n_blocks}`: block 0 is `H`, blocks `1..=n_blocks` are copies of `H′`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockLayout {
    pub h_dim: usize,
    pub hprime_dim: usize,
    pub n_blocks: usize,
}

impl BlockLayout {
    pub fn total_dim(&self) -> usize {
        self.h_dim + self.n_blocks * self.hprime_dim
    }

    pub fn offset(&self, block: usize) -> usize {
        if block == 0 {
            0
        } else {
            self.h_dim + (block - 1) * self.hprime_dim
        }
    }

    pub fn block_dim(&self, block: usize) -> usize {
        if block == 0 {
            self.h_dim
        } else {
            self.hprime_dim
        }
    }
}

/// Truncated dilation matrix with rows `T; U; S_1; S_2; …` below the
/// diagonal. Immutable; the `with_*` methods rebuild.
#[derive(Debug, Clone, PartialEq)]
pub struct AssembledDilation {
    w: ComplexMatrix,
    layout: BlockLayout,
    u: ComplexMatrix,
    /// `S_1..S_{n_blocks−1}`.
    weights: Vec<ComplexMatrix>,
    source: DilationModel,
}

impl AssembledDilation {
    pub fn w(&self) -> &ComplexMatrix {
        &self.w
    }

    pub fn layout(&self) -> BlockLayout {
        self.layout
    }

    pub fn t(&self) -> &OperatorCorner {
        &self.source.t
    }

    pub fn u(&self) -> &ComplexMatrix {
        &self.u
    }

    /// `S_j`, `1 ≤ j < n_blocks`.
    pub fn weight(&self, j: usize) -> &ComplexMatrix {
        &self.weights[j - 1]
    }

    pub fn weights(&self) -> &[ComplexMatrix] {
        &self.weights
    }

    pub fn source(&self) -> &DilationModel {
        &self.source
    }

    pub fn m(&self) -> usize {
        self.source.m
    }

    /// Block `(i, j)` of `W`.
    pub fn block(&self, i: usize, j: usize) -> ComplexMatrix {
        let l = self.layout;
        self.w.block(l.offset(i), l.offset(j), l.block_dim(i), l.block_dim(j))
    }

    /// Copy with `S_j` replaced.
    pub fn with_weight(&self, j: usize, s: ComplexMatrix) -> Result<Self> {
        let mut weights = self.weights.clone();
        let slot = weights
            .get_mut(j.wrapping_sub(1))
            .ok_or_else(|| Error::DimensionMismatch(format!("no weight S_{j}")))?;
        *slot = s;
        build(self.source.clone(), self.u.clone(), weights, self.layout.n_blocks)
    }

    /// Copy with `U` replaced.
    pub fn with_u(&self, u: ComplexMatrix) -> Result<Self> {
        build(self.source.clone(), u, self.weights.clone(), self.layout.n_blocks)
    }
}

fn build(source: DilationModel, u: ComplexMatrix, weights: Vec<ComplexMatrix>, n_blocks: usize) -> Result<AssembledDilation> {
    let t = source.t.matrix();
    let n = t.rows();
    let r = source.hprime_dim();
    if u.rows() != r || u.cols() != n {
        return Err(Error::DimensionMismatch(format!("U is {}×{}, expected {r}×{n}", u.rows(), u.cols())));
    }
    if weights.len() + 1 != n_blocks || weights.iter().any(|s| s.rows() != r || s.cols() != r) {
        return Err(Error::DimensionMismatch(format!(
            "need {} weights of size {r}×{r}",
            n_blocks.saturating_sub(1)
        )));
    }
    let layout = BlockLayout {
        h_dim: n,
        hprime_dim: r,
        n_blocks,
    };
    let mut w = ComplexMatrix::zeros(layout.total_dim(), layout.total_dim());
    w.set_block(0, 0, t);
    if r > 0 {
        w.set_block(layout.offset(1), 0, &u);
        for (idx, s) in weights.iter().enumerate() {
            let j = idx + 1;
            w.set_block(layout.offset(j + 1), layout.offset(j), s);
        }
    }
    Ok(AssembledDilation {
        w,
        layout,
        u,
        weights,
        source,
    })
}

/// Places `T`, `U` and `S_1..S_{n_blocks−1}` into the block matrix.
pub fn assemble_w(model: &DilationModel, weights: &ShiftWeights, n_blocks: usize) -> Result<AssembledDilation> {
    if n_blocks < model.m + 2 {
        return Err(Error::Precondition(format!(
            "n_blocks = {n_blocks} must be at least m + 2 = {}",
            model.m + 2
        )));
    }
    if weights.horizon() + 1 < n_blocks {
        return Err(Error::DimensionMismatch(format!(
            "{} weights cannot fill {n_blocks} blocks",
            weights.horizon()
        )));
    }
    let r = model.hprime_dim();
    let ws = weights.weights[..n_blocks - 1]
        .iter()
        .map(|s| {
            if s.dim() == r {
                Ok(s.as_matrix().clone())
            } else {
                Err(Error::DimensionMismatch(format!("weight is {0}×{0}, H′ has dimension {r}", s.dim())))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    build(model.clone(), model.u.clone(), ws, n_blocks)
}

/// `W′` with `U′ = (Q − β_1(T))^{1/2}` and identity weights.
pub fn build_badea_2iso(
    t: &OperatorCorner,
    q: QSolution,
    n_blocks: usize,
    tol: &Tolerances,
) -> Result<AssembledDilation> {
    let (model, weights) = badea_model(t, q, n_blocks, tol)?;
    assemble_w(&model, &weights, n_blocks)
}

/// `S_j` as a plain matrix, convenient for the `with_weight` controls.
pub fn perturbed(s: &ComplexMatrix, shift: f64) -> ComplexMatrix {
    let n = s.rows();
    s + &HermitianMatrix::identity(n).as_matrix().scale_real(shift)
}
