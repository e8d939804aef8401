//! Markov chain states `⊕_k p_k ρ_{A bL_k} ⊗ ρ_{bR_k C}` on `H_B = ⊕_k bL_k ⊗ bR_k`.

use crate::error::{Error, Result};
use crate::matfun::ComplexMatrix;

use super::{DensityMatrix, Dims, TripartiteState};

#[derive(Clone, Debug)]
pub struct MarkovBlock {
    pub p: f64,
    pub d_left: usize,
    pub d_right: usize,
    /// State on `A ⊗ bL`.
    pub rho_al: DensityMatrix,
    /// State on `bR ⊗ C`.
    pub rho_rc: DensityMatrix,
}

#[derive(Clone, Debug)]
pub struct MarkovSpec {
    pub d_a: usize,
    pub d_c: usize,
    pub blocks: Vec<MarkovBlock>,
}

impl MarkovSpec {
    /// `dB = Σ_k dL_k·dR_k`.
    pub fn d_b(&self) -> usize {
        self.blocks.iter().map(|b| b.d_left * b.d_right).sum()
    }

    pub fn check(&self) -> Result<()> {
        if self.d_a == 0 || self.d_c == 0 || self.blocks.is_empty() {
            return Err(Error::BlockDimMismatch {
                block: 0,
                detail: "dA, dC and the block list must be non-empty".into(),
            });
        }
        for (k, b) in self.blocks.iter().enumerate() {
            if b.d_left == 0 || b.d_right == 0 {
                return Err(Error::BlockDimMismatch {
                    block: k,
                    detail: "dL and dR must be positive".into(),
                });
            }
            if b.rho_al.dim() != self.d_a * b.d_left {
                return Err(Error::BlockDimMismatch {
                    block: k,
                    detail: format!("rho_AL has dim {}, expected dA·dL = {}", b.rho_al.dim(), self.d_a * b.d_left),
                });
            }
            if b.rho_rc.dim() != b.d_right * self.d_c {
                return Err(Error::BlockDimMismatch {
                    block: k,
                    detail: format!("rho_RC has dim {}, expected dR·dC = {}", b.rho_rc.dim(), b.d_right * self.d_c),
                });
            }
        }
        let total: f64 = self.blocks.iter().map(|b| b.p).sum();
        if self.blocks.iter().any(|b| !(b.p >= 0.0)) || (total - 1.0).abs() > 1e-10 {
            return Err(Error::WeightsNotNormalized(total));
        }
        Ok(())
    }
}

/// Assembles the block state and permutes it into `A ⊗ B ⊗ C` order.
///
/// The direct sum is first laid out block by block as `A ⊗ bL ⊗ bR ⊗ C`, then
/// conjugated by an explicit permutation matrix.
pub fn markov_state(spec: &MarkovSpec) -> Result<TripartiteState> {
    spec.check()?;
    let (da, dc) = (spec.d_a, spec.d_c);
    let db = spec.d_b();
    let n = da * db * dc;

    let mut direct_sum = ComplexMatrix::zeros(n, n);
    let mut perm = ComplexMatrix::zeros(n, n);
    let mut start = 0;
    let mut b_offset = 0;
    for block in &spec.blocks {
        let (dl, dr) = (block.d_left, block.d_right);
        let piece = block.rho_al.matrix().kron(block.rho_rc.matrix()).scale(block.p);
        let size = da * dl * dr * dc;
        for i in 0..size {
            for j in 0..size {
                direct_sum[(start + i, start + j)] = piece[(i, j)];
            }
        }
        for a in 0..da {
            for l in 0..dl {
                for r in 0..dr {
                    for c in 0..dc {
                        let local = ((a * dl + l) * dr + r) * dc + c;
                        let b = b_offset + l * dr + r;
                        let target = (a * db + b) * dc + c;
                        perm[(target, start + local)].re = 1.0;
                    }
                }
            }
        }
        start += size;
        b_offset += dl * dr;
    }
    let rho = &(&perm * &direct_sum) * &perm.adjoint();
    TripartiteState::from_matrix(&rho, Dims::new(da, db, dc)?)
}
