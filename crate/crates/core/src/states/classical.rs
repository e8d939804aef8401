use crate::error::{Error, Result};
use crate::matfun::ComplexMatrix;

use super::{DensityMatrix, Dims, TripartiteState};

/// A joint distribution `p(i, j, k)` over `A × B × C`, stored with `k` fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalJoint {
    dims: Dims,
    p: Vec<f64>,
}

impl ClassicalJoint {
    pub fn new(dims: Dims, p: Vec<f64>) -> Result<Self> {
        if p.len() != dims.total() {
            return Err(Error::LengthMismatch(p.len(), dims.total()));
        }
        if let Some(x) = p.iter().find(|x| !(**x >= 0.0)) {
            return Err(Error::NotDistribution(format!("negative or NaN entry {x}")));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::NotDistribution(format!("entries sum to {total}")));
        }
        Ok(Self { dims, p })
    }

    /// Uniform distribution on the even-parity strings `{000, 011, 101, 110}`.
    pub fn parity() -> Self {
        let dims = Dims::new(2, 2, 2).expect("qubit dims");
        let p = (0..8)
            .map(|idx: u32| if idx.count_ones() % 2 == 0 { 0.25 } else { 0.0 })
            .collect();
        Self::new(dims, p).expect("parity distribution is normalized")
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.p[(i * self.dims.b + j) * self.dims.c + k]
    }

    pub fn p_ij(&self, i: usize, j: usize) -> f64 {
        (0..self.dims.c).map(|k| self.get(i, j, k)).sum()
    }

    pub fn p_jk(&self, j: usize, k: usize) -> f64 {
        (0..self.dims.a).map(|i| self.get(i, j, k)).sum()
    }

    pub fn p_j(&self, j: usize) -> f64 {
        (0..self.dims.a).map(|i| self.p_ij(i, j)).sum()
    }
}

/// `Σ p_ijk |ijk⟩⟨ijk|`.
pub fn classical_state(p: &ClassicalJoint) -> Result<TripartiteState> {
    TripartiteState::new(
        DensityMatrix::validate(&ComplexMatrix::from_real_diag(&p.p))?,
        p.dims,
    )
}
