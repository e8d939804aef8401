//! Entropic functionals in nats.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matfun::{eig_hermitian, trace_norm, HermitianEigen, Spectrum};
use crate::states::{DensityMatrix, Marginals, TripartiteState};

/// A real number or `+∞`.
///
/// Relative entropies are infinite off-support; the tag keeps `inf` out of
/// downstream arithmetic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

impl ExtReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            ExtReal::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::Infinite)
    }

    /// `self − x`, staying infinite when `self` is.
    pub fn minus(self, x: f64) -> Self {
        match self {
            ExtReal::Finite(v) => ExtReal::Finite(v - x),
            ExtReal::Infinite => ExtReal::Infinite,
        }
    }

    /// `true` when `self ≥ x`.
    pub fn at_least(self, x: f64) -> bool {
        self.finite().is_none_or(|v| v >= x)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(x) => write!(f, "{x}"),
            ExtReal::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(x) => s.serialize_f64(*x),
            ExtReal::Infinite => s.serialize_str("inf"),
        }
    }
}

const SUPPORT_TOL: f64 = 1e-9;

fn entropy_of(eigen: &HermitianEigen) -> f64 {
    let tau = eigen.cutoff();
    -eigen
        .eigenvalues
        .iter()
        .filter(|&&l| l > tau)
        .map(|&l| l * l.ln())
        .sum::<f64>()
}

/// `S(ρ) = −Tr ρ ln ρ`.
pub fn vn_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of(rho.eigen())
}

/// `S(ρ‖σ)`, infinite unless `supp ρ ⊆ supp σ`.
pub fn rel_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<ExtReal> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch(format!("{} vs {}", rho.dim(), sigma.dim())));
    }
    let d = rho.dim();
    let off = &crate::matfun::ComplexMatrix::identity(d) - &sigma.support_projector();
    let leak = (&(&off * rho.matrix()) * &off).hs_norm();
    if leak > SUPPORT_TOL {
        return Ok(ExtReal::Infinite);
    }
    let cross = rho.matrix().trace_product(&sigma.log()).re;
    Ok(ExtReal::Finite(-vn_entropy(rho) - cross))
}

/// The four entropies entering `I(A:C|B)` and the CMI itself.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyReport {
    pub s_abc: f64,
    pub s_ab: f64,
    pub s_bc: f64,
    pub s_b: f64,
    pub cmi: f64,
}

/// `I(A:C|B) = S(AB) + S(BC) − S(ABC) − S(B)`.
pub fn cmi(s: &TripartiteState) -> EntropyReport {
    cmi_with(s, &s.marginals())
}

pub(crate) fn cmi_with(s: &TripartiteState, m: &Marginals) -> EntropyReport {
    let s_abc = vn_entropy(s.rho());
    let s_ab = vn_entropy(&m.ab);
    let s_bc = vn_entropy(&m.bc);
    let s_b = vn_entropy(&m.b);
    EntropyReport {
        s_abc,
        s_ab,
        s_bc,
        s_b,
        cmi: s_ab + s_bc - s_abc - s_b,
    }
}

fn check_distribution(p: &[f64]) -> Result<()> {
    if let Some(x) = p.iter().find(|x| !(**x >= -1e-15)) {
        return Err(Error::NotDistribution(format!("entry {x}")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::NotDistribution(format!("sum {total}")));
    }
    Ok(())
}

/// `H(p‖q) = Σ pᵢ ln(pᵢ/qᵢ)`, infinite if some `pᵢ > 0 = qᵢ`.
pub fn classical_rel_entropy(p: &[f64], q: &[f64]) -> Result<ExtReal> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    check_distribution(p)?;
    check_distribution(q)?;
    let mut acc = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi <= 0.0 {
            continue;
        }
        if qi <= 0.0 {
            return Ok(ExtReal::Infinite);
        }
        acc += pi * (pi / qi).ln();
    }
    Ok(ExtReal::Finite(acc))
}

/// Uhlmann fidelity `Tr √(√ρ σ √ρ)` (not squared).
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch(format!("{} vs {}", rho.dim(), sigma.dim())));
    }
    let sr = rho.sqrt();
    let inner = (&(&sr * sigma.matrix()) * &sr).hermitian_part();
    Ok(eig_hermitian(&inner)?
        .eigenvalues
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .sum())
}

/// `S(ρ‖σ) − ½‖ρ − σ‖₁²`.
pub fn pinsker_slack(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<ExtReal> {
    let d = rel_entropy(rho, sigma)?;
    let t = trace_norm(&(rho.matrix() - sigma.matrix()))?;
    Ok(d.minus(0.5 * t * t))
}

pub fn sorted_spectra(rho: &DensityMatrix) -> Spectrum {
    rho.eigen().spectrum()
}
