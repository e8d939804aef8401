//! Recovery maps and equality conditions for `I(A:C|B) = 0`.
//!
//! `M = ρ_AB^{1/2} ρ_B^{−1/2} ρ_BC^{1/2}` (embedded, inverse on support).
//! `𝓜(ρ) = MM†` reconstructs from the `AB` side and `𝓜′(ρ) = M†M` from the
//! `BC` side; both return `ρ` exactly on Markov states.

use std::fmt;

use serde::Serialize;

use crate::bounds::KrausChannel;
use crate::error::{Error, Result};
use crate::matfun::{commutator, trace_norm, ComplexMatrix, SpectralFn};
use crate::states::{DensityMatrix, Marginals, Subsystems, TripartiteState};

/// Default tolerance of [`classify`].
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-8;

/// Default sample of `t` values for [`check_petz_modular`].
pub const DEFAULT_MODULAR_TS: [f64; 3] = [0.5, 1.0, 2.0];

/// Embedded `√ρ_AB`, `ρ_B^{−1/2}` and `√ρ_BC`.
struct Factors {
    sqrt_ab: ComplexMatrix,
    inv_sqrt_b: ComplexMatrix,
    sqrt_bc: ComplexMatrix,
}

impl Factors {
    fn new(s: &TripartiteState, m: &Marginals) -> Result<Self> {
        Ok(Self {
            sqrt_ab: s.embed(&m.ab.sqrt(), Subsystems::AB)?,
            inv_sqrt_b: s.embed(&m.b.func(SpectralFn::Power(-0.5)), Subsystems::B)?,
            sqrt_bc: s.embed(&m.bc.sqrt(), Subsystems::BC)?,
        })
    }

    fn m(&self) -> ComplexMatrix {
        &(&self.sqrt_ab * &self.inv_sqrt_b) * &self.sqrt_bc
    }
}

fn m_with(s: &TripartiteState, m: &Marginals) -> Result<ComplexMatrix> {
    Ok(Factors::new(s, m)?.m())
}

/// The operator `M = ρ_AB^{1/2} ρ_B^{−1/2} ρ_BC^{1/2}`.
pub fn m_operator(s: &TripartiteState) -> Result<ComplexMatrix> {
    m_with(s, &s.marginals())
}

/// `𝓜(ρ) = ρ_AB^{1/2} ρ_B^{−1/2} ρ_BC ρ_B^{−1/2} ρ_AB^{1/2}`, which equals `MM†`.
#[allow(non_snake_case)]
pub fn recovery_M(s: &TripartiteState) -> Result<ComplexMatrix> {
    let m = m_with(s, &s.marginals())?;
    Ok((&m * &m.adjoint()).hermitian_part())
}

/// `𝓜′(ρ) = ρ_BC^{1/2} ρ_B^{−1/2} ρ_AB ρ_B^{−1/2} ρ_BC^{1/2}`, which equals `M†M`.
#[allow(non_snake_case)]
pub fn recovery_Mprime(s: &TripartiteState) -> Result<ComplexMatrix> {
    let m = m_with(s, &s.marginals())?;
    Ok((&m.adjoint() * &m).hermitian_part())
}

/// Petz map `Φ*_σ = Ad_{σ^{1/2}} ∘ Φ* ∘ Ad_{Φ(σ)^{−1/2}}`, with Kraus operators
/// `σ^{1/2} K† Φ(σ)^{−1/2}`.
///
/// The inverse square root is taken on the support of `Φ(σ)`, so the result is
/// trace preserving on states supported there.
pub fn petz_dual(phi: &KrausChannel, sigma: &DensityMatrix) -> Result<KrausChannel> {
    if sigma.dim() != phi.d_in() {
        return Err(Error::DimMismatch(format!(
            "sigma of dimension {} for a channel on {}",
            sigma.dim(),
            phi.d_in()
        )));
    }
    if !sigma.is_full_rank() {
        return Err(Error::SingularSigma {
            rank: sigma.support_rank(),
            dim: sigma.dim(),
        });
    }
    let sqrt_sigma = sigma.sqrt();
    let inv_sqrt_out = phi.apply_state(sigma)?.func(SpectralFn::Power(-0.5));
    let kraus = phi
        .kraus()
        .iter()
        .map(|k| &(&sqrt_sigma * &k.adjoint()) * &inv_sqrt_out)
        .collect();
    KrausChannel::from_kraus_unchecked(kraus)
}

fn ruskai_with(s: &TripartiteState, m: &Marginals) -> Result<f64> {
    let lhs = &s.rho().log() + &s.embed(&m.b.log(), Subsystems::B)?;
    let rhs = &s.embed(&m.ab.log(), Subsystems::AB)? + &s.embed(&m.bc.log(), Subsystems::BC)?;
    Ok((&lhs - &rhs).hs_norm())
}

/// `‖log ρ_ABC + log ρ_B − log ρ_AB − log ρ_BC‖₂`, with support-restricted logs.
pub fn check_ruskai(s: &TripartiteState) -> Result<f64> {
    ruskai_with(s, &s.marginals())
}

/// `max_t ‖ρ_ABC^{it} ρ_BC^{−it} − ρ_AB^{it} ρ_B^{−it}‖₂` over the sampled `ts`.
///
/// A small value on a finite sample of `t` is evidence, not proof, of equality
/// for all real `t`.
pub fn check_petz_modular(s: &TripartiteState, ts: &[f64]) -> Result<f64> {
    let m = s.marginals();
    if !(s.rho().is_full_rank() && m.ab.is_full_rank() && m.bc.is_full_rank() && m.b.is_full_rank()) {
        return Err(Error::SingularInput("modular condition needs a full-rank state".into()));
    }
    let mut worst = 0.0f64;
    for &t in ts {
        if t == 0.0 {
            // both sides are the identity on a full-rank state
            continue;
        }
        let pow = |d: &DensityMatrix, x: f64, on: Subsystems| -> Result<ComplexMatrix> {
            let p = d.func(SpectralFn::CPower(x));
            if on == Subsystems::ABC {
                Ok(p)
            } else {
                s.embed(&p, on)
            }
        };
        let lhs = &pow(s.rho(), t, Subsystems::ABC)? * &pow(&m.bc, -t, Subsystems::BC)?;
        let rhs = &pow(&m.ab, t, Subsystems::AB)? * &pow(&m.b, -t, Subsystems::B)?;
        worst = worst.max((&lhs - &rhs).hs_norm());
    }
    Ok(worst)
}

fn trace_distance_to(rho: &ComplexMatrix, x: &ComplexMatrix) -> Result<f64> {
    trace_norm(&(rho - x).hermitian_part())
}

/// `(‖ρ − MM†‖₁, ‖ρ − M†M‖₁)`.
pub fn check_zhang(s: &TripartiteState) -> Result<(f64, f64)> {
    let m = m_operator(s)?;
    let rho = s.rho().matrix();
    Ok((
        trace_distance_to(rho, &(&m * &m.adjoint()))?,
        trace_distance_to(rho, &(&m.adjoint() * &m))?,
    ))
}

/// The three classes of tripartite states distinguished by `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Label {
    /// `ρ = MM†` and `[M, M†] = 0`: exactly the Markov states.
    D1,
    /// `[M, M†] = 0` but `ρ ≠ MM†`.
    D2,
    /// `[M, M†] ≠ 0`.
    D3,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Label::D1 => "D1",
            Label::D2 => "D2",
            Label::D3 => "D3",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassificationLabel {
    pub label: Label,
    /// `‖[M, M†]‖₁`.
    pub commutator_norm: f64,
    /// `‖ρ − MM†‖₁`.
    pub reconstruction_gap: f64,
    pub tol: f64,
}

fn label_for(commutator_norm: f64, reconstruction_gap: f64, tol: f64) -> Label {
    if commutator_norm > tol {
        Label::D3
    } else if reconstruction_gap <= tol {
        Label::D1
    } else {
        Label::D2
    }
}

/// Places `s` in `D1`, `D2` or `D3` using one tolerance for both tests.
pub fn classify(s: &TripartiteState, tol: f64) -> Result<ClassificationLabel> {
    Ok(recovery_report(s, tol)?.classification)
}

/// Every recovery residual of one state, sharing a single `M`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RecoveryReport {
    /// `‖ρ − 𝓜(ρ)‖₁`.
    pub recovery_gap_m: f64,
    /// `‖ρ − 𝓜′(ρ)‖₁`.
    pub recovery_gap_mprime: f64,
    pub commutator_trace_norm: f64,
    pub ruskai_residual: f64,
    pub classification: ClassificationLabel,
}

pub(crate) fn recovery_report_with(s: &TripartiteState, marg: &Marginals, tol: f64) -> Result<RecoveryReport> {
    let m = m_with(s, marg)?;
    let md = m.adjoint();
    let rho = s.rho().matrix();
    let gap_m = trace_distance_to(rho, &(&m * &md))?;
    let gap_mp = trace_distance_to(rho, &(&md * &m))?;
    let comm = trace_norm(&commutator(&m, &md)?.hermitian_part())?;
    Ok(RecoveryReport {
        recovery_gap_m: gap_m,
        recovery_gap_mprime: gap_mp,
        commutator_trace_norm: comm,
        ruskai_residual: ruskai_with(s, marg)?,
        classification: ClassificationLabel {
            label: label_for(comm, gap_m, tol),
            commutator_norm: comm,
            reconstruction_gap: gap_m,
            tol,
        },
    })
}

pub fn recovery_report(s: &TripartiteState, tol: f64) -> Result<RecoveryReport> {
    recovery_report_with(s, &s.marginals(), tol)
}
