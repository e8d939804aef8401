//! Lower bounds on `I(A:C|B)` and their channel and fidelity analogues.
//!
//! The central object is
//! `σ* = exp(log ρ_AB + log ρ_BC − log ρ_B)` (marginal logs embedded with
//! identities), whose trace never exceeds one. For singular marginals the
//! exponent is compressed to the intersection `Π` of the embedded supports
//! and `σ* = Π exp(ΠHΠ) Π`; reports flag when that happens.

mod channel;

pub use channel::KrausChannel;

use serde::Serialize;

use crate::entropy::{cmi_with, fidelity, rel_entropy, vn_entropy, ExtReal};
use crate::error::{Error, Result};
use crate::matfun::{eig_hermitian, trace_norm, ComplexMatrix};
use crate::states::{DensityMatrix, Marginals, Subsystems, TripartiteState};

/// Mixing weight used when regularization is requested without a value.
pub const DEFAULT_REGULARIZATION: f64 = 1e-9;

const INTERSECTION_TOL: f64 = 1e-9;
const ZERO_OVERLAP: f64 = 1e-300;

/// `σ*` together with `√σ*` and whether a support projection was needed.
#[derive(Clone, Debug)]
pub struct SigmaStar {
    pub matrix: ComplexMatrix,
    pub sqrt: ComplexMatrix,
    pub support_projected: bool,
}

/// Every quantity in the σ* lower-bound chain, in nats.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub cmi: f64,
    pub sigma_star_trace: f64,
    pub log_overlap_bound: ExtReal,
    pub thm1_bound: f64,
    pub corollary_bound: f64,
    pub slack_thm1: f64,
    pub slack_corollary: f64,
    /// `true` when `σ*` was built on a proper subspace of the embedded supports.
    pub support_projected: bool,
}

/// `log ρ_AB + log ρ_BC − log ρ_B`, each embedded into `ABC`.
pub(crate) fn marginal_log_sum(s: &TripartiteState, m: &Marginals) -> Result<ComplexMatrix> {
    let ab = s.embed(&m.ab.log(), Subsystems::AB)?;
    let bc = s.embed(&m.bc.log(), Subsystems::BC)?;
    let b = s.embed(&m.b.log(), Subsystems::B)?;
    Ok((&(&ab + &bc) - &b).hermitian_part())
}

/// Projector onto `supp(ρ_AB ⊗ 𝟙) ∩ supp(𝟙 ⊗ ρ_BC)`, or `None` when both
/// marginals are full rank.
fn support_intersection(s: &TripartiteState, m: &Marginals) -> Result<Option<ComplexMatrix>> {
    if m.ab.is_full_rank() && m.bc.is_full_rank() {
        return Ok(None);
    }
    let p_ab = s.embed(&m.ab.support_projector(), Subsystems::AB)?;
    let p_bc = s.embed(&m.bc.support_projector(), Subsystems::BC)?;
    // a unit vector lies in both ranges iff it is a 2-eigenvector of the sum
    let sum = eig_hermitian(&(&p_ab + &p_bc))?;
    Ok(Some(sum.map_real(|l| if l > 2.0 - INTERSECTION_TOL { 1.0 } else { 0.0 })))
}

pub(crate) fn sigma_star_with(s: &TripartiteState, m: &Marginals) -> Result<SigmaStar> {
    let h = marginal_log_sum(s, m)?;
    match support_intersection(s, m)? {
        None => {
            let e = eig_hermitian(&h)?;
            Ok(SigmaStar {
                matrix: e.map_real(f64::exp),
                sqrt: e.map_real(|l| (0.5 * l).exp()),
                support_projected: false,
            })
        }
        Some(pi) => {
            let e = eig_hermitian(&(&(&pi * &h) * &pi).hermitian_part())?;
            let squeeze = |x: ComplexMatrix| (&(&pi * &x) * &pi).hermitian_part();
            Ok(SigmaStar {
                matrix: squeeze(e.map_real(f64::exp)),
                sqrt: squeeze(e.map_real(|l| (0.5 * l).exp())),
                support_projected: true,
            })
        }
    }
}

/// `σ*` for `s`.
pub fn sigma_star(s: &TripartiteState) -> Result<ComplexMatrix> {
    Ok(sigma_star_detailed(s)?.matrix)
}

pub fn sigma_star_detailed(s: &TripartiteState) -> Result<SigmaStar> {
    sigma_star_with(s, &s.marginals())
}

/// `Tr σ*`, which is at most one.
pub fn trace_exp_check(s: &TripartiteState) -> Result<f64> {
    Ok(sigma_star(s)?.trace_re())
}

fn log_overlap(rho: &DensityMatrix, sqrt_sigma: &ComplexMatrix) -> ExtReal {
    let overlap = rho.sqrt().trace_product(sqrt_sigma).re;
    if overlap <= ZERO_OVERLAP {
        ExtReal::Infinite
    } else {
        ExtReal::Finite(-2.0 * overlap.ln())
    }
}

/// `−2 ln Tr[√ρ √σ*]`; infinite when the overlap vanishes.
pub fn log_overlap_bound(s: &TripartiteState) -> Result<ExtReal> {
    Ok(log_overlap(s.rho(), &sigma_star_detailed(s)?.sqrt))
}

pub(crate) fn report_with(s: &TripartiteState, m: &Marginals, star: &SigmaStar) -> Result<BoundReport> {
    let cmi = cmi_with(s, m).cmi;
    let rho = s.rho();
    let thm1 = (&rho.sqrt() - &star.sqrt).hs_norm().powi(2);
    let diff = (rho.matrix() - &star.matrix).hermitian_part();
    let corollary = 0.25 * trace_norm(&diff)?.powi(2);
    Ok(BoundReport {
        cmi,
        sigma_star_trace: star.matrix.trace_re(),
        log_overlap_bound: log_overlap(rho, &star.sqrt),
        thm1_bound: thm1,
        corollary_bound: corollary,
        slack_thm1: cmi - thm1,
        slack_corollary: cmi - corollary,
        support_projected: star.support_projected,
    })
}

/// `I(A:C|B) ≥ ‖√ρ − √σ*‖₂² ≥ ¼‖ρ − σ*‖₁²` with all intermediate values.
pub fn thm1_bound(s: &TripartiteState) -> Result<BoundReport> {
    let m = s.marginals();
    let star = sigma_star_with(s, &m)?;
    report_with(s, &m, &star)
}

/// [`thm1_bound`] on `(1−ε)ρ + ε𝟙/d`.
pub fn thm1_bound_regularized(s: &TripartiteState, eps: f64) -> Result<BoundReport> {
    thm1_bound(&s.regularized(eps))
}

fn require_full_rank(rho: &DensityMatrix, what: &str) -> Result<()> {
    if rho.is_full_rank() {
        Ok(())
    } else {
        Err(Error::SupportViolation(format!(
            "{what} has rank {} of {}",
            rho.support_rank(),
            rho.dim()
        )))
    }
}

/// Values entering the data-processing gap bound for one `(ρ, σ, Φ)`.
#[derive(Clone, Debug)]
pub struct ChannelGap {
    /// `S(ρ‖σ) − S(Φρ‖Φσ)`.
    pub lhs: f64,
    /// `−2 ln Tr[√ρ √exp(X)]`.
    pub rhs: f64,
    /// `Tr exp(X)` with `X = log σ + Φ*(log Φρ) − Φ*(log Φσ)`.
    pub trace_exp: f64,
    pub phi_rho: DensityMatrix,
    pub phi_sigma: DensityMatrix,
}

pub fn channel_gap(rho: &DensityMatrix, sigma: &DensityMatrix, phi: &KrausChannel) -> Result<ChannelGap> {
    if rho.dim() != phi.d_in() || sigma.dim() != phi.d_in() {
        return Err(Error::DimMismatch(format!(
            "states of dimension {} and {} for a channel on {}",
            rho.dim(),
            sigma.dim(),
            phi.d_in()
        )));
    }
    require_full_rank(rho, "rho")?;
    require_full_rank(sigma, "sigma")?;
    let phi_rho = phi.apply_state(rho)?;
    let phi_sigma = phi.apply_state(sigma)?;
    require_full_rank(&phi_rho, "Phi(rho)")?;
    require_full_rank(&phi_sigma, "Phi(sigma)")?;

    let finite = |x: ExtReal| {
        x.finite()
            .ok_or_else(|| Error::SupportViolation("relative entropy is infinite".into()))
    };
    let lhs = finite(rel_entropy(rho, sigma)?)? - finite(rel_entropy(&phi_rho, &phi_sigma)?)?;

    let x = &(&sigma.log() + &phi.dual(&phi_rho.log())?) - &phi.dual(&phi_sigma.log())?;
    let e = eig_hermitian(&x.hermitian_part())?;
    let trace_exp = e.eigenvalues.iter().map(|l| l.exp()).sum();
    let overlap = rho.sqrt().trace_product(&e.map_real(|l| (0.5 * l).exp())).re;
    Ok(ChannelGap {
        lhs,
        rhs: -2.0 * overlap.ln(),
        trace_exp,
        phi_rho,
        phi_sigma,
    })
}

/// `(S(ρ‖σ) − S(Φρ‖Φσ), −2 ln Tr[√ρ √exp(log σ + Φ*(log Φρ) − Φ*(log Φσ))])`.
pub fn thm2_gap_bound(rho: &DensityMatrix, sigma: &DensityMatrix, phi: &KrausChannel) -> Result<(f64, f64)> {
    let g = channel_gap(rho, sigma, phi)?;
    Ok((g.lhs, g.rhs))
}

/// `(F(ρ,σ), Tr√ρ · exp(−½S(ρ) − ½H(λ↓(ρ)‖λ↑(σ))))` for full-rank inputs.
pub fn fidelity_lower_bound(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<(f64, f64)> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch(format!("{} vs {}", rho.dim(), sigma.dim())));
    }
    for (name, m) in [("rho", rho), ("sigma", sigma)] {
        if !m.is_full_rank() {
            return Err(Error::SingularInput(format!(
                "{name} has rank {} of {}",
                m.support_rank(),
                m.dim()
            )));
        }
    }
    let f = fidelity(rho, sigma)?;
    let p = rho.eigen().spectrum().descending;
    let q = &sigma.eigen().eigenvalues;
    let h: f64 = p.iter().zip(q).map(|(pi, qi)| pi * (pi / qi).ln()).sum();
    let tr_sqrt: f64 = p.iter().map(|x| x.sqrt()).sum();
    Ok((f, tr_sqrt * (-0.5 * vn_entropy(rho) - 0.5 * h).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::random::{random_density, random_joint, seed_stream};
    use crate::states::{classical_state, markov_state, random::random_markov_spec, ClassicalJoint, Dims};
    use std::f64::consts::LN_2;

    fn parity() -> TripartiteState {
        classical_state(&ClassicalJoint::parity()).unwrap()
    }

    fn diag(d: &[f64]) -> DensityMatrix {
        DensityMatrix::validate(&ComplexMatrix::from_real_diag(d)).unwrap()
    }

    #[test]
    fn product_state_sigma_star_is_the_state() {
        let mut rng = seed_stream(3, 0);
        let (a, b, c) = (random_density(2, &mut rng), random_density(3, &mut rng), random_density(2, &mut rng));
        let s = TripartiteState::product(&a, &b, &c);
        let star = sigma_star(&s).unwrap();
        assert!(star.max_abs_diff(s.rho().matrix()) < 1e-12);
        assert!((trace_exp_check(&s).unwrap() - 1.0).abs() < 1e-12);
        assert!(log_overlap_bound(&s).unwrap().finite().unwrap().abs() < 1e-12);
    }

    #[test]
    fn parity_values() {
        let s = parity();
        let star = sigma_star(&s).unwrap();
        assert!(star.max_abs_diff(&ComplexMatrix::identity(8).scale(0.125)) < 1e-14);
        let r = thm1_bound(&s).unwrap();
        assert!((r.cmi - LN_2).abs() < 1e-12);
        assert!((r.thm1_bound - (2.0 - 2f64.sqrt())).abs() < 1e-12);
        assert!((r.corollary_bound - 0.25).abs() < 1e-12);
        assert!((r.log_overlap_bound.finite().unwrap() - LN_2).abs() < 1e-12);
        assert!((r.sigma_star_trace - 1.0).abs() < 1e-12);
        assert!(!r.support_projected);
    }

    #[test]
    fn markov_state_saturates_everything() {
        let mut rng = seed_stream(12, 0);
        for _ in 0..5 {
            let spec = random_markov_spec(Dims::new(2, 4, 2).unwrap(), &mut rng);
            let s = markov_state(&spec).unwrap();
            let r = thm1_bound(&s).unwrap();
            assert!(r.cmi.abs() < 1e-9, "{r:?}");
            assert!(r.thm1_bound < 1e-9 && r.corollary_bound < 1e-9);
            assert!(r.log_overlap_bound.finite().unwrap().abs() < 1e-9);
            assert!(sigma_star(&s).unwrap().max_abs_diff(s.rho().matrix()) < 1e-8);
        }
    }

    #[test]
    fn classical_state_with_zeros_uses_projection() {
        // p(i,j,k) supported on i = j = k: a GHZ-like classical correlation
        let mut p = vec![0.0; 8];
        p[0] = 0.5;
        p[7] = 0.5;
        let joint = ClassicalJoint::new(Dims::new(2, 2, 2).unwrap(), p.clone()).unwrap();
        let s = classical_state(&joint).unwrap();
        let r = thm1_bound(&s).unwrap();
        assert!(r.support_projected);
        // q_ijk = p_ij p_jk / p_j reproduces p itself here
        let star = sigma_star(&s).unwrap();
        assert!(star.max_abs_diff(&ComplexMatrix::from_real_diag(&p)) < 1e-12);
        assert!(r.cmi.abs() < 1e-12 && r.thm1_bound < 1e-12);
    }

    #[test]
    fn classical_sigma_star_matches_formula() {
        let mut rng = seed_stream(21, 0);
        let dims = Dims::new(2, 3, 2).unwrap();
        for _ in 0..10 {
            let joint = random_joint(dims, &mut rng);
            let s = classical_state(&joint).unwrap();
            let star = sigma_star(&s).unwrap();
            for i in 0..2 {
                for j in 0..3 {
                    for k in 0..2 {
                        let q = joint.p_ij(i, j) * joint.p_jk(j, k) / joint.p_j(j);
                        let idx = (i * 3 + j) * 2 + k;
                        assert!((star[(idx, idx)].re - q).abs() < 1e-13);
                    }
                }
            }
        }
    }

    #[test]
    fn random_state_chain() {
        let mut rng = seed_stream(5, 0);
        let dims = Dims::new(2, 2, 2).unwrap();
        for _ in 0..20 {
            let s = TripartiteState::new(random_density(8, &mut rng), dims).unwrap();
            let r = thm1_bound(&s).unwrap();
            let lo = r.log_overlap_bound.finite().unwrap();
            assert!(r.sigma_star_trace <= 1.0 + 1e-9 && r.sigma_star_trace > 0.0);
            assert!(r.cmi >= lo - 1e-8);
            assert!(lo >= r.thm1_bound - 1e-8);
            assert!(r.thm1_bound >= r.corollary_bound - 1e-8);
        }
    }

    #[test]
    fn regularization_is_opt_in() {
        let s = parity();
        let plain = thm1_bound(&s).unwrap();
        let reg = thm1_bound_regularized(&s, DEFAULT_REGULARIZATION).unwrap();
        assert!((plain.cmi - reg.cmi).abs() < 1e-7);
        assert_ne!(plain.cmi, reg.cmi);
    }

    #[test]
    fn thm2_identity_channel() {
        let mut rng = seed_stream(2, 0);
        let (rho, sigma) = (random_density(3, &mut rng), random_density(3, &mut rng));
        let (lhs, rhs) = thm2_gap_bound(&rho, &sigma, &KrausChannel::identity(3)).unwrap();
        assert!(lhs.abs() < 1e-12);
        assert!(rhs.abs() < 1e-12);
    }

    #[test]
    fn thm2_depolarizing_closed_form() {
        let rho = diag(&[0.75, 0.25]);
        let sigma = diag(&[0.25, 0.75]);
        let (lhs, rhs) = thm2_gap_bound(&rho, &sigma, &KrausChannel::depolarizing(2)).unwrap();
        assert!((lhs - 0.5 * 3f64.ln()).abs() < 1e-12);
        assert!((rhs - (4.0f64 / 3.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn thm2_rejects_singular() {
        let rho = diag(&[1.0, 0.0]);
        let sigma = diag(&[0.5, 0.5]);
        let r = thm2_gap_bound(&rho, &sigma, &KrausChannel::identity(2));
        assert!(matches!(r, Err(Error::SupportViolation(_))));
    }

    #[test]
    fn fidelity_bound_equality_at_maximally_mixed() {
        for d in 2..5 {
            let m = DensityMatrix::maximally_mixed(d);
            let (f, b) = fidelity_lower_bound(&m, &m).unwrap();
            assert!((f - 1.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fidelity_bound_diagonal_scalar_oracle() {
        let (p, q): ([f64; 2], [f64; 2]) = ([0.75, 0.25], [0.25, 0.75]);
        let f: f64 = p.iter().zip(&q).map(|(a, b)| (a * b).sqrt()).sum();
        let s: f64 = -p.iter().map(|x| x * x.ln()).sum::<f64>();
        // λ↓(ρ) = (3/4, 1/4) against λ↑(σ) = (1/4, 3/4)
        let h = 0.75 * (0.75f64 / 0.25).ln() + 0.25 * (0.25f64 / 0.75).ln();
        let bound = (0.75f64.sqrt() + 0.5) * (-0.5 * s - 0.5 * h).exp();
        let (fc, bc) = fidelity_lower_bound(&diag(&p), &diag(&q)).unwrap();
        assert!((fc - f).abs() < 1e-12);
        assert!((bc - bound).abs() < 1e-12);
        assert!(fc >= bc);
    }

    #[test]
    fn fidelity_bound_rejects_singular() {
        let r = fidelity_lower_bound(&diag(&[1.0, 0.0]), &diag(&[0.5, 0.5]));
        assert!(matches!(r, Err(Error::SingularInput(_))));
    }
}
