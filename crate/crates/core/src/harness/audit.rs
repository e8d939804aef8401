//! Checks every proven inequality that can be evaluated on a single state.

use crate::bounds::{channel_gap, sigma_star_with, BoundReport, KrausChannel, SigmaStar};
use crate::error::Result;
use crate::matfun::{audenaert_gap, gt_gap, lieb_triple_rhs, pb_gap, powers_stormer_sandwich, ComplexMatrix};
use crate::recovery::{recovery_report_with, RecoveryReport, DEFAULT_CLASSIFY_TOL};
use crate::states::{DensityMatrix, Marginals, Subsystems, TripartiteState};

const AUDENAERT_TS: [f64; 3] = [0.25, 0.5, 0.75];

/// An inequality that failed by `amount` beyond the tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct Finding {
    pub inequality: &'static str,
    pub amount: f64,
}

struct Checker {
    tol: f64,
    first: Option<Finding>,
}

impl Checker {
    /// Records a failure when `gap < −tol` (or `gap` is NaN).
    fn require(&mut self, inequality: &'static str, gap: f64) {
        if self.first.is_none() && !(gap >= -self.tol) {
            self.first = Some(Finding {
                inequality,
                amount: -gap,
            });
        }
    }
}

fn is_diagonal(m: &ComplexMatrix) -> bool {
    let n = m.dim();
    (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)].norm() <= 1e-15))
}

/// Everything already computed for one sample.
pub(crate) struct Evidence<'a> {
    pub s: &'a TripartiteState,
    pub marginals: &'a Marginals,
    pub star: &'a SigmaStar,
    pub bounds: &'a BoundReport,
    pub recovery: &'a RecoveryReport,
}

pub(crate) fn audit_with(ev: &Evidence<'_>, tol: f64) -> Result<Option<Finding>> {
    let mut c = Checker { tol, first: None };
    let Evidence {
        s,
        marginals: m,
        star,
        bounds: b,
        recovery: r,
    } = *ev;

    c.require("strong-subadditivity", b.cmi);
    c.require("sqrt-distance-bound", b.slack_thm1);
    c.require("trace-distance-bound", b.slack_corollary);
    match b.log_overlap_bound.finite() {
        Some(lo) => {
            c.require("cmi-above-log-overlap", b.cmi - lo);
            c.require("log-overlap-above-sqrt-distance", lo - b.thm1_bound);
        }
        None => c.require("cmi-above-log-overlap", f64::NEG_INFINITY),
    }
    c.require("trace-exp-at-most-one", 1.0 - b.sigma_star_trace);

    let rho = s.rho().matrix();
    let (quarter_sq, sqrt_dist, trace_dist) = powers_stormer_sandwich(rho, &star.matrix)?;
    c.require("powers-stormer-lower", sqrt_dist - quarter_sq);
    c.require("powers-stormer-upper", trace_dist - sqrt_dist);
    for t in AUDENAERT_TS {
        c.require("audenaert", audenaert_gap(rho, &star.matrix, t)?);
    }

    let log_ab = s.embed(&m.ab.log(), Subsystems::AB)?;
    let rest = &s.embed(&m.bc.log(), Subsystems::BC)? - &s.embed(&m.b.log(), Subsystems::B)?;
    c.require("peierls-bogoliubov", pb_gap(&log_ab, &rest)?);
    c.require("golden-thompson", gt_gap(&log_ab, &rest)?);

    if s.rho().is_full_rank() && m.ab.is_full_rank() && m.bc.is_full_rank() && m.b.is_full_rank() {
        let rhs = lieb_triple_rhs(
            &s.embed(m.ab.matrix(), Subsystems::AB)?,
            &s.embed(m.b.matrix(), Subsystems::B)?,
            &s.embed(m.bc.matrix(), Subsystems::BC)?,
        )?;
        c.require("lieb-triple", rhs - b.sigma_star_trace);

        // Tr_C with reference 𝟙/dA ⊗ ρ_BC turns the channel gap into (cmi, log overlap)
        let dims = s.dims();
        let reference = DensityMatrix::maximally_mixed(dims.a).tensor(&m.bc);
        let tr_c = KrausChannel::partial_trace_last(dims.a * dims.b, dims.c);
        let g = channel_gap(s.rho(), &reference, &tr_c)?;
        c.require("data-processing", g.lhs);
        c.require("channel-gap-bound", g.lhs - g.rhs);
    }

    if is_diagonal(rho) {
        c.require("classical-pinsker", b.cmi - 0.5 * r.recovery_gap_m.powi(2));
    }
    Ok(c.first)
}

/// Runs every single-state audit on `s`; `None` means all inequalities hold
/// within `tol`.
pub fn audit_state(s: &TripartiteState, tol: f64) -> Result<Option<Finding>> {
    let m = s.marginals();
    let star = sigma_star_with(s, &m)?;
    let bounds = crate::bounds::report_with(s, &m, &star)?;
    let recovery = recovery_report_with(s, &m, DEFAULT_CLASSIFY_TOL)?;
    audit_with(
        &Evidence {
            s,
            marginals: &m,
            star: &star,
            bounds: &bounds,
            recovery: &recovery,
        },
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::ExtReal;
    use crate::harness::Corpus;
    use crate::states::{classical_state, ClassicalJoint, Dims};

    #[test]
    fn corpora_pass_audit() {
        let dims = Dims::new(2, 2, 2).unwrap();
        for c in Corpus::ALL {
            for i in 0..5 {
                let s = c.sample(dims, 17, i).unwrap();
                assert_eq!(audit_state(&s, 1e-8).unwrap(), None, "{c} sample {i}");
            }
        }
    }

    #[test]
    fn parity_passes_audit() {
        let s = classical_state(&ClassicalJoint::parity()).unwrap();
        assert_eq!(audit_state(&s, 1e-9).unwrap(), None);
    }

    #[test]
    fn channel_gap_reduces_to_cmi_and_log_overlap() {
        let s = Corpus::HsRandom.sample(Dims::new(2, 3, 2).unwrap(), 4, 0).unwrap();
        let m = s.marginals();
        let reference = DensityMatrix::maximally_mixed(2).tensor(&m.bc);
        let g = channel_gap(s.rho(), &reference, &KrausChannel::partial_trace_last(6, 2)).unwrap();
        let b = crate::bounds::thm1_bound(&s).unwrap();
        assert!((g.lhs - b.cmi).abs() < 1e-10);
        let ExtReal::Finite(lo) = b.log_overlap_bound else { panic!() };
        assert!((g.rhs - lo).abs() < 1e-10);
    }

    #[test]
    fn checker_reports_first_failure() {
        let mut c = Checker { tol: 1e-8, first: None };
        c.require("a", 0.0);
        c.require("b", -1e-3);
        c.require("c", -1.0);
        c.require("d", f64::NAN);
        assert_eq!(
            c.first,
            Some(Finding {
                inequality: "b",
                amount: 1e-3
            })
        );
        let mut c = Checker { tol: 1e-8, first: None };
        c.require("nan", f64::NAN);
        assert_eq!(c.first.unwrap().inequality, "nan");
    }
}
