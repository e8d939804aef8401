//! Randomized testers for the open lower bounds on `I(A:C|B)`.
//!
//! Each tester computes a per-sample slack (bound minus conjectured value;
//! negative means a counterexample) and reports the minimum. A conjecture is
//! asserted only on corpora where it is already a theorem: classical states,
//! where `M` is diagonal and Pinsker's inequality applies, and Markov states.

use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::{write_artifact, Corpus};
use crate::bounds::{channel_gap, report_with, sigma_star_with, KrausChannel};
use crate::entropy::cmi_with;
use crate::error::{Error, Result};
use crate::matfun::{eig_hermitian, trace_norm, ComplexMatrix};
use crate::recovery::{petz_dual, recovery_report_with, DEFAULT_CLASSIFY_TOL};
use crate::states::io::matrix_to_json;
use crate::states::random::{random_density, random_unitary, seed_stream, SeedStream};
use crate::states::{DensityMatrix, Dims, Marginals, Subsystems, TripartiteState};

/// Tolerance of the asserted channel gap bound.
const CHANNEL_GAP_TOL: f64 = 1e-8;
/// Tolerance of data-processing monotonicity.
const MONOTONICITY_TOL: f64 = 1e-9;
/// Substream offset for draws made after the corpus sample.
const AUX_STREAM: u64 = 1 << 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConjectureId {
    /// `I ≥ ½ max{‖ρ − 𝓜(ρ)‖₁², ‖ρ − 𝓜′(ρ)‖₁²}`.
    HalfRecovery,
    /// `I ≥ ⅛‖[M, M†]‖₁²`.
    CommutatorEighth,
    /// `I ≥ ¼‖ρ − exp(U log ρ_AB U† + V log ρ_BC V† − W log ρ_B W†)‖₁²`.
    RotatedQuarter,
    /// `Tr exp(log σ + Φ*(log Φρ) − Φ*(log Φσ)) ≤ 1`.
    ChannelTraceexp,
    /// `S(ρ‖σ) − S(Φρ‖Φσ) ≥ ¼‖ρ − Φ*_σ∘Φ(ρ)‖₁²`.
    ChannelPetzPinsker,
}

impl ConjectureId {
    pub fn name(self) -> &'static str {
        match self {
            ConjectureId::HalfRecovery => "half-recovery",
            ConjectureId::CommutatorEighth => "commutator-eighth",
            ConjectureId::RotatedQuarter => "rotated-quarter",
            ConjectureId::ChannelTraceexp => "channel-traceexp",
            ConjectureId::ChannelPetzPinsker => "channel-petz-pinsker",
        }
    }
}

impl fmt::Display for ConjectureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct ConjectureConfig {
    pub dims: Dims,
    pub samples: usize,
    pub seed: u64,
    pub corpus: Corpus,
    /// Slack below `−tol` counts as a violation.
    pub tol: f64,
    /// Minimum slack below which the argmin sample is written to disk.
    pub near_tol: f64,
    /// Haar triples per state for the rotated conjecture (the identity triple is extra).
    pub unitary_samples: usize,
    /// Channel dimension; defaults to `dA·dB·dC`.
    pub channel_dim: Option<usize>,
    pub kraus: usize,
    pub artifact_dir: PathBuf,
}

impl ConjectureConfig {
    pub fn new(dims: Dims, samples: usize, seed: u64, corpus: Corpus) -> Self {
        Self {
            dims,
            samples,
            seed,
            corpus,
            tol: 1e-9,
            near_tol: 1e-6,
            unitary_samples: 50,
            channel_dim: None,
            kraus: 2,
            artifact_dir: PathBuf::from("."),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if self.kraus == 0 {
            return Err(Error::Config("at least one Kraus operator is required".into()));
        }
        if self.channel_dim == Some(0) {
            return Err(Error::Config("channel dimension must be positive".into()));
        }
        Ok(())
    }

    /// Whether the conjecture is a theorem on this corpus.
    fn proven_here(&self) -> bool {
        matches!(self.corpus, Corpus::ClassicalRandom | Corpus::Markov)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjectureResult {
    pub conjecture: ConjectureId,
    /// Corpus name, or `None` for channel runs.
    pub corpus: Option<Corpus>,
    pub samples: usize,
    pub min_slack: f64,
    /// Sample index attaining `min_slack`.
    pub argmin: usize,
    /// File holding the argmin sample, written when `min_slack < near_tol`.
    pub argmin_artifact: Option<String>,
    /// Number of samples with slack below `−tol`.
    pub violations: usize,
    pub tol: f64,
    /// `true` when violations abort the run.
    pub asserted: bool,
    /// Largest `|identity-triple term − corollary_bound|` (rotated runs only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identity_corollary_gap: Option<f64>,
}

fn summarize(
    id: ConjectureId,
    corpus: Option<Corpus>,
    slacks: &[f64],
    tol: f64,
    near_tol: f64,
    asserted: bool,
    dump: impl Fn(usize, &str) -> Result<String>,
) -> Result<ConjectureResult> {
    let (argmin, min_slack) = slacks
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one sample");
    let violations = slacks.iter().filter(|&&x| !(x >= -tol)).count();
    if asserted && violations > 0 {
        let artifact = dump(argmin, &format!("violation-{id}-sample{argmin}"))?;
        return Err(Error::Violation {
            inequality: id.to_string(),
            amount: -min_slack,
            sample: argmin,
            artifact,
        });
    }
    let argmin_artifact = if min_slack < near_tol {
        Some(dump(argmin, &format!("near-{id}-sample{argmin}"))?)
    } else {
        None
    };
    Ok(ConjectureResult {
        conjecture: id,
        corpus,
        samples: slacks.len(),
        min_slack,
        argmin,
        argmin_artifact,
        violations,
        tol,
        asserted,
        identity_corollary_gap: None,
    })
}

/// Evaluates `f` on every corpus sample in parallel, in index order.
fn per_state<T: Send>(
    cfg: &ConjectureConfig,
    f: impl Fn(usize, &TripartiteState, &Marginals) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    cfg.validate()?;
    (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let s = cfg.corpus.sample(cfg.dims, cfg.seed, i)?;
            f(i, &s, &s.marginals())
        })
        .collect()
}

fn state_dump(cfg: &ConjectureConfig) -> impl Fn(usize, &str) -> Result<String> + '_ {
    move |i, stem| {
        let s = cfg.corpus.sample(cfg.dims, cfg.seed, i)?;
        write_artifact(&cfg.artifact_dir, stem, &s)
    }
}

/// Slack `cmi − ½ max{‖ρ − 𝓜(ρ)‖₁², ‖ρ − 𝓜′(ρ)‖₁²}` per sample.
pub fn test_conjecture_half_recovery(cfg: &ConjectureConfig) -> Result<ConjectureResult> {
    let slacks = per_state(cfg, |_, s, m| {
        let r = recovery_report_with(s, m, DEFAULT_CLASSIFY_TOL)?;
        let worst = r.recovery_gap_m.max(r.recovery_gap_mprime);
        Ok(cmi_with(s, m).cmi - 0.5 * worst * worst)
    })?;
    summarize(
        ConjectureId::HalfRecovery,
        Some(cfg.corpus),
        &slacks,
        cfg.tol,
        cfg.near_tol,
        cfg.proven_here(),
        state_dump(cfg),
    )
}

/// Slack `cmi − ⅛‖[M, M†]‖₁²` per sample.
pub fn test_conjecture_commutator(cfg: &ConjectureConfig) -> Result<ConjectureResult> {
    let slacks = per_state(cfg, |_, s, m| {
        let r = recovery_report_with(s, m, DEFAULT_CLASSIFY_TOL)?;
        Ok(cmi_with(s, m).cmi - 0.125 * r.commutator_trace_norm.powi(2))
    })?;
    summarize(
        ConjectureId::CommutatorEighth,
        Some(cfg.corpus),
        &slacks,
        cfg.tol,
        cfg.near_tol,
        cfg.proven_here(),
        state_dump(cfg),
    )
}

/// Unitaries acting on `AB`, `BC` and `B`.
pub type UnitaryTriple = (ComplexMatrix, ComplexMatrix, ComplexMatrix);

fn conjugate(u: &ComplexMatrix, x: &ComplexMatrix) -> ComplexMatrix {
    (&(u * x) * &u.adjoint()).hermitian_part()
}

fn require_full_rank_marginals(m: &Marginals) -> Result<()> {
    if m.ab.is_full_rank() && m.bc.is_full_rank() && m.b.is_full_rank() {
        Ok(())
    } else {
        Err(Error::SingularInput("rotated bound needs full-rank marginals".into()))
    }
}

fn rotated_term_with(s: &TripartiteState, m: &Marginals, (u, v, w): &UnitaryTriple) -> Result<f64> {
    let x = &(&s.embed(&conjugate(u, &m.ab.log()), Subsystems::AB)?
        + &s.embed(&conjugate(v, &m.bc.log()), Subsystems::BC)?)
        - &s.embed(&conjugate(w, &m.b.log()), Subsystems::B)?;
    let e = eig_hermitian(&x.hermitian_part())?.map_real(f64::exp);
    let d = trace_norm(&(s.rho().matrix() - &e).hermitian_part())?;
    Ok(0.25 * d * d)
}

/// `¼‖ρ − exp(U log ρ_AB U† + V log ρ_BC V† − W log ρ_B W†)‖₁²`.
pub fn rotated_quarter_term(s: &TripartiteState, triple: &UnitaryTriple) -> Result<f64> {
    let m = s.marginals();
    require_full_rank_marginals(&m)?;
    let d = s.dims();
    let shapes = [d.a * d.b, d.b * d.c, d.b];
    let dims_of = [triple.0.rows(), triple.1.rows(), triple.2.rows()];
    if shapes != dims_of {
        return Err(Error::DimMismatch(format!("unitaries of sizes {dims_of:?} for {shapes:?}")));
    }
    rotated_term_with(s, &m, triple)
}

fn identity_triple(d: Dims) -> UnitaryTriple {
    (
        ComplexMatrix::identity(d.a * d.b),
        ComplexMatrix::identity(d.b * d.c),
        ComplexMatrix::identity(d.b),
    )
}

/// Slack `cmi − max over sampled (U, V, W) of the rotated term`, where the
/// sample always contains the identity triple. Never asserted.
pub fn test_conjecture_rotated(cfg: &ConjectureConfig) -> Result<ConjectureResult> {
    let d = cfg.dims;
    let per = per_state(cfg, |i, s, m| {
        require_full_rank_marginals(m)?;
        let identity = rotated_term_with(s, m, &identity_triple(d))?;
        let corollary = report_with(s, m, &sigma_star_with(s, m)?)?.corollary_bound;
        let mut rng: SeedStream = seed_stream(cfg.seed, AUX_STREAM | i as u64);
        let mut worst = identity;
        for _ in 0..cfg.unitary_samples {
            let triple = (
                random_unitary(d.a * d.b, &mut rng),
                random_unitary(d.b * d.c, &mut rng),
                random_unitary(d.b, &mut rng),
            );
            worst = worst.max(rotated_term_with(s, m, &triple)?);
        }
        Ok((cmi_with(s, m).cmi - worst, (identity - corollary).abs()))
    })?;
    let slacks: Vec<f64> = per.iter().map(|p| p.0).collect();
    let gap = per.iter().map(|p| p.1).fold(0.0, f64::max);
    let mut result = summarize(
        ConjectureId::RotatedQuarter,
        Some(cfg.corpus),
        &slacks,
        cfg.tol,
        cfg.near_tol,
        false,
        state_dump(cfg),
    )?;
    result.identity_corollary_gap = Some(gap);
    Ok(result)
}

struct ChannelTriple {
    rho: DensityMatrix,
    sigma: DensityMatrix,
    phi: KrausChannel,
}

fn channel_triple(dim: usize, kraus: usize, seed: u64, index: usize) -> Result<ChannelTriple> {
    let mut rng = seed_stream(seed, index as u64);
    let rho = random_density(dim, &mut rng);
    let sigma = random_density(dim, &mut rng);
    let phi = KrausChannel::random(dim, dim, kraus, &mut rng)?;
    Ok(ChannelTriple { rho, sigma, phi })
}

fn dump_channel_triple(dir: &Path, stem: &str, t: &ChannelTriple) -> Result<String> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{stem}.json"));
    let kraus: Vec<String> = t.phi.kraus().iter().map(matrix_to_json).collect();
    let text = format!(
        "{{\"rho\":{},\"sigma\":{},\"kraus\":[{}]}}\n",
        matrix_to_json(t.rho.matrix()),
        matrix_to_json(t.sigma.matrix()),
        kraus.join(",")
    );
    std::fs::write(&path, text)?;
    Ok(path.display().to_string())
}

/// One `(ρ, σ, Φ)` evaluation of the channel gap bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChannelGapSample {
    pub index: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub trace_exp: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChannelGapSummary {
    pub dim: usize,
    pub kraus: usize,
    pub samples: Vec<ChannelGapSample>,
    /// `min (lhs − rhs)`.
    pub min_gap: f64,
}

fn check_channel_gap(i: usize, g: &ChannelGapSample, t: &ChannelTriple, dir: &Path) -> Result<()> {
    for (name, gap, tol) in [
        ("channel-gap-bound", g.lhs - g.rhs, CHANNEL_GAP_TOL),
        ("data-processing", g.lhs, MONOTONICITY_TOL),
    ] {
        if !(gap >= -tol) {
            let artifact = dump_channel_triple(dir, &format!("violation-{name}-sample{i}"), t)?;
            return Err(Error::Violation {
                inequality: name.into(),
                amount: -gap,
                sample: i,
                artifact,
            });
        }
    }
    Ok(())
}

/// `S(ρ‖σ) − S(Φρ‖Φσ) ≥ −2 ln Tr[√ρ √exp(…)]` on random triples; any failure
/// aborts with the offending triple on disk.
pub fn channel_gap_scan(
    dim: usize,
    kraus: usize,
    samples: usize,
    seed: u64,
    artifact_dir: &Path,
) -> Result<ChannelGapSummary> {
    if samples == 0 || dim == 0 || kraus == 0 {
        return Err(Error::Config("dim, kraus and samples must be positive".into()));
    }
    let evaluated: Vec<Result<(ChannelTriple, ChannelGapSample)>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let t = channel_triple(dim, kraus, seed, i)?;
            let g = channel_gap(&t.rho, &t.sigma, &t.phi)?;
            let sample = ChannelGapSample {
                index: i,
                lhs: g.lhs,
                rhs: g.rhs,
                trace_exp: g.trace_exp,
            };
            Ok((t, sample))
        })
        .collect();
    let mut out = Vec::with_capacity(samples);
    for item in evaluated {
        let (t, g) = item?;
        check_channel_gap(g.index, &g, &t, artifact_dir)?;
        out.push(g);
    }
    let min_gap = out.iter().map(|g| g.lhs - g.rhs).fold(f64::INFINITY, f64::min);
    Ok(ChannelGapSummary {
        dim,
        kraus,
        samples: out,
        min_gap,
    })
}

/// Reports `1 − Tr exp(…)` and `lhs − ¼‖ρ − Φ*_σ∘Φ(ρ)‖₁²` over random triples,
/// while asserting the proven channel gap bound on each.
pub fn test_channel_conjectures(cfg: &ConjectureConfig) -> Result<[ConjectureResult; 2]> {
    cfg.validate()?;
    let dim = cfg.channel_dim.unwrap_or(cfg.dims.total());
    let evaluated: Vec<Result<(f64, f64)>> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let t = channel_triple(dim, cfg.kraus, cfg.seed, i)?;
            let g = channel_gap(&t.rho, &t.sigma, &t.phi)?;
            let sample = ChannelGapSample {
                index: i,
                lhs: g.lhs,
                rhs: g.rhs,
                trace_exp: g.trace_exp,
            };
            check_channel_gap(i, &sample, &t, &cfg.artifact_dir)?;
            let petz = petz_dual(&t.phi, &t.sigma)?;
            let recovered = petz.apply(g.phi_rho.matrix())?;
            let d = trace_norm(&(t.rho.matrix() - &recovered).hermitian_part())?;
            Ok((1.0 - g.trace_exp, g.lhs - 0.25 * d * d))
        })
        .collect();
    let pairs = evaluated.into_iter().collect::<Result<Vec<_>>>()?;
    let dump = |i: usize, stem: &str| {
        let t = channel_triple(dim, cfg.kraus, cfg.seed, i)?;
        dump_channel_triple(&cfg.artifact_dir, stem, &t)
    };
    let trace_slacks: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let pinsker_slacks: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    Ok([
        summarize(ConjectureId::ChannelTraceexp, None, &trace_slacks, cfg.tol, cfg.near_tol, false, dump)?,
        summarize(
            ConjectureId::ChannelPetzPinsker,
            None,
            &pinsker_slacks,
            cfg.tol,
            cfg.near_tol,
            false,
            dump,
        )?,
    ])
}
