//! Randomized scans, proof audits and conjecture testers.
//!
//! Every sample `i` of a run draws from its own generator substream
//! `seed_stream(seed, i)`, so reports are identical for a fixed configuration
//! however the samples are scheduled across threads.

mod audit;
mod conjecture;
mod scan;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::states::io::write_state;
use crate::states::random::{random_density, random_joint, random_markov_spec, seed_stream};
use crate::states::{classical_state, markov_state, Dims, TripartiteState};

pub use audit::{audit_state, Finding};
pub use conjecture::{
    channel_gap_scan, rotated_quarter_term, test_channel_conjectures, test_conjecture_commutator,
    test_conjecture_half_recovery, test_conjecture_rotated, ChannelGapSample, ChannelGapSummary,
    ConjectureConfig, ConjectureId, ConjectureResult,
};
pub use scan::{evaluate_sample, render, scan, ScanOutcome, ScanRow, CSV_COLUMNS};

/// Default tolerance for proven inequalities.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Mixing weights of the near-Markov corpus, cycled by sample index.
pub const NEAR_MARKOV_LAMBDAS: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];

/// State families available to scans and conjecture runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Corpus {
    /// Hilbert–Schmidt random states.
    HsRandom,
    /// Diagonal states of flat-Dirichlet joint distributions.
    ClassicalRandom,
    /// Random block-structured states with vanishing CMI.
    Markov,
    /// `(1−λ)ρ_markov + λρ_hs` with `λ` from [`NEAR_MARKOV_LAMBDAS`].
    NearMarkov,
}

impl Corpus {
    pub const ALL: [Corpus; 4] = [Corpus::HsRandom, Corpus::ClassicalRandom, Corpus::Markov, Corpus::NearMarkov];

    pub fn name(self) -> &'static str {
        match self {
            Corpus::HsRandom => "hs-random",
            Corpus::ClassicalRandom => "classical-random",
            Corpus::Markov => "markov",
            Corpus::NearMarkov => "near-markov",
        }
    }

    /// Sample `index` of this corpus.
    pub fn sample(self, dims: Dims, seed: u64, index: usize) -> Result<TripartiteState> {
        let mut rng = seed_stream(seed, index as u64);
        match self {
            Corpus::HsRandom => TripartiteState::new(random_density(dims.total(), &mut rng), dims),
            Corpus::ClassicalRandom => classical_state(&random_joint(dims, &mut rng)),
            Corpus::Markov => markov_state(&random_markov_spec(dims, &mut rng)),
            Corpus::NearMarkov => {
                let markov = markov_state(&random_markov_spec(dims, &mut rng))?;
                let noise = random_density(dims.total(), &mut rng);
                let lambda = NEAR_MARKOV_LAMBDAS[index % NEAR_MARKOV_LAMBDAS.len()];
                TripartiteState::new(markov.rho().mix(&noise, lambda)?, dims)
            }
        }
    }
}

impl fmt::Display for Corpus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Corpus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Corpus::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown corpus `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Config(format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub dims: Dims,
    pub samples: usize,
    pub seed: u64,
    pub corpus: Corpus,
    pub tol: f64,
    /// Report destination; `None` leaves writing to the caller.
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    /// Where violation states are written.
    pub artifact_dir: PathBuf,
}

impl ScanConfig {
    pub fn new(dims: Dims, samples: usize, seed: u64, corpus: Corpus) -> Self {
        Self {
            dims,
            samples,
            seed,
            corpus,
            tol: DEFAULT_TOL,
            out: None,
            format: OutputFormat::Csv,
            artifact_dir: PathBuf::from("."),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::Config(format!("tolerance must be non-negative, got {}", self.tol)));
        }
        Ok(())
    }
}

/// Writes `s` to `<dir>/<stem>.json` and returns the path.
pub(crate) fn write_artifact(dir: &Path, stem: &str, s: &TripartiteState) -> Result<String> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{stem}.json"));
    write_state(s, &path)?;
    Ok(path.display().to_string())
}
