//! Corpus-wide scans with per-sample bound reports.

use std::fmt::Write as _;

use rayon::prelude::*;

use super::audit::{audit_with, Evidence, Finding};
use super::{write_artifact, OutputFormat, ScanConfig};
use crate::bounds::{report_with, sigma_star_with, BoundReport};
use crate::entropy::ExtReal;
use crate::error::{Error, Result};
use crate::recovery::{recovery_report_with, RecoveryReport, DEFAULT_CLASSIFY_TOL};
use crate::states::io::fmt_f64;
use crate::states::{Dims, TripartiteState};

pub const CSV_COLUMNS: [&str; 16] = [
    "sample_index",
    "dA",
    "dB",
    "dC",
    "cmi",
    "sigma_star_trace",
    "log_overlap_bound",
    "thm1_bound",
    "corollary_bound",
    "slack_thm1",
    "slack_corollary",
    "recovery_gap_M",
    "recovery_gap_Mprime",
    "commutator_trace_norm",
    "ruskai_residual",
    "label",
];

/// One evaluated sample.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub sample_index: usize,
    pub dims: Dims,
    pub bounds: BoundReport,
    pub recovery: RecoveryReport,
}

impl ScanRow {
    fn cells(&self) -> Vec<String> {
        let b = &self.bounds;
        let r = &self.recovery;
        let overlap = match b.log_overlap_bound {
            ExtReal::Finite(x) => fmt_f64(x),
            ExtReal::Infinite => "inf".into(),
        };
        vec![
            self.sample_index.to_string(),
            self.dims.a.to_string(),
            self.dims.b.to_string(),
            self.dims.c.to_string(),
            fmt_f64(b.cmi),
            fmt_f64(b.sigma_star_trace),
            overlap,
            fmt_f64(b.thm1_bound),
            fmt_f64(b.corollary_bound),
            fmt_f64(b.slack_thm1),
            fmt_f64(b.slack_corollary),
            fmt_f64(r.recovery_gap_m),
            fmt_f64(r.recovery_gap_mprime),
            fmt_f64(r.commutator_trace_norm),
            fmt_f64(r.ruskai_residual),
            r.classification.label.to_string(),
        ]
    }

    fn json(&self) -> String {
        let cells = self.cells();
        let mut out = String::from("{");
        for (k, (name, cell)) in CSV_COLUMNS.iter().zip(&cells).enumerate() {
            if k > 0 {
                out.push(',');
            }
            let quoted = *name == "label" || (*name == "log_overlap_bound" && cell == "inf");
            if quoted {
                let _ = write!(out, "\"{name}\":\"{cell}\"");
            } else {
                let _ = write!(out, "\"{name}\":{cell}");
            }
        }
        let _ = write!(out, ",\"support_projected\":{}}}", self.bounds.support_projected);
        out
    }
}

/// Bound report, recovery residuals and the first failed audit for one state.
pub fn evaluate_sample(s: &TripartiteState, index: usize, tol: f64) -> Result<(ScanRow, Option<Finding>)> {
    let m = s.marginals();
    let star = sigma_star_with(s, &m)?;
    let bounds = report_with(s, &m, &star)?;
    let recovery = recovery_report_with(s, &m, DEFAULT_CLASSIFY_TOL)?;
    let finding = audit_with(
        &Evidence {
            s,
            marginals: &m,
            star: &star,
            bounds: &bounds,
            recovery: &recovery,
        },
        tol,
    )?;
    let row = ScanRow {
        sample_index: index,
        dims: s.dims(),
        bounds,
        recovery,
    };
    Ok((row, finding))
}

/// Report text for `rows` in the requested format.
pub fn render(rows: &[ScanRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = CSV_COLUMNS.join(",");
            out.push('\n');
            for row in rows {
                out.push_str(&row.cells().join(","));
                out.push('\n');
            }
            out
        }
        OutputFormat::Json => {
            let body: Vec<String> = rows.iter().map(|r| format!("  {}", r.json())).collect();
            format!("[\n{}\n]\n", body.join(",\n"))
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanOutcome {
    pub rows: Vec<ScanRow>,
    pub report: String,
}

/// Evaluates the corpus, aborting with a state artifact on the first (lowest
/// index) audit failure. Writes the report to `cfg.out` when set.
pub fn scan(cfg: &ScanConfig) -> Result<ScanOutcome> {
    cfg.validate()?;
    let evaluated: Vec<Result<(TripartiteState, ScanRow, Option<Finding>)>> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let s = cfg.corpus.sample(cfg.dims, cfg.seed, i)?;
            let (row, finding) = evaluate_sample(&s, i, cfg.tol)?;
            Ok((s, row, finding))
        })
        .collect();

    let mut rows = Vec::with_capacity(cfg.samples);
    for item in evaluated {
        let (s, row, finding) = item?;
        if let Some(f) = finding {
            let stem = format!("violation-{}-sample{}", f.inequality, row.sample_index);
            let artifact = write_artifact(&cfg.artifact_dir, &stem, &s)?;
            return Err(Error::Violation {
                inequality: f.inequality.to_string(),
                amount: f.amount,
                sample: row.sample_index,
                artifact,
            });
        }
        rows.push(row);
    }
    let report = render(&rows, cfg.format);
    if let Some(path) = &cfg.out {
        std::fs::write(path, &report)?;
    }
    Ok(ScanOutcome { rows, report })
}
