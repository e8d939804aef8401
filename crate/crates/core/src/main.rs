//! `qcmi` command-line interface.
//!
//! Exit status: 0 on success, 1 on usage or validation errors, 2 when a proven
//! inequality fails beyond tolerance.

use std::f64::consts::LN_2;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qcmi::bounds::{thm1_bound, BoundReport, DEFAULT_REGULARIZATION};
use qcmi::entropy::{cmi, EntropyReport, ExtReal};
use qcmi::harness::{
    audit_state, channel_gap_scan, scan, test_channel_conjectures, test_conjecture_commutator,
    test_conjecture_half_recovery, test_conjecture_rotated, ConjectureConfig, ConjectureResult, Corpus,
    OutputFormat, ScanConfig, DEFAULT_TOL,
};
use qcmi::recovery::{check_petz_modular, check_zhang, classify, recovery_report, DEFAULT_CLASSIFY_TOL, DEFAULT_MODULAR_TS};
use qcmi::states::io::{read_markov_spec, read_state, write_state};
use qcmi::states::{markov_state, Dims, TripartiteState};
use qcmi::{Error, Result};

#[derive(Parser)]
#[command(name = "qcmi", version, about = "Conditional mutual information bounds and inequality harnesses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    HalfRecovery,
    CommutatorEighth,
    RotatedQuarter,
    Channel,
}

#[derive(Subcommand)]
enum Command {
    /// Bounds, classification and equality-condition residuals of a state file.
    Info {
        state: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CLASSIFY_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
        /// Also print entropic quantities in bits.
        #[arg(long)]
        bits: bool,
        /// Mix the state with the maximally mixed state first.
        #[arg(long, num_args = 0..=1, default_missing_value = "1e-9")]
        regularize: Option<f64>,
    },
    /// Evaluates a random corpus and writes one report row per sample.
    Scan {
        #[arg(long)]
        dims: Dims,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "hs-random")]
        corpus: Corpus,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Directory for violation states (defaults to the report's directory).
        #[arg(long)]
        artifact_dir: Option<PathBuf>,
    },
    /// Runs a conjecture tester and writes its result as JSON.
    Conjecture {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value = "2,2,2")]
        dims: Dims,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 50)]
        unitary_samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "hs-random")]
        corpus: Corpus,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Channel dimension for `--which channel` (defaults to dA·dB·dC).
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 2)]
        kraus: usize,
        #[arg(long)]
        artifact_dir: Option<PathBuf>,
    },
    /// Builds a Markov state from a block specification.
    Markov {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Prints the D1/D2/D3 class of a state file.
    Classify {
        state: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CLASSIFY_TOL)]
        tol: f64,
    },
    /// Checks the relative-entropy gap bound on random channels.
    ChannelGap {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        kraus: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        artifact_dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            match e {
                Error::Violation { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn dir_of(out: Option<&Path>, explicit: Option<PathBuf>) -> PathBuf {
    explicit.unwrap_or_else(|| {
        out.and_then(Path::parent)
            .filter(|p| !p.as_os_str().is_empty())
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."))
    })
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Info {
            state,
            tol,
            json,
            bits,
            regularize,
        } => {
            let mut s = read_state(&state)?;
            if let Some(eps) = regularize {
                s = s.regularized(if eps > 0.0 { eps } else { DEFAULT_REGULARIZATION });
            }
            info(&s, tol, json, bits)?;
            if let Some(f) = audit_state(&s, DEFAULT_TOL)? {
                return Err(Error::Violation {
                    inequality: f.inequality.into(),
                    amount: f.amount,
                    sample: 0,
                    artifact: state.display().to_string(),
                });
            }
            Ok(())
        }
        Command::Scan {
            dims,
            samples,
            seed,
            corpus,
            out,
            format,
            tol,
            artifact_dir,
        } => {
            let mut cfg = ScanConfig::new(dims, samples, seed, corpus);
            cfg.tol = tol;
            cfg.format = match format {
                Format::Csv => OutputFormat::Csv,
                Format::Json => OutputFormat::Json,
            };
            cfg.artifact_dir = dir_of(out.as_deref(), artifact_dir);
            cfg.out = out.clone();
            let outcome = scan(&cfg)?;
            match out {
                Some(path) => println!("wrote {} rows to {}", outcome.rows.len(), path.display()),
                None => print!("{}", outcome.report),
            }
            Ok(())
        }
        Command::Conjecture {
            which,
            dims,
            samples,
            unitary_samples,
            seed,
            corpus,
            out,
            tol,
            dim,
            kraus,
            artifact_dir,
        } => {
            let mut cfg = ConjectureConfig::new(dims, samples, seed, corpus);
            cfg.tol = tol;
            cfg.unitary_samples = unitary_samples;
            cfg.channel_dim = dim;
            cfg.kraus = kraus;
            cfg.artifact_dir = dir_of(out.as_deref(), artifact_dir);
            let results: Vec<ConjectureResult> = match which {
                Which::HalfRecovery => vec![test_conjecture_half_recovery(&cfg)?],
                Which::CommutatorEighth => vec![test_conjecture_commutator(&cfg)?],
                Which::RotatedQuarter => vec![test_conjecture_rotated(&cfg)?],
                Which::Channel => test_channel_conjectures(&cfg)?.to_vec(),
            };
            for r in &results {
                println!(
                    "{}: samples={} min_slack={:.6e} argmin={} violations={} asserted={}",
                    r.conjecture, r.samples, r.min_slack, r.argmin, r.violations, r.asserted
                );
            }
            if let Some(path) = out {
                let text = serde_json::to_string_pretty(&results).map_err(|e| Error::Parse(e.to_string()))?;
                std::fs::write(path, text + "\n")?;
            }
            Ok(())
        }
        Command::Markov { spec, out } => {
            let s = markov_state(&read_markov_spec(&spec)?).map_err(|e| Error::Validation {
                field: "blocks".into(),
                source: Box::new(e),
            })?;
            write_state(&s, &out)?;
            println!("wrote {} state ({}) to {}", s.dims(), s.rho().dim(), out.display());
            Ok(())
        }
        Command::Classify { state, tol } => {
            let c = classify(&read_state(&state)?, tol)?;
            println!(
                "{} commutator_norm={:.6e} reconstruction_gap={:.6e} tol={:e}",
                c.label, c.commutator_norm, c.reconstruction_gap, c.tol
            );
            Ok(())
        }
        Command::ChannelGap {
            dim,
            kraus,
            samples,
            seed,
            artifact_dir,
        } => {
            let dir = artifact_dir.unwrap_or_else(|| PathBuf::from("."));
            let summary = channel_gap_scan(dim, kraus, samples, seed, &dir)?;
            println!("index,lhs,rhs,trace_exp");
            for g in &summary.samples {
                println!("{},{:.16e},{:.16e},{:.16e}", g.index, g.lhs, g.rhs, g.trace_exp);
            }
            println!("min lhs-rhs = {:.6e} over {} samples", summary.min_gap, summary.samples.len());
            Ok(())
        }
    }
}

fn info(s: &TripartiteState, tol: f64, as_json: bool, bits: bool) -> Result<()> {
    let entropies = cmi(s);
    let bounds = thm1_bound(s)?;
    let recovery = recovery_report(s, tol)?;
    let zhang = check_zhang(s)?;
    let modular = check_petz_modular(s, &DEFAULT_MODULAR_TS).ok();
    if as_json {
        let v = json!({
            "dims": s.dims().as_array(),
            "entropies": entropies,
            "bounds": bounds,
            "recovery": recovery,
            "zhang": [zhang.0, zhang.1],
            "petz_modular": modular,
            "label": recovery.classification.label,
        });
        println!("{}", serde_json::to_string_pretty(&v).map_err(|e| Error::Parse(e.to_string()))?);
        return Ok(());
    }
    print_info(s, &entropies, &bounds, bits);
    println!("recovery_gap_M       {:.10e}", recovery.recovery_gap_m);
    println!("recovery_gap_Mprime  {:.10e}", recovery.recovery_gap_mprime);
    println!("commutator_norm      {:.10e}", recovery.commutator_trace_norm);
    println!("ruskai_residual      {:.10e}", recovery.ruskai_residual);
    println!("zhang                {:.10e} {:.10e}", zhang.0, zhang.1);
    match modular {
        Some(m) => println!("petz_modular         {m:.10e}"),
        None => println!("petz_modular         n/a (state not full rank)"),
    }
    println!("label                {}", recovery.classification.label);
    Ok(())
}

fn print_info(s: &TripartiteState, e: &EntropyReport, b: &BoundReport, bits: bool) {
    let show = |name: &str, x: f64| {
        if bits {
            println!("{name:<20} {x:.10e} nats  {:.10e} bits", x / LN_2);
        } else {
            println!("{name:<20} {x:.10e}");
        }
    };
    println!("dims                 {}", s.dims());
    show("S(ABC)", e.s_abc);
    show("S(AB)", e.s_ab);
    show("S(BC)", e.s_bc);
    show("S(B)", e.s_b);
    show("cmi", b.cmi);
    match b.log_overlap_bound {
        ExtReal::Finite(x) => show("log_overlap_bound", x),
        ExtReal::Infinite => println!("log_overlap_bound    inf"),
    }
    show("thm1_bound", b.thm1_bound);
    show("corollary_bound", b.corollary_bound);
    println!("sigma_star_trace     {:.10e}", b.sigma_star_trace);
    println!("slack_thm1           {:.10e}", b.slack_thm1);
    println!("slack_corollary      {:.10e}", b.slack_corollary);
    if b.support_projected {
        println!("note                 sigma* restricted to the intersection of marginal supports");
    }
}
