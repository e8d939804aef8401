//! Numerics for quantum conditional mutual information.
//!
//! `qcmi` evaluates `I(A:C|B)` for tripartite density matrices together with
//! a family of spectral lower bounds on it, checks the Markov-state equality
//! conditions (log-additivity, modular flow, `ρ = MM†`), and drives randomized
//! scans that either assert proven inequalities or record slack for open ones.
//!
//! All logarithms are natural; entropies are in nats.

pub mod error;
pub mod matfun;
pub mod states;
pub mod entropy;
pub mod bounds;
pub mod recovery;
pub mod harness;

pub use error::{Error, Result};
pub use matfun::ComplexMatrix;
