//! Experiment harness for the private multi-outcome regression solvers.
//!
//! The core crate does the mathematics; this one does the plumbing around
//! it: genotype-style file ingestion ([`genotype`]), synthetic data from the
//! generative model y = Xθ + noise ([`synth`]), sweep orchestration with
//! common-random-number seeding and per-row error capture ([`sweep`]), and
//! CSV emission. The `primo` binary in this package exposes `simulate`,
//! `fit`, and `sweep-subsample` subcommands over these modules; identical
//! invocations produce byte-identical output files unless wall-clock timing
//! is explicitly requested.

pub mod error;
pub mod genotype;
pub mod sweep;
pub mod synth;

pub use error::{HarnessError, Result};
