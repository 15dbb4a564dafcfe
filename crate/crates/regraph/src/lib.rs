//! Experiments, file formats and parallel oracle dispatch on top of
//! `regraph-core`.
//!
//! The `regraph` binary wraps these behind `estimate`, `exact`, `sample` and
//! `experiment` subcommands.

pub mod cache;
pub mod error;
pub mod harness;
pub mod io;
pub mod parallel;
pub mod report;
pub mod stats;

pub use error::{HarnessError, HarnessResult};
pub use regraph_core as core;
