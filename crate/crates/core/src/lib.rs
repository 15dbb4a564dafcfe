//! Conditional subgraph probabilities in random regular graphs.
//!
//! This crate holds the pure algorithmic core: labeled simple graphs and
//! patterns, the closed-form edge/subgraph probability estimates derived
//! from switchings, random regular graph samplers, the switching itself
//! with exact forward/backward counts, and an exact enumeration oracle for
//! tiny `(n, d)`.
//!
//! It is `no_std` and only needs `alloc`. File formats, the CLI, parallel
//! dispatch and statistical reporting live in the `regraph` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod estimates;
pub mod graph;
pub mod oracle;
pub mod pattern;
pub mod sampler;
pub mod triangles;

pub use error::{Error, Result};
pub use graph::{DegreeSequence, Edge, SimpleGraph};
pub use pattern::Pattern;
pub use triangles::TriangleTuple;
