//! Uniform sampling of graphs and digraphs with a prescribed degree sequence
//! via the switch Markov chain, plus an exact toolkit for small instances:
//! state-space enumeration, exact transition matrices and mixing times,
//! encodings with defect repair, and mixing-time bound calculators.
//!
//! Vertices are 0-indexed everywhere, including file formats.

pub mod bounds;
pub mod chain;
pub mod cli;
pub mod construct;
pub mod degseq;
pub mod encoding;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod irreducibility;
pub mod precise;
mod serde_util;

pub use degseq::{DegreeSequence, DirectedDegreeSequence};
pub use error::{Error, Result};
pub use graph::{Digraph, Graph};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
