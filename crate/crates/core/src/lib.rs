//! Balanced separators and induced minor models for graphs that exclude a fixed pattern as
//! an induced minor, the degeneracy-branching subexponential pipeline, and
//! generators for the binary-shift hardness reduction chain.

pub mod binshift;
pub mod embed;
pub mod error;
pub mod flow;
pub mod graph;
pub mod hardness;
pub mod oracles;
pub mod subexp;

pub use error::{Error, Result};
pub use graph::{Graph, InducedMinorModel};
