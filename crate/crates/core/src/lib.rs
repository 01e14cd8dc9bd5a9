//! Perfect tilings in hypergraphs through homomorphism digraphs: lifts,
//! barrier checks with certificates, tile invariants, threshold formulas,
//! extremal constructions and exact/absorbing solvers.

pub mod barriers;
pub mod certificate;
pub mod constructions;
pub mod error;
pub mod graph;
pub mod homlift;
pub mod invariants;
pub mod io;
pub mod rational;
pub mod sampling;
pub mod solver;
pub mod thresholds;

pub use error::{Error, Result};
pub use graph::{Digraph, KGraph, Labeled, Matching, Partition, Tiling};
