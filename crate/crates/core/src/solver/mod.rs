//! Perfect matching and tiling engines: exhaustive search, counting, greedy
//! almost-matchings, absorbers and the absorption pipeline.

mod absorb;
mod exact;
mod greedy;

use serde::{Deserialize, Serialize};

pub use absorb::{absorption_solve, find_absorber, Absorber, AbsorbParams, AbsorbReport};
pub use exact::{
    count_perfect_matchings, exact_perfect_matching, exact_perfect_matching_with, exact_tiling, exact_tiling_with,
};
pub use greedy::{greedy_almost_matching, AlmostMatching, Strategy};

/// Default node budget for every search.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Found,
    /// Exhaustive search proved there is no solution.
    None,
    /// The budget ran out first.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport<W> {
    pub outcome: Outcome,
    pub witness: Option<W>,
    pub nodes: u64,
}
