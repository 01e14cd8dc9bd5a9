//! Greedy almost-perfect matchings.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::exact::SetSystem;
use crate::barriers::lp::solve_lp;
use crate::error::{Error, Result};
use crate::graph::{Digraph, Matching};
use crate::rational::to_f64;

/// Largest number of distinct vertex sets the rounding strategy will put into an exact LP.
pub const LP_ROUNDING_CAP: usize = 3_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Cover the vertex with fewest live edges first, through its sparsest partners.
    MaxDegree,
    /// Sample edges in proportion to an optimal fractional matching, then repair.
    LpRounding,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max-degree" => Ok(Strategy::MaxDegree),
            "lp-rounding" => Ok(Strategy::LpRounding),
            other => Err(Error::input(format!("unknown strategy {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlmostMatching {
    pub matching: Matching,
    pub leftover: Vec<usize>,
}

/// Greedy state over a set system: `covered` vertices are unavailable.
pub(crate) struct Greedy<'a> {
    sys: &'a SetSystem,
    pub covered: Vec<bool>,
    live: Vec<bool>,
    deg: Vec<usize>,
    pub chosen: Vec<usize>,
}

impl<'a> Greedy<'a> {
    pub fn new(sys: &'a SetSystem, blocked: &[bool]) -> Self {
        let covered = blocked.to_vec();
        let live: Vec<bool> = sys.sets.iter().map(|s| s.iter().all(|&v| !covered[v])).collect();
        let mut deg = vec![0; sys.n];
        for (i, s) in sys.sets.iter().enumerate() {
            if live[i] {
                for &v in s {
                    deg[v] += 1;
                }
            }
        }
        Greedy { sys, covered, live, deg, chosen: Vec::new() }
    }

    pub fn take(&mut self, i: usize) {
        debug_assert!(self.live[i]);
        self.chosen.push(i);
        for &v in &self.sys.sets[i] {
            self.covered[v] = true;
            for &j in &self.sys.incident[v] {
                if self.live[j] {
                    self.live[j] = false;
                    for &u in &self.sys.sets[j] {
                        self.deg[u] -= 1;
                    }
                }
            }
        }
    }

    pub fn is_live(&self, i: usize) -> bool {
        self.live[i]
    }

    pub fn run_max_degree(&mut self) {
        loop {
            let next = (0..self.sys.n)
                .filter(|&v| !self.covered[v] && self.deg[v] > 0)
                .min_by_key(|&v| (self.deg[v], v));
            let Some(v) = next else { return };
            let best = self.sys.incident[v]
                .iter()
                .copied()
                .filter(|&j| self.live[j])
                .min_by_key(|&j| {
                    let partners: usize = self.sys.sets[j].iter().filter(|&&u| u != v).map(|&u| self.deg[u]).sum();
                    (partners, j)
                })
                .expect("positive degree means a live edge");
            self.take(best);
        }
    }

    pub fn leftover(&self) -> Vec<usize> {
        (0..self.sys.n).filter(|&v| !self.covered[v]).collect()
    }
}

/// A maximal matching built by `strategy`; `seed` drives the rounding sample.
pub fn greedy_almost_matching(h: &Digraph, strategy: Strategy, seed: u64) -> Result<AlmostMatching> {
    let sys = SetSystem::new(h);
    let blocked = vec![false; h.n()];
    let mut g = Greedy::new(&sys, &blocked);
    if strategy == Strategy::LpRounding {
        round_lp(&sys, &mut g, seed)?;
    }
    g.run_max_degree();
    Ok(AlmostMatching {
        matching: Matching { edges: g.chosen.iter().map(|&i| sys.rep[i].clone()).collect() },
        leftover: g.leftover(),
    })
}

fn round_lp(sys: &SetSystem, g: &mut Greedy<'_>, seed: u64) -> Result<()> {
    if sys.sets.len() > LP_ROUNDING_CAP {
        return Err(Error::Resource { what: "lp-rounding columns", cap: LP_ROUNDING_CAP as u64 });
    }
    let reduced = Digraph::new(sys.m, sys.n, &sys.rep)?;
    let sol = solve_lp(&reduced, LP_ROUNDING_CAP)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // weighted random order: larger key first, key = u^(1/w)
    let mut keyed: Vec<(f64, usize)> = sol
        .matching
        .weights
        .iter()
        .filter_map(|we| {
            let mut s = we.edge.clone();
            s.sort_unstable();
            let idx = sys.sets.binary_search(&s).ok()?;
            let w = to_f64(&we.weight);
            let u: f64 = rng.random::<f64>();
            Some((u.powf(1.0 / w), idx))
        })
        .collect();
    keyed.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    for (_, i) in keyed {
        if g.is_live(i) {
            g.take(i);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::KGraph;
    use crate::homlift::hom_digraph;

    #[test]
    fn complete_graphs_are_easy() {
        let k2 = KGraph::complete(2, 2).unwrap();
        for n in [4, 8, 12] {
            let h = hom_digraph(&k2, &KGraph::complete(2, n).unwrap()).unwrap().digraph;
            for strategy in [Strategy::MaxDegree, Strategy::LpRounding] {
                let r = greedy_almost_matching(&h, strategy, 1).unwrap();
                assert!(r.leftover.is_empty(), "{strategy:?} n={n}");
                assert!(r.matching.is_perfect_in(&h));
            }
        }
    }

    #[test]
    fn trivial_cases() {
        let h = Digraph::empty(2, 3).unwrap();
        let r = greedy_almost_matching(&h, Strategy::MaxDegree, 0).unwrap();
        assert_eq!(r.leftover, vec![0, 1, 2]);
        let h = Digraph::new(2, 4, [[0, 1]]).unwrap();
        let r = greedy_almost_matching(&h, Strategy::MaxDegree, 0).unwrap();
        assert_eq!(r.leftover.len(), 2);
    }

    #[test]
    fn path_prefers_the_leaf() {
        // path 0-1-2-3: taking {1,2} first would strand both ends
        let p = KGraph::new(2, 4, [[0, 1], [1, 2], [2, 3]]).unwrap();
        let h = hom_digraph(&KGraph::complete(2, 2).unwrap(), &p).unwrap().digraph;
        let r = greedy_almost_matching(&h, Strategy::MaxDegree, 0).unwrap();
        assert!(r.leftover.is_empty());
    }

    #[test]
    fn strategy_names() {
        assert_eq!("max-degree".parse::<Strategy>().unwrap(), Strategy::MaxDegree);
        assert!("nope".parse::<Strategy>().is_err());
    }
}
