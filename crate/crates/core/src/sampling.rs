//! Seeded random hosts and the grabbing check.
//!
//! Every random stream is a ChaCha8 generator keyed by an explicit 64-bit
//! seed. Independent trials use [`trial_rng`], which selects a separate
//! stream of the same key, so trial `i` is reproducible on its own and
//! results do not depend on how trials are scheduled.

use num_traits::ToPrimitive;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{binomial, for_each_subset, KGraph};
use crate::rational::{is_unit_interval, to_f64, Q};

/// Largest vertex count accepted by the random host generators.
pub const MAX_RANDOM_N: usize = 4096;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A 64-bit seed for trial `i`, drawn from stream `i` of `seed`.
pub fn derive_seed(seed: u64, trial: u64) -> u64 {
    trial_rng(seed, trial).random()
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::input(format!("probability {p} outside [0,1]")))
    }
}

fn check_size(k: usize, n: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::input("uniformity must be positive"));
    }
    if n > MAX_RANDOM_N {
        return Err(Error::Resource { what: "random host vertices", cap: MAX_RANDOM_N as u64 });
    }
    if binomial(n as u64, k as u64) > 50_000_000 {
        return Err(Error::Resource { what: "candidate k-sets", cap: 50_000_000 });
    }
    Ok(())
}

/// `G^{(k)}(n, p)`: each k-set is an edge independently with probability `p`.
pub fn random_kgraph(k: usize, n: usize, p: f64, seed: u64) -> Result<KGraph> {
    check_probability(p)?;
    check_size(k, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for_each_subset(n, k, |s| {
        if rng.random::<f64>() < p {
            edges.push(s.to_vec());
        }
    });
    KGraph::new(k, n, edges)
}

/// A random k-graph with `δ_1 ≥ ⌈ratio·C(n−1, k−1)⌉`.
///
/// Starts from `G^{(k)}(n, ratio)` and patches: while some vertex is short of
/// the target, a uniformly random missing edge through it is added.
pub fn random_min_degree_host(k: usize, n: usize, ratio: &Q, seed: u64) -> Result<KGraph> {
    if !is_unit_interval(ratio) {
        return Err(Error::input("degree ratio must lie in [0,1]"));
    }
    if n < k {
        return KGraph::empty(k, n);
    }
    check_size(k, n)?;
    let p = to_f64(ratio);
    let base = random_kgraph(k, n, p, seed)?;
    let link = binomial(n as u64 - 1, k as u64 - 1);
    let target = ceil_times(ratio, link);

    let mut edges: std::collections::BTreeSet<Vec<usize>> = base.edges().map(<[usize]>::to_vec).collect();
    let mut deg = base.degrees();
    let mut rng = trial_rng(seed, u64::MAX);
    for v in 0..n {
        while (deg[v] as u128) < target {
            let mut missing = Vec::new();
            for_each_subset(n - 1, k - 1, |s| {
                let mut e: Vec<usize> = s.iter().map(|&x| if x >= v { x + 1 } else { x }).collect();
                e.push(v);
                e.sort_unstable();
                if !edges.contains(&e) {
                    missing.push(e);
                }
            });
            let need = (target - deg[v] as u128).min(missing.len() as u128) as usize;
            for i in sample(&mut rng, missing.len(), need) {
                let e = std::mem::take(&mut missing[i]);
                for &u in &e {
                    deg[u] += 1;
                }
                edges.insert(e);
            }
        }
    }
    KGraph::new(k, n, edges)
}

fn ceil_times(ratio: &Q, x: u128) -> u128 {
    let prod = ratio * Q::from_integer((x as i64).into());
    prod.ceil().to_integer().to_u128().unwrap_or(0)
}

/// Result of sampling s-sets of a host and testing their induced minimum degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrabReport {
    pub s: usize,
    pub samples: u64,
    pub retained: u64,
    /// Induced `δ_1` required for a sample to count as retained.
    pub required: u64,
    pub seed: u64,
}

impl GrabReport {
    pub fn fraction(&self) -> f64 {
        if self.samples == 0 {
            1.0
        } else {
            self.retained as f64 / self.samples as f64
        }
    }
}

/// Samples `samples` uniform s-subsets of `g` and counts those whose induced
/// `δ_1` is at least `⌈ratio·C(s−1, k−1)⌉`. Sample `i` uses `trial_rng(seed, i)`.
pub fn grabbing_check(g: &KGraph, s: usize, samples: u64, ratio: &Q, seed: u64) -> Result<GrabReport> {
    let (k, n) = (g.k(), g.n());
    if s > n || s < k {
        return Err(Error::input(format!("sample size {s} must lie in [{k}, {n}]")));
    }
    let required = ceil_times(ratio, binomial(s as u64 - 1, k as u64 - 1)) as u64;
    let mut inside = vec![usize::MAX; n];
    let mut deg = vec![0u64; s];
    let mut retained = 0;
    for i in 0..samples {
        let mut rng = trial_rng(seed, i);
        let set = sample(&mut rng, n, s).into_vec();
        for (j, &v) in set.iter().enumerate() {
            inside[v] = j;
        }
        deg.iter_mut().for_each(|d| *d = 0);
        for e in g.edges() {
            if e.iter().all(|&v| inside[v] != usize::MAX) {
                for &v in e {
                    deg[inside[v]] += 1;
                }
            }
        }
        if deg.iter().all(|&d| d >= required) {
            retained += 1;
        }
        for &v in &set {
            inside[v] = usize::MAX;
        }
    }
    Ok(GrabReport { s, samples, retained, required, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn trial_streams_are_reproducible_and_distinct() {
        let a: u64 = trial_rng(7, 3).random();
        let b: u64 = trial_rng(7, 3).random();
        let c: u64 = trial_rng(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn random_kgraph_extremes() {
        assert_eq!(random_kgraph(2, 8, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(random_kgraph(3, 7, 1.0, 1).unwrap().edge_count(), 35);
        assert_eq!(random_kgraph(2, 20, 0.5, 9).unwrap(), random_kgraph(2, 20, 0.5, 9).unwrap());
        assert!(random_kgraph(2, 5, 1.5, 0).is_err());
    }

    #[test]
    fn patched_host_meets_target() {
        for seed in 0..5 {
            let ratio = q(4, 5);
            let g = random_min_degree_host(2, 30, &ratio, seed).unwrap();
            assert!(g.min_degree(1).unwrap() >= 24);
            let g3 = random_min_degree_host(3, 10, &q(1, 2), seed).unwrap();
            assert!(g3.min_degree(1).unwrap() >= 18);
        }
    }

    #[test]
    fn complete_host_always_retains() {
        let g = KGraph::complete(2, 20).unwrap();
        let r = grabbing_check(&g, 6, 200, &q(1, 2), 3).unwrap();
        assert_eq!(r.retained, 200);
        assert_eq!(r.required, 3);
        let empty = KGraph::empty(2, 20).unwrap();
        assert_eq!(grabbing_check(&empty, 6, 50, &q(1, 2), 3).unwrap().retained, 0);
        assert!(grabbing_check(&g, 21, 1, &q(1, 2), 0).is_err());
    }
}
