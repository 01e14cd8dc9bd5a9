//! The space, divisibility and cover properties of a digraph, their robust
//! (vertex-deletion) versions, property graphs and proportionality.

pub mod lattice;
pub mod lp;

use std::fmt;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{for_each_subset, Digraph, KGraph, Partition};
use crate::homlift::{is_fissile, DEFAULT_FISSILITY_CAP};
use crate::rational::{fmt_q, is_unit_interval, Q};
use crate::solver::{exact_perfect_matching_with, Outcome, DEFAULT_NODE_BUDGET};

pub use lattice::{
    express_in_lattice, in_lattice, is_lattice_complete, lattice_basis, LatticeBasis, LatticeCombination,
};
pub use lp::{max_fractional_matching, min_fractional_cover, FractionalCover, FractionalMatching};

/// Default cap on the number of vertex subsets any enumeration may visit.
pub const DEFAULT_SUBSET_CAP: u64 = 2_000_000;

/// `(1-ρ)·v(H)/m`, the size a fractional matching needs for the space property.
pub fn space_target(h: &Digraph, rho: &Q) -> Q {
    (Q::from_integer(1.into()) - rho) * Q::new(h.n().into(), h.m().into())
}

/// Outcome of the space check: the optimal matching when it holds, an
/// optimal cover (smaller than the target) when it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceVerdict {
    Holds(FractionalMatching),
    Fails(FractionalCover),
}

pub fn has_space(h: &Digraph, rho: &Q) -> Result<SpaceVerdict> {
    if !is_unit_interval(rho) {
        return Err(Error::input(format!("rho = {} must lie in [0,1]", fmt_q(rho))));
    }
    let sol = lp::solve_lp(h, lp::DEFAULT_LP_CAP)?;
    if sol.matching.size >= space_target(h, rho) {
        Ok(SpaceVerdict::Holds(sol.matching))
    } else {
        Ok(SpaceVerdict::Fails(sol.cover))
    }
}

/// For each vertex, an edge in which it has multiplicity one; or the first
/// vertex without one.
pub fn is_covered(h: &Digraph) -> std::result::Result<Vec<Vec<usize>>, usize> {
    let mut witness: Vec<Option<Vec<usize>>> = vec![None; h.n()];
    for e in h.edges() {
        for &v in e {
            if witness[v].is_none() && e.iter().filter(|&&x| x == v).count() == 1 {
                witness[v] = Some(e.to_vec());
            }
        }
    }
    witness
        .into_iter()
        .enumerate()
        .map(|(v, w)| w.ok_or(v))
        .collect()
}

/// A property of digraphs from the fixed menu, composable by conjunction
/// and by robustness under vertex deletion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Property {
    Space(Q),
    Div,
    /// Completeness with respect to a partition of the original vertex labels.
    DivParts(Partition),
    Cov,
    Fissile,
    And(Vec<Property>),
    /// `Del_q`: the inner property survives deleting any `q` or fewer vertices.
    Del(usize, Box<Property>),
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::Space(rho) => write!(f, "spa({})", fmt_q(rho)),
            Property::Div => write!(f, "div"),
            Property::DivParts(_) => write!(f, "div(U)"),
            Property::Cov => write!(f, "cov"),
            Property::Fissile => write!(f, "fissile"),
            Property::And(ps) => {
                let names: Vec<String> = ps.iter().map(ToString::to_string).collect();
                write!(f, "{}", names.join("&"))
            }
            Property::Del(q, p) => write!(f, "del{q}({p})"),
        }
    }
}

impl Property {
    /// `spa(ρ) ∩ div ∩ cov`.
    pub fn all(rho: Q) -> Self {
        Property::And(vec![Property::Space(rho), Property::Div, Property::Cov])
    }

    /// Parses a comma-separated menu such as `spa,div,cov` or `all`.
    /// `div(U)` needs `parts`; `spa` uses `rho`.
    pub fn parse_menu(menu: &str, rho: &Q, parts: Option<&Partition>) -> Result<Self> {
        let mut props = Vec::new();
        for item in menu.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            props.push(match item {
                "spa" => Property::Space(rho.clone()),
                "div" => Property::Div,
                "div(U)" | "divU" => Property::DivParts(
                    parts.cloned().ok_or_else(|| Error::input("div(U) needs a partition"))?,
                ),
                "cov" => Property::Cov,
                "fissile" => Property::Fissile,
                "all" => Property::all(rho.clone()),
                other => return Err(Error::input(format!("unknown property {other:?}"))),
            });
        }
        match props.len() {
            0 => Err(Error::input("empty property menu")),
            1 => Ok(props.pop().expect("one element")),
            _ => Ok(Property::And(props)),
        }
    }

    pub fn holds(&self, h: &Digraph) -> Result<bool> {
        let labels: Vec<usize> = (0..h.n()).collect();
        self.holds_on(h, &labels)
    }

    /// Evaluates on `h` whose vertex `i` carries original label `labels[i]`.
    pub fn holds_on(&self, h: &Digraph, labels: &[usize]) -> Result<bool> {
        match self {
            Property::Space(rho) => Ok(matches!(has_space(h, rho)?, SpaceVerdict::Holds(_))),
            Property::Div => Ok(is_lattice_complete(h, None)?.is_none()),
            Property::DivParts(p) => {
                let local = p.restrict(labels);
                Ok(is_lattice_complete(h, Some(&local))?.is_none())
            }
            Property::Cov => Ok(is_covered(h).is_ok()),
            Property::Fissile => Ok(is_fissile(h, h.m(), DEFAULT_FISSILITY_CAP)?.is_none()),
            Property::And(ps) => {
                for p in ps {
                    if !p.holds_on(h, labels)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Property::Del(q, inner) => Ok(del_q_on(h, labels, inner, *q, DEFAULT_SUBSET_CAP)?.is_none()),
        }
    }
}

/// Checks `H - X` for every set `X` of at most `q` vertices. Returns a
/// failing deletion set (in `H`'s labels) if one exists.
pub fn del_q(h: &Digraph, property: &Property, q: usize, cap: u64) -> Result<Option<Vec<usize>>> {
    let labels: Vec<usize> = (0..h.n()).collect();
    del_q_on(h, &labels, property, q, cap)
}

fn del_q_on(h: &Digraph, labels: &[usize], property: &Property, q: usize, cap: u64) -> Result<Option<Vec<usize>>> {
    if q > h.n() {
        return Err(Error::input(format!("cannot delete {q} of {} vertices", h.n())));
    }
    let mut visited = 0u64;
    for size in 0..=q {
        let mut outcome: Result<Option<Vec<usize>>> = Ok(None);
        for_each_subset(h.n(), size, |x| {
            if !matches!(outcome, Ok(None)) {
                return;
            }
            visited += 1;
            if visited > cap {
                outcome = Err(Error::Resource { what: "deletion sets", cap });
                return;
            }
            let rest = h.delete(x);
            let sub_labels: Vec<usize> = rest.labels.iter().map(|&i| labels[i]).collect();
            outcome = match property.holds_on(&rest.graph, &sub_labels) {
                Ok(true) => Ok(None),
                Ok(false) => Ok(Some(x.to_vec())),
                Err(e) => Err(e),
            };
        });
        if let Some(x) = outcome? {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Whether `H - X` has a perfect matching for every `m`-set `X`. Returns a
/// failing set when it does not.
pub fn robust_matching_hypothesis(h: &Digraph, cap: u64) -> Result<Option<Vec<usize>>> {
    let m = h.m();
    if h.n() < m {
        return Err(Error::input("robust matching needs at least m vertices"));
    }
    if crate::graph::binomial(h.n() as u64, m as u64) > cap as u128 {
        return Err(Error::Resource { what: "deletion sets", cap });
    }
    let mut result: Result<Option<Vec<usize>>> = Ok(None);
    for_each_subset(h.n(), m, |x| {
        if !matches!(result, Ok(None)) {
            return;
        }
        let rest = h.delete(x);
        let report = exact_perfect_matching_with(&rest.graph, DEFAULT_NODE_BUDGET);
        result = match report.outcome {
            Outcome::Found => Ok(None),
            Outcome::None => Ok(Some(x.to_vec())),
            Outcome::Inconclusive => Err(Error::Resource { what: "matching search nodes", cap: DEFAULT_NODE_BUDGET }),
        };
    });
    result
}

/// The `s`-graph on `V(H)` whose edges are the `s`-sets `S` with `H[S]` in the property.
pub fn property_graph(h: &Digraph, property: &Property, s: usize, cap: u64) -> Result<KGraph> {
    check_order(h, s)?;
    if crate::graph::binomial(h.n() as u64, s as u64) > cap as u128 {
        return Err(Error::Resource { what: "property graph s-sets", cap });
    }
    let mut edges: Vec<usize> = Vec::new();
    let mut err = None;
    for_each_subset(h.n(), s, |set| {
        if err.is_some() {
            return;
        }
        let sub = h.induced(set);
        match property.holds_on(&sub.graph, &sub.labels) {
            Ok(true) => edges.extend_from_slice(set),
            Ok(false) => {}
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(KGraph::from_sorted_flat(s, h.n(), edges))
}

fn check_order(h: &Digraph, s: usize) -> Result<()> {
    if s < h.m() || s > h.n() {
        return Err(Error::input(format!("s={s} must satisfy m={} <= s <= n={}", h.m(), h.n())));
    }
    Ok(())
}

/// Statistics from sampling random `s`-sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledPropertyGraph {
    pub s: usize,
    pub trials: u64,
    pub seed: u64,
    pub passed: u64,
    /// Per vertex: sampled sets containing it and how many of those passed.
    pub appearances: Vec<u64>,
    pub passes: Vec<u64>,
}

impl SampledPropertyGraph {
    pub fn fraction(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.passed as f64 / self.trials as f64
        }
    }

    /// Least per-vertex pass fraction among vertices that were sampled.
    pub fn min_vertex_fraction(&self) -> Option<f64> {
        self.appearances
            .iter()
            .zip(&self.passes)
            .filter(|(a, _)| **a > 0)
            .map(|(&a, &p)| p as f64 / a as f64)
            .min_by(f64::total_cmp)
    }
}

/// Samples `trials` uniform `s`-sets with a seeded generator.
pub fn property_graph_sampled(
    h: &Digraph,
    property: &Property,
    s: usize,
    trials: u64,
    seed: u64,
) -> Result<SampledPropertyGraph> {
    check_order(h, s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SampledPropertyGraph {
        s,
        trials,
        seed,
        passed: 0,
        appearances: vec![0; h.n()],
        passes: vec![0; h.n()],
    };
    for _ in 0..trials {
        let mut set = sample(&mut rng, h.n(), s).into_vec();
        set.sort_unstable();
        let sub = h.induced(&set);
        let ok = property.holds_on(&sub.graph, &sub.labels)?;
        out.passed += u64::from(ok);
        for &v in &set {
            out.appearances[v] += 1;
            out.passes[v] += u64::from(ok);
        }
    }
    Ok(out)
}

fn check_ground(parts: &Partition, n: usize) -> Result<()> {
    if parts.ground_size() != n || parts.parts().iter().flatten().any(|&v| v >= n) {
        return Err(Error::input("partition does not match the vertex set"));
    }
    Ok(())
}

/// `|U ∩ S| / |S| = |U| / |V|` for every part `U`; `n = |V|`.
pub fn is_proportional_set(set: &[usize], parts: &Partition, n: usize) -> Result<bool> {
    check_ground(parts, n)?;
    if set.is_empty() {
        return Ok(true);
    }
    Ok(parts.parts().iter().all(|u| {
        let inside = set.iter().filter(|v| u.binary_search(v).is_ok()).count();
        inside * n == u.len() * set.len()
    }))
}

/// `Σ_{v∈U} mult(v,e) / m = |U| / |V|` for every part `U`.
pub fn is_proportional_tuple(e: &[usize], parts: &Partition, n: usize) -> Result<bool> {
    check_ground(parts, n)?;
    Ok(parts.parts().iter().all(|u| {
        let inside = e.iter().filter(|v| u.binary_search(v).is_ok()).count();
        inside * n == u.len() * e.len()
    }))
}

/// Every edge of `H` is proportional (the vertex set is the ground set).
pub fn is_proportional_digraph(h: &Digraph, parts: &Partition) -> Result<bool> {
    check_ground(parts, h.n())?;
    for e in h.edges() {
        if !is_proportional_tuple(e, parts, h.n())? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homlift::hom_digraph;
    use crate::rational::{q, qi};

    fn lift(f: &KGraph, g: &KGraph) -> Digraph {
        hom_digraph(f, g).unwrap().digraph
    }

    fn k(n: usize) -> KGraph {
        KGraph::complete(2, n).unwrap()
    }

    #[test]
    fn space_examples() {
        let zero = qi(0);
        assert!(matches!(has_space(&lift(&k(2), &k(3)), &zero).unwrap(), SpaceVerdict::Holds(_)));
        let two_tri = KGraph::new(2, 6, [[0, 1], [1, 2], [0, 2], [3, 4], [4, 5], [3, 5]]).unwrap();
        assert!(matches!(has_space(&lift(&k(2), &two_tri), &zero).unwrap(), SpaceVerdict::Holds(_)));
        let lonely = Digraph::new(2, 4, [[0, 1]]).unwrap();
        match has_space(&lonely, &zero).unwrap() {
            SpaceVerdict::Fails(c) => assert!(c.size < qi(2)),
            other => panic!("{other:?}"),
        }
        assert!(has_space(&lonely, &q(3, 2)).is_err());
    }

    #[test]
    fn cover_examples() {
        let h = Digraph::new(2, 2, [[0, 0], [0, 1]]).unwrap();
        assert_eq!(is_covered(&h).unwrap(), vec![vec![0, 1], vec![0, 1]]);
        assert_eq!(is_covered(&Digraph::new(2, 1, [[0, 0]]).unwrap()), Err(0));
        let c4 = KGraph::new(2, 4, [[0, 1], [1, 2], [2, 3], [0, 3]]).unwrap();
        assert!(is_covered(&lift(&k(2), &c4)).is_ok());
    }

    #[test]
    fn robust_matching_examples() {
        assert_eq!(robust_matching_hypothesis(&lift(&k(2), &k(6)), DEFAULT_SUBSET_CAP).unwrap(), None);
        let c6 = KGraph::new(2, 6, (0..6).map(|i| [i, (i + 1) % 6])).unwrap();
        let x = robust_matching_hypothesis(&lift(&k(2), &c6), DEFAULT_SUBSET_CAP).unwrap().unwrap();
        // removing two vertices at even distance leaves odd paths
        assert_eq!((x[1] - x[0]) % 2, 0);
        let empty = Digraph::empty(2, 4).unwrap();
        assert!(robust_matching_hypothesis(&empty, DEFAULT_SUBSET_CAP).unwrap().is_some());
    }

    #[test]
    fn del_q_examples() {
        let h8 = lift(&k(2), &k(8));
        assert_eq!(del_q(&h8, &Property::Cov, 2, DEFAULT_SUBSET_CAP).unwrap(), None);
        let h3 = lift(&k(2), &k(3));
        let space = Property::Space(qi(0));
        assert_eq!(del_q(&h3, &space, 1, DEFAULT_SUBSET_CAP).unwrap(), None);
        assert!(del_q(&h3, &space, 2, DEFAULT_SUBSET_CAP).unwrap().is_some());
        for p in [Property::Div, Property::Cov, space] {
            assert_eq!(del_q(&h3, &p, 0, DEFAULT_SUBSET_CAP).unwrap().is_none(), p.holds(&h3).unwrap());
        }
    }

    #[test]
    fn property_graph_examples() {
        let h = lift(&k(2), &k(5));
        let all = Property::all(qi(0));
        let p3 = property_graph(&h, &all, 3, DEFAULT_SUBSET_CAP).unwrap();
        assert_eq!(p3, KGraph::complete(3, 5).unwrap());
        assert_eq!(p3.min_degree(1).unwrap(), 6);
        let p2 = property_graph(&h, &all, 2, DEFAULT_SUBSET_CAP).unwrap();
        assert_eq!(p2.edge_count(), 0);
        let sampled = property_graph_sampled(&h, &all, 3, 1000, 7).unwrap();
        assert_eq!(sampled.fraction(), 1.0);
        assert_eq!(sampled.min_vertex_fraction(), Some(1.0));
        assert!(property_graph(&h, &all, 1, DEFAULT_SUBSET_CAP).is_err());
    }

    #[test]
    fn partition_aware_properties_use_original_labels() {
        // On {0,1,2,3} with parts {0,1},{2,3}, the induced digraph on {1,2,3}
        // must see parts {1},{2,3}.
        let h = Digraph::new(2, 4, [[1, 2], [1, 3], [2, 3], [0, 2]]).unwrap();
        let parts = Partition::new(vec![vec![0, 1], vec![2, 3]], 4).unwrap();
        let sub = h.induced(&[1, 2, 3]);
        let prop = Property::DivParts(parts);
        assert!(prop.holds_on(&sub.graph, &sub.labels).unwrap());
    }

    #[test]
    fn proportional_examples() {
        let parts = Partition::new(vec![vec![0, 1], vec![2, 3]], 4).unwrap();
        assert!(is_proportional_set(&[0, 2], &parts, 4).unwrap());
        assert!(!is_proportional_tuple(&[0, 1], &parts, 4).unwrap());
        assert!(is_proportional_tuple(&[0, 2], &parts, 4).unwrap());
        let h = Digraph::new(2, 4, [[0, 2], [3, 1]]).unwrap();
        assert!(is_proportional_digraph(&h, &parts).unwrap());
    }

    #[test]
    fn menu_parsing() {
        let p = Property::parse_menu("spa,div,cov", &qi(0), None).unwrap();
        assert_eq!(p, Property::all(qi(0)));
        assert!(Property::parse_menu("div(U)", &qi(0), None).is_err());
        assert!(Property::parse_menu("nope", &qi(0), None).is_err());
        assert_eq!(p.to_string(), "spa(0/1)&div&cov");
    }
}
