//! Absorbers and the absorption pipeline.
//!
//! An `X`-absorber is a pair of matchings with `V(M1) = V(M2) ∪ X` and
//! `V(M2) ∩ X = ∅`: swapping `M2` for `M1` swallows `X`. The pipeline
//! reserves absorbers for anchor sets, matches the rest greedily, flips the
//! absorbers whose anchors were left over and repairs what remains locally.

use serde::{Deserialize, Serialize};

use super::exact::{solve_system, SetSystem};
use super::greedy::Greedy;
use super::{Outcome, SolveReport, DEFAULT_NODE_BUDGET};
use crate::error::{Error, Result};
use crate::graph::{Digraph, Matching};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Absorber {
    pub x: Vec<usize>,
    pub m1: Matching,
    pub m2: Matching,
}

impl Absorber {
    pub fn order(&self) -> usize {
        self.m2.covered()
    }

    /// Checks both matchings in `h` and the vertex-set identities.
    pub fn verify(&self, h: &Digraph) -> Result<()> {
        self.m1.validate(h)?;
        self.m2.validate(h)?;
        let v2 = self.m2.vertices();
        if v2.iter().any(|v| self.x.contains(v)) {
            return Err(Error::input("M2 meets X"));
        }
        let mut expected: Vec<usize> = v2.iter().chain(&self.x).copied().collect();
        expected.sort_unstable();
        if self.m1.vertices() != expected {
            return Err(Error::input("V(M1) differs from V(M2) ∪ X"));
        }
        Ok(())
    }
}

struct AbsorberSearch<'a> {
    sys: &'a SetSystem,
    forbidden: &'a [bool],
    q: usize,
    in_x: Vec<bool>,
    in_w: Vec<bool>,
    w_size: usize,
    m1_cov: Vec<bool>,
    m2_cov: Vec<bool>,
    m1: Vec<usize>,
    m2: Vec<usize>,
    nodes: u64,
    budget: u64,
}

enum Found {
    Yes(Vec<usize>, Vec<usize>),
    No,
    Budget,
}

impl AbsorberSearch<'_> {
    fn pending(&self) -> Option<(usize, bool)> {
        (0..self.sys.n).find_map(|v| {
            if (self.in_x[v] || self.in_w[v]) && !self.m1_cov[v] {
                Some((v, true))
            } else if self.in_w[v] && !self.m2_cov[v] {
                Some((v, false))
            } else {
                None
            }
        })
    }

    fn usable(&self, i: usize, first: bool) -> bool {
        self.sys.sets[i].iter().all(|&v| {
            !self.forbidden[v] && if first { !self.m1_cov[v] } else { !self.m2_cov[v] && !self.in_x[v] }
        })
    }

    fn added(&self, i: usize) -> usize {
        self.sys.sets[i].iter().filter(|&&v| !self.in_x[v] && !self.in_w[v]).count()
    }

    fn apply(&mut self, i: usize, first: bool, on: bool) -> Vec<usize> {
        let mut grown = Vec::new();
        for &v in &self.sys.sets[i] {
            if first {
                self.m1_cov[v] = on;
            } else {
                self.m2_cov[v] = on;
            }
        }
        if on {
            for &v in &self.sys.sets[i] {
                if !self.in_x[v] && !self.in_w[v] {
                    self.in_w[v] = true;
                    self.w_size += 1;
                    grown.push(v);
                }
            }
            if first {
                self.m1.push(i);
            } else {
                self.m2.push(i);
            }
        } else if first {
            self.m1.pop();
        } else {
            self.m2.pop();
        }
        grown
    }

    fn undo_growth(&mut self, grown: &[usize]) {
        for &v in grown {
            self.in_w[v] = false;
            self.w_size -= 1;
        }
    }

    /// Disjoint sets outside `X ∪ W` padding `W` up to order `q`.
    fn padding(&self) -> Option<Vec<usize>> {
        let mut need = (self.q - self.w_size) / self.sys.m;
        let mut used: Vec<bool> = (0..self.sys.n)
            .map(|v| self.in_x[v] || self.in_w[v] || self.forbidden[v])
            .collect();
        let mut pads = Vec::new();
        for (i, s) in self.sys.sets.iter().enumerate() {
            if need == 0 {
                break;
            }
            if s.iter().all(|&v| !used[v]) {
                for &v in s {
                    used[v] = true;
                }
                pads.push(i);
                need -= 1;
            }
        }
        (need == 0).then_some(pads)
    }

    fn search(&mut self) -> Found {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Found::Budget;
        }
        let Some((v, first)) = self.pending() else {
            return match self.padding() {
                Some(pads) => {
                    let mut m1 = self.m1.clone();
                    let mut m2 = self.m2.clone();
                    m1.extend(&pads);
                    m2.extend(&pads);
                    Found::Yes(m1, m2)
                }
                None => Found::No,
            };
        };
        let mut cands: Vec<(usize, usize)> = self.sys.incident[v]
            .iter()
            .copied()
            .filter(|&i| self.usable(i, first))
            .map(|i| (self.added(i), i))
            .filter(|&(a, _)| self.w_size + a <= self.q)
            .collect();
        cands.sort_unstable();
        for (_, i) in cands {
            let grown = self.apply(i, first, true);
            let r = self.search();
            self.apply(i, first, false);
            self.undo_growth(&grown);
            match r {
                Found::No => {}
                other => return other,
            }
        }
        Found::No
    }
}

fn absorber_in(
    sys: &SetSystem,
    forbidden: &[bool],
    x: &[usize],
    q: usize,
    budget: u64,
) -> SolveReport<Absorber> {
    let mut in_x = vec![false; sys.n];
    for &v in x {
        in_x[v] = true;
    }
    let mut s = AbsorberSearch {
        sys,
        forbidden,
        q,
        in_x,
        in_w: vec![false; sys.n],
        w_size: 0,
        m1_cov: vec![false; sys.n],
        m2_cov: vec![false; sys.n],
        m1: Vec::new(),
        m2: Vec::new(),
        nodes: 0,
        budget,
    };
    let r = s.search();
    let to_matching = |ids: &[usize]| Matching { edges: ids.iter().map(|&i| sys.rep[i].clone()).collect() };
    match r {
        Found::Yes(m1, m2) => SolveReport {
            outcome: Outcome::Found,
            witness: Some(Absorber { x: x.to_vec(), m1: to_matching(&m1), m2: to_matching(&m2) }),
            nodes: s.nodes,
        },
        Found::No => SolveReport { outcome: Outcome::None, witness: None, nodes: s.nodes },
        Found::Budget => SolveReport { outcome: Outcome::Inconclusive, witness: None, nodes: s.nodes },
    }
}

/// Searches for an `X`-absorber of order `q` (an `m`-set `X`, `m | q`).
pub fn find_absorber(h: &Digraph, x: &[usize], q: usize, budget: u64) -> Result<SolveReport<Absorber>> {
    let mut xs = x.to_vec();
    xs.sort_unstable();
    xs.dedup();
    if xs.len() != h.m() || xs.iter().any(|&v| v >= h.n()) {
        return Err(Error::input(format!("X must be a set of {} vertices of H", h.m())));
    }
    if q % h.m() != 0 {
        return Err(Error::input(format!("order q={q} must be divisible by m={}", h.m())));
    }
    let sys = SetSystem::new(h);
    let forbidden = vec![false; h.n()];
    Ok(absorber_in(&sys, &forbidden, &xs, q, budget))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorbParams {
    /// Number of anchor sets to reserve absorbers for.
    pub absorbers: usize,
    /// Absorber order; defaults to `2m`.
    pub q: Option<usize>,
    /// Leftover size above which local repair is skipped.
    pub leftover_cap: usize,
    pub seed: u64,
    /// Node budget for each absorber search and for the exact fallback.
    pub budget: u64,
}

impl Default for AbsorbParams {
    fn default() -> Self {
        AbsorbParams { absorbers: 4, q: None, leftover_cap: 64, seed: 0, budget: DEFAULT_NODE_BUDGET }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorbReport {
    pub report: SolveReport<Matching>,
    pub seed: u64,
    pub absorbers_reserved: usize,
    pub absorbers_flipped: usize,
    pub leftover_after_greedy: usize,
    pub repaired_sets: usize,
    /// The exact solver decided the instance after the pipeline stalled.
    pub used_fallback: bool,
}

/// Runs the absorption pipeline; any `found` matching has been verified.
pub fn absorption_solve(h: &Digraph, params: &AbsorbParams) -> Result<AbsorbReport> {
    let m = h.m();
    let n = h.n();
    let q = params.q.unwrap_or(2 * m);
    if q % m != 0 {
        return Err(Error::input(format!("absorber order q={q} must be divisible by m={m}")));
    }
    let mut out = AbsorbReport {
        report: SolveReport { outcome: Outcome::None, witness: None, nodes: 0 },
        seed: params.seed,
        absorbers_reserved: 0,
        absorbers_flipped: 0,
        leftover_after_greedy: 0,
        repaired_sets: 0,
        used_fallback: false,
    };
    if n % m != 0 {
        return Ok(out);
    }
    let sys = SetSystem::new(h);

    // (1) anchors from the least coverable vertices, absorbers kept disjoint
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (sys.incident[v].len(), v));
    let anchors: Vec<Vec<usize>> = order
        .chunks_exact(m)
        .take(params.absorbers)
        .map(|c| {
            let mut x = c.to_vec();
            x.sort_unstable();
            x
        })
        .collect();
    let mut reserved = vec![false; n];
    let mut absorbers: Vec<Absorber> = Vec::new();
    let mut nodes = 0u64;
    for (i, x) in anchors.iter().enumerate() {
        let mut forbidden = reserved.clone();
        for (j, other) in anchors.iter().enumerate() {
            if j != i {
                for &v in other {
                    forbidden[v] = true;
                }
            }
        }
        if x.iter().any(|&v| forbidden[v]) {
            continue;
        }
        let r = absorber_in(&sys, &forbidden, x, q, params.budget);
        nodes += r.nodes;
        if let Some(a) = r.witness {
            for &v in &a.m2.vertices() {
                reserved[v] = true;
            }
            absorbers.push(a);
        }
    }
    out.absorbers_reserved = absorbers.len();

    // (2) greedy on everything outside the absorbers
    let mut greedy = Greedy::new(&sys, &reserved);
    greedy.run_max_degree();
    let mut chosen: Vec<usize> = greedy.chosen.clone();
    let mut leftover = greedy.leftover();
    out.leftover_after_greedy = leftover.len();

    // (3) flip absorbers whose anchor set was left over
    let mut flipped = vec![false; absorbers.len()];
    for (i, a) in absorbers.iter().enumerate() {
        if a.x.iter().all(|v| leftover.binary_search(v).is_ok()) {
            flipped[i] = true;
            leftover.retain(|v| !a.x.contains(v));
        }
    }
    out.absorbers_flipped = flipped.iter().filter(|&&f| f).count();

    // (4) local repair: re-match a leftover m-set together with a few greedy edges
    if leftover.len() <= params.leftover_cap {
        while leftover.len() >= m {
            let y: Vec<usize> = leftover[..m].to_vec();
            match repair(&sys, &chosen, &y, params.budget) {
                Some((removed, added)) => {
                    chosen.retain(|i| !removed.contains(i));
                    chosen.extend(added);
                    leftover.retain(|v| !y.contains(v));
                    out.repaired_sets += 1;
                }
                None => break,
            }
        }
    }

    if leftover.is_empty() {
        let mut edges: Vec<Vec<usize>> = chosen.iter().map(|&i| sys.rep[i].clone()).collect();
        for (a, &f) in absorbers.iter().zip(&flipped) {
            edges.extend(if f { a.m1.edges.clone() } else { a.m2.edges.clone() });
        }
        let matching = Matching { edges };
        if matching.is_perfect_in(h) {
            out.report = SolveReport { outcome: Outcome::Found, witness: Some(matching), nodes };
            return Ok(out);
        }
    }

    // (5) exact fallback
    out.used_fallback = true;
    let mut exact = solve_system(&sys, params.budget);
    exact.nodes += nodes;
    if let Some(mt) = &exact.witness {
        if !mt.is_perfect_in(h) {
            return Err(Error::input("exact solver returned an invalid matching"));
        }
    }
    out.report = exact;
    Ok(out)
}

/// Tries `Y` plus up to three chosen sets near it; returns the chosen sets to
/// drop and the replacement sets.
fn repair(sys: &SetSystem, chosen: &[usize], y: &[usize], budget: u64) -> Option<(Vec<usize>, Vec<usize>)> {
    // chosen sets that share an edge of H with some vertex of Y
    let mut near: Vec<usize> = Vec::new();
    for &c in chosen {
        let touches = sys.sets[c].iter().any(|&u| {
            sys.incident[u].iter().any(|&j| sys.sets[j].iter().any(|v| y.contains(v)))
        });
        if touches {
            near.push(c);
        }
        if near.len() >= 12 {
            break;
        }
    }
    for r in 1..=3usize {
        let mut found = None;
        crate::graph::for_each_subset(near.len(), r, |idx| {
            if found.is_some() {
                return;
            }
            let mut verts: Vec<usize> = y.to_vec();
            for &i in idx {
                verts.extend(&sys.sets[near[i]]);
            }
            verts.sort_unstable();
            if let Some(sets) = match_inside(sys, &verts, budget) {
                found = Some((idx.iter().map(|&i| near[i]).collect::<Vec<_>>(), sets));
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// A perfect matching of the sets lying inside `verts`, as set indices.
fn match_inside(sys: &SetSystem, verts: &[usize], budget: u64) -> Option<Vec<usize>> {
    let mut local = vec![usize::MAX; sys.n];
    for (i, &v) in verts.iter().enumerate() {
        local[v] = i;
    }
    let mut ids: Vec<usize> = verts.iter().flat_map(|&v| sys.incident[v].iter().copied()).collect();
    ids.sort_unstable();
    ids.dedup();
    ids.retain(|&i| sys.sets[i].iter().all(|&v| local[v] != usize::MAX));
    let tuples: Vec<Vec<usize>> = ids.iter().map(|&i| sys.sets[i].iter().map(|&v| local[v]).collect()).collect();
    let sub = Digraph::new(sys.m, verts.len(), &tuples).ok()?;
    let sub_sys = SetSystem::new(&sub);
    let r = solve_system(&sub_sys, budget);
    let mt = r.witness?;
    Some(
        mt.edges
            .iter()
            .map(|e| {
                let mut s: Vec<usize> = e.iter().map(|&i| verts[i]).collect();
                s.sort_unstable();
                sys.sets.binary_search(&s).expect("set comes from the system")
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::KGraph;
    use crate::homlift::hom_digraph;

    fn lift(f: &KGraph, g: &KGraph) -> Digraph {
        hom_digraph(f, g).unwrap().digraph
    }

    fn k(n: usize) -> KGraph {
        KGraph::complete(2, n).unwrap()
    }

    #[test]
    fn absorber_examples() {
        let h = lift(&k(2), &k(4));
        let r = find_absorber(&h, &[0, 1], 2, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(r.outcome, Outcome::Found);
        let a = r.witness.unwrap();
        a.verify(&h).unwrap();
        assert_eq!(a.order(), 2);
        assert_eq!(a.m1.edges, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(a.m2.edges, vec![vec![2, 3]]);

        let q0 = find_absorber(&h, &[0, 1], 0, DEFAULT_NODE_BUDGET).unwrap().witness.unwrap();
        assert!(q0.m2.edges.is_empty());
        q0.verify(&h).unwrap();

        // vertex 2 lies in no edge
        let h = Digraph::new(2, 4, [[0, 1], [1, 3], [0, 3]]).unwrap();
        assert_eq!(find_absorber(&h, &[0, 2], 2, DEFAULT_NODE_BUDGET).unwrap().outcome, Outcome::None);
        assert!(find_absorber(&h, &[0], 2, DEFAULT_NODE_BUDGET).is_err());
        assert!(find_absorber(&h, &[0, 1], 3, DEFAULT_NODE_BUDGET).is_err());
    }

    #[test]
    fn non_trivial_absorber() {
        // On a 6-cycle, X = {0,3} is not an edge: M1 must route through W.
        let c6 = KGraph::new(2, 6, (0..6).map(|i| [i, (i + 1) % 6])).unwrap();
        let h = lift(&k(2), &c6);
        let r = find_absorber(&h, &[0, 3], 4, DEFAULT_NODE_BUDGET).unwrap();
        let a = r.witness.unwrap();
        a.verify(&h).unwrap();
        assert_eq!(a.order(), 4);
    }

    #[test]
    fn pipeline_on_cliques() {
        for t in [2, 5, 8] {
            let h = lift(&k(3), &k(3 * t));
            let r = absorption_solve(&h, &AbsorbParams::default()).unwrap();
            assert_eq!(r.report.outcome, Outcome::Found, "t={t}");
            assert!(r.report.witness.unwrap().is_perfect_in(&h));
        }
    }

    #[test]
    fn pipeline_is_sound_on_barrier() {
        let mut edges = Vec::new();
        for a in 0..5 {
            for b in a + 1..5 {
                edges.push([a, b]);
            }
        }
        for a in 5..8 {
            for b in a + 1..8 {
                edges.push([a, b]);
            }
        }
        let h = lift(&k(2), &KGraph::new(2, 8, edges).unwrap());
        let r = absorption_solve(&h, &AbsorbParams::default()).unwrap();
        assert_ne!(r.report.outcome, Outcome::Found);
    }
}
