//! Exhaustive perfect matching and tiling search.

use super::{Outcome, SolveReport, DEFAULT_NODE_BUDGET};
use crate::error::{Error, Result};
use crate::graph::{Digraph, KGraph, Matching, Tiling};

/// The one-to-one edges of a digraph collapsed to vertex sets. `count[i]`
/// tuples share the set `sets[i]`; `rep[i]` is the least of them.
#[derive(Clone, Debug)]
pub(crate) struct SetSystem {
    pub n: usize,
    pub m: usize,
    pub sets: Vec<Vec<usize>>,
    pub rep: Vec<Vec<usize>>,
    pub count: Vec<u64>,
    /// Sets whose least vertex is `v`.
    pub by_min: Vec<Vec<usize>>,
    /// Sets containing `v`.
    pub incident: Vec<Vec<usize>>,
}

impl SetSystem {
    pub fn new(h: &Digraph) -> Self {
        let mut keyed: Vec<(Vec<usize>, Vec<usize>)> = h
            .one_to_one_edges()
            .map(|e| {
                let mut s = e.to_vec();
                s.sort_unstable();
                (s, e.to_vec())
            })
            .collect();
        keyed.sort();
        let (mut sets, mut rep, mut count): (Vec<Vec<usize>>, Vec<Vec<usize>>, Vec<u64>) =
            (Vec::new(), Vec::new(), Vec::new());
        for (s, e) in keyed {
            if sets.last() == Some(&s) {
                *count.last_mut().expect("non-empty") += 1;
            } else {
                sets.push(s);
                rep.push(e);
                count.push(1);
            }
        }
        let mut by_min = vec![Vec::new(); h.n()];
        let mut incident = vec![Vec::new(); h.n()];
        for (i, s) in sets.iter().enumerate() {
            by_min[s[0]].push(i);
            for &v in s {
                incident[v].push(i);
            }
        }
        SetSystem { n: h.n(), m: h.m(), sets, rep, count, by_min, incident }
    }

    fn free(&self, i: usize, covered: &[bool]) -> bool {
        self.sets[i].iter().all(|&v| !covered[v])
    }
}

struct MatchSearch<'a> {
    sys: &'a SetSystem,
    covered: Vec<bool>,
    chosen: Vec<usize>,
    nodes: u64,
    budget: u64,
}

enum Step {
    Done,
    Exhausted,
    OutOfBudget,
}

impl MatchSearch<'_> {
    fn next_uncovered(&self, from: usize) -> Option<usize> {
        (from..self.sys.n).find(|&v| !self.covered[v])
    }

    /// Free sets with least vertex `v`.
    fn options(&self, v: usize) -> Vec<usize> {
        self.sys.by_min[v]
            .iter()
            .copied()
            .filter(|&i| self.sys.free(i, &self.covered))
            .collect()
    }

    /// Candidates for vertex `v` ordered by how many ways remain to cover the
    /// next uncovered vertex afterwards; dead-end choices are dropped.
    fn ordered_options(&mut self, v: usize) -> Vec<usize> {
        let mut scored: Vec<(usize, usize)> = Vec::new();
        for i in self.options(v) {
            self.set(i, true);
            let score = self.next_uncovered(v).map(|w| self.options(w).len());
            self.set(i, false);
            match score {
                None => scored.push((0, i)),
                Some(0) => {}
                Some(c) => scored.push((c, i)),
            }
        }
        // set indices follow lexicographic order of the sets
        scored.sort_unstable();
        scored.into_iter().map(|(_, i)| i).collect()
    }

    fn set(&mut self, i: usize, value: bool) {
        for &v in &self.sys.sets[i] {
            self.covered[v] = value;
        }
    }

    fn find(&mut self, from: usize) -> Step {
        let Some(v) = self.next_uncovered(from) else {
            return Step::Done;
        };
        self.nodes += 1;
        if self.nodes > self.budget {
            return Step::OutOfBudget;
        }
        for i in self.ordered_options(v) {
            self.set(i, true);
            self.chosen.push(i);
            match self.find(v + 1) {
                Step::Exhausted => {}
                other => return other,
            }
            self.chosen.pop();
            self.set(i, false);
        }
        Step::Exhausted
    }

    fn count(&mut self, from: usize, cap: u128) -> Result<u128> {
        let Some(v) = self.next_uncovered(from) else {
            return Ok(1);
        };
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Resource { what: "matching search nodes", cap: self.budget });
        }
        let mut total: u128 = 0;
        for i in self.options(v) {
            self.set(i, true);
            let sub = self.count(v + 1, cap);
            self.set(i, false);
            total = total
                .checked_add(sub? * self.sys.count[i] as u128)
                .ok_or(Error::Overflow("matching count"))?;
            if total > cap {
                return Err(Error::Resource { what: "perfect matching count", cap: cap.min(u64::MAX as u128) as u64 });
            }
        }
        Ok(total)
    }
}

pub fn exact_perfect_matching(h: &Digraph) -> SolveReport<Matching> {
    exact_perfect_matching_with(h, DEFAULT_NODE_BUDGET)
}

/// Depth-first exact cover over one-to-one edges, branching on the lowest
/// uncovered vertex. `None` outcomes are proofs of non-existence.
pub fn exact_perfect_matching_with(h: &Digraph, budget: u64) -> SolveReport<Matching> {
    if h.n() % h.m() != 0 {
        return SolveReport { outcome: Outcome::None, witness: None, nodes: 0 };
    }
    let sys = SetSystem::new(h);
    solve_system(&sys, budget)
}

pub(crate) fn solve_system(sys: &SetSystem, budget: u64) -> SolveReport<Matching> {
    let mut search = MatchSearch { sys, covered: vec![false; sys.n], chosen: Vec::new(), nodes: 0, budget };
    let step = search.find(0);
    let nodes = search.nodes;
    match step {
        Step::Done => SolveReport {
            outcome: Outcome::Found,
            witness: Some(Matching { edges: search.chosen.iter().map(|&i| sys.rep[i].clone()).collect() }),
            nodes,
        },
        Step::Exhausted => SolveReport { outcome: Outcome::None, witness: None, nodes },
        Step::OutOfBudget => SolveReport { outcome: Outcome::Inconclusive, witness: None, nodes },
    }
}

/// Number of perfect matchings (as sets of edges), failing past `cap`.
pub fn count_perfect_matchings(h: &Digraph, cap: u128) -> Result<u128> {
    if h.n() % h.m() != 0 {
        return Ok(0);
    }
    let sys = SetSystem::new(h);
    let mut search = MatchSearch {
        sys: &sys,
        covered: vec![false; sys.n],
        chosen: Vec::new(),
        nodes: 0,
        budget: DEFAULT_NODE_BUDGET,
    };
    search.count(0, cap)
}

/// Embedding-level search for a perfect `F`-tiling of `G`, independent of
/// the homomorphism digraph.
pub fn exact_tiling(f: &KGraph, g: &KGraph) -> Result<SolveReport<Tiling>> {
    exact_tiling_with(f, g, DEFAULT_NODE_BUDGET)
}

pub fn exact_tiling_with(f: &KGraph, g: &KGraph, budget: u64) -> Result<SolveReport<Tiling>> {
    if f.k() != g.k() {
        return Err(Error::input("tile and host uniformities differ"));
    }
    if f.n() == 0 {
        return Err(Error::input("the tile needs at least one vertex"));
    }
    if g.n() % f.n() != 0 {
        return Ok(SolveReport { outcome: Outcome::None, witness: None, nodes: 0 });
    }
    let mut search = TileSearch {
        f,
        g,
        covered: vec![false; g.n()],
        chosen: Vec::new(),
        nodes: 0,
        budget,
    };
    let step = search.find(0);
    let nodes = search.nodes;
    Ok(match step {
        Step::Done => SolveReport {
            outcome: Outcome::Found,
            witness: Some(Tiling { embeddings: search.chosen }),
            nodes,
        },
        Step::Exhausted => SolveReport { outcome: Outcome::None, witness: None, nodes },
        Step::OutOfBudget => SolveReport { outcome: Outcome::Inconclusive, witness: None, nodes },
    })
}

struct TileSearch<'a> {
    f: &'a KGraph,
    g: &'a KGraph,
    covered: Vec<bool>,
    chosen: Vec<Vec<usize>>,
    nodes: u64,
    budget: u64,
}

impl TileSearch<'_> {
    /// One embedding per image set, for copies through `v` avoiding covered
    /// vertices and everything below `v`.
    fn copies_through(&self, v: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
        let m = self.f.n();
        let mut found: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for anchor in 0..m {
            let mut phi = vec![usize::MAX; m];
            phi[anchor] = v;
            self.embed(0, anchor, &mut phi, &mut found);
        }
        found.sort();
        found.dedup_by(|a, b| a.0 == b.0);
        found
    }

    fn embed(&self, w: usize, anchor: usize, phi: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, Vec<usize>)>) {
        let m = self.f.n();
        if w == m {
            let mut set = phi.clone();
            set.sort_unstable();
            out.push((set, phi.clone()));
            return;
        }
        if w == anchor {
            if self.edges_ok(w, phi) {
                self.embed(w + 1, anchor, phi, out);
            }
            return;
        }
        let v = phi[anchor];
        for x in v + 1..self.g.n() {
            if self.covered[x] || phi[..w].contains(&x) || phi[w + 1..].contains(&x) {
                continue;
            }
            phi[w] = x;
            if self.edges_ok(w, phi) {
                self.embed(w + 1, anchor, phi, out);
            }
            phi[w] = usize::MAX;
        }
    }

    /// Tile edges through `w` whose other vertices are placed must map to edges.
    fn edges_ok(&self, w: usize, phi: &[usize]) -> bool {
        let mut img = Vec::with_capacity(self.f.k());
        self.f.edges().filter(|e| e.contains(&w)).all(|e| {
            if e.iter().any(|&t| phi[t] == usize::MAX) {
                return true;
            }
            img.clear();
            img.extend(e.iter().map(|&t| phi[t]));
            self.g.contains(&img)
        })
    }

    fn find(&mut self, from: usize) -> Step {
        let Some(v) = (from..self.g.n()).find(|&v| !self.covered[v]) else {
            return Step::Done;
        };
        self.nodes += 1;
        if self.nodes > self.budget {
            return Step::OutOfBudget;
        }
        for (set, phi) in self.copies_through(v) {
            for &x in &set {
                self.covered[x] = true;
            }
            self.chosen.push(phi);
            match self.find(v + 1) {
                Step::Exhausted => {}
                other => return other,
            }
            self.chosen.pop();
            for &x in &set {
                self.covered[x] = false;
            }
        }
        Step::Exhausted
    }
}
