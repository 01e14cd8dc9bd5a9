//! Uniform hypergraphs, directed hypergraphs with repeated entries, and the
//! structural operations on them (degrees, induced subgraphs, links, clique
//! connectivity).
//!
//! Vertices are dense indices `0..n`. Edges are kept in one flat buffer,
//! sorted lexicographically, so iteration order and file output are
//! deterministic and membership is a binary search.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of cliques enumerated by [`KGraph::clique_connectivity`].
pub const DEFAULT_CLIQUE_CAP: u64 = 10_000_000;

/// Flat, sorted, deduplicated list of fixed-width vertex tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct EdgeList {
    width: usize,
    flat: Vec<usize>,
}

impl EdgeList {
    fn canonical(width: usize, flat: Vec<usize>) -> Self {
        if width == 0 {
            return EdgeList { width, flat };
        }
        let count = flat.len() / width;
        let chunk = |i: usize| &flat[i * width..(i + 1) * width];
        let sorted = (1..count).all(|i| chunk(i - 1) < chunk(i));
        if sorted {
            return EdgeList { width, flat };
        }
        let mut order: Vec<usize> = (0..count).collect();
        order.sort_unstable_by(|&a, &b| chunk(a).cmp(chunk(b)));
        order.dedup_by(|a, b| chunk(*a) == chunk(*b));
        let mut out = Vec::with_capacity(order.len() * width);
        for i in order {
            out.extend_from_slice(chunk(i));
        }
        EdgeList { width, flat: out }
    }

    fn len(&self) -> usize {
        if self.width == 0 {
            0
        } else {
            self.flat.len() / self.width
        }
    }

    fn get(&self, i: usize) -> &[usize] {
        &self.flat[i * self.width..(i + 1) * self.width]
    }

    fn iter(&self) -> std::slice::ChunksExact<'_, usize> {
        self.flat.chunks_exact(self.width.max(1))
    }

    fn position(&self, e: &[usize]) -> Option<usize> {
        if e.len() != self.width {
            return None;
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(e) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

/// A `k`-uniform hypergraph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KGraph {
    k: usize,
    n: usize,
    edges: EdgeList,
}

impl KGraph {
    /// Builds a `k`-graph. Each edge is sorted; duplicate edges collapse.
    pub fn new<I, E>(k: usize, n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        if k == 0 {
            return Err(Error::input("uniformity k must be at least 1"));
        }
        let mut flat = Vec::new();
        let mut buf = Vec::with_capacity(k);
        for e in edges {
            let e = e.as_ref();
            if e.len() != k {
                return Err(Error::input(format!("edge {e:?} does not have {k} vertices")));
            }
            buf.clear();
            buf.extend_from_slice(e);
            buf.sort_unstable();
            if buf.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::input(format!("edge {e:?} repeats a vertex")));
            }
            if let Some(&v) = buf.last() {
                if v >= n {
                    return Err(Error::input(format!("edge {e:?} has a vertex outside 0..{n}")));
                }
            }
            flat.extend_from_slice(&buf);
        }
        Ok(KGraph { k, n, edges: EdgeList::canonical(k, flat) })
    }

    pub fn empty(k: usize, n: usize) -> Result<Self> {
        Self::new(k, n, std::iter::empty::<Vec<usize>>())
    }

    /// The complete `k`-graph on `n` vertices.
    pub fn complete(k: usize, n: usize) -> Result<Self> {
        let mut flat = Vec::new();
        for_each_subset(n, k, |s| flat.extend_from_slice(s));
        if k == 0 {
            return Err(Error::input("uniformity k must be at least 1"));
        }
        Ok(KGraph { k, n, edges: EdgeList { width: k, flat } })
    }

    /// Builds from edges already known to be sorted, distinct and in range.
    pub(crate) fn from_sorted_flat(k: usize, n: usize, flat: Vec<usize>) -> Self {
        KGraph { k, n, edges: EdgeList::canonical(k, flat) }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        self.edges.iter()
    }

    pub fn edge(&self, i: usize) -> &[usize] {
        self.edges.get(i)
    }

    /// Membership for an edge given in ascending order.
    pub fn contains_sorted(&self, e: &[usize]) -> bool {
        self.edges.position(e).is_some()
    }

    /// Membership for an arbitrary vertex list; repeated vertices never form an edge.
    pub fn contains(&self, e: &[usize]) -> bool {
        if e.len() != self.k {
            return false;
        }
        let mut s = e.to_vec();
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        self.contains_sorted(&s)
    }

    /// Adjacency lists of the 2-section (vertices sharing an edge).
    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in self.edges() {
            for (i, &u) in e.iter().enumerate() {
                for &w in &e[i + 1..] {
                    adj[u].push(w);
                    adj[w].push(u);
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Vertex degrees (number of edges through each vertex).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in self.edges() {
            for &v in e {
                deg[v] += 1;
            }
        }
        deg
    }

    /// Minimum `d`-degree: the least number of edges containing a `d`-set.
    /// For `d = 0` this is the number of edges.
    pub fn min_degree(&self, d: usize) -> Result<usize> {
        if d >= self.k {
            return Err(Error::input(format!("degree order d={d} must be below k={}", self.k)));
        }
        if self.n < self.k {
            return Err(Error::input("min_degree needs n >= k"));
        }
        match d {
            0 => Ok(self.edge_count()),
            1 => Ok(self.degrees().into_iter().min().unwrap_or(0)),
            _ => {
                let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
                for e in self.edges() {
                    for_each_subset(e.len(), d, |idx| {
                        let key: Vec<usize> = idx.iter().map(|&i| e[i]).collect();
                        *counts.entry(key).or_insert(0) += 1;
                    });
                }
                if (counts.len() as u128) < binomial(self.n as u64, d as u64) {
                    Ok(0)
                } else {
                    Ok(counts.values().copied().min().unwrap_or(0))
                }
            }
        }
    }

    /// The `(k - |D|)`-graph on `V \ D` whose edges complete `D` to an edge.
    pub fn link_graph(&self, set: &[usize]) -> Result<Labeled<KGraph>> {
        let mut d = set.to_vec();
        d.sort_unstable();
        d.dedup();
        if d.len() >= self.k {
            return Err(Error::input(format!(
                "link set of size {} must be smaller than k={}",
                d.len(),
                self.k
            )));
        }
        if d.iter().any(|&v| v >= self.n) {
            return Err(Error::input("link set has a vertex outside the graph"));
        }
        let labels: Vec<usize> = (0..self.n).filter(|v| d.binary_search(v).is_err()).collect();
        let mut new_label = vec![usize::MAX; self.n];
        for (i, &v) in labels.iter().enumerate() {
            new_label[v] = i;
        }
        let width = self.k - d.len();
        let mut flat = Vec::new();
        for e in self.edges() {
            if d.iter().all(|v| e.binary_search(v).is_ok()) {
                flat.extend(e.iter().filter(|v| d.binary_search(v).is_err()).map(|&v| new_label[v]));
            }
        }
        Ok(Labeled {
            graph: KGraph::from_sorted_flat(width, labels.len(), flat),
            labels,
        })
    }

    /// Components of the 2-graph that joins any two vertices lying in a
    /// common `l`-clique (a set all of whose `k`-subsets are edges).
    /// Vertices in no `l`-clique are singleton components.
    pub fn clique_connectivity(&self, l: usize, cap: u64) -> Result<Vec<Vec<usize>>> {
        if l < self.k {
            return Err(Error::input(format!("clique order {l} must be at least k={}", self.k)));
        }
        let mut dsu = DisjointSets::new(self.n);
        let mut found = 0u64;
        let mut clique = Vec::with_capacity(l);
        let candidates: Vec<usize> = (0..self.n).collect();
        self.extend_cliques(l, &mut clique, &candidates, &mut |c: &[usize]| {
            found += 1;
            if found > cap {
                return Err(Error::Resource { what: "clique enumeration", cap });
            }
            for w in c.windows(2) {
                dsu.union(w[0], w[1]);
            }
            Ok(())
        })?;
        Ok(dsu.components())
    }

    fn extend_cliques(
        &self,
        l: usize,
        clique: &mut Vec<usize>,
        candidates: &[usize],
        visit: &mut dyn FnMut(&[usize]) -> Result<()>,
    ) -> Result<()> {
        if clique.len() == l {
            return visit(clique);
        }
        for (i, &v) in candidates.iter().enumerate() {
            if candidates.len() - i < l - clique.len() {
                break;
            }
            clique.push(v);
            let next: Vec<usize> = candidates[i + 1..]
                .iter()
                .copied()
                .filter(|&u| self.extends_clique(clique, u))
                .collect();
            self.extend_cliques(l, clique, &next, visit)?;
            clique.pop();
        }
        Ok(())
    }

    /// Whether every `k`-subset of `clique + {u}` containing `u` is an edge,
    /// looking only at subsets that could already be checked (size >= k - 1).
    fn extends_clique(&self, clique: &[usize], u: usize) -> bool {
        if clique.len() + 1 < self.k {
            return true;
        }
        let mut ok = true;
        let mut buf = Vec::with_capacity(self.k);
        for_each_subset(clique.len(), self.k - 1, |idx| {
            if !ok {
                return;
            }
            buf.clear();
            buf.extend(idx.iter().map(|&i| clique[i]));
            buf.push(u);
            buf.sort_unstable();
            ok = self.contains_sorted(&buf);
        });
        ok
    }
}

/// An `m`-uniform directed hypergraph: edges are length-`m` tuples that may repeat vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Digraph {
    m: usize,
    n: usize,
    edges: EdgeList,
}

impl Digraph {
    pub fn new<I, E>(m: usize, n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        if m == 0 {
            return Err(Error::input("uniformity m must be at least 1"));
        }
        let mut flat = Vec::new();
        for e in edges {
            let e = e.as_ref();
            if e.len() != m {
                return Err(Error::input(format!("tuple {e:?} does not have length {m}")));
            }
            if e.iter().any(|&v| v >= n) {
                return Err(Error::input(format!("tuple {e:?} has a vertex outside 0..{n}")));
            }
            flat.extend_from_slice(e);
        }
        Ok(Digraph { m, n, edges: EdgeList::canonical(m, flat) })
    }

    pub fn empty(m: usize, n: usize) -> Result<Self> {
        Self::new(m, n, std::iter::empty::<Vec<usize>>())
    }

    pub(crate) fn from_flat(m: usize, n: usize, flat: Vec<usize>) -> Self {
        Digraph { m, n, edges: EdgeList::canonical(m, flat) }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        self.edges.iter()
    }

    pub fn edge(&self, i: usize) -> &[usize] {
        self.edges.get(i)
    }

    pub fn contains(&self, e: &[usize]) -> bool {
        self.edges.position(e).is_some()
    }

    pub fn position(&self, e: &[usize]) -> Option<usize> {
        self.edges.position(e)
    }

    /// Edges with no repeated vertex.
    pub fn one_to_one_edges(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.edges().filter(|e| is_one_to_one(e))
    }

    /// Sub-digraph on `set` keeping exactly the tuples with all entries in `set`.
    /// Vertices are relabelled `0..|set|` in ascending order of their old labels.
    pub fn induced(&self, set: &[usize]) -> Labeled<Digraph> {
        let mut labels: Vec<usize> = set.iter().copied().filter(|&v| v < self.n).collect();
        labels.sort_unstable();
        labels.dedup();
        let mut new_label = vec![usize::MAX; self.n];
        for (i, &v) in labels.iter().enumerate() {
            new_label[v] = i;
        }
        let mut flat = Vec::new();
        for e in self.edges() {
            if e.iter().all(|&v| new_label[v] != usize::MAX) {
                flat.extend(e.iter().map(|&v| new_label[v]));
            }
        }
        Labeled { graph: Digraph::from_flat(self.m, labels.len(), flat), labels }
    }

    /// `H - X`: induced on the complement of `removed`.
    pub fn delete(&self, removed: &[usize]) -> Labeled<Digraph> {
        let keep: Vec<usize> = (0..self.n).filter(|v| !removed.contains(v)).collect();
        self.induced(&keep)
    }
}

/// A structure relabelled to `0..len`, with `labels[new] = old`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeled<T> {
    pub graph: T,
    pub labels: Vec<usize>,
}

impl<T> Labeled<T> {
    pub fn original(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn original_tuple(&self, e: &[usize]) -> Vec<usize> {
        e.iter().map(|&v| self.labels[v]).collect()
    }
}

/// A partition of a ground set into non-empty, pairwise disjoint parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<Vec<usize>>,
}

impl Partition {
    /// Validates that `parts` partition `0..n`.
    pub fn new(parts: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let ground: Vec<usize> = (0..n).collect();
        Self::on(parts, &ground)
    }

    /// Validates that `parts` partition the given ground set.
    pub fn on(parts: Vec<Vec<usize>>, ground: &[usize]) -> Result<Self> {
        let mut seen: Vec<usize> = Vec::new();
        let mut parts = parts;
        for p in &mut parts {
            if p.is_empty() {
                return Err(Error::input("partition has an empty part"));
            }
            p.sort_unstable();
            seen.extend_from_slice(p);
        }
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input("partition parts overlap"));
        }
        let mut g = ground.to_vec();
        g.sort_unstable();
        g.dedup();
        if seen != g {
            return Err(Error::input("partition parts do not cover the ground set"));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn part_of(&self, v: usize) -> Option<usize> {
        self.parts.iter().position(|p| p.binary_search(&v).is_ok())
    }

    pub fn ground_size(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    /// Intersects each part with `labels` and relabels through `labels` positions.
    /// Empty intersections are dropped.
    pub fn restrict(&self, labels: &[usize]) -> Partition {
        let parts = self
            .parts
            .iter()
            .map(|p| {
                labels
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| p.binary_search(v).is_ok())
                    .map(|(i, _)| i)
                    .collect::<Vec<_>>()
            })
            .filter(|p| !p.is_empty())
            .collect();
        Partition { parts }
    }
}

/// A matching: one-to-one edges of a digraph with no vertex covered twice.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub edges: Vec<Vec<usize>>,
}

impl Matching {
    pub fn vertices(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self.edges.iter().flatten().copied().collect();
        vs.sort_unstable();
        vs
    }

    pub fn covered(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Checks edge membership, one-to-one tuples and disjointness.
    pub fn validate(&self, h: &Digraph) -> Result<()> {
        let mut used = vec![false; h.n()];
        for e in &self.edges {
            if !h.contains(e) {
                return Err(Error::input(format!("{e:?} is not an edge")));
            }
            if !is_one_to_one(e) {
                return Err(Error::input(format!("{e:?} repeats a vertex")));
            }
            for &v in e {
                if std::mem::replace(&mut used[v], true) {
                    return Err(Error::input(format!("vertex {v} covered twice")));
                }
            }
        }
        Ok(())
    }

    pub fn is_perfect_in(&self, h: &Digraph) -> bool {
        self.validate(h).is_ok() && self.covered() == h.n()
    }
}

/// Vertex-disjoint embeddings of a tile `F` into a host `G`.
/// `embeddings[i][w]` is the image of tile vertex `w` in copy `i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tiling {
    pub embeddings: Vec<Vec<usize>>,
}

impl Tiling {
    pub fn validate(&self, tile: &KGraph, host: &KGraph) -> Result<()> {
        let mut used = vec![false; host.n()];
        for phi in &self.embeddings {
            if phi.len() != tile.n() {
                return Err(Error::input("embedding has the wrong number of vertices"));
            }
            for &v in phi {
                if v >= host.n() || std::mem::replace(&mut used[v], true) {
                    return Err(Error::input(format!("embedding reuses or leaves the host at {v}")));
                }
            }
            let mut img = Vec::with_capacity(tile.k());
            for e in tile.edges() {
                img.clear();
                img.extend(e.iter().map(|&w| phi[w]));
                if !host.contains(&img) {
                    return Err(Error::input(format!("tile edge {e:?} maps to non-edge {img:?}")));
                }
            }
        }
        Ok(())
    }

    pub fn is_perfect_in(&self, tile: &KGraph, host: &KGraph) -> bool {
        self.validate(tile, host).is_ok() && self.embeddings.len() * tile.n() == host.n()
    }
}

/// Number of positions of `e` equal to `v`.
pub fn multiplicity(v: usize, e: &[usize]) -> usize {
    e.iter().filter(|&&x| x == v).count()
}

/// The vector whose `v`-th entry is the multiplicity of `v` in `e`.
pub fn indicator_vector(e: &[usize], n: usize) -> Result<Vec<i64>> {
    let mut out = vec![0i64; n];
    for &v in e {
        if v >= n {
            return Err(Error::input(format!("vertex {v} outside 0..{n}")));
        }
        out[v] += 1;
    }
    Ok(out)
}

pub fn is_one_to_one(e: &[usize]) -> bool {
    e.iter().enumerate().all(|(i, v)| !e[i + 1..].contains(v))
}

/// Calls `f` with every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Components sorted internally and ordered by their least vertex.
    pub(crate) fn components(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 0..n {
            let r = self.find(v);
            by_root[r].push(v);
        }
        by_root.into_iter().filter(|c| !c.is_empty()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> KGraph {
        KGraph::new(2, n, (0..n).map(|i| [i, (i + 1) % n])).unwrap()
    }

    #[test]
    fn multiplicity_counts_positions() {
        assert_eq!(multiplicity(0, &[0, 1, 0]), 2);
        assert_eq!(multiplicity(2, &[0, 1, 0]), 0);
        assert_eq!(multiplicity(1, &[1]), 1);
    }

    #[test]
    fn indicator_vectors() {
        assert_eq!(indicator_vector(&[0, 1, 0], 3).unwrap(), vec![2, 1, 0]);
        assert_eq!(indicator_vector(&[2], 3).unwrap(), vec![0, 0, 1]);
        assert_eq!(indicator_vector(&[0, 1, 2, 1], 4).unwrap(), vec![1, 2, 1, 0]);
        assert!(indicator_vector(&[3], 3).is_err());
    }

    #[test]
    fn rejects_malformed_edges() {
        assert!(KGraph::new(2, 3, [[0, 0]]).is_err());
        assert!(KGraph::new(2, 3, [[0, 3]]).is_err());
        assert!(Digraph::new(2, 2, [[0, 2]]).is_err());
        assert!(Digraph::new(2, 2, [vec![0]]).is_err());
        // duplicates collapse
        let g = KGraph::new(2, 3, [[0, 1], [1, 0]]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn induced_examples() {
        let h = Digraph::new(2, 3, [[0, 1], [1, 2]]).unwrap();
        let sub = h.induced(&[0, 1]);
        assert_eq!(sub.graph.edges().collect::<Vec<_>>(), vec![&[0, 1][..]]);
        let all = h.induced(&[0, 1, 2]);
        assert_eq!(all.graph, h);
        let none = h.induced(&[]);
        assert_eq!(none.graph.n(), 0);
        assert_eq!(none.graph.edge_count(), 0);
    }

    #[test]
    fn min_degree_examples() {
        let k4 = KGraph::complete(2, 4).unwrap();
        assert_eq!(k4.min_degree(1).unwrap(), 3);
        assert_eq!(k4.min_degree(0).unwrap(), 6);
        let minus = KGraph::new(2, 4, k4.edges().filter(|e| *e != [0, 1])).unwrap();
        assert_eq!(minus.min_degree(1).unwrap(), 2);
        assert!(k4.min_degree(2).is_err());
        let k5_3 = KGraph::complete(3, 5).unwrap();
        assert_eq!(k5_3.min_degree(2).unwrap(), 3);
        let sparse = KGraph::new(3, 5, [[0, 1, 2]]).unwrap();
        assert_eq!(sparse.min_degree(2).unwrap(), 0);
    }

    #[test]
    fn link_graph_examples() {
        let k4 = KGraph::complete(2, 4).unwrap();
        let link = k4.link_graph(&[0]).unwrap();
        assert_eq!(link.graph.k(), 1);
        let edges: Vec<usize> = link.graph.edges().map(|e| link.original(e[0])).collect();
        assert_eq!(edges, vec![1, 2, 3]);

        let k4_3 = KGraph::complete(3, 4).unwrap();
        let link = k4_3.link_graph(&[0]).unwrap();
        assert_eq!(link.labels, vec![1, 2, 3]);
        assert_eq!(link.graph, KGraph::complete(2, 3).unwrap());

        let same = k4.link_graph(&[]).unwrap();
        assert_eq!(same.graph, k4);
        assert!(k4.link_graph(&[0, 1]).is_err());
    }

    #[test]
    fn clique_connectivity_examples() {
        let two_triangles = KGraph::new(2, 6, [[0, 1], [1, 2], [0, 2], [3, 4], [4, 5], [3, 5]]).unwrap();
        let comps = two_triangles.clique_connectivity(3, DEFAULT_CLIQUE_CAP).unwrap();
        assert_eq!(comps, vec![vec![0, 1, 2], vec![3, 4, 5]]);

        let k5 = KGraph::complete(2, 5).unwrap();
        assert_eq!(k5.clique_connectivity(3, DEFAULT_CLIQUE_CAP).unwrap(), vec![vec![0, 1, 2, 3, 4]]);

        let c5 = cycle(5);
        let comps = c5.clique_connectivity(3, DEFAULT_CLIQUE_CAP).unwrap();
        assert_eq!(comps.len(), 5);
        assert!(comps.iter().all(|c| c.len() == 1));

        assert!(k5.clique_connectivity(1, DEFAULT_CLIQUE_CAP).is_err());
        assert!(matches!(
            k5.clique_connectivity(3, 3),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn hypergraph_cliques() {
        // K4^(3) is a 4-clique; a lone extra edge on {3,4,5} joins via 3-cliques only.
        let mut edges: Vec<Vec<usize>> = KGraph::complete(3, 4).unwrap().edges().map(<[usize]>::to_vec).collect();
        edges.push(vec![3, 4, 5]);
        let g = KGraph::new(3, 7, edges).unwrap();
        let four = g.clique_connectivity(4, DEFAULT_CLIQUE_CAP).unwrap();
        assert_eq!(four[0], vec![0, 1, 2, 3]);
        assert_eq!(four.len(), 4);
        let three = g.clique_connectivity(3, DEFAULT_CLIQUE_CAP).unwrap();
        assert_eq!(three[0], vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn partitions_validate() {
        assert!(Partition::new(vec![vec![0, 1], vec![2]], 3).is_ok());
        assert!(Partition::new(vec![vec![0, 1], vec![1, 2]], 3).is_err());
        assert!(Partition::new(vec![vec![0], vec![]], 1).is_err());
        assert!(Partition::new(vec![vec![0]], 2).is_err());
    }

    #[test]
    fn matching_validation() {
        let h = Digraph::new(2, 4, [[0, 1], [2, 3], [1, 2], [3, 3]]).unwrap();
        let good = Matching { edges: vec![vec![0, 1], vec![2, 3]] };
        assert!(good.is_perfect_in(&h));
        let overlap = Matching { edges: vec![vec![0, 1], vec![1, 2]] };
        assert!(overlap.validate(&h).is_err());
        let repeat = Matching { edges: vec![vec![3, 3]] };
        assert!(repeat.validate(&h).is_err());
    }

    #[test]
    fn subsets_and_binomials() {
        let mut count = 0;
        for_each_subset(5, 2, |_| count += 1);
        assert_eq!(count, 10);
        let mut empty = 0;
        for_each_subset(3, 0, |s| {
            assert!(s.is_empty());
            empty += 1
        });
        assert_eq!(empty, 1);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(3, 5), 0);
    }
}
