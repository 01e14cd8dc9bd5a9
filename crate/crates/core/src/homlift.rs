//! Homomorphism digraphs: plain, order-preserving and rainbow lifts of a
//! tiling problem to a matching problem, mixed homomorphisms, and fissility.

use std::collections::HashSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_one_to_one, Digraph, KGraph};

/// Default cap on the number of edges a lift may produce.
pub const DEFAULT_EDGE_CAP: u64 = 10_000_000;
/// Default cap on candidate families examined by [`is_fissile`].
pub const DEFAULT_FISSILITY_CAP: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Plain,
    Ordered,
    Rainbow,
}

/// A lifted digraph together with the labelling that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomDigraph {
    pub digraph: Digraph,
    pub flavor: Flavor,
    /// Tile vertices in the order they occupy tuple positions.
    pub tile_order: Vec<usize>,
    /// Tile edges in the order they occupy the trailing positions (rainbow only).
    pub tile_edges: Vec<Vec<usize>>,
    /// Number of host vertices; in the rainbow lift colours are `host_n..`.
    pub host_n: usize,
}

impl HomDigraph {
    /// The partition `{V, colours}` for the rainbow lift, `{V}` otherwise.
    pub fn vertex_classes(&self) -> Vec<Vec<usize>> {
        let n = self.digraph.n();
        if self.host_n < n {
            vec![(0..self.host_n).collect(), (self.host_n..n).collect()]
        } else {
            vec![(0..n).collect()]
        }
    }
}

/// A family of k-graphs on a shared vertex set, one per colour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFamily {
    members: Vec<KGraph>,
}

impl GraphFamily {
    pub fn new(members: Vec<KGraph>) -> Result<Self> {
        let first = members.first().ok_or_else(|| Error::input("a graph family needs at least one colour"))?;
        let (k, n) = (first.k(), first.n());
        if members.iter().any(|g| g.k() != k || g.n() != n) {
            return Err(Error::input("family members must share k and the vertex set"));
        }
        Ok(GraphFamily { members })
    }

    pub fn k(&self) -> usize {
        self.members[0].k()
    }

    pub fn n(&self) -> usize {
        self.members[0].n()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[KGraph] {
        &self.members
    }
}

/// Depth-first enumeration of maps `V(F) -> V(G)` sending tile edge `i` into
/// `targets[i]`. Tile vertices are assigned in label order.
struct HomSearch<'a> {
    tile: &'a KGraph,
    targets: Vec<&'a KGraph>,
    n: usize,
    ordered: bool,
    /// Tile edges (by index) whose largest vertex is `w`.
    closing: Vec<Vec<usize>>,
    /// Graph-case shortcut: for each tile vertex, an earlier neighbour and the edge joining them.
    anchor: Vec<Option<(usize, usize)>>,
    adjacency: Vec<Vec<Vec<usize>>>,
    adj_of: Vec<usize>,
    /// `(w, x)`: tile vertex `w` must map to `x` and no other vertex may.
    pin: Option<(usize, usize)>,
    phi: Vec<usize>,
}

impl<'a> HomSearch<'a> {
    fn new(tile: &'a KGraph, targets: Vec<&'a KGraph>, n: usize, ordered: bool) -> Self {
        let m = tile.n();
        let mut closing = vec![Vec::new(); m];
        let mut anchor = vec![None; m];
        for (i, e) in tile.edges().enumerate() {
            let last = *e.last().expect("edges are non-empty");
            closing[last].push(i);
            if e.len() == 2 && anchor[e[1]].is_none() {
                anchor[e[1]] = Some((e[0], i));
            }
        }
        // adjacency lists per distinct target graph; `adj_of[i]` indexes them
        let mut adjacency: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut adj_of = Vec::with_capacity(targets.len());
        if tile.k() == 2 {
            for (i, t) in targets.iter().enumerate() {
                match targets[..i].iter().position(|s| std::ptr::eq(*s, *t)) {
                    Some(j) => adj_of.push(adj_of[j]),
                    None => {
                        adj_of.push(adjacency.len());
                        adjacency.push(t.neighbours());
                    }
                }
            }
        }
        HomSearch { tile, targets, n, ordered, closing, anchor, adjacency, adj_of, pin: None, phi: vec![0; m] }
    }

    fn run<F>(&mut self, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        self.extend(0, visit)
    }

    fn extend<F>(&mut self, w: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if w == self.tile.n() {
            return visit(&self.phi);
        }
        let lo = if self.ordered && w > 0 { self.phi[w - 1] } else { 0 };
        let candidates: Vec<usize> = match self.anchor[w] {
            Some((u, edge)) if !self.adjacency.is_empty() => self.adjacency[self.adj_of[edge]][self.phi[u]]
                .iter()
                .copied()
                .filter(|&x| x >= lo)
                .collect(),
            _ => (lo..self.n).collect(),
        };
        let mut img = Vec::with_capacity(self.tile.k());
        'cand: for x in candidates {
            if let Some((pw, px)) = self.pin {
                if (w == pw) != (x == px) {
                    continue;
                }
            }
            self.phi[w] = x;
            for &i in &self.closing[w] {
                img.clear();
                img.extend(self.tile.edge(i).iter().map(|&t| self.phi[t]));
                if !self.targets[i].contains(&img) {
                    continue 'cand;
                }
            }
            self.extend(w + 1, visit)?;
        }
        ControlFlow::Continue(())
    }
}

fn check_uniformity(f: &KGraph, g: &KGraph) -> Result<()> {
    if f.k() != g.k() {
        return Err(Error::input(format!(
            "tile uniformity {} differs from host uniformity {}",
            f.k(),
            g.k()
        )));
    }
    if f.n() == 0 {
        return Err(Error::input("the tile needs at least one vertex"));
    }
    Ok(())
}

fn lift(f: &KGraph, g: &KGraph, ordered: bool, cap: u64) -> Result<Digraph> {
    check_uniformity(f, g)?;
    let targets = vec![g; f.edge_count()];
    let mut search = HomSearch::new(f, targets, g.n(), ordered);
    let mut flat = Vec::new();
    let mut count = 0u64;
    let mut over = false;
    let _ = search.run(&mut |phi| {
        count += 1;
        if count > cap {
            over = true;
            return ControlFlow::Break(());
        }
        flat.extend_from_slice(phi);
        ControlFlow::Continue(())
    });
    if over {
        return Err(Error::Resource { what: "homomorphism digraph edges", cap });
    }
    Ok(Digraph::from_flat(f.n(), g.n(), flat))
}

/// A homomorphism `F -> G` whose image meets `v` exactly once, if any.
/// Decides whether `v` is covered in `H(F;G)` without building the lift.
pub fn hom_hitting_once(f: &KGraph, g: &KGraph, v: usize) -> Result<Option<Vec<usize>>> {
    check_uniformity(f, g)?;
    if v >= g.n() {
        return Err(Error::input(format!("vertex {v} outside the host")));
    }
    let mut found = None;
    for w in 0..f.n() {
        let mut search = HomSearch::new(f, vec![g; f.edge_count()], g.n(), false);
        search.pin = Some((w, v));
        let _ = search.run(&mut |phi| {
            found = Some(phi.to_vec());
            ControlFlow::Break(())
        });
        if found.is_some() {
            break;
        }
    }
    Ok(found)
}

/// `H(F;G)`: one `v(F)`-tuple per homomorphism `F -> G`.
pub fn hom_digraph(f: &KGraph, g: &KGraph) -> Result<HomDigraph> {
    hom_digraph_capped(f, g, DEFAULT_EDGE_CAP)
}

pub fn hom_digraph_capped(f: &KGraph, g: &KGraph, cap: u64) -> Result<HomDigraph> {
    Ok(HomDigraph {
        digraph: lift(f, g, false, cap)?,
        flavor: Flavor::Plain,
        tile_order: (0..f.n()).collect(),
        tile_edges: Vec::new(),
        host_n: g.n(),
    })
}

/// The order-preserving part of `H(F;G)`, orders given by vertex labels.
pub fn ordered_hom_digraph(f: &KGraph, g: &KGraph) -> Result<HomDigraph> {
    ordered_hom_digraph_capped(f, g, DEFAULT_EDGE_CAP)
}

pub fn ordered_hom_digraph_capped(f: &KGraph, g: &KGraph, cap: u64) -> Result<HomDigraph> {
    Ok(HomDigraph {
        digraph: lift(f, g, true, cap)?,
        flavor: Flavor::Ordered,
        tile_order: (0..f.n()).collect(),
        tile_edges: Vec::new(),
        host_n: g.n(),
    })
}

/// `H(F;𝒢)`: tuples `(φ(v_1..v_m), c_1..c_h)` where tile edge `e_j` (sorted
/// order) lands in colour `c_j`. Colour `c` is vertex `n + c`.
pub fn rainbow_digraph(f: &KGraph, family: &GraphFamily) -> Result<HomDigraph> {
    rainbow_digraph_capped(f, family, DEFAULT_EDGE_CAP)
}

pub fn rainbow_digraph_capped(f: &KGraph, family: &GraphFamily, cap: u64) -> Result<HomDigraph> {
    let colors = family.members();
    check_uniformity(f, &colors[0])?;
    let n = family.n();
    let union = KGraph::new(
        f.k(),
        n,
        colors.iter().flat_map(|g| g.edges()).collect::<Vec<_>>(),
    )?;
    let h = f.edge_count();
    let width = f.n() + h;
    let mut search = HomSearch::new(f, vec![&union; h], n, false);
    let mut flat = Vec::new();
    let mut count = 0u64;
    let mut over = false;
    let mut img = Vec::with_capacity(f.k());
    let _ = search.run(&mut |phi| {
        let options: Vec<Vec<usize>> = f
            .edges()
            .map(|e| {
                img.clear();
                img.extend(e.iter().map(|&w| phi[w]));
                img.sort_unstable();
                (0..colors.len()).filter(|&c| colors[c].contains_sorted(&img)).collect()
            })
            .collect();
        let mut choice = vec![0usize; h];
        loop {
            count += 1;
            if count > cap {
                over = true;
                return ControlFlow::Break(());
            }
            flat.extend_from_slice(phi);
            flat.extend(choice.iter().enumerate().map(|(j, &c)| n + options[j][c]));
            // odometer over colour choices
            let mut j = h;
            loop {
                if j == 0 {
                    return ControlFlow::Continue(());
                }
                j -= 1;
                choice[j] += 1;
                if choice[j] < options[j].len() {
                    break;
                }
                choice[j] = 0;
            }
        }
    });
    if over {
        return Err(Error::Resource { what: "rainbow digraph edges", cap });
    }
    Ok(HomDigraph {
        digraph: Digraph::from_flat(width, n + colors.len(), flat),
        flavor: Flavor::Rainbow,
        tile_order: (0..f.n()).collect(),
        tile_edges: f.edges().map(<[usize]>::to_vec).collect(),
        host_n: n,
    })
}

/// A map `φ` with one tile edge `f` sent into `G1` and the rest into `G2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedHom {
    pub phi: Vec<usize>,
    pub special_edge: Vec<usize>,
}

pub fn exists_mixed_hom(f: &KGraph, g1: &KGraph, g2: &KGraph) -> Result<Option<MixedHom>> {
    check_uniformity(f, g1)?;
    if g1.k() != g2.k() || g1.n() != g2.n() {
        return Err(Error::input("mixed homomorphism colours must share k and the vertex set"));
    }
    for special in 0..f.edge_count() {
        let targets: Vec<&KGraph> = (0..f.edge_count()).map(|i| if i == special { g1 } else { g2 }).collect();
        let mut search = HomSearch::new(f, targets, g1.n(), false);
        let mut found = None;
        let _ = search.run(&mut |phi| {
            found = Some(phi.to_vec());
            ControlFlow::Break(())
        });
        if let Some(phi) = found {
            return Ok(Some(MixedHom { phi, special_edge: f.edge(special).to_vec() }));
        }
    }
    Ok(None)
}

/// A suitable tuple with no one-to-one edge covering it: `sets[i]` is `B(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FissilityViolation {
    pub sets: Vec<Vec<usize>>,
}

impl FissilityViolation {
    /// The distinct sets of the tuple with the positions they occupy.
    pub fn blocks(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut out: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for (i, s) in self.sets.iter().enumerate() {
            match out.iter_mut().find(|(set, _)| set == s) {
                Some((_, pos)) => pos.push(i),
                None => out.push((s.clone(), vec![i])),
            }
        }
        out
    }

    /// Re-checks that the tuple is suitable for `h` and lacks a covering edge.
    pub fn verify(&self, h: &Digraph) -> bool {
        let blocks = self.blocks();
        if self.sets.len() != h.m() || blocks.iter().any(|(s, p)| s.len() != p.len()) {
            return false;
        }
        let mut all: Vec<usize> = blocks.iter().flat_map(|(s, _)| s.iter().copied()).collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) || all.last().is_some_and(|&v| v >= h.n()) {
            return false;
        }
        let sets: Vec<Vec<usize>> = blocks.iter().map(|(s, _)| s.clone()).collect();
        let positions: Vec<Vec<usize>> = blocks.iter().map(|(_, p)| p.clone()).collect();
        is_suitable(h, &positions, &sets) && !has_covering_edge(h, &positions, &sets)
    }
}

/// Calls `f` with each set partition of `0..m` as a list of blocks.
fn for_each_set_partition(m: usize, f: &mut dyn FnMut(&[Vec<usize>]) -> Result<()>) -> Result<()> {
    fn rec(i: usize, m: usize, blocks: &mut Vec<Vec<usize>>, f: &mut dyn FnMut(&[Vec<usize>]) -> Result<()>) -> Result<()> {
        if i == m {
            return f(blocks);
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            rec(i + 1, m, blocks, f)?;
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        rec(i + 1, m, blocks, f)?;
        blocks.pop();
        Ok(())
    }
    rec(0, m, &mut Vec::new(), f)
}

fn is_suitable(h: &Digraph, positions: &[Vec<usize>], sets: &[Vec<usize>]) -> bool {
    let mut tuple = vec![0; h.m()];
    let mut idx = vec![0usize; sets.len()];
    loop {
        for (j, pos) in positions.iter().enumerate() {
            for &p in pos {
                tuple[p] = sets[j][idx[j]];
            }
        }
        if !h.contains(&tuple) {
            return false;
        }
        let mut j = sets.len();
        loop {
            if j == 0 {
                return true;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < sets[j].len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

fn has_covering_edge(h: &Digraph, positions: &[Vec<usize>], sets: &[Vec<usize>]) -> bool {
    fn rec(h: &Digraph, positions: &[Vec<usize>], sets: &[Vec<usize>], j: usize, tuple: &mut Vec<usize>) -> bool {
        if j == sets.len() {
            return h.contains(tuple);
        }
        let mut perm = sets[j].clone();
        permutations(&mut perm, 0, &mut |p| {
            for (slot, &v) in positions[j].iter().zip(p) {
                tuple[*slot] = v;
            }
            rec(h, positions, sets, j + 1, tuple)
        })
    }
    let mut tuple = vec![0; h.m()];
    rec(h, positions, sets, 0, &mut tuple)
}

/// Heap-free permutation walk; stops as soon as `f` returns true.
fn permutations(xs: &mut [usize], k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == xs.len() {
        return f(xs);
    }
    for i in k..xs.len() {
        xs.swap(k, i);
        if permutations(xs, k + 1, f) {
            xs.swap(k, i);
            return true;
        }
        xs.swap(k, i);
    }
    false
}

/// Checks fissility over all families of at most `max_parts` disjoint sets.
/// Returns a violating suitable tuple when `H` is not fissile.
pub fn is_fissile(h: &Digraph, max_parts: usize, cap: u64) -> Result<Option<FissilityViolation>> {
    let m = h.m();
    let mut examined = 0u64;
    let mut violation = None;
    for_each_set_partition(m, &mut |blocks| {
        if violation.is_some() || blocks.len() > max_parts || blocks.iter().all(|b| b.len() == 1) {
            return Ok(());
        }
        // Tuples constant on every block with distinct block values: the only
        // collapsed edges a suitable family can use.
        let l = blocks.len();
        let mut points: HashSet<Vec<usize>> = HashSet::new();
        let mut coords: Vec<Vec<usize>> = vec![Vec::new(); l];
        for e in h.edges() {
            let vals: Vec<usize> = blocks.iter().map(|b| e[b[0]]).collect();
            if blocks.iter().zip(&vals).all(|(b, &x)| b.iter().all(|&p| e[p] == x)) && is_one_to_one(&vals) {
                for (j, &x) in vals.iter().enumerate() {
                    coords[j].push(x);
                }
                points.insert(vals);
            }
        }
        for c in &mut coords {
            c.sort_unstable();
            c.dedup();
        }
        let mut chosen: Vec<Vec<usize>> = Vec::with_capacity(l);
        choose_sets(h, blocks, &coords, &points, &mut chosen, &mut examined, cap, &mut violation)
    })?;
    Ok(violation)
}

#[allow(clippy::too_many_arguments)]
fn choose_sets(
    h: &Digraph,
    blocks: &[Vec<usize>],
    coords: &[Vec<usize>],
    points: &HashSet<Vec<usize>>,
    chosen: &mut Vec<Vec<usize>>,
    examined: &mut u64,
    cap: u64,
    violation: &mut Option<FissilityViolation>,
) -> Result<()> {
    let j = chosen.len();
    if violation.is_some() {
        return Ok(());
    }
    if j == blocks.len() {
        *examined += 1;
        if *examined > cap {
            return Err(Error::Resource { what: "fissility families", cap });
        }
        let suitable = box_inside(points, chosen);
        if suitable && !has_covering_edge(h, blocks, chosen) {
            let mut sets = vec![Vec::new(); h.m()];
            for (b, s) in blocks.iter().zip(chosen.iter()) {
                for &p in b {
                    sets[p] = s.clone();
                }
            }
            *violation = Some(FissilityViolation { sets });
        }
        return Ok(());
    }
    let used: Vec<usize> = chosen.iter().flatten().copied().collect();
    let pool: Vec<usize> = coords[j].iter().copied().filter(|v| !used.contains(v)).collect();
    let size = blocks[j].len();
    let mut result = Ok(());
    crate::graph::for_each_subset(pool.len(), size, |idx| {
        if result.is_err() || violation.is_some() {
            return;
        }
        chosen.push(idx.iter().map(|&i| pool[i]).collect());
        result = choose_sets(h, blocks, coords, points, chosen, examined, cap, violation);
        chosen.pop();
    });
    result
}

fn box_inside(points: &HashSet<Vec<usize>>, sets: &[Vec<usize>]) -> bool {
    let mut idx = vec![0usize; sets.len()];
    let mut p = vec![0usize; sets.len()];
    loop {
        for j in 0..sets.len() {
            p[j] = sets[j][idx[j]];
        }
        if !points.contains(&p) {
            return false;
        }
        let mut j = sets.len();
        loop {
            if j == 0 {
                return true;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < sets[j].len() {
                break;
            }
            idx[j] = 0;
        }
    }
}
