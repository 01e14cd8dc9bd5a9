//! Extremal host constructions, complete partite graphs and digraph blow-ups.

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{binomial, for_each_subset, Digraph, KGraph, Partition};
use crate::rational::{serde_q, to_f64, Q};
use crate::solver::{Outcome, SolveReport};

/// Least integer `c` with `c >= (√2 - 1) n`, i.e. `(c + n)^2 >= 2 n^2`.
pub fn ceil_alpha(n: usize) -> usize {
    let n = n as u128;
    let mut c = ((std::f64::consts::SQRT_2 - 1.0) * n as f64).floor() as u128;
    c = c.saturating_sub(2);
    while (c + n) * (c + n) < 2 * n * n {
        c += 1;
    }
    c as usize
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverBarrier {
    pub graph: KGraph,
    pub a1: Vec<usize>,
    pub a2: Vec<usize>,
    pub b: Vec<usize>,
    pub t: Vec<usize>,
    /// The vertex of `t` that no homomorphic copy covers exactly once.
    pub v: usize,
}

/// Cover barrier on `n` vertices for `k >= 3`: parts `A1, A2, B, T` with
/// `|A1| = |A2| = ⌈(√2-1)n⌉`, `|T| = k - 2` and `v` the first vertex of `T`.
pub fn cover_barrier(n: usize, k: usize) -> Result<CoverBarrier> {
    if k < 3 {
        return Err(Error::input("the cover barrier needs k >= 3"));
    }
    let a = ceil_alpha(n);
    if n < k + 4 || 2 * a + (k - 2) > n {
        return Err(Error::input(format!("n={n} is too small for the cover barrier with k={k}")));
    }
    let a1: Vec<usize> = (0..a).collect();
    let a2: Vec<usize> = (a..2 * a).collect();
    let b: Vec<usize> = (2 * a..n - (k - 2)).collect();
    let t: Vec<usize> = (n - (k - 2)..n).collect();
    let v = t[0];
    let t_rest = &t[1..];
    let mut edges: Vec<Vec<usize>> = Vec::new();
    for &x in &a1 {
        for &y in &a2 {
            let mut e = t.clone();
            e.extend([x, y]);
            edges.push(e);
        }
    }
    for side in [&a1, &a2] {
        let pool: Vec<usize> = side.iter().chain(&b).copied().collect();
        for_each_subset(pool.len(), 3, |idx| {
            if side.contains(&pool[idx[0]]) {
                let mut e = t_rest.to_vec();
                e.extend(idx.iter().map(|&i| pool[i]));
                edges.push(e);
            }
        });
    }
    if k >= 4 {
        let in_t = |u: usize| u >= n - (k - 2);
        for_each_subset(n, k, |e| {
            if e.iter().filter(|&&u| in_t(u)).count() <= k - 4 {
                edges.push(e.to_vec());
            }
        });
    }
    let graph = KGraph::new(k, n, edges)?;
    Ok(CoverBarrier { graph, a1, a2, b, t, v })
}

/// Whether `e` is an edge of the cover barrier, decided from the parts alone.
pub fn cover_barrier_predicate(c: &CoverBarrier, e: &[usize]) -> bool {
    let k = c.t.len() + 2;
    let count = |part: &[usize]| e.iter().filter(|u| part.contains(u)).count();
    let (na1, na2, nb, nt) = (count(&c.a1), count(&c.a2), count(&c.b), count(&c.t));
    let has_v = e.contains(&c.v);
    if nt == k - 2 {
        return na1 == 1 && na2 == 1;
    }
    if nt == k - 3 && !has_v {
        return (na1 >= 1 && na2 == 0 && na1 + nb == 3) || (na2 >= 1 && na1 == 0 && na2 + nb == 3);
    }
    k >= 4 && nt <= k - 4
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceBarrier {
    pub graph: KGraph,
    /// The first `|A|` vertices form `A`.
    pub a_size: usize,
}

/// All `k`-sets with at least `i` vertices in `A`, `|A| = ⌊β(m_1+...+m_i)n⌋ - 1`,
/// where `m_1 <= m_2 <= ...` are the part sizes of the tile.
pub fn space_barrier(n: usize, k: usize, i: usize, beta: &Q, parts: &[usize]) -> Result<SpaceBarrier> {
    if parts.len() < i || i == 0 || i > k {
        return Err(Error::input(format!("need 1 <= i <= k and at least i part sizes, got i={i}")));
    }
    let mut sorted = parts.to_vec();
    sorted.sort_unstable();
    if sorted[0] == 0 {
        return Err(Error::input("part sizes must be positive"));
    }
    let m: usize = sorted.iter().sum();
    if beta.is_negative() || beta * Q::from_integer(m.into()) > Q::one() {
        return Err(Error::input("need 0 <= beta <= 1/m"));
    }
    let head: usize = sorted[..i].iter().sum();
    let raw = (beta * Q::from_integer((head * n).into())).floor().to_integer();
    let a: i64 = i64::try_from(raw).map_err(|_| Error::Overflow("space barrier size"))? - 1;
    if a < 0 || a as usize > n {
        return Err(Error::input(format!("|A| = {a} is out of range")));
    }
    let a = a as usize;
    let mut edges = Vec::new();
    for_each_subset(n, k, |e| {
        if e.iter().filter(|&&u| u < a).count() >= i {
            edges.push(e.to_vec());
        }
    });
    Ok(SpaceBarrier { graph: KGraph::new(k, n, edges)?, a_size: a })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilityBarrier {
    pub graph: KGraph,
    /// The first `|A| = ⌊n/2⌋ + 1` vertices form one clique, the rest the other.
    pub a_size: usize,
}

pub fn divisibility_barrier(n: usize, k: usize) -> Result<DivisibilityBarrier> {
    if k < 2 || n < 2 * k {
        return Err(Error::input(format!("need k >= 2 and n >= 2k, got n={n}, k={k}")));
    }
    let a = n / 2 + 1;
    let mut edges = Vec::new();
    for_each_subset(a, k, |e| edges.push(e.to_vec()));
    for_each_subset(n - a, k, |e| edges.push(e.iter().map(|&u| u + a).collect::<Vec<_>>()));
    Ok(DivisibilityBarrier { graph: KGraph::new(k, n, edges)?, a_size: a })
}

/// Complete partite `k`-graph on consecutive parts: every `k`-set meeting `k` distinct parts.
pub fn complete_partite(k: usize, parts: &[usize]) -> Result<KGraph> {
    if k < 2 || parts.len() < k {
        return Err(Error::input(format!("need at least k={k} parts")));
    }
    let n: usize = parts.iter().sum();
    let mut part_of = Vec::with_capacity(n);
    for (i, &p) in parts.iter().enumerate() {
        part_of.extend(std::iter::repeat_n(i, p));
    }
    let mut edges = Vec::new();
    for_each_subset(n, k, |e| {
        let mut seen: Vec<usize> = e.iter().map(|&u| part_of[u]).collect();
        seen.dedup();
        if seen.len() == k {
            edges.push(e.to_vec());
        }
    });
    KGraph::new(k, n, edges)
}

/// Complete `l`-partite `k`-graph with parts `b+1, b-1, b, ..., b`.
pub fn downspin_bottlegraph(l: usize, b: usize, k: usize) -> Result<KGraph> {
    if l < 2 || b < 2 || k > l {
        return Err(Error::input(format!("need l >= 2, b >= 2 and k <= l, got l={l}, b={b}, k={k}")));
    }
    let mut parts = vec![b; l];
    parts[0] = b + 1;
    parts[1] = b - 1;
    complete_partite(k, &parts)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowUp {
    pub digraph: Digraph,
    /// Part `i` holds the copies of vertex `i` of the reduced digraph.
    pub parts: Partition,
}

/// Replaces vertex `i` of `r` by a part of `sizes[i]` vertices and each edge by
/// all tuples through the corresponding parts, equal where the edge repeats a vertex.
pub fn blow_up(r: &Digraph, sizes: &[usize]) -> Result<BlowUp> {
    if sizes.len() != r.n() {
        return Err(Error::input(format!("need {} part sizes, got {}", r.n(), sizes.len())));
    }
    let mut offsets = Vec::with_capacity(sizes.len());
    let mut n = 0;
    for &s in sizes {
        offsets.push(n);
        n += s;
    }
    let mut edges: Vec<Vec<usize>> = Vec::new();
    for e in r.edges() {
        let mut distinct: Vec<usize> = e.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let mut pick = vec![0usize; distinct.len()];
        if distinct.iter().any(|&p| sizes[p] == 0) {
            continue;
        }
        loop {
            let tuple: Vec<usize> = e
                .iter()
                .map(|p| {
                    let j = distinct.binary_search(p).expect("present");
                    offsets[*p] + pick[j]
                })
                .collect();
            edges.push(tuple);
            let mut j = 0;
            while j < pick.len() {
                pick[j] += 1;
                if pick[j] < sizes[distinct[j]] {
                    break;
                }
                pick[j] = 0;
                j += 1;
            }
            if j == pick.len() {
                break;
            }
        }
    }
    let parts: Vec<Vec<usize>> = (0..sizes.len()).map(|i| (offsets[i]..offsets[i] + sizes[i]).collect()).collect();
    Ok(BlowUp { digraph: Digraph::new(r.m(), n, edges)?, parts: Partition::new(parts, n)? })
}

/// Blow-up where the first `roots` vertices of `r` stay singletons and the others get `b` copies.
pub fn rooted_blow_up(r: &Digraph, b: usize, roots: usize) -> Result<BlowUp> {
    if roots > r.n() {
        return Err(Error::input("more roots than vertices"));
    }
    let sizes: Vec<usize> = (0..r.n()).map(|i| if i < roots { 1 } else { b }).collect();
    blow_up(r, &sizes)
}

struct Embedder<'a> {
    pattern: &'a Digraph,
    host: &'a Digraph,
    /// Pattern edges grouped by their largest vertex.
    closing: Vec<Vec<usize>>,
    image: Vec<usize>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
}

impl Embedder<'_> {
    fn consistent(&self, p: usize) -> bool {
        self.closing[p].iter().all(|&i| {
            let t: Vec<usize> = self.pattern.edge(i).iter().map(|&u| self.image[u]).collect();
            self.host.contains(&t)
        })
    }

    fn search(&mut self, p: usize, fixed: usize) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        if p == self.pattern.n() {
            return Some(true);
        }
        if p < fixed {
            return if self.consistent(p) { self.search(p + 1, fixed) } else { Some(false) };
        }
        for x in 0..self.host.n() {
            if self.used[x] {
                continue;
            }
            self.image[p] = x;
            if self.consistent(p) {
                self.used[x] = true;
                let r = self.search(p + 1, fixed);
                self.used[x] = false;
                match r {
                    Some(false) => {}
                    other => return other,
                }
            }
        }
        Some(false)
    }
}

/// Injective homomorphism of `pattern` into `host` fixing the first `fixed.len()`
/// pattern vertices to the given host vertices.
pub fn find_embedding(pattern: &Digraph, host: &Digraph, fixed: &[usize], budget: u64) -> Result<SolveReport<Vec<usize>>> {
    if pattern.m() != host.m() {
        return Err(Error::input("pattern and host uniformities differ"));
    }
    if fixed.len() > pattern.n() || fixed.iter().any(|&x| x >= host.n()) {
        return Err(Error::input("fixed vertices out of range"));
    }
    let mut seen = vec![false; host.n()];
    for &x in fixed {
        if std::mem::replace(&mut seen[x], true) {
            return Err(Error::input("fixed vertices must be distinct"));
        }
    }
    let mut closing = vec![Vec::new(); pattern.n()];
    for (i, e) in pattern.edges().enumerate() {
        closing[*e.iter().max().expect("nonempty")].push(i);
    }
    let mut image = vec![usize::MAX; pattern.n()];
    image[..fixed.len()].copy_from_slice(fixed);
    let mut em = Embedder { pattern, host, closing, image, used: seen, nodes: 0, budget };
    let r = em.search(0, fixed.len());
    Ok(match r {
        Some(true) => SolveReport { outcome: Outcome::Found, witness: Some(em.image), nodes: em.nodes },
        Some(false) => SolveReport { outcome: Outcome::None, witness: None, nodes: em.nodes },
        None => SolveReport { outcome: Outcome::Inconclusive, witness: None, nodes: em.nodes },
    })
}

/// Rooted copy of `R*(b; X)`: the first `x.len()` vertices of `r` are roots mapped to `x`.
pub fn find_rooted_blowup(h: &Digraph, r: &Digraph, x: &[usize], b: usize, budget: u64) -> Result<SolveReport<Vec<usize>>> {
    let blown = rooted_blow_up(r, b, x.len())?;
    find_embedding(&blown.digraph, h, x, budget)
}

/// Minimum `d`-degree divided by `C(n - d, k - d)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeRatio {
    pub d: usize,
    pub min_degree: usize,
    #[serde(with = "serde_q")]
    pub ratio: Q,
}

impl DegreeRatio {
    pub fn approx(&self) -> f64 {
        to_f64(&self.ratio)
    }
}

pub fn relative_min_degree(g: &KGraph, d: usize) -> Result<DegreeRatio> {
    let md = g.min_degree(d)?;
    let den = binomial((g.n() - d) as u64, (g.k() - d) as u64);
    let ratio = Q::new((md as i64).into(), i64::try_from(den).map_err(|_| Error::Overflow("degree normaliser"))?.into());
    Ok(DegreeRatio { d, min_degree: md, ratio })
}
