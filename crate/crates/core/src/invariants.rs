//! Tile invariants: proper colourings and the quantities derived from them,
//! interval colourings of ordered graphs, bottlegraph search and uniform
//! density of host graphs.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::KGraph;
use crate::homlift::ordered_hom_digraph;
use crate::rational::{q, qi, serde_q, Q};
use crate::solver::{exact_perfect_matching_with, Outcome};

/// Largest tile order accepted by colouring enumeration.
pub const DEFAULT_COLORING_CAP: usize = 20;
/// Largest number of distinct proper colourings enumerated.
pub const DEFAULT_PARTITION_CAP: u64 = 5_000_000;

/// `gcd` over a set of positive integers; `Infinite` for the empty set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Gcd {
    Finite(u64),
    Infinite,
}

impl Gcd {
    pub fn of(values: impl IntoIterator<Item = u64>) -> Self {
        let g = values.into_iter().filter(|&x| x > 0).fold(0u64, |a, b| a.gcd(&b));
        if g == 0 {
            Gcd::Infinite
        } else {
            Gcd::Finite(g)
        }
    }

    pub fn is_one(self) -> bool {
        self == Gcd::Finite(1)
    }
}

impl fmt::Display for Gcd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gcd::Finite(g) => write!(f, "{g}"),
            Gcd::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Gcd {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Gcd::Finite(g) => s.serialize_u64(*g),
            Gcd::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Gcd {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(g) => Ok(Gcd::Finite(g)),
            Raw::S(s) if s == "inf" => Ok(Gcd::Infinite),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad gcd {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringProfile {
    pub chi: usize,
    /// Sorted class sizes of every proper `chi`-colouring, as a set.
    pub class_sizes: Vec<Vec<usize>>,
    #[serde(with = "serde_q")]
    pub tau: Q,
    pub differences: Vec<u64>,
    pub gcd: Gcd,
    /// Number of proper `chi`-colourings up to renaming colours.
    pub partitions: u64,
    /// One optimal colouring, as a colour per vertex.
    pub witness: Vec<usize>,
}

impl ColoringProfile {
    pub fn is_cone(&self) -> bool {
        self.class_sizes.iter().any(|s| s.contains(&1))
    }

    pub fn chi_crit(&self) -> Q {
        if self.chi < 2 {
            return qi(1);
        }
        qi(self.chi as i64 - 1) / (qi(1) - &self.tau)
    }
}

struct Colorer<'a> {
    n: usize,
    colors: usize,
    /// Edges indexed by their largest vertex.
    closing: &'a [Vec<Vec<usize>>],
    assign: Vec<usize>,
}

impl Colorer<'_> {
    fn ok_at(&self, v: usize) -> bool {
        self.closing[v].iter().all(|e| {
            let mut seen = 0u64;
            e.iter().all(|&u| {
                let bit = 1u64 << self.assign[u];
                let fresh = seen & bit == 0;
                seen |= bit;
                fresh
            })
        })
    }

    /// Canonical colourings: vertex `v` may only open colour `used`.
    fn walk(&mut self, v: usize, used: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if v == self.n {
            return used == self.colors && visit(&self.assign);
        }
        if self.colors - used > self.n - v {
            return true;
        }
        for c in 0..(used + 1).min(self.colors) {
            self.assign[v] = c;
            if self.ok_at(v) && !self.walk(v + 1, used.max(c + 1), visit) {
                return false;
            }
        }
        true
    }
}

fn closing_edges(f: &KGraph) -> Vec<Vec<Vec<usize>>> {
    let mut closing = vec![Vec::new(); f.n()];
    for e in f.edges() {
        closing[*e.last().expect("edges are nonempty")].push(e.to_vec());
    }
    closing
}

/// Calls `visit` on every proper colouring with exactly `colors` nonempty
/// classes (one representative per set partition); `visit` returns false to stop.
fn for_each_coloring(f: &KGraph, colors: usize, visit: &mut dyn FnMut(&[usize]) -> bool) {
    let closing = closing_edges(f);
    let mut c = Colorer { n: f.n(), colors, closing: &closing, assign: vec![0; f.n()] };
    c.walk(0, 0, visit);
}

/// Chromatic number and one witness colouring.
pub fn chromatic_number(f: &KGraph) -> Result<(usize, Vec<usize>)> {
    check_cap(f)?;
    if f.n() == 0 {
        return Ok((0, Vec::new()));
    }
    for colors in 1..=f.n() {
        let mut found = None;
        for_each_coloring(f, colors, &mut |a| {
            found = Some(a.to_vec());
            false
        });
        if let Some(w) = found {
            return Ok((colors, w));
        }
    }
    unreachable!("n colours always suffice")
}

fn check_cap(f: &KGraph) -> Result<()> {
    if f.n() > DEFAULT_COLORING_CAP {
        return Err(Error::Resource { what: "colouring vertices", cap: DEFAULT_COLORING_CAP as u64 });
    }
    Ok(())
}

pub fn coloring_profile(f: &KGraph) -> Result<ColoringProfile> {
    let (chi, witness) = chromatic_number(f)?;
    if chi == 0 {
        return Err(Error::input("colouring profile needs at least one vertex"));
    }
    let mut sizes: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut count = 0u64;
    let mut over = false;
    for_each_coloring(f, chi, &mut |a| {
        count += 1;
        if count > DEFAULT_PARTITION_CAP {
            over = true;
            return false;
        }
        let mut s = vec![0usize; chi];
        for &c in a {
            s[c] += 1;
        }
        s.sort_unstable();
        sizes.insert(s);
        true
    });
    if over {
        return Err(Error::Resource { what: "proper colourings", cap: DEFAULT_PARTITION_CAP });
    }
    let smallest = sizes.iter().map(|s| s[0]).min().expect("at least one colouring");
    let mut diffs: BTreeSet<u64> = BTreeSet::new();
    for s in &sizes {
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                diffs.insert(s[i].abs_diff(s[j]) as u64);
            }
        }
    }
    Ok(ColoringProfile {
        chi,
        class_sizes: sizes.into_iter().collect(),
        tau: q(smallest as i64, f.n() as i64),
        gcd: Gcd::of(diffs.iter().copied()),
        differences: diffs.into_iter().collect(),
        partitions: count,
        witness,
    })
}

pub fn chi_crit(f: &KGraph) -> Result<Q> {
    Ok(coloring_profile(f)?.chi_crit())
}

pub fn is_cone(f: &KGraph) -> Result<bool> {
    Ok(coloring_profile(f)?.is_cone())
}

/// Orders of the connected components of a 2-graph.
pub fn component_orders(f: &KGraph) -> Vec<usize> {
    let mut ds = crate::graph::DisjointSets::new(f.n());
    for e in f.edges() {
        for w in e.windows(2) {
            ds.union(w[0], w[1]);
        }
    }
    ds.components().iter().map(Vec::len).collect()
}

/// Whether some edge of the 2-graph `f` disconnects it when removed.
pub fn has_bridge(f: &KGraph) -> bool {
    let base = component_orders(f).len();
    (0..f.edge_count()).any(|skip| {
        let mut ds = crate::graph::DisjointSets::new(f.n());
        for (i, e) in f.edges().enumerate() {
            if i != skip {
                ds.union(e[0], e[1]);
            }
        }
        ds.components().len() > base
    })
}

/// Part sizes if `f` is a complete `k`-partite `k`-graph.
pub fn complete_partite_parts(f: &KGraph) -> Result<Option<Vec<usize>>> {
    check_cap(f)?;
    let k = f.k();
    if f.n() < k {
        return Ok(None);
    }
    let mut parts = None;
    for_each_coloring(f, k, &mut |a| {
        let mut s = vec![0usize; k];
        for &c in a {
            s[c] += 1;
        }
        let transversals: u128 = s.iter().map(|&x| x as u128).product();
        if transversals == f.edge_count() as u128 {
            s.sort_unstable();
            parts = Some(s);
            return false;
        }
        true
    });
    Ok(parts)
}

// ---------------------------------------------------------------------------
// ordered graphs

/// An interval colouring given by its class sizes, in vertex order. Classes may be empty.
pub type IntervalColoring = Vec<usize>;

/// `independent[a][b]` says whether the interval `a..b` spans no edge.
fn interval_table(f: &KGraph) -> Result<Vec<Vec<bool>>> {
    if f.k() != 2 {
        return Err(Error::input("ordered invariants are defined for 2-graphs"));
    }
    let n = f.n();
    let mut first_conflict = vec![n + 1; n];
    for e in f.edges() {
        first_conflict[e[0]] = first_conflict[e[0]].min(e[1]);
    }
    let mut table = vec![vec![false; n + 1]; n + 1];
    for a in 0..=n {
        let mut limit = n + 1;
        for b in a..=n {
            if b > a {
                limit = limit.min(first_conflict[b - 1]);
            }
            // interval a..b is independent iff no edge starts in it and ends before b
            table[a][b] = limit >= b;
        }
    }
    Ok(table)
}

fn for_each_interval_coloring(
    table: &[Vec<bool>],
    classes: usize,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) {
    fn go(
        table: &[Vec<bool>],
        start: usize,
        left: usize,
        sizes: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let n = table.len() - 1;
        if left == 1 {
            if table[start][n] {
                sizes.push(n - start);
                let go_on = visit(sizes);
                sizes.pop();
                return go_on;
            }
            return true;
        }
        for end in start..=n {
            if !table[start][end] {
                break;
            }
            sizes.push(end - start);
            let go_on = go(table, end, left - 1, sizes, visit);
            sizes.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    if classes == 0 {
        return;
    }
    go(table, 0, classes, &mut Vec::with_capacity(classes), visit);
}

fn is_interval_coloring(table: &[Vec<bool>], sizes: &[usize]) -> bool {
    let mut start = 0;
    sizes.iter().all(|&s| {
        let ok = table[start][start + s];
        start += s;
        ok
    })
}

/// Interval chromatic number with a witness. Greedy maximal intervals are optimal
/// because sub-intervals of independent intervals stay independent.
pub fn interval_chromatic(f: &KGraph) -> Result<(usize, IntervalColoring)> {
    let table = interval_table(f)?;
    let n = f.n();
    let mut sizes = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && table[start][end + 1] {
            end += 1;
        }
        sizes.push(end - start);
        start = end;
    }
    Ok((sizes.len(), sizes))
}

/// A colouring together with the vertex that may move from class `i` to `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlexWitness {
    pub class: usize,
    pub coloring: IntervalColoring,
    pub vertex: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flexibility {
    pub j: usize,
    pub holds: bool,
    /// Per class index `i` (0-based), a witness or `None`.
    pub witnesses: Vec<Option<FlexWitness>>,
}

pub fn is_j_flexible(f: &KGraph, j: usize) -> Result<Flexibility> {
    if j > 1 {
        return Err(Error::input("flexibility is defined for j = 0 or 1"));
    }
    let table = interval_table(f)?;
    let (r, _) = interval_chromatic(f)?;
    let c = r + j;
    let mut witnesses: Vec<Option<FlexWitness>> = vec![None; c.saturating_sub(1)];
    for_each_interval_coloring(&table, c, &mut |sizes| {
        for i in 0..c.saturating_sub(1) {
            if witnesses[i].is_some() || sizes[i] == 0 {
                continue;
            }
            let mut moved = sizes.to_vec();
            moved[i] -= 1;
            moved[i + 1] += 1;
            if is_interval_coloring(&table, &moved) {
                let vertex = sizes[..=i].iter().sum::<usize>() - 1;
                witnesses[i] = Some(FlexWitness { class: i, coloring: sizes.to_vec(), vertex });
            }
        }
        witnesses.iter().any(Option::is_none)
    });
    Ok(Flexibility { j, holds: witnesses.iter().all(Option::is_some), witnesses })
}

fn has_edge_between(f: &KGraph, a: std::ops::Range<usize>, b: std::ops::Range<usize>) -> bool {
    f.edges().any(|e| (a.contains(&e[0]) && b.contains(&e[1])) || (b.contains(&e[0]) && a.contains(&e[1])))
}

/// Ordered cone test; returns a failing class pair `(i, j)` (0-based) when not a cone.
pub fn is_ordered_cone(f: &KGraph) -> Result<std::result::Result<(), (usize, usize)>> {
    let table = interval_table(f)?;
    let (r, _) = interval_chromatic(f)?;
    if r < 2 {
        return Err(Error::input(format!("ordered cones need interval chromatic number >= 2, got {r}")));
    }
    let c = r + 1;
    let mut good = vec![vec![false; c]; c];
    for_each_interval_coloring(&table, c, &mut |sizes| {
        let starts: Vec<usize> = sizes.iter().scan(0, |acc, &s| {
            let st = *acc;
            *acc += s;
            Some(st)
        }).collect();
        for i in 0..c {
            if sizes[i] != 1 {
                continue;
            }
            for jj in 0..c {
                if jj != i
                    && !good[i][jj]
                    && !has_edge_between(f, starts[i]..starts[i] + 1, starts[jj]..starts[jj] + sizes[jj])
                {
                    good[i][jj] = true;
                }
            }
        }
        true
    });
    for i in 0..c {
        for jj in 0..c {
            if i != jj && !good[i][jj] {
                return Ok(Err((i, jj)));
            }
        }
    }
    Ok(Ok(()))
}

/// Complete multipartite 2-graph with the given part sizes laid out in the order `sigma`.
pub fn ordered_blowup(parts: &[usize], sigma: &[usize], b: usize) -> Result<KGraph> {
    let mut offsets = vec![0usize; parts.len()];
    let mut at = 0;
    for &p in sigma {
        offsets[p] = at;
        at += parts[p] * b;
    }
    let mut edges = Vec::new();
    for x in 0..parts.len() {
        for y in x + 1..parts.len() {
            for u in offsets[x]..offsets[x] + parts[x] * b {
                for v in offsets[y]..offsets[y] + parts[y] * b {
                    edges.push([u, v]);
                }
            }
        }
    }
    KGraph::new(2, at, edges)
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    fn heap(p: &mut Vec<usize>, size: usize, out: &mut Vec<Vec<usize>>) {
        if size <= 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..size {
            heap(p, size - 1, out);
            if size % 2 == 1 {
                p.swap(0, size - 1);
            } else {
                p.swap(i, size - 1);
            }
        }
    }
    heap(&mut p, k, &mut out);
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderVerdict {
    pub sigma: Vec<usize>,
    /// Least `b` whose ordered blow-up was tiled.
    pub b: Option<usize>,
    /// `Inconclusive` when no `b <= b_max` worked or a search ran out of budget.
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BottleReport {
    pub parts: Vec<usize>,
    pub b_max: usize,
    pub verdicts: Vec<OrderVerdict>,
    /// True when every ordering was tiled; failures are never conclusive.
    pub confirmed: bool,
}

/// Searches, for each ordering of the parts, a blow-up factor `b <= b_max`
/// whose ordered complete multipartite host has a perfect ordered `f`-tiling.
pub fn bottlegraph_check(parts: &[usize], f: &KGraph, b_max: usize, budget: u64) -> Result<BottleReport> {
    if parts.is_empty() || parts.contains(&0) {
        return Err(Error::input("bottlegraph parts must be nonempty"));
    }
    if f.k() != 2 || f.n() == 0 {
        return Err(Error::input("bottlegraph tiles are nonempty 2-graphs"));
    }
    let mut verdicts = Vec::new();
    for sigma in permutations(parts.len()) {
        let mut verdict = OrderVerdict { sigma: sigma.clone(), b: None, outcome: Outcome::Inconclusive };
        for b in 1..=b_max {
            let host = ordered_blowup(parts, &sigma, b)?;
            if host.n() % f.n() != 0 {
                continue;
            }
            let lift = ordered_hom_digraph(f, &host)?;
            let r = exact_perfect_matching_with(&lift.digraph, budget);
            if r.outcome == Outcome::Found {
                verdict.b = Some(b);
                verdict.outcome = Outcome::Found;
                break;
            }
        }
        verdicts.push(verdict);
    }
    let confirmed = verdicts.iter().all(|v| v.outcome == Outcome::Found);
    Ok(BottleReport { parts: parts.to_vec(), b_max, verdicts, confirmed })
}

/// Critical chromatic number of a complete multipartite graph with these parts.
pub fn partite_chi_crit(parts: &[usize]) -> Q {
    if parts.len() < 2 {
        return qi(1);
    }
    let total: usize = parts.iter().sum();
    let smallest = *parts.iter().min().expect("nonempty");
    qi(parts.len() as i64 - 1) / (qi(1) - q(smallest as i64, total as i64))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BottleLimits {
    /// Largest part size tried.
    pub max_part: usize,
    /// Part counts tried above the interval chromatic number.
    pub extra_parts: usize,
    pub b_max: usize,
    pub budget: u64,
}

impl Default for BottleLimits {
    fn default() -> Self {
        BottleLimits { max_part: 2, extra_parts: 1, b_max: 2, budget: 200_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderedProfile {
    pub chi_interval: usize,
    pub coloring: IntervalColoring,
    pub zero_flexible: bool,
    pub one_flexible: bool,
    /// `None` when the interval chromatic number is below 2.
    pub ordered_cone: Option<bool>,
    /// Always `chi_interval - 1`.
    pub chi_crit_lower: usize,
    /// Least critical chromatic number among confirmed bottlegraphs, if any was found.
    #[serde(with = "crate::rational::serde_opt_q")]
    pub chi_crit_upper: Option<Q>,
    pub best_bottlegraph: Option<Vec<usize>>,
    pub limits: BottleLimits,
}

pub fn ordered_profile(f: &KGraph, limits: &BottleLimits) -> Result<OrderedProfile> {
    let (r, coloring) = interval_chromatic(f)?;
    let zero = is_j_flexible(f, 0)?.holds;
    let one = is_j_flexible(f, 1)?.holds;
    let cone = if r >= 2 { Some(is_ordered_cone(f)?.is_ok()) } else { None };
    let mut best: Option<(Q, Vec<usize>)> = None;
    for k in r.max(1)..=r + limits.extra_parts {
        let mut parts = vec![1usize; k];
        loop {
            let value = partite_chi_crit(&parts);
            let better = best.as_ref().is_none_or(|(b, _)| value < *b);
            if better && bottlegraph_check(&parts, f, limits.b_max, limits.budget)?.confirmed {
                best = Some((value, parts.clone()));
            }
            // next nondecreasing part vector
            let Some(pos) = (0..k).rev().find(|&i| parts[i] < limits.max_part) else { break };
            let v = parts[pos] + 1;
            for p in &mut parts[pos..] {
                *p = v;
            }
        }
    }
    Ok(OrderedProfile {
        chi_interval: r,
        coloring,
        zero_flexible: zero,
        one_flexible: one,
        ordered_cone: cone,
        chi_crit_lower: r.saturating_sub(1),
        chi_crit_upper: best.as_ref().map(|(v, _)| v.clone()),
        best_bottlegraph: best.map(|(_, p)| p),
        limits: limits.clone(),
    })
}

// ---------------------------------------------------------------------------
// uniform density

/// Number of tuples `(v_1, ..., v_k)` of distinct vertices with `v_i ∈ X_i`
/// whose underlying set is an edge.
pub fn edge_tuples(g: &KGraph, xs: &[Vec<bool>]) -> u64 {
    let k = g.k();
    let perms = permutations(k);
    g.edges()
        .map(|e| perms.iter().filter(|p| (0..k).all(|i| xs[i][e[p[i]]])).count() as u64)
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum DensityMode {
    Exact,
    Sampled { seed: u64, trials: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub holds: bool,
    /// A violating tuple of vertex sets.
    pub witness: Option<Vec<Vec<usize>>>,
    /// Subtracted slack `eps * n^exponent`.
    #[serde(with = "serde_q")]
    pub slack: Q,
    pub slack_exponent: u32,
    pub checked: u64,
    pub mode: DensityMode,
}

/// Largest `k * n` for exhaustive density checks.
pub const DENSITY_EXACT_CAP: usize = 24;

/// Checks `e(X_1..X_k) >= d |X_1|...|X_k| - eps n^exponent` for all (exact)
/// or random (sampled, one-sided) tuples of vertex sets.
pub fn is_uniformly_dense(g: &KGraph, eps: &Q, d: &Q, exponent: u32, mode: &DensityMode) -> Result<DensityReport> {
    let n = g.n();
    let k = g.k();
    let slack = eps * Q::from_integer(num_bigint::BigInt::from(n).pow(exponent));
    let violates = |xs: &[Vec<bool>]| {
        let product: i64 = xs.iter().map(|x| x.iter().filter(|&&b| b).count() as i64).product();
        let e = edge_tuples(g, xs) as i64;
        qi(e) < d * qi(product) - &slack
    };
    let to_sets = |xs: &[Vec<bool>]| -> Vec<Vec<usize>> {
        xs.iter().map(|x| (0..n).filter(|&v| x[v]).collect()).collect()
    };
    let mut report = DensityReport { holds: true, witness: None, slack: slack.clone(), slack_exponent: exponent, checked: 0, mode: mode.clone() };
    match mode {
        DensityMode::Exact => {
            if k * n > DENSITY_EXACT_CAP {
                return Err(Error::Resource { what: "exact density bits", cap: DENSITY_EXACT_CAP as u64 });
            }
            let total = 1u64 << (k * n);
            let mut xs = vec![vec![false; n]; k];
            for code in 0..total {
                for (i, x) in xs.iter_mut().enumerate() {
                    for (v, slot) in x.iter_mut().enumerate() {
                        *slot = code >> (i * n + v) & 1 == 1;
                    }
                }
                report.checked += 1;
                if violates(&xs) {
                    report.holds = false;
                    report.witness = Some(to_sets(&xs));
                    break;
                }
            }
        }
        DensityMode::Sampled { seed, trials } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            for _ in 0..*trials {
                let xs: Vec<Vec<bool>> = (0..k).map(|_| (0..n).map(|_| rng.random::<bool>()).collect()).collect();
                report.checked += 1;
                if violates(&xs) {
                    report.holds = false;
                    report.witness = Some(to_sets(&xs));
                    break;
                }
            }
        }
    }
    Ok(report)
}
