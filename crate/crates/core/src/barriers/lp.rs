//! Fractional matchings and covers by exact rational simplex.
//!
//! The primal is `max Σ ω(e)` subject to `Σ_e ω(e)·mult(v,e) ≤ 1` for every
//! vertex. Edges with equal indicator vectors give identical columns, so
//! one representative per vector is kept. The dual (a minimum fractional
//! cover) is read from the slack columns of the final tableau.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::rational::{serde_q, serde_q_vec, Q};

/// Default cap on the number of distinct LP columns.
pub const DEFAULT_LP_CAP: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedEdge {
    pub edge: Vec<usize>,
    #[serde(with = "serde_q")]
    pub weight: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionalMatching {
    /// Edges with positive weight.
    pub weights: Vec<WeightedEdge>,
    #[serde(with = "serde_q")]
    pub size: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionalCover {
    #[serde(with = "serde_q_vec")]
    pub weights: Vec<Q>,
    #[serde(with = "serde_q")]
    pub size: Q,
}

impl FractionalMatching {
    /// Vertex loads `Σ_e ω(e)·mult(v,e)`.
    pub fn loads(&self, n: usize) -> Vec<Q> {
        let mut load = vec![Q::zero(); n];
        for we in &self.weights {
            for &v in &we.edge {
                if v < n {
                    load[v] += &we.weight;
                }
            }
        }
        load
    }

    pub fn verify(&self, h: &Digraph) -> Result<()> {
        let mut total = Q::zero();
        for we in &self.weights {
            if !h.contains(&we.edge) {
                return Err(Error::input(format!("{:?} is not an edge", we.edge)));
            }
            if we.weight.is_negative() || we.weight > Q::one() {
                return Err(Error::input("edge weight outside [0,1]"));
            }
            total += &we.weight;
        }
        if total != self.size {
            return Err(Error::input("stated size differs from the weight sum"));
        }
        if self.loads(h.n()).iter().any(|l| *l > Q::one()) {
            return Err(Error::input("a vertex is overloaded"));
        }
        Ok(())
    }
}

impl FractionalCover {
    pub fn verify(&self, h: &Digraph) -> Result<()> {
        if self.weights.len() != h.n() {
            return Err(Error::input("cover has the wrong length"));
        }
        if self.weights.iter().any(Signed::is_negative) {
            return Err(Error::input("negative cover weight"));
        }
        let total: Q = self.weights.iter().sum();
        if total != self.size {
            return Err(Error::input("stated size differs from the weight sum"));
        }
        for e in h.edges() {
            let cov = edge_coverage(&self.weights, e);
            if cov < Q::one() {
                return Err(Error::input(format!("edge {e:?} is under-covered")));
            }
        }
        Ok(())
    }
}

/// Checks complementary slackness for an optimal pair.
pub fn complementary_slackness(h: &Digraph, w: &FractionalMatching, c: &FractionalCover) -> bool {
    let edge_tight = w.weights.iter().all(|we| {
        let cov = edge_coverage(&c.weights, &we.edge);
        we.weight.is_zero() || cov == Q::one()
    });
    let loads = w.loads(h.n());
    let vertex_tight = c
        .weights
        .iter()
        .zip(&loads)
        .all(|(cv, l)| cv.is_zero() || l.is_one());
    edge_tight && vertex_tight
}

/// Optimal primal/dual pair with `ν = λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub matching: FractionalMatching,
    pub cover: FractionalCover,
}

struct Tableau {
    rows: usize,
    cols: usize,
    /// `rows` constraint rows then the objective row, each `cols + 1` wide (rhs last).
    a: Vec<Vec<Q>>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c].clone();
        for x in self.a[r].iter_mut() {
            *x /= &p;
        }
        let pivot_row = self.a[r].clone();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximises with Bland's rule. The objective row stores reduced costs.
    fn solve(&mut self) {
        loop {
            let obj = &self.a[self.rows];
            let Some(enter) = (0..self.cols).find(|&j| obj[j].is_positive()) else {
                return;
            };
            let mut leave: Option<(usize, Q)> = None;
            for i in 0..self.rows {
                let aij = &self.a[i][enter];
                if !aij.is_positive() {
                    continue;
                }
                let ratio = &self.a[i][self.cols] / aij;
                let better = match &leave {
                    None => true,
                    Some((r, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            // the feasible region is bounded (each column has a positive entry)
            let (r, _) = leave.expect("bounded LP");
            self.pivot(r, enter);
        }
    }
}

/// Solves the fractional matching LP and its dual exactly.
pub fn solve_lp(h: &Digraph, cap: usize) -> Result<LpSolution> {
    let n = h.n();
    // one column per distinct indicator vector
    let mut reps: Vec<(Vec<u32>, usize)> = Vec::new();
    {
        let mut seen = std::collections::HashMap::new();
        for (i, e) in h.edges().enumerate() {
            let mut ind = vec![0u32; n];
            for &v in e {
                ind[v] += 1;
            }
            seen.entry(ind.clone()).or_insert_with(|| {
                reps.push((ind, i));
            });
        }
    }
    if reps.len() > cap {
        return Err(Error::Resource { what: "LP columns", cap: cap as u64 });
    }
    let ecols = reps.len();
    let cols = ecols + n;
    let mut a = vec![vec![Q::zero(); cols + 1]; n + 1];
    for (j, (ind, _)) in reps.iter().enumerate() {
        for v in 0..n {
            if ind[v] != 0 {
                a[v][j] = Q::from_integer(ind[v].into());
            }
        }
        a[n][j] = Q::one();
    }
    for v in 0..n {
        a[v][ecols + v] = Q::one();
        a[v][cols] = Q::one();
    }
    let mut t = Tableau { rows: n, cols, a, basis: (ecols..cols).collect() };
    t.solve();

    let mut weights = Vec::new();
    let mut size = Q::zero();
    for (i, &b) in t.basis.iter().enumerate() {
        if b < ecols && !t.a[i][cols].is_zero() {
            let w = t.a[i][cols].clone();
            size += &w;
            weights.push(WeightedEdge { edge: h.edge(reps[b].1).to_vec(), weight: w });
        }
    }
    weights.sort_by(|x, y| x.edge.cmp(&y.edge));
    let cover_w: Vec<Q> = (0..n).map(|v| -t.a[n][ecols + v].clone()).collect();
    let cover_size: Q = cover_w.iter().sum();
    debug_assert_eq!(size, cover_size);
    Ok(LpSolution {
        matching: FractionalMatching { weights, size },
        cover: FractionalCover { weights: cover_w, size: cover_size },
    })
}

/// `ν(H)` with an optimal fractional matching.
pub fn max_fractional_matching(h: &Digraph) -> Result<FractionalMatching> {
    Ok(solve_lp(h, DEFAULT_LP_CAP)?.matching)
}

/// `λ(H)` with an optimal fractional cover.
pub fn min_fractional_cover(h: &Digraph) -> Result<FractionalCover> {
    Ok(solve_lp(h, DEFAULT_LP_CAP)?.cover)
}

/// The multiplicity-weighted load of a single edge under a cover.
pub fn edge_coverage(c: &[Q], e: &[usize]) -> Q {
    e.iter().map(|&v| &c[v]).sum()
}
