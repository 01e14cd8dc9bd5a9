//! The edge lattice `𝓛(H)`: integer span of the edge indicator vectors,
//! kept in Hermite normal form.
//!
//! Basis vectors are stored as rows in echelon order (pivot columns strictly
//! increasing, pivots positive, entries above each pivot reduced into
//! `[0, pivot)`). Read as columns this is the column-style HNF.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{indicator_vector, Digraph, Partition};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    dim: usize,
    rows: Vec<Vec<i128>>,
    pivots: Vec<usize>,
    /// Per row: coefficients over the generators (present when tracked).
    combos: Option<Vec<Vec<i128>>>,
    generators: Vec<Vec<usize>>,
}

fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow("lattice arithmetic"))
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow("lattice arithmetic"))
}

/// `x <- s*x + t*y`.
fn combine(x: &[i128], s: i128, y: &[i128], t: i128) -> Result<Vec<i128>> {
    x.iter().zip(y).map(|(&a, &b)| add(mul(s, a)?, mul(t, b)?)).collect()
}

/// Returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b) > 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let qt = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - qt * r1);
        (s0, s1) = (s1, s0 - qt * s1);
        (t0, t1) = (t1, t0 - qt * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

impl LatticeBasis {
    /// HNF of the lattice generated by `generators` (vectors of length `dim`).
    pub fn from_vectors(dim: usize, generators: &[Vec<i128>], track: bool) -> Result<Self> {
        let mut basis = LatticeBasis {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: track.then(Vec::new),
            generators: Vec::new(),
        };
        let g = generators.len();
        for (i, v) in generators.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::input("generator has the wrong dimension"));
            }
            let combo = track.then(|| {
                let mut c = vec![0i128; g];
                c[i] = 1;
                c
            });
            basis.insert(v.clone(), combo)?;
        }
        basis.reduce()?;
        Ok(basis)
    }

    fn insert(&mut self, mut v: Vec<i128>, mut combo: Option<Vec<i128>>) -> Result<()> {
        let mut r = 0;
        loop {
            let Some(lead) = v.iter().position(|&x| x != 0) else {
                return Ok(());
            };
            while r < self.rows.len() && self.pivots[r] < lead {
                r += 1;
            }
            if r == self.rows.len() || self.pivots[r] > lead {
                if v[lead] < 0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                    if let Some(c) = combo.as_mut() {
                        c.iter_mut().for_each(|x| *x = -*x);
                    }
                }
                self.rows.insert(r, v);
                self.pivots.insert(r, lead);
                if let (Some(cs), Some(c)) = (self.combos.as_mut(), combo) {
                    cs.insert(r, c);
                }
                return Ok(());
            }
            let (a, b) = (self.rows[r][lead], v[lead]);
            if b % a == 0 {
                let f = b / a;
                v = combine(&v, 1, &self.rows[r], -f)?;
                if let (Some(cs), Some(c)) = (self.combos.as_ref(), combo.as_mut()) {
                    *c = combine(c, 1, &cs[r], -f)?;
                }
            } else {
                let (g, s, t) = ext_gcd(a, b);
                let new_row = combine(&self.rows[r], s, &v, t)?;
                let new_v = combine(&v, a / g, &self.rows[r], -(b / g))?;
                if let (Some(cs), Some(c)) = (self.combos.as_mut(), combo.as_mut()) {
                    let new_c = combine(&cs[r], s, c, t)?;
                    *c = combine(c, a / g, &cs[r], -(b / g))?;
                    cs[r] = new_c;
                }
                self.rows[r] = new_row;
                v = new_v;
            }
        }
    }

    /// Reduces entries above each pivot into `[0, pivot)`.
    fn reduce(&mut self) -> Result<()> {
        for i in 0..self.rows.len() {
            let p = self.pivots[i];
            let d = self.rows[i][p];
            for j in 0..i {
                let f = self.rows[j][p].div_euclid(d);
                if f != 0 {
                    self.rows[j] = combine(&self.rows[j], 1, &self.rows[i], -f)?;
                    if let Some(cs) = self.combos.as_mut() {
                        cs[j] = combine(&cs[j], 1, &cs[i], -f)?;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Basis vectors in pivot order.
    pub fn vectors(&self) -> &[Vec<i128>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Index of the lattice in `ℤ^dim` when it has full rank.
    pub fn determinant(&self) -> Option<i128> {
        (self.rank() == self.dim).then(|| self.rows.iter().zip(&self.pivots).map(|(r, &p)| r[p]).product())
    }

    /// Writes `b` in the basis; `None` when `b` is outside the lattice.
    fn solve(&self, b: &[i128]) -> Result<Option<Vec<i128>>> {
        if b.len() != self.dim {
            return Err(Error::input(format!("vector of length {} in dimension {}", b.len(), self.dim)));
        }
        let mut rest = b.to_vec();
        let mut coeffs = vec![0i128; self.rows.len()];
        for (i, row) in self.rows.iter().enumerate() {
            let p = self.pivots[i];
            if rest[p] % row[p] != 0 {
                return Ok(None);
            }
            let f = rest[p] / row[p];
            if f != 0 {
                rest = combine(&rest, 1, row, -f)?;
                coeffs[i] = f;
            }
        }
        Ok(rest.iter().all(|&x| x == 0).then_some(coeffs))
    }

    pub fn contains(&self, b: &[i128]) -> Result<bool> {
        Ok(self.solve(b)?.is_some())
    }
}

/// HNF of `𝓛(H)`.
pub fn lattice_basis(h: &Digraph) -> Result<LatticeBasis> {
    build(h, false)
}

fn build(h: &Digraph, track: bool) -> Result<LatticeBasis> {
    let mut gens: Vec<Vec<i128>> = Vec::new();
    let mut edges: Vec<Vec<usize>> = Vec::new();
    for e in h.edges() {
        let ind: Vec<i128> = indicator_vector(e, h.n())?.into_iter().map(i128::from).collect();
        if !gens.contains(&ind) {
            gens.push(ind);
            edges.push(e.to_vec());
        }
    }
    let mut basis = LatticeBasis::from_vectors(h.n(), &gens, track)?;
    basis.generators = edges;
    Ok(basis)
}

pub fn in_lattice(basis: &LatticeBasis, b: &[i128]) -> Result<bool> {
    basis.contains(b)
}

/// Integer coefficients on edges with `Σ c_e·1_e = b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeCombination {
    pub terms: Vec<(Vec<usize>, i64)>,
}

impl LatticeCombination {
    pub fn evaluate(&self, n: usize) -> Result<Vec<i128>> {
        let mut out = vec![0i128; n];
        for (e, c) in &self.terms {
            for &v in e {
                if v >= n {
                    return Err(Error::input("combination uses a vertex outside the digraph"));
                }
                out[v] = add(out[v], *c as i128)?;
            }
        }
        Ok(out)
    }

    pub fn verify(&self, h: &Digraph, b: &[i128]) -> bool {
        self.terms.iter().all(|(e, _)| h.contains(e)) && self.evaluate(h.n()).is_ok_and(|v| v == b)
    }
}

/// A basis that can also express members in terms of the edges of `H`.
pub struct LatticeSolver {
    basis: LatticeBasis,
}

impl LatticeSolver {
    pub fn new(h: &Digraph) -> Result<Self> {
        Ok(LatticeSolver { basis: build(h, true)? })
    }

    pub fn basis(&self) -> &LatticeBasis {
        &self.basis
    }

    pub fn express(&self, b: &[i128]) -> Result<Option<LatticeCombination>> {
        let Some(coeffs) = self.basis.solve(b)? else {
            return Ok(None);
        };
        let combos = self.basis.combos.as_ref().expect("tracked basis");
        let mut per_edge = vec![0i128; self.basis.generators.len()];
        for (row, &f) in combos.iter().zip(&coeffs) {
            if f != 0 {
                per_edge = combine(&per_edge, 1, row, f)?;
            }
        }
        let terms = per_edge
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .map(|(i, c)| {
                let c = i64::try_from(c).map_err(|_| Error::Overflow("lattice coefficients"))?;
                Ok((self.basis.generators[i].clone(), c))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(LatticeCombination { terms }))
    }
}

pub fn express_in_lattice(h: &Digraph, b: &[i128]) -> Result<Option<LatticeCombination>> {
    LatticeSolver::new(h)?.express(b)
}

/// `1_v - 1_u` in dimension `n`.
pub fn transferral(n: usize, v: usize, u: usize) -> Vec<i128> {
    let mut t = vec![0i128; n];
    t[v] += 1;
    t[u] -= 1;
    t
}

/// Whether `𝓛(H)` contains every transferral inside each part of `parts`
/// (all of `V(H)` when `None`). On failure returns a pair `(root, v)` whose
/// transferral is missing.
pub fn is_lattice_complete(h: &Digraph, parts: Option<&Partition>) -> Result<Option<(usize, usize)>> {
    let basis = lattice_basis(h)?;
    let whole: Vec<Vec<usize>> = vec![(0..h.n()).collect()];
    let groups: &[Vec<usize>] = match parts {
        Some(p) => {
            if p.ground_size() != h.n() || p.parts().iter().flatten().any(|&v| v >= h.n()) {
                return Err(Error::input("partition does not match the digraph's vertex set"));
            }
            p.parts()
        }
        None => &whole,
    };
    for part in groups {
        let Some(&root) = part.iter().min() else { continue };
        for &v in part {
            if v != root && !basis.contains(&transferral(h.n(), v, root))? {
                return Ok(Some((root, v)));
            }
        }
    }
    Ok(None)
}
