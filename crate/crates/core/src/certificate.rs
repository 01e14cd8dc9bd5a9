//! Serializable certificates for yes/no decisions, and their re-verification.
//!
//! A certificate names the property, the verdict and a witness, and is bound
//! to its instance by the SHA-256 of the instance's canonical text form.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::barriers::lattice::{lattice_basis, transferral, LatticeCombination, LatticeSolver};
use crate::barriers::lp::{solve_lp, FractionalCover, FractionalMatching, DEFAULT_LP_CAP};
use crate::barriers::{has_space, is_covered, space_target, SpaceVerdict};
use crate::error::{Error, Result};
use crate::graph::{Digraph, KGraph, Matching, Partition, Tiling};
use crate::homlift::{is_fissile, FissilityViolation};
use crate::io::{digraph_to_text, kgraph_to_text};
use crate::rational::{fmt_q, parse_q, Q};
use crate::solver::exact_perfect_matching_with;
use crate::solver::Outcome;

pub const SCHEMA: &str = "tiling-lab/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropertyTag {
    Space,
    Div,
    Cov,
    Fissile,
    Matching,
    Tiling,
}

impl PropertyTag {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "spa" | "space" => PropertyTag::Space,
            "div" => PropertyTag::Div,
            "cov" => PropertyTag::Cov,
            "fissile" | "fis" => PropertyTag::Fissile,
            "matching" => PropertyTag::Matching,
            "tiling" => PropertyTag::Tiling,
            other => return Err(Error::input(format!("unknown property {other:?}"))),
        })
    }
}

/// One transferral `1_v − 1_root` written over the edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transferral {
    pub root: usize,
    pub v: usize,
    pub combination: LatticeCombination,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    FractionalMatching(FractionalMatching),
    FractionalCover(FractionalCover),
    Transferrals { parts: Option<Partition>, items: Vec<Transferral> },
    FailingPair { parts: Option<Partition>, u: usize, v: usize },
    CoverEdges { edges: Vec<Vec<usize>> },
    FailingVertex { v: usize },
    Fissile { max_parts: usize },
    Violation(FissilityViolation),
    Matching(Matching),
    /// Exhaustive search found nothing; verification repeats it.
    Exhaustive { nodes: u64 },
    Tiling { tile_k: usize, tile_n: usize, tile_edges: Vec<Vec<usize>>, tiling: Tiling },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub property: PropertyTag,
    pub holds: bool,
    /// The `ρ` of a space certificate, as `p/q`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<String>,
    pub witness: Witness,
    pub instance_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn digraph_hash(h: &Digraph) -> String {
    sha256_hex(&digraph_to_text(h))
}

pub fn kgraph_hash(g: &KGraph) -> String {
    sha256_hex(&kgraph_to_text(g))
}

fn cert(property: PropertyTag, holds: bool, witness: Witness, hash: String) -> Certificate {
    Certificate { schema: SCHEMA.into(), property, holds, rho: None, witness, instance_hash: hash, seed: None }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::Input(format!("certificate rejected: {}", msg.into()))
}

pub fn certify_space(h: &Digraph, rho: &Q) -> Result<Certificate> {
    let (holds, witness) = match has_space(h, rho)? {
        SpaceVerdict::Holds(m) => (true, Witness::FractionalMatching(m)),
        SpaceVerdict::Fails(c) => (false, Witness::FractionalCover(c)),
    };
    let mut c = cert(PropertyTag::Space, holds, witness, digraph_hash(h));
    c.rho = Some(fmt_q(rho));
    Ok(c)
}

pub fn certify_div(h: &Digraph, parts: Option<&Partition>) -> Result<Certificate> {
    let n = h.n();
    let groups: Vec<Vec<usize>> = match parts {
        Some(p) => {
            if p.ground_size() != n {
                return Err(Error::input("partition does not match the digraph's vertex set"));
            }
            p.parts().to_vec()
        }
        None => vec![(0..n).collect()],
    };
    let solver = LatticeSolver::new(h)?;
    let mut items = Vec::new();
    for part in &groups {
        let Some(&root) = part.iter().min() else { continue };
        for &v in part {
            if v == root {
                continue;
            }
            match solver.express(&transferral(n, v, root))? {
                Some(combination) => items.push(Transferral { root, v, combination }),
                None => {
                    let w = Witness::FailingPair { parts: parts.cloned(), u: root, v };
                    return Ok(cert(PropertyTag::Div, false, w, digraph_hash(h)));
                }
            }
        }
    }
    let w = Witness::Transferrals { parts: parts.cloned(), items };
    Ok(cert(PropertyTag::Div, true, w, digraph_hash(h)))
}

pub fn certify_cov(h: &Digraph) -> Certificate {
    let (holds, w) = match is_covered(h) {
        Ok(edges) => (true, Witness::CoverEdges { edges }),
        Err(v) => (false, Witness::FailingVertex { v }),
    };
    cert(PropertyTag::Cov, holds, w, digraph_hash(h))
}

pub fn certify_fissile(h: &Digraph, max_parts: usize, cap: u64) -> Result<Certificate> {
    let (holds, w) = match is_fissile(h, max_parts, cap)? {
        None => (true, Witness::Fissile { max_parts }),
        Some(v) => (false, Witness::Violation(v)),
    };
    Ok(cert(PropertyTag::Fissile, holds, w, digraph_hash(h)))
}

/// Perfect matching certificate; an exhausted budget is a resource error.
pub fn certify_matching(h: &Digraph, budget: u64) -> Result<Certificate> {
    let r = exact_perfect_matching_with(h, budget);
    let (holds, w) = match r.outcome {
        Outcome::Found => (true, Witness::Matching(r.witness.expect("found has a witness"))),
        Outcome::None => (false, Witness::Exhaustive { nodes: r.nodes }),
        Outcome::Inconclusive => return Err(Error::Resource { what: "search nodes", cap: budget }),
    };
    Ok(cert(PropertyTag::Matching, holds, w, digraph_hash(h)))
}

/// Certificate for a perfect matching found by any solver.
pub fn certify_found_matching(h: &Digraph, m: Matching) -> Result<Certificate> {
    if !m.is_perfect_in(h) {
        return Err(Error::input("matching is not perfect"));
    }
    Ok(cert(PropertyTag::Matching, true, Witness::Matching(m), digraph_hash(h)))
}

/// Certificate for an exhaustive search that found no perfect matching.
pub fn certify_no_matching(h: &Digraph, nodes: u64) -> Certificate {
    cert(PropertyTag::Matching, false, Witness::Exhaustive { nodes }, digraph_hash(h))
}

/// A tiling certificate for host `g`; the tile travels inside the witness.
pub fn certify_tiling(tile: &KGraph, g: &KGraph, tiling: Tiling) -> Certificate {
    let w = Witness::Tiling {
        tile_k: tile.k(),
        tile_n: tile.n(),
        tile_edges: tile.edges().map(<[usize]>::to_vec).collect(),
        tiling,
    };
    cert(PropertyTag::Tiling, true, w, kgraph_hash(g))
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let c: Certificate = serde_json::from_str(src).map_err(|e| Error::input(format!("certificate JSON: {e}")))?;
        if c.schema != SCHEMA {
            return Err(Error::input(format!("unsupported schema {:?}", c.schema)));
        }
        Ok(c)
    }

    /// Re-checks the certificate against a digraph instance. `Err(Input)`
    /// means the certificate is wrong; `Err(Resource)` means re-checking a
    /// negative verdict ran out of budget.
    pub fn verify(&self, h: &Digraph, budget: u64) -> Result<()> {
        if self.instance_hash != digraph_hash(h) {
            return Err(invalid("instance hash mismatch"));
        }
        match (self.property, self.holds, &self.witness) {
            (PropertyTag::Space, holds, w) => {
                let rho = parse_q(self.rho.as_deref().ok_or_else(|| invalid("space certificate without rho"))?)?;
                let target = space_target(h, &rho);
                match (holds, w) {
                    (true, Witness::FractionalMatching(m)) => {
                        m.verify(h).map_err(|e| invalid(e.to_string()))?;
                        if m.size < target {
                            return Err(invalid("fractional matching is too small"));
                        }
                    }
                    (false, Witness::FractionalCover(c)) => {
                        c.verify(h).map_err(|e| invalid(e.to_string()))?;
                        if c.size >= target {
                            return Err(invalid("fractional cover is not small enough"));
                        }
                    }
                    _ => return Err(invalid("witness does not fit a space verdict")),
                }
            }
            (PropertyTag::Div, true, Witness::Transferrals { parts, items }) => {
                let groups = groups_of(parts.as_ref(), h.n())?;
                for part in &groups {
                    let Some(&root) = part.iter().min() else { continue };
                    for &v in part.iter().filter(|&&v| v != root) {
                        let t = items
                            .iter()
                            .find(|t| t.root == root && t.v == v)
                            .ok_or_else(|| invalid(format!("no transferral for ({root}, {v})")))?;
                        if !t.combination.verify(h, &transferral(h.n(), v, root)) {
                            return Err(invalid(format!("combination for ({root}, {v}) does not evaluate")));
                        }
                    }
                }
            }
            (PropertyTag::Div, false, Witness::FailingPair { parts, u, v }) => {
                let groups = groups_of(parts.as_ref(), h.n())?;
                if *u >= h.n() || *v >= h.n() || !groups.iter().any(|p| p.contains(u) && p.contains(v)) {
                    return Err(invalid("failing pair is not inside one part"));
                }
                if lattice_basis(h)?.contains(&transferral(h.n(), *v, *u))? {
                    return Err(invalid("the pair's transferral is in the lattice"));
                }
            }
            (PropertyTag::Cov, true, Witness::CoverEdges { edges }) => {
                if edges.len() != h.n() {
                    return Err(invalid("one edge per vertex expected"));
                }
                for (v, e) in edges.iter().enumerate() {
                    if !h.contains(e) || e.iter().filter(|&&x| x == v).count() != 1 {
                        return Err(invalid(format!("edge for vertex {v} does not cover it once")));
                    }
                }
            }
            (PropertyTag::Cov, false, Witness::FailingVertex { v }) => {
                if *v >= h.n() || h.edges().any(|e| e.iter().filter(|&&x| x == *v).count() == 1) {
                    return Err(invalid(format!("vertex {v} is covered")));
                }
            }
            (PropertyTag::Fissile, true, Witness::Fissile { max_parts }) => {
                if is_fissile(h, *max_parts, budget)?.is_some() {
                    return Err(invalid("digraph is not fissile"));
                }
            }
            (PropertyTag::Fissile, false, Witness::Violation(v)) => {
                if !v.verify(h) {
                    return Err(invalid("violation does not re-verify"));
                }
            }
            (PropertyTag::Matching, true, Witness::Matching(m)) => {
                if !m.is_perfect_in(h) {
                    return Err(invalid("matching is not perfect"));
                }
            }
            (PropertyTag::Matching, false, Witness::Exhaustive { .. }) => {
                let r = exact_perfect_matching_with(h, budget);
                match r.outcome {
                    Outcome::None => {}
                    Outcome::Found => return Err(invalid("a perfect matching exists")),
                    Outcome::Inconclusive => return Err(Error::Resource { what: "search nodes", cap: budget }),
                }
            }
            _ => return Err(invalid("property, verdict and witness do not match")),
        }
        Ok(())
    }

    /// Re-checks a tiling certificate against its host.
    pub fn verify_tiling(&self, host: &KGraph) -> Result<()> {
        if self.instance_hash != kgraph_hash(host) {
            return Err(invalid("instance hash mismatch"));
        }
        let (PropertyTag::Tiling, true, Witness::Tiling { tile_k, tile_n, tile_edges, tiling }) =
            (self.property, self.holds, &self.witness)
        else {
            return Err(invalid("not a tiling certificate"));
        };
        let tile = KGraph::new(*tile_k, *tile_n, tile_edges.clone()).map_err(|e| invalid(e.to_string()))?;
        if !tiling.is_perfect_in(&tile, host) {
            return Err(invalid("tiling is not perfect"));
        }
        Ok(())
    }
}

fn groups_of(parts: Option<&Partition>, n: usize) -> Result<Vec<Vec<usize>>> {
    match parts {
        Some(p) if p.ground_size() == n && p.parts().iter().flatten().all(|&v| v < n) => Ok(p.parts().to_vec()),
        Some(_) => Err(invalid("partition does not match the instance")),
        None => Ok(vec![(0..n).collect()]),
    }
}

/// Space certificate built from a precomputed LP, used when ν is needed too.
pub fn space_from_lp(h: &Digraph, rho: &Q) -> Result<(Q, Certificate)> {
    let sol = solve_lp(h, DEFAULT_LP_CAP)?;
    let nu = sol.matching.size.clone();
    let holds = nu >= space_target(h, rho);
    let w = if holds { Witness::FractionalMatching(sol.matching) } else { Witness::FractionalCover(sol.cover) };
    let mut c = cert(PropertyTag::Space, holds, w, digraph_hash(h));
    c.rho = Some(fmt_q(rho));
    Ok((nu, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homlift::hom_digraph;
    use crate::rational::q;

    fn k2_on(g: &KGraph) -> Digraph {
        hom_digraph(&KGraph::complete(2, 2).unwrap(), g).unwrap().digraph
    }

    fn roundtrip(c: &Certificate) -> Certificate {
        Certificate::from_json(&c.to_json()).unwrap()
    }

    #[test]
    fn positive_certificates_verify() {
        let h = k2_on(&KGraph::complete(2, 4).unwrap());
        for c in [
            certify_space(&h, &q(0, 1)).unwrap(),
            certify_div(&h, None).unwrap(),
            certify_cov(&h),
            certify_fissile(&h, 3, 1_000_000).unwrap(),
            certify_matching(&h, 1_000_000).unwrap(),
        ] {
            assert!(c.holds, "{:?}", c.property);
            roundtrip(&c).verify(&h, 1_000_000).unwrap();
        }
    }

    #[test]
    fn negative_certificates_verify() {
        let two_cliques = KGraph::new(2, 6, [[0, 1], [0, 2], [1, 2], [3, 4], [3, 5], [4, 5]]).unwrap();
        let h = k2_on(&two_cliques);
        let div = certify_div(&h, None).unwrap();
        assert!(!div.holds);
        roundtrip(&div).verify(&h, 1000).unwrap();
        let m = certify_matching(&h, 1_000_000).unwrap();
        assert!(!m.holds);
        m.verify(&h, 1_000_000).unwrap();

        let loops = Digraph::new(2, 2, [[0, 0], [1, 1]]).unwrap();
        for c in [certify_cov(&loops), certify_fissile(&loops, 2, 1000).unwrap()] {
            assert!(!c.holds, "{:?}", c.property);
            roundtrip(&c).verify(&loops, 1000).unwrap();
        }
        let sparse = Digraph::new(2, 4, [[0, 1], [0, 2], [0, 3]]).unwrap();
        let spa = certify_space(&sparse, &q(0, 1)).unwrap();
        assert!(!spa.holds);
        roundtrip(&spa).verify(&sparse, 1000).unwrap();
    }

    #[test]
    fn tampering_is_rejected() {
        let h = k2_on(&KGraph::complete(2, 4).unwrap());
        let mut c = certify_matching(&h, 1_000_000).unwrap();
        if let Witness::Matching(m) = &mut c.witness {
            m.edges[0].swap(0, 1);
            m.edges[0][0] = m.edges[0][1];
        }
        assert!(c.verify(&h, 1000).is_err());

        let mut flipped = certify_cov(&h);
        flipped.holds = false;
        assert!(flipped.verify(&h, 1000).is_err());

        let other = k2_on(&KGraph::complete(2, 6).unwrap());
        assert!(certify_cov(&h).verify(&other, 1000).is_err());
    }

    #[test]
    fn tiling_certificate() {
        let g = KGraph::complete(2, 6).unwrap();
        let tile = KGraph::complete(2, 3).unwrap();
        let t = Tiling { embeddings: vec![vec![0, 1, 2], vec![3, 4, 5]] };
        let c = certify_tiling(&tile, &g, t);
        roundtrip(&c).verify_tiling(&g).unwrap();
        let bad = certify_tiling(&tile, &g, Tiling { embeddings: vec![vec![0, 1, 2]] });
        assert!(bad.verify_tiling(&g).is_err());
    }
}
