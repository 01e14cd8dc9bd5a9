//! Browser bindings. Every export takes instance text and returns a JSON
//! string; failures come back as `{"error": "..."}` so the page never throws.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use tiling_lab::certificate::{certify_cov, certify_div, certify_space};
use tiling_lab::homlift::{hom_digraph, ordered_hom_digraph};
use tiling_lab::io::parse_kgraph;
use tiling_lab::rational::parse_q;
use tiling_lab::solver::exact_tiling_with;
use tiling_lab::thresholds;

/// Largest lift the page will build.
const LIFT_CAP: usize = 200_000;

fn respond(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn err(e: tiling_lab::Error) -> String {
    e.to_string()
}

/// Lifts `host` by `tile` and decides spa(ρ), div and cov with certificates.
#[wasm_bindgen]
pub fn analyze(host: &str, tile: &str, rho: &str, ordered: bool) -> String {
    respond((|| {
        let g = parse_kgraph(host).map_err(err)?;
        let f = parse_kgraph(tile).map_err(err)?;
        let rho = parse_q(rho).map_err(err)?;
        let lift = if ordered { ordered_hom_digraph(&f, &g) } else { hom_digraph(&f, &g) }.map_err(err)?;
        let h = &lift.digraph;
        if h.edge_count() > LIFT_CAP {
            return Err(format!("lift has {} edges; the demo stops at {LIFT_CAP}", h.edge_count()));
        }
        let certs = [certify_space(h, &rho).map_err(err)?, certify_div(h, None).map_err(err)?, certify_cov(h)];
        Ok(json!({
            "lift": { "m": h.m(), "n": h.n(), "edges": h.edge_count() },
            "verdicts": certs.iter().map(|c| json!({ "property": c.property, "holds": c.holds })).collect::<Vec<_>>(),
            "certificates": certs,
        }))
    })())
}

/// Threshold formulas for a tile at degree type `d`.
#[wasm_bindgen]
pub fn tile_thresholds(tile: &str, d: usize) -> String {
    respond((|| {
        let f = parse_kgraph(tile).map_err(err)?;
        let til = thresholds::tiling_threshold(&f, d).map_err(err)?;
        let rainbow = thresholds::threshold_rainbow(&f, d).map_err(err)?;
        let mut out = json!({ "tiling": til, "rainbow": rainbow.rainbow });
        if f.k() == 2 {
            out["decomposition"] = serde_json::to_value(thresholds::threshold_graph_tiling(&f).map_err(err)?)
                .map_err(|e| e.to_string())?;
        }
        Ok(out)
    })())
}

/// Exact search for a perfect tiling of `host` by `tile` within `budget` nodes.
#[wasm_bindgen]
pub fn find_tiling(host: &str, tile: &str, budget: u32) -> String {
    respond((|| {
        let g = parse_kgraph(host).map_err(err)?;
        let f = parse_kgraph(tile).map_err(err)?;
        let r = exact_tiling_with(&f, &g, u64::from(budget)).map_err(err)?;
        Ok(json!({ "outcome": r.outcome, "nodes": r.nodes, "tiling": r.witness }))
    })())
}
