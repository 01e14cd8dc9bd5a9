use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use tiling_lab::certificate::{
    certify_cov, certify_div, certify_fissile, certify_found_matching, certify_matching, certify_no_matching,
    certify_space, certify_tiling, digraph_hash, kgraph_hash, Certificate, PropertyTag,
};
use tiling_lab::homlift::{hom_digraph, ordered_hom_digraph, rainbow_digraph, HomDigraph};
use tiling_lab::invariants::{
    coloring_profile, complete_partite_parts, component_orders, has_bridge, is_uniformly_dense, ordered_profile,
    BottleLimits, DensityMode,
};
use tiling_lab::io::{parse_digraph, parse_family, parse_instance, parse_kgraph, Instance};
use tiling_lab::rational::{fmt_q, parse_q};
use tiling_lab::solver::{
    absorption_solve, exact_perfect_matching_with, exact_tiling_with, greedy_almost_matching, AbsorbParams, Outcome,
    Strategy,
};
use tiling_lab::{barriers, constructions, sampling, thresholds};
use tiling_lab::{Digraph, KGraph, Matching, Tiling};

use crate::args::*;
use crate::error::{usage, CliError, CliResult};
use crate::experiment;

pub fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Hom(a) => hom(a),
        Command::Solve(a) => solve(a),
        Command::Invariants(a) => invariants(a),
        Command::Thresholds(a) => thresholds_cmd(a),
        Command::Construct(a) => construct(a),
        Command::Pgraph(a) => pgraph(a),
        Command::Certify(a) => certify(a),
        Command::Experiment(a) => experiment::run(a.kind),
    }
}

pub fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Writes to `path`, or to stdout when absent.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|()| if text.ends_with('\n') { Ok(()) } else { out.write_all(b"\n") })
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

pub fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("output serializes")
}

fn instance_text(inst: &Instance, format: Format) -> String {
    match format {
        Format::Text => inst.to_text(),
        Format::Json => inst.to_json(),
    }
}

pub fn load_kgraph(path: &Path) -> CliResult<KGraph> {
    Ok(parse_kgraph(&read(path)?)?)
}

fn lift_of(input: &LiftInput) -> CliResult<(KGraph, KGraph, HomDigraph)> {
    let (Some(host), Some(tile)) = (&input.host, &input.tile) else {
        return Err(usage("need --host and --tile"));
    };
    let (g, f) = (load_kgraph(host)?, load_kgraph(tile)?);
    let h = if input.ordered { ordered_hom_digraph(&f, &g)? } else { hom_digraph(&f, &g)? };
    Ok((f, g, h))
}

fn digraph_input(instance: &Option<std::path::PathBuf>, lift: &LiftInput) -> CliResult<Digraph> {
    match instance {
        Some(p) => Ok(parse_digraph(&read(p)?)?),
        None => Ok(lift_of(lift)?.2.digraph),
    }
}

fn analyze(a: AnalyzeArgs) -> CliResult<()> {
    let (f, g, lift) = lift_of(&a.lift)?;
    let h = &lift.digraph;
    let rho = parse_q(&a.rho)?;
    let mut certs: Vec<Certificate> = Vec::new();
    for item in a.props.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        certs.push(match PropertyTag::parse(item)? {
            PropertyTag::Space => certify_space(h, &rho)?,
            PropertyTag::Div => certify_div(h, None)?,
            PropertyTag::Cov => certify_cov(h),
            PropertyTag::Fissile => certify_fissile(h, h.m(), a.budget)?,
            PropertyTag::Matching => certify_matching(h, a.budget)?,
            PropertyTag::Tiling => return Err(usage("use `solve` for tilings")),
        });
    }
    if let Some(p) = &a.write_lift {
        emit(Some(p), &Instance::Digraph(h.clone()).to_text())?;
    }
    let all_hold = certs.iter().all(|c| c.holds);
    let text = if a.json {
        to_json(&json!({
            "schema": tiling_lab::certificate::SCHEMA,
            "host_hash": kgraph_hash(&g),
            "tile_hash": kgraph_hash(&f),
            "flavor": lift.flavor,
            "lift": { "m": h.m(), "n": h.n(), "edges": h.edge_count() },
            "instance_hash": digraph_hash(h),
            "all_hold": all_hold,
            "certificates": certs,
        }))
    } else {
        let mut s = format!("lift: m={} n={} edges={}\n", h.m(), h.n(), h.edge_count());
        for c in &certs {
            let name = match c.property {
                PropertyTag::Space => format!("spa({})", fmt_q(&rho)),
                other => format!("{other:?}").to_lowercase(),
            };
            s += &format!("{name}: {}\n", if c.holds { "holds" } else { "fails" });
        }
        s
    };
    emit(a.output.as_deref(), &text)
}

fn hom(a: HomArgs) -> CliResult<()> {
    let h = match &a.family {
        Some(fam) => {
            let tile = a.lift.tile.as_ref().ok_or_else(|| usage("need --tile"))?;
            rainbow_digraph(&load_kgraph(tile)?, &parse_family(&read(fam)?)?)?
        }
        None => lift_of(&a.lift)?.2,
    };
    emit(a.output.as_deref(), &instance_text(&Instance::Digraph(h.digraph), a.format))
}

fn tiling_from(lift: &HomDigraph, m: &Matching) -> Tiling {
    let embeddings = m
        .edges
        .iter()
        .map(|e| {
            let mut phi = vec![0; lift.tile_order.len()];
            for (pos, &w) in lift.tile_order.iter().enumerate() {
                phi[w] = e[pos];
            }
            phi
        })
        .collect();
    Tiling { embeddings }
}

#[derive(Serialize)]
struct SolveOutput {
    method: &'static str,
    outcome: Outcome,
    nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Value::is_null")]
    details: Value,
}

fn solve(a: SolveArgs) -> CliResult<()> {
    if a.method != Method::Exact && a.seed.is_none() {
        return Err(usage("--seed is required for randomized methods"));
    }
    let (h, tiles) = match &a.instance {
        Some(p) => (parse_digraph(&read(p)?)?, None),
        None => {
            let (f, g, lift) = lift_of(&a.lift)?;
            (lift.digraph.clone(), Some((f, g, lift)))
        }
    };
    let certificate_for = |m: Matching| -> CliResult<Certificate> {
        match &tiles {
            Some((f, g, lift)) => Ok(certify_tiling(f, g, tiling_from(lift, &m))),
            None => Ok(certify_found_matching(&h, m)?),
        }
    };
    let out = match a.method {
        Method::Exact => {
            if let (Some((f, g, _)), false) = (&tiles, a.lift.ordered) {
                let r = exact_tiling_with(f, g, a.budget)?;
                let certificate = match (r.outcome, r.witness) {
                    (Outcome::Found, Some(t)) => Some(certify_tiling(f, g, t)),
                    (Outcome::None, _) => Some(certify_no_matching(&h, r.nodes)),
                    _ => None,
                };
                SolveOutput { method: "exact", outcome: r.outcome, nodes: r.nodes, seed: None, certificate, details: Value::Null }
            } else {
                let r = exact_perfect_matching_with(&h, a.budget);
                let certificate = match (r.outcome, r.witness) {
                    (Outcome::Found, Some(m)) => Some(certificate_for(m)?),
                    (Outcome::None, _) => Some(certify_no_matching(&h, r.nodes)),
                    _ => None,
                };
                SolveOutput { method: "exact", outcome: r.outcome, nodes: r.nodes, seed: None, certificate, details: Value::Null }
            }
        }
        Method::Absorb => {
            let params = AbsorbParams { absorbers: a.absorbers, seed: a.seed.unwrap_or(0), budget: a.budget, ..AbsorbParams::default() };
            let r = absorption_solve(&h, &params)?;
            let certificate = match (r.report.outcome, r.report.witness.clone()) {
                (Outcome::Found, Some(m)) => Some(certificate_for(m)?),
                (Outcome::None, _) => Some(certify_no_matching(&h, r.report.nodes)),
                _ => None,
            };
            let details = json!({
                "absorbers_reserved": r.absorbers_reserved,
                "absorbers_flipped": r.absorbers_flipped,
                "leftover_after_greedy": r.leftover_after_greedy,
                "repaired_sets": r.repaired_sets,
                "used_fallback": r.used_fallback,
            });
            SolveOutput { method: "absorb", outcome: r.report.outcome, nodes: r.report.nodes, seed: a.seed, certificate, details }
        }
        Method::Greedy => {
            let r = greedy_almost_matching(&h, Strategy::LpRounding, a.seed.unwrap_or(0))?;
            let perfect = r.leftover.is_empty();
            let details = json!({ "matched_edges": r.matching.edges.len(), "leftover": r.leftover });
            let certificate = if perfect { Some(certificate_for(r.matching)?) } else { None };
            let outcome = if perfect { Outcome::Found } else { Outcome::Inconclusive };
            SolveOutput { method: "greedy", outcome, nodes: 0, seed: a.seed, certificate, details }
        }
    };
    emit(a.output.as_deref(), &to_json(&out))?;
    if out.outcome == Outcome::Inconclusive {
        return Err(CliError::Inconclusive(format!("{} search did not decide the instance", out.method)));
    }
    Ok(())
}

fn attempt<T: Serialize>(r: tiling_lab::Result<T>) -> Value {
    match r {
        Ok(v) => serde_json::to_value(v).expect("serializable"),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn invariants(a: InvariantsArgs) -> CliResult<()> {
    let g = load_kgraph(&a.graph)?;
    let mut out = serde_json::Map::new();
    out.insert("k".into(), json!(g.k()));
    out.insert("n".into(), json!(g.n()));
    out.insert("edges".into(), json!(g.edge_count()));
    out.insert("coloring".into(), attempt(coloring_profile(&g)));
    out.insert("complete_partite_parts".into(), attempt(complete_partite_parts(&g)));
    out.insert("component_orders".into(), json!(component_orders(&g)));
    if g.k() == 2 {
        out.insert("has_bridge".into(), json!(has_bridge(&g)));
    }
    if a.ordered {
        let limits = BottleLimits { b_max: a.b_max, ..BottleLimits::default() };
        out.insert("ordered".into(), attempt(ordered_profile(&g, &limits)));
    }
    if let (Some(eps), Some(d)) = (&a.eps, &a.density) {
        let mode = match (a.trials, a.seed) {
            (Some(trials), Some(seed)) => DensityMode::Sampled { seed, trials },
            (Some(_), None) => return Err(usage("--seed is required for sampled density checks")),
            _ => DensityMode::Exact,
        };
        let exponent = a.exponent.unwrap_or(g.k() as u32);
        let report = is_uniformly_dense(&g, &parse_q(eps)?, &parse_q(d)?, exponent, &mode)?;
        out.insert("uniform_density".into(), serde_json::to_value(report).expect("serializable"));
    }
    emit(None, &to_json(&out))
}

fn thresholds_cmd(a: ThresholdsArgs) -> CliResult<()> {
    let mut out = serde_json::Map::new();
    if let Some(tile) = &a.tile {
        let f = load_kgraph(tile)?;
        let d = a.d.unwrap_or(if f.k() == 2 { 1 } else { f.k() - 1 });
        out.insert("tiling".into(), attempt(thresholds::tiling_threshold(&f, d)));
        out.insert("rainbow".into(), attempt(thresholds::threshold_rainbow(&f, d)));
        if f.k() == 2 {
            out.insert("decomposition".into(), attempt(thresholds::threshold_graph_tiling(&f)));
            let profile = ordered_profile(&f, &BottleLimits::default());
            out.insert("ordered".into(), attempt(profile.map(|p| thresholds::threshold_ordered(&p))));
        } else {
            out.insert("k_partite".into(), attempt(thresholds::threshold_kpartite(&f)));
        }
    }
    if let Some(k) = a.connectivity {
        out.insert("connectivity".into(), attempt(thresholds::connectivity_threshold(k, a.d.unwrap_or(1))));
    }
    if let Some(s) = a.matching {
        out.insert("matching".into(), attempt(thresholds::matching_threshold_bounds(s)));
    }
    if let Some(steps) = a.grid {
        if steps == 0 {
            return Err(usage("--grid needs at least one step"));
        }
        out.insert("grid".into(), json!(thresholds::optimisation_grid_max(steps)));
    }
    if out.is_empty() {
        return Err(usage("nothing to compute: give --tile, --connectivity, --matching or --grid"));
    }
    emit(None, &to_json(&out))
}

fn need<T: Copy>(x: Option<T>, name: &str) -> CliResult<T> {
    x.ok_or_else(|| usage(format!("--{name} is required")))
}

fn parse_parts(s: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| usage(format!("bad part size {p:?}"))))
        .collect()
}

fn construct(a: ConstructArgs) -> CliResult<()> {
    let mut info = serde_json::Map::new();
    let graph = match a.kind {
        ConstructKind::CoverBarrier => {
            let c = constructions::cover_barrier(need(a.n, "n")?, need(a.k, "k")?)?;
            info.insert("v".into(), json!(c.v));
            info.insert("a1".into(), json!(c.a1.len()));
            info.insert("b".into(), json!(c.b.len()));
            info.insert("t".into(), json!(c.t.len()));
            c.graph
        }
        ConstructKind::SpaceBarrier => {
            let beta = parse_q(a.beta.as_deref().ok_or_else(|| usage("--beta is required"))?)?;
            let parts = parse_parts(a.parts.as_deref().ok_or_else(|| usage("--parts is required"))?)?;
            let s = constructions::space_barrier(need(a.n, "n")?, need(a.k, "k")?, need(a.i, "i")?, &beta, &parts)?;
            info.insert("a_size".into(), json!(s.a_size));
            s.graph
        }
        ConstructKind::DivisibilityBarrier => {
            let d = constructions::divisibility_barrier(need(a.n, "n")?, need(a.k, "k")?)?;
            info.insert("a_size".into(), json!(d.a_size));
            d.graph
        }
        ConstructKind::CompletePartite => {
            let parts = parse_parts(a.parts.as_deref().ok_or_else(|| usage("--parts is required"))?)?;
            constructions::complete_partite(a.k.unwrap_or(parts.len()), &parts)?
        }
        ConstructKind::Downspin => constructions::downspin_bottlegraph(need(a.l, "l")?, need(a.b, "b")?, need(a.k, "k")?)?,
        ConstructKind::Random => {
            let seed = need(a.seed, "seed")?;
            info.insert("seed".into(), json!(seed));
            sampling::random_kgraph(need(a.k, "k")?, need(a.n, "n")?, need(a.p, "p")?, seed)?
        }
        ConstructKind::MinDegree => {
            let seed = need(a.seed, "seed")?;
            let ratio = parse_q(a.ratio.as_deref().ok_or_else(|| usage("--ratio is required"))?)?;
            info.insert("seed".into(), json!(seed));
            sampling::random_min_degree_host(need(a.k, "k")?, need(a.n, "n")?, &ratio, seed)?
        }
    };
    let text = instance_text(&Instance::KGraph(graph.clone()), a.format);
    match &a.output {
        Some(p) => {
            emit(Some(p), &text)?;
            info.insert("k".into(), json!(graph.k()));
            info.insert("n".into(), json!(graph.n()));
            info.insert("edges".into(), json!(graph.edge_count()));
            if graph.k() >= 2 {
                let dk2 = constructions::relative_min_degree(&graph, graph.k() - 2)?;
                info.insert("relative_degree_k_minus_2".into(), json!(dk2.approx()));
            }
            emit(None, &to_json(&info))
        }
        None => emit(None, &text),
    }
}

fn pgraph(a: PgraphArgs) -> CliResult<()> {
    let h = digraph_input(&a.instance, &a.lift)?;
    let rho = parse_q(&a.rho)?;
    let property = barriers::Property::parse_menu(&a.props, &rho, None)?;
    match a.mode {
        Mode::Exact => {
            let p = barriers::property_graph(&h, &property, a.s, barriers::DEFAULT_SUBSET_CAP)?;
            match &a.output {
                Some(path) => {
                    emit(Some(path), &instance_text(&Instance::KGraph(p.clone()), a.format))?;
                    let summary = json!({
                        "property": property.to_string(),
                        "s": a.s,
                        "edges": p.edge_count(),
                        "min_degree_1": p.min_degree(1.min(p.k()))?,
                    });
                    emit(None, &to_json(&summary))
                }
                None => emit(None, &instance_text(&Instance::KGraph(p), a.format)),
            }
        }
        Mode::Sampled => {
            let seed = need(a.seed, "seed")?;
            let trials = need(a.trials, "trials")?;
            let r = barriers::property_graph_sampled(&h, &property, a.s, trials, seed)?;
            let out = json!({
                "property": property.to_string(),
                "s": a.s,
                "trials": r.trials,
                "seed": r.seed,
                "passed": r.passed,
                "fraction": r.fraction(),
                "min_vertex_fraction": r.min_vertex_fraction(),
            });
            emit(a.output.as_deref(), &to_json(&out))
        }
    }
}

fn certify(a: CertifyArgs) -> CliResult<()> {
    let inst = parse_instance(&read(&a.instance)?)?;
    let cert = Certificate::from_json(&read(&a.cert)?).map_err(|e| CliError::Verification(e.to_string()))?;
    let verdict = match &inst {
        Instance::Digraph(h) => cert.verify(h, a.budget),
        Instance::KGraph(g) => cert.verify_tiling(g),
        Instance::Family(_) => return Err(usage("certificates refer to digraphs or host k-graphs")),
    };
    match verdict {
        Ok(()) => emit(None, &to_json(&json!({ "valid": true, "property": cert.property, "holds": cert.holds }))),
        Err(e @ tiling_lab::Error::Resource { .. }) => Err(CliError::Lib(e)),
        Err(e) => {
            emit(None, &to_json(&json!({ "valid": false, "reason": e.to_string() })))?;
            Err(CliError::Verification(e.to_string()))
        }
    }
}
