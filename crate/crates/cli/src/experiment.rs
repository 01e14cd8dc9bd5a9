use rayon::prelude::*;
use serde_json::json;

use tiling_lab::barriers::{has_space, is_covered, lattice::is_lattice_complete, SpaceVerdict};
use tiling_lab::homlift::hom_digraph;
use tiling_lab::rational::{parse_q, q, Q};
use tiling_lab::sampling::{derive_seed, grabbing_check, random_kgraph, random_min_degree_host};
use tiling_lab::solver::{absorption_solve, exact_tiling_with, AbsorbParams, Outcome};
use tiling_lab::KGraph;

use crate::args::{ExperimentKind, SweepCheck};
use crate::commands::{emit, load_kgraph, to_json};
use crate::error::{usage, CliError, CliResult};

pub fn run(kind: ExperimentKind) -> CliResult<()> {
    match kind {
        ExperimentKind::Sweep { tile, ns, deltas, trials, seed, check, budget, output } => {
            let f = load_kgraph(&tile)?;
            let ns: Vec<usize> = ns
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| usage(format!("bad order {s:?}"))))
                .collect::<CliResult<_>>()?;
            let deltas: Vec<(String, Q)> = deltas
                .split(',')
                .map(|s| Ok((s.trim().to_string(), parse_q(s)?)))
                .collect::<CliResult<_>>()?;
            let csv = sweep(&f, &ns, &deltas, trials, seed, check, budget)?;
            emit(output.as_deref(), &csv)
        }
        ExperimentKind::Grab { n, p, host, s, samples, ratio, seed, output } => {
            let g = match host {
                Some(path) => load_kgraph(&path)?,
                None => random_kgraph(2, n.ok_or_else(|| usage("--n or --host is required"))?, p, seed)?,
            };
            let ratio = parse_q(&ratio)?;
            let r = grabbing_check(&g, s, samples, &ratio, seed)?;
            let delta = g.min_degree(1)?;
            let out = json!({
                "host_n": g.n(),
                "host_min_degree": delta,
                "host_ratio": delta as f64 / g.n() as f64,
                "s": r.s,
                "samples": r.samples,
                "required": r.required,
                "retained": r.retained,
                "fraction": r.fraction(),
                "seed": r.seed,
            });
            emit(output.as_deref(), &to_json(&out))
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Trial {
    Success,
    Failure,
    Inconclusive,
}

fn one_trial(f: &KGraph, n: usize, delta: &Q, seed: u64, check: SweepCheck, budget: u64) -> tiling_lab::Result<Trial> {
    let g = random_min_degree_host(f.k(), n, delta, seed)?;
    let from = |o: Outcome| match o {
        Outcome::Found => Trial::Success,
        Outcome::None => Trial::Failure,
        Outcome::Inconclusive => Trial::Inconclusive,
    };
    Ok(match check {
        SweepCheck::Exact => from(exact_tiling_with(f, &g, budget)?.outcome),
        SweepCheck::Absorb => {
            let h = hom_digraph(f, &g)?.digraph;
            let params = AbsorbParams { seed, budget, ..AbsorbParams::default() };
            from(absorption_solve(&h, &params)?.report.outcome)
        }
        SweepCheck::Barriers => {
            let h = hom_digraph(f, &g)?.digraph;
            let spa = matches!(has_space(&h, &q(0, 1))?, SpaceVerdict::Holds(_));
            let ok = spa && is_covered(&h).is_ok() && is_lattice_complete(&h, None)?.is_none();
            if ok { Trial::Success } else { Trial::Failure }
        }
    })
}

/// Success-rate table; trial `t` of grid point `p` uses seed stream `p·trials + t`.
fn sweep(
    f: &KGraph,
    ns: &[usize],
    deltas: &[(String, Q)],
    trials: u64,
    seed: u64,
    check: SweepCheck,
    budget: u64,
) -> CliResult<String> {
    let points: Vec<(usize, &(String, Q))> = ns
        .iter()
        .filter(|&&n| n >= f.n() && n % f.n() == 0)
        .flat_map(|&n| deltas.iter().map(move |d| (n, d)))
        .collect();
    let tasks: Vec<(usize, u64)> = (0..points.len()).flat_map(|p| (0..trials).map(move |t| (p, t))).collect();
    let results: Vec<Trial> = tasks
        .par_iter()
        .map(|&(p, t)| {
            let (n, (_, delta)) = points[p];
            one_trial(f, n, delta, derive_seed(seed, p as u64 * trials + t), check, budget)
        })
        .collect::<tiling_lab::Result<_>>()?;

    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Usage(format!("csv: {e}"));
    w.write_record(["n", "delta", "trials", "success", "failure", "inconclusive", "success_rate"]).map_err(csv_err)?;
    if trials > 0 {
        for (p, &(n, (label, _))) in points.iter().enumerate() {
            let chunk = &results[p * trials as usize..(p + 1) * trials as usize];
            let count = |x: Trial| chunk.iter().filter(|&&r| r == x).count();
            let success = count(Trial::Success);
            w.write_record([
                n.to_string(),
                label.clone(),
                trials.to_string(),
                success.to_string(),
                count(Trial::Failure).to_string(),
                count(Trial::Inconclusive).to_string(),
                format!("{:.4}", success as f64 / trials as f64),
            ])
            .map_err(csv_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
