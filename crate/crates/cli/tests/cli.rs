use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tiling-lab"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn setup() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("k3.kg"), "kgraph k=2 n=3\n0 1\n0 2\n1 2\n").unwrap();
    fs::write(dir.path().join("k2.kg"), "kgraph k=2 n=2\n0 1\n").unwrap();
    fs::write(dir.path().join("k5.kg"), "kgraph k=2 n=5\n0 1\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n").unwrap();
    dir
}

fn p(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

#[test]
fn analyze_bundle_certificates_reverify() {
    let dir = setup();
    let d = dir.path();
    let o = run(d, &["construct", "complete-partite", "--parts", "2,2,2", "--k", "2", "-o", "g.kg"]);
    assert_eq!(code(&o), 0);
    let o = run(d, &[
        "analyze", "--host", "g.kg", "--tile", "k3.kg", "--props", "spa,div,cov", "--rho", "0", "--json",
        "--write-lift", "h.dg",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let bundle = stdout_json(&o);
    let certs = bundle["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 3);
    for (i, c) in certs.iter().enumerate() {
        assert_eq!(c["schema"], "tiling-lab/1");
        let path = format!("c{i}.json");
        fs::write(p(&dir, &path), c.to_string()).unwrap();
        let o = run(d, &["certify", "--instance", "h.dg", "--cert", &path]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    }
}

#[test]
fn tampered_certificate_exits_3() {
    let dir = setup();
    let d = dir.path();
    run(d, &["hom", "--host", "k5.kg", "--tile", "k2.kg", "-o", "h.dg"]);
    let o = run(d, &["analyze", "--host", "k5.kg", "--tile", "k2.kg", "--props", "cov", "--json"]);
    let mut cert = stdout_json(&o)["certificates"][0].clone();
    fs::write(p(&dir, "good.json"), cert.to_string()).unwrap();
    assert_eq!(code(&run(d, &["certify", "--instance", "h.dg", "--cert", "good.json"])), 0);
    // an edge that misses vertex 0
    cert["witness"]["edges"][0] = serde_json::json!([2, 3]);
    fs::write(p(&dir, "bad.json"), cert.to_string()).unwrap();
    assert_eq!(code(&run(d, &["certify", "--instance", "h.dg", "--cert", "bad.json"])), 3);
    cert["holds"] = Value::Bool(false);
    fs::write(p(&dir, "flipped.json"), cert.to_string()).unwrap();
    assert_eq!(code(&run(d, &["certify", "--instance", "h.dg", "--cert", "flipped.json"])), 3);
}

#[test]
fn construct_space_barrier_writes_file() {
    let dir = setup();
    let o = run(dir.path(), &[
        "construct", "space-barrier", "--n", "12", "--k", "2", "--i", "1", "--beta", "1/3", "--parts", "1,1,1", "-o", "g.kg",
    ]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(p(&dir, "g.kg")).unwrap();
    assert!(text.starts_with("kgraph k=2 n=12"));
    let o = run(dir.path(), &["solve", "--host", "g.kg", "--tile", "k3.kg"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["outcome"], "none");
}

#[test]
fn solve_methods_and_exit_codes() {
    let dir = setup();
    let d = dir.path();
    run(d, &["construct", "complete-partite", "--parts", "3,3,3", "--k", "2", "-o", "g.kg"]);
    for method in ["exact", "absorb", "greedy"] {
        let o = run(d, &["solve", "--host", "g.kg", "--tile", "k3.kg", "--method", method, "--seed", "5", "-o", "s.json"]);
        if method == "greedy" && code(&o) == 4 {
            continue;
        }
        assert_eq!(code(&o), 0, "{method}: {}", String::from_utf8_lossy(&o.stderr));
        let report: Value = serde_json::from_str(&fs::read_to_string(p(&dir, "s.json")).unwrap()).unwrap();
        assert_eq!(report["outcome"], "found");
        fs::write(p(&dir, "t.json"), report["certificate"].to_string()).unwrap();
        assert_eq!(code(&run(d, &["certify", "--instance", "g.kg", "--cert", "t.json"])), 0, "{method}");
    }
    // randomized methods need a seed
    assert_eq!(code(&run(d, &["solve", "--host", "g.kg", "--tile", "k3.kg", "--method", "absorb"])), 2);
    // a budget of one node cannot decide this instance
    run(d, &["hom", "--host", "g.kg", "--tile", "k3.kg", "-o", "h.dg"]);
    assert_eq!(code(&run(d, &["solve", "--instance", "h.dg", "--budget", "1"])), 4);
}

#[test]
fn invalid_input_exits_2() {
    let dir = setup();
    let d = dir.path();
    assert_eq!(code(&run(d, &["analyze", "--bogus"])), 2);
    assert_eq!(code(&run(d, &["nonsense"])), 2);
    fs::write(p(&dir, "broken.kg"), "kgraph k=2 n=2\n0 5\n").unwrap();
    assert_eq!(code(&run(d, &["invariants", "--graph", "broken.kg"])), 2);
    assert_eq!(code(&run(d, &["construct", "random", "--n", "5", "--k", "2", "--p", "0.5"])), 2);
}

#[test]
fn hom_round_trips_between_formats() {
    let dir = setup();
    let d = dir.path();
    run(d, &["hom", "--host", "k5.kg", "--tile", "k3.kg", "-o", "h.dg"]);
    run(d, &["hom", "--host", "k5.kg", "--tile", "k3.kg", "--format", "json", "-o", "h.json"]);
    let text = tiling_lab::io::parse_digraph(&fs::read_to_string(p(&dir, "h.dg")).unwrap()).unwrap();
    let json = tiling_lab::io::parse_digraph(&fs::read_to_string(p(&dir, "h.json")).unwrap()).unwrap();
    assert_eq!(text, json);
    assert_eq!(text.edge_count(), 60);
}

#[test]
fn property_graph_of_complete_lift() {
    let dir = setup();
    let d = dir.path();
    run(d, &["hom", "--host", "k5.kg", "--tile", "k2.kg", "-o", "h.dg"]);
    let o = run(d, &["pgraph", "--instance", "h.dg", "--props", "spa,div,cov", "--s", "3", "-o", "p.kg"]);
    assert_eq!(code(&o), 0);
    let summary = stdout_json(&o);
    assert_eq!(summary["edges"], 10);
    assert_eq!(summary["min_degree_1"], 6);
    let o = run(d, &["pgraph", "--instance", "h.dg", "--s", "3", "--mode", "sampled", "--trials", "1000", "--seed", "1"]);
    assert_eq!(stdout_json(&o)["fraction"], 1.0);
    assert_eq!(code(&run(d, &["pgraph", "--instance", "h.dg", "--s", "3", "--mode", "sampled", "--trials", "10"])), 2);
}

#[test]
fn thresholds_and_invariants() {
    let dir = setup();
    let d = dir.path();
    let o = run(d, &["thresholds", "--tile", "k3.kg"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["tiling"]["value"]["value"], "2/3");
    let o = run(d, &["thresholds", "--connectivity", "3"]);
    assert_eq!(stdout_json(&o)["connectivity"]["value"]["value"], "1/4");
    let o = run(d, &["invariants", "--graph", "k3.kg", "--ordered"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["coloring"]["chi"], 3);
    assert_eq!(v["ordered"]["chi_interval"], 3);
}

#[test]
fn experiments_are_deterministic() {
    let dir = setup();
    let d = dir.path();
    let args = ["experiment", "sweep", "--tile", "k3.kg", "--ns", "9,10,12", "--deltas", "0.3,2/3", "--trials", "5", "--seed", "11"];
    let a = run(d, &args);
    let b = run(d, &args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let table = String::from_utf8(a.stdout).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "n,delta,trials,success,failure,inconclusive,success_rate");
    // n = 10 is not a multiple of v(K3)
    assert_eq!(lines.len(), 1 + 2 * 2);

    let empty = run(d, &["experiment", "sweep", "--tile", "k3.kg", "--ns", "9", "--deltas", "0.5", "--trials", "0", "--seed", "1"]);
    assert_eq!(code(&empty), 0);
    assert_eq!(String::from_utf8(empty.stdout).unwrap().lines().count(), 1);
    assert_eq!(code(&run(d, &["experiment", "sweep", "--tile", "k3.kg", "--ns", "9", "--deltas", "0.5", "--trials", "3"])), 2);
}

#[test]
fn grabbing_on_complete_host() {
    let dir = setup();
    let d = dir.path();
    let parts = vec!["1"; 60].join(",");
    run(d, &["construct", "complete-partite", "--k", "2", "--parts", &parts, "-o", "k60.kg"]);
    let o = run(d, &["experiment", "grab", "--host", "k60.kg", "--s", "12", "--samples", "10000", "--seed", "3"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["retained"], 10000);
    assert_eq!(v["fraction"], 1.0);
}
