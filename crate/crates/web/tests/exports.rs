use serde_json::Value;
use tiling_lab_web::{analyze, find_tiling, tile_thresholds};

const K3: &str = "kgraph k=2 n=3\n0 1\n0 2\n1 2\n";

fn k(n: usize) -> String {
    let mut s = format!("kgraph k=2 n={n}\n");
    for a in 0..n {
        for b in a + 1..n {
            s += &format!("{a} {b}\n");
        }
    }
    s
}

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn analyze_reports_all_three_properties() {
    let v = parse(analyze(&k(6), K3, "0", false));
    assert_eq!(v["lift"]["edges"], 120);
    let holds: Vec<bool> = v["verdicts"].as_array().unwrap().iter().map(|x| x["holds"].as_bool().unwrap()).collect();
    assert_eq!(holds, [true, true, true]);
    let ordered = parse(analyze(&k(6), K3, "0", true));
    assert_eq!(ordered["lift"]["edges"], 20);
}

#[test]
fn thresholds_for_triangle() {
    let v = parse(tile_thresholds(K3, 1));
    assert_eq!(v["tiling"]["value"]["value"], "2/3");
    assert_eq!(v["rainbow"]["value"]["value"], "2/3");
}

#[test]
fn tiling_search_and_errors() {
    let v = parse(find_tiling(&k(6), K3, 100_000));
    assert_eq!(v["outcome"], "found");
    assert_eq!(v["tiling"]["embeddings"].as_array().unwrap().len(), 2);
    let none = parse(find_tiling(&k(5), K3, 100_000));
    assert_eq!(none["outcome"], "none");
    let bad = parse(find_tiling("kgraph k=2 n=2\n0 7\n", K3, 10));
    assert!(bad["error"].as_str().is_some());
}
