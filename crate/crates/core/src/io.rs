//! Text and JSON formats for k-graphs, digraphs and graph families.
//!
//! Text files hold one construct: a header line (`kgraph k=3 n=7`,
//! `digraph m=2 n=4`, `family k=2 n=5 colors=2`) followed by one edge per
//! line. Families group their edges under `color <j>` lines, `j` counted
//! from 1. `#` starts a comment.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, KGraph};
use crate::homlift::GraphFamily;

/// Any construct that can appear in an instance file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    KGraph(KGraph),
    Digraph(Digraph),
    Family(GraphFamily),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::KGraph(_) => "kgraph",
            Instance::Digraph(_) => "digraph",
            Instance::Family(_) => "family",
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Instance::KGraph(g) => kgraph_to_text(g),
            Instance::Digraph(h) => digraph_to_text(h),
            Instance::Family(f) => family_to_text(f),
        }
    }

    pub fn to_json(&self) -> String {
        let doc = match self {
            Instance::KGraph(g) => JsonInstance {
                kind: "kgraph".into(),
                k: Some(g.k()),
                m: None,
                n: g.n(),
                edges: Some(g.edges().map(<[usize]>::to_vec).collect()),
                colors: None,
            },
            Instance::Digraph(h) => JsonInstance {
                kind: "digraph".into(),
                k: None,
                m: Some(h.m()),
                n: h.n(),
                edges: Some(h.edges().map(<[usize]>::to_vec).collect()),
                colors: None,
            },
            Instance::Family(f) => JsonInstance {
                kind: "family".into(),
                k: Some(f.k()),
                m: None,
                n: f.n(),
                edges: None,
                colors: Some(
                    f.members()
                        .iter()
                        .map(|g| g.edges().map(<[usize]>::to_vec).collect())
                        .collect(),
                ),
            },
        };
        serde_json::to_string(&doc).expect("instance serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
struct JsonInstance {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    colors: Option<Vec<Vec<Vec<usize>>>>,
}

/// Parses either format; input starting with `{` is read as JSON.
pub fn parse_instance(src: &str) -> Result<Instance> {
    if src.trim_start().starts_with('{') {
        parse_json(src)
    } else {
        parse_text(src)
    }
}

pub fn parse_kgraph(src: &str) -> Result<KGraph> {
    match parse_instance(src)? {
        Instance::KGraph(g) => Ok(g),
        other => Err(Error::input(format!("expected a kgraph, found a {}", other.kind()))),
    }
}

pub fn parse_digraph(src: &str) -> Result<Digraph> {
    match parse_instance(src)? {
        Instance::Digraph(h) => Ok(h),
        other => Err(Error::input(format!("expected a digraph, found a {}", other.kind()))),
    }
}

pub fn parse_family(src: &str) -> Result<GraphFamily> {
    match parse_instance(src)? {
        Instance::Family(f) => Ok(f),
        other => Err(Error::input(format!("expected a family, found a {}", other.kind()))),
    }
}

fn parse_json(src: &str) -> Result<Instance> {
    let doc: JsonInstance =
        serde_json::from_str(src).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
    let need = |field: Option<usize>, name: &str| {
        field.ok_or_else(|| Error::input(format!("{} JSON needs \"{name}\"", doc.kind)))
    };
    match doc.kind.as_str() {
        "kgraph" => Ok(Instance::KGraph(KGraph::new(
            need(doc.k, "k")?,
            doc.n,
            doc.edges.clone().unwrap_or_default(),
        )?)),
        "digraph" => Ok(Instance::Digraph(Digraph::new(
            need(doc.m, "m")?,
            doc.n,
            doc.edges.clone().unwrap_or_default(),
        )?)),
        "family" => {
            let k = need(doc.k, "k")?;
            let members = doc
                .colors
                .clone()
                .unwrap_or_default()
                .into_iter()
                .map(|edges| KGraph::new(k, doc.n, edges))
                .collect::<Result<Vec<_>>>()?;
            Ok(Instance::Family(GraphFamily::new(members)?))
        }
        other => Err(Error::input(format!("unknown instance type {other:?}"))),
    }
}

struct Header {
    kind: String,
    params: Vec<(String, usize)>,
}

impl Header {
    fn get(&self, key: &str, line: usize) -> Result<usize> {
        self.params
            .iter()
            .find(|(k, _)| k == key)
            .map(|&(_, v)| v)
            .ok_or_else(|| Error::Parse { line, msg: format!("header is missing {key}=") })
    }
}

fn content_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_header(line_no: usize, line: &str) -> Result<Header> {
    let mut words = line.split_whitespace();
    let kind = words.next().unwrap_or_default().to_string();
    let mut params = Vec::new();
    for w in words {
        let (key, val) = w
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: line_no, msg: format!("expected key=value, got {w:?}") })?;
        let val = val
            .parse()
            .map_err(|_| Error::Parse { line: line_no, msg: format!("{key} is not a count: {val:?}") })?;
        params.push((key.to_string(), val));
    }
    Ok(Header { kind, params })
}

fn parse_row(line_no: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse { line: line_no, msg: format!("bad vertex id {t:?}") })
        })
        .collect()
}

fn at_line<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Input(msg) => Error::Parse { line, msg },
        other => other,
    })
}

fn parse_text(src: &str) -> Result<Instance> {
    let mut lines = content_lines(src);
    let (hl, head) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
    let header = parse_header(hl, head)?;
    match header.kind.as_str() {
        "kgraph" | "digraph" => {
            let key = if header.kind == "kgraph" { "k" } else { "m" };
            let width = header.get(key, hl)?;
            let n = header.get("n", hl)?;
            let mut edges = Vec::new();
            for (no, line) in lines {
                let row = parse_row(no, line)?;
                if row.len() != width {
                    return Err(Error::Parse {
                        line: no,
                        msg: format!("expected {width} vertices, found {}", row.len()),
                    });
                }
                if let Some(&v) = row.iter().find(|&&v| v >= n) {
                    return Err(Error::Parse { line: no, msg: format!("vertex {v} outside 0..{n}") });
                }
                if header.kind == "kgraph" {
                    // report repeated vertices against their line
                    at_line(no, KGraph::new(width, n, [&row]))?;
                }
                edges.push(row);
            }
            if header.kind == "kgraph" {
                Ok(Instance::KGraph(at_line(hl, KGraph::new(width, n, edges))?))
            } else {
                Ok(Instance::Digraph(at_line(hl, Digraph::new(width, n, edges))?))
            }
        }
        "family" => {
            let k = header.get("k", hl)?;
            let n = header.get("n", hl)?;
            let colors = header.get("colors", hl)?;
            let mut blocks: Vec<Vec<Vec<usize>>> = vec![Vec::new(); colors];
            let mut current: Option<usize> = None;
            for (no, line) in lines {
                if let Some(rest) = line.strip_prefix("color") {
                    let j: usize = rest.trim().parse().map_err(|_| Error::Parse {
                        line: no,
                        msg: format!("bad color line {line:?}"),
                    })?;
                    if j == 0 || j > colors {
                        return Err(Error::Parse { line: no, msg: format!("color {j} outside 1..={colors}") });
                    }
                    current = Some(j - 1);
                    continue;
                }
                let c = current.ok_or(Error::Parse { line: no, msg: "edge before any color line".into() })?;
                let row = parse_row(no, line)?;
                at_line(no, KGraph::new(k, n, [&row]))?;
                blocks[c].push(row);
            }
            let members = blocks
                .into_iter()
                .map(|edges| KGraph::new(k, n, edges))
                .collect::<Result<Vec<_>>>()?;
            Ok(Instance::Family(at_line(hl, GraphFamily::new(members))?))
        }
        other => Err(Error::Parse { line: hl, msg: format!("unknown header {other:?}") }),
    }
}

fn push_rows<'a>(out: &mut String, rows: impl Iterator<Item = &'a [usize]>) {
    for e in rows {
        let mut first = true;
        for v in e {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
}

pub fn kgraph_to_text(g: &KGraph) -> String {
    let mut out = format!("kgraph k={} n={}\n", g.k(), g.n());
    push_rows(&mut out, g.edges());
    out
}

pub fn digraph_to_text(h: &Digraph) -> String {
    let mut out = format!("digraph m={} n={}\n", h.m(), h.n());
    push_rows(&mut out, h.edges());
    out
}

pub fn family_to_text(f: &GraphFamily) -> String {
    let mut out = format!("family k={} n={} colors={}\n", f.k(), f.n(), f.len());
    for (j, g) in f.members().iter().enumerate() {
        let _ = writeln!(out, "color {}", j + 1);
        push_rows(&mut out, g.edges());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kgraph_text_round_trip() {
        let src = "# a triangle\nkgraph k=2 n=3\n0 1\n1 2 # middle\n\n2 0\n";
        let g = parse_kgraph(src).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(parse_kgraph(&kgraph_to_text(&g)).unwrap(), g);
        let json = Instance::KGraph(g.clone()).to_json();
        assert_eq!(parse_kgraph(&json).unwrap(), g);
    }

    #[test]
    fn digraph_keeps_order_and_repeats() {
        let h = parse_digraph("digraph m=3 n=2\n1 0 0\n0 0 1\n").unwrap();
        assert!(h.contains(&[1, 0, 0]));
        assert!(!h.contains(&[0, 1, 0]));
        let json = Instance::Digraph(h.clone()).to_json();
        assert!(json.contains("\"type\":\"digraph\""));
        assert_eq!(parse_digraph(&json).unwrap(), h);
    }

    #[test]
    fn family_round_trip() {
        let src = "family k=2 n=3 colors=2\ncolor 1\n0 1\ncolor 2\n1 2\n0 2\n";
        let f = parse_family(src).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.members()[1].edge_count(), 2);
        assert_eq!(parse_family(&family_to_text(&f)).unwrap(), f);
        assert_eq!(parse_family(&Instance::Family(f.clone()).to_json()).unwrap(), f);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_kgraph("kgraph k=2 n=3\n0 1\n0 5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let err = parse_kgraph("kgraph k=2 n=3\n1 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        assert!(parse_kgraph("kgraph n=3\n").is_err());
        assert!(parse_kgraph("digraph m=2 n=2\n").is_err());
        assert!(parse_instance("").is_err());
        assert!(parse_instance("{\"type\":\"blob\",\"n\":1}").is_err());
    }
}
