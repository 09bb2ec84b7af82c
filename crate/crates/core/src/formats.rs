//! Text formats: DIMACS-style edge lists, colourings, recolouring paths and
//! positive 1-in-k CNF instances. Files are 1-indexed, memory is 0-indexed.

use std::fmt::Write as _;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadgets::CnfInstance;
use crate::graph::{Graph, Vertex};
use crate::recolour::{Colouring, RecolourPath, RecolourStep};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn fields(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let t = raw.trim();
        if t.is_empty() || t == "c" || t.starts_with("c ") {
            None
        } else {
            Some((i + 1, t.split_whitespace().collect()))
        }
    })
}

fn number(line: usize, tok: &str) -> Result<usize> {
    tok.parse::<usize>().map_err(|_| {
        parse_err(
            line,
            format!("expected a non-negative integer, found {tok:?}"),
        )
    })
}

fn one_based(line: usize, tok: &str, n: usize) -> Result<Vertex> {
    let v = number(line, tok)?;
    if v == 0 || v > n {
        return Err(parse_err(line, format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

/// Parses the `p n m` / `e u v` edge-list format.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = fields(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "missing `p n m` header"))?;
    if header.len() != 3 || header[0] != "p" {
        return Err(parse_err(hline, "expected `p <n> <m>`"));
    }
    let n = number(hline, header[1])?;
    let m = number(hline, header[2])?;
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    let mut edges = Vec::with_capacity(m);
    let mut last = hline;
    for (line, f) in lines {
        last = line;
        if f.len() != 3 || f[0] != "e" {
            return Err(parse_err(line, "expected `e <u> <v>`"));
        }
        if edges.len() == m {
            return Err(parse_err(line, format!("more than the declared {m} edges")));
        }
        let u = one_based(line, f[1], n)?;
        let v = one_based(line, f[2], n)?;
        if u == v {
            return Err(parse_err(line, format!("self-loop at vertex {}", u + 1)));
        }
        if adj[u].contains(&v) {
            return Err(parse_err(
                line,
                format!("duplicate edge {} {}", u + 1, v + 1),
            ));
        }
        adj[u].push(v);
        adj[v].push(u);
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(parse_err(
            last,
            format!("declared {m} edges, found {}", edges.len()),
        ));
    }
    Graph::from_edges(n, &edges)
}

/// Reads a graph from any byte stream.
pub fn load_graph(mut reader: impl Read) -> Result<Graph> {
    let mut text = String::new();
    reader
        .read_to_string(&mut text)
        .map_err(|e| parse_err(0, format!("read failed: {e}")))?;
    parse_graph(&text)
}

/// Serializes with edges sorted by `(u, v)`, `u < v`.
pub fn write_graph(g: &Graph) -> String {
    let mut out = String::with_capacity(16 * (g.m() + 1));
    let _ = writeln!(out, "p {} {}", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

/// Parses `k K` followed by one `v <vertex> <colour>` line per vertex.
pub fn parse_colouring(text: &str) -> Result<Colouring> {
    let mut lines = fields(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "missing `k <colours>` header"))?;
    if header.len() != 2 || header[0] != "k" {
        return Err(parse_err(hline, "expected `k <colours>`"));
    }
    let k = number(hline, header[1])?;
    let mut entries = Vec::new();
    for (line, f) in lines {
        if f.len() != 3 || f[0] != "v" {
            return Err(parse_err(line, "expected `v <vertex> <colour>`"));
        }
        let v = number(line, f[1])?;
        let c = number(line, f[2])?;
        if c == 0 || c > k {
            return Err(parse_err(line, format!("colour {c} outside 1..={k}")));
        }
        entries.push((line, v, c));
    }
    let n = entries.len();
    let mut colour = vec![0; n];
    for (line, v, c) in entries {
        if v == 0 || v > n {
            return Err(parse_err(line, format!("vertex {v} outside 1..={n}")));
        }
        if colour[v - 1] != 0 {
            return Err(parse_err(line, format!("vertex {v} coloured twice")));
        }
        colour[v - 1] = c;
    }
    Ok(Colouring::new(k, colour))
}

pub fn write_colouring(c: &Colouring) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "k {}", c.k);
    for (v, col) in c.colour.iter().enumerate() {
        let _ = writeln!(out, "v {} {}", v + 1, col);
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct PathStepFile {
    v: usize,
    to: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct PathFile {
    steps: Vec<PathStepFile>,
    length: usize,
}

/// JSON form of a path; vertex ids are 1-indexed like the graph file.
pub fn path_to_json(p: &RecolourPath) -> serde_json::Value {
    let file = PathFile {
        steps: p
            .steps
            .iter()
            .map(|s| PathStepFile {
                v: s.v + 1,
                to: s.to,
            })
            .collect(),
        length: p.len(),
    };
    serde_json::to_value(file).expect("path serializes")
}

pub fn parse_path(text: &str) -> Result<RecolourPath> {
    let file: PathFile =
        serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    if file.length != file.steps.len() {
        return Err(parse_err(
            0,
            format!(
                "length {} disagrees with {} steps",
                file.length,
                file.steps.len()
            ),
        ));
    }
    let steps = file
        .steps
        .into_iter()
        .map(|s| {
            if s.v == 0 {
                Err(parse_err(0, "vertex ids in paths are 1-indexed"))
            } else {
                Ok(RecolourStep {
                    v: s.v - 1,
                    to: s.to,
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RecolourPath { steps })
}

/// Parses `q1k <k> <n> <m>` followed by `m` clause lines.
pub fn parse_cnf(text: &str) -> Result<CnfInstance> {
    let mut lines = fields(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "missing `q1k` header"))?;
    if header.len() != 4 || header[0] != "q1k" {
        return Err(parse_err(hline, "expected `q1k <k> <n> <m>`"));
    }
    let k = number(hline, header[1])?;
    let n = number(hline, header[2])?;
    let m = number(hline, header[3])?;
    let mut clauses = Vec::with_capacity(m);
    for (line, f) in lines {
        if clauses.len() == m {
            return Err(parse_err(
                line,
                format!("more than the declared {m} clauses"),
            ));
        }
        let clause = f
            .iter()
            .map(|t| number(line, t))
            .collect::<Result<Vec<_>>>()?;
        CnfInstance::check_clause(&clause, n, k).map_err(|msg| parse_err(line, msg))?;
        clauses.push(clause);
    }
    if clauses.len() != m {
        return Err(parse_err(
            0,
            format!("declared {m} clauses, found {}", clauses.len()),
        ));
    }
    CnfInstance::new(n, k, clauses)
}

pub fn write_cnf(inst: &CnfInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "q1k {} {} {}",
        inst.k,
        inst.num_vars,
        inst.clauses.len()
    );
    for c in &inst.clauses {
        let line: Vec<String> = c.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_examples() {
        let g = parse_graph("p 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        assert_eq!((g.n(), g.m()), (3, 3));
        let g = parse_graph("c two points\np 2 0\n").unwrap();
        assert_eq!((g.n(), g.m()), (2, 0));
        match parse_graph("p 2 2\ne 1 2\ne 1 2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn graph_errors_name_lines() {
        let line_of = |t: &str| match parse_graph(t) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(line_of("p 2 1\ne 1 1\n"), 2);
        assert_eq!(line_of("p 2 1\ne 1 3\n"), 2);
        assert_eq!(line_of("c x\np 2 1\nedge 1 2\n"), 3);
        assert_eq!(line_of("p 2 x\n"), 1);
    }

    #[test]
    fn graph_round_trip() {
        let text = "p 4 3\ne 3 4\ne 1 2\ne 2 3\n";
        let g = parse_graph(text).unwrap();
        let out = write_graph(&g);
        assert_eq!(out, "p 4 3\ne 1 2\ne 2 3\ne 3 4\n");
        assert_eq!(write_graph(&parse_graph(&out).unwrap()), out);
    }

    #[test]
    fn colouring_round_trip() {
        let c = parse_colouring("k 4\nv 2 3\nv 1 1\n").unwrap();
        assert_eq!(c.colour, vec![1, 3]);
        assert_eq!(parse_colouring(&write_colouring(&c)).unwrap(), c);
        assert!(parse_colouring("k 2\nv 1 3\n").is_err());
        assert!(parse_colouring("k 2\nv 1 1\nv 1 2\n").is_err());
    }

    #[test]
    fn path_round_trip() {
        let p = RecolourPath {
            steps: vec![RecolourStep { v: 0, to: 2 }, RecolourStep { v: 3, to: 1 }],
        };
        let json = path_to_json(&p).to_string();
        assert!(json.contains("\"length\":2"));
        assert_eq!(parse_path(&json).unwrap(), p);
    }

    #[test]
    fn cnf_round_trip() {
        let inst = parse_cnf("q1k 3 4 2\n1 2 3\n2 3 4\n").unwrap();
        assert_eq!(parse_cnf(&write_cnf(&inst)).unwrap(), inst);
        assert!(parse_cnf("q1k 3 4 1\n1 2\n").is_err());
        assert!(parse_cnf("q1k 3 4 1\n1 1 2\n").is_err());
    }
}
