//! Vertex-weighted undirected graphs, random instances and the text file format.
//!
//! File format (UTF-8, one record per line, 1-based vertex ids):
//!
//! ```text
//! c optional comment
//! p mwis <vertices> <edges>
//! v <id> <weight>
//! e <u> <v>
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Undirected simple graph with a positive integer weight on every vertex.
///
/// Edges are stored normalized as `(u, v)` with `u < v`, sorted and unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    weights: Vec<u64>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

/// Largest accepted vertex weight; keeps sums and penalty products exact.
pub const MAX_WEIGHT: u64 = 1 << 32;

impl WeightedGraph {
    pub fn new(weights: Vec<u64>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::InvalidGraph("graph must have at least one vertex".into()));
        }
        if let Some(i) = weights.iter().position(|&w| w < 1) {
            return Err(Error::InvalidGraph(format!("vertex {i} has weight 0")));
        }
        if let Some(i) = weights.iter().position(|&w| w > MAX_WEIGHT) {
            return Err(Error::InvalidGraph(format!("vertex {i} weight exceeds {MAX_WEIGHT}")));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {u}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self {
            weights,
            edges,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight(&self, vertex: usize) -> u64 {
        self.weights[vertex]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, vertex: usize) -> &[usize] {
        &self.adjacency[vertex]
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.adjacency[vertex].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_weight(&self) -> u64 {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency
            .get(u)
            .is_some_and(|list| list.binary_search(&v).is_ok())
    }
}

/// Maximum vertex degree; 0 for edgeless graphs.
pub fn max_degree(g: &WeightedGraph) -> usize {
    g.max_degree()
}

/// Random instance: `k` vertices with weights uniform on `{1, ..., 2k+1}`
/// and each possible edge present independently with `edge_probability`.
pub fn generate_random_graph(k: usize, edge_probability: f64, seed: u64) -> Result<WeightedGraph> {
    if k == 0 {
        return Err(Error::InvalidParameter("vertex count k must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&edge_probability) {
        return Err(Error::InvalidParameter(format!(
            "edge probability {edge_probability} is outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_weight = 2 * k as u64 + 1;
    let weights: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=max_weight)).collect();
    let mut edges = Vec::new();
    for u in 0..k {
        for v in (u + 1)..k {
            if rng.gen_bool(edge_probability) {
                edges.push((u, v));
            }
        }
    }
    WeightedGraph::new(weights, edges)
}

/// Reads the graph file format. Vertex ids are 1-based in the file.
pub fn parse_graph(text: &[u8]) -> Result<WeightedGraph> {
    let text = std::str::from_utf8(text).map_err(|e| Error::parse(0, format!("not UTF-8: {e}")))?;
    let mut header: Option<(usize, usize, usize)> = None;
    let mut weights: Vec<Option<u64>> = Vec::new();
    let mut edges = Vec::new();

    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line == "c" || line.starts_with("c ") {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["p", "mwis", n, m] => {
                if header.is_some() {
                    return Err(Error::parse(line_no, "duplicate problem line"));
                }
                let n = parse_count(n, line_no)?;
                let m = parse_count(m, line_no)?;
                if n == 0 {
                    return Err(Error::parse(line_no, "graph must have at least one vertex"));
                }
                // Refuse absurd headers before allocating.
                if n > text.len() {
                    return Err(Error::parse(line_no, format!("vertex count {n} exceeds file size")));
                }
                weights = vec![None; n];
                header = Some((n, m, line_no));
            }
            ["p", ..] => return Err(Error::parse(line_no, "expected 'p mwis <n> <m>'")),
            ["v", id, weight] => {
                let Some((n, _, _)) = header else {
                    return Err(Error::parse(line_no, "vertex line before problem line"));
                };
                let id = parse_vertex(id, n, line_no)?;
                let weight: u64 = weight
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("invalid weight '{weight}'")))?;
                if weight < 1 {
                    return Err(Error::parse(line_no, "vertex weight must be at least 1"));
                }
                if weight > MAX_WEIGHT {
                    return Err(Error::parse(line_no, format!("vertex weight exceeds {MAX_WEIGHT}")));
                }
                if weights[id].replace(weight).is_some() {
                    return Err(Error::parse(line_no, format!("duplicate vertex {}", id + 1)));
                }
            }
            ["e", u, v] => {
                let Some((n, _, _)) = header else {
                    return Err(Error::parse(line_no, "edge line before problem line"));
                };
                let u = parse_vertex(u, n, line_no)?;
                let v = parse_vertex(v, n, line_no)?;
                if u == v {
                    return Err(Error::parse(line_no, format!("self-loop on vertex {}", u + 1)));
                }
                edges.push((u, v, line_no));
            }
            _ => return Err(Error::parse(line_no, format!("malformed line '{line}'"))),
        }
    }

    let Some((_, m, header_line)) = header else {
        return Err(Error::parse(0, "missing 'p mwis' problem line"));
    };
    if let Some(missing) = weights.iter().position(Option::is_none) {
        return Err(Error::parse(header_line, format!("vertex {} never declared", missing + 1)));
    }
    if edges.len() != m {
        return Err(Error::parse(
            header_line,
            format!("header declares {m} edges but file has {}", edges.len()),
        ));
    }
    let mut seen = BTreeSet::new();
    for &(u, v, line_no) in &edges {
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::parse(line_no, format!("duplicate edge {} {}", u + 1, v + 1)));
        }
    }
    let weights = weights.into_iter().map(|w| w.unwrap_or(1)).collect();
    WeightedGraph::new(weights, edges.into_iter().map(|(u, v, _)| (u, v)))
}

fn parse_count(field: &str, line_no: usize) -> Result<usize> {
    field
        .parse()
        .map_err(|_| Error::parse(line_no, format!("invalid count '{field}'")))
}

fn parse_vertex(field: &str, n: usize, line_no: usize) -> Result<usize> {
    let id: usize = field
        .parse()
        .map_err(|_| Error::parse(line_no, format!("invalid vertex id '{field}'")))?;
    if id == 0 || id > n {
        return Err(Error::parse(line_no, format!("undeclared vertex {id}")));
    }
    Ok(id - 1)
}

/// Writes the graph file format; edges sorted with the smaller id first.
pub fn write_graph(g: &WeightedGraph) -> Vec<u8> {
    let mut out = String::new();
    let _ = writeln!(out, "p mwis {} {}", g.vertex_count(), g.edge_count());
    for (i, w) in g.weights().iter().enumerate() {
        let _ = writeln!(out, "v {} {}", i + 1, w);
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out.into_bytes()
}
