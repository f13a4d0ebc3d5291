use std::collections::HashMap;

use petgraph::algo::dijkstra;
use petgraph::graph::{NodeIndex, UnGraph};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: f64,
}

/// A weighted graph with its shortest-path metric.
///
/// Vertices are indexed by first appearance in the source document. The
/// all-pairs distance table is computed once at construction; vertices in
/// different components are at infinite distance.
#[derive(Clone, Debug)]
pub struct MetricGraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    neighbors: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    kappa: Vec<Option<f64>>,
    dist: Vec<Vec<f64>>,
}

/// Incremental builder shared by both document formats.
struct Builder {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    seen: HashMap<(usize, usize), usize>,
    kappa: Vec<Option<f64>>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            labels: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            seen: HashMap::new(),
            kappa: Vec::new(),
        }
    }

    fn vertex(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        let i = self.labels.len();
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), i);
        self.kappa.push(None);
        i
    }

    fn edge(&mut self, line: usize, u: &str, v: &str, length: f64) -> Result<()> {
        if !length.is_finite() {
            return Err(Error::Parse {
                line,
                message: format!("edge length must be finite, got {length}"),
            });
        }
        if length <= 0.0 {
            return Err(Error::NonPositiveLength { line, length });
        }
        if u == v {
            return Err(Error::Parse {
                line,
                message: format!("self-loop at {u:?}"),
            });
        }
        let (a, b) = (self.vertex(u), self.vertex(v));
        let key = (a.min(b), a.max(b));
        if self.seen.insert(key, line).is_some() {
            return Err(Error::DuplicateEdge {
                line,
                u: u.to_string(),
                v: v.to_string(),
            });
        }
        self.edges.push(Edge { u: a, v: b, length });
        Ok(())
    }

    fn finish(self) -> MetricGraph {
        let n = self.labels.len();
        let mut neighbors = vec![Vec::new(); n];
        let mut graph = UnGraph::<(), f64>::with_capacity(n, self.edges.len());
        let nodes: Vec<NodeIndex> = (0..n).map(|_| graph.add_node(())).collect();
        for e in &self.edges {
            neighbors[e.u].push(e.v);
            neighbors[e.v].push(e.u);
            graph.add_edge(nodes[e.u], nodes[e.v], e.length);
        }
        neighbors.iter_mut().for_each(|list| list.sort_unstable());
        let mut dist: Vec<Vec<f64>> = nodes
            .iter()
            .map(|&source| {
                let reached = dijkstra(&graph, source, None, |e| *e.weight());
                nodes
                    .iter()
                    .map(|t| reached.get(t).copied().unwrap_or(f64::INFINITY))
                    .collect()
            })
            .collect();
        // path sums taken in opposite directions can differ in the last bit
        for i in 0..n {
            for j in i + 1..n {
                let d = dist[i][j].min(dist[j][i]);
                dist[i][j] = d;
                dist[j][i] = d;
            }
        }
        MetricGraph {
            labels: self.labels,
            index: self.index,
            neighbors,
            edges: self.edges,
            kappa: self.kappa,
            dist,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDocument {
    vertices: Vec<VertexEntry>,
    edges: Vec<EdgeEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexEntry {
    label: String,
    #[serde(default)]
    kappa: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeEntry {
    u: String,
    v: String,
    length: f64,
}

/// Parses a graph document. Text starting with `{` is read as the
/// structured JSON form, anything else as an edge list.
pub fn parse_metric_graph(text: &str) -> Result<MetricGraph> {
    if text.trim_start().starts_with('{') {
        parse_graph_json(text)
    } else {
        parse_edge_list(text)
    }
}

/// Edge list: one `label label length` triple per line, `#` starts a
/// comment, blank lines are ignored.
pub fn parse_edge_list(text: &str) -> Result<MetricGraph> {
    let mut b = Builder::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields.as_slice() {
            [] => continue,
            [u, v, len] => {
                let length: f64 = len.parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("invalid edge length {len:?}"),
                })?;
                b.edge(line, u, v, length)?;
            }
            _ => {
                return Err(Error::Parse {
                    line,
                    message: format!("expected `label label length`, got {} fields", fields.len()),
                })
            }
        }
    }
    Ok(b.finish())
}

/// Structured form: explicit vertex list with optional per-vertex κ.
///
/// For errors detected after JSON decoding, `line` is the 1-based position
/// of the offending entry in its list.
pub fn parse_graph_json(text: &str) -> Result<MetricGraph> {
    let doc: GraphDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let mut b = Builder::new();
    for (n, entry) in doc.vertices.iter().enumerate() {
        if b.index.contains_key(&entry.label) {
            return Err(Error::Parse {
                line: n + 1,
                message: format!("duplicate vertex {:?}", entry.label),
            });
        }
        if let Some(k) = entry.kappa {
            if !k.is_finite() {
                return Err(Error::Parse {
                    line: n + 1,
                    message: format!("kappa must be finite at {:?}", entry.label),
                });
            }
        }
        let i = b.vertex(&entry.label);
        b.kappa[i] = entry.kappa;
    }
    for (n, e) in doc.edges.iter().enumerate() {
        for label in [&e.u, &e.v] {
            if !b.index.contains_key(label) {
                return Err(Error::UnknownVertex(label.clone()));
            }
        }
        b.edge(n + 1, &e.u, &e.v, e.length)?;
    }
    Ok(b.finish())
}

impl MetricGraph {
    /// Builds a graph from labelled edges (first-appearance indexing).
    pub fn from_edges<S: AsRef<str>>(edges: &[(S, S, f64)]) -> Result<Self> {
        let mut b = Builder::new();
        for (n, (u, v, len)) in edges.iter().enumerate() {
            b.edge(n + 1, u.as_ref(), v.as_ref(), *len)?;
        }
        Ok(b.finish())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.labels.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(format!("#{v}")))
        }
    }

    /// Neighbors of `v`, ascending by index.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    /// Shortest-path distance.
    pub fn distance(&self, a: usize, b: usize) -> f64 {
        self.dist[a][b]
    }

    /// Per-vertex curvature values given by a structured document.
    pub fn declared_kappa(&self, v: usize) -> Option<f64> {
        self.kappa[v]
    }

    pub fn has_declared_kappa(&self) -> bool {
        self.kappa.iter().any(Option::is_some)
    }
}
