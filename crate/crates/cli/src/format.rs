//! Graph file formats.
//!
//! JSON documents look like
//! `{"directed": false, "vertices": ["s", "t"], "edges": [{"tail": "s", "head": "t", "sigma": 5}]}`
//! with `sigma` optional (default 1).
//!
//! Edge lists start with a header line `directed` or `undirected`, followed
//! by one `tail head [sigma]` record per line. A line with a single label
//! declares a vertex, which is how isolated vertices and an explicit vertex
//! order are written. Anything after a token starting with `#` is a comment.
//! Vertices are numbered in order of first appearance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use clap::ValueEnum;
use pmodulus_core::graph::{Graph, VertexId};
use serde::{Deserialize, Serialize};

use crate::error::ParseError;

/// Supported graph encodings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// A [`GraphDocument`] in JSON.
    Json,
    /// Whitespace-separated edge list with a header line.
    #[value(name = "edgelist")]
    EdgeList,
}

impl Format {
    /// `.json` files are JSON, everything else an edge list.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::EdgeList,
        }
    }
}

/// On-disk JSON shape of a graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    /// Whether edges are oriented tail to head.
    pub directed: bool,
    /// Vertex labels in index order.
    pub vertices: Vec<String>,
    /// Edges in canonical order.
    pub edges: Vec<EdgeRecord>,
}

/// One edge of a [`GraphDocument`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    /// Tail label.
    pub tail: String,
    /// Head label.
    pub head: String,
    /// Weight, 1 when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
}

/// Parses `text` in the given format.
pub fn parse_graph(text: &[u8], format: Format) -> Result<Graph, ParseError> {
    let text = std::str::from_utf8(text).map_err(|e| {
        let line = text[..e.valid_up_to()].iter().filter(|b| **b == b'\n').count() + 1;
        ParseError::at(line, "input is not valid UTF-8")
    })?;
    match format {
        Format::Json => parse_json(text),
        Format::EdgeList => parse_edge_list(text),
    }
}

/// Serializes `graph`; parsing the result gives back an identical graph.
pub fn write_graph(graph: &Graph, format: Format) -> Result<String, ParseError> {
    match format {
        Format::Json => {
            let doc = to_document(graph);
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| ParseError::plain(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::EdgeList => write_edge_list(graph),
    }
}

/// The document describing `graph`; `sigma` is omitted where it equals 1.
pub fn to_document(graph: &Graph) -> GraphDocument {
    GraphDocument {
        directed: graph.is_directed(),
        vertices: graph.labels().to_vec(),
        edges: graph
            .edges()
            .iter()
            .zip(graph.sigma())
            .map(|(&(x, y), &w)| EdgeRecord {
                tail: graph.label(x).to_string(),
                head: graph.label(y).to_string(),
                sigma: if w == 1.0 { None } else { Some(w) },
            })
            .collect(),
    }
}

fn parse_json(text: &str) -> Result<Graph, ParseError> {
    let doc: GraphDocument = serde_json::from_str(text).map_err(|e| ParseError {
        line: Some(e.line()),
        column: Some(e.column()),
        message: e.to_string(),
    })?;
    let mut index = BTreeMap::new();
    for (i, l) in doc.vertices.iter().enumerate() {
        if index.insert(l.as_str(), i).is_some() {
            return Err(ParseError::plain(format!("duplicate vertex {l:?}")));
        }
    }
    let mut checker = EdgeChecker::new(doc.directed);
    let mut triples = Vec::with_capacity(doc.edges.len());
    for (k, rec) in doc.edges.iter().enumerate() {
        let end = |l: &str| {
            index
                .get(l)
                .copied()
                .ok_or_else(|| ParseError::plain(format!("edge {k}: unknown vertex {l:?}")))
        };
        let (x, y) = (end(&rec.tail)?, end(&rec.head)?);
        let w = rec.sigma.unwrap_or(1.0);
        checker
            .check(x, y, w, &rec.tail, &rec.head)
            .map_err(|m| ParseError::plain(format!("edge {k}: {m}")))?;
        triples.push((x, y, w));
    }
    Graph::new(doc.directed, doc.vertices, triples).map_err(|e| ParseError::plain(e.to_string()))
}

struct EdgeChecker {
    directed: bool,
    seen: BTreeSet<(VertexId, VertexId)>,
}

impl EdgeChecker {
    fn new(directed: bool) -> Self {
        EdgeChecker {
            directed,
            seen: BTreeSet::new(),
        }
    }

    fn check(&mut self, x: VertexId, y: VertexId, w: f64, tail: &str, head: &str) -> Result<(), String> {
        if x == y {
            return Err(format!("self-loop at {tail:?}"));
        }
        if !(w > 0.0) {
            return Err(format!("nonpositive weight {w} on {tail:?}-{head:?}"));
        }
        if !w.is_finite() {
            return Err(format!("weight {w} on {tail:?}-{head:?} is not finite"));
        }
        let key = if self.directed || x < y { (x, y) } else { (y, x) };
        if !self.seen.insert(key) {
            return Err(format!("duplicate edge {tail:?}-{head:?}"));
        }
        Ok(())
    }
}

fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut directed = None;
    let mut labels: Vec<String> = Vec::new();
    let mut index: BTreeMap<String, VertexId> = BTreeMap::new();
    let mut triples = Vec::new();
    let mut checker = EdgeChecker::new(false);
    let mut vertex = |l: &str, labels: &mut Vec<String>| -> VertexId {
        *index.entry(l.to_string()).or_insert_with(|| {
            labels.push(l.to_string());
            labels.len() - 1
        })
    };

    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let tokens: Vec<&str> = line.split_whitespace().take_while(|t| !t.starts_with('#')).collect();
        if tokens.is_empty() {
            continue;
        }
        if directed.is_none() {
            let flag = match tokens.as_slice() {
                ["directed"] => true,
                ["undirected"] => false,
                _ => {
                    return Err(ParseError::at(
                        lineno,
                        format!("expected header `directed` or `undirected`, found {:?}", line.trim()),
                    ))
                }
            };
            directed = Some(flag);
            checker.directed = flag;
            continue;
        }
        match tokens.as_slice() {
            [v] => {
                vertex(v, &mut labels);
            }
            [tail, head, rest @ ..] => {
                let w = match rest {
                    [] => 1.0,
                    [w] => w.parse::<f64>().map_err(|_| {
                        let column = line.find(w).map(|c| c + 1);
                        ParseError {
                            line: Some(lineno),
                            column,
                            message: format!("cannot parse weight {w:?}"),
                        }
                    })?,
                    _ => {
                        return Err(ParseError::at(
                            lineno,
                            format!("expected `tail head [sigma]`, found {} fields", tokens.len()),
                        ))
                    }
                };
                let x = vertex(tail, &mut labels);
                let y = vertex(head, &mut labels);
                checker.check(x, y, w, tail, head).map_err(|m| ParseError::at(lineno, m))?;
                triples.push((x, y, w));
            }
            [] => unreachable!(),
        }
    }
    let Some(directed) = directed else {
        return Err(ParseError::plain("empty edge list: missing header `directed` or `undirected`"));
    };
    Graph::new(directed, labels, triples).map_err(|e| ParseError::plain(e.to_string()))
}

fn write_edge_list(graph: &Graph) -> Result<String, ParseError> {
    for l in graph.labels() {
        if l.is_empty() || l.chars().any(char::is_whitespace) || l.starts_with('#') {
            return Err(ParseError::plain(format!(
                "vertex label {l:?} cannot be written as an edge-list token"
            )));
        }
    }
    let mut out = String::new();
    out.push_str(if graph.is_directed() { "directed\n" } else { "undirected\n" });

    // first-appearance order over the edges must reproduce the vertex order,
    // otherwise every vertex is declared up front
    let mut order = Vec::with_capacity(graph.vertex_count());
    let mut seen = vec![false; graph.vertex_count()];
    for &(x, y) in graph.edges() {
        for v in [x, y] {
            if !seen[v] {
                seen[v] = true;
                order.push(v);
            }
        }
    }
    if order.len() != graph.vertex_count() || order.iter().enumerate().any(|(i, v)| i != *v) {
        for l in graph.labels() {
            let _ = writeln!(out, "{l}");
        }
    }
    for (&(x, y), &w) in graph.edges().iter().zip(graph.sigma()) {
        if w == 1.0 {
            let _ = writeln!(out, "{} {}", graph.label(x), graph.label(y));
        } else {
            let _ = writeln!(out, "{} {} {w}", graph.label(x), graph.label(y));
        }
    }
    Ok(out)
}
