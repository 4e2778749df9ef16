//! Walk families described by a ρ-shortest-walk oracle.
//!
//! A family is never enumerated. The solver only needs, for a nonnegative
//! density `ρ`, one member of minimal `ρ`-length; that is a nonnegative
//! shortest-path search on the graph.
//!
//! Ties are broken deterministically: among the `ρ`-shortest members the
//! search prefers the fewest hops, then the lexicographically smallest edge
//! sequence. Repeated solves therefore generate identical active sets.

use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{input, parameter, Result};
use crate::graph::{EdgeDensity, EdgeId, Graph, VertexId, Walk};

/// The concrete families in scope.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyKind {
    /// `Γ(s, t)`: every walk from `source` to `target`, `source ≠ target`.
    Connecting {
        /// Start vertex.
        source: VertexId,
        /// End vertex.
        target: VertexId,
    },
    /// Every walk from `source` to `target` that visits `via`.
    ViaVertex {
        /// Start vertex.
        source: VertexId,
        /// Vertex every member must visit.
        via: VertexId,
        /// End vertex.
        target: VertexId,
    },
    /// A finite list of walks given up front.
    Explicit(Vec<Walk>),
}

/// A family of walks on a fixed graph. Construction validates it against
/// the graph; the oracle methods must be called with that same graph.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkFamily {
    kind: FamilyKind,
}

impl WalkFamily {
    /// `Γ(s, t)`.
    pub fn connecting(graph: &Graph, source: VertexId, target: VertexId) -> Result<Self> {
        graph.check_vertex(source)?;
        graph.check_vertex(target)?;
        if source == target {
            return input(format!(
                "a connecting family needs distinct endpoints, got {:?} twice",
                graph.label(source)
            ));
        }
        Ok(WalkFamily {
            kind: FamilyKind::Connecting { source, target },
        })
    }

    /// Walks from `source` to `target` through `via`.
    ///
    /// A minimizer is the concatenation of a shortest `source → via` walk and
    /// a shortest `via → target` walk. That decomposition is exact because
    /// members are walks, which may revisit vertices and edges, and `ρ ≥ 0`.
    pub fn via_vertex(graph: &Graph, source: VertexId, via: VertexId, target: VertexId) -> Result<Self> {
        graph.check_vertex(source)?;
        graph.check_vertex(via)?;
        graph.check_vertex(target)?;
        if source == via && via == target {
            return input("a via-vertex family needs at least two distinct vertices");
        }
        Ok(WalkFamily {
            kind: FamilyKind::ViaVertex { source, via, target },
        })
    }

    /// A finite family. Every walk must belong to `graph`; duplicates are
    /// dropped, order of first appearance is kept.
    pub fn explicit(graph: &Graph, walks: Vec<Walk>) -> Result<Self> {
        let mut kept: Vec<Walk> = Vec::with_capacity(walks.len());
        for w in walks {
            // re-validate: the walk may come from another graph
            let again = Walk::new(graph, w.start(), w.edges().to_vec())?;
            if again != w {
                return input("walk does not match the graph's edge endpoints");
            }
            if !kept.contains(&w) {
                kept.push(w);
            }
        }
        Ok(WalkFamily {
            kind: FamilyKind::Explicit(kept),
        })
    }

    /// The underlying description.
    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    /// Whether `walk` is a member.
    pub fn contains(&self, walk: &Walk) -> bool {
        match &self.kind {
            FamilyKind::Connecting { source, target } => walk.start() == *source && walk.end() == *target,
            FamilyKind::ViaVertex { source, via, target } => {
                walk.start() == *source && walk.end() == *target && walk.vertices().contains(via)
            }
            FamilyKind::Explicit(list) => list.contains(walk),
        }
    }

    /// A member minimizing `ℓ_ρ` together with its length, or `None` when the
    /// family is empty. Requires `ρ ≥ 0`.
    pub fn shortest_walk(&self, graph: &Graph, rho: &EdgeDensity) -> Result<Option<(Walk, f64)>> {
        if rho.len() != graph.edge_count() {
            return input(format!(
                "density has {} entries, graph has {} edges",
                rho.len(),
                graph.edge_count()
            ));
        }
        if let Some(e) = rho.values().iter().position(|v| *v < 0.0) {
            return parameter(format!("negative density on edge {}", graph.edge_key(e)));
        }
        let w = rho.values();
        Ok(match &self.kind {
            FamilyKind::Connecting { source, target } => {
                shortest_path(graph, w, *source, *target).map(|p| p.into_walk())
            }
            FamilyKind::ViaVertex { source, via, target } => {
                let first = shortest_path(graph, w, *source, *via);
                let second = shortest_path(graph, w, *via, *target);
                match (first, second) {
                    (Some(a), Some(b)) => {
                        let len = a.length + b.length;
                        let mut vertices = a.vertices;
                        vertices.extend_from_slice(&b.vertices[1..]);
                        let mut edges = a.edges;
                        edges.extend_from_slice(&b.edges);
                        Some((Walk::from_parts(vertices, edges), len))
                    }
                    _ => None,
                }
            }
            FamilyKind::Explicit(list) => {
                let mut best: Option<(usize, f64)> = None;
                for (i, walk) in list.iter().enumerate() {
                    let len: f64 = walk.edges().iter().map(|e| w[*e]).sum();
                    if best.is_none_or(|(_, b)| len < b) {
                        best = Some((i, len));
                    }
                }
                best.map(|(i, len)| (list[i].clone(), len))
            }
        })
    }

    /// `ℓ_ρ(Γ)`, with `+∞` standing for the empty family.
    pub fn rho_length(&self, graph: &Graph, rho: &EdgeDensity) -> Result<f64> {
        Ok(self
            .shortest_walk(graph, rho)?
            .map_or(f64::INFINITY, |(_, len)| len))
    }

    /// A member with the fewest hops (`ρ ≡ 1`), or `None` for an empty family.
    pub fn hop_shortest(&self, graph: &Graph) -> Option<Walk> {
        let ones = EdgeDensity::constant(graph.edge_count(), 1.0);
        self.shortest_walk(graph, &ones)
            .ok()
            .flatten()
            .map(|(w, _)| w)
    }
}

/// `N(γ, ·)`: traversal counts of `walk` over `edge_count` edges.
pub fn usage_row(walk: &Walk, edge_count: usize) -> Vec<u32> {
    let mut row = vec![0u32; edge_count];
    for &e in walk.edges() {
        row[e] += 1;
    }
    row
}

/// The usage matrix of an active subfamily: rows are walks, columns are
/// edges, entries are traversal counts. Stored sparsely in both directions.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct UsageMatrix {
    edge_count: usize,
    rows: Vec<Vec<(EdgeId, u32)>>,
    cols: Vec<Vec<(usize, u32)>>,
}

impl UsageMatrix {
    /// An empty matrix over `edge_count` columns.
    pub fn new(edge_count: usize) -> Self {
        UsageMatrix {
            edge_count,
            rows: Vec::new(),
            cols: vec![Vec::new(); edge_count],
        }
    }

    /// The matrix whose rows are the given walks.
    pub fn from_walks<'a>(edge_count: usize, walks: impl IntoIterator<Item = &'a Walk>) -> Result<Self> {
        let mut m = UsageMatrix::new(edge_count);
        for w in walks {
            m.push_walk(w)?;
        }
        Ok(m)
    }

    /// Appends the usage row of `walk`.
    pub fn push_walk(&mut self, walk: &Walk) -> Result<()> {
        if let Some(e) = walk.edges().iter().find(|e| **e >= self.edge_count) {
            return input(format!("edge id {e} outside a matrix over {} edges", self.edge_count));
        }
        let dense = usage_row(walk, self.edge_count);
        self.push_counts(&dense)
    }

    /// Appends a dense row of traversal counts. The row must not be all zero.
    pub fn push_counts(&mut self, counts: &[u32]) -> Result<()> {
        if counts.len() != self.edge_count {
            return input(format!(
                "usage row has {} entries, expected {}",
                counts.len(),
                self.edge_count
            ));
        }
        let i = self.rows.len();
        let row: Vec<(EdgeId, u32)> = counts
            .iter()
            .enumerate()
            .filter(|(_, c)| **c > 0)
            .map(|(e, c)| (e, *c))
            .collect();
        if row.is_empty() {
            return input("usage row traverses no edge");
        }
        for &(e, c) in &row {
            self.cols[e].push((i, c));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Number of rows (active walks).
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Number of columns (edges).
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Whether the matrix has no rows.
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Nonzero `(edge, count)` pairs of row `i`.
    pub fn row(&self, i: usize) -> &[(EdgeId, u32)] {
        &self.rows[i]
    }

    /// Nonzero `(row, count)` pairs of column `e`.
    pub fn column(&self, e: EdgeId) -> &[(usize, u32)] {
        &self.cols[e]
    }

    /// `Σ_e N(i, e) ρ(e)`.
    pub fn row_dot(&self, i: usize, rho: &[f64]) -> f64 {
        self.rows[i].iter().map(|(e, c)| *c as f64 * rho[*e]).sum()
    }

    /// `Nᵀ λ`: per-edge `Σ_γ N(γ, e) λ(γ)`.
    pub fn transpose_mul(&self, lambda: &[f64]) -> Vec<f64> {
        self.cols
            .iter()
            .map(|col| col.iter().map(|(i, c)| *c as f64 * lambda[*i]).sum())
            .collect()
    }
}

struct PathSearch {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
    length: f64,
}

impl PathSearch {
    fn into_walk(self) -> (Walk, f64) {
        (Walk::from_parts(self.vertices, self.edges), self.length)
    }
}

#[derive(PartialEq)]
struct Label {
    dist: f64,
    hops: usize,
    vertex: VertexId,
}

impl Eq for Label {}

impl Ord for Label {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then(other.hops.cmp(&self.hops))
            .then(other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Distances to `target` under nonnegative weights, as `(dist, hops)` labels
/// ordered lexicographically. Unreachable vertices carry `f64::INFINITY`.
pub(crate) fn distances_to(graph: &Graph, w: &[f64], target: VertexId) -> (Vec<f64>, Vec<usize>) {
    let n = graph.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut hops = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[target] = 0.0;
    hops[target] = 0;
    heap.push(Label {
        dist: 0.0,
        hops: 0,
        vertex: target,
    });
    while let Some(Label { dist: d, hops: h, vertex: x }) = heap.pop() {
        if done[x] {
            continue;
        }
        done[x] = true;
        for &(e, y) in graph.in_edges(x) {
            if done[y] {
                continue;
            }
            let nd = d + w[e];
            let nh = h + 1;
            if nd < dist[y] || (nd == dist[y] && nh < hops[y]) {
                dist[y] = nd;
                hops[y] = nh;
                heap.push(Label {
                    dist: nd,
                    hops: nh,
                    vertex: y,
                });
            }
        }
    }
    (dist, hops)
}

/// Shortest `source → target` path; `source == target` yields the empty path.
fn shortest_path(graph: &Graph, w: &[f64], source: VertexId, target: VertexId) -> Option<PathSearch> {
    let (dist, hops) = distances_to(graph, w, target);
    if !dist[source].is_finite() {
        return None;
    }
    let mut vertices = vec![source];
    let mut edges = Vec::new();
    let mut at = source;
    // Each step strictly lowers the hop label, so this terminates.
    while at != target {
        let &(e, next) = graph
            .out_edges(at)
            .iter()
            .find(|&&(e, y)| hops[y] != usize::MAX && hops[y] + 1 == hops[at] && w[e] + dist[y] == dist[at])
            .expect("a tight edge leaves every labelled vertex");
        edges.push(e);
        vertices.push(next);
        at = next;
    }
    Some(PathSearch {
        vertices,
        edges,
        length: dist[source],
    })
}
