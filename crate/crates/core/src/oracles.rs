//! Classical graph quantities the modulus generalizes, computed
//! independently of the solver: hop distance, effective conductance and
//! max-flow/min-cut.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{input, Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::math::{abs, solve_dense};

/// Breadth-first hop distance from `s` to `t`; `None` if `t` is unreachable.
pub fn shortest_hops(graph: &Graph, s: VertexId, t: VertexId) -> Result<Option<usize>> {
    graph.check_vertex(s)?;
    graph.check_vertex(t)?;
    if s == t {
        return input("hop distance needs distinct vertices");
    }
    let dist = bfs(graph, s, |_| true);
    Ok(dist[t])
}

fn bfs(graph: &Graph, s: VertexId, allowed: impl Fn(EdgeId) -> bool) -> Vec<Option<usize>> {
    let mut dist = vec![None; graph.vertex_count()];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x].unwrap_or(0);
        for &(e, y) in graph.out_edges(x) {
            if dist[y].is_none() && allowed(e) {
                dist[y] = Some(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Effective conductance between `s` and `t` of the resistor network with
/// conductances `σ`.
///
/// Solves the weighted Laplacian system on the component of `s` with
/// `φ(s) = 0`, `φ(t) = 1` and returns the power `Σ σ(x,y)(φ(x) − φ(y))²`.
pub fn effective_conductance(graph: &Graph, s: VertexId, t: VertexId) -> Result<f64> {
    Ok(harmonic_potential(graph, s, t)?.1)
}

/// The harmonic potential (`φ(s) = 0`, `φ(t) = 1`, `None` outside the
/// component of `s`) and its power.
pub fn harmonic_potential(graph: &Graph, s: VertexId, t: VertexId) -> Result<(Vec<Option<f64>>, f64)> {
    if graph.is_directed() {
        return Err(Error::Unsupported("effective conductance of a directed graph"));
    }
    graph.check_vertex(s)?;
    graph.check_vertex(t)?;
    if s == t {
        return input("effective conductance needs distinct vertices");
    }
    let reach = bfs(graph, s, |_| true);
    if reach[t].is_none() {
        return input("s and t lie in different components");
    }
    // unknowns: component vertices other than s and t
    let mut slot = vec![usize::MAX; graph.vertex_count()];
    let mut interior = Vec::new();
    for v in 0..graph.vertex_count() {
        if reach[v].is_some() && v != s && v != t {
            slot[v] = interior.len();
            interior.push(v);
        }
    }
    let n = interior.len();
    let mut a = vec![0.0; n * n];
    let mut b = vec![0.0; n];
    for (e, &(x, y)) in graph.edges().iter().enumerate() {
        if reach[x].is_none() {
            continue;
        }
        let w = graph.sigma()[e];
        for (u, v) in [(x, y), (y, x)] {
            let iu = slot[u];
            if iu == usize::MAX {
                continue;
            }
            a[iu * n + iu] += w;
            if v == t {
                b[iu] += w;
            } else if v != s {
                a[iu * n + slot[v]] -= w;
            }
        }
    }
    let interior_phi = if n == 0 {
        Vec::new()
    } else {
        solve_dense(a, b, n, 1e-14).ok_or_else(|| Error::Internal("singular Laplacian block".into()))?
    };
    let mut phi = vec![None; graph.vertex_count()];
    phi[s] = Some(0.0);
    phi[t] = Some(1.0);
    for (i, v) in interior.iter().enumerate() {
        phi[*v] = Some(interior_phi[i]);
    }
    let power = graph
        .edges()
        .iter()
        .zip(graph.sigma())
        .filter_map(|(&(x, y), w)| match (phi[x], phi[y]) {
            (Some(a), Some(b)) => Some(w * (a - b) * (a - b)),
            _ => None,
        })
        .sum();
    Ok((phi, power))
}

/// Max-flow value and a minimum cut.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowResult {
    /// Value of the maximum flow.
    pub value: f64,
    /// `Σ σ(e)` over `cut_edges`.
    pub cut_value: f64,
    /// A disconnecting edge set of minimum weight.
    pub cut_edges: Vec<EdgeId>,
}

/// Maximum `s → t` flow with capacities `σ` by shortest augmenting paths.
///
/// An undirected edge becomes two opposed arcs sharing one capacity. The
/// returned cut is the edge boundary of the residual-reachable set of `s`;
/// it is checked to disconnect `t` from `s` and to match the flow value.
pub fn max_flow_min_cut(graph: &Graph, s: VertexId, t: VertexId) -> Result<FlowResult> {
    graph.check_vertex(s)?;
    graph.check_vertex(t)?;
    if s == t {
        return input("max-flow needs distinct vertices");
    }
    let n = graph.vertex_count();
    let sigma = graph.sigma();
    // arc 2e runs tail→head, arc 2e+1 head→tail
    let m = graph.edge_count();
    let mut residual = vec![0.0; 2 * m];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(x, y)) in graph.edges().iter().enumerate() {
        residual[2 * e] = sigma[e];
        residual[2 * e + 1] = if graph.is_directed() { 0.0 } else { sigma[e] };
        adj[x].push(2 * e);
        adj[y].push(2 * e + 1);
    }
    let head = |arc: usize| {
        let (x, y) = graph.endpoints(arc / 2);
        if arc.is_multiple_of(2) {
            y
        } else {
            x
        }
    };
    let scale = sigma.iter().copied().fold(0.0, f64::max);
    let eps = 1e-12 * scale.max(1.0);

    let mut value = 0.0;
    loop {
        let mut parent = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            if x == t {
                break;
            }
            for &arc in &adj[x] {
                let y = head(arc);
                if !seen[y] && residual[arc] > eps {
                    seen[y] = true;
                    parent[y] = arc;
                    queue.push_back(y);
                }
            }
        }
        if !seen[t] {
            break;
        }
        let mut bottleneck = f64::INFINITY;
        let mut v = t;
        while v != s {
            let arc = parent[v];
            bottleneck = bottleneck.min(residual[arc]);
            v = head(arc ^ 1);
        }
        let mut v = t;
        while v != s {
            let arc = parent[v];
            residual[arc] -= bottleneck;
            residual[arc ^ 1] += bottleneck;
            v = head(arc ^ 1);
        }
        value += bottleneck;
    }

    // residual-reachable side of the cut
    let mut side = vec![false; n];
    side[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        for &arc in &adj[x] {
            let y = head(arc);
            if !side[y] && residual[arc] > eps {
                side[y] = true;
                queue.push_back(y);
            }
        }
    }
    let cut_edges: Vec<EdgeId> = graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, &(x, y))| {
            if graph.is_directed() {
                side[x] && !side[y]
            } else {
                side[x] != side[y]
            }
        })
        .map(|(e, _)| e)
        .collect();
    let cut_value: f64 = cut_edges.iter().map(|e| sigma[*e]).sum();

    let mut blocked = vec![false; m];
    for e in &cut_edges {
        blocked[*e] = true;
    }
    if bfs(graph, s, |e| !blocked[e])[t].is_some() {
        return Err(Error::Internal("minimum cut does not disconnect t from s".into()));
    }
    if abs(cut_value - value) > 1e-9 * value.max(1.0) {
        return Err(Error::Internal(alloc::format!(
            "flow {value} and cut {cut_value} disagree"
        )));
    }
    Ok(FlowResult {
        value,
        cut_value,
        cut_edges,
    })
}
