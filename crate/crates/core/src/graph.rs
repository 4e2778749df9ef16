//! Graphs, walks, edge densities and the `p`-energy.
//!
//! Edges live in a fixed canonical order (insertion order). Every density,
//! usage row and weight vector in the crate is indexed by that order, so
//! identical inputs always produce identical outputs.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{input, parameter, Error, Result};
use crate::math::{abs, abs_pow, pow};

/// Index of a vertex in [`Graph::labels`] order.
pub type VertexId = usize;
/// Index of an edge in canonical order.
pub type EdgeId = usize;

/// The exponent `p ∈ [1, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    /// A finite exponent `p ≥ 1`.
    Finite(f64),
    /// `p = ∞`.
    Infinity,
}

impl Exponent {
    /// Validates `p`; `f64::INFINITY` maps to [`Exponent::Infinity`].
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else if p.is_finite() && p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            parameter(format!("exponent p must lie in [1, inf], got {p}"))
        }
    }

    /// The exponent as a float (`f64::INFINITY` for `∞`).
    pub fn as_f64(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// `Some(p)` for finite exponents.
    pub fn finite(self) -> Option<f64> {
        match self {
            Exponent::Finite(p) => Some(p),
            Exponent::Infinity => None,
        }
    }

    pub(crate) fn check(self) -> Result<Self> {
        match self {
            Exponent::Finite(p) => Exponent::new(p),
            Exponent::Infinity => Ok(self),
        }
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        self.as_f64().partial_cmp(&other.as_f64())
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" | "∞" => Ok(Exponent::Infinity),
            _ => match t.parse::<f64>() {
                Ok(p) => Exponent::new(p),
                Err(_) => parameter(format!("cannot parse exponent {t:?}")),
            },
        }
    }
}

/// A finite simple graph with strictly positive edge weights.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    directed: bool,
    labels: Vec<String>,
    index: BTreeMap<String, VertexId>,
    edges: Vec<(VertexId, VertexId)>,
    sigma: Vec<f64>,
    // (edge, neighbor) pairs in increasing edge order
    out_adj: Vec<Vec<(EdgeId, VertexId)>>,
    in_adj: Vec<Vec<(EdgeId, VertexId)>>,
}

impl Graph {
    /// Builds a graph from vertex labels and `(tail, head, σ)` triples.
    ///
    /// Rejects empty vertex sets, duplicate labels, self-loops, duplicate
    /// edges (in an undirected graph `(x, y)` and `(y, x)` are the same
    /// edge) and weights that are not strictly positive and finite.
    pub fn new(directed: bool, labels: Vec<String>, edges: Vec<(VertexId, VertexId, f64)>) -> Result<Self> {
        if labels.is_empty() {
            return input("a graph needs at least one vertex");
        }
        let n = labels.len();
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return input(format!("duplicate vertex label {l:?}"));
            }
        }
        let mut seen = BTreeMap::new();
        let mut pairs = Vec::with_capacity(edges.len());
        let mut sigma = Vec::with_capacity(edges.len());
        for (k, &(u, v, w)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return input(format!("edge {k} references an unknown vertex"));
            }
            if u == v {
                return input(format!("edge {k} is a self-loop at {:?}", labels[u]));
            }
            if !(w > 0.0) || !w.is_finite() {
                return parameter(format!(
                    "nonpositive weight {w} on edge {:?}-{:?}",
                    labels[u], labels[v]
                ));
            }
            let key = if directed || u < v { (u, v) } else { (v, u) };
            if seen.insert(key, k).is_some() {
                return input(format!("duplicate edge {:?}-{:?}", labels[u], labels[v]));
            }
            pairs.push((u, v));
            sigma.push(w);
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for (e, &(u, v)) in pairs.iter().enumerate() {
            out_adj[u].push((e, v));
            in_adj[v].push((e, u));
            if !directed {
                out_adj[v].push((e, u));
                in_adj[u].push((e, v));
            }
        }
        Ok(Graph {
            directed,
            labels,
            index,
            edges: pairs,
            sigma,
            out_adj,
            in_adj,
        })
    }

    /// Convenience constructor keyed by labels.
    pub fn from_labeled(directed: bool, labels: &[&str], edges: &[(&str, &str, f64)]) -> Result<Self> {
        let owned: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        let lookup = |l: &str| -> Result<VertexId> {
            labels
                .iter()
                .position(|x| *x == l)
                .ok_or_else(|| Error::Input(format!("unknown vertex {l:?}")))
        };
        let mut triples = Vec::with_capacity(edges.len());
        for &(a, b, w) in edges {
            triples.push((lookup(a)?, lookup(b)?, w));
        }
        Graph::new(directed, owned, triples)
    }

    /// Same topology with a new weight vector.
    pub fn with_sigma(&self, sigma: Vec<f64>) -> Result<Self> {
        if sigma.len() != self.edges.len() {
            return input(format!(
                "weight vector has {} entries, graph has {} edges",
                sigma.len(),
                self.edges.len()
            ));
        }
        if let Some(w) = sigma.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return parameter(format!("nonpositive weight {w}"));
        }
        let mut g = self.clone();
        g.sigma = sigma;
        Ok(g)
    }

    /// Whether edges are oriented.
    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// `n = |V|`.
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// `m = |E|`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Vertex labels in index order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Label of vertex `v`.
    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    /// Looks a vertex up by label.
    pub fn vertex(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    /// `(tail, head)` pairs in canonical order.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    /// Endpoints of edge `e` as given at construction.
    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    /// Edge weights `σ` in canonical order.
    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    /// `σ_min = min_e σ(e)`; `+∞` for an edgeless graph.
    pub fn sigma_min(&self) -> f64 {
        self.sigma.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `σ(E) = Σ_e σ(e)`.
    pub fn sigma_total(&self) -> f64 {
        self.sigma.iter().sum()
    }

    /// Edges leaving `v` as `(edge, neighbor)` pairs, sorted by edge id.
    /// Undirected edges appear at both endpoints.
    pub fn out_edges(&self, v: VertexId) -> &[(EdgeId, VertexId)] {
        &self.out_adj[v]
    }

    /// Edges entering `v` as `(edge, neighbor)` pairs, sorted by edge id.
    pub fn in_edges(&self, v: VertexId) -> &[(EdgeId, VertexId)] {
        &self.in_adj[v]
    }

    /// `"tail,head"` key used by the serialized outputs.
    pub fn edge_key(&self, e: EdgeId) -> String {
        let (u, v) = self.edges[e];
        format!("{},{}", self.labels[u], self.labels[v])
    }

    /// Id of the edge joining `u` to `v`, honoring orientation.
    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.out_adj.get(u)?.iter().find(|(_, w)| *w == v).map(|(e, _)| *e)
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.labels.len() {
            Ok(())
        } else {
            input(format!("vertex id {v} out of range (n = {})", self.labels.len()))
        }
    }
}

/// A walk: a nonempty edge sequence with matching consecutive endpoints.
///
/// Both the vertex string `v_0 … v_r` and the edge string `e_1 … e_r` are
/// kept; for undirected graphs the vertex string fixes the traversal
/// direction of each edge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Walk {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl Walk {
    /// Validates an edge sequence starting at `start`.
    pub fn new(graph: &Graph, start: VertexId, edges: Vec<EdgeId>) -> Result<Self> {
        graph.check_vertex(start)?;
        if edges.is_empty() {
            return input("a walk traverses at least one edge");
        }
        let mut vertices = Vec::with_capacity(edges.len() + 1);
        vertices.push(start);
        let mut at = start;
        for &e in &edges {
            if e >= graph.edge_count() {
                return input(format!("edge id {e} out of range (m = {})", graph.edge_count()));
            }
            let (u, v) = graph.endpoints(e);
            at = if u == at {
                v
            } else if !graph.is_directed() && v == at {
                u
            } else {
                return input(format!(
                    "edge {} cannot be traversed from {:?}",
                    graph.edge_key(e),
                    graph.label(at)
                ));
            };
            vertices.push(at);
        }
        Ok(Walk { vertices, edges })
    }

    /// Builds a walk from a vertex string `v_0 … v_r`, `r ≥ 1`.
    pub fn from_vertices(graph: &Graph, vertices: &[VertexId]) -> Result<Self> {
        if vertices.len() < 2 {
            return input("a walk traverses at least one edge");
        }
        for &v in vertices {
            graph.check_vertex(v)?;
        }
        let mut edges = Vec::with_capacity(vertices.len() - 1);
        for w in vertices.windows(2) {
            match graph.find_edge(w[0], w[1]) {
                Some(e) => edges.push(e),
                None => {
                    return input(format!(
                        "no edge from {:?} to {:?}",
                        graph.label(w[0]),
                        graph.label(w[1])
                    ))
                }
            }
        }
        Ok(Walk {
            vertices: vertices.to_vec(),
            edges,
        })
    }

    pub(crate) fn from_parts(vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> Self {
        debug_assert_eq!(vertices.len(), edges.len() + 1);
        debug_assert!(!edges.is_empty());
        Walk { vertices, edges }
    }

    /// Hop count `ℓ(γ) = r`.
    pub fn hops(&self) -> usize {
        self.edges.len()
    }

    /// Edge sequence.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    /// Vertex sequence, one longer than the edge sequence.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// First vertex.
    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    /// Last vertex.
    pub fn end(&self) -> VertexId {
        self.vertices[self.vertices.len() - 1]
    }

    /// Vertex labels joined with commas, e.g. `"s,a,t"`.
    pub fn describe(&self, graph: &Graph) -> String {
        let mut s = String::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(graph.label(*v));
        }
        s
    }
}

/// An edge density `ρ : E → ℝ`, indexed by canonical edge order.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeDensity(Vec<f64>);

impl EdgeDensity {
    /// Wraps per-edge values; every entry must be finite.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return parameter(format!("density entry {i} is not finite"));
        }
        Ok(EdgeDensity(values))
    }

    /// `ρ ≡ c` on `m` edges.
    pub fn constant(m: usize, c: f64) -> Self {
        EdgeDensity(vec![c; m])
    }

    /// `ρ ≡ 0` on `m` edges.
    pub fn zeros(m: usize) -> Self {
        Self::constant(m, 0.0)
    }

    /// Number of edges covered.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Whether the density covers no edges.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Per-edge values.
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// `ρ(e)`.
    pub fn get(&self, e: EdgeId) -> f64 {
        self.0[e]
    }

    /// `c ρ`.
    pub fn scaled(&self, c: f64) -> Self {
        EdgeDensity(self.0.iter().map(|v| v * c).collect())
    }

    /// Whether `ρ ≥ 0` entrywise.
    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|v| *v >= 0.0)
    }

    /// Unweighted `p`-norm distance `‖ρ − other‖_p` (max norm for `p = ∞`).
    pub fn distance(&self, other: &EdgeDensity, p: Exponent) -> Result<f64> {
        if self.len() != other.len() {
            return input("densities cover different edge sets");
        }
        let diff = self.0.iter().zip(&other.0).map(|(a, b)| a - b);
        Ok(match p.check()? {
            Exponent::Infinity => diff.fold(0.0, |m, d| f64::max(m, abs(d))),
            Exponent::Finite(p) => pow(diff.map(|d| abs_pow(d, p)).sum::<f64>(), 1.0 / p),
        })
    }

    pub(crate) fn from_vec_unchecked(values: Vec<f64>) -> Self {
        EdgeDensity(values)
    }
}

/// `ℓ_ρ(γ) = Σ_i ρ(e_i)`, repeated traversals counted.
pub fn rho_length(walk: &Walk, rho: &EdgeDensity) -> Result<f64> {
    let mut total = 0.0;
    for &e in walk.edges() {
        match rho.0.get(e) {
            Some(v) => total += v,
            None => return input(format!("edge id {e} outside a density over {} edges", rho.len())),
        }
    }
    Ok(total)
}

/// `E_p(ρ) = Σ_e σ(e)|ρ(e)|^p`, or `max_e |ρ(e)|` for `p = ∞`.
pub fn energy(rho: &EdgeDensity, p: Exponent, sigma: &[f64]) -> Result<f64> {
    let p = p.check()?;
    if rho.len() != sigma.len() {
        return input(format!(
            "density has {} entries, weights have {}",
            rho.len(),
            sigma.len()
        ));
    }
    Ok(match p {
        Exponent::Infinity => rho.0.iter().fold(0.0, |m, v| f64::max(m, abs(*v))),
        Exponent::Finite(p) => rho
            .0
            .iter()
            .zip(sigma)
            .map(|(r, s)| s * abs_pow(*r, p))
            .sum(),
    })
}

/// Which of the nested admissible sets `A* ⊂ A ⊂ A'` a density belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Admissibility {
    /// `ℓ_ρ(Γ) < 1`.
    NotAdmissible,
    /// In `A'` only: admissible but with a negative entry.
    RelaxedOnly,
    /// In `A` but not `A*`: nonnegative, some entry above one.
    Admissible,
    /// In `A*`: admissible with `0 ≤ ρ ≤ 1`.
    Restricted,
}

/// Classifies `ρ` given the family length `ℓ_ρ(Γ)`. Every comparison is
/// relaxed by the caller's `tol`.
pub fn admissibility_class(rho: &EdgeDensity, family_rho_length: f64, tol: f64) -> Admissibility {
    if !(family_rho_length >= 1.0 - tol) {
        Admissibility::NotAdmissible
    } else if rho.0.iter().any(|v| *v < -tol) {
        Admissibility::RelaxedOnly
    } else if rho.0.iter().any(|v| *v > 1.0 + tol) {
        Admissibility::Admissible
    } else {
        Admissibility::Restricted
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn parallel_paths(k: usize, l: usize) -> Graph {
        let mut labels = vec!["s".to_string(), "t".to_string()];
        let mut edges = Vec::new();
        for path in 0..k {
            let mut prev = 0;
            for hop in 0..l {
                let next = if hop + 1 == l {
                    1
                } else {
                    labels.push(format!("p{path}_{hop}"));
                    labels.len() - 1
                };
                edges.push((prev, next, 1.0));
                prev = next;
            }
        }
        Graph::new(false, labels, edges).unwrap()
    }

    #[test]
    fn rejects_bad_graphs() {
        let l = || vec!["a".to_string(), "b".to_string()];
        assert!(matches!(Graph::new(false, vec![], vec![]), Err(Error::Input(_))));
        assert!(matches!(Graph::new(false, l(), vec![(0, 1, 0.0)]), Err(Error::Parameter(_))));
        assert!(matches!(Graph::new(false, l(), vec![(0, 1, -1.0)]), Err(Error::Parameter(_))));
        assert!(matches!(Graph::new(false, l(), vec![(0, 0, 1.0)]), Err(Error::Input(_))));
        assert!(matches!(Graph::new(false, l(), vec![(0, 2, 1.0)]), Err(Error::Input(_))));
        assert!(matches!(
            Graph::new(false, l(), vec![(0, 1, 1.0), (1, 0, 1.0)]),
            Err(Error::Input(_))
        ));
        // opposite arcs are distinct in a digraph
        assert!(Graph::new(true, l(), vec![(0, 1, 1.0), (1, 0, 1.0)]).is_ok());
        assert!(Graph::new(false, vec!["a".into(), "a".into()], vec![]).is_err());
    }

    #[test]
    fn sigma_accessors() {
        let g = Graph::from_labeled(false, &["a", "b", "c"], &[("a", "b", 2.0), ("b", "c", 0.5)]).unwrap();
        assert_eq!(g.sigma_min(), 0.5);
        assert_eq!(g.sigma_total(), 2.5);
        assert_eq!(g.edge_key(1), "b,c");
        assert_eq!(g.find_edge(2, 1), Some(1));
    }

    #[test]
    fn walk_validation() {
        let g = Graph::from_labeled(true, &["a", "b", "c"], &[("a", "b", 1.0), ("b", "c", 1.0)]).unwrap();
        assert!(Walk::new(&g, 0, vec![0, 1]).is_ok());
        assert!(Walk::new(&g, 0, vec![]).is_err());
        // against orientation
        assert!(Walk::new(&g, 1, vec![0]).is_err());
        assert!(Walk::new(&g, 0, vec![1]).is_err());
        let u = Graph::from_labeled(false, &["a", "b", "c"], &[("a", "b", 1.0), ("b", "c", 1.0)]).unwrap();
        let w = Walk::new(&u, 2, vec![1, 0, 0]).unwrap();
        assert_eq!(w.vertices(), &[2, 1, 0, 1]);
        assert_eq!(w.describe(&u), "c,b,a,b");
        assert_eq!(Walk::from_vertices(&u, &[2, 1, 0, 1]).unwrap(), w);
        assert!(Walk::from_vertices(&u, &[0, 2]).is_err());
    }

    #[test]
    fn rho_length_examples() {
        let g = parallel_paths(3, 2);
        let w = Walk::from_vertices(&g, &[0, 2, 1]).unwrap();
        assert_eq!(rho_length(&w, &EdgeDensity::constant(6, 0.5)).unwrap(), 1.0);
        assert_eq!(rho_length(&w, &EdgeDensity::zeros(6)).unwrap(), 0.0);

        let u = Graph::from_labeled(false, &["a", "b", "c"], &[("a", "b", 1.0), ("b", "c", 1.0)]).unwrap();
        let back = Walk::new(&u, 0, vec![0, 1, 1]).unwrap();
        // e1 traversed twice, e2 once
        let w = Walk::new(&u, 1, vec![0, 0, 1]).unwrap();
        let rho = EdgeDensity::new(vec![0.2, 0.3]).unwrap();
        assert!((rho_length(&w, &rho).unwrap() - 0.7).abs() < 1e-15);
        assert!((rho_length(&back, &rho).unwrap() - 0.8).abs() < 1e-15);
        assert!(rho_length(&w, &EdgeDensity::zeros(1)).is_err());
    }

    #[test]
    fn energy_examples() {
        let g = parallel_paths(3, 2);
        let rho = EdgeDensity::constant(6, 0.5);
        assert_eq!(energy(&rho, Exponent::Finite(2.0), g.sigma()).unwrap(), 1.5);
        assert_eq!(energy(&rho, Exponent::Infinity, g.sigma()).unwrap(), 0.5);
        for p in [1.0, 1.5, 7.0] {
            assert_eq!(energy(&EdgeDensity::zeros(6), Exponent::Finite(p), g.sigma()).unwrap(), 0.0);
        }
        assert_eq!(energy(&EdgeDensity::zeros(6), Exponent::Infinity, g.sigma()).unwrap(), 0.0);
        assert!(matches!(
            energy(&rho, Exponent::Finite(0.5), g.sigma()),
            Err(Error::Parameter(_))
        ));
        assert!(energy(&rho, Exponent::Finite(2.0), &[1.0]).is_err());
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!("2.5".parse::<Exponent>().unwrap(), Exponent::Finite(2.5));
        assert!("0.9".parse::<Exponent>().is_err());
        assert!("nan".parse::<Exponent>().is_err());
        assert!("x".parse::<Exponent>().is_err());
        assert!(Exponent::Finite(3.0) < Exponent::Infinity);
        assert_eq!(alloc::format!("{}", Exponent::Infinity), "inf");
    }

    #[test]
    fn admissibility_examples() {
        assert_eq!(
            admissibility_class(&EdgeDensity::constant(6, 0.5), 1.0, 1e-12),
            Admissibility::Restricted
        );
        assert_eq!(
            admissibility_class(&EdgeDensity::zeros(6), 0.0, 1e-12),
            Admissibility::NotAdmissible
        );
        let big = EdgeDensity::new(vec![1.5]).unwrap();
        assert_eq!(admissibility_class(&big, 1.5, 1e-12), Admissibility::Admissible);
        let neg = EdgeDensity::new(vec![1.0, -0.5]).unwrap();
        assert_eq!(admissibility_class(&neg, 1.0, 1e-12), Admissibility::RelaxedOnly);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn energy_is_homogeneous(vals in proptest::collection::vec(-3.0f64..3.0, 1..12),
                                     c in 0.0f64..4.0, p in 1.0f64..6.0) {
                let sigma: Vec<f64> = (0..vals.len()).map(|i| 0.5 + i as f64).collect();
                let rho = EdgeDensity::new(vals).unwrap();
                let e1 = energy(&rho.scaled(c), Exponent::Finite(p), &sigma).unwrap();
                let e0 = energy(&rho, Exponent::Finite(p), &sigma).unwrap();
                let want = pow(c, p) * e0;
                prop_assert!(abs(e1 - want) <= 1e-10 * (1.0 + want));
            }

            #[test]
            fn energy_norm_sandwich(vals in proptest::collection::vec(-3.0f64..3.0, 1..12),
                                    p in 1.0f64..40.0) {
                prop_assume!(vals.iter().any(|v| *v != 0.0));
                let sigma: Vec<f64> = (0..vals.len()).map(|i| 0.25 + (i % 3) as f64).collect();
                let rho = EdgeDensity::new(vals).unwrap();
                let smin = sigma.iter().copied().fold(f64::INFINITY, f64::min);
                let stot: f64 = sigma.iter().sum();
                let einf = energy(&rho, Exponent::Infinity, &sigma).unwrap();
                let ep = pow(energy(&rho, Exponent::Finite(p), &sigma).unwrap(), 1.0 / p);
                prop_assert!(pow(smin, 1.0 / p) * einf <= ep * (1.0 + 1e-12));
                prop_assert!(ep <= pow(stot, 1.0 / p) * einf * (1.0 + 1e-12));
            }
        }
    }
}
