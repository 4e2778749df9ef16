//! Seeded graph generators shared by the integration tests.

#![allow(dead_code)]

use pmodulus_core::graph::Graph;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `k` internally disjoint `s`–`t` paths of `l` unit edges each.
pub fn parallel_paths(k: usize, l: usize) -> Graph {
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

/// Complete graph on four unit-weight vertices.
pub fn k4() -> Graph {
    let mut edges = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            edges.push((i, j, 1.0));
        }
    }
    Graph::new(false, (0..4).map(|i| format!("v{i}")).collect(), edges).unwrap()
}

/// Random spanning tree plus independent extra edges.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, extra: f64, weights: Option<(f64, f64)>) -> Graph {
    random_graph(rng, n, n, extra, weights)
}

/// Each tree vertex attaches to one of the `reach` vertices just before it,
/// so small `reach` gives long hop distances.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, reach: usize, extra: f64, weights: Option<(f64, f64)>) -> Graph {
    let mut pairs = Vec::new();
    for v in 1..n {
        pairs.push((rng.gen_range(v.saturating_sub(reach)..v), v));
    }
    for a in 0..n {
        for b in a + 1..n {
            if !pairs.contains(&(a, b)) && rng.gen_bool(extra) {
                pairs.push((a, b));
            }
        }
    }
    let edges = pairs
        .into_iter()
        .map(|(a, b)| {
            let s = weights.map_or(1.0, |(lo, hi)| rng.gen_range(lo..hi));
            (a, b, s)
        })
        .collect();
    Graph::new(false, (0..n).map(|i| format!("v{i}")).collect(), edges).unwrap()
}

/// Two distinct vertices.
pub fn endpoints(rng: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    let s = rng.gen_range(0..n);
    let mut t = rng.gen_range(0..n - 1);
    if t >= s {
        t += 1;
    }
    (s, t)
}
