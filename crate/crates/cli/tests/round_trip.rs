use pmodulus_cli::{parse_graph, write_graph, Format};
use pmodulus_core::graph::Graph;
use proptest::prelude::*;

fn arb_graph() -> impl Strategy<Value = Graph> {
    (2usize..8, any::<bool>())
        .prop_flat_map(|(n, directed)| {
            let pairs = proptest::collection::vec((0..n, 0..n, prop_oneof![Just(1.0), 1e-3f64..1e3, any::<f64>()]), 0..20);
            (Just(n), Just(directed), pairs, proptest::collection::vec(any::<u32>(), n))
        })
        .prop_map(|(n, directed, pairs, tags)| {
            let labels: Vec<String> = (0..n).map(|i| format!("v{}_{}", tags[i] % 1000, i)).collect();
            let mut seen = std::collections::BTreeSet::new();
            let mut edges = Vec::new();
            for (x, y, w) in pairs {
                let w = if w.is_finite() && w > 0.0 { w } else { w.abs().clamp(1e-300, 1e300) };
                let key = if directed || x < y { (x, y) } else { (y, x) };
                if x != y && w.is_finite() && seen.insert(key) {
                    edges.push((x, y, w));
                }
            }
            Graph::new(directed, labels, edges).unwrap()
        })
}

proptest! {
    #[test]
    fn edge_list_round_trip(g in arb_graph()) {
        let text = write_graph(&g, Format::EdgeList).unwrap();
        let back = parse_graph(text.as_bytes(), Format::EdgeList).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(write_graph(&back, Format::EdgeList).unwrap(), text);
    }

    #[test]
    fn json_round_trip(g in arb_graph()) {
        let text = write_graph(&g, Format::Json).unwrap();
        let back = parse_graph(text.as_bytes(), Format::Json).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(write_graph(&back, Format::Json).unwrap(), text);
    }

    #[test]
    fn formats_agree(g in arb_graph()) {
        let via_json = parse_graph(write_graph(&g, Format::Json).unwrap().as_bytes(), Format::Json).unwrap();
        let via_list = parse_graph(write_graph(&via_json, Format::EdgeList).unwrap().as_bytes(), Format::EdgeList).unwrap();
        prop_assert_eq!(via_list, g);
    }
}

#[test]
fn spec_style_json_document() {
    let g = parse_graph(
        br#"{"directed": false, "vertices": ["s", "t"], "edges": [{"tail": "s", "head": "t", "sigma": 5}]}"#,
        Format::Json,
    )
    .unwrap();
    assert_eq!(g.vertex_count(), 2);
    assert_eq!(g.edge_count(), 1);
    assert_eq!(g.sigma(), &[5.0]);
}

#[test]
fn parallel_paths_edge_list() {
    let g = parse_graph(b"undirected\ns a\na t\ns b\nb t\ns c\nc t", Format::EdgeList).unwrap();
    assert_eq!(g.labels(), &["s", "a", "t", "b", "c"]);
    assert_eq!(g.edge_count(), 6);
    assert!(g.sigma().iter().all(|w| *w == 1.0));
}

#[test]
fn zero_weight_names_its_line() {
    let err = parse_graph(b"undirected\ns a\ns t 0\n", Format::EdgeList).unwrap_err();
    assert_eq!(err.line, Some(3));
    assert!(err.to_string().contains("nonpositive weight"));
}
