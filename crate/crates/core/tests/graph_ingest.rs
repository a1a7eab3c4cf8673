use proptest::prelude::*;
use toposcope_core::graph::{bfs_row, connected_components, dijkstra_row, extract_gcc, EdgeLength, Topology};
use toposcope_core::ingest::{parse_edgelist, parse_graphml, write_edgelist, Format, IngestConfig, RangePolicy};
use toposcope_core::synth::{random_connected, with_random_capacities};

fn arbitrary_graph() -> impl Strategy<Value = Topology> {
    (1usize..20, proptest::collection::vec((0usize..20, 0usize..20), 0..40)).prop_map(|(n, raw)| {
        let edges: Vec<_> = raw.into_iter().map(|(u, v)| (u % n, v % n)).collect();
        Topology::from_edges(n, &edges).unwrap()
    })
}

/// Canonical edge set keyed by labels, for isomorphism under the label map.
fn labelled_edges(g: &Topology) -> Vec<(String, String, u64)> {
    let mut out: Vec<_> = g
        .edges()
        .map(|(u, v, w)| {
            let (a, b) = (g.label(u).to_owned(), g.label(v).to_owned());
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            (a, b, w.to_bits())
        })
        .collect();
    out.sort();
    out
}

const ZOO_FIXTURE: &str = include_str!("fixtures/zoo_minmax.graphml");

#[test]
fn range_policies_give_three_topologies() {
    let mut seen = Vec::new();
    for policy in [RangePolicy::Min, RangePolicy::Max, RangePolicy::Mean] {
        let cfg = IngestConfig { range_policy: policy, ..IngestConfig::with_format(Format::Graphml) };
        let (g, report) = parse_graphml(ZOO_FIXTURE.as_bytes(), &cfg).unwrap();
        assert_eq!(report.capacity_defaults_applied, 0);
        assert_eq!(g.capacity(1, 2), Some(155e6));
        assert_eq!(g.capacity(0, 2), Some(2.5e9));
        assert_eq!(g.capacity(2, 4), Some(34e6));
        seen.push((g.capacity(0, 1).unwrap(), g.capacity(1, 3).unwrap()));
    }
    assert_eq!(seen, vec![(1e9, 100e6), (1e10, 1000e6), (5.5e9, 550e6)]);
}

#[test]
fn edgelist_round_trip_on_capacitated_graphs() {
    for seed in 0..50 {
        let g = with_random_capacities(&random_connected(30, 0.1, seed).unwrap(), 1000, 1.37e6, seed).unwrap();
        let text = write_edgelist(&g);
        let (back, _) = parse_edgelist(text.as_bytes(), &IngestConfig::default()).unwrap();
        assert_eq!(labelled_edges(&g), labelled_edges(&back));
        assert!(back.is_capacitated());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn components_partition_nodes(g in arbitrary_graph()) {
        let comps = connected_components(&g);
        prop_assert_eq!(comps.component_sizes.iter().sum::<usize>(), g.node_count());
        prop_assert_eq!(comps.gcc_size(), *comps.component_sizes.iter().max().unwrap());
        for (u, v, _) in g.edges() {
            prop_assert_eq!(comps.component_id[u], comps.component_id[v]);
        }
    }

    #[test]
    fn gcc_is_connected_and_idempotent(g in arbitrary_graph()) {
        let gcc = extract_gcc(&g).unwrap();
        prop_assert!(gcc.is_connected());
        prop_assert_eq!(gcc.node_count(), connected_components(&g).gcc_size());
        let again = extract_gcc(&gcc).unwrap();
        prop_assert_eq!(labelled_edges(&gcc), labelled_edges(&again));
        prop_assert_eq!(gcc.labels(), again.labels());
    }

    #[test]
    fn distances_are_symmetric_metrics(n in 2usize..12, p in 0.0f64..0.5, seed in any::<u64>()) {
        let g = with_random_capacities(&random_connected(n, p, seed).unwrap(), 5, 1.0, seed).unwrap();
        for length in [EdgeLength::Hops, EdgeLength::InverseCapacity] {
            let rows: Vec<_> = (0..n)
                .map(|s| if length == EdgeLength::Hops { bfs_row(&g, s) } else { dijkstra_row(&g, s, length) })
                .collect();
            for i in 0..n {
                for j in 0..n {
                    prop_assert!((rows[i].dist[j] - rows[j].dist[i]).abs() <= 1e-12);
                    prop_assert_eq!(rows[i].sigma[j], rows[j].sigma[i]);
                    for k in 0..n {
                        prop_assert!(rows[i].dist[k] <= rows[i].dist[j] + rows[j].dist[k] + 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn edgelist_round_trip_binary(g in arbitrary_graph()) {
        prop_assume!(g.edge_count() > 0);
        let cfg = IngestConfig { extract_gcc: false, ..IngestConfig::default() };
        let (back, report) = parse_edgelist(write_edgelist(&g).as_bytes(), &cfg).unwrap();
        prop_assert_eq!(report.edges_read, g.edge_count());
        prop_assert_eq!(labelled_edges(&g), labelled_edges(&back));
        // label map is a bijection onto 0..N
        let mut labels = back.labels().to_vec();
        labels.sort();
        labels.dedup();
        prop_assert_eq!(labels.len(), back.node_count());
    }
}
