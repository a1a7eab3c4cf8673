mod common;

use common::min_cut;
use proptest::prelude::*;
use toposcope_core::flow::{aggregate_max_flow, aggregate_max_flow_pairwise, max_flow};
use toposcope_core::graph::Topology;
use toposcope_core::synth::{random_connected, with_random_capacities};

fn small_capacitated(seed: u64) -> Topology {
    let n = 2 + (seed % 6) as usize;
    let g = random_connected(n, 0.35, seed).unwrap();
    with_random_capacities(&g, 9, 0.5, seed ^ 0xabc).unwrap()
}

#[test]
fn edmonds_karp_equals_min_cut() {
    for seed in 0..100 {
        let g = small_capacitated(seed);
        let n = g.node_count();
        for s in 0..n {
            for t in 0..n {
                if s != t {
                    let f = max_flow(&g, s, t, &[]).unwrap();
                    assert!((f - min_cut(&g, s, t)).abs() < 1e-9, "seed {seed} {s}->{t}");
                }
            }
        }
    }
}

#[test]
fn removal_matches_induced_subgraph() {
    for seed in 0..40 {
        let g = small_capacitated(seed + 500);
        let n = g.node_count();
        if n < 4 {
            continue;
        }
        let removed = [seed as usize % n];
        let keep: Vec<bool> = (0..n).map(|u| u != removed[0]).collect();
        let (sub, ids) = g.induced_subgraph(&keep);
        for a in 0..sub.node_count() {
            for b in (a + 1)..sub.node_count() {
                let direct = max_flow(&g, ids[a], ids[b], &removed).unwrap();
                assert!((direct - min_cut(&sub, a, b)).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn binary_graphs_use_unit_capacities() {
    // two edge-disjoint paths between opposite corners of a 4-cycle
    let g = Topology::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    assert_eq!(max_flow(&g, 0, 2, &[]).unwrap(), 2.0);
    assert_eq!(aggregate_max_flow(&g, &[]).unwrap(), 12.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn flow_tree_aggregate_equals_pairwise(n in 2usize..24, p in 0.0f64..0.3, seed in any::<u64>(), drop in 0usize..3) {
        let g = with_random_capacities(&random_connected(n, p, seed).unwrap(), 7, 1e6, seed).unwrap();
        let removed: Vec<usize> = (0..drop.min(n - 2)).map(|i| (i * 7 + seed as usize) % n).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let tree = aggregate_max_flow(&g, &removed).unwrap();
        let pairwise = aggregate_max_flow_pairwise(&g, &removed).unwrap();
        prop_assert!((tree - pairwise).abs() <= 1e-9 * pairwise.max(1.0), "{} vs {}", tree, pairwise);
    }

    #[test]
    fn power_of_two_scaling_is_exact(seed in any::<u64>(), exp in -20i32..40) {
        let g = small_capacitated(seed);
        let c = 2f64.powi(exp);
        let scaled = g.scale_capacities(c);
        for t in 1..g.node_count() {
            prop_assert_eq!(max_flow(&scaled, 0, t, &[]).unwrap(), c * max_flow(&g, 0, t, &[]).unwrap());
        }
        prop_assert_eq!(aggregate_max_flow(&scaled, &[]).unwrap(), c * aggregate_max_flow(&g, &[]).unwrap());
    }

    #[test]
    fn arbitrary_scaling_is_proportional(seed in any::<u64>(), c in 1e-3f64..1e4) {
        let g = small_capacitated(seed);
        let scaled = g.scale_capacities(c);
        for t in 1..g.node_count() {
            let a = max_flow(&scaled, 0, t, &[]).unwrap();
            let b = c * max_flow(&g, 0, t, &[]).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * b.abs());
        }
    }
}
