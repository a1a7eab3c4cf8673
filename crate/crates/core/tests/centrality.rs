mod common;

use common::{max_abs_diff, pagerank_direct, GeodesicOracle};
use proptest::prelude::*;
use toposcope_core::centrality::{
    betweenness_centrality, closeness_centrality, compute_all, degree_centrality, eccentricity_centrality,
    eigen_residual, eigenvector_centrality, harmonic_centrality, pagerank, pagerank_residual, IndexKind,
};
use toposcope_core::graph::{bfs_row, dijkstra_row, EdgeLength, Topology};
use toposcope_core::rankstats::rank_scores;
use toposcope_core::synth::{preferential_attachment, random_connected, with_random_capacities};

fn small_graph(seed: u64) -> Topology {
    let n = 3 + (seed % 6) as usize;
    let p = [0.0, 0.2, 0.4, 0.7][(seed / 6 % 4) as usize];
    random_connected(n, p, seed).unwrap()
}

fn check_paths(g: &Topology) {
    let oracle = GeodesicOracle::new(g);
    let all = compute_all(g, &[IndexKind::Bc, IndexKind::Cc, IndexKind::Hc, IndexKind::Ecc], 0.85).unwrap();
    let cases = [
        (IndexKind::Bc, oracle.betweenness()),
        (IndexKind::Cc, oracle.closeness()),
        (IndexKind::Hc, oracle.harmonic()),
        (IndexKind::Ecc, oracle.eccentricity()),
    ];
    for (kind, expected) in cases {
        let got = &all[&kind].scores;
        // absolute on unit-scale scores, relative once capacities push CC/HC to ~1e9
        let scale = expected.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        assert!(max_abs_diff(got, &expected) < 1e-9 * scale, "{kind}: {got:?} vs {expected:?} on {:?}", g.edges().collect::<Vec<_>>());
    }
}

#[test]
fn path_indices_match_enumeration_on_binary_graphs() {
    for seed in 0..200 {
        check_paths(&small_graph(seed));
    }
}

#[test]
fn path_indices_match_enumeration_on_capacitated_graphs() {
    for seed in 0..150 {
        let g = with_random_capacities(&small_graph(seed), 3, 1.0, seed + 1000).unwrap();
        check_paths(&g);
        // Gbps-scale links must give the same tie structure
        check_paths(&g.scale_capacities(1e9));
    }
}

#[test]
fn single_index_entry_points_agree_with_batch() {
    for seed in 0..20 {
        let g = small_graph(seed);
        let all = compute_all(&g, &IndexKind::ALL, 0.85).unwrap();
        assert_eq!(all[&IndexKind::Bc], betweenness_centrality(&g).unwrap());
        assert_eq!(all[&IndexKind::Cc], closeness_centrality(&g).unwrap());
        assert_eq!(all[&IndexKind::Hc], harmonic_centrality(&g).unwrap());
        assert_eq!(all[&IndexKind::Ecc], eccentricity_centrality(&g).unwrap());
        assert_eq!(all[&IndexKind::Dc], degree_centrality(&g).unwrap());
    }
}

#[test]
fn sigma_matches_enumeration() {
    for seed in 0..100 {
        let g = small_graph(seed);
        let oracle = GeodesicOracle::new(&g);
        let wg = with_random_capacities(&g, 2, 1.0, seed).unwrap();
        let woracle = GeodesicOracle::new(&wg);
        for s in 0..g.node_count() {
            let row = bfs_row(&g, s);
            let wrow = dijkstra_row(&wg, s, EdgeLength::InverseCapacity);
            for t in 0..g.node_count() {
                if t == s {
                    continue;
                }
                assert_eq!(row.dist[t], oracle.dist[s][t]);
                assert_eq!(row.sigma[t], oracle.sigma[s][t] as f64);
                assert!((wrow.dist[t] - woracle.dist[s][t]).abs() < 1e-12);
                assert_eq!(wrow.sigma[t], woracle.sigma[s][t] as f64, "seed {seed} {s}->{t}");
            }
        }
    }
}

#[test]
fn star_eigenvalue_is_sqrt3() {
    let star = Topology::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
    let ec = eigenvector_centrality(&star).unwrap();
    assert!((ec.eigenvalue.unwrap() - 3f64.sqrt()).abs() < 1e-9);
    assert!((ec.scores[0] / ec.scores[1] - 3f64.sqrt()).abs() < 1e-9);
}

#[test]
fn pagerank_matches_direct_solve() {
    for seed in 0..30 {
        let g = random_connected(5 + (seed % 40) as usize, 0.1, seed).unwrap();
        for d in [0.0, 0.3, 0.85, 0.95] {
            let pg = pagerank(&g, d).unwrap();
            let exact = pagerank_direct(&g, d);
            assert!(max_abs_diff(&pg.scores, &exact) < 1e-10, "seed {seed} d {d}");
        }
    }
}

#[test]
fn spectral_residuals_on_larger_graphs() {
    for seed in 0..5 {
        let g = preferential_attachment(1500, 2, seed).unwrap();
        let ec = eigenvector_centrality(&g).unwrap();
        assert!(eigen_residual(&g, &ec.scores, ec.eigenvalue.unwrap()) < 1e-8);
        let pg = pagerank(&g, 0.85).unwrap();
        assert!(pagerank_residual(&g, &pg.scores, 0.85) < 1e-8);
        assert!((pg.scores.iter().sum::<f64>() - 1.0).abs() < 1e-8);
    }
}

#[test]
fn vertex_transitive_graphs_are_flat() {
    let cycle: Vec<_> = (0..7).map(|i| (i, (i + 1) % 7)).collect();
    let mut prism: Vec<_> = (0..4).map(|i| (i, (i + 1) % 4)).collect();
    prism.extend((0..4).map(|i| (4 + i, 4 + (i + 1) % 4)));
    prism.extend((0..4).map(|i| (i, i + 4)));
    for (n, edges) in [(7, cycle), (8, prism)] {
        let g = Topology::from_edges(n, &edges).unwrap();
        for (kind, v) in compute_all(&g, &IndexKind::ALL, 0.85).unwrap() {
            let first = v.scores[0];
            assert!(v.scores.iter().all(|x| (x - first).abs() < 1e-9), "{kind}: {:?}", v.scores);
        }
    }
}

fn graph_strategy() -> impl Strategy<Value = Topology> {
    (3usize..14, 0.0f64..0.6, any::<u64>()).prop_map(|(n, p, seed)| random_connected(n, p, seed).unwrap())
}

fn capacitated_strategy() -> impl Strategy<Value = Topology> {
    (graph_strategy(), 1u32..6, any::<u64>())
        .prop_map(|(g, levels, seed)| with_random_capacities(&g, levels, 1.0, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn harmonic_dominates_closeness(g in prop_oneof![graph_strategy(), capacitated_strategy()]) {
        let hc = harmonic_centrality(&g).unwrap();
        let cc = closeness_centrality(&g).unwrap();
        for (h, c) in hc.scores.iter().zip(&cc.scores) {
            prop_assert!(h + 1e-12 >= *c);
        }
    }

    #[test]
    fn score_ranges(g in graph_strategy()) {
        let all = compute_all(&g, &IndexKind::ALL, 0.85).unwrap();
        for kind in [IndexKind::Dc, IndexKind::Bc] {
            prop_assert!(all[&kind].scores.iter().all(|&x| (0.0..=1.0 + 1e-12).contains(&x)));
        }
        for kind in [IndexKind::Cc, IndexKind::Hc, IndexKind::Ecc] {
            prop_assert!(all[&kind].scores.iter().all(|&x| x > 0.0 && x <= 1.0 + 1e-12));
        }
        let pg = &all[&IndexKind::Pg];
        prop_assert!(pg.scores.iter().all(|&x| x > 0.0 && x < 1.0));
        prop_assert!((pg.scores.iter().sum::<f64>() - 1.0).abs() < 1e-8);
        let ec = &all[&IndexKind::Ec];
        prop_assert!(ec.scores.iter().all(|&x| x >= 0.0));
        prop_assert!((ec.scores.iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).abs() < 1e-8);
        prop_assert!(eigen_residual(&g, &ec.scores, ec.eigenvalue.unwrap()) < 1e-8);
    }

    #[test]
    fn capacity_scaling_preserves_rankings(g in capacitated_strategy(), c in prop_oneof![Just(1e-3), Just(7.0), Just(1e9)]) {
        let kinds = [IndexKind::Bc, IndexKind::Cc, IndexKind::Dc, IndexKind::Ec, IndexKind::Hc, IndexKind::Ecc];
        let a = compute_all(&g, &kinds, 0.85).unwrap();
        let b = compute_all(&g.scale_capacities(c), &kinds, 0.85).unwrap();
        for kind in kinds {
            let ra = rank_scores(&a[&kind].scores);
            let rb = rank_scores(&b[&kind].scores);
            prop_assert_eq!(ra.frac_rank, rb.frac_rank, "{}", kind);
        }
    }
}
