//! Seeded synthetic topologies for tests, benches and sweeps.
//!
//! All generators are deterministic in their seed (ChaCha8) and produce
//! connected graphs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{NodeId, Topology};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Barabási–Albert preferential attachment: a clique on `m + 1` seed nodes,
/// then every new node links to `m` distinct existing nodes drawn with
/// probability proportional to degree.
pub fn preferential_attachment(n: usize, m: usize, seed: u64) -> Result<Topology> {
    if m == 0 || n < m + 1 {
        return Err(Error::InvalidArgument(format!("preferential attachment needs m >= 1 and n > m (n={n}, m={m})")));
    }
    let mut rng = rng(seed);
    let mut edges = Vec::with_capacity(n * m);
    // each endpoint occurrence is one ticket, so sampling a ticket is degree-proportional
    let mut tickets: Vec<NodeId> = Vec::with_capacity(2 * n * m);
    for u in 0..=m {
        for v in (u + 1)..=m {
            edges.push((u, v));
            tickets.push(u);
            tickets.push(v);
        }
    }
    if m == 1 {
        // a lone seed node has no tickets yet
        tickets.push(0);
    }
    let mut chosen = Vec::with_capacity(m);
    for u in (m + 1)..n {
        chosen.clear();
        while chosen.len() < m {
            let v = tickets[rng.gen_range(0..tickets.len())];
            if !chosen.contains(&v) {
                chosen.push(v);
            }
        }
        for &v in &chosen {
            edges.push((u, v));
            tickets.push(u);
            tickets.push(v);
        }
    }
    Topology::from_edges(n, &edges)
}

/// A uniformly random labelled recursive tree with each remaining pair added
/// independently with probability `extra`. Node ids are shuffled so the tree
/// root is not always 0.
pub fn random_connected(n: usize, extra: f64, seed: u64) -> Result<Topology> {
    if n == 0 {
        return Err(Error::EmptyTopology);
    }
    let mut rng = rng(seed);
    let mut perm: Vec<NodeId> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push((perm[i], perm[j]));
    }
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(extra.clamp(0.0, 1.0)) {
                edges.push((u, v));
            }
        }
    }
    Topology::from_edges(n, &edges)
}

/// Copies the structure of `g` with capacities drawn uniformly from
/// `{1, ..., levels}` times `unit`. Small integer levels make min-cut ties
/// and exact comparisons likely, which is what the flow tests want.
pub fn with_random_capacities(g: &Topology, levels: u32, unit: f64, seed: u64) -> Result<Topology> {
    let mut rng = rng(seed);
    let edges: Vec<(NodeId, NodeId, f64)> = g
        .edges()
        .map(|(u, v, _)| (u, v, f64::from(rng.gen_range(1..=levels.max(1))) * unit))
        .collect();
    Topology::from_capacitated_edges(g.node_count(), &edges)
}

/// Preferential-attachment structure with capacities spread over three
/// orders of magnitude, roughly like a mix of access and core links.
pub fn scale_free_capacitated(n: usize, m: usize, seed: u64) -> Result<Topology> {
    let g = preferential_attachment(n, m, seed)?;
    let mut rng = rng(seed ^ 0x9e37_79b9_7f4a_7c15);
    let tiers = [1e8, 1e9, 1e10];
    let edges: Vec<(NodeId, NodeId, f64)> = g
        .edges()
        .map(|(u, v, _)| (u, v, tiers[rng.gen_range(0..tiers.len())] * f64::from(rng.gen_range(1..=4u32))))
        .collect();
    Topology::from_capacitated_edges(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pa_is_connected_with_expected_edges() {
        let g = preferential_attachment(300, 2, 7).unwrap();
        assert_eq!(g.node_count(), 300);
        assert!(g.is_connected());
        assert_eq!(g.edge_count(), 3 + 2 * (300 - 3));
        let g1 = preferential_attachment(50, 1, 1).unwrap();
        assert_eq!(g1.edge_count(), 49);
        assert!(g1.is_connected());
    }

    #[test]
    fn deterministic_in_seed() {
        let a = random_connected(8, 0.3, 42).unwrap();
        let b = random_connected(8, 0.3, 42).unwrap();
        assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
        assert!(a.is_connected());
    }

    #[test]
    fn capacities_are_positive() {
        let g = scale_free_capacitated(100, 2, 3).unwrap();
        assert!(g.is_capacitated());
        assert!(g.edges().all(|(_, _, c)| c >= 1e8));
    }
}
