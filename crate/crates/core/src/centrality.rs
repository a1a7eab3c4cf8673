//! The seven node-centrality indices and their graph-level aggregates.
//!
//! On capacitated topologies the indices switch to their weighted forms:
//! degree becomes the sum of incident capacities, eigenvector centrality uses
//! the capacity-weighted adjacency matrix, and every distance-based index
//! measures geodesics with edge length `1 / capacity`. PageRank is defined on
//! binary topologies only.
//!
//! Betweenness, closeness, harmonic and eccentricity centrality share one
//! single-source sweep per node. Sweeps run in parallel in fixed-size chunks
//! and are folded into the outputs in ascending source order, so results are
//! bit-identical regardless of the thread count.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeLength, NodeId, SweepWorkspace, Topology};

pub const DEFAULT_DAMPING: f64 = 0.85;

const EC_TOLERANCE: f64 = 1e-10;
const PG_TOLERANCE: f64 = 1e-12;
const MAX_ITERATIONS: usize = 100_000;
const SWEEP_CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum IndexKind {
    Bc,
    Cc,
    Dc,
    Ec,
    Hc,
    Ecc,
    Pg,
}

impl IndexKind {
    /// All seven indices, in the column order used by the report tables.
    pub const ALL: [IndexKind; 7] = [
        IndexKind::Bc,
        IndexKind::Cc,
        IndexKind::Dc,
        IndexKind::Ec,
        IndexKind::Hc,
        IndexKind::Ecc,
        IndexKind::Pg,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IndexKind::Bc => "BC",
            IndexKind::Cc => "CC",
            IndexKind::Dc => "DC",
            IndexKind::Ec => "EC",
            IndexKind::Hc => "HC",
            IndexKind::Ecc => "ECC",
            IndexKind::Pg => "PG",
        }
    }

    /// Whether the index can be computed on `g` (PageRank needs a binary graph).
    pub fn valid_for(self, g: &Topology) -> bool {
        !(self == IndexKind::Pg && g.is_capacitated())
    }

    /// Indices computable on `g`, in table order.
    pub fn all_valid_for(g: &Topology) -> Vec<IndexKind> {
        Self::ALL.iter().copied().filter(|k| k.valid_for(g)).collect()
    }

    fn needs_paths(self) -> bool {
        matches!(self, IndexKind::Bc | IndexKind::Cc | IndexKind::Hc | IndexKind::Ecc)
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IndexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let k = match s.trim().to_ascii_lowercase().as_str() {
            "bc" | "betweenness" => IndexKind::Bc,
            "cc" | "closeness" => IndexKind::Cc,
            "dc" | "degree" => IndexKind::Dc,
            "ec" | "eigenvector" => IndexKind::Ec,
            "hc" | "harmonic" => IndexKind::Hc,
            "ecc" | "eccentricity" => IndexKind::Ecc,
            "pg" | "pagerank" => IndexKind::Pg,
            other => return Err(Error::InvalidArgument(format!("unknown index {other:?}"))),
        };
        Ok(k)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityVector {
    pub kind: IndexKind,
    pub scores: Vec<f64>,
    /// PageRank damping factor.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub damping: Option<f64>,
    /// Dominant eigenvalue estimate for eigenvector centrality.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvalue: Option<f64>,
}

impl CentralityVector {
    fn plain(kind: IndexKind, scores: Vec<f64>) -> Self {
        Self { kind, scores, damping: None, eigenvalue: None }
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

fn require_nodes(g: &Topology, min: usize, kind: IndexKind) -> Result<()> {
    if g.node_count() < min {
        return Err(Error::Degenerate(format!(
            "{kind} needs at least {min} nodes, got {}",
            g.node_count()
        )));
    }
    Ok(())
}

pub fn degree_centrality(g: &Topology) -> Result<CentralityVector> {
    require_nodes(g, 2, IndexKind::Dc)?;
    let denom = (g.node_count() - 1) as f64;
    let scores = (0..g.node_count()).map(|u| g.strength(u) / denom).collect();
    Ok(CentralityVector::plain(IndexKind::Dc, scores))
}

/// Per-source aggregates gathered by the shared shortest-path pass.
#[derive(Debug, Clone)]
struct PathStats {
    /// Brandes dependencies summed over ordered sources (each unordered pair
    /// counted twice).
    dependency: Vec<f64>,
    dist_sum: Vec<f64>,
    harmonic_sum: Vec<f64>,
    max_dist: Vec<f64>,
    reached: Vec<usize>,
}

struct SourceResult {
    delta: Option<Vec<f64>>,
    dist_sum: f64,
    harmonic_sum: f64,
    max_dist: f64,
    reached: usize,
}

fn sweep_source(
    g: &Topology,
    ws: &mut SweepWorkspace,
    source: NodeId,
    length: EdgeLength,
    with_dependency: bool,
) -> SourceResult {
    ws.run(g, source, length);
    let mut dist_sum = 0.0;
    let mut harmonic_sum = 0.0;
    let mut max_dist: f64 = 0.0;
    // `order` is sorted by distance; summing in ascending node id keeps the
    // row aggregates independent of traversal order.
    let mut reached_nodes = ws.order.clone();
    reached_nodes.sort_unstable();
    for &v in &reached_nodes {
        if v == source {
            continue;
        }
        let d = ws.dist[v];
        dist_sum += d;
        harmonic_sum += 1.0 / d;
        max_dist = max_dist.max(d);
    }
    let delta = with_dependency.then(|| {
        let mut delta = vec![0.0; g.node_count()];
        for &w in ws.order.iter().rev() {
            let coeff = (1.0 + delta[w]) / ws.sigma[w];
            for &v in &ws.preds[w] {
                delta[v] += ws.sigma[v] * coeff;
            }
        }
        delta[source] = 0.0;
        delta
    });
    SourceResult { delta, dist_sum, harmonic_sum, max_dist, reached: ws.order.len() }
}

fn path_stats(g: &Topology, with_dependency: bool) -> PathStats {
    let n = g.node_count();
    let length = EdgeLength::natural(g);
    let mut stats = PathStats {
        dependency: vec![0.0; n],
        dist_sum: vec![0.0; n],
        harmonic_sum: vec![0.0; n],
        max_dist: vec![0.0; n],
        reached: vec![0; n],
    };
    let sources: Vec<NodeId> = (0..n).collect();
    for chunk in sources.chunks(SWEEP_CHUNK) {
        let results: Vec<SourceResult> = chunk
            .par_iter()
            .map_init(
                || SweepWorkspace::new(n),
                |ws, &s| sweep_source(g, ws, s, length, with_dependency),
            )
            .collect();
        for (&s, r) in chunk.iter().zip(results) {
            stats.dist_sum[s] = r.dist_sum;
            stats.harmonic_sum[s] = r.harmonic_sum;
            stats.max_dist[s] = r.max_dist;
            stats.reached[s] = r.reached;
            if let Some(delta) = r.delta {
                for (acc, d) in stats.dependency.iter_mut().zip(delta) {
                    *acc += d;
                }
            }
        }
    }
    stats
}

fn betweenness_from(stats: &PathStats, n: usize) -> CentralityVector {
    // Ordered-source accumulation counts every pair twice, which cancels the
    // factor 2 in 2 / ((N-1)(N-2)).
    let norm = ((n - 1) * (n - 2)) as f64;
    CentralityVector::plain(IndexKind::Bc, stats.dependency.iter().map(|d| d / norm).collect())
}

fn closeness_from(stats: &PathStats, n: usize) -> Result<CentralityVector> {
    if stats.reached.iter().any(|&r| r != n) {
        return Err(Error::Disconnected(IndexKind::Cc));
    }
    let scores = stats.dist_sum.iter().map(|s| (n - 1) as f64 / s).collect();
    Ok(CentralityVector::plain(IndexKind::Cc, scores))
}

fn harmonic_from(stats: &PathStats, n: usize) -> CentralityVector {
    let denom = (n - 1) as f64;
    CentralityVector::plain(IndexKind::Hc, stats.harmonic_sum.iter().map(|h| h / denom).collect())
}

fn eccentricity_from(stats: &PathStats, n: usize) -> Result<CentralityVector> {
    if stats.reached.iter().any(|&r| r != n) {
        return Err(Error::Disconnected(IndexKind::Ecc));
    }
    let scores = stats.max_dist.iter().map(|m| 1.0 / m).collect();
    Ok(CentralityVector::plain(IndexKind::Ecc, scores))
}

/// Freeman betweenness via Brandes accumulation, normalized by
/// `2 / ((N-1)(N-2))`. Disconnected inputs are accepted; pairs in different
/// components simply contribute nothing.
pub fn betweenness_centrality(g: &Topology) -> Result<CentralityVector> {
    require_nodes(g, 3, IndexKind::Bc)?;
    Ok(betweenness_from(&path_stats(g, true), g.node_count()))
}

pub fn closeness_centrality(g: &Topology) -> Result<CentralityVector> {
    require_nodes(g, 2, IndexKind::Cc)?;
    closeness_from(&path_stats(g, false), g.node_count())
}

/// Harmonic centrality; unreachable nodes contribute zero.
pub fn harmonic_centrality(g: &Topology) -> Result<CentralityVector> {
    require_nodes(g, 2, IndexKind::Hc)?;
    Ok(harmonic_from(&path_stats(g, false), g.node_count()))
}

pub fn eccentricity_centrality(g: &Topology) -> Result<CentralityVector> {
    require_nodes(g, 2, IndexKind::Ecc)?;
    eccentricity_from(&path_stats(g, false), g.node_count())
}

fn multiply_adjacency(g: &Topology, x: &[f64], out: &mut [f64]) {
    for (u, o) in out.iter_mut().enumerate() {
        *o = g.neighbors(u).iter().map(|nb| nb.weight * x[nb.id]).sum();
    }
}

fn normalize_l2(x: &mut [f64]) -> f64 {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        for v in x.iter_mut() {
            *v /= norm;
        }
    }
    norm
}

/// Dominant eigenvector of the (capacity-weighted) adjacency matrix by power
/// iteration, unit Euclidean norm, with the eigenvalue estimate attached.
///
/// Plain power iteration oscillates on bipartite graphs, where `-λ` is also
/// an eigenvalue. Once the iterate delta stops shrinking, every further step
/// replaces the new iterate with the normalized average of the last two,
/// which cancels the `-λ` component and leaves the dominant one untouched.
pub fn eigenvector_centrality(g: &Topology) -> Result<CentralityVector> {
    let n = g.node_count();
    require_nodes(g, 2, IndexKind::Ec)?;
    if g.edge_count() == 0 {
        return Err(Error::Degenerate("EC needs at least one edge".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected(IndexKind::Ec));
    }
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut y = vec![0.0; n];
    let mut averaging = false;
    let mut prev_delta = f64::INFINITY;
    let mut delta = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        multiply_adjacency(g, &x, &mut y);
        normalize_l2(&mut y);
        if averaging {
            for (yi, xi) in y.iter_mut().zip(&x) {
                *yi += xi;
            }
            normalize_l2(&mut y);
        }
        delta = y.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        std::mem::swap(&mut x, &mut y);
        if delta < EC_TOLERANCE {
            let lambda = rayleigh_quotient(g, &x);
            return Ok(CentralityVector {
                kind: IndexKind::Ec,
                scores: x,
                damping: None,
                eigenvalue: Some(lambda),
            });
        }
        if !averaging && delta >= 0.99 * prev_delta {
            averaging = true;
        }
        prev_delta = delta;
    }
    Err(Error::NonConvergence { iterations: MAX_ITERATIONS, residual: delta })
}

fn rayleigh_quotient(g: &Topology, x: &[f64]) -> f64 {
    let mut ax = vec![0.0; x.len()];
    multiply_adjacency(g, x, &mut ax);
    let num: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
    let den: f64 = x.iter().map(|a| a * a).sum();
    num / den
}

/// `‖A·x − λ·x‖∞` for an eigenvector estimate.
pub fn eigen_residual(g: &Topology, x: &[f64], lambda: f64) -> f64 {
    let mut ax = vec![0.0; x.len()];
    multiply_adjacency(g, x, &mut ax);
    ax.iter().zip(x).map(|(a, b)| (a - lambda * b).abs()).fold(0.0, f64::max)
}

/// PageRank on an undirected binary graph: each node links to all of its
/// neighbors, so `B_i` is the neighbor set and `L_v = deg(v)`.
///
/// Isolated nodes (which only appear on residual graphs during attacks) are
/// treated as dangling and spread their mass uniformly.
pub fn pagerank(g: &Topology, damping: f64) -> Result<CentralityVector> {
    if g.is_capacitated() {
        return Err(Error::WeightedPagerank);
    }
    if !(0.0..1.0).contains(&damping) {
        return Err(Error::InvalidDamping(damping));
    }
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyTopology);
    }
    let nf = n as f64;
    let base = (1.0 - damping) / nf;
    let mut c = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut share = vec![0.0; n];
    let mut delta = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let mut dangling = 0.0;
        for u in 0..n {
            let deg = g.degree(u);
            if deg == 0 {
                dangling += c[u];
                share[u] = 0.0;
            } else {
                share[u] = c[u] / deg as f64;
            }
        }
        let spread = base + damping * dangling / nf;
        for (u, out) in next.iter_mut().enumerate() {
            let inflow: f64 = g.neighbors(u).iter().map(|nb| share[nb.id]).sum();
            *out = spread + damping * inflow;
        }
        delta = next.iter().zip(&c).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut c, &mut next);
        if delta < PG_TOLERANCE {
            return Ok(CentralityVector {
                kind: IndexKind::Pg,
                scores: c,
                damping: Some(damping),
                eigenvalue: None,
            });
        }
    }
    Err(Error::NonConvergence { iterations: MAX_ITERATIONS, residual: delta })
}

/// Largest pointwise violation of the PageRank recurrence by `scores`.
pub fn pagerank_residual(g: &Topology, scores: &[f64], damping: f64) -> f64 {
    let n = g.node_count() as f64;
    (0..g.node_count())
        .map(|i| {
            let inflow: f64 =
                g.neighbors(i).iter().map(|nb| scores[nb.id] / g.degree(nb.id) as f64).sum();
            ((1.0 - damping) / n + damping * inflow - scores[i]).abs()
        })
        .fold(0.0, f64::max)
}

/// Computes a single index.
pub fn compute_index(g: &Topology, kind: IndexKind, damping: f64) -> Result<CentralityVector> {
    match kind {
        IndexKind::Dc => degree_centrality(g),
        IndexKind::Bc => betweenness_centrality(g),
        IndexKind::Cc => closeness_centrality(g),
        IndexKind::Hc => harmonic_centrality(g),
        IndexKind::Ecc => eccentricity_centrality(g),
        IndexKind::Ec => eigenvector_centrality(g),
        IndexKind::Pg => pagerank(g, damping),
    }
}

/// Computes every requested index, sharing one shortest-path pass between
/// BC, CC, HC and ECC.
pub fn compute_all(
    g: &Topology,
    kinds: &[IndexKind],
    damping: f64,
) -> Result<BTreeMap<IndexKind, CentralityVector>> {
    if kinds.contains(&IndexKind::Pg) && g.is_capacitated() {
        return Err(Error::WeightedPagerank);
    }
    let mut out = BTreeMap::new();
    if kinds.is_empty() {
        return Ok(out);
    }
    let n = g.node_count();
    let stats = if kinds.iter().any(|k| k.needs_paths()) {
        if kinds.contains(&IndexKind::Bc) {
            require_nodes(g, 3, IndexKind::Bc)?;
        }
        require_nodes(g, 2, IndexKind::Cc)?;
        Some(path_stats(g, kinds.contains(&IndexKind::Bc)))
    } else {
        None
    };
    for &kind in kinds {
        if out.contains_key(&kind) {
            continue;
        }
        let v = match (kind, &stats) {
            (IndexKind::Bc, Some(s)) => betweenness_from(s, n),
            (IndexKind::Cc, Some(s)) => closeness_from(s, n)?,
            (IndexKind::Hc, Some(s)) => harmonic_from(s, n),
            (IndexKind::Ecc, Some(s)) => eccentricity_from(s, n)?,
            _ => compute_index(g, kind, damping)?,
        };
        out.insert(kind, v);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphCentralitySummary {
    pub integration: f64,
    pub unipolarity: f64,
    pub centralization: f64,
}

pub fn graph_summary(c: &CentralityVector) -> GraphCentralitySummary {
    let integration: f64 = c.scores.iter().sum();
    let unipolarity = c.scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = c.scores.iter().copied().fold(f64::INFINITY, f64::min);
    let centralization = c.scores.iter().map(|s| s - min).sum();
    GraphCentralitySummary { integration, unipolarity, centralization }
}

/// Exact degree histogram (hop degree, ignoring capacities).
pub fn degree_distribution(g: &Topology) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for u in 0..g.node_count() {
        *hist.entry(g.degree(u)).or_insert(0) += 1;
    }
    hist
}
