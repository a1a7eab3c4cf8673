//! Rankings induced by centrality vectors and the agreement measures between
//! them: Spearman's ρ, Kendall's τ-b, Pearson's r and top-k overlap.
//!
//! Rank 1 is the most central node. Tied scores share the average of the
//! positions they occupy (fractional ranking); on tie-free data Spearman's ρ
//! reduces to the textbook `1 − 6Σd² / (N(N²−1))`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::centrality::{compute_index, CentralityVector, IndexKind};
use crate::error::{Error, Result};
use crate::graph::{NodeId, Topology};

/// Relative gap below which two scores count as tied. Scores of symmetric
/// nodes are often computed along different summation orders and differ
/// only in their last bits.
pub const SCORE_TIE_REL_TOL: f64 = 1e-12;

fn scores_tied(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= SCORE_TIE_REL_TOL * a.abs().max(b.abs())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ranking {
    /// Nodes by decreasing score; ties by ascending node id.
    pub order: Vec<NodeId>,
    /// Fractional rank of each node, in `[1, N]`.
    pub frac_rank: Vec<f64>,
}

impl Ranking {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// True when every node shares the same rank.
    pub fn is_constant(&self) -> bool {
        self.frac_rank.windows(2).all(|w| w[0] == w[1])
    }

    /// The `k` highest-ranked nodes.
    pub fn top(&self, k: usize) -> &[NodeId] {
        &self.order[..k.min(self.order.len())]
    }
}

pub fn rank(c: &CentralityVector) -> Ranking {
    rank_scores(&c.scores)
}

pub fn rank_scores(scores: &[f64]) -> Ranking {
    let n = scores.len();
    let mut order: Vec<NodeId> = (0..n).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut frac_rank = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let head = scores[order[start]];
        let mut end = start + 1;
        while end < n && scores_tied(head, scores[order[end]]) {
            end += 1;
        }
        order[start..end].sort_unstable();
        // positions start+1 ..= end, averaged
        let avg = (start + 1 + end) as f64 / 2.0;
        for &u in &order[start..end] {
            frac_rank[u] = avg;
        }
        start = end;
    }
    Ranking { order, frac_rank }
}

fn check_pair(n1: usize, n2: usize) -> Result<usize> {
    if n1 != n2 {
        return Err(Error::MismatchedNodes(n1, n2));
    }
    if n1 < 2 {
        return Err(Error::Degenerate(format!("rank correlation needs N >= 2, got {n1}")));
    }
    Ok(n1)
}

/// Spearman's ρ by the rank-difference formula on fractional ranks. Returns
/// 0 when either ranking is constant.
pub fn spearman(r1: &Ranking, r2: &Ranking) -> Result<f64> {
    let n = check_pair(r1.len(), r2.len())?;
    if r1.is_constant() || r2.is_constant() {
        return Ok(0.0);
    }
    let sum_sq: f64 = r1.frac_rank.iter().zip(&r2.frac_rank).map(|(a, b)| (a - b) * (a - b)).sum();
    let nf = n as f64;
    Ok(1.0 - 6.0 * sum_sq / (nf * (nf * nf - 1.0)))
}

/// Kendall's τ-b in O(N log N) (Knight's merge-sort algorithm). Returns 0
/// when either ranking is constant.
pub fn kendall(r1: &Ranking, r2: &Ranking) -> Result<f64> {
    let n = check_pair(r1.len(), r2.len())?;
    let mut pairs: Vec<(f64, f64)> =
        r1.frac_rank.iter().copied().zip(r2.frac_rank.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let total = (n * (n - 1) / 2) as u64;
    let mut ties_x = 0u64;
    let mut ties_xy = 0u64;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && pairs[j].0 == pairs[i].0 {
            j += 1;
        }
        ties_x += tie_pairs(j - i);
        let mut a = i;
        while a < j {
            let mut b = a + 1;
            while b < j && pairs[b].1 == pairs[a].1 {
                b += 1;
            }
            ties_xy += tie_pairs(b - a);
            a = b;
        }
        i = j;
    }

    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut buf = vec![0.0; n];
    let swaps = merge_count(&mut ys, &mut buf);

    let mut ties_y = 0u64;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && ys[j] == ys[i] {
            j += 1;
        }
        ties_y += tie_pairs(j - i);
        i = j;
    }

    let denom_x = (total - ties_x) as f64;
    let denom_y = (total - ties_y) as f64;
    if denom_x == 0.0 || denom_y == 0.0 {
        return Ok(0.0);
    }
    // concordant - discordant = total - ties_x - ties_y + ties_xy - 2 * swaps
    let s = total as f64 - ties_x as f64 - ties_y as f64 + ties_xy as f64 - 2.0 * swaps as f64;
    Ok(s / (denom_x * denom_y).sqrt())
}

fn tie_pairs(m: usize) -> u64 {
    (m * m.saturating_sub(1) / 2) as u64
}

/// Stable merge sort counting strict inversions.
fn merge_count(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = {
        let (left, right) = v.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        merge_count(left, bl) + merge_count(right, br)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

/// Pearson's linear correlation between raw scores.
pub fn pearson(c1: &CentralityVector, c2: &CentralityVector) -> Result<f64> {
    pearson_scores(&c1.scores, &c2.scores)
}

pub fn pearson_scores(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = check_pair(x.len(), y.len())?;
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ConstantScores);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Top-k cutoff: `max(1, floor(k_fraction · N))`.
pub fn top_k_size(n: usize, k_fraction: f64) -> usize {
    // the epsilon keeps e.g. 0.15 * 20 from flooring to 2
    (((k_fraction * n as f64) + 1e-9).floor() as usize).clamp(1, n.max(1))
}

/// Percentage of shared nodes between the two top-k sets.
pub fn top_k_overlap(r1: &Ranking, r2: &Ranking, k_fraction: f64) -> Result<f64> {
    if r1.len() != r2.len() {
        return Err(Error::MismatchedNodes(r1.len(), r2.len()));
    }
    if !(k_fraction > 0.0 && k_fraction <= 1.0) {
        return Err(Error::InvalidArgument(format!("k fraction {k_fraction} outside (0, 1]")));
    }
    if r1.is_empty() {
        return Err(Error::EmptyTopology);
    }
    let k = top_k_size(r1.len(), k_fraction);
    let mut in_first = vec![false; r1.len()];
    for &u in r1.top(k) {
        in_first[u] = true;
    }
    let common = r2.top(k).iter().filter(|&&u| in_first[u]).count();
    Ok(100.0 * common as f64 / k as f64)
}

/// Pairwise agreement matrices over a set of indices on one topology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub kinds: Vec<IndexKind>,
    pub spearman: Vec<Vec<f64>>,
    pub kendall: Vec<Vec<f64>>,
    pub pearson: Vec<Vec<f64>>,
    pub overlap: Vec<Vec<f64>>,
    pub k_fraction: f64,
    /// Index pairs whose Pearson coefficient was undefined (constant scores)
    /// and reported as 0.
    pub degenerate_pairs: Vec<(IndexKind, IndexKind)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Spearman,
    Kendall,
    Pearson,
    Overlap,
}

impl Measure {
    pub const ALL: [Measure; 4] = [Measure::Spearman, Measure::Kendall, Measure::Pearson, Measure::Overlap];

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Spearman => "spearman",
            Measure::Kendall => "kendall",
            Measure::Pearson => "pearson",
            Measure::Overlap => "overlap",
        }
    }
}

impl CorrelationMatrix {
    pub fn matrix(&self, m: Measure) -> &Vec<Vec<f64>> {
        match m {
            Measure::Spearman => &self.spearman,
            Measure::Kendall => &self.kendall,
            Measure::Pearson => &self.pearson,
            Measure::Overlap => &self.overlap,
        }
    }
}

pub fn correlation_matrix(
    vectors: &BTreeMap<IndexKind, CentralityVector>,
    k_fraction: f64,
) -> Result<CorrelationMatrix> {
    if vectors.len() < 2 {
        return Err(Error::InvalidArgument("correlation matrix needs at least two indices".into()));
    }
    let kinds: Vec<IndexKind> = IndexKind::ALL.iter().copied().filter(|k| vectors.contains_key(k)).collect();
    let list: Vec<&CentralityVector> = kinds.iter().map(|k| &vectors[k]).collect();
    let n = list[0].len();
    for v in &list {
        if v.len() != n {
            return Err(Error::MismatchedNodes(n, v.len()));
        }
    }
    let rankings: Vec<Ranking> = list.iter().map(|v| rank(v)).collect();
    let m = kinds.len();
    let mut out = CorrelationMatrix {
        kinds: kinds.clone(),
        spearman: vec![vec![1.0; m]; m],
        kendall: vec![vec![1.0; m]; m],
        pearson: vec![vec![1.0; m]; m],
        overlap: vec![vec![100.0; m]; m],
        k_fraction,
        degenerate_pairs: Vec::new(),
    };
    for i in 0..m {
        for j in (i + 1)..m {
            let s = spearman(&rankings[i], &rankings[j])?;
            let t = kendall(&rankings[i], &rankings[j])?;
            let p = match pearson(list[i], list[j]) {
                Ok(p) => p,
                Err(Error::ConstantScores) => {
                    out.degenerate_pairs.push((kinds[i], kinds[j]));
                    0.0
                }
                Err(e) => return Err(e),
            };
            let o = top_k_overlap(&rankings[i], &rankings[j], k_fraction)?;
            for (mat, val) in [
                (&mut out.spearman, s),
                (&mut out.kendall, t),
                (&mut out.pearson, p),
                (&mut out.overlap, o),
            ] {
                mat[i][j] = val;
                mat[j][i] = val;
            }
        }
    }
    Ok(out)
}

/// Per-cell mean and (population) variance of one measure across topologies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateMatrix {
    pub measure: Measure,
    pub kinds: Vec<IndexKind>,
    pub mean: Vec<Vec<f64>>,
    pub variance: Vec<Vec<f64>>,
    pub samples: usize,
}

/// Averages matrices over topologies, restricted to the indices every
/// topology has.
pub fn aggregate(matrices: &[CorrelationMatrix], measure: Measure) -> Result<AggregateMatrix> {
    if matrices.is_empty() {
        return Err(Error::InvalidArgument("nothing to aggregate".into()));
    }
    let kinds: Vec<IndexKind> = matrices[0]
        .kinds
        .iter()
        .copied()
        .filter(|k| matrices.iter().all(|m| m.kinds.contains(k)))
        .collect();
    let m = kinds.len();
    let count = matrices.len() as f64;
    let mut mean = vec![vec![0.0; m]; m];
    let mut variance = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..m {
            let values: Vec<f64> = matrices
                .iter()
                .map(|cm| {
                    let a = cm.kinds.iter().position(|k| *k == kinds[i]).unwrap();
                    let b = cm.kinds.iter().position(|k| *k == kinds[j]).unwrap();
                    cm.matrix(measure)[a][b]
                })
                .collect();
            let mu = values.iter().sum::<f64>() / count;
            mean[i][j] = mu;
            variance[i][j] = values.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / count;
        }
    }
    Ok(AggregateMatrix { measure, kinds, mean, variance, samples: matrices.len() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub damping: f64,
    /// Spearman ρ between PageRank and each `against` index.
    pub rho: Vec<f64>,
    /// PageRank was constant, so every ρ in the row is a conventional 0.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DampingSweep {
    pub against: Vec<IndexKind>,
    pub rows: Vec<SweepRow>,
}

/// Recomputes PageRank for each damping factor and correlates it with fixed
/// reference indices.
pub fn damping_sweep(g: &Topology, d_values: &[f64], against: &[IndexKind]) -> Result<DampingSweep> {
    let references: Vec<Ranking> = against
        .iter()
        .map(|&k| compute_index(g, k, crate::centrality::DEFAULT_DAMPING).map(|c| rank(&c)))
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(d_values.len());
    for &d in d_values {
        let pg = rank(&crate::centrality::pagerank(g, d)?);
        let rho = references.iter().map(|r| spearman(&pg, r)).collect::<Result<Vec<_>>>()?;
        rows.push(SweepRow { damping: d, rho, degenerate: pg.is_constant() });
    }
    Ok(DampingSweep { against: against.to_vec(), rows })
}

/// BC/DC agreement diagnostics for one binary topology.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BottomRankDiagnostics {
    /// Fraction of nodes with degree one.
    pub fraction_dc_eq_1: f64,
    pub spearman: f64,
    pub top_k_overlap: f64,
}

pub fn bottom_rank_diagnostics(
    g: &Topology,
    r_dc: &Ranking,
    r_bc: &Ranking,
    k_fraction: f64,
) -> Result<BottomRankDiagnostics> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyTopology);
    }
    let leaves = (0..n).filter(|&u| g.degree(u) == 1).count();
    Ok(BottomRankDiagnostics {
        fraction_dc_eq_1: leaves as f64 / n as f64,
        spearman: spearman(r_dc, r_bc)?,
        top_k_overlap: top_k_overlap(r_dc, r_bc, k_fraction)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ranking(scores: &[f64]) -> Ranking {
        rank_scores(scores)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ranking(&[0.9, 0.1, 0.5]).frac_rank, vec![1.0, 3.0, 2.0]);
        assert_eq!(ranking(&[0.5, 0.5, 0.1]).frac_rank, vec![1.5, 1.5, 3.0]);
        let flat = ranking(&[0.3; 4]);
        assert_eq!(flat.frac_rank, vec![2.5; 4]);
        assert_eq!(flat.order, vec![0, 1, 2, 3]);
        assert!(flat.is_constant());
    }

    #[test]
    fn rank_ties_within_rounding() {
        let a = 1.0 / 6.0;
        let b = a + f64::EPSILON * a;
        let r = ranking(&[b, a, 0.0]);
        assert_eq!(r.frac_rank, vec![1.5, 1.5, 3.0]);
        assert_eq!(r.order, vec![0, 1, 2]);
    }

    #[test]
    fn spearman_examples() {
        let r = ranking(&[4.0, 3.0, 2.0, 1.0]);
        let rev = ranking(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(spearman(&r, &r).unwrap(), 1.0);
        assert_eq!(spearman(&r, &rev).unwrap(), -1.0);
        let single = ranking(&[1.0]);
        assert!(spearman(&single, &single).is_err());
        assert_eq!(spearman(&ranking(&[1.0; 4]), &r).unwrap(), 0.0);
    }

    #[test]
    fn kendall_examples() {
        let a = ranking(&[4.0, 3.0, 2.0, 1.0]);
        let b = ranking(&[4.0, 3.0, 1.0, 2.0]);
        let rev = ranking(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(kendall(&a, &a).unwrap(), 1.0);
        assert_eq!(kendall(&a, &rev).unwrap(), -1.0);
        assert!((kendall(&a, &b).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 3.0, 7.0];
        let affine: Vec<f64> = x.iter().map(|v| 2.0 * v + 3.0).collect();
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson_scores(&x, &affine).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson_scores(&x, &neg).unwrap() + 1.0).abs() < 1e-15);
        assert!((pearson_scores(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(pearson_scores(&[1.0; 3], &[1.0, 2.0, 3.0]), Err(Error::ConstantScores));
    }

    #[test]
    fn overlap_examples() {
        let r = ranking(&[4.0, 3.0, 2.0, 1.0]);
        let rev = ranking(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(top_k_overlap(&r, &r, 0.05).unwrap(), 100.0);
        assert_eq!(top_k_overlap(&r, &rev, 0.5).unwrap(), 0.0);
        assert!(top_k_overlap(&r, &rev, 0.0).is_err());
        assert_eq!(top_k_size(20, 0.15), 3);
        assert_eq!(top_k_size(10, 0.05), 1);
        assert_eq!(top_k_size(100, 0.05), 5);
    }

    #[test]
    fn matrix_of_identical_vectors() {
        let v = CentralityVector { kind: IndexKind::Dc, scores: vec![1.0, 2.0, 3.0], damping: None, eigenvalue: None };
        let w = CentralityVector { kind: IndexKind::Bc, ..v.clone() };
        let m = correlation_matrix(&BTreeMap::from([(IndexKind::Dc, v), (IndexKind::Bc, w)]), 0.5).unwrap();
        assert_eq!(m.kinds, vec![IndexKind::Bc, IndexKind::Dc]);
        for mat in [&m.spearman, &m.kendall, &m.pearson] {
            assert_eq!(mat, &vec![vec![1.0; 2]; 2]);
        }
        assert_eq!(m.overlap, vec![vec![100.0; 2]; 2]);
    }

    #[test]
    fn matrix_rejects_mismatched_nodes() {
        let v = CentralityVector { kind: IndexKind::Dc, scores: vec![1.0, 2.0, 3.0], damping: None, eigenvalue: None };
        let w = CentralityVector { kind: IndexKind::Bc, scores: vec![1.0, 2.0], damping: None, eigenvalue: None };
        let r = correlation_matrix(&BTreeMap::from([(IndexKind::Dc, v), (IndexKind::Bc, w)]), 0.5);
        assert!(matches!(r, Err(Error::MismatchedNodes(..))));
    }

    #[test]
    fn aggregate_mean_and_variance() {
        let mk = |s: f64| CorrelationMatrix {
            kinds: vec![IndexKind::Bc, IndexKind::Dc],
            spearman: vec![vec![1.0, s], vec![s, 1.0]],
            kendall: vec![vec![1.0; 2]; 2],
            pearson: vec![vec![1.0; 2]; 2],
            overlap: vec![vec![100.0; 2]; 2],
            k_fraction: 0.05,
            degenerate_pairs: vec![],
        };
        let agg = aggregate(&[mk(0.6), mk(0.8)], Measure::Spearman).unwrap();
        assert!((agg.mean[1][0] - 0.7).abs() < 1e-15);
        assert!((agg.variance[1][0] - 0.01).abs() < 1e-15);
        assert_eq!(agg.variance[0][0], 0.0);
    }

    #[test]
    fn sweep_on_regular_graph_is_degenerate() {
        let g = Topology::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let sweep = damping_sweep(&g, &[0.3, 0.85], &[IndexKind::Dc]).unwrap();
        assert!(sweep.rows.iter().all(|r| r.degenerate && r.rho == vec![0.0]));
    }

    #[test]
    fn sweep_at_zero_damping_reports_zero() {
        let g = Topology::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (1, 3)]).unwrap();
        let sweep = damping_sweep(&g, &[0.0], &[IndexKind::Dc]).unwrap();
        assert!(sweep.rows[0].degenerate);
        assert_eq!(sweep.rows[0].rho, vec![0.0]);
    }

    #[test]
    fn diagnostics_on_star_and_cycle() {
        let star = Topology::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let dc = crate::centrality::degree_centrality(&star).unwrap();
        let bc = crate::centrality::betweenness_centrality(&star).unwrap();
        let d = bottom_rank_diagnostics(&star, &rank(&dc), &rank(&bc), 0.05).unwrap();
        assert_eq!(d.fraction_dc_eq_1, 0.75);
        for u in 1..4 {
            assert_eq!(bc.scores[u], 0.0);
        }
        let cycle = Topology::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let dc = rank(&crate::centrality::degree_centrality(&cycle).unwrap());
        let d = bottom_rank_diagnostics(&cycle, &dc, &dc, 0.05).unwrap();
        assert_eq!(d.fraction_dc_eq_1, 0.0);
    }
}
