//! Centrality-driven node removal and its effect on connectivity.
//!
//! A removal run takes the nodes ranked highest by one driver index and
//! deletes them, either all at once from a ranking of the intact graph
//! (simultaneous mode) or one at a time with the ranking recomputed on every
//! residual graph (sequential mode). After each step the residual graph is
//! measured. Traces from several drivers are then folded into an envelope of
//! best- and worst-case values, from which the impact factor of each driver
//! is derived.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centrality::{compute_index, IndexKind};
use crate::error::{Error, Result};
use crate::graph::{connected_components, EdgeLength, NodeId, SweepWorkspace, Topology};
use crate::rankstats::rank_scores;

/// Fraction of the network removed by default.
pub const DEFAULT_MAX_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RemovalMode {
    Simultaneous,
    Sequential,
}

impl fmt::Display for RemovalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RemovalMode::Simultaneous => "simultaneous",
            RemovalMode::Sequential => "sequential",
        })
    }
}

impl FromStr for RemovalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "simultaneous" | "sim" => Ok(RemovalMode::Simultaneous),
            "sequential" | "seq" => Ok(RemovalMode::Sequential),
            other => Err(Error::InvalidArgument(format!("unknown removal mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackPlan {
    pub driver: IndexKind,
    pub mode: RemovalMode,
    /// Removal counts at which the network is measured; strictly increasing
    /// and starting at 0.
    pub steps: Vec<usize>,
}

/// Every integer from 0 to `ceil(max_fraction · n)`, capped at `n − 1`.
pub fn default_steps(n: usize, max_fraction: f64) -> Vec<usize> {
    let top = ((max_fraction * n as f64) - 1e-9).ceil().max(0.0) as usize;
    (0..=top.min(n.saturating_sub(1))).collect()
}

impl AttackPlan {
    pub fn new(driver: IndexKind, mode: RemovalMode, steps: Vec<usize>) -> Self {
        Self { driver, mode, steps }
    }

    pub fn with_max_fraction(driver: IndexKind, mode: RemovalMode, n: usize, max_fraction: f64) -> Self {
        Self::new(driver, mode, default_steps(n, max_fraction))
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.steps.first() != Some(&0) {
            return Err(Error::InvalidPlan("steps must start at 0".into()));
        }
        if self.steps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPlan("steps must be strictly increasing".into()));
        }
        let last = *self.steps.last().unwrap();
        if last + 1 > n {
            return Err(Error::InvalidPlan(format!("cannot remove {last} of {n} nodes")));
        }
        Ok(())
    }

    pub fn max_step(&self) -> usize {
        self.steps.last().copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectivitySnapshot {
    pub k: usize,
    pub gcc_size: usize,
    pub num_components: usize,
    /// Mean hop distance over pairs of distinct nodes in the same component.
    pub avg_shortest_path: f64,
    /// False when no component has two or more nodes (the average is then
    /// reported as 0).
    pub avg_path_defined: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackTrace {
    pub driver: IndexKind,
    pub mode: RemovalMode,
    pub snapshots: Vec<ConnectivitySnapshot>,
}

impl AttackTrace {
    pub fn series(&self, metric: Metric) -> MetricSeries {
        let values = self
            .snapshots
            .iter()
            .map(|s| match metric {
                Metric::GccSize => s.gcc_size as f64,
                Metric::NumComponents => s.num_components as f64,
                Metric::AvgShortestPath => s.avg_shortest_path,
                Metric::AggMaxFlow => f64::NAN,
            })
            .collect();
        MetricSeries {
            driver: self.driver,
            steps: self.snapshots.iter().map(|s| s.k).collect(),
            values,
        }
    }
}

/// Measures the residual graph left after deleting `removed`.
pub fn connectivity_metrics(g: &Topology, removed: &[NodeId]) -> Result<ConnectivitySnapshot> {
    let (residual, _) = g.without_nodes(removed);
    if residual.is_empty() {
        return Err(Error::EmptyResidual);
    }
    let labeling = connected_components(&residual);
    let (hop_sum, pairs) = intra_component_distances(&residual);
    let avg_path_defined = pairs > 0;
    Ok(ConnectivitySnapshot {
        k: g.node_count() - residual.node_count(),
        gcc_size: labeling.gcc_size(),
        num_components: labeling.count(),
        avg_shortest_path: if avg_path_defined { hop_sum as f64 / pairs as f64 } else { 0.0 },
        avg_path_defined,
    })
}

/// Sum of hop distances and number of ordered reachable pairs.
fn intra_component_distances(g: &Topology) -> (u64, u64) {
    let n = g.node_count();
    (0..n)
        .into_par_iter()
        .map_init(
            || SweepWorkspace::new(n),
            |ws, s| {
                ws.run(g, s, EdgeLength::Hops);
                let sum: f64 = ws.order.iter().map(|&v| ws.dist[v]).sum();
                (sum as u64, (ws.order.len() - 1) as u64)
            },
        )
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

/// Driver scores on a possibly disconnected residual graph.
///
/// CC and ECC are computed per component with component-local N, EC on the
/// giant component only (other nodes score 0); components too small for an
/// index score 0.
pub fn residual_scores(g: &Topology, kind: IndexKind, damping: f64) -> Result<Vec<f64>> {
    let n = g.node_count();
    let min_nodes = if kind == IndexKind::Bc { 3 } else { 2 };
    if n < min_nodes && kind != IndexKind::Pg {
        return Ok(vec![0.0; n]);
    }
    match kind {
        IndexKind::Dc | IndexKind::Bc | IndexKind::Hc | IndexKind::Pg => {
            Ok(compute_index(g, kind, damping)?.scores)
        }
        IndexKind::Cc | IndexKind::Ecc | IndexKind::Ec => {
            let labeling = connected_components(g);
            if labeling.count() == 1 {
                return Ok(compute_index(g, kind, damping)?.scores);
            }
            let mut scores = vec![0.0; n];
            let components: Vec<usize> = if kind == IndexKind::Ec {
                vec![labeling.gcc_id]
            } else {
                (0..labeling.count()).collect()
            };
            for c in components {
                if labeling.component_sizes[c] < 2 {
                    continue;
                }
                let keep: Vec<bool> = labeling.component_id.iter().map(|&x| x == c).collect();
                let (sub, old_ids) = g.induced_subgraph(&keep);
                let local = compute_index(&sub, kind, damping)?;
                for (i, s) in local.scores.into_iter().enumerate() {
                    scores[old_ids[i]] = s;
                }
            }
            Ok(scores)
        }
    }
}

/// The first `count` nodes a driver removes, in removal order.
pub fn removal_sequence(
    g: &Topology,
    driver: IndexKind,
    mode: RemovalMode,
    count: usize,
    damping: f64,
) -> Result<Vec<NodeId>> {
    if count > g.node_count() {
        return Err(Error::InvalidPlan(format!("cannot remove {count} of {} nodes", g.node_count())));
    }
    if !driver.valid_for(g) {
        return Err(Error::WeightedPagerank);
    }
    match mode {
        RemovalMode::Simultaneous => {
            let scores = compute_index(g, driver, damping)?.scores;
            Ok(rank_scores(&scores).order[..count].to_vec())
        }
        RemovalMode::Sequential => {
            let mut removed = Vec::with_capacity(count);
            for _ in 0..count {
                let (residual, old_ids) = g.without_nodes(&removed);
                let scores = residual_scores(&residual, driver, damping)?;
                let top = rank_scores(&scores).order[0];
                removed.push(old_ids[top]);
            }
            Ok(removed)
        }
    }
}

pub fn run_attack(g: &Topology, plan: &AttackPlan, damping: f64) -> Result<AttackTrace> {
    plan.validate(g.node_count())?;
    let sequence = removal_sequence(g, plan.driver, plan.mode, plan.max_step(), damping)?;
    let snapshots = plan
        .steps
        .iter()
        .map(|&k| connectivity_metrics(g, &sequence[..k]))
        .collect::<Result<_>>()?;
    Ok(AttackTrace { driver: plan.driver, mode: plan.mode, snapshots })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    GccSize,
    NumComponents,
    AvgShortestPath,
    AggMaxFlow,
}

impl Metric {
    pub const CONNECTIVITY: [Metric; 3] = [Metric::GccSize, Metric::NumComponents, Metric::AvgShortestPath];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::GccSize => "gcc",
            Metric::NumComponents => "components",
            Metric::AvgShortestPath => "avg_path",
            Metric::AggMaxFlow => "flow",
        }
    }

    /// Direction in which a value is more damaging to the network, i.e. the
    /// best case for an attacker. Average path length is non-monotone under
    /// removals; its envelope simply takes the pointwise maximum as best.
    pub fn polarity(self) -> Polarity {
        match self {
            Metric::GccSize | Metric::AggMaxFlow => Polarity::LowerIsBest,
            Metric::NumComponents | Metric::AvgShortestPath => Polarity::HigherIsBest,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gcc" | "gcc_size" => Ok(Metric::GccSize),
            "components" | "num_components" => Ok(Metric::NumComponents),
            "avg_path" | "path" | "avg_shortest_path" => Ok(Metric::AvgShortestPath),
            "flow" | "agg_max_flow" => Ok(Metric::AggMaxFlow),
            other => Err(Error::InvalidArgument(format!("unknown metric {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    LowerIsBest,
    HigherIsBest,
}

/// One metric measured along a removal run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSeries {
    pub driver: IndexKind,
    pub steps: Vec<usize>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub metric: Metric,
    pub polarity: Polarity,
    pub steps: Vec<usize>,
    /// Most damaging value over all drivers at each step.
    pub best: Vec<f64>,
    /// Least damaging value over all drivers at each step.
    pub worst: Vec<f64>,
    pub series: Vec<MetricSeries>,
    /// Largest over smallest value at each step; `None` when the smallest is 0.
    pub max_min_ratio: Vec<Option<f64>>,
    /// Impact factor per driver; `None` when the envelope is flat everywhere.
    pub impact_factors: BTreeMap<IndexKind, Option<f64>>,
}

impl EnvelopeReport {
    pub fn is_degenerate(&self) -> bool {
        self.impact_factors.values().all(Option::is_none)
    }
}

pub fn envelope(series: &[MetricSeries], metric: Metric) -> Result<EnvelopeReport> {
    if series.len() < 2 {
        return Err(Error::MismatchedSteps("an envelope needs at least two traces".into()));
    }
    let steps = series[0].steps.clone();
    for s in series {
        if s.steps != steps || s.values.len() != steps.len() {
            return Err(Error::MismatchedSteps(format!(
                "{} trace steps differ from {}",
                s.driver, series[0].driver
            )));
        }
    }
    let polarity = metric.polarity();
    let mut best = Vec::with_capacity(steps.len());
    let mut worst = Vec::with_capacity(steps.len());
    let mut max_min_ratio = Vec::with_capacity(steps.len());
    for i in 0..steps.len() {
        let hi = series.iter().map(|s| s.values[i]).fold(f64::NEG_INFINITY, f64::max);
        let lo = series.iter().map(|s| s.values[i]).fold(f64::INFINITY, f64::min);
        match polarity {
            Polarity::LowerIsBest => {
                best.push(lo);
                worst.push(hi);
            }
            Polarity::HigherIsBest => {
                best.push(hi);
                worst.push(lo);
            }
        }
        max_min_ratio.push((lo != 0.0).then(|| hi / lo));
    }
    let mut report = EnvelopeReport {
        metric,
        polarity,
        steps,
        best,
        worst,
        series: series.to_vec(),
        max_min_ratio,
        impact_factors: BTreeMap::new(),
    };
    for s in series {
        let value = impact_factor(&report, s.driver).ok();
        report.impact_factors.insert(s.driver, value);
    }
    Ok(report)
}

/// Position of a driver inside the envelope averaged over the removal steps:
/// 1 when it matches the best case, 0 when it matches the worst. Step `k = 0`
/// and steps where the envelope has zero width are skipped.
pub fn impact_factor(report: &EnvelopeReport, driver: IndexKind) -> Result<f64> {
    let s = report
        .series
        .iter()
        .find(|s| s.driver == driver)
        .ok_or_else(|| Error::InvalidArgument(format!("no {driver} trace in envelope")))?;
    let mut total = 0.0;
    let mut used = 0usize;
    for i in 0..report.steps.len() {
        let (bc, wc) = (report.best[i], report.worst[i]);
        if report.steps[i] == 0 || bc == wc {
            continue;
        }
        total += (s.values[i] - wc).abs() / (bc - wc).abs();
        used += 1;
    }
    if used == 0 {
        return Err(Error::FlatEnvelope);
    }
    Ok(total / used as f64)
}

/// Empirical distribution of one driver's impact factor over topologies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpactPmf {
    pub driver: IndexKind,
    /// Probability mass of each equal-width bin on `[0, 1]`.
    pub mass: Vec<f64>,
    /// Reports that contributed a value.
    pub samples: usize,
}

impl ImpactPmf {
    pub fn bin_edges(&self, i: usize) -> (f64, f64) {
        let b = self.mass.len() as f64;
        (i as f64 / b, (i + 1) as f64 / b)
    }
}

/// Histogram of `IF(driver)` across reports, skipping flat envelopes.
pub fn if_pmf(reports: &[EnvelopeReport], driver: IndexKind, bins: usize) -> Result<ImpactPmf> {
    if bins == 0 {
        return Err(Error::InvalidArgument("bins must be positive".into()));
    }
    let values: Vec<f64> = reports.iter().filter_map(|r| impact_factor(r, driver).ok()).collect();
    let mut mass = vec![0.0; bins];
    for v in &values {
        let idx = ((v * bins as f64) + 1e-9).floor() as usize;
        mass[idx.min(bins - 1)] += 1.0;
    }
    if !values.is_empty() {
        for m in &mut mass {
            *m /= values.len() as f64;
        }
    }
    Ok(ImpactPmf { driver, mass, samples: values.len() })
}

/// Connectivity traces for several drivers over the same steps.
pub fn run_attacks(
    g: &Topology,
    drivers: &[IndexKind],
    mode: RemovalMode,
    steps: &[usize],
    damping: f64,
) -> Result<Vec<AttackTrace>> {
    drivers
        .iter()
        .map(|&d| run_attack(g, &AttackPlan::new(d, mode, steps.to_vec()), damping))
        .collect()
}

/// Convenience used by reports: envelope of every connectivity metric.
pub fn connectivity_envelopes(traces: &[AttackTrace]) -> Result<Vec<EnvelopeReport>> {
    Metric::CONNECTIVITY
        .iter()
        .map(|&m| envelope(&traces.iter().map(|t| t.series(m)).collect::<Vec<_>>(), m))
        .collect()
}
