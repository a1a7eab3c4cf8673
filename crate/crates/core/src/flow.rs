//! Traffic-carrying capacity: single-pair maximum flow by Edmonds–Karp and
//! the all-pairs aggregate used as a load-neutral capacity measure.
//!
//! Every undirected link becomes two opposed arcs, each with the full link
//! capacity; nodes have unlimited throughput. The aggregate sums the max flow
//! of every unordered pair of surviving nodes. Rather than running one
//! Edmonds–Karp instance per pair, [`aggregate_max_flow`] builds Gusfield's
//! flow-equivalent tree from `N − 1` Edmonds–Karp runs; the pairwise loop is
//! kept as [`aggregate_max_flow_pairwise`] and the two are cross-checked in
//! tests.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attack::{removal_sequence, AttackPlan, MetricSeries, RemovalMode};
use crate::centrality::IndexKind;
use crate::error::{Error, Result};
use crate::graph::{NodeId, Topology};

#[derive(Debug, Clone, Copy)]
struct FlowArc {
    to: NodeId,
    rev: usize,
    capacity: f64,
}

/// Arc-level view of a topology with some nodes switched off.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    first_arc: Vec<usize>,
    arcs: Vec<FlowArc>,
    active: Vec<bool>,
    /// Residual capacities below this are treated as saturated.
    epsilon: f64,
}

/// Outcome of one max-flow computation.
#[derive(Debug, Clone)]
pub struct FlowResult {
    pub value: f64,
    /// Nodes reachable from the source in the final residual network, i.e.
    /// the source side of a minimum cut.
    pub source_side: Vec<bool>,
}

impl FlowNetwork {
    /// Binary topologies are treated as having unit capacities.
    pub fn new(g: &Topology, removed: &[NodeId]) -> Self {
        let n = g.node_count();
        let mut active = vec![true; n];
        for &u in removed {
            active[u] = false;
        }
        let mut first_arc = Vec::with_capacity(n + 1);
        let mut arcs = Vec::with_capacity(2 * g.edge_count());
        for u in 0..n {
            first_arc.push(arcs.len());
            for nb in g.neighbors(u) {
                arcs.push(FlowArc { to: nb.id, rev: usize::MAX, capacity: nb.weight });
            }
        }
        first_arc.push(arcs.len());
        for u in 0..n {
            for (i, nb) in g.neighbors(u).iter().enumerate() {
                let a = first_arc[u] + i;
                if nb.id > u {
                    let v = nb.id;
                    // neighbors are sorted, so u sits at a fixed offset in v's list
                    let j = g.neighbors(v).binary_search_by_key(&u, |x| x.id).unwrap();
                    let b = first_arc[v] + j;
                    arcs[a].rev = b;
                    arcs[b].rev = a;
                }
            }
        }
        let max_cap = arcs.iter().map(|a| a.capacity).fold(0.0, f64::max);
        Self { first_arc, arcs, active, epsilon: max_cap * 1e-12 }
    }

    pub fn node_count(&self) -> usize {
        self.active.len()
    }

    pub fn is_active(&self, u: NodeId) -> bool {
        self.active[u]
    }

    pub fn active_nodes(&self) -> Vec<NodeId> {
        (0..self.node_count()).filter(|&u| self.active[u]).collect()
    }

    fn check_pair(&self, s: NodeId, t: NodeId) -> Result<()> {
        let n = self.node_count();
        if s >= n || t >= n {
            return Err(Error::NodeOutOfRange(s.max(t)));
        }
        if s == t {
            return Err(Error::InvalidFlowQuery("source equals sink".into()));
        }
        if !self.active[s] || !self.active[t] {
            return Err(Error::InvalidFlowQuery("source or sink was removed".into()));
        }
        Ok(())
    }

    /// Edmonds–Karp: augment along BFS-shortest residual paths until none is
    /// left.
    pub fn max_flow(&self, s: NodeId, t: NodeId) -> Result<FlowResult> {
        self.check_pair(s, t)?;
        let n = self.node_count();
        let mut residual: Vec<f64> = self.arcs.iter().map(|a| a.capacity).collect();
        let mut parent_arc = vec![usize::MAX; n];
        let mut visited = vec![false; n];
        let mut queue = std::collections::VecDeque::with_capacity(n);
        let mut value = 0.0;
        loop {
            visited.iter_mut().for_each(|v| *v = false);
            queue.clear();
            visited[s] = true;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                // arc ids index arcs, residual and parent_arc alike
                #[allow(clippy::needless_range_loop)]
                for a in self.first_arc[u]..self.first_arc[u + 1] {
                    let v = self.arcs[a].to;
                    if !visited[v] && self.active[v] && residual[a] > self.epsilon {
                        visited[v] = true;
                        parent_arc[v] = a;
                        queue.push_back(v);
                    }
                }
            }
            if !visited[t] {
                return Ok(FlowResult { value, source_side: visited });
            }
            let mut bottleneck = f64::INFINITY;
            let mut v = t;
            while v != s {
                let a = parent_arc[v];
                bottleneck = bottleneck.min(residual[a]);
                v = self.arcs[self.arcs[a].rev].to;
            }
            let mut v = t;
            while v != s {
                let a = parent_arc[v];
                residual[a] -= bottleneck;
                residual[self.arcs[a].rev] += bottleneck;
                v = self.arcs[self.arcs[a].rev].to;
            }
            value += bottleneck;
        }
    }

    /// Gusfield's flow-equivalent tree over the active nodes, as edges
    /// `(i, parent, flow)` between positions in [`active_nodes`](Self::active_nodes).
    fn equivalent_flow_tree(&self) -> Vec<(NodeId, NodeId, f64)> {
        let nodes = self.active_nodes();
        let m = nodes.len();
        let mut parent = vec![0usize; m];
        let mut edges = Vec::with_capacity(m.saturating_sub(1));
        for i in 1..m {
            let j = parent[i];
            let cut = self
                .max_flow(nodes[i], nodes[j])
                .expect("active distinct nodes always form a valid query");
            edges.push((i, j, cut.value));
            for (l, p) in parent.iter_mut().enumerate().skip(i + 1) {
                if *p == j && cut.source_side[nodes[l]] {
                    *p = i;
                }
            }
        }
        edges
    }
}

/// Maximum `s`–`t` flow after deleting the nodes in `removed`.
pub fn max_flow(g: &Topology, s: NodeId, t: NodeId, removed: &[NodeId]) -> Result<f64> {
    Ok(FlowNetwork::new(g, removed).max_flow(s, t)?.value)
}

fn surviving_count(g: &Topology, removed: &[NodeId]) -> Result<usize> {
    let mut gone = vec![false; g.node_count()];
    for &u in removed {
        if u >= g.node_count() {
            return Err(Error::NodeOutOfRange(u));
        }
        gone[u] = true;
    }
    let alive = gone.iter().filter(|&&x| !x).count();
    if alive < 2 {
        return Err(Error::InvalidFlowQuery(format!("{alive} surviving nodes, need at least 2")));
    }
    Ok(alive)
}

/// Sum of max flows over all unordered pairs of surviving nodes.
///
/// The pairwise flow of `{s, t}` equals the lightest edge on the `s`–`t`
/// path of the flow-equivalent tree. Adding tree edges heaviest first, an
/// edge of weight `w` joining groups of sizes `a` and `b` is that lightest
/// edge for exactly `a·b` pairs.
pub fn aggregate_max_flow(g: &Topology, removed: &[NodeId]) -> Result<f64> {
    let alive = surviving_count(g, removed)?;
    let net = FlowNetwork::new(g, removed);
    let mut edges = net.equivalent_flow_tree();
    edges.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)));
    let mut dsu = DisjointSets::new(alive);
    let mut total = 0.0;
    for (i, j, w) in edges {
        let (a, b) = (dsu.find(i), dsu.find(j));
        total += w * (dsu.size[a] * dsu.size[b]) as f64;
        dsu.union(a, b);
    }
    Ok(total)
}

/// Reference aggregate: one Edmonds–Karp run per unordered pair, summed in
/// ascending `(s, t)` order.
pub fn aggregate_max_flow_pairwise(g: &Topology, removed: &[NodeId]) -> Result<f64> {
    surviving_count(g, removed)?;
    let net = FlowNetwork::new(g, removed);
    let nodes = net.active_nodes();
    let pairs: Vec<(NodeId, NodeId)> = nodes
        .iter()
        .enumerate()
        .flat_map(|(i, &s)| nodes[i + 1..].iter().map(move |&t| (s, t)))
        .collect();
    let flows: Vec<f64> = pairs
        .par_iter()
        .map(|&(s, t)| net.max_flow(s, t).map(|r| r.value))
        .collect::<Result<_>>()?;
    Ok(flows.iter().sum())
}

struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        let (big, small) = if self.size[a] >= self.size[b] { (a, b) } else { (b, a) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityPoint {
    pub k: usize,
    pub agg_max_flow: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityTrace {
    pub driver: IndexKind,
    pub mode: RemovalMode,
    pub steps: Vec<CapacityPoint>,
}

impl CapacityTrace {
    pub fn series(&self) -> MetricSeries {
        MetricSeries {
            driver: self.driver,
            steps: self.steps.iter().map(|p| p.k).collect(),
            values: self.steps.iter().map(|p| p.agg_max_flow).collect(),
        }
    }
}

/// Aggregate max flow after each removal step of a driver's ranking, using
/// the weighted variant of the driver index.
pub fn run_capacity_attack(g: &Topology, plan: &AttackPlan, damping: f64) -> Result<CapacityTrace> {
    if !g.is_capacitated() {
        return Err(Error::NotCapacitated);
    }
    if plan.driver == IndexKind::Pg {
        return Err(Error::WeightedPagerank);
    }
    plan.validate(g.node_count())?;
    if plan.max_step() + 2 > g.node_count() {
        return Err(Error::InvalidPlan("fewer than 2 nodes would survive".into()));
    }
    let sequence = removal_sequence(g, plan.driver, plan.mode, plan.max_step(), damping)?;
    let values: Vec<f64> = plan
        .steps
        .par_iter()
        .map(|&k| aggregate_max_flow(g, &sequence[..k]))
        .collect::<Result<_>>()?;
    Ok(CapacityTrace {
        driver: plan.driver,
        mode: plan.mode,
        steps: plan
            .steps
            .iter()
            .zip(values)
            .map(|(&k, agg_max_flow)| CapacityPoint { k, agg_max_flow })
            .collect(),
    })
}
