//! Undirected topology representation and the traversal primitives shared by
//! every analysis: connected components, hop-count BFS and inverse-capacity
//! Dijkstra with shortest-path counting.
//!
//! A [`Topology`] is immutable once built. Neighbor lists are sorted by node
//! id and every accumulation walks nodes in ascending id order, so results do
//! not depend on hash ordering or thread scheduling.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Relative tolerance under which two weighted path lengths count as equal.
pub const GEODESIC_REL_TOL: f64 = 1e-9;

/// Whether two geodesic lengths are equal for shortest-path counting.
///
/// Purely relative, so scaling every capacity by the same factor never
/// changes which paths tie.
#[inline]
pub fn geodesic_eq(a: f64, b: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= GEODESIC_REL_TOL * a.abs().max(b.abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub id: NodeId,
    /// Link capacity; `1.0` on binary topologies.
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    adjacency: Vec<Vec<Neighbor>>,
    labels: Vec<String>,
    capacitated: bool,
    edge_count: usize,
}

/// Counters collected while collapsing raw edges into a simple graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildStats {
    pub edges_read: usize,
    pub multi_edges_collapsed: usize,
    pub self_loops_dropped: usize,
}

/// Incremental constructor: labels are assigned dense ids in first-appearance
/// order, self-loops are dropped and parallel edges are merged (capacities
/// summed).
#[derive(Debug, Clone)]
pub struct TopologyBuilder {
    capacitated: bool,
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    edges: BTreeMap<(NodeId, NodeId), f64>,
    stats: BuildStats,
}

impl TopologyBuilder {
    pub fn new(capacitated: bool) -> Self {
        Self {
            capacitated,
            labels: Vec::new(),
            index: HashMap::new(),
            edges: BTreeMap::new(),
            stats: BuildStats::default(),
        }
    }

    pub fn node(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), id);
        id
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Adds an undirected edge. `capacity` is ignored on binary builders.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId, capacity: f64) -> Result<()> {
        let n = self.labels.len();
        for x in [u, v] {
            if x >= n {
                return Err(Error::NodeOutOfRange(x));
            }
        }
        self.stats.edges_read += 1;
        if self.capacitated && !(capacity.is_finite() && capacity > 0.0) {
            return Err(Error::InvalidCapacity {
                edge: format!("{}-{}", self.labels[u], self.labels[v]),
                value: capacity,
            });
        }
        if u == v {
            self.stats.self_loops_dropped += 1;
            return Ok(());
        }
        let key = (u.min(v), u.max(v));
        let w = if self.capacitated { capacity } else { 1.0 };
        match self.edges.get_mut(&key) {
            Some(existing) => {
                self.stats.multi_edges_collapsed += 1;
                if self.capacitated {
                    *existing += w;
                }
            }
            None => {
                self.edges.insert(key, w);
            }
        }
        Ok(())
    }

    pub fn add_labeled_edge(&mut self, u: &str, v: &str, capacity: f64) -> Result<()> {
        let u = self.node(u);
        let v = self.node(v);
        self.add_edge(u, v, capacity)
    }

    pub fn build(self) -> (Topology, BuildStats) {
        let n = self.labels.len();
        let mut adjacency = vec![Vec::new(); n];
        for (&(u, v), &weight) in &self.edges {
            adjacency[u].push(Neighbor { id: v, weight });
            adjacency[v].push(Neighbor { id: u, weight });
        }
        for list in &mut adjacency {
            list.sort_by_key(|nb| nb.id);
        }
        let topo = Topology {
            adjacency,
            labels: self.labels,
            capacitated: self.capacitated,
            edge_count: self.edges.len(),
        };
        (topo, self.stats)
    }
}

impl Topology {
    /// Binary topology on nodes `0..n` labelled by their ids.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut b = TopologyBuilder::new(false);
        for i in 0..n {
            b.node(&i.to_string());
        }
        for &(u, v) in edges {
            b.add_edge(u, v, 1.0)?;
        }
        Ok(b.build().0)
    }

    /// Capacitated topology on nodes `0..n` labelled by their ids.
    pub fn from_capacitated_edges(n: usize, edges: &[(NodeId, NodeId, f64)]) -> Result<Self> {
        let mut b = TopologyBuilder::new(true);
        for i in 0..n {
            b.node(&i.to_string());
        }
        for &(u, v, c) in edges {
            b.add_edge(u, v, c)?;
        }
        Ok(b.build().0)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn is_capacitated(&self) -> bool {
        self.capacitated
    }

    pub fn neighbors(&self, u: NodeId) -> &[Neighbor] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adjacency[u].len()
    }

    /// Sum of incident capacities (equals the degree on binary graphs).
    pub fn strength(&self, u: NodeId) -> f64 {
        self.adjacency[u].iter().map(|nb| nb.weight).sum()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, u: NodeId) -> &str {
        &self.labels[u]
    }

    pub fn capacity(&self, u: NodeId, v: NodeId) -> Option<f64> {
        if !self.capacitated {
            return None;
        }
        self.adjacency[u]
            .binary_search_by_key(&v, |nb| nb.id)
            .ok()
            .map(|i| self.adjacency[u][i].weight)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adjacency[u].binary_search_by_key(&v, |nb| nb.id).is_ok()
    }

    /// Each undirected edge once, as `(u, v, weight)` with `u < v`, in
    /// lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .filter(move |nb| nb.id > u)
                .map(move |nb| (u, nb.id, nb.weight))
        })
    }

    /// Copy with every capacity multiplied by `factor`.
    pub fn scale_capacities(&self, factor: f64) -> Topology {
        let mut out = self.clone();
        if self.capacitated {
            for list in &mut out.adjacency {
                for nb in list {
                    nb.weight *= factor;
                }
            }
        }
        out
    }

    /// Subgraph induced by the nodes with `keep[u] == true`, re-densified in
    /// ascending original id order. Also returns the new-to-old id map.
    pub fn induced_subgraph(&self, keep: &[bool]) -> (Topology, Vec<NodeId>) {
        assert_eq!(keep.len(), self.node_count());
        let old_ids: Vec<NodeId> = (0..self.node_count()).filter(|&u| keep[u]).collect();
        let mut new_id = vec![usize::MAX; self.node_count()];
        for (i, &old) in old_ids.iter().enumerate() {
            new_id[old] = i;
        }
        let mut edge_count = 0;
        let adjacency: Vec<Vec<Neighbor>> = old_ids
            .iter()
            .map(|&old| {
                self.adjacency[old]
                    .iter()
                    .filter(|nb| keep[nb.id])
                    .map(|nb| {
                        if nb.id > old {
                            edge_count += 1;
                        }
                        Neighbor { id: new_id[nb.id], weight: nb.weight }
                    })
                    .collect()
            })
            .collect();
        let labels = old_ids.iter().map(|&u| self.labels[u].clone()).collect();
        let topo = Topology { adjacency, labels, capacitated: self.capacitated, edge_count };
        (topo, old_ids)
    }

    /// Residual graph after deleting `removed` (and their links).
    pub fn without_nodes(&self, removed: &[NodeId]) -> (Topology, Vec<NodeId>) {
        let mut keep = vec![true; self.node_count()];
        for &u in removed {
            keep[u] = false;
        }
        self.induced_subgraph(&keep)
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() <= 1 || connected_components(self).component_sizes.len() == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    pub component_id: Vec<usize>,
    pub component_sizes: Vec<usize>,
    /// Index of the largest component; ties go to the lowest component id,
    /// i.e. the one holding the smallest node id.
    pub gcc_id: usize,
}

impl ComponentLabeling {
    pub fn gcc_size(&self) -> usize {
        self.component_sizes.get(self.gcc_id).copied().unwrap_or(0)
    }

    pub fn count(&self) -> usize {
        self.component_sizes.len()
    }

    pub fn members(&self, component: usize) -> Vec<NodeId> {
        (0..self.component_id.len()).filter(|&u| self.component_id[u] == component).collect()
    }
}

/// Labels components by BFS from each unvisited node in ascending id order,
/// so component ids follow their smallest member.
pub fn connected_components(g: &Topology) -> ComponentLabeling {
    let n = g.node_count();
    let mut component_id = vec![usize::MAX; n];
    let mut component_sizes = Vec::new();
    let mut queue = VecDeque::new();
    for root in 0..n {
        if component_id[root] != usize::MAX {
            continue;
        }
        let c = component_sizes.len();
        component_id[root] = c;
        queue.push_back(root);
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for nb in g.neighbors(u) {
                if component_id[nb.id] == usize::MAX {
                    component_id[nb.id] = c;
                    queue.push_back(nb.id);
                }
            }
        }
        component_sizes.push(size);
    }
    let mut gcc_id = 0;
    for (c, &s) in component_sizes.iter().enumerate() {
        if s > component_sizes[gcc_id] {
            gcc_id = c;
        }
    }
    ComponentLabeling { component_id, component_sizes, gcc_id }
}

/// Induced subgraph on the giant connected component, labels preserved.
pub fn extract_gcc(g: &Topology) -> Result<Topology> {
    if g.is_empty() {
        return Err(Error::EmptyTopology);
    }
    let labeling = connected_components(g);
    if labeling.count() == 1 {
        return Ok(g.clone());
    }
    let keep: Vec<bool> = labeling.component_id.iter().map(|&c| c == labeling.gcc_id).collect();
    Ok(g.induced_subgraph(&keep).0)
}

/// How edge lengths are derived when measuring geodesics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeLength {
    Hops,
    InverseCapacity,
}

impl EdgeLength {
    /// Inverse capacity on capacitated graphs, hop count otherwise.
    pub fn natural(g: &Topology) -> Self {
        if g.is_capacitated() {
            EdgeLength::InverseCapacity
        } else {
            EdgeLength::Hops
        }
    }
}

/// Single-source geodesic distances and shortest-path counts.
///
/// `sigma` is held as `f64`: path counts on router graphs overflow `u64`
/// long before they lose meaningful precision as floats.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceRow {
    pub source: NodeId,
    pub dist: Vec<f64>,
    pub sigma: Vec<f64>,
}

pub fn bfs_row(g: &Topology, source: NodeId) -> DistanceRow {
    let mut ws = SweepWorkspace::new(g.node_count());
    ws.run(g, source, EdgeLength::Hops);
    ws.into_row(source)
}

pub fn dijkstra_row(g: &Topology, source: NodeId, length: EdgeLength) -> DistanceRow {
    let mut ws = SweepWorkspace::new(g.node_count());
    ws.run(g, source, length);
    ws.into_row(source)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct HeapKey(f64);

impl Eq for HeapKey {}

impl PartialOrd for HeapKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Reusable buffers for one single-source sweep. After [`run`](Self::run),
/// `order` lists the reached nodes by non-decreasing distance and `preds`
/// holds each node's geodesic predecessors, which is what Brandes-style
/// dependency accumulation needs.
#[derive(Debug, Clone)]
pub(crate) struct SweepWorkspace {
    pub dist: Vec<f64>,
    pub sigma: Vec<f64>,
    pub order: Vec<NodeId>,
    pub preds: Vec<Vec<NodeId>>,
    queue: VecDeque<NodeId>,
    heap: BinaryHeap<Reverse<(HeapKey, NodeId)>>,
    settled: Vec<bool>,
}

impl SweepWorkspace {
    pub fn new(n: usize) -> Self {
        Self {
            dist: vec![f64::INFINITY; n],
            sigma: vec![0.0; n],
            order: Vec::with_capacity(n),
            preds: vec![Vec::new(); n],
            queue: VecDeque::with_capacity(n),
            heap: BinaryHeap::new(),
            settled: vec![false; n],
        }
    }

    fn reset(&mut self) {
        for &v in &self.order {
            self.dist[v] = f64::INFINITY;
            self.sigma[v] = 0.0;
            self.preds[v].clear();
            self.settled[v] = false;
        }
        self.order.clear();
    }

    pub fn run(&mut self, g: &Topology, source: NodeId, length: EdgeLength) {
        self.reset();
        match length {
            EdgeLength::Hops => self.bfs(g, source),
            EdgeLength::InverseCapacity => self.dijkstra(g, source),
        }
    }

    fn bfs(&mut self, g: &Topology, source: NodeId) {
        self.dist[source] = 0.0;
        self.sigma[source] = 1.0;
        self.queue.clear();
        self.queue.push_back(source);
        while let Some(u) = self.queue.pop_front() {
            self.order.push(u);
            let du = self.dist[u];
            for nb in g.neighbors(u) {
                let v = nb.id;
                if self.dist[v].is_infinite() {
                    self.dist[v] = du + 1.0;
                    self.queue.push_back(v);
                }
                if self.dist[v] == du + 1.0 {
                    self.sigma[v] += self.sigma[u];
                    self.preds[v].push(u);
                }
            }
        }
    }

    fn dijkstra(&mut self, g: &Topology, source: NodeId) {
        self.dist[source] = 0.0;
        self.sigma[source] = 1.0;
        self.heap.clear();
        self.heap.push(Reverse((HeapKey(0.0), source)));
        while let Some(Reverse((HeapKey(d), u))) = self.heap.pop() {
            if self.settled[u] || d != self.dist[u] {
                continue;
            }
            self.settled[u] = true;
            self.order.push(u);
            for nb in g.neighbors(u) {
                let v = nb.id;
                if self.settled[v] {
                    continue;
                }
                let alt = d + 1.0 / nb.weight;
                let dv = self.dist[v];
                if dv.is_infinite() || (alt < dv && !geodesic_eq(alt, dv)) {
                    self.dist[v] = alt;
                    self.sigma[v] = self.sigma[u];
                    self.preds[v].clear();
                    self.preds[v].push(u);
                    self.heap.push(Reverse((HeapKey(alt), v)));
                } else if geodesic_eq(alt, dv) {
                    self.sigma[v] += self.sigma[u];
                    self.preds[v].push(u);
                }
            }
        }
    }

    pub fn into_row(self, source: NodeId) -> DistanceRow {
        DistanceRow { source, dist: self.dist, sigma: self.sigma }
    }
}
