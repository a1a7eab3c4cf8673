//! Brute-force reference implementations. Everything here is deliberately
//! naive (path enumeration, subset enumeration, O(N^2) pair counting) and
//! shares no code with the library beyond the `Topology` accessors.

#![allow(dead_code, clippy::needless_range_loop)]

use toposcope_core::graph::{NodeId, Topology};

/// Geodesic facts for every ordered pair, from enumerating all simple paths.
pub struct GeodesicOracle {
    pub n: usize,
    /// `dist[s][t]`, `f64::INFINITY` if unreachable.
    pub dist: Vec<Vec<f64>>,
    /// Number of shortest s-t paths.
    pub sigma: Vec<Vec<u64>>,
    /// `through[s][t][v]`: shortest s-t paths with `v` strictly inside.
    pub through: Vec<Vec<Vec<u64>>>,
}

fn edge_length(g: &Topology, u: NodeId, v: NodeId) -> f64 {
    match g.capacity(u, v) {
        Some(c) => 1.0 / c,
        None => 1.0,
    }
}

fn same_length(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

impl GeodesicOracle {
    pub fn new(g: &Topology) -> Self {
        let n = g.node_count();
        assert!(n <= 10, "oracle is exponential");
        let mut dist = vec![vec![f64::INFINITY; n]; n];
        let mut sigma = vec![vec![0u64; n]; n];
        let mut through = vec![vec![vec![0u64; n]; n]; n];
        for s in 0..n {
            let mut paths: Vec<Vec<Vec<NodeId>>> = vec![Vec::new(); n];
            let mut lens: Vec<Vec<f64>> = vec![Vec::new(); n];
            let mut stack = vec![s];
            let mut on_path = vec![false; n];
            on_path[s] = true;
            dfs(g, &mut stack, &mut on_path, 0.0, &mut paths, &mut lens);
            dist[s][s] = 0.0;
            for t in 0..n {
                if t == s || lens[t].is_empty() {
                    continue;
                }
                let best = lens[t].iter().copied().fold(f64::INFINITY, f64::min);
                dist[s][t] = best;
                for (p, &l) in paths[t].iter().zip(&lens[t]) {
                    if same_length(l, best) {
                        sigma[s][t] += 1;
                        for &v in &p[1..p.len() - 1] {
                            through[s][t][v] += 1;
                        }
                    }
                }
            }
        }
        Self { n, dist, sigma, through }
    }

    pub fn betweenness(&self) -> Vec<f64> {
        let n = self.n;
        let norm = 2.0 / ((n - 1) as f64 * (n - 2) as f64);
        (0..n)
            .map(|v| {
                let mut acc = 0.0;
                for s in 0..n {
                    for t in (s + 1)..n {
                        if s != v && t != v && self.sigma[s][t] > 0 {
                            acc += self.through[s][t][v] as f64 / self.sigma[s][t] as f64;
                        }
                    }
                }
                acc * norm
            })
            .collect()
    }

    pub fn closeness(&self) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|i| (n - 1) as f64 / (0..n).filter(|&j| j != i).map(|j| self.dist[i][j]).sum::<f64>())
            .collect()
    }

    pub fn harmonic(&self) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i && self.dist[i][j].is_finite())
                    .map(|j| 1.0 / self.dist[i][j])
                    .sum::<f64>()
                    / (n - 1) as f64
            })
            .collect()
    }

    pub fn eccentricity(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| 1.0 / self.dist[i].iter().copied().fold(0.0, f64::max))
            .collect()
    }
}

fn dfs(
    g: &Topology,
    stack: &mut Vec<NodeId>,
    on_path: &mut [bool],
    len: f64,
    paths: &mut [Vec<Vec<NodeId>>],
    lens: &mut [Vec<f64>],
) {
    let u = *stack.last().unwrap();
    for nb in g.neighbors(u) {
        let v = nb.id;
        if on_path[v] {
            continue;
        }
        let l = len + edge_length(g, u, v);
        stack.push(v);
        on_path[v] = true;
        paths[v].push(stack.clone());
        lens[v].push(l);
        dfs(g, stack, on_path, l, paths, lens);
        on_path[v] = false;
        stack.pop();
    }
}

/// Minimum s-t cut by enumerating every vertex bipartition. Unit capacities
/// on binary graphs.
pub fn min_cut(g: &Topology, s: NodeId, t: NodeId) -> f64 {
    let n = g.node_count();
    assert!(n <= 16);
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << n) {
        if mask & (1 << s) == 0 || mask & (1 << t) != 0 {
            continue;
        }
        let cut: f64 = g
            .edges()
            .filter(|&(u, v, _)| ((mask >> u) & 1) != ((mask >> v) & 1))
            .map(|(_, _, w)| w)
            .sum();
        best = best.min(cut);
    }
    best
}

/// Kendall's tau-b by direct pair counting.
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let (mut conc, mut disc, mut tx, mut ty) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = x[i] - x[j];
            let dy = y[i] - y[j];
            if dx == 0.0 && dy == 0.0 {
                tx += 1;
                ty += 1;
            } else if dx == 0.0 {
                tx += 1;
            } else if dy == 0.0 {
                ty += 1;
            } else if (dx > 0.0) == (dy > 0.0) {
                conc += 1;
            } else {
                disc += 1;
            }
        }
    }
    let n0 = (n * (n - 1) / 2) as i64;
    let denom = (((n0 - tx) as f64) * ((n0 - ty) as f64)).sqrt();
    if denom == 0.0 {
        0.0
    } else {
        (conc - disc) as f64 / denom
    }
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = ((row + 1)..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// PageRank of a connected binary graph as the exact solution of its linear
/// system `(I - d M) x = (1-d)/N`.
pub fn pagerank_direct(g: &Topology, d: f64) -> Vec<f64> {
    let n = g.node_count();
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        a[i][i] = 1.0;
        for nb in g.neighbors(i) {
            a[i][nb.id] -= d / g.degree(nb.id) as f64;
        }
    }
    solve(a, vec![(1.0 - d) / n as f64; n])
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
