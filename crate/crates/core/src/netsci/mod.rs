//! Correlation networks, modularity and community detection.
//!
//! Interaction matrices (likes or votes between politicians) become
//! undirected weighted graphs by thresholding pairwise Pearson correlations
//! of the actors' interaction profiles. Polarization of a graph is its
//! modularity under a detected community structure; detection is either
//! Louvain greedy optimization or Girvan-Newman edge-betweenness removal.
//! Modularity is always computed on the binarized adjacency -- correlation
//! weights decide which edges exist, not how much they count.

mod betweenness;
mod export;
mod louvain;

pub use betweenness::edge_betweenness_communities;
pub use export::{to_dot, to_graphml};
pub use louvain::louvain;

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NetError {
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("partition covers {got} nodes, graph has {expected}")]
    PartitionMismatch { expected: usize, got: usize },
    #[error("threshold {0} outside [-1, 1]")]
    InvalidTheta(f64),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
}

/// An undirected edge between node indices `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Undirected weighted graph with labelled nodes, no self-loops, and at
/// most one edge per unordered pair.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    nodes: Vec<String>,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    pub fn new(
        nodes: Vec<String>,
        edges: Vec<(usize, usize, f64)>,
    ) -> Result<Self, NetError> {
        let n = nodes.len();
        let mut normalized: Vec<Edge> = Vec::with_capacity(edges.len());
        for (u, v, weight) in edges {
            if u == v {
                return Err(NetError::InvalidGraph(format!("self-loop at node {u}")));
            }
            if u >= n || v >= n {
                return Err(NetError::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if !weight.is_finite() {
                return Err(NetError::InvalidGraph(format!(
                    "edge ({u}, {v}) has non-finite weight"
                )));
            }
            let (u, v) = if u < v { (u, v) } else { (v, u) };
            normalized.push(Edge { u, v, weight });
        }
        normalized.sort_by_key(|e| (e.u, e.v));
        if normalized.windows(2).any(|w| (w[0].u, w[0].v) == (w[1].u, w[1].v)) {
            return Err(NetError::InvalidGraph("duplicate edge".into()));
        }
        Ok(Self {
            nodes,
            edges: normalized,
        })
    }

    /// Convenience constructor for unit-weight edges on anonymous nodes.
    pub fn from_unweighted(n: usize, edges: &[(usize, usize)]) -> Result<Self, NetError> {
        Self::new(
            (0..n).map(|i| i.to_string()).collect(),
            edges.iter().map(|&(u, v)| (u, v, 1.0)).collect(),
        )
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Unweighted adjacency lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        adj
    }

    /// Unweighted degree of every node.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.nodes.len()];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }
}

/// A community assignment, aligned with a graph's node order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<usize>,
}

impl Partition {
    pub fn from_labels(labels: Vec<usize>) -> Self {
        Self { labels }
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            labels: (0..n).collect(),
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn community_count(&self) -> usize {
        self.normalized().labels.iter().max().map_or(0, |m| m + 1)
    }

    /// Relabels communities 0..C-1 in order of first appearance, so
    /// logically equal partitions compare equal.
    pub fn normalized(&self) -> Self {
        let mut map: BTreeMap<usize, usize> = BTreeMap::new();
        let mut next = 0;
        let labels = self
            .labels
            .iter()
            .map(|&l| {
                *map.entry(l).or_insert_with(|| {
                    let id = next;
                    next += 1;
                    id
                })
            })
            .collect();
        Self { labels }
    }

    /// Node label -> community label map for a graph.
    pub fn assignment(&self, graph: &WeightedGraph) -> BTreeMap<String, usize> {
        graph
            .nodes()
            .iter()
            .cloned()
            .zip(self.labels.iter().copied())
            .collect()
    }
}

/// Network modularity of a partition on the binarized adjacency:
/// `Q = (1/2m) * sum_ij (a_ij - k_i k_j / 2m) delta(c_i, c_j)`.
pub fn modularity(graph: &WeightedGraph, partition: &Partition) -> Result<f64, NetError> {
    if graph.edge_count() == 0 {
        return Err(NetError::EmptyGraph);
    }
    if partition.len() != graph.node_count() {
        return Err(NetError::PartitionMismatch {
            expected: graph.node_count(),
            got: partition.len(),
        });
    }
    let m = graph.edge_count() as f64;
    let degrees = graph.degrees();
    let labels = partition.labels();

    // community totals: internal edges and degree sums
    let n_comms = labels.iter().max().map_or(0, |l| l + 1);
    let mut internal = vec![0.0f64; n_comms];
    let mut degree_sum = vec![0.0f64; n_comms];
    for e in graph.edges() {
        if labels[e.u] == labels[e.v] {
            internal[labels[e.u]] += 1.0;
        }
    }
    for (node, &d) in degrees.iter().enumerate() {
        degree_sum[labels[node]] += d as f64;
    }
    let q = internal
        .iter()
        .zip(&degree_sum)
        .map(|(&e_c, &d_c)| e_c / m - (d_c / (2.0 * m)).powi(2))
        .sum();
    Ok(q)
}

/// Community detection method used for modularity series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommunityMethod {
    #[default]
    Louvain,
    EdgeBetweenness,
}

impl CommunityMethod {
    pub fn detect(&self, graph: &WeightedGraph, seed: u64) -> Result<Partition, NetError> {
        match self {
            CommunityMethod::Louvain => louvain(graph, seed),
            CommunityMethod::EdgeBetweenness => edge_betweenness_communities(graph),
        }
    }
}

impl std::fmt::Display for CommunityMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CommunityMethod::Louvain => write!(f, "louvain"),
            CommunityMethod::EdgeBetweenness => write!(f, "edge_betweenness"),
        }
    }
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
        sxy += (a - mx) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        None
    } else {
        Some(sxy / (sxx * syy).sqrt())
    }
}

/// Thresholded Pearson-correlation network over the rows of an interaction
/// matrix. For a pair (i, j) the correlation is taken over the two rows
/// with positions i and j excluded from both, so an edge never feeds on the
/// pair's direct interaction. Edges carry the correlation as weight and
/// exist only for positive correlations at or above `theta`. Rows with zero
/// variance keep their node but get no edges.
pub fn correlation_network(
    labels: &[String],
    matrix: &[Vec<f64>],
    theta: f64,
) -> Result<WeightedGraph, NetError> {
    if !(-1.0..=1.0).contains(&theta) {
        return Err(NetError::InvalidTheta(theta));
    }
    let n = matrix.len();
    if n < 3 {
        return Err(NetError::InvalidMatrix(format!(
            "need at least 3 rows, got {n}"
        )));
    }
    if matrix.iter().any(|row| row.len() != n) {
        return Err(NetError::InvalidMatrix("matrix is not square".into()));
    }
    if labels.len() != n {
        return Err(NetError::InvalidMatrix(format!(
            "{} labels for {n} rows",
            labels.len()
        )));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let x: Vec<f64> = (0..n)
                .filter(|&k| k != i && k != j)
                .map(|k| matrix[i][k])
                .collect();
            let y: Vec<f64> = (0..n)
                .filter(|&k| k != i && k != j)
                .map(|k| matrix[j][k])
                .collect();
            if let Some(r) = pearson(&x, &y) {
                if r >= theta && r > 0.0 {
                    edges.push((i, j, r));
                }
            }
        }
    }
    WeightedGraph::new(labels.to_vec(), edges)
}

/// Per-period polarization: builds the correlation network of every labelled
/// matrix, detects communities, and reports the modularity.
pub fn modularity_series(
    items: &[(String, Vec<Vec<f64>>)],
    theta: f64,
    method: CommunityMethod,
    seed: u64,
) -> Result<Vec<(String, f64)>, NetError> {
    items
        .iter()
        .map(|(label, matrix)| {
            let node_labels: Vec<String> = (0..matrix.len()).map(|i| i.to_string()).collect();
            let graph = correlation_network(&node_labels, matrix, theta)?;
            let partition = method.detect(&graph, seed)?;
            let q = modularity(&graph, &partition)?;
            Ok((label.clone(), q))
        })
        .collect()
}

#[cfg(test)]
pub(crate) mod test_graphs {
    use super::WeightedGraph;

    /// Two triangles {0,1,2} and {3,4,5} joined by the bridge 2-3.
    pub fn two_triangle_bridge() -> WeightedGraph {
        WeightedGraph::from_unweighted(
            6,
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)],
        )
        .unwrap()
    }

    /// Two disjoint 5-cliques on nodes 0..5 and 5..10.
    pub fn two_five_cliques() -> WeightedGraph {
        let mut edges = Vec::new();
        for base in [0, 5] {
            for a in 0..5 {
                for b in (a + 1)..5 {
                    edges.push((base + a, base + b));
                }
            }
        }
        WeightedGraph::from_unweighted(10, &edges).unwrap()
    }

    pub fn complete_graph(n: usize) -> WeightedGraph {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                edges.push((a, b));
            }
        }
        WeightedGraph::from_unweighted(n, &edges).unwrap()
    }

    pub fn path_graph(n: usize) -> WeightedGraph {
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        WeightedGraph::from_unweighted(n, &edges).unwrap()
    }
}
