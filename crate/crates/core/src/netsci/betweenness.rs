//! Girvan-Newman community detection by iterative edge removal.
//!
//! The edge with the highest shortest-path betweenness (unweighted paths,
//! Brandes accumulation) is removed, the connected components are read off
//! as a candidate partition, and the candidate scoring the highest
//! modularity on the original graph wins. Deterministic: betweenness ties
//! break on the lexicographically smallest endpoint pair.

use super::{modularity, NetError, Partition, WeightedGraph};
use std::collections::VecDeque;

/// Edges still present in the working copy, as index pairs into the node
/// set (u < v).
type EdgeList = Vec<(usize, usize)>;

fn components(n: usize, edges: &EdgeList) -> Partition {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut labels = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        let mut queue = VecDeque::from([start]);
        labels[start] = next;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if labels[v] == usize::MAX {
                    labels[v] = next;
                    queue.push_back(v);
                }
            }
        }
        next += 1;
    }
    Partition::from_labels(labels)
}

/// Brandes betweenness accumulation for every remaining edge, counting each
/// unordered node pair once.
fn edge_betweenness(n: usize, edges: &EdgeList) -> Vec<f64> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n]; // (neighbor, edge idx)
    for (idx, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, idx));
        adj[v].push((u, idx));
    }
    let mut centrality = vec![0.0f64; edges.len()];

    for source in 0..n {
        // BFS shortest-path DAG
        let mut sigma = vec![0.0f64; n];
        let mut dist = vec![-1i64; n];
        let mut preds: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let mut order = Vec::with_capacity(n);
        sigma[source] = 1.0;
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &(v, edge) in &adj[u] {
                if dist[v] < 0 {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
                if dist[v] == dist[u] + 1 {
                    sigma[v] += sigma[u];
                    preds[v].push((u, edge));
                }
            }
        }
        // dependency accumulation in reverse BFS order
        let mut delta = vec![0.0f64; n];
        for &w in order.iter().rev() {
            for &(u, edge) in &preds[w] {
                let contribution = sigma[u] / sigma[w] * (1.0 + delta[w]);
                centrality[edge] += contribution;
                delta[u] += contribution;
            }
        }
    }
    // each unordered pair was counted from both endpoints
    for c in centrality.iter_mut() {
        *c /= 2.0;
    }
    centrality
}

/// Runs the full removal sequence and returns the component partition with
/// maximal modularity on the original graph.
pub fn edge_betweenness_communities(graph: &WeightedGraph) -> Result<Partition, NetError> {
    if graph.node_count() == 0 || graph.edge_count() == 0 {
        return Err(NetError::EmptyGraph);
    }
    let n = graph.node_count();
    let mut remaining: EdgeList = graph.edges().iter().map(|e| (e.u, e.v)).collect();

    let mut best = components(n, &remaining);
    let mut best_q = modularity(graph, &best)?;

    while !remaining.is_empty() {
        let centrality = edge_betweenness(n, &remaining);
        let max = centrality.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let victim = remaining
            .iter()
            .zip(&centrality)
            .filter(|(_, &c)| c >= max - 1e-9)
            .map(|(&e, _)| e)
            .min()
            .expect("non-empty edge list");
        remaining.retain(|&e| e != victim);

        let candidate = components(n, &remaining);
        let q = modularity(graph, &candidate)?;
        if q > best_q {
            best_q = q;
            best = candidate;
        }
    }
    Ok(best.normalized())
}
