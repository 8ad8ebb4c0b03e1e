//! Compact undirected simple graph with the degree and traversal machinery
//! the samplers and connectivity tests build on.
//!
//! Nodes are dense integers `0..n`. Adjacency is stored as sorted neighbor
//! lists, which gives `O(deg)` iteration and binary-search adjacency queries.
//! Graphs are immutable once a sampler hands them out and safe to share
//! read-only across parallel workers.

use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Undirected simple graph on nodes `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Graph with `n` nodes and no edges.
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list. Duplicate edges collapse; panics on
    /// self-loops or out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!(u != v, "self-loop ({u},{u}) rejected");
            assert!(u < n && v < n, "edge ({u},{v}) out of range for n={n}");
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Graph { adj }
    }

    /// Number of nodes.
    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Inserts the undirected edge `(u, v)`. Re-adding an existing edge is a
    /// no-op; self-loops and out-of-range labels are rejected.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop { node: u });
        }
        let n = self.node_count();
        if u >= n || v >= n {
            return Err(GraphError::NodeOutOfRange {
                node: u.max(v),
                node_count: n,
            });
        }
        if let Err(pos) = self.adj[u].binary_search(&v) {
            self.adj[u].insert(pos, v);
            let pos = self.adj[v].binary_search(&u).unwrap_err();
            self.adj[v].insert(pos, u);
        }
        Ok(())
    }

    /// Sorted neighbors of `u`.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    /// Degree of `u`.
    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// Adjacency query by binary search.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Exact degree histogram together with the minimum degree.
    pub fn degree_spectrum(&self) -> DegreeSpectrum {
        let mut counts = BTreeMap::new();
        for list in &self.adj {
            *counts.entry(list.len()).or_insert(0usize) += 1;
        }
        let min_degree = counts.keys().next().copied().unwrap_or(0);
        DegreeSpectrum { counts, min_degree }
    }

    /// Smallest degree, 0 for the empty graph.
    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// True iff every node is reachable from node 0. Graphs with fewer than
    /// two nodes are connected by convention.
    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n < 2 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut visited = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    visited += 1;
                    stack.push(v);
                }
            }
        }
        visited == n
    }

    /// Debug dump as sorted `"u v"` lines, one edge per line.
    pub fn edge_list_text(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Degree histogram of a graph: how many nodes have each degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSpectrum {
    /// degree -> number of nodes with exactly that degree (absent = 0)
    pub counts: BTreeMap<usize, usize>,
    /// smallest degree present, 0 for the empty graph
    pub min_degree: usize,
}

impl DegreeSpectrum {
    /// Number of nodes with degree exactly `h`.
    pub fn count(&self, h: usize) -> usize {
        self.counts.get(&h).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    SelfLoop { node: usize },
    NodeOutOfRange { node: usize, node_count: usize },
}

impl std::fmt::Display for GraphError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphError::SelfLoop { node } => write!(f, "self-loop at node {node} rejected"),
            GraphError::NodeOutOfRange { node, node_count } => {
                write!(f, "node {node} out of range for graph with {node_count} nodes")
            }
        }
    }
}

impl std::error::Error for GraphError {}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1)))
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    #[test]
    fn new_graph_has_isolated_nodes() {
        let g = Graph::new(0);
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.edge_count(), 0);

        let g = Graph::new(3);
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.min_degree(), 0);
    }

    #[test]
    fn add_edge_counts_degrees() {
        let mut g = Graph::new(5);
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        let degrees: Vec<usize> = (0..5).map(|u| g.degree(u)).collect();
        assert_eq!(degrees, vec![1, 2, 1, 0, 0]);
    }

    #[test]
    fn add_edge_is_idempotent_and_symmetric() {
        let mut g = Graph::new(3);
        g.add_edge(0, 1).unwrap();
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 0).unwrap();
        assert_eq!(g.degree(0), 1);
        assert!(g.neighbors(1).contains(&0));
        g.add_edge(2, 0).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(0, 2) && g.has_edge(2, 0));
    }

    #[test]
    fn add_edge_rejects_bad_input() {
        let mut g = Graph::new(3);
        assert_eq!(g.add_edge(1, 1), Err(GraphError::SelfLoop { node: 1 }));
        assert_eq!(
            g.add_edge(0, 3),
            Err(GraphError::NodeOutOfRange {
                node: 3,
                node_count: 3
            })
        );
    }

    #[test]
    fn degree_spectrum_examples() {
        let spectrum = complete(4).degree_spectrum();
        assert_eq!(spectrum.counts, BTreeMap::from([(3, 4)]));
        assert_eq!(spectrum.min_degree, 3);

        let spectrum = path(3).degree_spectrum();
        assert_eq!(spectrum.counts, BTreeMap::from([(1, 2), (2, 1)]));
        assert_eq!(spectrum.min_degree, 1);

        let spectrum = Graph::new(10).degree_spectrum();
        assert_eq!(spectrum.counts, BTreeMap::from([(0, 10)]));
        assert_eq!(spectrum.min_degree, 0);
        assert_eq!(spectrum.count(1), 0);
    }

    #[test]
    fn connectivity_examples() {
        assert!(path(3).is_connected());
        assert!(!Graph::from_edges(4, [(0, 1), (2, 3)]).is_connected());
        assert!(Graph::new(1).is_connected());
        assert!(Graph::new(0).is_connected());
    }

    #[test]
    fn edge_list_text_is_sorted() {
        let g = Graph::from_edges(4, [(2, 3), (0, 2), (0, 1)]);
        assert_eq!(g.edge_list_text(), "0 1\n0 2\n2 3\n");
    }
}
