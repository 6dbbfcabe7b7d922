//! Undirected simple graphs and the edge-neighborhood machinery used to split
//! a MaxCut expectation into small rooted subgraph contributions.

mod canonical;
mod decompose;
mod generate;
mod io;
mod neighborhood;
mod structures;

pub use canonical::{canonical_key, CanonicalKey};
pub use decompose::{decompose, DecompositionEntry, SubgraphDecomposition};
pub use generate::{complete_graph, edgeless_graph, path_graph, random_regular_graph, ring_graph};
pub use io::parse_graph;
pub use neighborhood::{edge_neighborhood, q_tree, RootedSubgraph};
pub use structures::{count_crossed_squares, count_isolated_triangles, is_k4};

use std::collections::HashSet;

use crate::error::{Error, Result};

/// An undirected edge stored with the smaller endpoint first.
pub type Edge = (usize, usize);

pub(crate) fn normalize(a: usize, b: usize) -> Edge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Undirected simple graph on vertices `0..n`.
///
/// Edges keep the order they were supplied in; each is stored normalized
/// as `(min, max)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
    edge_set: HashSet<Edge>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, parallel edges and out-of-range
    /// endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut graph = Graph {
            n,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
            edge_set: HashSet::new(),
        };
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) out of range for {n} vertices"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {a}")));
            }
            if !graph.insert(a, b) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({a}, {b})")));
            }
        }
        Ok(graph)
    }

    /// Inserts a validated edge; returns false if it was already present.
    fn insert(&mut self, a: usize, b: usize) -> bool {
        let e = normalize(a, b);
        if !self.edge_set.insert(e) {
            return false;
        }
        self.edges.push(e);
        self.adjacency[a].push(b);
        self.adjacency[b].push(a);
        true
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edge_set.contains(&normalize(a, b))
    }

    /// True when every vertex has exactly `degree` neighbors.
    pub fn is_regular(&self, degree: usize) -> bool {
        self.adjacency.iter().all(|adj| adj.len() == degree)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n
    }

    /// Returns the graph with vertex `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: perm.len(),
            });
        }
        Graph::new(self.n, self.edges.iter().map(|&(a, b)| (perm[a], perm[b])))
    }

    /// Number of edges whose endpoints fall on different sides of `z`
    /// (bit `j` of `z` is the side of vertex `j`).
    pub fn cut_value(&self, z: u64) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| ((z >> a) ^ (z >> b)) & 1 == 1)
            .count()
    }
}
