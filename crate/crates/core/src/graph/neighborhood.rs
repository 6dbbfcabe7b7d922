use std::collections::VecDeque;

use super::{normalize, Edge, Graph};
use crate::error::{Error, Result};

/// A small graph with a distinguished root edge, together with the level `p`
/// it was grown for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedSubgraph {
    graph: Graph,
    root: Edge,
    p: usize,
    origin: Vec<usize>,
}

impl RootedSubgraph {
    /// Wraps an explicit graph. Every vertex must lie within `p` steps of an
    /// endpoint of `root`.
    pub fn new(graph: Graph, root: (usize, usize), p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidArgument("level p must be at least 1".into()));
        }
        if !graph.has_edge(root.0, root.1) {
            return Err(Error::EdgeNotInGraph(root.0, root.1));
        }
        let dist = distances_from_edge(&graph, root);
        if dist.iter().any(|d| d.is_none_or(|d| d > p)) {
            return Err(Error::InvalidGraph(format!(
                "vertices farther than {p} from the root edge"
            )));
        }
        let origin = (0..graph.n_vertices()).collect();
        Ok(RootedSubgraph {
            graph,
            root: normalize(root.0, root.1),
            p,
            origin,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn root(&self) -> Edge {
        self.root
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n_vertices(&self) -> usize {
        self.graph.n_vertices()
    }

    /// For subgraphs cut out of a larger graph, `origin()[i]` is the source
    /// vertex of local vertex `i`.
    pub fn origin(&self) -> &[usize] {
        &self.origin
    }
}

/// BFS distance from the nearer endpoint of `root`; `None` if unreachable.
fn distances_from_edge(graph: &Graph, root: Edge) -> Vec<Option<usize>> {
    let mut dist = vec![None; graph.n_vertices()];
    let mut queue = VecDeque::new();
    for v in [root.0, root.1] {
        dist[v] = Some(0);
        queue.push_back(v);
    }
    while let Some(v) = queue.pop_front() {
        let d = dist[v].unwrap();
        for &u in graph.neighbors(v) {
            if dist[u].is_none() {
                dist[u] = Some(d + 1);
                queue.push_back(u);
            }
        }
    }
    dist
}

/// The subgraph an edge's level-`p` cost term can see: every edge with an
/// endpoint at distance at most `p - 1` from the root edge, plus the vertices
/// on those edges. Edges joining two vertices at distance exactly `p` are
/// left out.
///
/// Local vertices are numbered in BFS order, so the root is always `(0, 1)`.
pub fn edge_neighborhood(graph: &Graph, edge: (usize, usize), p: usize) -> Result<RootedSubgraph> {
    if p == 0 {
        return Err(Error::InvalidArgument("level p must be at least 1".into()));
    }
    let (j, k) = edge;
    if j >= graph.n_vertices() || k >= graph.n_vertices() || !graph.has_edge(j, k) {
        return Err(Error::EdgeNotInGraph(j, k));
    }

    let mut dist: Vec<Option<usize>> = vec![None; graph.n_vertices()];
    let mut order = vec![j, k];
    dist[j] = Some(0);
    dist[k] = Some(0);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        let d = dist[v].unwrap();
        if d == p {
            continue;
        }
        for &u in graph.neighbors(v) {
            if dist[u].is_none() {
                dist[u] = Some(d + 1);
                order.push(u);
            }
        }
    }

    let mut local = vec![usize::MAX; graph.n_vertices()];
    for (i, &v) in order.iter().enumerate() {
        local[v] = i;
    }
    let mut edges: Vec<Edge> = graph
        .edges()
        .iter()
        .filter(|&&(a, b)| match (dist[a], dist[b]) {
            (Some(da), Some(db)) => da.min(db) < p,
            _ => false,
        })
        .map(|&(a, b)| normalize(local[a], local[b]))
        .collect();
    edges.sort_unstable();

    Ok(RootedSubgraph {
        graph: Graph::new(order.len(), edges)?,
        root: (0, 1),
        p,
        origin: order,
    })
}

/// Largest number of vertices an edge neighborhood can have in a graph of
/// maximum degree `degree`: the size of the rooted tree.
pub fn q_tree(degree: usize, p: usize) -> Result<usize> {
    if degree < 2 {
        return Err(Error::InvalidArgument(format!("degree must be at least 2, got {degree}")));
    }
    if p == 0 {
        return Err(Error::InvalidArgument("level p must be at least 1".into()));
    }
    if degree == 2 {
        return Ok(2 * p + 2);
    }
    let branch = degree - 1;
    let pow = u32::try_from(p + 1)
        .ok()
        .and_then(|e| branch.checked_pow(e))
        .ok_or_else(|| Error::InvalidArgument("tree size overflows".into()))?;
    Ok(2 * ((pow - 1) / (branch - 1)))
}
