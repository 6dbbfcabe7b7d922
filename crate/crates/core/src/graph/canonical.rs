use std::fmt;

use super::RootedSubgraph;

/// Canonical form of a rooted subgraph. Equal keys mean there is an
/// isomorphism mapping one root edge onto the other (either orientation).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

struct Search<'a> {
    adjacency: Vec<&'a [usize]>,
    edges: &'a [(usize, usize)],
    root: (usize, usize),
    best: Option<Vec<u8>>,
}

/// Rank-compresses per-vertex signatures into colors `0..k`, ordered by
/// signature so the result does not depend on vertex numbering.
fn rank<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = sigs.to_vec();
    sorted.sort();
    sorted.dedup();
    sigs.iter()
        .map(|s| sorted.binary_search(s).expect("present"))
        .collect()
}

fn n_colors(colors: &[usize]) -> usize {
    colors.iter().max().map_or(0, |&c| c + 1)
}

impl Search<'_> {
    /// Colour refinement until the partition is equitable.
    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        let mut k = n_colors(&colors);
        loop {
            let sigs: Vec<(usize, Vec<usize>)> = self
                .adjacency
                .iter()
                .enumerate()
                .map(|(v, adj)| {
                    let mut nb: Vec<usize> = adj.iter().map(|&u| colors[u]).collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            let next = rank(&sigs);
            let next_k = n_colors(&next);
            if next_k == k {
                return next;
            }
            k = next_k;
            colors = next;
        }
    }

    fn encode(&self, labels: &[usize]) -> Vec<u8> {
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (labels[a], labels[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        let (r0, r1) = (labels[self.root.0], labels[self.root.1]);
        let mut out = Vec::with_capacity(8 + 4 * edges.len());
        let mut push = |x: usize| out.extend_from_slice(&(x as u16).to_be_bytes());
        push(labels.len());
        push(edges.len());
        push(r0.min(r1));
        push(r0.max(r1));
        for (a, b) in edges {
            push(a);
            push(b);
        }
        out
    }

    fn explore(&mut self, colors: Vec<usize>) {
        let colors = self.refine(colors);
        let n = colors.len();
        let k = n_colors(&colors);
        if k == n {
            let code = self.encode(&colors);
            if self.best.as_ref().is_none_or(|b| code < *b) {
                self.best = Some(code);
            }
            return;
        }
        let mut sizes = vec![0usize; k];
        for &c in &colors {
            sizes[c] += 1;
        }
        let target = (0..k).find(|&c| sizes[c] > 1).expect("non-discrete partition");
        for v in 0..n {
            if colors[v] != target {
                continue;
            }
            let sigs: Vec<(usize, bool)> = (0..n).map(|u| (colors[u], u != v)).collect();
            self.explore(rank(&sigs));
        }
    }
}

/// Canonical labeling by individualization and refinement: the key is the
/// smallest edge encoding over all leaves of the search tree, with the two
/// root endpoints forced into the first cell.
pub fn canonical_key(subgraph: &RootedSubgraph) -> CanonicalKey {
    let g = subgraph.graph();
    let root = subgraph.root();
    let mut search = Search {
        adjacency: (0..g.n_vertices()).map(|v| g.neighbors(v)).collect(),
        edges: g.edges(),
        root,
        best: None,
    };
    let initial: Vec<usize> = (0..g.n_vertices())
        .map(|v| usize::from(v != root.0 && v != root.1))
        .collect();
    search.explore(initial);
    CanonicalKey(search.best.expect("at least one leaf"))
}
