use std::collections::BTreeMap;

use serde::Serialize;

use super::{canonical_key, edge_neighborhood, CanonicalKey, Graph, RootedSubgraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct DecompositionEntry {
    pub key: CanonicalKey,
    pub representative: RootedSubgraph,
    /// Number of edges of the source graph whose neighborhood has this type.
    pub weight: usize,
}

/// Edge neighborhoods of a graph grouped by rooted isomorphism type.
/// Entries are ordered by key.
#[derive(Debug, Clone)]
pub struct SubgraphDecomposition {
    p: usize,
    entries: Vec<DecompositionEntry>,
}

impl SubgraphDecomposition {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn entries(&self) -> &[DecompositionEntry] {
        &self.entries
    }

    /// Sum of weights, equal to the edge count of the source graph.
    pub fn total_weight(&self) -> usize {
        self.entries.iter().map(|e| e.weight).sum()
    }

    pub fn max_subgraph_vertices(&self) -> usize {
        self.entries
            .iter()
            .map(|e| e.representative.n_vertices())
            .max()
            .unwrap_or(0)
    }

    pub fn get(&self, key: &CanonicalKey) -> Option<&DecompositionEntry> {
        self.entries.iter().find(|e| &e.key == key)
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct EntryJson {
            key: String,
            weight: usize,
            vertices: usize,
            edges: Vec<[usize; 2]>,
            root: [usize; 2],
        }
        #[derive(Serialize)]
        struct DecompositionJson {
            p: usize,
            entries: Vec<EntryJson>,
        }
        let doc = DecompositionJson {
            p: self.p,
            entries: self
                .entries
                .iter()
                .map(|e| EntryJson {
                    key: e.key.to_hex(),
                    weight: e.weight,
                    vertices: e.representative.n_vertices(),
                    edges: e.representative.graph().edges().iter().map(|&(a, b)| [a, b]).collect(),
                    root: [e.representative.root().0, e.representative.root().1],
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("plain data serializes")
    }
}

/// Groups every edge's level-`p` neighborhood by canonical key. The first
/// edge (in edge order) of each type supplies the representative.
pub fn decompose(graph: &Graph, p: usize) -> Result<SubgraphDecomposition> {
    if p == 0 {
        return Err(Error::InvalidArgument("level p must be at least 1".into()));
    }
    let mut groups: BTreeMap<CanonicalKey, (RootedSubgraph, usize)> = BTreeMap::new();
    for &edge in graph.edges() {
        let sub = edge_neighborhood(graph, edge, p)?;
        let key = canonical_key(&sub);
        groups.entry(key).or_insert((sub, 0)).1 += 1;
    }
    Ok(SubgraphDecomposition {
        p,
        entries: groups
            .into_iter()
            .map(|(key, (representative, weight))| DecompositionEntry {
                key,
                representative,
                weight,
            })
            .collect(),
    })
}
