//! Local structures of 3-regular graphs that force uncut edges.
//!
//! A *crossed square* is a 4-cycle with one diagonal whose two leaving edges
//! are distinct. An *isolated triangle* is a 3-cycle whose three leaving
//! edges end on three distinct vertices. Neither is counted inside a `K4`
//! component, where the leaving edges of the square coincide.

use super::Graph;
use crate::error::{Error, Result};

fn require_cubic(graph: &Graph) -> Result<()> {
    if graph.is_regular(3) {
        Ok(())
    } else {
        Err(Error::NotRegular { degree: 3 })
    }
}

fn common_neighbors(graph: &Graph, a: usize, b: usize) -> Vec<usize> {
    graph
        .neighbors(a)
        .iter()
        .copied()
        .filter(|&x| graph.has_edge(x, b))
        .collect()
}

/// True for the complete graph on four vertices.
pub fn is_k4(graph: &Graph) -> bool {
    graph.n_vertices() == 4 && graph.is_regular(3)
}

/// Vertex sets `[a, c, b, d]` of crossed squares, `(a, c)` being the diagonal.
fn crossed_squares(graph: &Graph) -> Vec<[usize; 4]> {
    graph
        .edges()
        .iter()
        .filter_map(|&(a, c)| match common_neighbors(graph, a, c)[..] {
            [b, d] if !graph.has_edge(b, d) => Some([a, c, b, d]),
            _ => None,
        })
        .collect()
}

/// Number of crossed squares in a 3-regular graph.
pub fn count_crossed_squares(graph: &Graph) -> Result<usize> {
    require_cubic(graph)?;
    Ok(crossed_squares(graph).len())
}

/// Number of isolated triangles in a 3-regular graph. Triangles touching a
/// crossed square are never isolated.
pub fn count_isolated_triangles(graph: &Graph) -> Result<usize> {
    require_cubic(graph)?;
    let mut in_square = vec![false; graph.n_vertices()];
    for sq in crossed_squares(graph) {
        for v in sq {
            in_square[v] = true;
        }
    }
    let mut used = vec![false; graph.n_vertices()];
    let mut count = 0;
    for a in 0..graph.n_vertices() {
        for &b in graph.neighbors(a).iter().filter(|&&b| b > a) {
            for &c in graph.neighbors(b).iter().filter(|&&c| c > b) {
                if !graph.has_edge(a, c) {
                    continue;
                }
                let tri = [a, b, c];
                let leaving: Vec<usize> = tri
                    .iter()
                    .map(|&v| {
                        *graph
                            .neighbors(v)
                            .iter()
                            .find(|u| !tri.contains(u))
                            .expect("cubic vertex has a third neighbor")
                    })
                    .collect();
                let distinct = leaving[0] != leaving[1]
                    && leaving[1] != leaving[2]
                    && leaving[0] != leaving[2];
                let disjoint = tri.iter().all(|&v| !in_square[v] && !used[v]);
                if distinct && disjoint {
                    for v in tri {
                        used[v] = true;
                    }
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}
