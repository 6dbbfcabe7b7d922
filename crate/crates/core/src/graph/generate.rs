use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::error::{Error, Result};

const PAIRING_ATTEMPTS: usize = 10_000;

/// The n-cycle with edges `(j, j + 1 mod n)`.
pub fn ring_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("ring needs at least 3 vertices, got {n}")));
    }
    Graph::new(n, (0..n).map(|j| (j, (j + 1) % n)))
}

pub fn path_graph(n: usize) -> Result<Graph> {
    Graph::new(n, (1..n).map(|j| (j - 1, j)))
}

pub fn complete_graph(n: usize) -> Result<Graph> {
    Graph::new(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
}

pub fn edgeless_graph(n: usize) -> Graph {
    Graph::new(n, []).expect("edgeless graph is valid")
}

/// Samples a simple `degree`-regular graph with the pairing model: stubs are
/// shuffled and paired, and the whole pairing is redrawn whenever it produces
/// a loop or a parallel edge. Deterministic for a fixed seed.
pub fn random_regular_graph(n: usize, degree: usize, seed: u64) -> Result<Graph> {
    if (n * degree) % 2 == 1 {
        return Err(Error::Infeasible(format!(
            "no {degree}-regular graph on {n} vertices (n * degree is odd)"
        )));
    }
    if degree >= n && !(degree == 0 && n == 0) {
        return Err(Error::Infeasible(format!(
            "degree {degree} must be smaller than the vertex count {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, degree)).collect();
    'attempt: for _ in 0..PAIRING_ATTEMPTS {
        stubs.shuffle(&mut rng);
        let mut graph = Graph::new(n, [])?;
        for pair in stubs.chunks_exact(2) {
            if pair[0] == pair[1] || !graph.insert(pair[0], pair[1]) {
                continue 'attempt;
            }
        }
        return Ok(graph);
    }
    Err(Error::GenerationFailed {
        attempts: PAIRING_ATTEMPTS,
    })
}
