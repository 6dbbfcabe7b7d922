//! Shared fixtures: cubic graphs with known structure counts, random sparse
//! graphs and a dense matrix-exponential oracle.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use qaoa_core::graph::Graph;
use qaoa_core::mis_variant::MixerMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn k33() -> Graph {
    Graph::new(6, (0..3).flat_map(|a| (3..6).map(move |b| (a, b)))).unwrap()
}

pub fn k4() -> Graph {
    Graph::new(4, (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b)))).unwrap()
}

pub fn cube() -> Graph {
    let edges = (0..8usize).flat_map(|v| (0..3).map(move |b| (v, v ^ (1 << b)))).filter(|(a, b)| a < b);
    Graph::new(8, edges).unwrap()
}

/// Generalized Petersen graph GP(k, s): outer k-cycle, spokes, inner star polygon.
pub fn generalized_petersen(k: usize, s: usize) -> Graph {
    let outer = (0..k).map(move |i| (i, (i + 1) % k));
    let spokes = (0..k).map(move |i| (i, i + k));
    let inner = (0..k).map(move |i| (k + i, k + (i + s) % k));
    Graph::new(2 * k, outer.chain(spokes).chain(inner)).unwrap()
}

pub fn petersen() -> Graph {
    generalized_petersen(5, 2)
}

pub fn heawood() -> Graph {
    let cycle = (0..14).map(|i| (i, (i + 1) % 14));
    let chords = (0..14).step_by(2).map(|i| (i, (i + 5) % 14));
    Graph::new(14, cycle.chain(chords)).unwrap()
}

pub fn prism() -> Graph {
    Graph::new(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]).unwrap()
}

/// Replaces each listed vertex by a triangle whose corners take over its
/// three edges.
pub fn truncate(g: &Graph, vertices: &[usize]) -> Graph {
    let mut n = g.n_vertices();
    // corner[v][i] is the vertex that now carries v's i-th edge
    let mut corner: Vec<Vec<usize>> = (0..n).map(|v| vec![v; g.degree(v)]).collect();
    let mut edges = Vec::new();
    for &v in vertices {
        assert_eq!(g.degree(v), 3);
        let c = [v, n, n + 1];
        n += 2;
        edges.extend([(c[0], c[1]), (c[1], c[2]), (c[0], c[2])]);
        corner[v] = c.to_vec();
    }
    for &(a, b) in g.edges() {
        let ia = g.neighbors(a).iter().position(|&x| x == b).unwrap();
        let ib = g.neighbors(b).iter().position(|&x| x == a).unwrap();
        edges.push((corner[a][ia], corner[b][ib]));
    }
    Graph::new(n, edges).unwrap()
}

/// Replaces edge `(u, v)` by `u - b`, `d - v` with a crossed square on
/// `a, b, c, d` (cycle a-b-c-d plus diagonal a-c).
pub fn insert_crossed_square(g: &Graph, edge: (usize, usize)) -> Graph {
    let n = g.n_vertices();
    let (a, b, c, d) = (n, n + 1, n + 2, n + 3);
    let mut edges: Vec<(usize, usize)> = g.edges().iter().copied().filter(|&e| e != edge).collect();
    assert!(edges.len() + 1 == g.n_edges(), "edge not in graph");
    edges.extend([(a, b), (b, c), (c, d), (d, a), (a, c), (edge.0, b), (d, edge.1)]);
    Graph::new(n + 4, edges).unwrap()
}

pub struct Instance {
    pub name: String,
    pub graph: Graph,
    pub s: usize,
    pub t: usize,
}

fn inst(name: impl Into<String>, graph: Graph, s: usize, t: usize) -> Instance {
    Instance {
        name: name.into(),
        graph,
        s,
        t,
    }
}

/// Cubic graphs built from triangle-free bases, so every triangle is one we
/// inserted by truncation and every crossed square one we inserted on an
/// edge. Edges for squares are taken from the base graph, which truncation
/// keeps under the same endpoints.
pub fn cubic_instances(max_n: usize) -> Vec<Instance> {
    let bases = [
        ("K33", k33()),
        ("cube", cube()),
        ("petersen", petersen()),
        ("heawood", heawood()),
        ("mobius-kantor", generalized_petersen(8, 3)),
    ];
    let mut out = vec![inst("prism", prism(), 0, 2)];
    for (name, base) in &bases {
        let n = base.n_vertices();
        for k in 0..=n {
            let verts: Vec<usize> = (0..k).collect();
            out.push(inst(format!("{name}+{k}tri"), truncate(base, &verts), 0, k));
        }
        for k in 1..=3 {
            // squares on edges of a matching-ish spread of base edges
            let mut g = base.clone();
            let picks: Vec<(usize, usize)> = base.edges().iter().copied().step_by(3).take(k).collect();
            for &e in &picks {
                g = insert_crossed_square(&g, e);
            }
            out.push(inst(format!("{name}+{k}sq"), g.clone(), k, 0));
            // truncating a vertex untouched by the chosen edges keeps both counts
            if let Some(v) = (0..n).find(|v| picks.iter().all(|&(a, b)| a != *v && b != *v)) {
                out.push(inst(format!("{name}+{k}sq+1tri"), truncate(&g, &[v]), k, 1));
            }
        }
    }
    out.retain(|i| i.graph.n_vertices() <= max_n);
    out
}

/// Random simple graph with maximum degree `max_degree`: shuffled candidate
/// pairs, each kept with probability `density` when both ends have room.
pub fn random_sparse_graph(n: usize, max_degree: usize, density: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    pairs.shuffle(&mut rng);
    let mut deg = vec![0; n];
    let mut edges = Vec::new();
    for (a, b) in pairs {
        if deg[a] < max_degree && deg[b] < max_degree && rng.gen_bool(density) {
            deg[a] += 1;
            deg[b] += 1;
            edges.push((a, b));
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Same as [`random_sparse_graph`] but with at least one edge.
pub fn random_graph_with_edges(n: usize, max_degree: usize, seed: u64) -> Graph {
    (0..)
        .map(|k| random_sparse_graph(n, max_degree, 0.6, seed.wrapping_mul(1000).wrapping_add(k)))
        .find(|g| g.n_edges() > 0)
        .unwrap()
}

pub fn dense_mixer(mixer: &MixerMatrix) -> DMatrix<f64> {
    let d = mixer.dim();
    DMatrix::from_fn(d, d, |i, j| f64::from(mixer.entry(i, j)))
}

/// `e^{-ibB} x` through the spectral decomposition of the dense matrix.
pub fn dense_exp(b_matrix: &DMatrix<f64>, b: f64, x: &[Complex64]) -> Vec<Complex64> {
    let eig = SymmetricEigen::new(b_matrix.clone());
    let d = x.len();
    let v = &eig.eigenvectors;
    // coefficients in the eigenbasis, phased, then mapped back
    let coeff: Vec<Complex64> = (0..d)
        .map(|k| {
            let c: Complex64 = (0..d).map(|i| x[i] * v[(i, k)]).sum();
            c * Complex64::from_polar(1.0, -b * eig.eigenvalues[k])
        })
        .collect();
    (0..d).map(|i| (0..d).map(|k| coeff[k] * v[(i, k)]).sum()).collect()
}

/// Maximum independent set size by checking every subset.
pub fn brute_force_alpha(g: &Graph) -> usize {
    let n = g.n_vertices();
    (0u64..1 << n)
        .filter(|z| g.edges().iter().all(|&(a, b)| (z >> a) & (z >> b) & 1 == 0))
        .map(|z| z.count_ones() as usize)
        .max()
        .unwrap()
}

/// Maximum cut by checking every bipartition.
pub fn brute_force_cut(g: &Graph) -> usize {
    let n = g.n_vertices();
    (0u64..1 << n)
        .map(|z| g.edges().iter().filter(|&&(a, b)| (z >> a ^ z >> b) & 1 == 1).count())
        .max()
        .unwrap()
}
