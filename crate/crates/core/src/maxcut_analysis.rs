//! Approximation-ratio analysis for MaxCut on 2- and 3-regular graphs.
//!
//! On the ring every edge sees the same path segment, so `M_p / n` is the
//! maximum of a single subgraph term. On 3-regular graphs at p = 1 an edge
//! lies in two triangles (`g4`, the diagonal of a crossed square), in one
//! (`g5`) or in none (`g6`, the six-vertex tree), giving
//!
//! ```text
//! F_1 = S·f_g4 + (4S + 3T)·f_g5 + (3n/2 − 5S − 3T)·f_g6
//! ```
//!
//! for `S` crossed squares and `T` isolated triangles. Every such structure
//! leaves at least one edge uncut, so `3n/2 − S − T` bounds the maximum cut
//! and `M_1 / (3n/2 − S − T)` bounds the approximation ratio from below.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    count_crossed_squares, count_isolated_triangles, decompose, is_k4, q_tree, ring_graph, Graph,
    RootedSubgraph,
};
use crate::optimizer::{
    angle_axes, maximize_fp, pattern_search, Axis, OptimizationResult,
    OptimizerConfig,
};
use crate::qaoa::{DecomposedObjective, FullObjective, SubgraphKernel};
use crate::statevector::{AngleSchedule, CostDiagonal, DEFAULT_MAX_QUBITS};

const FEASIBILITY_SLACK: f64 = 1e-12;

/// Crossed-square diagonal: root `(0, 1)`, both endpoints joined to 2 and 3.
pub fn crossed_square_type() -> RootedSubgraph {
    let g = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).expect("literal graph");
    RootedSubgraph::new(g, (0, 1), 1).expect("valid fixture")
}

/// Triangle edge: root `(0, 1)`, common neighbor 2, legs 0–3 and 1–4.
pub fn triangle_type() -> RootedSubgraph {
    let g = Graph::new(5, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 4)]).expect("literal graph");
    RootedSubgraph::new(g, (0, 1), 1).expect("valid fixture")
}

/// The rooted tree of a `degree`-regular graph with no short cycles: root
/// `(0, 1)`, vertices numbered breadth first. It has `q_tree(degree, p)`
/// vertices; `regular_tree_type(3, 1)` is the six-vertex type and
/// `regular_tree_type(3, 2)` the fourteen-vertex one.
pub fn regular_tree_type(degree: usize, p: usize) -> Result<RootedSubgraph> {
    let size = q_tree(degree, p)?;
    let mut edges = vec![(0, 1)];
    let mut frontier = vec![0, 1];
    let mut next_id = 2;
    for _ in 0..p {
        let mut next = Vec::new();
        for &v in &frontier {
            for _ in 0..degree - 1 {
                edges.push((v, next_id));
                next.push(next_id);
                next_id += 1;
            }
        }
        frontier = next;
    }
    debug_assert_eq!(next_id, size);
    RootedSubgraph::new(Graph::new(next_id, edges)?, (0, 1), p)
}

fn check_density(s: f64, t: f64) -> Result<()> {
    if !(s.is_finite() && t.is_finite()) || s < 0.0 || t < 0.0 || 4.0 * s + 3.0 * t > 1.0 + FEASIBILITY_SLACK {
        return Err(Error::Infeasible(format!(
            "densities (s, t) = ({s}, {t}) need s, t >= 0 and 4s + 3t <= 1"
        )));
    }
    Ok(())
}

/// The three p = 1 subgraph types of 3-regular graphs, ready to evaluate.
#[derive(Debug, Clone)]
pub struct CubicP1Kernels {
    g4: SubgraphKernel,
    g5: SubgraphKernel,
    g6: SubgraphKernel,
}

impl CubicP1Kernels {
    pub fn new() -> Result<Self> {
        Ok(CubicP1Kernels {
            g4: SubgraphKernel::new(&crossed_square_type(), DEFAULT_MAX_QUBITS)?,
            g5: SubgraphKernel::new(&triangle_type(), DEFAULT_MAX_QUBITS)?,
            g6: SubgraphKernel::new(&regular_tree_type(3, 1)?, DEFAULT_MAX_QUBITS)?,
        })
    }

    /// `(f_g4, f_g5, f_g6)` at one angle pair.
    pub fn values(&self, gamma: f64, beta: f64) -> Result<[f64; 3]> {
        let sched = AngleSchedule::wrapped(&[gamma], &[beta])?;
        Ok([
            self.g4.evaluate(&sched)?,
            self.g5.evaluate(&sched)?,
            self.g6.evaluate(&sched)?,
        ])
    }

    /// `F_1 / n` at densities `s = S/n`, `t = T/n`.
    pub fn f1_nst(&self, s: f64, t: f64, gamma: f64, beta: f64) -> Result<f64> {
        check_density(s, t)?;
        Ok(combine(weights_per_vertex(s, t), self.values(gamma, beta)?))
    }
}

fn weights_per_vertex(s: f64, t: f64) -> [f64; 3] {
    [s, 4.0 * s + 3.0 * t, 1.5 - 5.0 * s - 3.0 * t]
}

fn combine(w: [f64; 3], f: [f64; 3]) -> f64 {
    w[0] * f[0] + w[1] * f[1] + w[2] * f[2]
}

/// `F_1 / n` for a 3-regular graph with crossed-square density `s` and
/// isolated-triangle density `t`.
pub fn f1_nst(s: f64, t: f64, gamma: f64, beta: f64) -> Result<f64> {
    CubicP1Kernels::new()?.f1_nst(s, t, gamma, beta)
}

/// `M_1 / n` at `(s, t)`: the angle optimum of [`f1_nst`].
pub fn m1_density(s: f64, t: f64, config: &OptimizerConfig) -> Result<OptimizationResult> {
    check_density(s, t)?;
    let kernels = CubicP1Kernels::new()?;
    let w = weights_per_vertex(s, t);
    maximize_fp(
        |sched| Ok(combine(w, kernels.values(sched.gammas()[0], sched.betas()[0])?)),
        1,
        config,
        &[],
    )
}

/// `M_1(1, s, t) / (3/2 − s − t)`.
pub fn ratio_bound(s: f64, t: f64, config: &OptimizerConfig) -> Result<f64> {
    Ok(m1_density(s, t, config)?.best_value / (1.5 - s - t))
}

/// One feasible `(s, t)` point of the ratio surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioSample {
    pub s: f64,
    pub t: f64,
    pub m1: f64,
    pub ratio: f64,
    pub gamma: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstCase {
    pub s: f64,
    pub t: f64,
    pub ratio: f64,
    pub gamma: f64,
    pub beta: f64,
    /// Every feasible grid point, in grid order.
    pub surface: Vec<RatioSample>,
}

/// Inner angle maximization with a precomputed `(f_g4, f_g5, f_g6)` table on
/// the angle grid, refined from the table optimum and from a warm start.
struct DensitySolver<'a> {
    kernels: &'a CubicP1Kernels,
    axes: Vec<Axis>,
    resolution: usize,
    table: Vec<(Vec<f64>, [f64; 3])>,
    tol: f64,
}

impl<'a> DensitySolver<'a> {
    fn new(kernels: &'a CubicP1Kernels, resolution: usize, tol: f64) -> Result<Self> {
        let axes = angle_axes(1, false);
        let mut table = Vec::with_capacity(resolution * resolution);
        for i in 0..resolution {
            for j in 0..resolution {
                let gamma = 2.0 * PI * i as f64 / resolution as f64;
                let beta = PI * j as f64 / resolution as f64;
                table.push((vec![gamma, beta], kernels.values(gamma, beta)?));
            }
        }
        Ok(DensitySolver {
            kernels,
            axes,
            resolution,
            table,
            tol,
        })
    }

    /// `(M_1 / n, γ, β)` at `(s, t)`.
    fn solve(&self, s: f64, t: f64, warm: Option<[f64; 2]>) -> Result<(f64, f64, f64)> {
        let w = weights_per_vertex(s, t);
        let (mut start, mut best) = (&self.table[0].0, f64::NEG_INFINITY);
        for (x, f) in &self.table {
            let v = combine(w, *f);
            if v > best {
                best = v;
                start = x;
            }
        }
        let objective = |x: &[f64]| Ok(combine(w, self.kernels.values(x[0], x[1])?));
        let step = [2.0 * PI / self.resolution as f64, PI / self.resolution as f64];
        let mut r = pattern_search(objective, &self.axes, start, &step, self.tol, 100_000)?;
        if let Some(wx) = warm {
            let half = [step[0] / 2.0, step[1] / 2.0];
            let r2 = pattern_search(objective, &self.axes, &wx, &half, self.tol, 100_000)?;
            if r2.value > r.value {
                r = r2;
            }
        }
        Ok((r.value, r.params[0], r.params[1]))
    }
}

/// Minimizes the ratio bound over the feasible triangle
/// `{s, t ≥ 0, 4s + 3t ≤ 1}` on a `grid × grid` lattice, then refines the
/// best lattice point with compass search in `(s, t)`.
pub fn worst_case_ratio(grid: usize, config: &OptimizerConfig) -> Result<WorstCase> {
    if grid < 2 {
        return Err(Error::InvalidArgument("need at least 2 grid points per axis".into()));
    }
    let kernels = CubicP1Kernels::new()?;
    let solver = DensitySolver::new(&kernels, config.resolution_for(1), config.tol)?;
    let (s_max, t_max) = (0.25, 1.0 / 3.0);

    let mut surface = Vec::new();
    let mut warm: Option<[f64; 2]> = None;
    for i in 0..grid {
        let s = s_max * i as f64 / (grid - 1) as f64;
        for j in 0..grid {
            let t = t_max * j as f64 / (grid - 1) as f64;
            if 4.0 * s + 3.0 * t > 1.0 + FEASIBILITY_SLACK {
                continue;
            }
            let (m1, gamma, beta) = solver.solve(s, t, warm)?;
            warm = Some([gamma, beta]);
            surface.push(RatioSample {
                s,
                t,
                m1,
                ratio: m1 / (1.5 - s - t),
                gamma,
                beta,
            });
        }
    }
    let start = surface
        .iter()
        .fold(None::<&RatioSample>, |best, x| match best {
            Some(b) if b.ratio <= x.ratio => Some(b),
            _ => Some(x),
        })
        .copied()
        .expect("(0, 0) is always feasible");

    let axes = [Axis::Bounded { lo: 0.0, hi: s_max }, Axis::Bounded { lo: 0.0, hi: t_max }];
    let neg_ratio = |x: &[f64]| -> Result<f64> {
        if 4.0 * x[0] + 3.0 * x[1] > 1.0 + FEASIBILITY_SLACK {
            return Ok(f64::NEG_INFINITY);
        }
        let (m1, _, _) = solver.solve(x[0], x[1], Some([start.gamma, start.beta]))?;
        Ok(-m1 / (1.5 - x[0] - x[1]))
    };
    let steps = [s_max / (grid - 1) as f64, t_max / (grid - 1) as f64];
    let r = pattern_search(neg_ratio, &axes, &[start.s, start.t], &steps, 1e-6, 10_000)?;
    let (s, t) = (r.params[0], r.params[1]);
    let (m1, gamma, beta) = solver.solve(s, t, Some([start.gamma, start.beta]))?;
    Ok(WorstCase {
        s,
        t,
        ratio: m1 / (1.5 - s - t),
        gamma,
        beta,
        surface,
    })
}

/// `M_p` on a ring of `n` vertices from the single path-segment type.
pub fn ring_mp(n: usize, p: usize, config: &OptimizerConfig, warm_starts: &[AngleSchedule]) -> Result<OptimizationResult> {
    if p == 0 || n <= 2 * p + 2 {
        return Err(Error::Infeasible(format!(
            "ring analysis needs n > 2p + 2, got n = {n}, p = {p}"
        )));
    }
    let d = decompose(&ring_graph(n)?, p)?;
    debug_assert_eq!(d.entries().len(), 1);
    let objective = DecomposedObjective::new(&d, DEFAULT_MAX_QUBITS)?;
    maximize_fp(|s| objective.evaluate(s), p, config, warm_starts)
}

/// `(2p + 1) / (2p + 2)`.
pub fn ring_closed_form(p: usize) -> f64 {
    (2 * p + 1) as f64 / (2 * p + 2) as f64
}

/// Largest cut by exhaustive enumeration (vertex `n − 1` fixed to side 0).
pub fn brute_force_max_cut(graph: &Graph) -> Result<usize> {
    let n = graph.n_vertices();
    if n <= 1 {
        return Ok(0);
    }
    let cost = CostDiagonal::maxcut(graph)?;
    Ok(cost.values()[..1 << (n - 1)].iter().copied().max().unwrap_or(0) as usize)
}

/// Per-instance lower bound on the p = 1 approximation ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioCertificate {
    pub n: usize,
    #[serde(rename = "S")]
    pub s: usize,
    #[serde(rename = "T")]
    pub t: usize,
    #[serde(rename = "M1")]
    pub m1: f64,
    pub cut_upper_bound: f64,
    pub ratio_lower_bound: f64,
    pub k4_special_case: bool,
    #[serde(skip)]
    pub schedule: Option<AngleSchedule>,
}

/// Counts `S` and `T`, maximizes `F_1`, and divides by `3n/2 − S − T`.
///
/// `K4` is reported with `k4_special_case` set: its `M_1` comes from the
/// full state and the denominator is its exact maximum cut.
pub fn certify_instance(graph: &Graph, config: &OptimizerConfig) -> Result<RatioCertificate> {
    if !graph.is_regular(3) {
        return Err(Error::NotRegular { degree: 3 });
    }
    if !graph.is_connected() {
        return Err(Error::InvalidGraph("certificate needs a connected graph".into()));
    }
    let n = graph.n_vertices();
    if is_k4(graph) {
        let objective = FullObjective::new(graph, DEFAULT_MAX_QUBITS)?;
        let r = maximize_fp(|s| objective.evaluate(s), 1, config, &[])?;
        let max_cut = brute_force_max_cut(graph)? as f64;
        return Ok(RatioCertificate {
            n,
            s: 0,
            t: 0,
            m1: r.best_value,
            cut_upper_bound: max_cut,
            ratio_lower_bound: r.best_value / max_cut,
            k4_special_case: true,
            schedule: Some(r.best_schedule),
        });
    }
    let s = count_crossed_squares(graph)?;
    let t = count_isolated_triangles(graph)?;
    let nf = n as f64;
    let r = m1_density(s as f64 / nf, t as f64 / nf, config)?;
    let m1 = r.best_value * nf;
    let cut_upper_bound = 1.5 * nf - s as f64 - t as f64;
    Ok(RatioCertificate {
        n,
        s,
        t,
        m1,
        cut_upper_bound,
        ratio_lower_bound: m1 / cut_upper_bound,
        k4_special_case: false,
        schedule: Some(r.best_schedule),
    })
}
