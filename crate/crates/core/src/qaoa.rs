//! The MaxCut expectation `F_p`, computed either on the whole graph or as a
//! weighted sum of root-edge expectations over small neighborhood types.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{decompose, q_tree, Graph, RootedSubgraph, SubgraphDecomposition};
use crate::statevector::{
    prepare_with_cost, AngleSchedule, CostDiagonal, QuantumState, DEFAULT_MAX_QUBITS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Full,
    Decomposed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FpEvaluation {
    pub method: Method,
    pub p: usize,
    pub value: f64,
    /// `f_g` per subgraph type, keyed by hex canonical key.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_subgraph: Option<BTreeMap<String, f64>>,
}

/// Probability that the edge `(j, k)` is cut in `state`.
pub fn edge_expectation(state: &QuantumState, j: usize, k: usize) -> f64 {
    state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(z, _)| ((z >> j) ^ (z >> k)) & 1 == 1)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// `F_p` from the full `2^n` state.
pub fn fp_full(graph: &Graph, schedule: &AngleSchedule) -> Result<FpEvaluation> {
    let objective = FullObjective::new(graph, DEFAULT_MAX_QUBITS)?;
    Ok(FpEvaluation {
        method: Method::Full,
        p: schedule.p(),
        value: objective.evaluate(schedule)?,
        per_subgraph: None,
    })
}

/// Full-graph objective with the cost diagonal computed once.
#[derive(Debug, Clone)]
pub struct FullObjective {
    cost: CostDiagonal,
}

impl FullObjective {
    pub fn new(graph: &Graph, max_qubits: usize) -> Result<Self> {
        Ok(FullObjective {
            cost: CostDiagonal::maxcut_with_limit(graph, max_qubits)?,
        })
    }

    pub fn cost(&self) -> &CostDiagonal {
        &self.cost
    }

    pub fn prepare(&self, schedule: &AngleSchedule) -> Result<QuantumState> {
        prepare_with_cost(&self.cost, schedule)
    }

    pub fn evaluate(&self, schedule: &AngleSchedule) -> Result<f64> {
        self.prepare(schedule)?.expectation(&self.cost)
    }
}

/// A rooted subgraph prepared for repeated `f_g` evaluation: its own cost
/// operator over its own qubits.
#[derive(Debug, Clone)]
pub struct SubgraphKernel {
    cost: CostDiagonal,
    root: (usize, usize),
}

impl SubgraphKernel {
    pub fn new(subgraph: &RootedSubgraph, max_qubits: usize) -> Result<Self> {
        Ok(SubgraphKernel {
            cost: CostDiagonal::maxcut_with_limit(subgraph.graph(), max_qubits)?,
            root: subgraph.root(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.cost.n_qubits()
    }

    /// Root-edge expectation in the QAOA state prepared on the subgraph alone.
    pub fn evaluate(&self, schedule: &AngleSchedule) -> Result<f64> {
        let state = prepare_with_cost(&self.cost, schedule)?;
        Ok(edge_expectation(&state, self.root.0, self.root.1))
    }
}

/// `f_g`: the root edge's cut probability, simulated on the subgraph only.
pub fn f_subgraph(subgraph: &RootedSubgraph, schedule: &AngleSchedule) -> Result<f64> {
    SubgraphKernel::new(subgraph, DEFAULT_MAX_QUBITS)?.evaluate(schedule)
}

const CACHE_CAPACITY: usize = 1 << 20;

fn schedule_bits(schedule: &AngleSchedule) -> Vec<u64> {
    schedule.to_vector().iter().map(|x| x.to_bits()).collect()
}

/// `F_p = Σ_g w_g f_g` over a decomposition, with `f_g` memoized on
/// `(type, schedule)` for bit-identical schedules.
#[derive(Debug)]
pub struct DecomposedObjective {
    p: usize,
    kernels: Vec<(String, usize, SubgraphKernel)>,
    cache: Mutex<HashMap<(usize, Vec<u64>), f64>>,
}

impl DecomposedObjective {
    pub fn new(decomposition: &SubgraphDecomposition, max_qubits: usize) -> Result<Self> {
        let kernels = decomposition
            .entries()
            .iter()
            .map(|e| {
                Ok((
                    e.key.to_hex(),
                    e.weight,
                    SubgraphKernel::new(&e.representative, max_qubits)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DecomposedObjective {
            p: decomposition.p(),
            kernels,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n_types(&self) -> usize {
        self.kernels.len()
    }

    pub fn clear_cache(&self) {
        self.cache.lock().expect("cache lock").clear();
    }

    fn f_type(&self, idx: usize, bits: &[u64], schedule: &AngleSchedule) -> Result<f64> {
        if let Some(&v) = self.cache.lock().expect("cache lock").get(&(idx, bits.to_vec())) {
            return Ok(v);
        }
        let v = self.kernels[idx].2.evaluate(schedule)?;
        let mut cache = self.cache.lock().expect("cache lock");
        if cache.len() < CACHE_CAPACITY {
            cache.insert((idx, bits.to_vec()), v);
        }
        Ok(v)
    }

    /// `F_p` plus the per-type `f_g` values.
    pub fn evaluate_detailed(&self, schedule: &AngleSchedule) -> Result<FpEvaluation> {
        let bits = schedule_bits(schedule);
        let mut per = BTreeMap::new();
        let mut value = 0.0;
        for (idx, (key, weight, _)) in self.kernels.iter().enumerate() {
            let f = self.f_type(idx, &bits, schedule)?;
            value += *weight as f64 * f;
            per.insert(key.clone(), f);
        }
        Ok(FpEvaluation {
            method: Method::Decomposed,
            p: schedule.p(),
            value,
            per_subgraph: Some(per),
        })
    }

    pub fn evaluate(&self, schedule: &AngleSchedule) -> Result<f64> {
        let bits = schedule_bits(schedule);
        let mut value = 0.0;
        for (idx, (_, weight, _)) in self.kernels.iter().enumerate() {
            value += *weight as f64 * self.f_type(idx, &bits, schedule)?;
        }
        Ok(value)
    }
}

/// `F_p` as the weighted sum of subgraph contributions.
pub fn fp_decomposed(
    decomposition: &SubgraphDecomposition,
    schedule: &AngleSchedule,
) -> Result<FpEvaluation> {
    DecomposedObjective::new(decomposition, DEFAULT_MAX_QUBITS)?.evaluate_detailed(schedule)
}

/// Either evaluation route behind one interface.
#[derive(Debug)]
pub enum MaxCutObjective {
    Full(FullObjective),
    Decomposed(DecomposedObjective),
}

impl MaxCutObjective {
    /// Uses the decomposition whenever the largest possible neighborhood
    /// (`q_tree` for the graph's maximum degree) is smaller than the graph.
    pub fn for_graph(graph: &Graph, p: usize, max_qubits: usize) -> Result<Self> {
        let degree = graph.max_degree().max(2);
        let use_decomposition = q_tree(degree, p).is_ok_and(|q| q < graph.n_vertices());
        if use_decomposition {
            let d = decompose(graph, p)?;
            Ok(MaxCutObjective::Decomposed(DecomposedObjective::new(&d, max_qubits)?))
        } else {
            Ok(MaxCutObjective::Full(FullObjective::new(graph, max_qubits)?))
        }
    }

    pub fn method(&self) -> Method {
        match self {
            MaxCutObjective::Full(_) => Method::Full,
            MaxCutObjective::Decomposed(_) => Method::Decomposed,
        }
    }

    pub fn evaluate(&self, schedule: &AngleSchedule) -> Result<f64> {
        match self {
            MaxCutObjective::Full(o) => o.evaluate(schedule),
            MaxCutObjective::Decomposed(o) => o.evaluate(schedule),
        }
    }

    pub fn evaluate_detailed(&self, schedule: &AngleSchedule) -> Result<FpEvaluation> {
        match self {
            MaxCutObjective::Full(o) => Ok(FpEvaluation {
                method: Method::Full,
                p: schedule.p(),
                value: o.evaluate(schedule)?,
                per_subgraph: None,
            }),
            MaxCutObjective::Decomposed(o) => o.evaluate_detailed(schedule),
        }
    }
}

/// Upper bound on the variance of `C` in any level-`p` state of a graph with
/// maximum degree `v` and `m` edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationBound {
    pub variance_bound: f64,
    pub v: usize,
    pub p: usize,
    pub m: usize,
}

pub fn concentration_bound(v: usize, p: usize, m: usize) -> Result<ConcentrationBound> {
    if v < 2 {
        return Err(Error::InvalidArgument(format!("degree must be at least 2, got {v}")));
    }
    // the tree formula evaluated at depth 2p + 1
    let per_edge = q_tree(v, 2 * p + 1)? as f64;
    Ok(ConcentrationBound {
        variance_bound: per_edge * m as f64,
        v,
        p,
        m,
    })
}

/// Shots needed to see a cut of at least `F_p - 1` with probability about
/// `1 - 1/m`: `⌈c · m · ln m⌉`.
pub fn repetition_estimate(m: usize, c: f64) -> Result<usize> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 edges, got {m}")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument("repetition constant must be positive".into()));
    }
    let mf = m as f64;
    Ok((c * mf * mf.ln()).ceil() as usize)
}
