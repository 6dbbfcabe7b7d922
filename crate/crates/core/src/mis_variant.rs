//! Independent-set variant: the state lives on legal strings only (bit
//! strings whose 1s form an independent set), the objective is the Hamming
//! weight, and the mixer `B` is the hypercube adjacency restricted to legal
//! strings. Evolution starts from the empty set and alternates
//! `U(B, b_p) U(C, γ_{p−1}) ⋯ U(C, γ_1) U(B, b_1)`.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::optimizer::{maximize_box, Axis, OptimizerConfig};
use crate::statevector::{bitstring, sample_indices};

/// Default cap on the number of legal strings.
pub const DEFAULT_MAX_BASIS: usize = 1 << 22;

/// Default tolerance on the last series term in [`apply_exp_b`].
pub const DEFAULT_SERIES_TOL: f64 = 1e-12;

const MAX_SERIES_TERMS: usize = 200;

/// The legal strings of a graph in lexicographic order of their bit-string
/// rendering (vertex 0 first), so the empty set has index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependentSetBasis {
    n: usize,
    strings: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl IndependentSetBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.strings.len()
    }

    /// Bit `j` of each entry is vertex `j`.
    pub fn strings(&self) -> &[u64] {
        &self.strings
    }

    pub fn index_of(&self, z: u64) -> Option<usize> {
        self.index.get(&z).copied()
    }

    pub fn zero_index(&self) -> usize {
        0
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.strings[i].count_ones()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "size": self.size(),
            "strings": self.strings.iter().map(|&z| bitstring(z, self.n)).collect::<Vec<_>>(),
        })
    }
}

pub fn enumerate_basis(graph: &Graph) -> Result<IndependentSetBasis> {
    enumerate_basis_with_limit(graph, DEFAULT_MAX_BASIS)
}

/// Backtracking over vertices `0..n`, trying "out" before "in" so strings
/// come out in lexicographic order.
pub fn enumerate_basis_with_limit(graph: &Graph, limit: usize) -> Result<IndependentSetBasis> {
    let n = graph.n_vertices();
    if n > 64 {
        return Err(Error::Resource {
            what: "independent-set vertices",
            requested: n,
            limit: 64,
        });
    }
    let neighbor_masks: Vec<u64> = (0..n)
        .map(|v| graph.neighbors(v).iter().fold(0u64, |m, &u| m | (1 << u)))
        .collect();

    fn walk(v: usize, z: u64, masks: &[u64], limit: usize, out: &mut Vec<u64>) -> bool {
        if v == masks.len() {
            if out.len() == limit {
                return false;
            }
            out.push(z);
            return true;
        }
        if !walk(v + 1, z, masks, limit, out) {
            return false;
        }
        if z & masks[v] == 0 {
            return walk(v + 1, z | (1 << v), masks, limit, out);
        }
        true
    }

    let mut strings = Vec::new();
    if !walk(0, 0, &neighbor_masks, limit, &mut strings) {
        return Err(Error::Resource {
            what: "independent-set basis size",
            requested: limit.saturating_add(1),
            limit,
        });
    }
    let index = strings.iter().enumerate().map(|(i, &z)| (z, i)).collect();
    Ok(IndependentSetBasis { n, strings, index })
}

/// Sparse `B`: `neighbors[i]` lists the legal strings one bit-flip from
/// string `i`.
#[derive(Debug, Clone)]
pub struct MixerMatrix {
    neighbors: Vec<Vec<u32>>,
    max_row_sum: usize,
}

impl MixerMatrix {
    pub fn dim(&self) -> usize {
        self.neighbors.len()
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.neighbors[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> u8 {
        u8::from(self.neighbors[i].contains(&(j as u32)))
    }

    /// Largest row sum, an upper bound on the spectral norm.
    pub fn max_row_sum(&self) -> usize {
        self.max_row_sum
    }

    fn apply_scaled(&self, x: &[Complex64], scale: Complex64, out: &mut [Complex64]) {
        for (o, row) in out.iter_mut().zip(&self.neighbors) {
            let s: Complex64 = row.iter().map(|&j| x[j as usize]).sum();
            *o = s * scale;
        }
    }
}

pub fn build_mixer_matrix(basis: &IndependentSetBasis) -> MixerMatrix {
    let neighbors: Vec<Vec<u32>> = basis
        .strings
        .iter()
        .map(|&z| {
            (0..basis.n)
                .filter_map(|bit| basis.index_of(z ^ (1 << bit)))
                .map(|j| j as u32)
                .collect()
        })
        .collect();
    let max_row_sum = neighbors.iter().map(Vec::len).max().unwrap_or(0);
    MixerMatrix {
        neighbors,
        max_row_sum,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedState<'a> {
    basis: &'a IndependentSetBasis,
    amps: Vec<Complex64>,
}

impl<'a> RestrictedState<'a> {
    /// `|z = 0⟩`, the empty independent set.
    pub fn empty_set(basis: &'a IndependentSetBasis) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); basis.size()];
        amps[basis.zero_index()] = Complex64::new(1.0, 0.0);
        RestrictedState { basis, amps }
    }

    pub fn from_amplitudes(basis: &'a IndependentSetBasis, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != basis.size() {
            return Err(Error::DimensionMismatch {
                expected: basis.size(),
                actual: amps.len(),
            });
        }
        Ok(RestrictedState { basis, amps })
    }

    pub fn basis(&self) -> &IndependentSetBasis {
        self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability of the legal string `z` (0 for illegal strings).
    pub fn probability_of(&self, z: u64) -> f64 {
        self.basis.index_of(z).map_or(0.0, |i| self.amps[i].norm_sqr())
    }

    /// Expected Hamming weight.
    pub fn expected_weight(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(i, a)| a.norm_sqr() * f64::from(self.basis.weight(i)))
            .sum()
    }
}

/// `e^{-ibB}` by a Taylor series, after splitting `b` into `k` sub-steps
/// with `|b|·‖B‖/k ≤ 1`. Each series stops once a term's norm is below `tol`.
pub fn apply_exp_b(state: &mut RestrictedState<'_>, mixer: &MixerMatrix, b: f64, tol: f64) -> Result<()> {
    if mixer.dim() != state.amps.len() {
        return Err(Error::DimensionMismatch {
            expected: state.amps.len(),
            actual: mixer.dim(),
        });
    }
    if !b.is_finite() {
        return Err(Error::InvalidArgument("b must be finite".into()));
    }
    let radius = mixer.max_row_sum() as f64;
    if b == 0.0 || radius == 0.0 {
        return Ok(());
    }
    let steps = (b.abs() * radius).ceil().max(1.0) as usize;
    let tau = b / steps as f64;
    let dim = state.amps.len();
    let mut term = vec![Complex64::new(0.0, 0.0); dim];
    let mut next = vec![Complex64::new(0.0, 0.0); dim];
    for _ in 0..steps {
        term.copy_from_slice(&state.amps);
        let mut converged = false;
        for j in 1..=MAX_SERIES_TERMS {
            // term_j = (-iτB)^j v / j!
            mixer.apply_scaled(&term, Complex64::new(0.0, -tau / j as f64), &mut next);
            std::mem::swap(&mut term, &mut next);
            let mut norm = 0.0;
            for (a, t) in state.amps.iter_mut().zip(&term) {
                *a += *t;
                norm += t.norm_sqr();
            }
            if norm.sqrt() < tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NotConverged {
                terms: MAX_SERIES_TERMS,
            });
        }
    }
    Ok(())
}

/// `amp(z) ← e^{-iγ|z|} amp(z)`.
pub fn apply_exp_c(state: &mut RestrictedState<'_>, gamma: f64) {
    let phases: Vec<Complex64> = (0..=state.basis.n)
        .map(|w| Complex64::from_polar(1.0, -gamma * w as f64))
        .collect();
    for (i, a) in state.amps.iter_mut().enumerate() {
        *a *= phases[state.basis.weight(i) as usize];
    }
}

/// `p` mixer times `b` (any real) and `p − 1` phase angles `γ ∈ [0, 2π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantSchedule {
    bs: Vec<f64>,
    gammas: Vec<f64>,
}

impl VariantSchedule {
    pub fn new(bs: Vec<f64>, gammas: Vec<f64>) -> Result<Self> {
        if bs.is_empty() || bs.len() != gammas.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "variant schedule needs p >= 1 values of b and p - 1 angles, got {} and {}",
                bs.len(),
                gammas.len()
            )));
        }
        if bs.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidArgument("b values must be finite".into()));
        }
        if gammas.iter().any(|g| !(0.0..2.0 * PI).contains(g)) {
            return Err(Error::InvalidArgument("gammas must lie in [0, 2π)".into()));
        }
        Ok(VariantSchedule { bs, gammas })
    }

    pub fn p(&self) -> usize {
        self.bs.len()
    }

    pub fn bs(&self) -> &[f64] {
        &self.bs
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    /// `[b_1..b_p, γ_1..γ_{p−1}]`.
    pub fn to_vector(&self) -> Vec<f64> {
        self.bs.iter().chain(&self.gammas).copied().collect()
    }

    /// Inverse of [`to_vector`](Self::to_vector); gammas are wrapped into range.
    pub fn from_vector(params: &[f64]) -> Result<Self> {
        if params.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument("variant parameter vector has odd length 2p - 1".into()));
        }
        let p = params.len().div_ceil(2);
        let gammas = params[p..]
            .iter()
            .map(|&g| {
                let r = g.rem_euclid(2.0 * PI);
                if r >= 2.0 * PI {
                    0.0
                } else {
                    r
                }
            })
            .collect();
        Self::new(params[..p].to_vec(), gammas)
    }

    /// Appends `b = 0` and `γ = 0`, giving the same state one level up.
    pub fn extended(&self) -> Self {
        let mut s = self.clone();
        s.bs.push(0.0);
        s.gammas.push(0.0);
        s
    }
}

pub fn prepare_variant_state<'a>(
    basis: &'a IndependentSetBasis,
    mixer: &MixerMatrix,
    schedule: &VariantSchedule,
    tol: f64,
) -> Result<RestrictedState<'a>> {
    let mut state = RestrictedState::empty_set(basis);
    apply_exp_b(&mut state, mixer, schedule.bs[0], tol)?;
    for (&gamma, &b) in schedule.gammas.iter().zip(&schedule.bs[1..]) {
        apply_exp_c(&mut state, gamma);
        apply_exp_b(&mut state, mixer, b, tol)?;
    }
    Ok(state)
}

/// Expected independent-set size in the prepared state.
pub fn fp_variant(basis: &IndependentSetBasis, mixer: &MixerMatrix, schedule: &VariantSchedule) -> Result<f64> {
    Ok(prepare_variant_state(basis, mixer, schedule, DEFAULT_SERIES_TOL)?.expected_weight())
}

/// Draws legal strings from the state.
pub fn sample_variant<R: Rng + ?Sized>(state: &RestrictedState<'_>, rng: &mut R, shots: usize) -> Result<Vec<u64>> {
    Ok(sample_indices(&state.amps, rng, shots)?
        .into_iter()
        .map(|i| state.basis.strings[i])
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariantOptimizationResult {
    pub best_schedule: VariantSchedule,
    pub best_value: f64,
    pub evaluations: u64,
    pub grid_resolution: usize,
    /// The `[0, b_window)` range each `b` was gridded over.
    pub b_window: f64,
}

impl VariantOptimizationResult {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.best_schedule.p(),
            "bs": self.best_schedule.bs(),
            "gammas": self.best_schedule.gammas(),
            "value": self.best_value,
            "evaluations": self.evaluations,
            "grid_resolution": self.grid_resolution,
            "b_window": self.b_window,
        })
    }
}

/// Grid over `b ∈ [0, b_window)` per component and `γ ∈ [0, 2π)`, then
/// compass refinement (`b` unconstrained). A warm start from level `p − 1`
/// is extended with zeros, which makes the result at least its value.
pub fn maximize_variant(
    basis: &IndependentSetBasis,
    mixer: &MixerMatrix,
    p: usize,
    b_window: f64,
    config: &OptimizerConfig,
    warm_start: Option<&VariantSchedule>,
) -> Result<VariantOptimizationResult> {
    if p == 0 {
        return Err(Error::InvalidArgument("level p must be at least 1".into()));
    }
    if !(b_window > 0.0 && b_window.is_finite()) {
        return Err(Error::InvalidArgument("b window must be positive".into()));
    }
    let axes: Vec<Axis> = (0..p)
        .map(|_| Axis::Unbounded { lo: 0.0, hi: b_window })
        .chain((1..p).map(|_| Axis::Periodic { period: 2.0 * PI }))
        .collect();
    let mut warm = Vec::new();
    if let Some(w) = warm_start {
        let mut w = w.clone();
        if w.p() > p {
            return Err(Error::InvalidArgument("warm start has more layers than p".into()));
        }
        while w.p() < p {
            w = w.extended();
        }
        warm.push(w.to_vector());
    }
    let use_grid = p <= config.max_grid_p;
    let resolution = config.resolution_for(p);
    let r = maximize_box(
        |x| fp_variant(basis, mixer, &VariantSchedule::from_vector(x)?),
        &axes,
        use_grid,
        resolution,
        config,
        &warm,
    )?;
    Ok(VariantOptimizationResult {
        best_schedule: VariantSchedule::from_vector(&r.params)?,
        best_value: r.value,
        evaluations: r.evaluations,
        grid_resolution: if use_grid { resolution } else { 0 },
        b_window,
    })
}

/// Largest independent set size, by scanning the basis.
pub fn max_independent_set_size(basis: &IndependentSetBasis) -> usize {
    basis.strings.iter().map(|z| z.count_ones() as usize).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, edgeless_graph, path_graph};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn strings(basis: &IndependentSetBasis) -> Vec<String> {
        basis.strings().iter().map(|&z| bitstring(z, basis.n())).collect()
    }

    #[test]
    fn bases() {
        let k3 = enumerate_basis(&complete_graph(3).unwrap()).unwrap();
        assert_eq!(strings(&k3), vec!["000", "001", "010", "100"]);
        let e = enumerate_basis(&edgeless_graph(4)).unwrap();
        assert_eq!(e.size(), 16);
        let edge = enumerate_basis(&path_graph(2).unwrap()).unwrap();
        assert_eq!(strings(&edge), vec!["00", "01", "10"]);
        assert_eq!(edge.zero_index(), 0);
        assert_eq!(edge.strings()[0], 0);
        assert!(matches!(
            enumerate_basis_with_limit(&edgeless_graph(5), 31),
            Err(Error::Resource { .. })
        ));
        assert_eq!(enumerate_basis_with_limit(&edgeless_graph(5), 32).unwrap().size(), 32);
        let json = edge.to_json();
        assert_eq!(json["size"], 3);
        assert_eq!(json["strings"][2], "10");
    }

    #[test]
    fn mixer_entries() {
        let basis = enumerate_basis(&path_graph(2).unwrap()).unwrap();
        let b = build_mixer_matrix(&basis);
        let idx = |s: u64| basis.index_of(s).unwrap();
        assert_eq!(b.entry(idx(0b00), idx(0b01)), 1);
        assert_eq!(b.entry(idx(0b00), idx(0b10)), 1);
        assert_eq!(b.entry(idx(0b01), idx(0b10)), 0);
        assert_eq!(b.entry(idx(0b00), idx(0b00)), 0);

        let cube = enumerate_basis(&edgeless_graph(2)).unwrap();
        let bc = build_mixer_matrix(&cube);
        assert!((0..4).all(|i| bc.row(i).len() == 2));
        assert_eq!(bc.max_row_sum(), 2);
    }

    #[test]
    fn exp_b_identity_and_quantum_walk() {
        let basis = enumerate_basis(&edgeless_graph(3)).unwrap();
        let mixer = build_mixer_matrix(&basis);
        let mut s = RestrictedState::empty_set(&basis);
        apply_exp_b(&mut s, &mixer, 0.0, 1e-12).unwrap();
        assert_eq!(s, RestrictedState::empty_set(&basis));

        apply_exp_b(&mut s, &mixer, PI / 2.0, 1e-12).unwrap();
        assert!((s.probability_of(0b111) - 1.0).abs() < 1e-10);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn exp_c_phases() {
        let basis = enumerate_basis(&edgeless_graph(2)).unwrap();
        let idx = basis.index_of(0b11).unwrap();
        let mut amps = vec![Complex64::new(0.0, 0.0); 4];
        amps[idx] = Complex64::new(1.0, 0.0);
        let mut s = RestrictedState::from_amplitudes(&basis, amps.clone()).unwrap();
        apply_exp_c(&mut s, 0.0);
        assert_eq!(s.amplitudes(), &amps[..]);
        apply_exp_c(&mut s, PI / 2.0);
        assert!((s.amplitudes()[idx] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        let mut t = RestrictedState::from_amplitudes(&basis, amps.clone()).unwrap();
        apply_exp_c(&mut t, 2.0 * PI);
        assert!((t.amplitudes()[idx] - amps[idx]).norm() < 1e-12);
    }

    #[test]
    fn schedules() {
        assert!(VariantSchedule::new(vec![], vec![]).is_err());
        assert!(VariantSchedule::new(vec![1.0], vec![0.5]).is_err());
        assert!(VariantSchedule::new(vec![1.0, -3.0], vec![0.5]).is_ok());
        assert!(VariantSchedule::new(vec![1.0, 2.0], vec![7.0]).is_err());
        let s = VariantSchedule::from_vector(&[0.3, 9.0, -0.5]).unwrap();
        assert_eq!(s.bs(), &[0.3, 9.0]);
        assert!((s.gammas()[0] - (2.0 * PI - 0.5)).abs() < 1e-12);
        let e = s.extended();
        assert_eq!(e.p(), 3);
        assert_eq!(e.to_vector()[2], 0.0);
    }

    #[test]
    fn prepared_states() {
        let basis = enumerate_basis(&edgeless_graph(4)).unwrap();
        let mixer = build_mixer_matrix(&basis);
        let zero = VariantSchedule::new(vec![0.0], vec![]).unwrap();
        let s = prepare_variant_state(&basis, &mixer, &zero, 1e-12).unwrap();
        assert_eq!(s, RestrictedState::empty_set(&basis));
        assert_eq!(fp_variant(&basis, &mixer, &zero).unwrap(), 0.0);

        let half = VariantSchedule::new(vec![PI / 2.0], vec![]).unwrap();
        assert!((fp_variant(&basis, &mixer, &half).unwrap() - 4.0).abs() < 1e-10);
    }

    #[test]
    fn sampling_stays_legal() {
        let g = path_graph(4).unwrap();
        let basis = enumerate_basis(&g).unwrap();
        let mixer = build_mixer_matrix(&basis);
        let sched = VariantSchedule::new(vec![0.7, 1.9], vec![2.2]).unwrap();
        let s = prepare_variant_state(&basis, &mixer, &sched, 1e-12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for z in sample_variant(&s, &mut rng, 2000).unwrap() {
            assert!(g.edges().iter().all(|&(a, b)| (z >> a) & (z >> b) & 1 == 0));
        }
        let empty = RestrictedState::empty_set(&basis);
        assert!(sample_variant(&empty, &mut rng, 100).unwrap().iter().all(|&z| z == 0));
    }

    #[test]
    fn edgeless_maximum() {
        let basis = enumerate_basis(&edgeless_graph(4)).unwrap();
        let mixer = build_mixer_matrix(&basis);
        let r = maximize_variant(&basis, &mixer, 1, 2.0 * PI, &OptimizerConfig::default(), None).unwrap();
        assert!((r.best_value - 4.0).abs() < 1e-6);
        assert!((r.best_schedule.bs()[0].rem_euclid(PI) - PI / 2.0).abs() < 1e-3);
    }
}
