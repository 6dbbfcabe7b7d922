//! Dense state-vector simulation over `n` qubits.
//!
//! Qubit `j` is bit `j` of the basis index (little-endian), so basis index
//! `z` encodes the assignment `z_j = (z >> j) & 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default cap on the number of qubits in a dense state (2^24 amplitudes).
pub const DEFAULT_MAX_QUBITS: usize = 24;

fn check_qubits(n: usize, limit: usize) -> Result<()> {
    if n == 0 || n > limit {
        return Err(Error::Resource {
            what: "state-vector qubits",
            requested: n,
            limit,
        });
    }
    Ok(())
}

/// The `2p` QAOA angles: `gammas` in `[0, 2π)` and `betas` in `[0, π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleSchedule {
    gammas: Vec<f64>,
    betas: Vec<f64>,
}

fn wrap(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    // rem_euclid can round up to exactly `period`
    if r >= period {
        0.0
    } else {
        r
    }
}

impl AngleSchedule {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if gammas.is_empty() || gammas.len() != betas.len() {
            return Err(Error::InvalidArgument(format!(
                "schedule needs p >= 1 gammas and betas of equal length, got {} and {}",
                gammas.len(),
                betas.len()
            )));
        }
        if gammas.iter().any(|g| !(0.0..2.0 * PI).contains(g)) {
            return Err(Error::InvalidArgument("gammas must lie in [0, 2π)".into()));
        }
        if betas.iter().any(|b| !(0.0..PI).contains(b)) {
            return Err(Error::InvalidArgument("betas must lie in [0, π)".into()));
        }
        Ok(AngleSchedule { gammas, betas })
    }

    /// Reduces arbitrary finite angles into range using the periods 2π
    /// (integer cost spectrum) and π (`e^{-iπσ^x} = -1`).
    pub fn wrapped(gammas: &[f64], betas: &[f64]) -> Result<Self> {
        if gammas.iter().chain(betas).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("angles must be finite".into()));
        }
        Self::new(
            gammas.iter().map(|&g| wrap(g, 2.0 * PI)).collect(),
            betas.iter().map(|&b| wrap(b, PI)).collect(),
        )
    }

    pub fn zeros(p: usize) -> Result<Self> {
        Self::new(vec![0.0; p], vec![0.0; p])
    }

    pub fn p(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// Flat parameter vector `[γ_1..γ_p, β_1..β_p]`.
    pub fn to_vector(&self) -> Vec<f64> {
        self.gammas.iter().chain(&self.betas).copied().collect()
    }

    pub fn from_vector(params: &[f64]) -> Result<Self> {
        if !params.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument("parameter vector length must be even".into()));
        }
        let p = params.len() / 2;
        Self::wrapped(&params[..p], &params[p..])
    }

    /// The same state at level `p + extra`: the appended layers have zero
    /// angles and act as the identity.
    pub fn extended(&self, extra: usize) -> Self {
        let mut s = self.clone();
        s.gammas.extend(std::iter::repeat_n(0.0, extra));
        s.betas.extend(std::iter::repeat_n(0.0, extra));
        s
    }
}

/// Diagonal of the objective in the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CostDiagonal {
    n_qubits: usize,
    values: Vec<u32>,
    max_value: u32,
}

impl CostDiagonal {
    pub fn from_values(n_qubits: usize, values: Vec<u32>) -> Result<Self> {
        if values.len() != 1usize << n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_qubits,
                actual: values.len(),
            });
        }
        let max_value = values.iter().copied().max().unwrap_or(0);
        Ok(CostDiagonal {
            n_qubits,
            values,
            max_value,
        })
    }

    /// MaxCut objective of `graph`, with the default qubit cap.
    pub fn maxcut(graph: &Graph) -> Result<Self> {
        Self::maxcut_with_limit(graph, DEFAULT_MAX_QUBITS)
    }

    pub fn maxcut_with_limit(graph: &Graph, max_qubits: usize) -> Result<Self> {
        Self::for_edges(graph.n_vertices(), graph.edges(), max_qubits)
    }

    /// Number of listed edges cut by each basis string.
    pub fn for_edges(n_qubits: usize, edges: &[(usize, usize)], max_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits, max_qubits)?;
        let mut values = vec![0u32; 1 << n_qubits];
        for &(a, b) in edges {
            let mask = (1usize << a) | (1usize << b);
            for (z, v) in values.iter_mut().enumerate() {
                let m = z & mask;
                if m != 0 && m != mask {
                    *v += 1;
                }
            }
        }
        Self::from_values(n_qubits, values)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn max_value(&self) -> u32 {
        self.max_value
    }
}

/// Free-function form of [`CostDiagonal::maxcut`].
pub fn cost_diagonal(graph: &Graph) -> Result<CostDiagonal> {
    CostDiagonal::maxcut(graph)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl QuantumState {
    /// `|s⟩`, the uniform superposition.
    pub fn uniform(n_qubits: usize) -> Result<Self> {
        Self::uniform_with_limit(n_qubits, DEFAULT_MAX_QUBITS)
    }

    pub fn uniform_with_limit(n_qubits: usize, max_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits, max_qubits)?;
        let dim = 1usize << n_qubits;
        let a = (dim as f64).sqrt().recip();
        Ok(QuantumState {
            n_qubits,
            amps: vec![Complex64::new(a, 0.0); dim],
        })
    }

    /// The computational basis state `|z⟩`.
    pub fn basis(n_qubits: usize, z: usize) -> Result<Self> {
        check_qubits(n_qubits, DEFAULT_MAX_QUBITS)?;
        let dim = 1usize << n_qubits;
        if z >= dim {
            return Err(Error::InvalidArgument(format!("basis index {z} out of range")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[z] = Complex64::new(1.0, 0.0);
        Ok(QuantumState { n_qubits, amps })
    }

    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_qubits(n_qubits, DEFAULT_MAX_QUBITS)?;
        if amps.len() != 1 << n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_qubits,
                actual: amps.len(),
            });
        }
        Ok(QuantumState { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probability(&self, z: usize) -> f64 {
        self.amps[z].norm_sqr()
    }

    fn check_dim(&self, cost: &CostDiagonal) -> Result<()> {
        if cost.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                actual: cost.n_qubits,
            });
        }
        Ok(())
    }

    /// `amp(z) ← e^{-iγ C(z)} amp(z)`.
    pub fn apply_phase_separator(&mut self, cost: &CostDiagonal, gamma: f64) -> Result<()> {
        self.check_dim(cost)?;
        let phases: Vec<Complex64> = (0..=cost.max_value)
            .map(|k| Complex64::from_polar(1.0, -gamma * f64::from(k)))
            .collect();
        for (a, &v) in self.amps.iter_mut().zip(&cost.values) {
            *a *= phases[v as usize];
        }
        Ok(())
    }

    /// Applies `e^{-iγ C_⟨jk⟩}` for a single edge term.
    pub fn apply_edge_phase(&mut self, j: usize, k: usize, gamma: f64) -> Result<()> {
        if j >= self.n_qubits || k >= self.n_qubits {
            return Err(Error::InvalidArgument(format!("edge ({j}, {k}) out of range")));
        }
        let phase = Complex64::from_polar(1.0, -gamma);
        for (z, a) in self.amps.iter_mut().enumerate() {
            if ((z >> j) ^ (z >> k)) & 1 == 1 {
                *a *= phase;
            }
        }
        Ok(())
    }

    /// `e^{-iβσ^x}` on every qubit, as an in-place butterfly per qubit.
    pub fn apply_mixer(&mut self, beta: f64) {
        for q in 0..self.n_qubits {
            self.apply_x_rotation(q, beta);
        }
    }

    /// `e^{-iβσ^x}` on qubit `q` only.
    pub fn apply_x_rotation(&mut self, q: usize, beta: f64) {
        let (s, c) = beta.sin_cos();
        let stride = 1usize << q;
        for block in self.amps.chunks_exact_mut(stride << 1) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                // (a, b) -> (a cos β - i b sin β, b cos β - i a sin β)
                *a = Complex64::new(x.re * c + y.im * s, x.im * c - y.re * s);
                *b = Complex64::new(y.re * c + x.im * s, y.im * c - x.re * s);
            }
        }
    }

    /// `⟨C⟩ = Σ_z |amp(z)|² C(z)`.
    pub fn expectation(&self, cost: &CostDiagonal) -> Result<f64> {
        self.check_dim(cost)?;
        Ok(self
            .amps
            .iter()
            .zip(&cost.values)
            .map(|(a, &v)| a.norm_sqr() * f64::from(v))
            .sum())
    }

    /// `⟨C²⟩ - ⟨C⟩²`, clamped at zero against rounding.
    pub fn variance(&self, cost: &CostDiagonal) -> Result<f64> {
        self.check_dim(cost)?;
        let (mut m1, mut m2) = (0.0, 0.0);
        for (a, &v) in self.amps.iter().zip(&cost.values) {
            let p = a.norm_sqr();
            let v = f64::from(v);
            m1 += p * v;
            m2 += p * v * v;
        }
        Ok((m2 - m1 * m1).max(0.0))
    }

    /// Draws `shots` basis indices i.i.d. from `|amp(z)|²`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, shots: usize) -> Result<Vec<usize>> {
        sample_indices(&self.amps, rng, shots)
    }
}

pub(crate) fn sample_indices<R: Rng + ?Sized>(
    amps: &[Complex64],
    rng: &mut R,
    shots: usize,
) -> Result<Vec<usize>> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let dist = WeightedIndex::new(amps.iter().map(|a| a.norm_sqr()))
        .map_err(|e| Error::InvalidArgument(format!("cannot sample state: {e}")))?;
    Ok((0..shots).map(|_| dist.sample(rng)).collect())
}

pub fn uniform_state(n_qubits: usize) -> Result<QuantumState> {
    QuantumState::uniform(n_qubits)
}

/// `U(B,β_p) U(C,γ_p) ⋯ U(B,β_1) U(C,γ_1) |s⟩` for a precomputed cost.
pub fn prepare_with_cost(cost: &CostDiagonal, schedule: &AngleSchedule) -> Result<QuantumState> {
    let mut state = QuantumState::uniform_with_limit(cost.n_qubits, usize::MAX)?;
    for (&gamma, &beta) in schedule.gammas.iter().zip(&schedule.betas) {
        state.apply_phase_separator(cost, gamma)?;
        state.apply_mixer(beta);
    }
    Ok(state)
}

pub fn prepare_qaoa_state(graph: &Graph, schedule: &AngleSchedule) -> Result<QuantumState> {
    prepare_with_cost(&CostDiagonal::maxcut(graph)?, schedule)
}

/// Renders basis index `z` as a bit string, character `j` being qubit `j`.
pub fn bitstring(z: u64, n: usize) -> String {
    (0..n).map(|j| if (z >> j) & 1 == 1 { '1' } else { '0' }).collect()
}
