//! Prepares the optimized p = 1 state for a random 3-regular graph, compares
//! its variance with the concentration bound and samples cuts.

use qaoa_core::graph::random_regular_graph;
use qaoa_core::maxcut_analysis::brute_force_max_cut;
use qaoa_core::optimizer::{maximize_fp, OptimizerConfig};
use qaoa_core::qaoa::{concentration_bound, repetition_estimate, FullObjective};
use qaoa_core::statevector::{bitstring, DEFAULT_MAX_QUBITS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qaoa_core::Result<()> {
    let g = random_regular_graph(14, 3, 11)?;
    let m = g.n_edges();
    let objective = FullObjective::new(&g, DEFAULT_MAX_QUBITS)?;
    let r = maximize_fp(|s| objective.evaluate(s), 1, &OptimizerConfig::default(), &[])?;
    let state = objective.prepare(&r.best_schedule)?;

    let variance = state.variance(objective.cost())?;
    let bound = concentration_bound(3, 1, m)?;
    println!("F_1 = {:.4}, variance {:.3} <= {}", r.best_value, variance, bound.variance_bound);

    let shots = repetition_estimate(m, 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let samples = state.sample(&mut rng, shots)?;
    let best = samples.iter().max_by_key(|&&z| objective.cost().values()[z]).unwrap();
    println!(
        "best of {shots} shots: {} cuts {} (max cut {})",
        bitstring(*best as u64, g.n_vertices()),
        objective.cost().values()[*best],
        brute_force_max_cut(&g)?
    );
    Ok(())
}
