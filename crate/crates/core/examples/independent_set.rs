//! The independent-set variant on a 6-cycle: basis, optimized levels 1..=3
//! and a handful of samples.

use qaoa_core::graph::ring_graph;
use qaoa_core::mis_variant::{
    build_mixer_matrix, enumerate_basis, max_independent_set_size, maximize_variant, prepare_variant_state,
    sample_variant, DEFAULT_SERIES_TOL,
};
use qaoa_core::optimizer::OptimizerConfig;
use qaoa_core::statevector::bitstring;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qaoa_core::Result<()> {
    let g = ring_graph(6)?;
    let basis = enumerate_basis(&g)?;
    let mixer = build_mixer_matrix(&basis);
    println!("{} legal strings, largest set {}", basis.size(), max_independent_set_size(&basis));

    let config = OptimizerConfig::default();
    let mut warm = None;
    for p in 1..=3 {
        let r = maximize_variant(&basis, &mixer, p, 2.0 * std::f64::consts::PI, &config, warm.as_ref())?;
        println!("p={p}  M_p={:.6}  b={:?}  gamma={:?}", r.best_value, r.best_schedule.bs(), r.best_schedule.gammas());
        warm = Some(r.best_schedule);
    }

    let state = prepare_variant_state(&basis, &mixer, warm.as_ref().unwrap(), DEFAULT_SERIES_TOL)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for z in sample_variant(&state, &mut rng, 8)? {
        println!("{} (size {})", bitstring(z, basis.n()), z.count_ones());
    }
    Ok(())
}
