//! f at p = 2 on the 14-vertex tree, the only edge neighborhood of a
//! 3-regular graph without short cycles. Takes a few minutes.

use qaoa_core::maxcut_analysis::regular_tree_type;
use qaoa_core::optimizer::{maximize_fp, OptimizerConfig};
use qaoa_core::qaoa::SubgraphKernel;
use qaoa_core::statevector::DEFAULT_MAX_QUBITS;

fn main() -> qaoa_core::Result<()> {
    let tree = regular_tree_type(3, 2)?;
    let kernel = SubgraphKernel::new(&tree, DEFAULT_MAX_QUBITS)?;
    println!("{} qubits", kernel.n_qubits());
    let r = maximize_fp(|s| kernel.evaluate(s), 2, &OptimizerConfig::default(), &[])?;
    println!(
        "max f = {:.6}  gammas = {:?}  betas = {:?}  ({} evaluations)",
        r.best_value,
        r.best_schedule.gammas(),
        r.best_schedule.betas(),
        r.evaluations
    );
    Ok(())
}
