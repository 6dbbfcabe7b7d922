//! Minimizes the p = 1 approximation-ratio bound for 3-regular graphs over
//! the densities s = S/n of crossed squares and t = T/n of isolated triangles.

use qaoa_core::maxcut_analysis::worst_case_ratio;
use qaoa_core::optimizer::OptimizerConfig;

fn main() -> qaoa_core::Result<()> {
    let w = worst_case_ratio(11, &OptimizerConfig::default())?;
    for x in w.surface.iter().step_by(7) {
        println!("s={:.4} t={:.4}  ratio={:.6}", x.s, x.t, x.ratio);
    }
    println!(
        "minimum {:.6} at s={:.4}, t={:.4} (gamma={:.4}, beta={:.4})",
        w.ratio, w.s, w.t, w.gamma, w.beta
    );
    Ok(())
}
