//! p = 1 ratio lower bound for a few 3-regular graphs.

use qaoa_core::graph::{complete_graph, random_regular_graph, Graph};
use qaoa_core::maxcut_analysis::certify_instance;
use qaoa_core::optimizer::OptimizerConfig;

fn main() -> qaoa_core::Result<()> {
    let prism = Graph::new(
        6,
        [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)],
    )?;
    let config = OptimizerConfig::default();
    for (name, g) in [
        ("K4", complete_graph(4)?),
        ("prism", prism),
        ("random n=20", random_regular_graph(20, 3, 7)?),
    ] {
        let c = certify_instance(&g, &config)?;
        println!(
            "{name:<12} S={} T={} M1={:.4} bound={} ratio >= {:.4}{}",
            c.s,
            c.t,
            c.m1,
            c.cut_upper_bound,
            c.ratio_lower_bound,
            if c.k4_special_case { " (K4, exact max cut)" } else { "" }
        );
    }
    Ok(())
}
