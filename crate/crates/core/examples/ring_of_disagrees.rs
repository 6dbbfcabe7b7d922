//! M_p/n on the ring for p = 1..=P (default 3), each level warm-started from
//! the previous one.
//!
//!     cargo run --release --example ring_of_disagrees -- 4

use qaoa_core::maxcut_analysis::{ring_closed_form, ring_mp};
use qaoa_core::optimizer::OptimizerConfig;

fn main() -> qaoa_core::Result<()> {
    let max_p: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let n = 64;
    let config = OptimizerConfig::default();
    let mut warm = Vec::new();
    println!("{:>2}  {:>12}  {:>12}  {:>10}", "p", "M_p/n", "(2p+1)/(2p+2)", "deviation");
    for p in 1..=max_p {
        let r = ring_mp(n, p, &config, &warm)?;
        let value = r.best_value / n as f64;
        let exact = ring_closed_form(p);
        println!("{p:>2}  {value:>12.8}  {exact:>12.8}  {:>10.2e}", value - exact);
        warm = vec![r.best_schedule];
    }
    Ok(())
}
