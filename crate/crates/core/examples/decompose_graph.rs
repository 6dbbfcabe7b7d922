//! Splits a graph into edge-neighborhood types and checks that the weighted
//! sum of per-type values equals F_p on the full state.
//!
//!     cargo run --example decompose_graph -- data/petersen.edges 2

use qaoa_core::graph::{decompose, parse_graph, random_regular_graph};
use qaoa_core::qaoa::{fp_decomposed, fp_full};
use qaoa_core::statevector::AngleSchedule;

fn main() -> qaoa_core::Result<()> {
    let mut args = std::env::args().skip(1);
    let graph = match args.next() {
        Some(path) => parse_graph(&std::fs::read_to_string(path)?)?,
        None => random_regular_graph(12, 3, 1)?,
    };
    let p = args.next().and_then(|a| a.parse().ok()).unwrap_or(1);

    let d = decompose(&graph, p)?;
    println!("{}", serde_json::to_string_pretty(&d.to_json())?);

    let sched = AngleSchedule::wrapped(&vec![0.4; p], &vec![0.3; p])?;
    let split = fp_decomposed(&d, &sched)?;
    let full = fp_full(&graph, &sched)?;
    println!("F_p decomposed = {:.12}, full = {:.12}", split.value, full.value);
    Ok(())
}
