//! F_1 on a coarse (gamma, beta) grid for the Petersen graph, printed as a
//! text heat map.

use qaoa_core::graph::Graph;
use qaoa_core::optimizer::{angle_axes, grid_evaluate};
use qaoa_core::qaoa::MaxCutObjective;
use qaoa_core::statevector::{AngleSchedule, DEFAULT_MAX_QUBITS};

fn main() -> qaoa_core::Result<()> {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    let g = Graph::new(10, outer.chain(spokes).chain(inner))?;
    let objective = MaxCutObjective::for_graph(&g, 1, DEFAULT_MAX_QUBITS)?;

    let res = 16;
    let points = grid_evaluate(
        |x| objective.evaluate(&AngleSchedule::from_vector(x)?),
        &angle_axes(1, false),
        res,
        u64::MAX,
    )?;
    let shades = [' ', '.', ':', '-', '=', '+', '*', '#', '%', '@'];
    let (lo, hi) = points.iter().fold((f64::MAX, f64::MIN), |(l, h), p| (l.min(p.1), h.max(p.1)));
    for row in points.chunks(res) {
        let line: String = row
            .iter()
            .map(|p| shades[(((p.1 - lo) / (hi - lo)) * 9.0).round() as usize])
            .collect();
        println!("gamma={:.3} |{line}|", row[0].0[0]);
    }
    println!("F_1 ranges over [{lo:.4}, {hi:.4}] for m = {}", g.n_edges());
    Ok(())
}
