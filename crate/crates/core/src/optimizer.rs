//! Derivative-free maximization: an exhaustive product grid (or seeded random
//! starts when the grid would be too large) followed by compass search.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::AngleSchedule;

/// One coordinate of a search box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    /// `[0, period)` with wrap-around; the grid omits the right end.
    Periodic { period: f64 },
    /// `[lo, hi]`, clamped; the grid includes both ends.
    Bounded { lo: f64, hi: f64 },
    /// Unrestricted during refinement; the grid covers `[lo, hi)`.
    Unbounded { lo: f64, hi: f64 },
}

impl Axis {
    fn grid_point(&self, k: usize, resolution: usize) -> f64 {
        let k = k as f64;
        match *self {
            Axis::Periodic { period } => period * k / resolution as f64,
            Axis::Bounded { lo, hi } => lo + (hi - lo) * k / (resolution - 1) as f64,
            Axis::Unbounded { lo, hi } => lo + (hi - lo) * k / resolution as f64,
        }
    }

    fn spacing(&self, resolution: usize) -> f64 {
        match *self {
            Axis::Periodic { period } => period / resolution as f64,
            Axis::Bounded { lo, hi } => (hi - lo) / (resolution - 1) as f64,
            Axis::Unbounded { lo, hi } => (hi - lo) / resolution as f64,
        }
    }

    fn project(&self, x: f64) -> f64 {
        match *self {
            Axis::Periodic { period } => {
                let r = x.rem_euclid(period);
                if r >= period {
                    0.0
                } else {
                    r
                }
            }
            Axis::Bounded { lo, hi } => x.clamp(lo, hi),
            Axis::Unbounded { .. } => x,
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            Axis::Periodic { period } => rng.gen_range(0.0..period),
            Axis::Bounded { lo, hi } | Axis::Unbounded { lo, hi } => rng.gen_range(lo..hi),
        }
    }
}

/// Best point found by a search over a flat parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub params: Vec<f64>,
    pub value: f64,
    pub evaluations: u64,
}

fn finite_or_neg_inf(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Evaluates every point of the `resolution^d` product grid and returns the
/// maximum. Ties go to the lexicographically smallest point.
pub fn grid_maximize<F>(objective: F, axes: &[Axis], resolution: usize, budget: u64) -> Result<SearchResult>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    Ok(grid_top_k(objective, axes, resolution, budget, 1)?.remove(0))
}

/// Every point of the `resolution^d` product grid with its value, in
/// lexicographic order of the grid index. Fails before evaluating anything
/// if the grid is larger than `budget`.
pub fn grid_evaluate<F>(objective: F, axes: &[Axis], resolution: usize, budget: u64) -> Result<Vec<(Vec<f64>, f64)>>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    if resolution < 2 {
        return Err(Error::InvalidArgument("grid resolution must be at least 2".into()));
    }
    if axes.is_empty() {
        return Err(Error::InvalidArgument("empty search".into()));
    }
    let total = u32::try_from(axes.len())
        .ok()
        .and_then(|d| (resolution as u64).checked_pow(d))
        .unwrap_or(u64::MAX);
    if total > budget {
        return Err(Error::Budget {
            requested: total,
            budget,
        });
    }
    let point = |mut idx: u64| -> Vec<f64> {
        let mut x = vec![0.0; axes.len()];
        for d in (0..axes.len()).rev() {
            x[d] = axes[d].grid_point((idx % resolution as u64) as usize, resolution);
            idx /= resolution as u64;
        }
        x
    };
    (0..total)
        .into_par_iter()
        .map(|i| {
            let x = point(i);
            let v = objective(&x)?;
            Ok((x, v))
        })
        .collect()
}

/// The `k` best grid points in decreasing order of value (ties to the
/// lexicographically smaller point). `evaluations` on each entry is the grid
/// size.
pub fn grid_top_k<F>(
    objective: F,
    axes: &[Axis],
    resolution: usize,
    budget: u64,
    k: usize,
) -> Result<Vec<SearchResult>>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    if k == 0 {
        return Err(Error::InvalidArgument("empty search".into()));
    }
    let mut points = grid_evaluate(objective, axes, resolution, budget)?;
    let total = points.len() as u64;
    for pt in &mut points {
        pt.1 = finite_or_neg_inf(pt.1);
    }
    // stable sort keeps lexicographic order among equal values
    points.sort_by(|a, b| b.1.total_cmp(&a.1));
    Ok(points
        .into_iter()
        .take(k)
        .map(|(params, value)| SearchResult {
            params,
            value,
            evaluations: total,
        })
        .collect())
}

/// Hooke-Jeeves pattern search. An exploratory sweep tries `±step` along
/// each axis and keeps every strict improvement; after a successful sweep
/// the search jumps again by the same displacement and explores from there
/// for as long as that keeps improving. A sweep without improvement halves
/// all steps. Stops once the largest step drops below `tol` or `max_evals`
/// is reached.
///
/// The returned value is never below the value at `start`.
pub fn pattern_search<F>(
    objective: F,
    axes: &[Axis],
    start: &[f64],
    initial_steps: &[f64],
    tol: f64,
    max_evals: u64,
) -> Result<SearchResult>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    if start.len() != axes.len() || initial_steps.len() != axes.len() {
        return Err(Error::DimensionMismatch {
            expected: axes.len(),
            actual: start.len().min(initial_steps.len()),
        });
    }
    let evals = std::cell::Cell::new(0u64);
    let mut eval = |x: &[f64]| -> Result<Option<f64>> {
        if evals.get() >= max_evals {
            return Ok(None);
        }
        evals.set(evals.get() + 1);
        Ok(Some(finite_or_neg_inf(objective(x)?)))
    };
    let project = |x: &mut [f64]| {
        for (v, a) in x.iter_mut().zip(axes) {
            *v = a.project(*v);
        }
    };

    let mut x: Vec<f64> = start.to_vec();
    project(&mut x);
    let mut fx = eval(&x)?.expect("max_evals >= 1");
    let mut steps = initial_steps.to_vec();

    // Coordinate sweep around `base`; returns the end point, its value and
    // the displacement taken, or `None` once the budget runs out.
    let explore = |base: &[f64], fbase: f64, steps: &[f64], eval: &mut dyn FnMut(&[f64]) -> Result<Option<f64>>| {
        let mut y = base.to_vec();
        let mut fy = fbase;
        let mut moved = vec![0.0; base.len()];
        let mut trial = y.clone();
        for d in 0..axes.len() {
            for dir in [1.0, -1.0] {
                trial.copy_from_slice(&y);
                trial[d] = axes[d].project(y[d] + dir * steps[d]);
                if trial[d] == y[d] {
                    continue;
                }
                match eval(&trial)? {
                    None => return Ok::<_, Error>((y, fy, moved, true)),
                    Some(ft) if ft > fy => {
                        y.copy_from_slice(&trial);
                        fy = ft;
                        moved[d] += dir * steps[d];
                        break;
                    }
                    Some(_) => {}
                }
            }
        }
        Ok((y, fy, moved, false))
    };

    while steps.iter().cloned().fold(0.0, f64::max) >= tol {
        let (y, fy, mut delta, exhausted) = explore(&x, fx, &steps, &mut eval)?;
        if fy > fx {
            x = y;
            fx = fy;
        }
        if exhausted {
            break;
        }
        if delta.iter().all(|&d| d == 0.0) {
            for s in &mut steps {
                *s *= 0.5;
            }
            continue;
        }
        // pattern moves along the last successful displacement
        loop {
            let mut jump: Vec<f64> = x.iter().zip(&delta).map(|(v, d)| v + d).collect();
            project(&mut jump);
            let Some(fj) = eval(&jump)? else { break };
            let (z, fz, moved, exhausted) = explore(&jump, fj, &steps, &mut eval)?;
            if fz > fx {
                for (d, m) in delta.iter_mut().zip(&moved) {
                    *d += m;
                }
                x = z;
                fx = fz;
            } else {
                break;
            }
            if exhausted {
                break;
            }
        }
        if evals.get() >= max_evals {
            break;
        }
    }
    Ok(SearchResult {
        params: x,
        value: fx,
        evaluations: evals.get(),
    })
}

/// Result of an angle search.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub best_schedule: AngleSchedule,
    pub best_value: f64,
    pub evaluations: u64,
    pub grid_resolution: usize,
    pub refined: bool,
}

impl OptimizationResult {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.best_schedule.p(),
            "gammas": self.best_schedule.gammas(),
            "betas": self.best_schedule.betas(),
            "value": self.best_value,
            "evaluations": self.evaluations,
            "grid_resolution": self.grid_resolution,
        })
    }
}

/// Axes `[γ_1..γ_p, β_1..β_p]` over `[0, 2π)^p × [0, π)^p`.
pub fn angle_axes(p: usize, symmetry_reduction: bool) -> Vec<Axis> {
    let mut axes: Vec<Axis> = (0..p)
        .map(|_| Axis::Periodic { period: 2.0 * PI })
        .chain((0..p).map(|_| Axis::Periodic { period: PI }))
        .collect();
    if symmetry_reduction {
        // F(γ, β) = F(-γ, -β) for a real cost and real start state, so
        // γ_1 ∈ [0, π] covers every orbit.
        axes[0] = Axis::Bounded { lo: 0.0, hi: PI };
    }
    axes
}

struct Counted<'a, F> {
    f: &'a F,
    calls: AtomicU64,
}

impl<F> Counted<'_, F>
where
    F: Fn(&AngleSchedule) -> Result<f64>,
{
    fn call(&self, params: &[f64]) -> Result<f64> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        (self.f)(&AngleSchedule::from_vector(params)?)
    }
}

/// Grid stage on its own: the best of the `resolution^{2p}` angle grid.
pub fn grid_search<F>(objective: F, p: usize, resolution: usize, budget: u64) -> Result<OptimizationResult>
where
    F: Fn(&AngleSchedule) -> Result<f64> + Sync,
{
    if p == 0 {
        return Err(Error::InvalidArgument("level p must be at least 1".into()));
    }
    let counted = Counted {
        f: &objective,
        calls: AtomicU64::new(0),
    };
    let best = grid_maximize(|x| counted.call(x), &angle_axes(p, false), resolution, budget)?;
    Ok(OptimizationResult {
        best_schedule: AngleSchedule::from_vector(&best.params)?,
        best_value: best.value,
        evaluations: counted.calls.load(Ordering::Relaxed),
        grid_resolution: resolution,
        refined: false,
    })
}

/// Compass-search refinement from `start` with initial step `initial_step`
/// radians on every angle.
pub fn refine<F>(objective: F, start: &AngleSchedule, initial_step: f64, tol: f64) -> Result<OptimizationResult>
where
    F: Fn(&AngleSchedule) -> Result<f64>,
{
    let counted = Counted {
        f: &objective,
        calls: AtomicU64::new(0),
    };
    let axes = angle_axes(start.p(), false);
    let r = pattern_search(
        |x| counted.call(x),
        &axes,
        &start.to_vector(),
        &vec![initial_step; axes.len()],
        tol,
        DEFAULT_REFINE_EVALS,
    )?;
    Ok(OptimizationResult {
        best_schedule: AngleSchedule::from_vector(&r.params)?,
        best_value: r.value,
        evaluations: counted.calls.load(Ordering::Relaxed),
        grid_resolution: 0,
        refined: true,
    })
}

const DEFAULT_REFINE_EVALS: u64 = 200_000;

/// Settings for [`maximize_fp`] and the other grid + refine searches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Grid points per axis; `None` picks 64 / 24 / 10 for p = 1 / 2 / 3.
    pub grid_resolution: Option<usize>,
    /// Largest p searched with a full grid; above it, random multistart.
    pub max_grid_p: usize,
    /// Number of random starts in multistart mode. Only used when no warm
    /// start is given; a warm start is refined on its own.
    pub multistart: usize,
    /// Number of best grid points refined.
    pub refine_top: usize,
    /// Cap on grid evaluations.
    pub budget: u64,
    /// Refinement stops when the step falls below this.
    pub tol: f64,
    /// Cap on evaluations per refinement run.
    pub refine_max_evals: u64,
    /// Seed for multistart points.
    pub seed: u64,
    /// Restrict γ_1 to `[0, π]` using time-reversal symmetry.
    pub symmetry_reduction: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            grid_resolution: None,
            max_grid_p: 3,
            multistart: 24,
            refine_top: 4,
            budget: 4_000_000,
            tol: 1e-8,
            refine_max_evals: DEFAULT_REFINE_EVALS,
            seed: 0,
            symmetry_reduction: false,
        }
    }
}

impl OptimizerConfig {
    pub fn resolution_for(&self, p: usize) -> usize {
        self.grid_resolution.unwrap_or(match p {
            1 => 64,
            2 => 24,
            _ => 10,
        })
    }
}

/// Generic grid-or-multistart then refine over a box. `warm_starts` are
/// refined alongside the grid candidates, so the result is never worse
/// than any of them. Above the grid levels, random starts are drawn only
/// when there is no warm start.
pub fn maximize_box<F>(
    objective: F,
    axes: &[Axis],
    use_grid: bool,
    resolution: usize,
    config: &OptimizerConfig,
    warm_starts: &[Vec<f64>],
) -> Result<SearchResult>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    let calls = AtomicU64::new(0);
    let counted = |x: &[f64]| {
        calls.fetch_add(1, Ordering::Relaxed);
        objective(x)
    };

    let mut starts: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    if use_grid {
        let steps: Vec<f64> = axes.iter().map(|a| a.spacing(resolution)).collect();
        for c in grid_top_k(counted, axes, resolution, config.budget, config.refine_top.max(1))? {
            starts.push((c.params, steps.clone()));
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let steps: Vec<f64> = axes.iter().map(|a| a.spacing(8)).collect();
        let count = if warm_starts.is_empty() { config.multistart.max(1) } else { 0 };
        for _ in 0..count {
            starts.push((axes.iter().map(|a| a.sample(&mut rng)).collect(), steps.clone()));
        }
    }
    let warm_steps: Vec<f64> = axes.iter().map(|a| a.spacing(resolution.max(8))).collect();
    for w in warm_starts {
        starts.push((w.clone(), warm_steps.clone()));
    }

    let mut best: Option<SearchResult> = None;
    for (start, steps) in starts {
        let r = pattern_search(counted, axes, &start, &steps, config.tol, config.refine_max_evals)?;
        if best.as_ref().is_none_or(|b| r.value > b.value) {
            best = Some(r);
        }
    }
    let mut best = best.expect("at least one start");
    best.evaluations = calls.load(Ordering::Relaxed);
    Ok(best)
}

/// Maximizes an `F_p` objective: grid (p ≤ `max_grid_p`) or random starts,
/// then compass refinement of the best candidates and of every warm start.
pub fn maximize_fp<F>(
    objective: F,
    p: usize,
    config: &OptimizerConfig,
    warm_starts: &[AngleSchedule],
) -> Result<OptimizationResult>
where
    F: Fn(&AngleSchedule) -> Result<f64> + Sync,
{
    if p == 0 {
        return Err(Error::InvalidArgument("level p must be at least 1".into()));
    }
    let axes = angle_axes(p, config.symmetry_reduction);
    let use_grid = p <= config.max_grid_p;
    let resolution = config.resolution_for(p);
    let warm: Vec<Vec<f64>> = warm_starts
        .iter()
        .map(|s| {
            if s.p() > p {
                return Err(Error::InvalidArgument("warm start has more layers than p".into()));
            }
            Ok(s.extended(p - s.p()).to_vector())
        })
        .collect::<Result<_>>()?;
    let r = maximize_box(
        |x| objective(&AngleSchedule::from_vector(x)?),
        &axes,
        use_grid,
        resolution,
        config,
        &warm,
    )?;
    Ok(OptimizationResult {
        best_schedule: AngleSchedule::from_vector(&r.params)?,
        best_value: r.value,
        evaluations: r.evaluations,
        grid_resolution: if use_grid { resolution } else { 0 },
        refined: true,
    })
}

/// Maximizes levels `1..=max_p` in turn, warm-starting each level from the
/// previous optimum with a zero layer appended. The values are therefore
/// nondecreasing in `p`.
pub fn maximize_levels<F>(objective: F, max_p: usize, config: &OptimizerConfig) -> Result<Vec<OptimizationResult>>
where
    F: Fn(&AngleSchedule) -> Result<f64> + Sync,
{
    let mut out: Vec<OptimizationResult> = Vec::with_capacity(max_p);
    for p in 1..=max_p {
        let warm: Vec<AngleSchedule> = out.last().map(|r| r.best_schedule.clone()).into_iter().collect();
        out.push(maximize_fp(&objective, p, config, &warm)?);
    }
    Ok(out)
}
