//! The `qaoa` command line: argument parsing, the per-command pipelines and
//! report rendering. Every report is wrapped as
//! `{"config": ..., "results": ..., "version": ...}`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{parse_graph, Graph};
use crate::maxcut_analysis::{brute_force_max_cut, certify_instance, ring_closed_form, ring_mp, worst_case_ratio};
use crate::mis_variant::{
    build_mixer_matrix, enumerate_basis_with_limit, max_independent_set_size, maximize_variant,
    prepare_variant_state, sample_variant, VariantSchedule, DEFAULT_MAX_BASIS, DEFAULT_SERIES_TOL,
};
use crate::optimizer::{angle_axes, grid_evaluate, maximize_levels, OptimizationResult, OptimizerConfig};
use crate::qaoa::{concentration_bound, repetition_estimate, MaxCutObjective};
use crate::statevector::{bitstring, AngleSchedule, DEFAULT_MAX_QUBITS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;
pub const EXIT_BUDGET: i32 = 5;
pub const EXIT_INFEASIBLE: i32 = 6;
pub const EXIT_IO: i32 = 7;

/// Highest ring level without `--extended-ring`, and with it.
pub const RING_P_CAP: usize = 3;
pub const RING_P_CAP_EXTENDED: usize = 6;

/// Exit code for each error class.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_) => EXIT_PARSE,
        Error::Resource { .. } => EXIT_RESOURCE,
        Error::Budget { .. } => EXIT_BUDGET,
        Error::Infeasible(_) | Error::NotRegular { .. } | Error::InvalidGraph(_) => EXIT_INFEASIBLE,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_OTHER,
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "qaoa", version, about = "QAOA simulation for MaxCut and independent set")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Number of QAOA levels (for `ring`, the highest level)
    #[arg(long, global = true, default_value_t = 1)]
    pub p: usize,
    /// Angle grid points per axis (default 64 / 24 / 10 for p = 1 / 2 / 3)
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Measurement shots (default: repetition estimate for maxcut, 1024 for mis)
    #[arg(long, global = true)]
    pub shots: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest full state vector, in qubits
    #[arg(long = "limit-qubits", global = true, default_value_t = DEFAULT_MAX_QUBITS)]
    pub limit_qubits: usize,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Allow `ring` up to p = 6
    #[arg(long = "extended-ring", global = true)]
    pub extended_ring: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Optimize angles for a graph, then sample cuts from the prepared state
    Maxcut {
        graph: PathBuf,
        /// Constant c in the shot estimate c·m·ln m
        #[arg(long, default_value_t = 1.0)]
        repetition_constant: f64,
    },
    /// M_p/n on the ring for p = 1..=P against (2p+1)/(2p+2)
    Ring {
        #[arg(long, default_value_t = 64)]
        n: usize,
    },
    /// Minimize the p = 1 ratio bound over 3-regular structure densities
    WorstCase {
        /// Lattice points per axis on the (s, t) triangle
        #[arg(long, default_value_t = 21)]
        st_grid: usize,
    },
    /// p = 1 ratio lower bound for a connected 3-regular graph
    Certify { graph: PathBuf },
    /// Independent-set variant on the legal-string space
    Mis {
        graph: PathBuf,
        /// Grid window [0, w) for each mixer time b
        #[arg(long, default_value_t = 2.0 * PI)]
        b_window: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_BASIS)]
        limit_basis: usize,
    },
    /// F_p on every point of the angle grid
    Sweep { graph: PathBuf },
}

/// The fully resolved settings of one run, embedded in its report.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph_file: Option<String>,
    pub p: usize,
    pub grid_resolution: Option<usize>,
    pub shots: Option<usize>,
    pub seed: u64,
    pub limit_qubits: usize,
    pub format: Format,
    pub extended_ring: bool,
    pub output_path: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<&'static str, Value>,
    pub optimizer: OptimizerConfig,
}

/// A finished run: the JSON envelope plus an optional CSV table.
#[derive(Debug, Clone)]
pub struct Report {
    pub config: ExperimentConfig,
    pub results: Value,
    pub table: Option<Table>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "config": self.config,
            "results": self.results,
            "version": env!("CARGO_PKG_VERSION"),
        })
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.to_json())? + "\n"),
            Format::Csv => {
                let table = self.table.as_ref().ok_or_else(|| {
                    Error::InvalidArgument(format!("{} has no CSV output", self.config.command))
                })?;
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| Error::Io(e.into());
                w.write_record(&table.header).map_err(io)?;
                for row in &table.rows {
                    w.write_record(row).map_err(io)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
                Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Stream {
    Angles = 0,
    Shots = 1,
}

/// Independent generator for one named use of the run seed, so that e.g.
/// changing the shot count leaves the optimizer path untouched.
fn substream(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

fn read_graph(path: &Path) -> Result<Graph> {
    Ok(parse_graph(&fs::read_to_string(path)?)?)
}

fn fmt(x: f64) -> String {
    format!("{x}")
}

fn base_config(command: &'static str, common: &CommonArgs) -> Result<ExperimentConfig> {
    if common.p == 0 {
        return Err(Error::InvalidArgument("--p must be at least 1".into()));
    }
    if common.grid.is_some_and(|g| g < 2) {
        return Err(Error::InvalidArgument("--grid must be at least 2".into()));
    }
    if common.shots == Some(0) {
        return Err(Error::InvalidArgument("--shots must be at least 1".into()));
    }
    if common.limit_qubits == 0 || common.limit_qubits > 30 {
        return Err(Error::InvalidArgument("--limit-qubits must be in 1..=30".into()));
    }
    let optimizer = OptimizerConfig {
        grid_resolution: common.grid,
        seed: substream(common.seed, Stream::Angles).next_u64(),
        ..OptimizerConfig::default()
    };
    Ok(ExperimentConfig {
        command,
        graph_file: None,
        p: common.p,
        grid_resolution: common.grid,
        shots: None,
        seed: common.seed,
        limit_qubits: common.limit_qubits,
        format: common.format,
        extended_ring: common.extended_ring,
        output_path: common.out.as_ref().map(|p| p.display().to_string()),
        extra: BTreeMap::new(),
        optimizer,
    })
}

/// Runs one parsed command and returns its report without writing it.
pub fn run(cli: &Cli) -> Result<Report> {
    let common = &cli.common;
    match &cli.command {
        Command::Maxcut {
            graph,
            repetition_constant,
        } => {
            let mut config = base_config("maxcut", common)?;
            config.graph_file = Some(graph.display().to_string());
            config.extra.insert("repetition_constant", json!(repetition_constant));
            run_maxcut(config, &read_graph(graph)?, common.shots, *repetition_constant)
        }
        Command::Ring { n } => {
            let mut config = base_config("ring", common)?;
            config.extra.insert("n", json!(n));
            run_ring(config, *n)
        }
        Command::WorstCase { st_grid } => {
            let mut config = base_config("worst-case", common)?;
            config.extra.insert("st_grid", json!(st_grid));
            run_worst_case(config, *st_grid)
        }
        Command::Certify { graph } => {
            let mut config = base_config("certify", common)?;
            config.graph_file = Some(graph.display().to_string());
            run_certify(config, &read_graph(graph)?)
        }
        Command::Mis {
            graph,
            b_window,
            limit_basis,
        } => {
            let mut config = base_config("mis", common)?;
            config.graph_file = Some(graph.display().to_string());
            config.extra.insert("b_window", json!(b_window));
            config.extra.insert("limit_basis", json!(limit_basis));
            run_mis(config, &read_graph(graph)?, common.shots, *b_window, *limit_basis)
        }
        Command::Sweep { graph } => {
            let mut config = base_config("sweep", common)?;
            config.graph_file = Some(graph.display().to_string());
            run_sweep(config, &read_graph(graph)?)
        }
    }
}

/// Angle optimization, then (when the graph fits in a state vector)
/// variance, sampling and the exact approximation ratio.
pub fn run_maxcut(mut config: ExperimentConfig, graph: &Graph, shots: Option<usize>, c: f64) -> Result<Report> {
    let p = config.p;
    let (n, m) = (graph.n_vertices(), graph.n_edges());
    if m == 0 {
        return Err(Error::InvalidGraph("graph has no edges".into()));
    }
    let objective = MaxCutObjective::for_graph(graph, p, config.limit_qubits)?;
    let levels = maximize_levels(|s| objective.evaluate(s), p, &config.optimizer)?;
    let best = levels.last().expect("p >= 1");
    let evaluation = objective.evaluate_detailed(&best.best_schedule)?;
    let bound = concentration_bound(graph.max_degree().max(2), p, m)?;
    let shots = match shots {
        Some(s) => s,
        None => repetition_estimate(m.max(2), c)?,
    };
    config.shots = Some(shots);

    let mut table = None;
    let sampling = if n <= config.limit_qubits {
        let full = crate::qaoa::FullObjective::new(graph, config.limit_qubits)?;
        let state = full.prepare(&best.best_schedule)?;
        let variance = state.variance(full.cost())?;
        let mut rng = substream(config.seed, Stream::Shots);
        let samples = state.sample(&mut rng, shots)?;
        let cuts: Vec<u32> = samples.iter().map(|&z| full.cost().values()[z]).collect();
        let (best_idx, &best_cut) = cuts
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("shots >= 1");
        let mean = cuts.iter().map(|&c| f64::from(c)).sum::<f64>() / shots as f64;
        let max_cut = brute_force_max_cut(graph)?;
        table = Some(Table {
            header: vec!["shot".into(), "bitstring".into(), "cut".into()],
            rows: samples
                .iter()
                .zip(&cuts)
                .enumerate()
                .map(|(i, (&z, c))| vec![i.to_string(), bitstring(z as u64, n), c.to_string()])
                .collect(),
        });
        json!({
            "shots": shots,
            "best_cut": best_cut,
            "best_bitstring": bitstring(samples[best_idx] as u64, n),
            "sample_mean": mean,
            "variance": variance,
            "max_cut": max_cut,
            "ratio": evaluation.value / max_cut as f64,
            "best_sample_ratio": f64::from(best_cut) / max_cut as f64,
        })
    } else {
        Value::Null
    };

    let results = json!({
        "n": n,
        "m": m,
        "method": objective.method(),
        "optimization": best.to_json(),
        "levels": levels.iter().map(OptimizationResult::to_json).collect::<Vec<_>>(),
        "fp": evaluation,
        "concentration_bound": bound,
        "repetition_estimate": repetition_estimate(m.max(2), c)?,
        "sampling": sampling,
    });
    Ok(Report {
        config,
        results,
        table,
    })
}

/// `M_p / n` for `p = 1..=config.p`, each level warm-started from the last.
pub fn run_ring(config: ExperimentConfig, n: usize) -> Result<Report> {
    let cap = if config.extended_ring {
        RING_P_CAP_EXTENDED
    } else {
        RING_P_CAP
    };
    if config.p > cap {
        return Err(Error::Resource {
            what: "ring level p (raise with --extended-ring)",
            requested: config.p,
            limit: cap,
        });
    }
    let mut rows = Vec::new();
    let mut warm: Vec<AngleSchedule> = Vec::new();
    for p in 1..=config.p {
        let r = ring_mp(n, p, &config.optimizer, &warm)?;
        let per_vertex = r.best_value / n as f64;
        let closed = ring_closed_form(p);
        rows.push(json!({
            "p": p,
            "mp_over_n": per_vertex,
            "closed_form": closed,
            "deviation": per_vertex - closed,
            "gammas": r.best_schedule.gammas(),
            "betas": r.best_schedule.betas(),
            "evaluations": r.evaluations,
        }));
        warm = vec![r.best_schedule];
    }
    let table = Table {
        header: ["p", "mp_over_n", "closed_form", "deviation"].map(String::from).to_vec(),
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    r["p"].to_string(),
                    r["mp_over_n"].to_string(),
                    r["closed_form"].to_string(),
                    r["deviation"].to_string(),
                ]
            })
            .collect(),
    };
    Ok(Report {
        config,
        results: json!({ "n": n, "rows": rows }),
        table: Some(table),
    })
}

/// The `(s, t)` minimizer of the ratio bound and the whole surface.
pub fn run_worst_case(config: ExperimentConfig, st_grid: usize) -> Result<Report> {
    let w = worst_case_ratio(st_grid, &config.optimizer)?;
    let table = Table {
        header: ["s", "t", "m1", "ratio", "gamma", "beta"].map(String::from).to_vec(),
        rows: w
            .surface
            .iter()
            .map(|x| [x.s, x.t, x.m1, x.ratio, x.gamma, x.beta].map(fmt).to_vec())
            .collect(),
    };
    let results = json!({
        "s": w.s,
        "t": w.t,
        "ratio": w.ratio,
        "gamma": w.gamma,
        "beta": w.beta,
        "surface_points": w.surface.len(),
        "surface": w.surface,
    });
    Ok(Report {
        config,
        results,
        table: Some(table),
    })
}

pub fn run_certify(config: ExperimentConfig, graph: &Graph) -> Result<Report> {
    let cert = certify_instance(graph, &config.optimizer)?;
    let mut results = serde_json::to_value(&cert)?;
    if let Some(s) = &cert.schedule {
        results["gammas"] = json!(s.gammas());
        results["betas"] = json!(s.betas());
    }
    let table = Table {
        header: ["n", "S", "T", "M1", "cut_upper_bound", "ratio_lower_bound", "k4_special_case"]
            .map(String::from)
            .to_vec(),
        rows: vec![vec![
            cert.n.to_string(),
            cert.s.to_string(),
            cert.t.to_string(),
            fmt(cert.m1),
            fmt(cert.cut_upper_bound),
            fmt(cert.ratio_lower_bound),
            cert.k4_special_case.to_string(),
        ]],
    };
    Ok(Report {
        config,
        results,
        table: Some(table),
    })
}

/// Levels `1..=p` of the independent-set variant, warm-started level by
/// level, then sampling from the final state.
pub fn run_mis(
    mut config: ExperimentConfig,
    graph: &Graph,
    shots: Option<usize>,
    b_window: f64,
    limit_basis: usize,
) -> Result<Report> {
    let basis = enumerate_basis_with_limit(graph, limit_basis)?;
    let mixer = build_mixer_matrix(&basis);
    let mut levels = Vec::new();
    let mut warm: Option<VariantSchedule> = None;
    for p in 1..=config.p {
        let r = maximize_variant(&basis, &mixer, p, b_window, &config.optimizer, warm.as_ref())?;
        warm = Some(r.best_schedule.clone());
        levels.push(r);
    }
    let best = levels.last().expect("p >= 1");
    let shots = shots.unwrap_or(1024);
    config.shots = Some(shots);

    let state = prepare_variant_state(&basis, &mixer, &best.best_schedule, DEFAULT_SERIES_TOL)?;
    let mut rng = substream(config.seed, Stream::Shots);
    let samples = sample_variant(&state, &mut rng, shots)?;
    let n = graph.n_vertices();
    let sizes: Vec<u32> = samples.iter().map(|z| z.count_ones()).collect();
    let (best_idx, &best_size) = sizes
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("shots >= 1");
    let mean = sizes.iter().map(|&s| f64::from(s)).sum::<f64>() / shots as f64;
    let optimum = (n <= 16).then(|| max_independent_set_size(&basis));

    let mut optimization = best.to_json();
    optimization["variant"] = json!(true);
    let results = json!({
        "n": n,
        "basis_size": basis.size(),
        "optimization": optimization,
        "fp": {
            "method": "full",
            "p": best.best_schedule.p(),
            "value": best.best_value,
            "variant": true,
        },
        "levels": levels.iter().map(|l| l.to_json()).collect::<Vec<_>>(),
        "shots": shots,
        "best_set": bitstring(samples[best_idx], n),
        "best_set_size": best_size,
        "sample_mean": mean,
        "max_independent_set": optimum,
    });
    let table = Table {
        header: vec!["shot".into(), "bitstring".into(), "size".into()],
        rows: samples
            .iter()
            .zip(&sizes)
            .enumerate()
            .map(|(i, (&z, s))| vec![i.to_string(), bitstring(z, n), s.to_string()])
            .collect(),
    };
    Ok(Report {
        config,
        results,
        table: Some(table),
    })
}

/// `F_p` on the full angle grid, evaluated in parallel.
pub fn run_sweep(mut config: ExperimentConfig, graph: &Graph) -> Result<Report> {
    let p = config.p;
    let resolution = config.optimizer.resolution_for(p);
    config.grid_resolution = Some(resolution);
    let objective = MaxCutObjective::for_graph(graph, p, config.limit_qubits)?;
    let axes = angle_axes(p, false);
    let points = grid_evaluate(
        |x| objective.evaluate(&AngleSchedule::from_vector(x)?),
        &axes,
        resolution,
        config.optimizer.budget,
    )?;
    let best = points
        .iter()
        .fold(&points[0], |b, x| if x.1 > b.1 { x } else { b });
    let split = |x: &[f64]| (x[..p].to_vec(), x[p..].to_vec());
    let (bg, bb) = split(&best.0);
    let mut header: Vec<String> = (1..=p).map(|i| format!("gamma_{i}")).collect();
    header.extend((1..=p).map(|i| format!("beta_{i}")));
    header.push("value".into());
    let table = Table {
        header,
        rows: points
            .iter()
            .map(|(x, v)| x.iter().copied().chain([*v]).map(fmt).collect())
            .collect(),
    };
    let results = json!({
        "method": objective.method(),
        "p": p,
        "resolution": resolution,
        "best": { "gammas": bg, "betas": bb, "value": best.1 },
        "points": points
            .iter()
            .map(|(x, v)| {
                let (g, b) = split(x);
                json!({ "gammas": g, "betas": b, "value": v })
            })
            .collect::<Vec<_>>(),
    });
    Ok(Report {
        config,
        results,
        table: Some(table),
    })
}

fn emit(report: &Report, common: &CommonArgs) -> Result<()> {
    let text = report.render(common.format)?;
    match &common.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses `args`, runs the command, writes the report and returns the
/// process exit code. Nothing is written when the run fails.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli).and_then(|r| emit(&r, &cli.common)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
