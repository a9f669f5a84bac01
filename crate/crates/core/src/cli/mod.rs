// Copyright 2026 The chiralwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line driver for the experiments.
//!
//! Every command validates its parameters, computes, then writes into the
//! `--out` directory:
//!
//! * `trajectory.csv` or `trajectory.json` (per `--format`), or
//!   `ensemble.*` for `ws-ensemble`;
//! * `summary.json` with the derived metrics;
//! * `manifest.json` echoing every parameter.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::analytic::{polygon_spectrum, polygon_stp, PolygonSpec};
use crate::dynamics::{evolve_unitary, first_maximum, transport_speed, uniform_grid, Trajectory};
use crate::netgraph::cycle;
use crate::phaseopt::{optimize, Objective, ObjectiveKind, OptimizerConfig, PhaseAssignment};
use crate::systems::{
    adiabaticity_ratio, build_fmo_from, build_ion_walk, build_switch, build_triangle_chain, build_ws_experiment,
    fmo_phase_table, ChainConfig, ExperimentSystem, FmoData, FmoPhaseTable, FmoRates, IonMode, IonRow,
    SwitchConfig, WsConfig,
};
use crate::{Error, Result};

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status for I/O failures.
pub const EXIT_IO: i32 = 1;
/// Exit status for rejected parameters or configuration files.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for numerical failures.
pub const EXIT_NUMERICAL: i32 = 3;

/// Process exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Numerical(_) => EXIT_NUMERICAL,
        Error::Io(_) => EXIT_IO,
        Error::Dimension { .. } | Error::InvalidArgument(_) | Error::Config(_) | Error::Json(_) => EXIT_CONFIG,
    }
}

#[derive(Debug, Parser)]
#[command(name = "chiralwalk", version, about = "Chiral continuous-time quantum walk experiments")]
pub struct Cli {
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Directional switch: one input wire into a phased triangle, two outputs.
    Switch(SwitchArgs),
    /// Corner-sharing triangle chain with a phase on every control hop.
    Chain(ChainArgs),
    /// Uniformly phased ring, checked against the closed-form transfer.
    Polygon(PolygonArgs),
    /// Seven-site FMO complex with dephasing, trapping, and recombination.
    Fmo(FmoArgs),
    /// Ensemble of Watts-Strogatz walks with optimized sink phases.
    WsEnsemble(WsArgs),
    /// Four-site walk encoded in three trapped-ion spins.
    Ion(IonArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct OutputArgs {
    /// Output directory, created if missing.
    #[arg(long, default_value = "chiralwalk-out")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Number of points on the time grid.
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Length of the time grid.
    #[arg(long, allow_negative_numbers = true)]
    pub horizon: Option<f64>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SwitchArgs {
    /// Phase on the control hop; positive favours E.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    /// Trap rate on E and F; omit for the closed walk.
    #[arg(long, allow_negative_numbers = true)]
    pub trap_rate: Option<f64>,
    #[arg(long, default_value_t = 3)]
    pub input_edges: usize,
    #[arg(long, default_value_t = 2)]
    pub output_edges: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ChainArgs {
    /// Phase on every control hop; -π/2 speeds transport up.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 8)]
    pub triangles: usize,
    /// Rate of the trap on the end site.
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub trap_rate: f64,
    /// Drop the trap and observe the end site itself.
    #[arg(long)]
    pub open: bool,
    /// Longest horizon for the half-arrival search.
    #[arg(long, allow_negative_numbers = true, default_value_t = 1000.0)]
    pub max_horizon: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct PolygonArgs {
    /// Number of sites on the ring.
    #[arg(long, default_value_t = 6)]
    pub sites: usize,
    /// Phase on every hop `n -> n+1`.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 0)]
    pub start: usize,
    /// Observed site; defaults to the antipode of the start.
    #[arg(long)]
    pub end: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FmoTable {
    None,
    A1,
    A2,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct FmoArgs {
    /// Published phase set applied on top of the real couplings.
    #[arg(long, value_enum, default_value_t = FmoTable::None)]
    pub table: FmoTable,
    /// Apply the table phases with the opposite sign.
    #[arg(long)]
    pub reverse: bool,
    /// Pure dephasing rate in ps⁻¹.
    #[arg(long, allow_negative_numbers = true, default_value_t = 9.0)]
    pub dephasing: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub trap_rate: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.001)]
    pub recombination: f64,
    /// Hamiltonian JSON replacing the shipped one.
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    /// Longest horizon (ps) for the half-arrival search.
    #[arg(long, allow_negative_numbers = true, default_value_t = 200.0)]
    pub max_horizon: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct WsArgs {
    #[arg(long, default_value_t = 32)]
    pub sites: usize,
    /// Ring neighbours per site (even).
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    /// Rewiring probability.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.2)]
    pub p: f64,
    #[arg(long, default_value_t = 20)]
    pub realizations: usize,
    /// Master seed; realization seeds are drawn from it.
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
    pub sink_rate: f64,
    /// Optimizer restarts per realization; 0 skips the optimization.
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, allow_negative_numbers = true, default_value_t = 5000.0)]
    pub max_horizon: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IonRowArg {
    Cqw1,
    Cqw2,
    Qw,
}

impl From<IonRowArg> for IonRow {
    fn from(r: IonRowArg) -> Self {
        match r {
            IonRowArg::Cqw1 => IonRow::Cqw1,
            IonRowArg::Cqw2 => IonRow::Cqw2,
            IonRowArg::Qw => IonRow::Qw,
        }
    }
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct IonArgs {
    #[arg(long, value_enum, default_value_t = IonRowArg::Cqw1)]
    pub row: IonRowArg,
    #[arg(long, default_value_t = 0)]
    pub start: usize,
    #[arg(long, default_value_t = 1)]
    pub end: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Runs the parsed command on a pool of `--workers` threads.
pub fn run(cli: &Cli) -> Result<()> {
    if cli.workers == Some(0) {
        return Err(Error::invalid("--workers must be at least 1"));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let workers = pool.current_num_threads();
    pool.install(|| match &cli.command {
        Command::Switch(a) => run_switch(a, workers),
        Command::Chain(a) => run_chain(a, workers),
        Command::Polygon(a) => run_polygon(a, workers),
        Command::Fmo(a) => run_fmo(a, workers),
        Command::WsEnsemble(a) => run_ws(a, workers),
        Command::Ion(a) => run_ion(a, workers),
    })
}

fn check_grid(out: &OutputArgs) -> Result<()> {
    if let Some(h) = out.horizon {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::invalid(format!("--horizon {h} must be positive")));
        }
    }
    if let Some(p) = out.grid_points {
        if p < 2 {
            return Err(Error::invalid(format!("--grid-points {p} must be at least 2")));
        }
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::invalid(format!("--{name} {v} must be positive")));
    }
    Ok(())
}

fn check_phase(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::invalid(format!("--{name} {v} must be finite")));
    }
    Ok(())
}

#[derive(Serialize)]
struct TrajectoryJson<'a> {
    times: &'a [f64],
    site_occupancies: &'a [Vec<f64>],
    trace: &'a [f64],
}

fn write_trajectory(out: &OutputArgs, traj: &Trajectory) -> Result<String> {
    let name = match out.format {
        Format::Csv => "trajectory.csv",
        Format::Json => "trajectory.json",
    };
    let file = BufWriter::new(fs::File::create(out.out.join(name))?);
    match out.format {
        Format::Csv => traj.write_csv(file)?,
        Format::Json => serde_json::to_writer_pretty(
            file,
            &TrajectoryJson {
                times: &traj.times,
                site_occupancies: &traj.site_occupancies,
                trace: &traj.trace_total,
            },
        )?,
    }
    Ok(name.to_string())
}

fn write_json(dir: &Path, name: &str, value: &Value) -> Result<()> {
    let file = BufWriter::new(fs::File::create(dir.join(name))?);
    serde_json::to_writer_pretty(file, value)?;
    Ok(())
}

fn finish<P: Serialize>(
    command: &str,
    params: &P,
    workers: usize,
    out: &OutputArgs,
    data_file: String,
    summary: Value,
) -> Result<()> {
    write_json(&out.out, "summary.json", &summary)?;
    let manifest = json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "workers": workers,
        "parameters": params,
        "outputs": [data_file, "summary.json", "manifest.json"],
    });
    write_json(&out.out, "manifest.json", &manifest)
}

fn prepare(out: &OutputArgs) -> Result<()> {
    fs::create_dir_all(&out.out)?;
    Ok(())
}

fn grid_of(sys: &ExperimentSystem) -> Value {
    json!({ "horizon": sys.horizon, "grid_points": sys.grid_points, "time_unit": sys.time_unit })
}

fn run_switch(a: &SwitchArgs, workers: usize) -> Result<()> {
    check_grid(&a.output)?;
    check_phase("theta", a.theta)?;
    let defaults = SwitchConfig::default();
    let cfg = SwitchConfig {
        input_edges: a.input_edges,
        output_edges: a.output_edges,
        theta: a.theta,
        trap_rate: a.trap_rate,
        horizon: a.output.horizon.unwrap_or(defaults.horizon),
        grid_points: a.output.grid_points.unwrap_or(defaults.grid_points),
    };
    let sw = build_switch(&cfg)?;
    prepare(&a.output)?;
    let traj = sw.system.evolve_default()?;
    let peak_e = first_maximum(&traj.times, &traj.series(sw.e)?)?;
    let peak_f = first_maximum(&traj.times, &traj.series(sw.f)?)?;
    let capture = match (sw.trap_e(), sw.trap_f()) {
        (Some(_), Some(_)) => json!({
            "trap_e": sw.system.asymptotic_capture("trap_e")?,
            "trap_f": sw.system.asymptotic_capture("trap_f")?,
        }),
        _ => Value::Null,
    };
    let summary = json!({
        "sites": { "start": sw.system.start, "e": sw.e, "f": sw.f, "control_edge": sw.control_edge },
        "first_maximum_e": peak_e,
        "first_maximum_f": peak_f,
        "asymptotic_capture": capture,
        "grid": grid_of(&sw.system),
    });
    let file = write_trajectory(&a.output, &traj)?;
    finish("switch", a, workers, &a.output, file, summary)
}

fn run_chain(a: &ChainArgs, workers: usize) -> Result<()> {
    check_grid(&a.output)?;
    check_phase("theta", a.theta)?;
    check_positive("max-horizon", a.max_horizon)?;
    if !a.open {
        check_positive("trap-rate", a.trap_rate)?;
    }
    let defaults = ChainConfig::default();
    let cfg = ChainConfig {
        n_triangles: a.triangles,
        theta: a.theta,
        trap_rate: if a.open { None } else { Some(a.trap_rate) },
        horizon: a.output.horizon.unwrap_or(defaults.horizon),
        grid_points: a.output.grid_points.unwrap_or(defaults.grid_points),
    };
    let sys = build_triangle_chain(&cfg)?;
    prepare(&a.output)?;
    let traj = sys.evolve_default()?;
    let tau = sys.half_arrival(a.max_horizon.max(sys.horizon))?;
    let speed = tau.map(transport_speed).transpose()?;
    let summary = json!({
        "target": sys.target,
        "half_arrival_time": tau,
        "transport_speed": speed,
        "final_target_occupancy": traj.site_occupancies.last().map(|r| r[sys.target]),
        "grid": grid_of(&sys),
    });
    let file = write_trajectory(&a.output, &traj)?;
    finish("chain", a, workers, &a.output, file, summary)
}

fn run_polygon(a: &PolygonArgs, workers: usize) -> Result<()> {
    check_grid(&a.output)?;
    check_phase("theta", a.theta)?;
    let end = a.end.unwrap_or((a.start + a.sites / 2) % a.sites.max(1));
    let spec = PolygonSpec::new(a.sites, a.theta, a.start, end)?;
    let horizon = a.output.horizon.unwrap_or(20.0);
    let points = a.output.grid_points.unwrap_or(2001);
    let graph = cycle(a.sites, 1.0, a.theta)?;
    prepare(&a.output)?;
    let times = uniform_grid(horizon, points);
    let traj = evolve_unitary(&crate::dynamics::hamiltonian_from_graph(&graph), a.start, &times)?;
    let numeric = traj.series(end)?;
    let deviation = times
        .iter()
        .zip(&numeric)
        .map(|(&t, p)| (polygon_stp(&spec, t) - p).abs())
        .fold(0.0, f64::max);
    let summary = json!({
        "start": a.start,
        "end": end,
        "spectrum": polygon_spectrum(&spec),
        "first_maximum": first_maximum(&times, &numeric)?,
        "max_occupancy": numeric.iter().copied().fold(0.0, f64::max),
        "closed_form_max_deviation": deviation,
        "grid": { "horizon": horizon, "grid_points": points, "time_unit": "1/J" },
    });
    let file = write_trajectory(&a.output, &traj)?;
    finish("polygon", a, workers, &a.output, file, summary)
}

fn run_fmo(a: &FmoArgs, workers: usize) -> Result<()> {
    check_grid(&a.output)?;
    check_positive("trap-rate", a.trap_rate)?;
    check_positive("max-horizon", a.max_horizon)?;
    for (name, v) in [("dephasing", a.dephasing), ("recombination", a.recombination)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::invalid(format!("--{name} {v} must be non-negative")));
        }
    }
    let data = match &a.hamiltonian {
        Some(path) => FmoData::load(path)?,
        None => FmoData::shipped(),
    };
    let rates = FmoRates {
        dephasing: a.dephasing,
        recombination: a.recombination,
        trapping: a.trap_rate,
        ..FmoRates::default()
    };
    let mut sys = build_fmo_from(&data, &rates)?;
    if let Some(h) = a.output.horizon {
        sys.horizon = h;
    }
    if let Some(p) = a.output.grid_points {
        sys.grid_points = p;
    }
    let table = match a.table {
        FmoTable::None => None,
        FmoTable::A1 => Some(FmoPhaseTable::A1),
        FmoTable::A2 => Some(FmoPhaseTable::A2),
    };
    let sign = if a.reverse { -1.0 } else { 1.0 };
    let phases: Vec<(usize, usize, f64)> = table
        .map(fmo_phase_table)
        .unwrap_or_default()
        .into_iter()
        .map(|(n, m, v)| (n, m, sign * v))
        .collect();
    let assignment = PhaseAssignment::from_triples(&phases)?;
    let sys = sys.with_graph(assignment.apply(&sys.graph)?)?;
    prepare(&a.output)?;
    let traj = sys.evolve_default()?;
    let tau = sys.half_arrival(a.max_horizon.max(sys.horizon))?;
    let summary = json!({
        "phases": phases,
        "half_arrival_time_ps": tau,
        "transport_speed_per_ps": tau.map(transport_speed).transpose()?,
        "final_reaction_centre": traj.site_occupancies.last().map(|r| r[sys.target]),
        "final_drain": traj.site_occupancies.last().map(|r| r[sys.dim() - 1]),
        "hamiltonian_source": data.source,
        "grid": grid_of(&sys),
    });
    let file = write_trajectory(&a.output, &traj)?;
    finish("fmo", a, workers, &a.output, file, summary)
}

#[derive(Serialize)]
struct WsRow {
    realization: usize,
    seed: u64,
    tau_baseline: Option<f64>,
    tau_optimized: Option<f64>,
    reduction: Option<f64>,
    edges: Vec<(usize, usize)>,
    phases: Vec<f64>,
}

fn ws_realization(a: &WsArgs, cfg: &WsConfig, index: usize) -> Result<WsRow> {
    let sys = build_ws_experiment(cfg)?;
    let tau0 = sys.half_arrival(a.max_horizon)?;
    let mut row = WsRow {
        realization: index,
        seed: cfg.seed,
        tau_baseline: tau0,
        tau_optimized: None,
        reduction: None,
        edges: vec![],
        phases: vec![],
    };
    let Some(tau0) = tau0 else { return Ok(row) };
    if a.restarts == 0 {
        return Ok(row);
    }
    let end = sys.sinks[0].feeders[0].0;
    let edges: Vec<(usize, usize)> = sys.graph.neighbors(end).into_iter().map(|v| (end, v)).collect();
    let objective = Objective::maximize(ObjectiveKind::OccupancyAt {
        time: tau0,
        site: sys.target,
    });
    let opt = OptimizerConfig {
        restarts: a.restarts,
        seed: cfg.seed ^ index as u64,
        ..OptimizerConfig::default()
    };
    let best = optimize(&sys, &edges, &objective, &opt)?;
    let tuned = sys.with_graph(best.assignment().apply(&sys.graph)?)?;
    let tau1 = tuned.half_arrival(a.max_horizon)?;
    row.tau_optimized = tau1;
    row.reduction = tau1.map(|t| 1.0 - t / tau0);
    row.edges = best.edges;
    row.phases = best.phases;
    Ok(row)
}

fn run_ws(a: &WsArgs, workers: usize) -> Result<()> {
    check_grid(&a.output)?;
    check_positive("max-horizon", a.max_horizon)?;
    if a.realizations == 0 {
        return Err(Error::invalid("--realizations must be at least 1"));
    }
    let defaults = WsConfig::default();
    let base = WsConfig {
        n: a.sites,
        k: a.k,
        p: a.p,
        seed: 0,
        sink_rate: a.sink_rate,
        horizon: a.output.horizon.unwrap_or(defaults.horizon),
        grid_points: a.output.grid_points.unwrap_or(defaults.grid_points),
    };
    // Surface parameter errors before spending time on the ensemble.
    build_ws_experiment(&base)?;
    if base.horizon > a.max_horizon {
        return Err(Error::invalid("--horizon exceeds --max-horizon"));
    }
    let mut master = ChaCha8Rng::seed_from_u64(a.seed);
    let seeds: Vec<u64> = (0..a.realizations).map(|_| master.next_u64()).collect();
    prepare(&a.output)?;
    let rows = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &seed)| ws_realization(a, &WsConfig { seed, ..base }, i))
        .collect::<Result<Vec<_>>>()?;

    let reductions: Vec<f64> = rows.iter().filter_map(|r| r.reduction).collect();
    let mean = (!reductions.is_empty()).then(|| reductions.iter().sum::<f64>() / reductions.len() as f64);
    let worsened = reductions.iter().filter(|&&r| r < -1e-9).count();
    let summary = json!({
        "realizations": a.realizations,
        "baseline_unreached": rows.iter().filter(|r| r.tau_baseline.is_none()).count(),
        "mean_reduction": mean,
        "min_reduction": reductions.iter().copied().reduce(f64::min),
        "max_reduction": reductions.iter().copied().reduce(f64::max),
        "worsened": worsened,
        "seeds": seeds,
    });

    let name = match a.output.format {
        Format::Csv => {
            let mut s = String::from("realization,seed,tau_baseline,tau_optimized,reduction\n");
            let cell = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:?}"));
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.realization,
                    r.seed,
                    cell(r.tau_baseline),
                    cell(r.tau_optimized),
                    cell(r.reduction)
                ));
            }
            fs::write(a.output.out.join("ensemble.csv"), s)?;
            "ensemble.csv"
        }
        Format::Json => {
            write_json(&a.output.out, "ensemble.json", &serde_json::to_value(&rows)?)?;
            "ensemble.json"
        }
    };
    finish("ws-ensemble", a, workers, &a.output, name.into(), summary)
}

fn run_ion(a: &IonArgs, workers: usize) -> Result<()> {
    check_grid(&a.output)?;
    if a.start >= 4 || a.end >= 4 {
        return Err(Error::invalid("ion walk sites are 0..=3"));
    }
    let row = IonRow::from(a.row);
    let model = row.model();
    let h = build_ion_walk(&model);
    let horizon = a.output.horizon.unwrap_or(3.0);
    let points = a.output.grid_points.unwrap_or(3001);
    prepare(&a.output)?;
    let times = uniform_grid(horizon, points);
    let traj = evolve_unitary(&h, a.start, &times)?;
    let series = traj.series(a.end)?;
    let [com, br] = IonMode::ca40_axial();
    let summary = json!({
        "row": row.name(),
        "model": model,
        "first_maximum": first_maximum(&times, &series)?,
        "adiabaticity": { "com": adiabaticity_ratio(&com), "breathing": adiabaticity_ratio(&br) },
        "grid": { "horizon": horizon, "grid_points": points, "time_unit": "1/J" },
    });
    let file = write_trajectory(&a.output, &traj)?;
    finish("ion", a, workers, &a.output, file, summary)
}
