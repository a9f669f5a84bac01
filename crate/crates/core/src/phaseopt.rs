// Copyright 2026 The chiralwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Multistart simplex search over edge phases.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::first_maximum;
use crate::netgraph::{wrap_phase, PhasedGraph};
use crate::systems::ExperimentSystem;
use crate::{Error, Result};

/// Phase offsets added to the base phases of chosen hops.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseAssignment {
    /// Hops `n -> m`; the offset is added to the phase of that hop.
    pub edges: Vec<(usize, usize)>,
    /// Offsets in `(-π, π]`.
    pub values: Vec<f64>,
}

impl PhaseAssignment {
    pub fn new(edges: Vec<(usize, usize)>, values: Vec<f64>) -> Result<Self> {
        if edges.len() != values.len() {
            return Err(Error::Dimension {
                expected: edges.len(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite phase in assignment"));
        }
        Ok(PhaseAssignment {
            edges,
            values: values.into_iter().map(wrap_phase).collect(),
        })
    }

    pub fn zeros(edges: Vec<(usize, usize)>) -> Self {
        let values = vec![0.0; edges.len()];
        PhaseAssignment { edges, values }
    }

    pub fn empty() -> Self {
        PhaseAssignment::zeros(Vec::new())
    }

    /// From `(n, m, offset)` triples.
    pub fn from_triples(triples: &[(usize, usize, f64)]) -> Result<Self> {
        PhaseAssignment::new(
            triples.iter().map(|&(n, m, _)| (n, m)).collect(),
            triples.iter().map(|&(_, _, v)| v).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn with_values(&self, values: &[f64]) -> Result<Self> {
        PhaseAssignment::new(self.edges.clone(), values.to_vec())
    }

    /// Graph with each listed hop's phase shifted by its offset.
    pub fn apply(&self, g: &PhasedGraph) -> Result<PhasedGraph> {
        let mut out = g.clone();
        for (&(n, m), &v) in self.edges.iter().zip(&self.values) {
            let base = out
                .phase(n, m)
                .ok_or_else(|| Error::invalid(format!("assignment edge ({n}, {m}) not in graph")))?;
            out = out.with_phase(n, m, base + v)?;
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Maximize,
    Minimize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ObjectiveKind {
    /// Occupancy of `site` at `time`.
    OccupancyAt { time: f64, site: usize },
    /// Half-arrival time of `site`, searched up to `max_horizon`; infinite
    /// when never reached.
    HalfArrival { site: usize, max_horizon: f64 },
    /// Height of the first maximum of `site` on the system grid.
    FirstMax { site: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    #[serde(flatten)]
    pub kind: ObjectiveKind,
    pub direction: Direction,
}

impl Objective {
    pub fn maximize(kind: ObjectiveKind) -> Self {
        Objective {
            kind,
            direction: Direction::Maximize,
        }
    }

    pub fn minimize(kind: ObjectiveKind) -> Self {
        Objective {
            kind,
            direction: Direction::Minimize,
        }
    }

    fn site(&self) -> usize {
        match self.kind {
            ObjectiveKind::OccupancyAt { site, .. }
            | ObjectiveKind::HalfArrival { site, .. }
            | ObjectiveKind::FirstMax { site } => site,
        }
    }

    /// `a` strictly better than `b`.
    pub fn better(&self, a: f64, b: f64) -> bool {
        match self.direction {
            Direction::Maximize => a > b,
            Direction::Minimize => a < b,
        }
    }

    fn cost(&self, v: f64) -> f64 {
        match self.direction {
            Direction::Maximize => -v,
            Direction::Minimize => v,
        }
    }
}

/// Objective value of `system` with `assignment` applied.
pub fn evaluate(system: &ExperimentSystem, assignment: &PhaseAssignment, objective: &Objective) -> Result<f64> {
    let site = objective.site();
    if site >= system.dim() {
        return Err(Error::invalid(format!("objective site {site} out of range")));
    }
    let sys = system.with_graph(assignment.apply(&system.graph)?)?.with_target(site)?;
    match objective.kind {
        ObjectiveKind::OccupancyAt { time, .. } => {
            if !(time >= 0.0) || !time.is_finite() {
                return Err(Error::invalid(format!("objective time {time}")));
            }
            sys.target_occupancy_at(time)
        }
        ObjectiveKind::HalfArrival { max_horizon, .. } => {
            Ok(sys.half_arrival(max_horizon)?.unwrap_or(f64::INFINITY))
        }
        ObjectiveKind::FirstMax { .. } => {
            let traj = sys.evolve_default()?;
            Ok(first_maximum(&traj.times, &traj.series(site)?)?.value)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Stop when the simplex's cost spread falls below this.
    pub tolerance: f64,
    /// Initial simplex edge in radians.
    pub initial_step: f64,
    pub seed: u64,
    /// Use the all-zero assignment as restart 0.
    pub include_zero: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 32,
            max_iterations: 500,
            tolerance: 1e-6,
            initial_step: 0.5,
            seed: 0,
            include_zero: true,
        }
    }
}

/// Result of [`optimize`]; serializes as the optimization report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub edges: Vec<(usize, usize)>,
    pub phases: Vec<f64>,
    pub objective: f64,
    pub baseline: f64,
    pub restarts: usize,
    pub seed: u64,
    pub objective_spec: Objective,
    /// Final value of each restart, in restart order.
    pub restart_values: Vec<f64>,
    /// Circular spread of the best phases over restarts within 1e-6 of the
    /// optimum (0 when only one restart got there).
    pub restart_phase_spread: Vec<f64>,
}

impl OptimizationResult {
    pub fn assignment(&self) -> PhaseAssignment {
        PhaseAssignment {
            edges: self.edges.clone(),
            values: self.phases.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

struct Local {
    x: Vec<f64>,
    value: f64,
}

/// Nelder-Mead on the unwrapped phases; `f` sees them wrapped.
fn nelder_mead(
    f: &dyn Fn(&[f64]) -> Result<f64>,
    x0: Vec<f64>,
    step: f64,
    max_iter: usize,
    tol: f64,
) -> Result<Local> {
    let d = x0.len();
    let eval = |x: &[f64]| -> Result<f64> {
        let w: Vec<f64> = x.iter().map(|&v| wrap_phase(v)).collect();
        f(&w)
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    simplex.push((x0.clone(), eval(&x0)?));
    for i in 0..d {
        let mut x = x0.clone();
        x[i] += step;
        let fx = eval(&x)?;
        simplex.push((x, fx));
    }
    let order = |s: &mut Vec<(Vec<f64>, f64)>| s.sort_by(|a, b| a.1.total_cmp(&b.1));
    order(&mut simplex);
    for _ in 0..max_iter {
        let (best, worst) = (simplex[0].1, simplex[d].1);
        if (worst - best).abs() <= tol || (worst.is_infinite() && best.is_infinite()) {
            break;
        }
        let mut centroid = vec![0.0; d];
        for (x, _) in &simplex[..d] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / d as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[d].0)
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };
        let xr = along(-1.0);
        let fr = eval(&xr)?;
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = eval(&xe)?;
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[d - 1].1 {
            simplex[d] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[d].1 {
                let x = along(-0.5);
                let fx = eval(&x)?;
                (x, fx)
            } else {
                let x = along(0.5);
                let fx = eval(&x)?;
                (x, fx)
            };
            if fc < simplex[d].1.min(fr) {
                simplex[d] = (xc, fc);
            } else {
                let x_best = simplex[0].0.clone();
                for (x, fx) in simplex.iter_mut().skip(1) {
                    for (v, b) in x.iter_mut().zip(&x_best) {
                        *v = b + 0.5 * (*v - b);
                    }
                    *fx = eval(x)?;
                }
            }
        }
        order(&mut simplex);
    }
    let (x, value) = simplex.swap_remove(0);
    Ok(Local {
        x: x.into_iter().map(wrap_phase).collect(),
        value,
    })
}

fn start_point(cfg: &OptimizerConfig, restart: usize, d: usize) -> Vec<f64> {
    if cfg.include_zero && restart == 0 {
        return vec![0.0; d];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    (0..d).map(|_| rng.random_range(-PI..PI)).collect()
}

fn circular_spread(samples: &[f64]) -> f64 {
    if samples.len() < 2 {
        return 0.0;
    }
    let (s, c) = samples
        .iter()
        .fold((0.0, 0.0), |(s, c), &x| (s + x.sin(), c + x.cos()));
    let r = (s * s + c * c).sqrt() / samples.len() as f64;
    (-2.0 * r.min(1.0).ln()).max(0.0).sqrt()
}

/// Best phases on `edges` over `cfg.restarts` simplex runs.
///
/// Restarts run in parallel on the current rayon pool; ties go to the lowest
/// restart index, so the result does not depend on scheduling.
pub fn optimize(
    system: &ExperimentSystem,
    edges: &[(usize, usize)],
    objective: &Objective,
    cfg: &OptimizerConfig,
) -> Result<OptimizationResult> {
    if cfg.restarts == 0 {
        return Err(Error::invalid("optimizer needs at least one restart"));
    }
    let zero = PhaseAssignment::zeros(edges.to_vec());
    zero.apply(&system.graph)?;
    let baseline = evaluate(system, &zero, objective)?;
    let d = edges.len();
    let report = |x: Vec<f64>, value: f64, values: Vec<f64>, spread: Vec<f64>| OptimizationResult {
        edges: edges.to_vec(),
        phases: x,
        objective: value,
        baseline,
        restarts: cfg.restarts,
        seed: cfg.seed,
        objective_spec: *objective,
        restart_values: values,
        restart_phase_spread: spread,
    };
    if d == 0 {
        return Ok(report(vec![], baseline, vec![baseline; cfg.restarts], vec![]));
    }
    let cost = |x: &[f64]| -> Result<f64> {
        let a = PhaseAssignment {
            edges: edges.to_vec(),
            values: x.to_vec(),
        };
        Ok(objective.cost(evaluate(system, &a, objective)?))
    };
    let runs: Vec<Local> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            nelder_mead(
                &cost,
                start_point(cfg, r, d),
                cfg.initial_step,
                cfg.max_iterations,
                cfg.tolerance,
            )
        })
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.value < runs[best].value {
            best = i;
        }
    }
    let best_cost = runs[best].value;
    let near: Vec<&Local> = runs.iter().filter(|r| (r.value - best_cost).abs() <= 1e-6).collect();
    let spread = (0..d)
        .map(|k| circular_spread(&near.iter().map(|r| r.x[k]).collect::<Vec<_>>()))
        .collect();
    let values = runs.iter().map(|r| objective.cost(r.value)).collect();
    Ok(report(
        runs[best].x.clone(),
        objective.cost(best_cost),
        values,
        spread,
    ))
}

/// Objective with the phase offset of one hop set to each grid value.
pub fn landscape_scan(
    system: &ExperimentSystem,
    edge: (usize, usize),
    grid: &[f64],
    objective: &Objective,
) -> Result<Vec<f64>> {
    if let Some(&bad) = grid.iter().find(|&&v| !(v > -PI - 1e-12 && v <= PI + 1e-12)) {
        return Err(Error::invalid(format!("scan value {bad} outside (-π, π]")));
    }
    grid.par_iter()
        .map(|&v| evaluate(system, &PhaseAssignment::new(vec![edge], vec![v])?, objective))
        .collect()
}
