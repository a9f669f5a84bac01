// Copyright 2026 The chiralwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Experiment builders: the directional switch, the triangle chain, the FMO
//! complex, small-world transport, and the trapped-ion encoding.
//!
//! An [`ExperimentSystem`] is a phased graph plus optional on-site energies,
//! uniform dephasing, and irreversible sinks. Sink sites are appended after
//! the graph sites in the order the channels are listed.

mod chain;
mod fmo;
mod ion;
mod smallworld;
mod switch;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dynamics::{
    evolve_lindblad, evolve_lossy, evolve_unitary, hamiltonian_from_graph, half_arrival_time,
    uniform_grid, CMatrix, DensityMatrix, HermitianOperator, Jump, LindbladModel, Trajectory, C64,
};
use crate::netgraph::PhasedGraph;
use crate::{Error, Result};

pub use chain::{build_triangle_chain, ChainConfig};
pub use fmo::{
    build_fmo, build_fmo_from, fmo_phase_table, FmoData, FmoPhaseTable, FmoRates, CM1_TO_RAD_PER_PS,
    FMO_DATA_JSON,
};
pub use ion::{
    adiabaticity_ratio, build_ion_walk, ion_coupling, ion_full_hamiltonian, ion_subspace_projector,
    IonMode, IonModel, IonRow, ION_SUBSPACE,
};
pub use smallworld::{build_ws_experiment, WsConfig};
pub use switch::{build_switch, Switch, SwitchConfig};

/// Irreversible channel `|sink><f|` from each feeder `f` at its rate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SinkChannel {
    pub name: String,
    pub feeders: Vec<(usize, f64)>,
}

impl SinkChannel {
    pub fn new(name: impl Into<String>, feeders: Vec<(usize, f64)>) -> Self {
        SinkChannel {
            name: name.into(),
            feeders,
        }
    }
}

/// A walk with its environment, start site, observed site, and time grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSystem {
    pub graph: PhasedGraph,
    /// Per-site energies in the coupling units; empty means all zero.
    #[serde(default)]
    pub onsite_energies: Vec<f64>,
    /// Rate of `|n><n|` dephasing on every graph site.
    #[serde(default)]
    pub dephasing: f64,
    #[serde(default)]
    pub sinks: Vec<SinkChannel>,
    pub start: usize,
    /// Observed site in the extended basis (graph sites, then sinks).
    pub target: usize,
    pub horizon: f64,
    pub grid_points: usize,
    pub time_unit: String,
}

impl ExperimentSystem {
    pub fn validate(&self) -> Result<()> {
        let n = self.graph.n_sites();
        if !self.onsite_energies.is_empty() && self.onsite_energies.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: self.onsite_energies.len(),
            });
        }
        if self.onsite_energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::invalid("non-finite on-site energy"));
        }
        if !(self.dephasing >= 0.0) || !self.dephasing.is_finite() {
            return Err(Error::invalid(format!("dephasing rate {}", self.dephasing)));
        }
        for s in &self.sinks {
            for &(f, r) in &s.feeders {
                if f >= n {
                    return Err(Error::invalid(format!(
                        "sink '{}' fed from site {f}, graph has {n} sites",
                        s.name
                    )));
                }
                if !(r >= 0.0) || !r.is_finite() {
                    return Err(Error::invalid(format!("sink '{}' has rate {r}", s.name)));
                }
            }
        }
        if self.start >= n {
            return Err(Error::invalid(format!("start site {} out of range", self.start)));
        }
        if self.target >= self.dim() {
            return Err(Error::invalid(format!("target site {} out of range", self.target)));
        }
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(Error::invalid(format!("horizon {}", self.horizon)));
        }
        if self.grid_points < 2 {
            return Err(Error::invalid(format!("grid needs >= 2 points, got {}", self.grid_points)));
        }
        Ok(())
    }

    pub fn n_sites(&self) -> usize {
        self.graph.n_sites()
    }

    /// Graph sites plus sink sites.
    pub fn dim(&self) -> usize {
        self.graph.n_sites() + self.sinks.len()
    }

    pub fn sink_index(&self, name: &str) -> Option<usize> {
        self.sinks
            .iter()
            .position(|s| s.name == name)
            .map(|k| self.n_sites() + k)
    }

    /// Same system on a re-phased copy of its graph.
    pub fn with_graph(&self, graph: PhasedGraph) -> Result<Self> {
        if graph.n_sites() != self.n_sites() {
            return Err(Error::Dimension {
                expected: self.n_sites(),
                got: graph.n_sites(),
            });
        }
        Ok(ExperimentSystem {
            graph,
            ..self.clone()
        })
    }

    pub fn with_target(&self, target: usize) -> Result<Self> {
        let s = ExperimentSystem {
            target,
            ..self.clone()
        };
        s.validate()?;
        Ok(s)
    }

    /// Graph Hamiltonian plus on-site energies, over the graph sites only.
    pub fn site_hamiltonian(&self) -> Result<HermitianOperator> {
        let h = hamiltonian_from_graph(&self.graph);
        if self.onsite_energies.is_empty() {
            Ok(h)
        } else {
            h.with_onsite(&self.onsite_energies)
        }
    }

    pub fn lindblad_model(&self) -> Result<LindbladModel> {
        let d = self.dim();
        let h = self.site_hamiltonian()?.embed(d)?;
        let mut jumps = Vec::new();
        if self.dephasing > 0.0 {
            jumps.extend((0..self.n_sites()).map(|n| Jump::dephasing(d, n, self.dephasing)));
        }
        for (k, s) in self.sinks.iter().enumerate() {
            let sink = self.n_sites() + k;
            jumps.extend(s.feeders.iter().map(|&(f, r)| Jump::transfer(d, f, sink, r)));
        }
        LindbladModel::new(h, jumps)
    }

    /// Whether [`evolve`](Self::evolve) can skip the density-matrix route.
    pub fn is_pure(&self) -> bool {
        self.dephasing == 0.0 && self.sinks.len() <= 1
    }

    /// Occupancies of every extended site on `times`.
    pub fn evolve(&self, times: &[f64]) -> Result<Trajectory> {
        self.validate()?;
        if self.dephasing == 0.0 {
            match self.sinks.as_slice() {
                [] => return evolve_unitary(&self.site_hamiltonian()?, self.start, times),
                [only] => {
                    return Ok(evolve_lossy(&self.site_hamiltonian()?, &only.feeders, self.start, times)?
                        .into_trajectory())
                }
                _ => {}
            }
        }
        let rho0 = DensityMatrix::pure_site(self.dim(), self.start)?;
        evolve_lindblad(&self.lindblad_model()?, &rho0, times)
    }

    /// Evolve on the system's own uniform grid.
    pub fn evolve_default(&self) -> Result<Trajectory> {
        self.evolve(&self.grid())
    }

    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(self.horizon, self.grid_points)
    }

    /// Target occupancy at a single time.
    pub fn target_occupancy_at(&self, t: f64) -> Result<f64> {
        let times: Vec<f64> = if t > 0.0 { vec![0.0, t] } else { vec![0.0] };
        let traj = self.evolve(&times)?;
        Ok(traj.site_occupancies.last().expect("non-empty grid")[self.target])
    }

    /// Half-arrival time of the target, doubling the horizon until the
    /// occupancy crosses 1/2 or `max_horizon` is passed.
    pub fn half_arrival(&self, max_horizon: f64) -> Result<Option<f64>> {
        let dt = self.horizon / (self.grid_points - 1) as f64;
        let mut horizon = self.horizon;
        loop {
            let points = (horizon / dt).round() as usize + 1;
            let times = uniform_grid(horizon, points);
            let traj = self.evolve(&times)?;
            let series = traj.series(self.target)?;
            if let Some(tau) = half_arrival_time(&times, &series)? {
                return Ok(Some(tau));
            }
            if horizon >= max_horizon {
                return Ok(None);
            }
            horizon = (2.0 * horizon).min(max_horizon);
        }
    }

    /// Total population eventually captured by the named sink.
    ///
    /// Only defined without dephasing: solves
    /// `i(H_eff† X - X H_eff) = -Σ_f r_f |f><f|` for the channel's feeders and
    /// reads `<S|X|S>`. Fails if the walk has an undamped mode.
    pub fn asymptotic_capture(&self, sink: &str) -> Result<f64> {
        self.validate()?;
        if self.dephasing != 0.0 {
            return Err(Error::invalid("asymptotic capture needs a dephasing-free system"));
        }
        let channel = self
            .sinks
            .iter()
            .find(|s| s.name == sink)
            .ok_or_else(|| Error::invalid(format!("no sink named '{sink}'")))?;
        let n = self.n_sites();
        let mut heff = self.site_hamiltonian()?.into_matrix();
        for s in &self.sinks {
            for &(f, r) in &s.feeders {
                heff[(f, f)] -= C64::new(0.0, 0.5 * r);
            }
        }
        let mut p = CMatrix::zeros(n, n);
        for &(f, r) in &channel.feeders {
            p[(f, f)] += C64::new(r, 0.0);
        }
        let a = heff.adjoint();
        // vec(A X) = (I ⊗ A) vec X, vec(X B) = (Bᵀ ⊗ I) vec X.
        let mut op = DMatrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    // (I ⊗ A): block (j, j) is A.
                    op[(j * n + i, j * n + k)] += a[(i, k)];
                    // (Bᵀ ⊗ I): block (j, k) is B[k][j] I.
                    op[(j * n + i, k * n + i)] -= heff[(k, j)];
                }
            }
        }
        let rhs = DVector::from_column_slice(p.as_slice()) * C64::new(0.0, 1.0);
        let x = op
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::numerical("walk has an undamped mode; capture is not asymptotic"))?;
        let value = x[self.start * n + self.start].re;
        if !value.is_finite() || x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::numerical("walk has an undamped mode; capture is not asymptotic"));
        }
        Ok(value)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let sys: ExperimentSystem = serde_json::from_str(s)?;
        sys.validate()?;
        Ok(sys)
    }
}
