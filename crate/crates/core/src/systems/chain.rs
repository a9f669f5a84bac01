// Copyright 2026 The chiralwalk Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::{ExperimentSystem, SinkChannel};
use crate::netgraph::triangle_chain;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub n_triangles: usize,
    /// Phase on every control hop; `-π/2` is the enhancing sign.
    pub theta: f64,
    /// Rate of the trap on the end site; `None` for the closed walk.
    pub trap_rate: Option<f64>,
    pub horizon: f64,
    pub grid_points: usize,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            n_triangles: 8,
            theta: 0.0,
            trap_rate: Some(1.0),
            horizon: 60.0,
            grid_points: 6001,
        }
    }
}

/// Corner-sharing triangle chain from site 0 to its far end, observed at
/// the trap when there is one and at the end site otherwise.
///
/// The control hop of triangle `i` is `2i+1 -> 2i+2`, apex to the next
/// base site.
pub fn build_triangle_chain(cfg: &ChainConfig) -> Result<ExperimentSystem> {
    let chain = triangle_chain(cfg.n_triangles, cfg.theta)?;
    let n = chain.graph.n_sites();
    let sinks = match cfg.trap_rate {
        Some(r) if r > 0.0 && r.is_finite() => vec![SinkChannel::new("trap", vec![(chain.end, r)])],
        Some(r) => return Err(Error::invalid(format!("trap rate {r} must be positive"))),
        None => vec![],
    };
    let target = if sinks.is_empty() { chain.end } else { n };
    let sys = ExperimentSystem {
        graph: chain.graph,
        onsite_energies: vec![],
        dephasing: 0.0,
        sinks,
        start: chain.start,
        target,
        horizon: cfg.horizon,
        grid_points: cfg.grid_points,
        time_unit: "1/J".into(),
    };
    sys.validate()?;
    Ok(sys)
}
