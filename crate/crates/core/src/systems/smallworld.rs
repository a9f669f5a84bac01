// Copyright 2026 The chiralwalk Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::{ExperimentSystem, SinkChannel};
use crate::netgraph::watts_strogatz;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WsConfig {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub seed: u64,
    pub sink_rate: f64,
    pub horizon: f64,
    pub grid_points: usize,
}

impl Default for WsConfig {
    fn default() -> Self {
        WsConfig {
            n: 32,
            k: 4,
            p: 0.2,
            seed: 0,
            sink_rate: 1.0,
            horizon: 50.0,
            grid_points: 2001,
        }
    }
}

/// Connected Watts-Strogatz walk from ring site 0 to the opposite site
/// `N/2`, which feeds a sink observed as the target.
pub fn build_ws_experiment(cfg: &WsConfig) -> Result<ExperimentSystem> {
    if !(cfg.sink_rate > 0.0) || !cfg.sink_rate.is_finite() {
        return Err(Error::invalid(format!("sink rate {} must be positive", cfg.sink_rate)));
    }
    let graph = watts_strogatz(cfg.n, cfg.k, cfg.p, cfg.seed)?;
    let end = cfg.n / 2;
    let sys = ExperimentSystem {
        graph,
        onsite_energies: vec![],
        dephasing: 0.0,
        sinks: vec![SinkChannel::new("sink", vec![(end, cfg.sink_rate)])],
        start: 0,
        target: cfg.n,
        horizon: cfg.horizon,
        grid_points: cfg.grid_points,
        time_unit: "1/J".into(),
    };
    sys.validate()?;
    Ok(sys)
}
