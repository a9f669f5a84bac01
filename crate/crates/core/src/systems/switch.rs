// Copyright 2026 The chiralwalk Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::{ExperimentSystem, SinkChannel};
use crate::netgraph::PhasedGraph;
use crate::{Error, Result};

/// Shape and drive of the directional switch.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwitchConfig {
    /// Hops from `S` to the junction site.
    pub input_edges: usize,
    /// Hops from each triangle corner to its output site.
    pub output_edges: usize,
    /// Phase on the control edge.
    pub theta: f64,
    /// Rate of the traps on `E` and `F`; `None` for the closed walk.
    pub trap_rate: Option<f64>,
    pub horizon: f64,
    pub grid_points: usize,
}

impl Default for SwitchConfig {
    fn default() -> Self {
        SwitchConfig {
            input_edges: 3,
            output_edges: 2,
            theta: 0.0,
            trap_rate: None,
            horizon: 20.0,
            grid_points: 2001,
        }
    }
}

/// Built switch with its labelled sites.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Switch {
    pub system: ExperimentSystem,
    pub e: usize,
    pub f: usize,
    /// Junction corners `(b, c)`; the phase sits on the hop `b -> c`.
    pub control_edge: (usize, usize),
}

impl Switch {
    /// Extended index of the trap on `E`, if trapped.
    pub fn trap_e(&self) -> Option<usize> {
        self.system.sink_index("trap_e")
    }

    pub fn trap_f(&self) -> Option<usize> {
        self.system.sink_index("trap_f")
    }
}

/// Directional switch: a wire from `S` into a triangle `(a, b, c)` whose
/// control hop `b -> c` carries `theta`, with wires `b .. E` and `c .. F`.
///
/// ```text
///                    b - ... - E
///                  / |
///   S - ... - a    θ |
///                  \ |
///                    c - ... - F
/// ```
///
/// Positive `theta` favours `E`. Sites are numbered along the input wire,
/// then `b`, `c`, the `E` wire, and the `F` wire.
pub fn build_switch(cfg: &SwitchConfig) -> Result<Switch> {
    if let Some(r) = cfg.trap_rate {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::invalid(format!("trap rate {r} must be positive")));
        }
    }
    let n_sites = cfg.input_edges + 3 + 2 * cfg.output_edges;
    let mut g = PhasedGraph::new(n_sites)?;
    let a = cfg.input_edges;
    for i in 0..a {
        g.add_edge(i, i + 1, 1.0, 0.0)?;
    }
    let (b, c) = (a + 1, a + 2);
    g.add_edge(a, b, 1.0, 0.0)?;
    g.add_edge(b, c, 1.0, cfg.theta)?;
    g.add_edge(c, a, 1.0, 0.0)?;
    let mut wire = |from: usize, first: usize| -> Result<usize> {
        let mut prev = from;
        for k in 0..cfg.output_edges {
            g.add_edge(prev, first + k, 1.0, 0.0)?;
            prev = first + k;
        }
        Ok(prev)
    };
    let e = wire(b, c + 1)?;
    let f = wire(c, c + 1 + cfg.output_edges)?;
    let sinks = match cfg.trap_rate {
        Some(r) => vec![
            SinkChannel::new("trap_e", vec![(e, r)]),
            SinkChannel::new("trap_f", vec![(f, r)]),
        ],
        None => vec![],
    };
    let target = if sinks.is_empty() { e } else { n_sites };
    let system = ExperimentSystem {
        graph: g,
        onsite_energies: vec![],
        dephasing: 0.0,
        sinks,
        start: 0,
        target,
        horizon: cfg.horizon,
        grid_points: cfg.grid_points,
        time_unit: "1/J".into(),
    };
    system.validate()?;
    Ok(Switch {
        system,
        e,
        f,
        control_edge: (b, c),
    })
}
