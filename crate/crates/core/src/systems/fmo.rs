// Copyright 2026 The chiralwalk Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ExperimentSystem, SinkChannel};
use crate::netgraph::PhasedGraph;
use crate::{Error, Result};

/// `1 cm⁻¹ = 2π c · 100 m⁻¹` as an angular frequency, in rad/ps.
pub const CM1_TO_RAD_PER_PS: f64 = 2.0 * PI * 2.997_924_58e10 * 1e-12;

/// Shipped seven-site monomer Hamiltonian.
pub const FMO_DATA_JSON: &str = include_str!("../../data/fmo_adolphs_renger_2006.json");

const FMO_SITES: usize = 7;

/// Site energies and couplings of an FMO monomer in cm⁻¹.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FmoData {
    #[serde(default)]
    pub source: Option<String>,
    pub units: String,
    pub energies: Vec<f64>,
    /// Symmetric with a zero diagonal.
    pub couplings: Vec<Vec<f64>>,
}

impl FmoData {
    pub fn shipped() -> Self {
        FmoData::from_json(FMO_DATA_JSON).expect("shipped FMO data is valid")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: FmoData = serde_json::from_str(s).map_err(|e| Error::config(format!("FMO data: {e}")))?;
        d.validate()?;
        Ok(d)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("reading {}: {e}", path.display())))?;
        FmoData::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.units != "cm-1" {
            return Err(Error::config(format!("FMO data units '{}', expected 'cm-1'", self.units)));
        }
        if self.energies.len() != FMO_SITES {
            return Err(Error::config(format!(
                "FMO data has {} energies, expected {FMO_SITES}",
                self.energies.len()
            )));
        }
        if self.couplings.len() != FMO_SITES || self.couplings.iter().any(|r| r.len() != FMO_SITES) {
            return Err(Error::config("FMO couplings must be 7x7"));
        }
        let all = self.energies.iter().chain(self.couplings.iter().flatten());
        if all.clone().any(|x| !x.is_finite()) {
            return Err(Error::config("FMO data has non-finite entries"));
        }
        for i in 0..FMO_SITES {
            if self.couplings[i][i] != 0.0 {
                return Err(Error::config("FMO couplings must have a zero diagonal"));
            }
            for j in 0..i {
                if (self.couplings[i][j] - self.couplings[j][i]).abs() > 1e-9 {
                    return Err(Error::config(format!("FMO couplings not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(())
    }
}

/// Lindblad rates in ps⁻¹.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FmoRates {
    pub dephasing: f64,
    /// Recombination to the drain from every site.
    pub recombination: f64,
    /// Trapping into the reaction centre.
    pub trapping: f64,
    /// Sites (0-based) feeding the reaction centre.
    pub trap_sites: Vec<usize>,
}

impl Default for FmoRates {
    fn default() -> Self {
        FmoRates {
            dephasing: 9.0,
            recombination: 0.001,
            trapping: 1.0,
            trap_sites: vec![2],
        }
    }
}

/// FMO with the shipped Hamiltonian.
pub fn build_fmo(rates: &FmoRates) -> Result<ExperimentSystem> {
    build_fmo_from(&FmoData::shipped(), rates)
}

/// Single-excitation FMO starting on site 0 (site 1 in the usual
/// numbering), observed at the reaction centre.
///
/// Energies are shifted so the lowest site sits at zero, then everything is
/// converted to rad/ps. A negative coupling `c` becomes an edge of magnitude
/// `|c|` with phase π. Extended sites: 7 is the reaction centre, 8 the drain.
pub fn build_fmo_from(data: &FmoData, rates: &FmoRates) -> Result<ExperimentSystem> {
    data.validate()?;
    for (name, r) in [
        ("dephasing", rates.dephasing),
        ("recombination", rates.recombination),
        ("trapping", rates.trapping),
    ] {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::config(format!("{name} rate {r} must be non-negative")));
        }
    }
    if let Some(&s) = rates.trap_sites.iter().find(|&&s| s >= FMO_SITES) {
        return Err(Error::config(format!("trap site {s} out of range")));
    }
    let mut g = PhasedGraph::new(FMO_SITES)?;
    for i in 0..FMO_SITES {
        for j in i + 1..FMO_SITES {
            let c = data.couplings[i][j];
            if c != 0.0 {
                let theta = if c < 0.0 { PI } else { 0.0 };
                g.add_edge(i, j, c.abs() * CM1_TO_RAD_PER_PS, theta)?;
            }
        }
    }
    let floor = data.energies.iter().copied().fold(f64::INFINITY, f64::min);
    let onsite = data.energies.iter().map(|e| (e - floor) * CM1_TO_RAD_PER_PS).collect();
    let sys = ExperimentSystem {
        graph: g,
        onsite_energies: onsite,
        dephasing: rates.dephasing,
        sinks: vec![
            SinkChannel::new(
                "reaction_centre",
                rates.trap_sites.iter().map(|&s| (s, rates.trapping)).collect(),
            ),
            SinkChannel::new("drain", (0..FMO_SITES).map(|s| (s, rates.recombination)).collect()),
        ],
        start: 0,
        target: FMO_SITES,
        horizon: 10.0,
        grid_points: 10_001,
        time_unit: "ps".into(),
    };
    sys.validate()?;
    Ok(sys)
}

/// Published optimized phase sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FmoPhaseTable {
    /// Seven edges.
    A1,
    /// Three edges.
    A2,
}

// (site, site) in 1-based numbering, phase in units of π on the hop from
// the lower to the higher site.
const A1: [((usize, usize), f64); 7] = [
    ((3, 4), 1.314_848_99),
    ((4, 5), 1.669_978_30),
    ((6, 7), 1.840_610_3),
    ((2, 7), 1.294_961_6),
    ((1, 6), 1.675_433_20),
    ((1, 3), 0.042_222_14),
    ((3, 6), 0.876_129_8),
];

const A2: [((usize, usize), f64); 3] = [((3, 4), 1.583_710_01), ((4, 5), 1.395_515_82), ((6, 7), 0.133_836_8)];

/// Phase offsets `(n, m, radians)` on the 0-based hops `n -> m`, `n < m`.
pub fn fmo_phase_table(table: FmoPhaseTable) -> Vec<(usize, usize, f64)> {
    let rows: &[((usize, usize), f64)] = match table {
        FmoPhaseTable::A1 => &A1,
        FmoPhaseTable::A2 => &A2,
    };
    rows.iter().map(|&((n, m), v)| (n - 1, m - 1, v * PI)).collect()
}
