// Copyright 2026 The chiralwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Hamiltonians, density matrices, and their propagation.
//!
//! Units: `ħ = 1`, couplings in inverse time.

mod lindblad;
mod metrics;
mod unitary;

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

pub use lindblad::{
    evolve_lindblad, evolve_lindblad_with, evolve_lossy, superoperator, LindbladMethod,
    LossyTrajectory,
};
pub use metrics::{
    first_maximum, half_arrival_time, transfer_probability, transport_speed, FirstMaximum,
    MIN_PEAK_HEIGHT,
};
pub use unitary::{
    evolve_unitary, evolve_unitary_state, hamiltonian_from_graph, propagator, time_reverse,
};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Elementwise tolerance for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-12;

pub(crate) fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Dense Hermitian matrix over the site basis.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        let dev = max_abs_diff(&matrix, &matrix.adjoint());
        if dev > HERMITIAN_TOL {
            return Err(Error::invalid(format!(
                "matrix is not Hermitian (max |H - H†| = {dev:e})"
            )));
        }
        Ok(HermitianOperator { matrix })
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianOperator {
            matrix: CMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Add real on-site energies to the diagonal.
    pub fn with_onsite(mut self, energies: &[f64]) -> Result<Self> {
        if energies.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: energies.len(),
            });
        }
        for (i, &e) in energies.iter().enumerate() {
            self.matrix[(i, i)] += C64::new(e, 0.0);
        }
        Ok(self)
    }

    /// Embed into a larger space; the extra sites are uncoupled.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: dim,
            });
        }
        let mut m = CMatrix::zeros(dim, dim);
        m.view_mut((0, 0), (self.dim(), self.dim())).copy_from(&self.matrix);
        Ok(HermitianOperator { matrix: m })
    }
}

/// Density operator over the site basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace (1e-9) and positivity (-1e-9).
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let h = HermitianOperator::new(matrix)?;
        let rho = DensityMatrix { matrix: h.into_matrix() };
        let tr = rho.trace();
        if (tr - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("density matrix trace {tr} != 1")));
        }
        let eig = nalgebra::linalg::SymmetricEigen::try_new(rho.matrix.clone(), f64::EPSILON, 10_000)
            .ok_or_else(|| Error::numerical("eigensolver did not converge"))?;
        let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -1e-9 {
            return Err(Error::invalid(format!("density matrix has eigenvalue {min}")));
        }
        Ok(rho)
    }

    /// `|site><site|`.
    pub fn pure_site(dim: usize, site: usize) -> Result<Self> {
        if site >= dim {
            return Err(Error::invalid(format!("site {site} out of range for dimension {dim}")));
        }
        let mut m = CMatrix::zeros(dim, dim);
        m[(site, site)] = C64::new(1.0, 0.0);
        Ok(DensityMatrix { matrix: m })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }
}

/// One jump operator with its rate.
#[derive(Clone, Debug, PartialEq)]
pub struct Jump {
    pub op: CMatrix,
    pub rate: f64,
}

impl Jump {
    /// `|to><from|` at `rate`.
    pub fn transfer(dim: usize, from: usize, to: usize, rate: f64) -> Self {
        let mut op = CMatrix::zeros(dim, dim);
        op[(to, from)] = C64::new(1.0, 0.0);
        Jump { op, rate }
    }

    /// `|site><site|` at `rate`.
    pub fn dephasing(dim: usize, site: usize, rate: f64) -> Self {
        Jump::transfer(dim, site, site, rate)
    }
}

/// Hamiltonian plus jump operators:
/// `dρ/dt = -i[H, ρ] + Σ c (L ρ L† - ½{L†L, ρ})`.
#[derive(Clone, Debug, PartialEq)]
pub struct LindbladModel {
    h: HermitianOperator,
    jumps: Vec<Jump>,
}

impl LindbladModel {
    pub fn new(h: HermitianOperator, jumps: Vec<Jump>) -> Result<Self> {
        let d = h.dim();
        for (k, j) in jumps.iter().enumerate() {
            if j.op.nrows() != d || j.op.ncols() != d {
                return Err(Error::Dimension {
                    expected: d,
                    got: j.op.nrows().max(j.op.ncols()),
                });
            }
            if !(j.rate >= 0.0) || !j.rate.is_finite() {
                return Err(Error::invalid(format!("jump {k} has rate {}", j.rate)));
            }
        }
        Ok(LindbladModel { h, jumps })
    }

    pub fn unitary(h: HermitianOperator) -> Self {
        LindbladModel { h, jumps: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn hamiltonian(&self) -> &HermitianOperator {
        &self.h
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }
}

/// Site occupancies of an evolution on a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// `site_occupancies[k][n]` is the population of site `n` at `times[k]`.
    pub site_occupancies: Vec<Vec<f64>>,
    pub trace_total: Vec<f64>,
}

impl Trajectory {
    pub fn dim(&self) -> usize {
        self.site_occupancies.first().map_or(0, Vec::len)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn series(&self, site: usize) -> Result<Vec<f64>> {
        transfer_probability(self, site)
    }

    /// CSV with header `t,site_0,...,site_{d-1},trace`, floats printed in
    /// shortest round-trip form.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let mut header = String::from("t");
        for n in 0..self.dim() {
            header.push_str(&format!(",site_{n}"));
        }
        header.push_str(",trace");
        writeln!(w, "{header}")?;
        for (k, t) in self.times.iter().enumerate() {
            let mut line = format!("{t:?}");
            for p in &self.site_occupancies[k] {
                line.push_str(&format!(",{p:?}"));
            }
            line.push_str(&format!(",{:?}", self.trace_total[k]));
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

pub(crate) fn validate_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::invalid("empty time grid"));
    }
    if !(times[0] >= 0.0) {
        return Err(Error::invalid(format!("time grid starts at {} < 0", times[0])));
    }
    for w in times.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::invalid(format!(
                "time grid not strictly ascending at {} -> {}",
                w[0], w[1]
            )));
        }
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("non-finite time in grid"));
    }
    Ok(())
}

/// `points` evenly spaced times on `[0, horizon]`.
pub fn uniform_grid(horizon: f64, points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![0.0];
    }
    let dt = horizon / (points - 1) as f64;
    (0..points).map(|k| k as f64 * dt).collect()
}
