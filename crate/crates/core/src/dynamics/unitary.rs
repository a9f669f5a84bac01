// Copyright 2026 The chiralwalk Authors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::linalg::SymmetricEigen;
use nalgebra::DVector;

use super::{validate_grid, CMatrix, HermitianOperator, Trajectory, C64};
use crate::netgraph::PhasedGraph;
use crate::{Error, Result};

/// `H[n][m] = J e^{iθ}` on each canonical edge, conjugate below the diagonal.
pub fn hamiltonian_from_graph(g: &PhasedGraph) -> HermitianOperator {
    let d = g.n_sites();
    let mut m = CMatrix::zeros(d, d);
    for e in g.edges() {
        let z = C64::from_polar(e.j, e.theta);
        m[(e.n, e.m)] = z;
        m[(e.m, e.n)] = z.conj();
    }
    HermitianOperator::new(m).expect("built Hermitian")
}

/// Time reversal `T H T` with `T` complex conjugation in the site basis.
pub fn time_reverse(h: &HermitianOperator) -> HermitianOperator {
    HermitianOperator::new(h.matrix().map(|z| z.conj())).expect("conjugate stays Hermitian")
}

struct Spectral {
    values: DVector<f64>,
    vectors: CMatrix,
}

fn spectral(h: &HermitianOperator) -> Result<Spectral> {
    let eig = SymmetricEigen::try_new(h.matrix().clone(), f64::EPSILON, 100_000)
        .ok_or_else(|| Error::numerical("Hermitian eigensolver did not converge"))?;
    Ok(Spectral {
        values: eig.eigenvalues,
        vectors: eig.eigenvectors,
    })
}

/// `e^{-iHt}` from the spectral decomposition.
pub fn propagator(h: &HermitianOperator, t: f64) -> Result<CMatrix> {
    let s = spectral(h)?;
    let phases = s.values.map(|e| C64::from_polar(1.0, -e * t));
    let mut scaled = s.vectors.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[j];
    }
    Ok(scaled * s.vectors.adjoint())
}

/// Amplitudes `e^{-iHt} ψ0` at each grid time.
pub fn evolve_unitary_state(
    h: &HermitianOperator,
    psi0: &DVector<C64>,
    times: &[f64],
) -> Result<Vec<DVector<C64>>> {
    if psi0.len() != h.dim() {
        return Err(Error::Dimension {
            expected: h.dim(),
            got: psi0.len(),
        });
    }
    validate_grid(times)?;
    let s = spectral(h)?;
    let coeffs = s.vectors.adjoint() * psi0;
    Ok(times
        .iter()
        .map(|&t| {
            let c = DVector::from_iterator(
                coeffs.len(),
                coeffs
                    .iter()
                    .zip(s.values.iter())
                    .map(|(c, &e)| c * C64::from_polar(1.0, -e * t)),
            );
            &s.vectors * c
        })
        .collect())
}

/// Site occupancies `|<m|e^{-iHt}|S>|^2` from a site-localized start.
pub fn evolve_unitary(h: &HermitianOperator, initial_site: usize, times: &[f64]) -> Result<Trajectory> {
    let d = h.dim();
    if initial_site >= d {
        return Err(Error::invalid(format!(
            "initial site {initial_site} out of range for dimension {d}"
        )));
    }
    let mut psi0 = DVector::zeros(d);
    psi0[initial_site] = C64::new(1.0, 0.0);
    let states = evolve_unitary_state(h, &psi0, times)?;
    let mut site_occupancies = Vec::with_capacity(times.len());
    let mut trace_total = Vec::with_capacity(times.len());
    for psi in states {
        let occ: Vec<f64> = psi.iter().map(|z| z.norm_sqr()).collect();
        trace_total.push(occ.iter().sum());
        site_occupancies.push(occ);
    }
    Ok(Trajectory {
        times: times.to_vec(),
        site_occupancies,
        trace_total,
    })
}
