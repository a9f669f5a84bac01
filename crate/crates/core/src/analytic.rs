// Copyright 2026 The chiralwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed forms for homogeneous polygons and a peak finder for the
//! three-site loop.

use std::f64::consts::PI;

use nalgebra::linalg::SymmetricEigen;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::hamiltonian_from_graph;
use crate::netgraph::PhasedGraph;
use crate::{Error, Result};

/// Unit-coupling `N`-cycle with phase `phi` on every forward hop, observed
/// from `s` to `e`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonSpec {
    n: usize,
    phi: f64,
    s: usize,
    e: usize,
}

impl PolygonSpec {
    pub fn new(n: usize, phi: f64, s: usize, e: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid(format!("polygon needs N >= 3, got {n}")));
        }
        if s >= n || e >= n {
            return Err(Error::invalid(format!("sites ({s}, {e}) out of range for N = {n}")));
        }
        if !phi.is_finite() {
            return Err(Error::invalid("non-finite polygon phase"));
        }
        Ok(PolygonSpec { n, phi, s, e })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn start(&self) -> usize {
        self.s
    }

    pub fn end(&self) -> usize {
        self.e
    }

    /// Same polygon with a different target.
    pub fn with_end(&self, e: usize) -> Result<Self> {
        PolygonSpec::new(self.n, self.phi, self.s, e)
    }

    fn momentum(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.n as f64
    }
}

/// `E_k = 2 cos(2πk/N - φ)` for `k = 0..N`.
pub fn polygon_spectrum(spec: &PolygonSpec) -> Vec<f64> {
    (0..spec.n).map(|k| 2.0 * (spec.momentum(k) - spec.phi).cos()).collect()
}

/// `|1/N Σ_k exp(-i(2t cos(2πk/N - φ) + 2πk(E-S)/N))|²`.
pub fn polygon_stp(spec: &PolygonSpec, t: f64) -> f64 {
    let de = spec.e as f64 - spec.s as f64;
    let amp: Complex64 = (0..spec.n)
        .map(|k| {
            let q = spec.momentum(k);
            Complex64::from_polar(1.0, -(2.0 * t * (q - spec.phi).cos() + q * de))
        })
        .sum();
    (amp / spec.n as f64).norm_sqr()
}

/// Largest antipodal transfer probability on `times` for the even `N`-cycle
/// enclosing a total phase of π. The antipode of site 0 is `N/2`.
pub fn even_cycle_suppression_check(n: usize, times: &[f64]) -> Result<f64> {
    if !n.is_multiple_of(2) {
        return Err(Error::invalid(format!("suppression needs an even cycle, got N = {n}")));
    }
    let spec = PolygonSpec::new(n, PI / n as f64, 0, n / 2)?;
    Ok(times.iter().map(|&t| polygon_stp(&spec, t)).fold(0.0, f64::max))
}

/// First maximum of a transfer probability on the triangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrianglePeak {
    pub time: f64,
    pub probability: f64,
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Maximize a unimodal `f` on `[a, b]`.
pub(crate) fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Spectral representation of `<1|e^{-iHt}|0>`.
struct TriangleAmplitude {
    energies: Vec<f64>,
    weights: Vec<Complex64>,
}

impl TriangleAmplitude {
    fn new(j12: f64, j23: f64, j13: f64, theta: f64) -> Result<Self> {
        for (name, j) in [("J12", j12), ("J23", j23), ("J13", j13)] {
            if !(j > 0.0) || !j.is_finite() {
                return Err(Error::invalid(format!("{name} = {j} must be positive")));
            }
        }
        // Loop 0 -> 1 -> 2 -> 0 encloses theta.
        let g = PhasedGraph::from_edges(3, [(0, 1, j12, 0.0), (1, 2, j23, theta), (0, 2, j13, 0.0)])?;
        let eig = SymmetricEigen::try_new(hamiltonian_from_graph(&g).into_matrix(), f64::EPSILON, 10_000)
            .ok_or_else(|| Error::numerical("triangle eigensolver did not converge"))?;
        let v = &eig.eigenvectors;
        Ok(TriangleAmplitude {
            energies: eig.eigenvalues.iter().copied().collect(),
            weights: (0..3).map(|k| v[(1, k)] * v[(0, k)].conj()).collect(),
        })
    }

    fn probability(&self, t: f64) -> f64 {
        self.energies
            .iter()
            .zip(&self.weights)
            .map(|(e, w)| w * Complex64::from_polar(1.0, -e * t))
            .sum::<Complex64>()
            .norm_sqr()
    }

    fn period(&self) -> f64 {
        let lo = self.energies.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.energies.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        2.0 * PI / (hi - lo)
    }
}

/// First maximum of `P_{0→1}(t)` on the triangle with couplings `J12`
/// (0-1), `J23` (1-2), `J13` (0-2) and loop phase `theta`.
///
/// Scans at `1e-3` of the shortest spectral period, then refines the first
/// bracketed peak by golden section.
pub fn triangle_analytic_peak(j12: f64, j23: f64, j13: f64, theta: f64) -> Result<TrianglePeak> {
    let amp = TriangleAmplitude::new(j12, j23, j13, theta)?;
    let period = amp.period();
    let dt = 1e-3 * period;
    let max_steps = (200.0 / 1e-3) as usize;
    let (mut p0, mut p1) = (amp.probability(0.0), amp.probability(dt));
    for k in 2..max_steps {
        let p2 = amp.probability(k as f64 * dt);
        if p1 > p0 && p1 >= p2 {
            let (time, probability) =
                golden_section_max(|t| amp.probability(t), (k - 2) as f64 * dt, k as f64 * dt, 1e-12 * period.max(1.0));
            return Ok(TrianglePeak { time, probability });
        }
        p0 = p1;
        p1 = p2;
    }
    Err(Error::numerical("no maximum found within 200 spectral periods"))
}

/// Loop phase in `(-π, π]` maximizing the first peak of the homogeneous
/// triangle, with that peak.
pub fn triangle_optimal_phase(j: f64) -> Result<(f64, TrianglePeak)> {
    let peak = |th: f64| triangle_analytic_peak(j, j, j, th).map(|p| p.probability).unwrap_or(0.0);
    let n = 360;
    let (mut best_k, mut best) = (0, f64::NEG_INFINITY);
    for k in 0..n {
        let th = -PI + 2.0 * PI * (k as f64 + 0.5) / n as f64;
        let p = peak(th);
        if p > best {
            best = p;
            best_k = k;
        }
    }
    let step = 2.0 * PI / n as f64;
    let centre = -PI + step * (best_k as f64 + 0.5);
    let (theta, _) = golden_section_max(peak, centre - step, centre + step, 1e-10);
    Ok((theta, triangle_analytic_peak(j, j, j, theta)?))
}
