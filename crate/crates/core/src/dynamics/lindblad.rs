// Copyright 2026 The chiralwalk Authors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::{DMatrix, DVector};

use super::{validate_grid, CMatrix, DensityMatrix, HermitianOperator, LindbladModel, Trajectory, C64};
use crate::{Error, Result};

/// Largest Hilbert dimension for which `Auto` builds the dense superoperator.
const SUPEROPERATOR_MAX_DIM: usize = 24;

const RTOL: f64 = 1e-10;
const ATOL: f64 = 1e-12;
const MAX_STEPS: usize = 10_000_000;

/// Integration route for [`evolve_lindblad_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LindbladMethod {
    /// Superoperator exponential for small systems, adaptive otherwise.
    #[default]
    Auto,
    /// `exp(L dt)` of the dense superoperator, cached per step size.
    Superoperator,
    /// Dormand-Prince 5(4) with `rtol = 1e-10`, `atol = 1e-12`.
    Adaptive,
}

fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            out.view_mut((i * br, j * bc), (br, bc)).copy_from(&(b * aij));
        }
    }
    out
}

/// Generator acting on column-stacked `vec(ρ)`, using
/// `vec(A X B) = (Bᵀ ⊗ A) vec(X)`.
pub fn superoperator(model: &LindbladModel) -> CMatrix {
    let d = model.dim();
    let id = CMatrix::identity(d, d);
    let h = model.hamiltonian().matrix();
    let mi = C64::new(0.0, -1.0);
    let mut l = (kron(&id, h) - kron(&h.transpose(), &id)) * mi;
    for j in model.jumps() {
        if j.rate == 0.0 {
            continue;
        }
        let ldl = j.op.adjoint() * &j.op;
        let c = C64::new(j.rate, 0.0);
        l += kron(&j.op.map(|z| z.conj()), &j.op) * c;
        l -= (kron(&id, &ldl) + kron(&ldl.transpose(), &id)) * (c * 0.5);
    }
    l
}

fn vec_of(m: &CMatrix) -> DVector<C64> {
    DVector::from_column_slice(m.as_slice())
}

fn unvec(v: &DVector<C64>, d: usize) -> CMatrix {
    DMatrix::from_column_slice(d, d, v.as_slice())
}

fn record(rho: &CMatrix, occ: &mut Vec<Vec<f64>>, trace: &mut Vec<f64>) {
    let p: Vec<f64> = rho.diagonal().iter().map(|z| z.re).collect();
    trace.push(p.iter().sum());
    occ.push(p);
}

/// Evolve `rho0` under `model`, sampling site occupancies on `times`.
pub fn evolve_lindblad(model: &LindbladModel, rho0: &DensityMatrix, times: &[f64]) -> Result<Trajectory> {
    evolve_lindblad_with(model, rho0, times, LindbladMethod::Auto)
}

pub fn evolve_lindblad_with(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    times: &[f64],
    method: LindbladMethod,
) -> Result<Trajectory> {
    if rho0.dim() != model.dim() {
        return Err(Error::Dimension {
            expected: model.dim(),
            got: rho0.dim(),
        });
    }
    validate_grid(times)?;
    let method = match method {
        LindbladMethod::Auto if model.dim() <= SUPEROPERATOR_MAX_DIM => LindbladMethod::Superoperator,
        LindbladMethod::Auto => LindbladMethod::Adaptive,
        m => m,
    };
    let traj = match method {
        LindbladMethod::Superoperator => by_superoperator(model, rho0, times)?,
        _ => by_adaptive(model, rho0, times)?,
    };
    if traj.trace_total.iter().any(|x| !x.is_finite()) {
        return Err(Error::numerical("non-finite occupancy during Lindblad evolution"));
    }
    Ok(traj)
}

fn by_superoperator(model: &LindbladModel, rho0: &DensityMatrix, times: &[f64]) -> Result<Trajectory> {
    let d = model.dim();
    let l = superoperator(model);
    let mut v = vec_of(rho0.matrix());
    let mut occ = Vec::with_capacity(times.len());
    let mut trace = Vec::with_capacity(times.len());
    let mut cache: Option<(f64, CMatrix)> = None;
    let mut t = 0.0;
    for &target in times {
        let dt = target - t;
        if dt > 0.0 {
            let reuse = matches!(&cache, Some((h, _)) if (h - dt).abs() <= 1e-12 * dt.abs().max(1.0));
            if !reuse {
                cache = Some((dt, (&l * C64::new(dt, 0.0)).exp()));
            }
            let (_, prop) = cache.as_ref().expect("cache filled");
            v = prop * v;
        }
        t = target;
        record(&unvec(&v, d), &mut occ, &mut trace);
    }
    Ok(Trajectory {
        times: times.to_vec(),
        site_occupancies: occ,
        trace_total: trace,
    })
}

struct Rhs {
    h: CMatrix,
    jumps: Vec<(CMatrix, CMatrix, f64)>,
}

impl Rhs {
    fn new(model: &LindbladModel) -> Self {
        Rhs {
            h: model.hamiltonian().matrix().clone(),
            jumps: model
                .jumps()
                .iter()
                .filter(|j| j.rate != 0.0)
                .map(|j| (j.op.clone(), j.op.adjoint() * &j.op, j.rate))
                .collect(),
        }
    }

    fn eval(&self, rho: &CMatrix) -> CMatrix {
        let hr = &self.h * rho;
        let mut out = (&hr - hr.adjoint()) * C64::new(0.0, -1.0);
        for (l, ldl, c) in &self.jumps {
            let c = C64::new(*c, 0.0);
            let a = ldl * rho;
            out += (l * rho * l.adjoint() - (&a + a.adjoint()) * C64::new(0.5, 0.0)) * c;
        }
        out
    }
}

// Dormand-Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn lin(base: &CMatrix, terms: &[(f64, &CMatrix)], h: f64) -> CMatrix {
    let mut out = base.clone();
    for (c, k) in terms {
        if *c != 0.0 {
            out += *k * C64::new(c * h, 0.0);
        }
    }
    out
}

fn by_adaptive(model: &LindbladModel, rho0: &DensityMatrix, times: &[f64]) -> Result<Trajectory> {
    let rhs = Rhs::new(model);
    let mut rho = rho0.matrix().clone();
    let mut occ = Vec::with_capacity(times.len());
    let mut trace = Vec::with_capacity(times.len());
    let scale = rhs.h.iter().map(|z| z.norm()).fold(0.0, f64::max)
        + rhs.jumps.iter().map(|j| j.2).sum::<f64>();
    let mut h = if scale > 0.0 { 0.1 / scale } else { 1.0 };
    let mut t = 0.0;
    let mut k1 = rhs.eval(&rho);
    let mut steps = 0usize;
    for &target in times {
        while t < target {
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::numerical("adaptive integrator exceeded step budget"));
            }
            let step = h.min(target - t);
            let k2 = rhs.eval(&lin(&rho, &[(A21, &k1)], step));
            let k3 = rhs.eval(&lin(&rho, &[(A31, &k1), (A32, &k2)], step));
            let k4 = rhs.eval(&lin(&rho, &[(A41, &k1), (A42, &k2), (A43, &k3)], step));
            let k5 = rhs.eval(&lin(&rho, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], step));
            let k6 = rhs.eval(&lin(
                &rho,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                step,
            ));
            let next = lin(&rho, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], step);
            let k7 = rhs.eval(&next);
            let err = lin(
                &CMatrix::zeros(rho.nrows(), rho.ncols()),
                &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
                step,
            );
            let mut acc = 0.0;
            for ((e, y0), y1) in err.iter().zip(rho.iter()).zip(next.iter()) {
                let sc = ATOL + RTOL * y0.norm().max(y1.norm());
                acc += (e.norm() / sc).powi(2);
            }
            let err_norm = (acc / err.len() as f64).sqrt();
            if !err_norm.is_finite() {
                return Err(Error::numerical("adaptive integrator produced non-finite error"));
            }
            if err_norm <= 1.0 {
                t = if step == target - t { target } else { t + step };
                rho = next;
                k1 = k7;
            }
            let factor = if err_norm == 0.0 { 5.0 } else { (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0) };
            h = step * factor;
            if h < 1e-14 * target.max(1.0) {
                return Err(Error::numerical("adaptive step size underflow"));
            }
        }
        record(&rho, &mut occ, &mut trace);
    }
    Ok(Trajectory {
        times: times.to_vec(),
        site_occupancies: occ,
        trace_total: trace,
    })
}

/// Pure-state evolution with irreversible loss to a single sink.
#[derive(Clone, Debug, PartialEq)]
pub struct LossyTrajectory {
    pub times: Vec<f64>,
    pub site_occupancies: Vec<Vec<f64>>,
    /// Population that has left the system, `1 - ‖ψ‖²`.
    pub sink: Vec<f64>,
}

impl LossyTrajectory {
    /// Trajectory over the sites plus one appended sink site.
    pub fn into_trajectory(self) -> Trajectory {
        let site_occupancies: Vec<Vec<f64>> = self
            .site_occupancies
            .into_iter()
            .zip(&self.sink)
            .map(|(mut occ, &s)| {
                occ.push(s);
                occ
            })
            .collect();
        let trace_total = site_occupancies.iter().map(|o| o.iter().sum()).collect();
        Trajectory {
            times: self.times,
            site_occupancies,
            trace_total,
        }
    }
}

/// Evolve `|initial_site>` under `H_eff = H - (i/2) Σ r |f><f|`.
///
/// Matches the Lindblad evolution with jumps `|sink><f|` at rate `r` into a
/// single extra sink site and no other dissipation.
pub fn evolve_lossy(
    h: &HermitianOperator,
    feeders: &[(usize, f64)],
    initial_site: usize,
    times: &[f64],
) -> Result<LossyTrajectory> {
    let d = h.dim();
    if initial_site >= d {
        return Err(Error::invalid(format!(
            "initial site {initial_site} out of range for dimension {d}"
        )));
    }
    validate_grid(times)?;
    let mut heff = h.matrix().clone();
    for &(f, r) in feeders {
        if f >= d {
            return Err(Error::invalid(format!("sink feeder {f} out of range for dimension {d}")));
        }
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::invalid(format!("sink rate {r}")));
        }
        heff[(f, f)] -= C64::new(0.0, 0.5 * r);
    }
    let gen = heff * C64::new(0.0, -1.0);
    let mut psi = DVector::zeros(d);
    psi[initial_site] = C64::new(1.0, 0.0);
    let mut occ = Vec::with_capacity(times.len());
    let mut sink = Vec::with_capacity(times.len());
    let mut cache: Option<(f64, CMatrix)> = None;
    let mut t = 0.0;
    for &target in times {
        let dt = target - t;
        if dt > 0.0 {
            let reuse = matches!(&cache, Some((s, _)) if (s - dt).abs() <= 1e-12 * dt.abs().max(1.0));
            if !reuse {
                cache = Some((dt, (&gen * C64::new(dt, 0.0)).exp()));
            }
            psi = &cache.as_ref().expect("cache filled").1 * psi;
        }
        t = target;
        let p: Vec<f64> = psi.iter().map(|z| z.norm_sqr()).collect();
        let norm: f64 = p.iter().sum();
        if !norm.is_finite() {
            return Err(Error::numerical("non-finite amplitude in lossy evolution"));
        }
        sink.push(1.0 - norm);
        occ.push(p);
    }
    Ok(LossyTrajectory {
        times: times.to_vec(),
        site_occupancies: occ,
        sink,
    })
}
