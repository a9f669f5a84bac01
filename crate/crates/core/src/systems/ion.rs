// Copyright 2026 The chiralwalk Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dynamics::{CMatrix, HermitianOperator, C64};
use crate::{Error, Result};

/// Three-spin states spanning the walk, as indices into the 8-dim product
/// basis (spin 1 most significant, `↑ = 0`): `↑↓↓`, `↓↑↓`, `↓↓↑`, `↑↑↑`.
pub const ION_SUBSPACE: [usize; 4] = [0b011, 0b101, 0b110, 0b000];

/// `J_COM (σσ₁₂ + σσ₂₃ + σσ₁₃)(φ₁) + J_Br σσ₁₃(φ₂)` with
/// `σ_φ = cos φ σx + sin φ σy`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IonModel {
    pub j_com: f64,
    pub j_br: f64,
    pub phi1: f64,
    pub phi2: f64,
}

/// Parameter rows of the proposed experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IonRow {
    Cqw1,
    Cqw2,
    Qw,
}

impl IonRow {
    pub const ALL: [IonRow; 3] = [IonRow::Cqw1, IonRow::Cqw2, IonRow::Qw];

    /// `φ₂ = ±½ arccos(-1/3) ≈ ±0.304π` for the chiral rows.
    pub fn model(self) -> IonModel {
        let phi2 = 0.5 * (-1.0f64 / 3.0).acos();
        match self {
            IonRow::Cqw1 => IonModel {
                j_com: 2.0,
                j_br: -3.0,
                phi1: PI / 2.0,
                phi2,
            },
            IonRow::Cqw2 => IonModel {
                j_com: 2.0,
                j_br: -3.0,
                phi1: PI / 2.0,
                phi2: -phi2,
            },
            IonRow::Qw => IonModel {
                j_com: -2.0,
                j_br: 1.0,
                phi1: PI / 2.0,
                phi2: 0.0,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IonRow::Cqw1 => "cqw1",
            IonRow::Cqw2 => "cqw2",
            IonRow::Qw => "qw",
        }
    }

    pub fn parse(s: &str) -> Option<IonRow> {
        IonRow::ALL.into_iter().find(|r| r.name().eq_ignore_ascii_case(s))
    }
}

fn sigma(phi: f64) -> CMatrix {
    let mut s = CMatrix::zeros(2, 2);
    s[(0, 1)] = C64::from_polar(1.0, -phi);
    s[(1, 0)] = C64::from_polar(1.0, phi);
    s
}

fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `σ_φ` on spins `i` and `j` (0-based), identity on the third.
fn pair(i: usize, j: usize, phi: f64) -> CMatrix {
    let id = CMatrix::identity(2, 2);
    let ops: Vec<CMatrix> = (0..3)
        .map(|s| if s == i || s == j { sigma(phi) } else { id.clone() })
        .collect();
    kron(&kron(&ops[0], &ops[1]), &ops[2])
}

/// Full three-spin Hamiltonian on the 8-dim product space.
pub fn ion_full_hamiltonian(m: &IonModel) -> CMatrix {
    let com = pair(0, 1, m.phi1) + pair(1, 2, m.phi1) + pair(0, 2, m.phi1);
    com * C64::new(m.j_com, 0.0) + pair(0, 2, m.phi2) * C64::new(m.j_br, 0.0)
}

/// Projector onto [`ION_SUBSPACE`].
pub fn ion_subspace_projector() -> CMatrix {
    let mut p = CMatrix::zeros(8, 8);
    for &k in &ION_SUBSPACE {
        p[(k, k)] = C64::new(1.0, 0.0);
    }
    p
}

/// Four-site walk obtained by restricting the spin Hamiltonian to
/// [`ION_SUBSPACE`]; the hops into `↑↑↑` pick up `e^{-2iφ}`.
pub fn build_ion_walk(m: &IonModel) -> HermitianOperator {
    let full = ion_full_hamiltonian(m);
    let h = CMatrix::from_fn(4, 4, |r, c| full[(ION_SUBSPACE[r], ION_SUBSPACE[c])]);
    HermitianOperator::new(h).expect("restriction of a Hermitian matrix")
}

/// `J = Ω² η² ω / (Δ² - ω²)`.
pub fn ion_coupling(rabi: f64, eta: f64, mode: f64, detuning: f64) -> Result<f64> {
    let den = detuning * detuning - mode * mode;
    if den == 0.0 {
        return Err(Error::invalid(format!("detuning {detuning} sits on the mode pole")));
    }
    Ok(rabi * rabi * eta * eta * mode / den)
}

/// One motional mode driven by a bichromatic field. Frequencies are angular,
/// in any common unit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IonMode {
    pub mode: f64,
    pub eta: f64,
    pub rabi: f64,
    /// Distance `|ω - µ|` of the drive from the sideband.
    pub sideband_detuning: f64,
}

const HBAR: f64 = 1.054_571_817e-34;
const AMU: f64 = 1.660_539_066_60e-27;
const CA40_MASS: f64 = 39.962_590_86 * AMU;
const CA40_QUADRUPOLE_WAVELENGTH: f64 = 729.147e-9;

impl IonMode {
    /// Single-ion Lamb-Dicke parameter `k √(ħ / 2mω)` for ⁴⁰Ca⁺ on the 729 nm
    /// line, with `mode` in rad/s.
    pub fn ca40_lamb_dicke(mode: f64) -> f64 {
        2.0 * PI / CA40_QUADRUPOLE_WAVELENGTH * (HBAR / (2.0 * CA40_MASS * mode)).sqrt()
    }

    /// Axial COM (1 MHz, drive 100 kHz off) and breathing (√3 MHz, 50 kHz
    /// off) modes of a three-ion ⁴⁰Ca⁺ crystal at `Ω = 2π × 100 kHz`.
    pub fn ca40_axial() -> [IonMode; 2] {
        let two_pi = 2.0 * PI;
        let com = two_pi * 1e6;
        let br = 3f64.sqrt() * com;
        let rabi = two_pi * 100e3;
        [
            IonMode {
                mode: com,
                eta: IonMode::ca40_lamb_dicke(com),
                rabi,
                sideband_detuning: two_pi * 100e3,
            },
            IonMode {
                mode: br,
                eta: IonMode::ca40_lamb_dicke(br),
                rabi,
                sideband_detuning: two_pi * 50e3,
            },
        ]
    }
}

/// Sideband detuning over the sideband coupling `ηΩ/2`.
pub fn adiabaticity_ratio(mode: &IonMode) -> f64 {
    mode.sideband_detuning.abs() / (0.5 * mode.eta * mode.rabi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::max_abs_diff;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sigma_phi_is_rotated_pauli() {
        let phi = 0.7;
        let s = sigma(phi);
        assert_abs_diff_eq!((s[(0, 1)] - C64::new(phi.cos(), -phi.sin())).norm(), 0.0, epsilon = 1e-15);
        let sq = &s * &s;
        assert!(max_abs_diff(&sq, &CMatrix::identity(2, 2)) < 1e-15);
    }

    #[test]
    fn subspace_is_invariant() {
        let p = ion_subspace_projector();
        for row in IonRow::ALL {
            let h = ion_full_hamiltonian(&row.model());
            let comm = &p * &h - &h * &p;
            assert!(comm.iter().all(|z| z.norm() < 1e-12), "{row:?}");
        }
    }

    #[test]
    fn achiral_row_is_real() {
        let h = build_ion_walk(&IonRow::Qw.model());
        assert!(h.matrix().iter().all(|z| z.im.abs() < 1e-12));
    }

    #[test]
    fn chiral_rows_are_conjugate() {
        let a = build_ion_walk(&IonRow::Cqw1.model()).into_matrix();
        let b = build_ion_walk(&IonRow::Cqw2.model()).into_matrix();
        assert!(max_abs_diff(&a, &b.map(|z| z.conj())) < 1e-12);
        assert!(max_abs_diff(&a, &b) > 1.0);
    }

    #[test]
    fn effective_couplings() {
        let h = build_ion_walk(&IonRow::Cqw1.model()).into_matrix();
        assert_abs_diff_eq!(h[(0, 1)].re, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(h[(0, 2)].re, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(h[(0, 3)].re, -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(h[(1, 3)].norm(), 3.0, epsilon = 1e-12);
        // Hops into ↑↑↑ carry e^{-2iφ}.
        let m = IonRow::Cqw1.model();
        let want = C64::from_polar(-3.0, -2.0 * m.phi2) + C64::from_polar(2.0, -2.0 * m.phi1);
        assert_abs_diff_eq!((h[(3, 1)] - want).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn coupling_formula() {
        assert!(ion_coupling(1.0, 0.1, 2.0, 2.0).is_err());
        assert!(ion_coupling(1.0, 0.1, 2.0, 1.0).unwrap() < 0.0);
        assert!(ion_coupling(1.0, 0.1, 2.0, 3.0).unwrap() > 0.0);
        assert!(ion_coupling(1.0, 0.1, 2.0, 1e9).unwrap().abs() < 1e-18);
        assert_abs_diff_eq!(ion_coupling(2.0, 0.5, 1.0, 3.0).unwrap(), 0.125);
    }

    #[test]
    fn calcium_adiabaticity() {
        let [com, br] = IonMode::ca40_axial();
        assert_abs_diff_eq!(com.eta, 0.0969, epsilon = 1e-4);
        assert_eq!(adiabaticity_ratio(&com).round(), 21.0);
        assert_eq!(adiabaticity_ratio(&br).round(), 14.0);
    }

    #[test]
    fn row_names() {
        assert_eq!(IonRow::parse("CQW2"), Some(IonRow::Cqw2));
        assert_eq!(IonRow::parse("x"), None);
    }
}
