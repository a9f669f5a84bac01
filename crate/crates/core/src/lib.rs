// Copyright 2026 The chiralwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Continuous-time chiral quantum walks.
//!
//! A chiral walk is a tight-binding hopping model on a graph whose edges carry
//! complex phases `J e^{iθ}`. Breaking time-reversal symmetry this way lets the
//! Hamiltonian bias, speed up, or suppress site-to-site transport.
//!
//! * [`netgraph`] holds phased graphs, topology generators, and the gauge
//!   algebra (tree elimination and loop-sum invariants).
//! * [`dynamics`] builds Hamiltonians and propagates unitary and Lindblad
//!   dynamics, with transport metrics on the resulting trajectories.
//! * [`analytic`] has closed-form polygon results used as oracles.
//! * [`phaseopt`] is a multistart derivative-free phase optimizer.
//! * [`systems`] builds the switch, triangle chain, FMO, small-world, and
//!   trapped-ion experiments.
//! * [`cli`] drives the experiments from the `chiralwalk` binary.

// Range checks are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cli;
pub mod dynamics;
mod error;
pub mod netgraph;
pub mod phaseopt;
pub mod systems;

pub use error::{Error, Result};
pub use netgraph::{wrap_phase, Edge, GaugeTransform, LoopBasis, PhasedGraph};
