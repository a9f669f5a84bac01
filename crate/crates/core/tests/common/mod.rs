// Copyright 2026 The chiralwalk Authors
// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::f64::consts::PI;

use chiralwalk::dynamics::{CMatrix, HermitianOperator, Jump, LindbladModel, C64};
use chiralwalk::PhasedGraph;
use rand::Rng;

pub fn random_phase<R: Rng>(rng: &mut R) -> f64 {
    rng.random_range(-PI..PI)
}

/// Erdős-Rényi style graph with random magnitudes and phases.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, density: f64) -> PhasedGraph {
    let mut g = PhasedGraph::new(n).unwrap();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random::<f64>() < density {
                g.add_edge(a, b, rng.random_range(0.2..1.5), random_phase(rng)).unwrap();
            }
        }
    }
    g
}

/// Random labelled tree: each site attaches to an earlier one.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> PhasedGraph {
    let mut g = PhasedGraph::new(n).unwrap();
    for v in 1..n {
        let parent = rng.random_range(0..v);
        g.add_edge(parent, v, rng.random_range(0.2..1.5), random_phase(rng)).unwrap();
    }
    g
}

/// Random graph with edges only between two random colour classes.
pub fn random_bipartite<R: Rng>(rng: &mut R, n: usize) -> PhasedGraph {
    let colour: Vec<bool> = (0..n).map(|_| rng.random()).collect();
    let mut g = PhasedGraph::new(n).unwrap();
    for a in 0..n {
        for b in a + 1..n {
            if colour[a] != colour[b] && rng.random::<f64>() < 0.7 {
                g.add_edge(a, b, rng.random_range(0.2..1.5), random_phase(rng)).unwrap();
            }
        }
    }
    g
}

/// Random Hermitian matrix with entries of order one.
pub fn random_hermitian<R: Rng>(rng: &mut R, d: usize) -> HermitianOperator {
    let mut m = CMatrix::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = C64::new(rng.random_range(-1.0..1.0), 0.0);
        for j in i + 1..d {
            let z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianOperator::new(m).unwrap()
}

/// Random open system: dephasing on some sites, a few transfers, and one
/// generic jump operator. With `zero_rates` every rate is 0.
pub fn random_open_system<R: Rng>(rng: &mut R, d: usize, zero_rates: bool) -> LindbladModel {
    let h = random_hermitian(rng, d);
    let rate = |rng: &mut R| if zero_rates { 0.0 } else { rng.random_range(0.0..1.0) };
    let mut jumps = Vec::new();
    for s in 0..d {
        if rng.random::<bool>() {
            let r = rate(rng);
            jumps.push(Jump::dephasing(d, s, r));
        }
    }
    for _ in 0..rng.random_range(1..=3) {
        let (a, b) = (rng.random_range(0..d), rng.random_range(0..d));
        let r = rate(rng);
        jumps.push(Jump::transfer(d, a, b, r));
    }
    let op = CMatrix::from_fn(d, d, |_, _| C64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)));
    let r = rate(rng);
    jumps.push(Jump { op, rate: r });
    LindbladModel::new(h, jumps).unwrap()
}

pub fn max_deviation(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}
