// Copyright 2026 The chiralwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Graph families used by the experiments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PhasedGraph;
use crate::{Error, Result};

/// Watts-Strogatz draws that come out disconnected are discarded; give up
/// after this many.
const MAX_CONNECTED_ATTEMPTS: usize = 10_000;

/// Homogeneous `N`-cycle `0 -> 1 -> ... -> N-1 -> 0` with phase `phi` on
/// every forward hop.
pub fn cycle(n: usize, j: f64, phi: f64) -> Result<PhasedGraph> {
    if n < 3 {
        return Err(Error::invalid(format!("cycle needs N >= 3, got {n}")));
    }
    PhasedGraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n, j, phi)))
}

/// Chain of corner-sharing triangles with its designated sites.
#[derive(Clone, Debug)]
pub struct TriangleChain {
    pub graph: PhasedGraph,
    pub start: usize,
    pub end: usize,
    /// Hop `(apex, next base site)` of each triangle, carrying the control
    /// phase.
    pub control_edges: Vec<(usize, usize)>,
}

/// Corner-sharing triangle chain with `2n+1` sites.
///
/// Base sites are even (`0, 2, ..., 2n`), apexes odd. Triangle `i` is
/// `(2i, 2i+1, 2i+2)`:
///
/// ```text
///     1       3             2n-1
///    / \     / \            /  \
///   0---2---4---...---2n-2-----2n
/// ```
///
/// Each triangle's control hop `2i+1 -> 2i+2` carries `theta`, so the loop
/// `2i -> 2i+1 -> 2i+2 -> 2i` encloses `theta`. All magnitudes are 1; the
/// start is site 0 and the end site `2n`.
pub fn triangle_chain(n_triangles: usize, theta: f64) -> Result<TriangleChain> {
    if n_triangles == 0 {
        return Err(Error::invalid("triangle chain needs at least one triangle"));
    }
    let n_sites = 2 * n_triangles + 1;
    let mut g = PhasedGraph::new(n_sites)?;
    let mut control_edges = Vec::with_capacity(n_triangles);
    for i in 0..n_triangles {
        let (a, b, c) = (2 * i, 2 * i + 1, 2 * i + 2);
        g.add_edge(a, b, 1.0, 0.0)?;
        g.add_edge(b, c, 1.0, theta)?;
        g.add_edge(a, c, 1.0, 0.0)?;
        control_edges.push((b, c));
    }
    Ok(TriangleChain {
        graph: g,
        start: 0,
        end: n_sites - 1,
        control_edges,
    })
}

/// Connected Watts-Strogatz small-world graph.
///
/// Starts from the ring where site `i` links to `i+1 ..= i+k/2`, then visits
/// those clockwise edges lap by lap and, with probability `p`, moves the far
/// endpoint to a uniformly chosen site that is neither `i` nor already a
/// neighbour. Disconnected draws are discarded and redrawn from the same
/// stream. Site labels keep their ring positions.
pub fn watts_strogatz(n: usize, k: usize, p: f64, seed: u64) -> Result<PhasedGraph> {
    if k < 2 || !k.is_multiple_of(2) || n <= k {
        return Err(Error::invalid(format!(
            "Watts-Strogatz needs N > k >= 2 with k even, got N={n}, k={k}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("rewiring probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_CONNECTED_ATTEMPTS {
        let g = watts_strogatz_draw(n, k, p, &mut rng)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::numerical(format!(
        "no connected Watts-Strogatz draw in {MAX_CONNECTED_ATTEMPTS} attempts"
    )))
}

#[allow(clippy::needless_range_loop)]
fn watts_strogatz_draw(n: usize, k: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<PhasedGraph> {
    let mut adj = vec![vec![false; n]; n];
    for i in 0..n {
        for d in 1..=k / 2 {
            let j = (i + d) % n;
            adj[i][j] = true;
            adj[j][i] = true;
        }
    }
    for d in 1..=k / 2 {
        for i in 0..n {
            let j = (i + d) % n;
            if !adj[i][j] || rng.random::<f64>() >= p {
                continue;
            }
            let free = (0..n).filter(|&w| w != i && !adj[i][w]).count();
            if free == 0 {
                continue;
            }
            let mut pick = rng.random_range(0..free);
            let w = (0..n)
                .filter(|&w| w != i && !adj[i][w])
                .find(|_| {
                    let hit = pick == 0;
                    pick = pick.saturating_sub(1);
                    hit
                })
                .expect("pick indexes a free site");
            adj[i][j] = false;
            adj[j][i] = false;
            adj[i][w] = true;
            adj[w][i] = true;
        }
    }
    let mut g = PhasedGraph::new(n)?;
    for (i, row) in adj.iter().enumerate() {
        for (j, &linked) in row.iter().enumerate().skip(i + 1) {
            if linked {
                g.add_edge(i, j, 1.0, 0.0)?;
            }
        }
    }
    Ok(g)
}

/// Barabási-Albert preferential-attachment graph.
///
/// Seeds with the complete graph on `m` sites, then each new site links to
/// `m` distinct existing sites drawn with probability proportional to
/// degree (uniformly while every degree is zero). The result has
/// `m(m-1)/2 + m(N-m)` edges.
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Result<PhasedGraph> {
    if m < 1 || n <= m {
        return Err(Error::invalid(format!(
            "Barabási-Albert needs N > m >= 1, got N={n}, m={m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = PhasedGraph::new(n)?;
    // Each site appears once per incident edge end.
    let mut ends: Vec<usize> = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            g.add_edge(a, b, 1.0, 0.0)?;
            ends.extend([a, b]);
        }
    }
    for v in m..n {
        let mut targets: Vec<usize> = Vec::with_capacity(m);
        while targets.len() < m {
            let t = if ends.is_empty() {
                rng.random_range(0..v)
            } else {
                ends[rng.random_range(0..ends.len())]
            };
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for t in targets {
            g.add_edge(t, v, 1.0, 0.0)?;
            ends.extend([t, v]);
        }
    }
    Ok(g)
}
