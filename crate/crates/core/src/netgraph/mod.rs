// Copyright 2026 The chiralwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! Phased weighted graphs and the gauge algebra acting on them.
//!
//! Every edge is stored once, on its canonical orientation `n < m`, with a
//! magnitude `J >= 0` and a phase `θ` in `(-π, π]`. Walking the edge from `m`
//! back to `n` picks up `-θ`.
//!
//! A gauge transform is the diagonal unitary `|n> -> e^{iα_n}|n>`. Conjugating
//! the Hamiltonian with it maps the canonical edge phase to
//! `θ_nm + α_n - α_m`. Transfer probabilities do not change, and neither do
//! the phase sums around closed loops.

mod generators;

use std::collections::VecDeque;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use generators::{
    barabasi_albert, cycle, triangle_chain, watts_strogatz, TriangleChain,
};

/// Reduce an angle into `(-π, π]`.
pub fn wrap_phase(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut x = theta % two_pi;
    if x <= -PI {
        x += two_pi;
    } else if x > PI {
        x -= two_pi;
    }
    x
}

/// An undirected edge on its canonical orientation `n < m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "J")]
    pub j: f64,
    pub theta: f64,
}

impl Edge {
    /// Phase picked up walking from `from` to the other endpoint.
    pub fn phase_from(&self, from: usize) -> f64 {
        if from == self.n {
            self.theta
        } else {
            -self.theta
        }
    }

    pub fn other(&self, v: usize) -> usize {
        if v == self.n {
            self.m
        } else {
            self.n
        }
    }
}

#[derive(Deserialize)]
struct RawGraph {
    n_sites: usize,
    edges: Vec<Edge>,
}

/// Undirected graph with a complex hopping amplitude `J e^{iθ}` per edge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph")]
pub struct PhasedGraph {
    n_sites: usize,
    edges: Vec<Edge>,
}

impl TryFrom<RawGraph> for PhasedGraph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        let mut g = PhasedGraph::new(raw.n_sites)?;
        for e in raw.edges {
            g.add_edge(e.n, e.m, e.j, e.theta)?;
        }
        Ok(g)
    }
}

impl PhasedGraph {
    pub fn new(n_sites: usize) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::invalid("graph needs at least one site"));
        }
        Ok(PhasedGraph {
            n_sites,
            edges: Vec::new(),
        })
    }

    /// Build a graph from `(n, m, J, θ)` tuples, where `θ` is the phase of
    /// the hop `n -> m` (either orientation is accepted).
    pub fn from_edges(
        n_sites: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64, f64)>,
    ) -> Result<Self> {
        let mut g = PhasedGraph::new(n_sites)?;
        for (n, m, j, theta) in edges {
            g.add_edge(n, m, j, theta)?;
        }
        Ok(g)
    }

    /// Add the edge `n -- m` with amplitude `J e^{iθ}` on the hop `n -> m`.
    pub fn add_edge(&mut self, n: usize, m: usize, j: f64, theta: f64) -> Result<()> {
        if n == m {
            return Err(Error::invalid(format!("self-loop at site {n}")));
        }
        if n >= self.n_sites || m >= self.n_sites {
            return Err(Error::invalid(format!(
                "edge ({n}, {m}) out of range for {} sites",
                self.n_sites
            )));
        }
        if !j.is_finite() || j < 0.0 || !theta.is_finite() {
            return Err(Error::invalid(format!(
                "edge ({n}, {m}) needs finite J >= 0 and finite phase, got J={j}, θ={theta}"
            )));
        }
        if self.edge_index(n, m).is_some() {
            return Err(Error::invalid(format!("duplicate edge ({n}, {m})")));
        }
        let (a, b, t) = if n < m { (n, m, theta) } else { (m, n, -theta) };
        self.edges.push(Edge {
            n: a,
            m: b,
            j,
            theta: wrap_phase(t),
        });
        Ok(())
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_index(&self, n: usize, m: usize) -> Option<usize> {
        let (a, b) = if n < m { (n, m) } else { (m, n) };
        self.edges.iter().position(|e| e.n == a && e.m == b)
    }

    pub fn has_edge(&self, n: usize, m: usize) -> bool {
        self.edge_index(n, m).is_some()
    }

    /// Phase of the hop `n -> m`, if the edge exists.
    pub fn phase(&self, n: usize, m: usize) -> Option<f64> {
        self.edge_index(n, m).map(|i| self.edges[i].phase_from(n))
    }

    /// Copy of the graph with the hop `n -> m` carrying phase `theta`.
    pub fn with_phase(&self, n: usize, m: usize, theta: f64) -> Result<PhasedGraph> {
        let idx = self
            .edge_index(n, m)
            .ok_or_else(|| Error::invalid(format!("no edge ({n}, {m})")))?;
        let mut g = self.clone();
        let e = &mut g.edges[idx];
        e.theta = wrap_phase(if e.n == n { theta } else { -theta });
        Ok(g)
    }

    /// Copy of the graph with every edge phase replaced by `f(edge)`.
    pub fn map_phases(&self, mut f: impl FnMut(&Edge) -> f64) -> PhasedGraph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.theta = wrap_phase(f(e));
        }
        g
    }

    /// Same graph with every phase negated (the time-reversed walk).
    pub fn conjugate(&self) -> PhasedGraph {
        self.map_phases(|e| -e.theta)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.n == v || e.m == v).count()
    }

    /// Per-site lists of `(neighbour, edge index)`.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n_sites];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.n].push((e.m, i));
            adj[e.m].push((e.n, i));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|e| {
                if e.n == v {
                    Some(e.m)
                } else if e.m == v {
                    Some(e.n)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Component label per site, labels assigned in order of lowest site.
    pub fn components(&self) -> Vec<usize> {
        let forest = SpanningForest::bfs(self);
        forest.component
    }

    pub fn n_components(&self) -> usize {
        self.components().into_iter().max().map_or(0, |c| c + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.n_components() == 1
    }

    /// Two-colouring of the sites when the graph is bipartite.
    pub fn two_coloring(&self) -> Option<Vec<u8>> {
        let adj = self.adjacency();
        let mut color: Vec<Option<u8>> = vec![None; self.n_sites];
        for root in 0..self.n_sites {
            if color[root].is_some() {
                continue;
            }
            color[root] = Some(0);
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                let cv = color[v].unwrap();
                for &(w, _) in &adj[v] {
                    match color[w] {
                        None => {
                            color[w] = Some(1 - cv);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cv => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap()).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_some()
    }

    pub fn is_forest(&self) -> bool {
        self.n_edges() + self.n_components() == self.n_sites
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Per-site phases `α_n` of the diagonal unitary `|n> -> e^{iα_n}|n>`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeTransform {
    pub alphas: Vec<f64>,
}

impl GaugeTransform {
    pub fn new(alphas: Vec<f64>) -> Self {
        GaugeTransform { alphas }
    }

    pub fn identity(n_sites: usize) -> Self {
        GaugeTransform {
            alphas: vec![0.0; n_sites],
        }
    }

    pub fn inverse(&self) -> Self {
        GaugeTransform {
            alphas: self.alphas.iter().map(|a| -a).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }
}

/// Apply a gauge transform: canonical edge phases become `θ_nm + α_n - α_m`.
pub fn apply_gauge(g: &PhasedGraph, u: &GaugeTransform) -> Result<PhasedGraph> {
    if u.len() != g.n_sites() {
        return Err(Error::Dimension {
            expected: g.n_sites(),
            got: u.len(),
        });
    }
    Ok(g.map_phases(|e| e.theta + u.alphas[e.n] - u.alphas[e.m]))
}

/// A closed walk `v0 -> v1 -> ... -> vk -> v0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cycle {
    pub vertices: Vec<usize>,
}

impl Cycle {
    /// Oriented hops, including the closing hop back to the first vertex.
    pub fn hops(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.vertices.len();
        (0..k).map(move |i| (self.vertices[i], self.vertices[(i + 1) % k]))
    }

    /// Total phase along the cycle in `g`, unreduced.
    pub fn phase_sum(&self, g: &PhasedGraph) -> Option<f64> {
        self.hops().map(|(a, b)| g.phase(a, b)).sum()
    }
}

/// Fundamental cycle basis and the reduced phase sum around each cycle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopBasis {
    pub cycles: Vec<Cycle>,
    pub sums: Vec<f64>,
}

impl LoopBasis {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}

/// BFS spanning forest rooted at the lowest site of each component.
struct SpanningForest {
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
    component: Vec<usize>,
    order: Vec<usize>,
    in_tree: Vec<bool>,
}

impl SpanningForest {
    fn bfs(g: &PhasedGraph) -> Self {
        let n = g.n_sites();
        let adj = g.adjacency();
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut component = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut in_tree = vec![false; g.n_edges()];
        let mut label = 0;
        for root in 0..n {
            if component[root] != usize::MAX {
                continue;
            }
            component[root] = label;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for &(w, ei) in &adj[v] {
                    if component[w] == usize::MAX {
                        component[w] = label;
                        parent[w] = Some((v, ei));
                        depth[w] = depth[v] + 1;
                        in_tree[ei] = true;
                        queue.push_back(w);
                    }
                }
            }
            label += 1;
        }
        SpanningForest {
            parent,
            depth,
            component,
            order,
            in_tree,
        }
    }

    /// Tree path from `from` to `to` (both included).
    fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let (mut a, mut b) = (from, to);
        let mut head = vec![a];
        let mut tail = vec![b];
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].unwrap().0;
            head.push(a);
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].unwrap().0;
            tail.push(b);
        }
        while a != b {
            a = self.parent[a].unwrap().0;
            b = self.parent[b].unwrap().0;
            head.push(a);
            tail.push(b);
        }
        tail.pop();
        head.extend(tail.into_iter().rev());
        head
    }
}

/// Fundamental cycles of a BFS spanning forest and their phase sums in
/// `(-π, π]`. Each non-tree edge `n -> m` closes the cycle `n -> m -> (tree
/// path) -> n`.
pub fn loop_sums(g: &PhasedGraph) -> LoopBasis {
    let forest = SpanningForest::bfs(g);
    let mut cycles = Vec::new();
    let mut sums = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        if forest.in_tree[i] {
            continue;
        }
        let mut vertices = vec![e.n];
        let back = forest.path(e.m, e.n);
        vertices.extend(&back[..back.len() - 1]);
        let cycle = Cycle { vertices };
        let sum = cycle.phase_sum(g).expect("cycle hops are graph edges");
        sums.push(wrap_phase(sum));
        cycles.push(cycle);
    }
    LoopBasis { cycles, sums }
}

/// Gauge away every spanning-tree phase.
///
/// Returns the transformed graph and the transform that produced it. Tree
/// edges end with phase zero and each non-tree edge carries the phase sum of
/// its fundamental cycle. Disconnected graphs are handled per component.
pub fn eliminate_tree_phases(g: &PhasedGraph) -> (PhasedGraph, GaugeTransform) {
    let forest = SpanningForest::bfs(g);
    let mut alphas = vec![0.0; g.n_sites()];
    for &v in &forest.order {
        if let Some((p, ei)) = forest.parent[v] {
            alphas[v] = alphas[p] + g.edges()[ei].phase_from(p);
        }
    }
    let u = GaugeTransform::new(alphas);
    let out = apply_gauge(g, &u).expect("transform sized to graph");
    (out, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn triangle(t: [f64; 3]) -> PhasedGraph {
        PhasedGraph::from_edges(3, [(0, 1, 1.0, t[0]), (1, 2, 1.0, t[1]), (2, 0, 1.0, t[2])])
            .unwrap()
    }

    fn circ_eq(a: f64, b: f64) -> bool {
        wrap_phase(a - b).abs() < 1e-12
    }

    #[test]
    fn wrap_phase_range() {
        assert_eq!(wrap_phase(PI), PI);
        assert_eq!(wrap_phase(-PI), PI);
        assert_abs_diff_eq!(wrap_phase(3.0 * PI), PI, epsilon = 1e-12);
        assert_abs_diff_eq!(wrap_phase(0.25), 0.25);
        assert_abs_diff_eq!(wrap_phase(-7.0), -7.0 + 2.0 * PI, epsilon = 1e-12);
    }

    #[test]
    fn edges_stored_canonically() {
        let g = PhasedGraph::from_edges(3, [(2, 0, 1.5, 0.4)]).unwrap();
        let e = g.edges()[0];
        assert_eq!((e.n, e.m), (0, 2));
        assert_abs_diff_eq!(e.theta, -0.4);
        assert_abs_diff_eq!(g.phase(2, 0).unwrap(), 0.4);
        assert_abs_diff_eq!(g.phase(0, 2).unwrap(), -0.4);
    }

    #[test]
    fn rejects_bad_edges() {
        let mut g = PhasedGraph::new(3).unwrap();
        assert!(g.add_edge(1, 1, 1.0, 0.0).is_err());
        assert!(g.add_edge(0, 3, 1.0, 0.0).is_err());
        assert!(g.add_edge(0, 1, -1.0, 0.0).is_err());
        g.add_edge(0, 1, 1.0, 0.0).unwrap();
        assert!(g.add_edge(1, 0, 1.0, 0.0).is_err());
        assert!(PhasedGraph::new(0).is_err());
    }

    #[test]
    fn identity_gauge_is_noop() {
        let g = triangle([0.3, -1.2, 2.0]);
        let out = apply_gauge(&g, &GaugeTransform::identity(3)).unwrap();
        assert_eq!(out, g);
    }

    #[test]
    fn gauge_size_mismatch() {
        let g = triangle([0.0; 3]);
        let err = apply_gauge(&g, &GaugeTransform::identity(2)).unwrap_err();
        assert!(matches!(err, Error::Dimension { expected: 3, got: 2 }));
    }

    #[test]
    fn triangle_gauge_moves_sum_onto_one_edge() {
        // Hops 0->1, 1->2, 2->0 carry t1, t2, t3. Zeroing 1->2 and 2->0 needs
        // α1 - α2 = -t2 and α2 - α0 = -t3; with α0 = 0 that is α2 = -t3,
        // α1 = -t2 - t3, leaving 0->1 with t1 + t2 + t3.
        let t = [0.4, -0.9, 1.3];
        let g = triangle(t);
        let u = GaugeTransform::new(vec![0.0, -t[1] - t[2], -t[2]]);
        let out = apply_gauge(&g, &u).unwrap();
        assert!(circ_eq(out.phase(0, 1).unwrap(), t[0] + t[1] + t[2]));
        assert!(circ_eq(out.phase(1, 2).unwrap(), 0.0));
        assert!(circ_eq(out.phase(2, 0).unwrap(), 0.0));
        assert!(circ_eq(loop_sums(&out).sums[0], loop_sums(&g).sums[0]));
    }

    #[test]
    fn path_gauge_sequential_elimination() {
        // Path 0-1-2 with hop phases 0.3 and -0.7. Walking from the leaf,
        // α1 = α0 + 0.3 and α2 = α1 - 0.7.
        let g = PhasedGraph::from_edges(3, [(0, 1, 1.0, 0.3), (1, 2, 1.0, -0.7)]).unwrap();
        let u = GaugeTransform::new(vec![0.0, 0.3, -0.4]);
        let out = apply_gauge(&g, &u).unwrap();
        assert_abs_diff_eq!(out.phase(0, 1).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(out.phase(1, 2).unwrap(), 0.0, epsilon = 1e-15);

        // The opposite-sign transform doubles the phases instead.
        let out = apply_gauge(&g, &u.inverse()).unwrap();
        assert_abs_diff_eq!(out.phase(0, 1).unwrap(), 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(out.phase(1, 2).unwrap(), -1.4, epsilon = 1e-15);
    }

    #[test]
    fn tree_elimination_on_all_zero_graph() {
        let g = cycle(5, 1.0, 0.0).unwrap();
        let (out, u) = eliminate_tree_phases(&g);
        assert_eq!(out, g);
        assert!(u.alphas.iter().all(|&a| a == 0.0));
    }

    #[test]
    fn square_elimination_leaves_loop_sum() {
        let g = cycle(4, 1.0, PI / 4.0).unwrap();
        let (out, u) = eliminate_tree_phases(&g);
        let nonzero: Vec<_> = out.edges().iter().filter(|e| e.theta.abs() > 1e-12).collect();
        assert_eq!(nonzero.len(), 1);
        assert_abs_diff_eq!(nonzero[0].theta.abs(), PI, epsilon = 1e-12);
        assert_eq!(apply_gauge(&g, &u).unwrap(), out);
        assert!(circ_eq(loop_sums(&g).sums[0], PI));
    }

    #[test]
    fn tree_has_no_loops() {
        let g = PhasedGraph::from_edges(
            5,
            [(0, 1, 1.0, 0.2), (1, 2, 1.0, 1.0), (1, 3, 0.5, -2.0), (3, 4, 2.0, 3.0)],
        )
        .unwrap();
        assert!(loop_sums(&g).is_empty());
        let (out, _) = eliminate_tree_phases(&g);
        assert!(out.edges().iter().all(|e| e.theta == 0.0));
    }

    #[test]
    fn cycle_loop_sum_is_reduced() {
        let g = cycle(7, 1.0, 0.9).unwrap();
        let basis = loop_sums(&g);
        assert_eq!(basis.len(), 1);
        assert!(circ_eq(basis.sums[0].abs(), wrap_phase(7.0 * 0.9).abs()));
        assert!(basis.sums[0] > -PI && basis.sums[0] <= PI);
    }

    #[test]
    fn cycle_count_matches_rank() {
        let g = PhasedGraph::from_edges(
            7,
            [
                (0, 1, 1.0, 0.1),
                (1, 2, 1.0, 0.2),
                (2, 0, 1.0, 0.3),
                (2, 3, 1.0, 0.0),
                (4, 5, 1.0, 0.5),
                (5, 6, 1.0, 0.6),
                (6, 4, 1.0, 0.7),
                (3, 1, 1.0, 0.0),
            ],
        )
        .unwrap();
        let basis = loop_sums(&g);
        assert_eq!(basis.len(), g.n_edges() - g.n_sites() + g.n_components());
        for c in &basis.cycles {
            assert!(c.phase_sum(&g).is_some(), "cycle {c:?} not closed in graph");
        }
    }

    #[test]
    fn bipartite_checks() {
        assert!(cycle(6, 1.0, 0.3).unwrap().is_bipartite());
        assert!(!cycle(5, 1.0, 0.3).unwrap().is_bipartite());
        let tree = PhasedGraph::from_edges(4, [(0, 1, 1.0, 0.0), (0, 2, 1.0, 0.0), (2, 3, 1.0, 0.0)])
            .unwrap();
        let col = tree.two_coloring().unwrap();
        for e in tree.edges() {
            assert_ne!(col[e.n], col[e.m]);
        }
    }

    #[test]
    fn json_round_trip_is_exact() {
        let g = PhasedGraph::from_edges(
            4,
            [(0, 1, 0.1 + 0.2, 1.0 / 3.0), (1, 2, std::f64::consts::E, -PI + 1e-13), (3, 0, 7.25e-9, PI)],
        )
        .unwrap();
        let s = g.to_json().unwrap();
        let back = PhasedGraph::from_json(&s).unwrap();
        assert_eq!(back, g);
        for (a, b) in g.edges().iter().zip(back.edges()) {
            assert_eq!(a.j.to_bits(), b.j.to_bits());
            assert_eq!(a.theta.to_bits(), b.theta.to_bits());
        }
        assert!(s.contains("\"J\""));
        assert!(s.contains("\"n_sites\""));
    }

    #[test]
    fn json_rejects_invalid_graphs() {
        assert!(PhasedGraph::from_json(r#"{"n_sites":2,"edges":[{"n":0,"m":0,"J":1,"theta":0}]}"#).is_err());
        assert!(PhasedGraph::from_json(r#"{"n_sites":2,"edges":[{"n":0,"m":5,"J":1,"theta":0}]}"#).is_err());
    }
}
