// Copyright 2026 The chiralwalk Authors
// SPDX-License-Identifier: Apache-2.0

mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use chiralwalk::analytic::{polygon_stp, triangle_analytic_peak, triangle_optimal_phase, PolygonSpec};
use chiralwalk::dynamics::{evolve_unitary, first_maximum, hamiltonian_from_graph, uniform_grid};
use chiralwalk::netgraph::{apply_gauge, cycle, GaugeTransform};
use chiralwalk::phaseopt::{evaluate, optimize, Objective, ObjectiveKind, OptimizerConfig, PhaseAssignment};
use chiralwalk::systems::{
    build_fmo, build_fmo_from, build_ion_walk, build_switch, build_triangle_chain, build_ws_experiment,
    fmo_phase_table, ChainConfig, FmoData, FmoPhaseTable, FmoRates, IonRow, SwitchConfig, WsConfig,
};
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn achiral_polygon_is_mirror_symmetric(n in 3usize..12, s in 0usize..12, e in 0usize..12, t in 0.0f64..15.0) {
        let (s, e) = (s % n, e % n);
        let mirror = (2 * s + n - e) % n;
        let a = polygon_stp(&PolygonSpec::new(n, 0.0, s, e).unwrap(), t);
        let b = polygon_stp(&PolygonSpec::new(n, 0.0, s, mirror).unwrap(), t);
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn reversing_the_phase_mirrors_the_polygon(n in 3usize..12, phi in -PI..PI, e in 0usize..12, t in 0.0f64..15.0) {
        let e = e % n;
        let a = polygon_stp(&PolygonSpec::new(n, phi, 0, e).unwrap(), t);
        let b = polygon_stp(&PolygonSpec::new(n, -phi, 0, (n - e) % n).unwrap(), t);
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn closed_form_polygon_sums_to_one(n in 3usize..12, phi in -PI..PI, t in 0.0f64..15.0) {
        let total: f64 = (0..n).map(|e| polygon_stp(&PolygonSpec::new(n, phi, 0, e).unwrap(), t)).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn objective_landscape_is_gauge_invariant(seed in any::<u64>(), v0 in -PI..PI, v1 in -PI..PI) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sw = build_switch(&SwitchConfig { trap_rate: Some(1.0), ..SwitchConfig::default() }).unwrap();
        let n = sw.system.n_sites();
        let alphas: Vec<f64> = (0..n).map(|_| random_phase(&mut rng)).collect();
        let gauged = sw.system.with_graph(apply_gauge(&sw.system.graph, &GaugeTransform::new(alphas)).unwrap()).unwrap();
        let (b, c) = sw.control_edge;
        let assignment = PhaseAssignment::new(vec![(b, c), (b, sw.e.min(b + 1))], vec![v0, v1]).unwrap();
        let obj = Objective::maximize(ObjectiveKind::OccupancyAt { time: 3.0, site: sw.system.target });
        let x = evaluate(&sw.system, &assignment, &obj).unwrap();
        let y = evaluate(&gauged, &assignment, &obj).unwrap();
        prop_assert!((x - y).abs() < 1e-10);
    }
}

#[test]
fn switch_mirror_swaps_outputs() {
    for theta in [0.3, 1.0, FRAC_PI_2] {
        let a = build_switch(&SwitchConfig { theta, ..SwitchConfig::default() }).unwrap();
        let b = build_switch(&SwitchConfig { theta: -theta, ..SwitchConfig::default() }).unwrap();
        let ta = a.system.evolve_default().unwrap();
        let tb = b.system.evolve_default().unwrap();
        let d = max_deviation(&[ta.series(a.e).unwrap()], &[tb.series(b.f).unwrap()]);
        assert!(d < 1e-10, "theta {theta}: {d}");
    }
}

#[test]
fn positive_switch_phase_routes_to_e() {
    let sw = build_switch(&SwitchConfig { theta: FRAC_PI_2, trap_rate: Some(1.0), ..SwitchConfig::default() }).unwrap();
    let e = sw.system.asymptotic_capture("trap_e").unwrap();
    let f = sw.system.asymptotic_capture("trap_f").unwrap();
    assert!(e > 0.8 && f < 0.2, "{e} {f}");
    assert!((e + f - 1.0).abs() < 1e-8);
    // Agrees with integrating the dynamics for a long time.
    let traj = sw.system.evolve(&uniform_grid(1000.0, 2001)).unwrap();
    let last = traj.site_occupancies.last().unwrap();
    assert!((last[sw.trap_e().unwrap()] - e).abs() < 1e-9);
}

#[test]
fn chiral_chain_half_arrival_grows_linearly() {
    let taus: Vec<f64> = (1..=8)
        .map(|n| {
            build_triangle_chain(&ChainConfig { n_triangles: n, theta: -FRAC_PI_2, ..ChainConfig::default() })
                .unwrap()
                .half_arrival(1000.0)
                .unwrap()
                .unwrap()
        })
        .collect();
    let steps: Vec<f64> = taus.windows(2).map(|w| w[1] - w[0]).collect();
    let mean = steps.iter().sum::<f64>() / steps.len() as f64;
    for s in &steps[1..] {
        assert!((s - mean).abs() < 0.05 * mean, "{steps:?}");
    }
}

#[test]
fn chiral_chain_beats_achiral_first_passage() {
    for n in [2, 4, 8] {
        let peak = |theta: f64| {
            let sys = build_triangle_chain(&ChainConfig { n_triangles: n, theta, trap_rate: None, ..ChainConfig::default() })
                .unwrap();
            let traj = sys.evolve_default().unwrap();
            first_maximum(&traj.times, &traj.series(sys.target).unwrap()).unwrap().value
        };
        assert!(peak(-FRAC_PI_2) > 3.0 * peak(0.0), "n = {n}");
    }
}

#[test]
fn single_triangle_optimum_is_perfect_transfer() {
    let (theta, peak) = triangle_optimal_phase(1.0).unwrap();
    assert!((theta.abs() - FRAC_PI_2).abs() < 1e-6);
    assert!((peak.probability - 1.0).abs() < 1e-9);
    let flat = triangle_analytic_peak(1.0, 1.0, 1.0, 0.0).unwrap();
    assert!((flat.probability - 4.0 / 9.0).abs() < 1e-6);
    // Same walk through the propagator.
    let g = cycle(3, 1.0, theta / 3.0).unwrap();
    let traj = evolve_unitary(&hamiltonian_from_graph(&g), 0, &[peak.time]).unwrap();
    let best = traj.site_occupancies[0][1].max(traj.site_occupancies[0][2]);
    assert!((best - 1.0).abs() < 1e-6);
}

#[test]
fn ion_rows_are_time_reverses() {
    let h1 = build_ion_walk(&IonRow::Cqw1.model());
    let h2 = build_ion_walk(&IonRow::Cqw2.model());
    let hq = build_ion_walk(&IonRow::Qw.model());
    let times = uniform_grid(3.0, 301);
    for (s, e) in [(0, 1), (1, 2), (0, 3), (2, 0)] {
        let forward = evolve_unitary(&h1, s, &times).unwrap().series(e).unwrap();
        let back = evolve_unitary(&h2, e, &times).unwrap().series(s).unwrap();
        assert!(max_deviation(&[forward], &[back]) < 1e-10);
        let q1 = evolve_unitary(&hq, s, &times).unwrap().series(e).unwrap();
        let q2 = evolve_unitary(&hq, e, &times).unwrap().series(s).unwrap();
        assert!(max_deviation(&[q1], &[q2]) < 1e-10);
    }
}

#[test]
fn ion_chiral_rows_differ_in_direction() {
    let times = uniform_grid(3.0, 3001);
    let peak = |row: IonRow| {
        let traj = evolve_unitary(&build_ion_walk(&row.model()), 0, &times).unwrap();
        first_maximum(&times, &traj.series(1).unwrap()).unwrap().value
    };
    assert!(peak(IonRow::Cqw1) - peak(IonRow::Cqw2) > 0.05);
}

#[test]
fn fmo_tables_speed_up_transport() {
    let base = build_fmo(&FmoRates::default()).unwrap();
    let tau0 = base.half_arrival(200.0).unwrap().unwrap();
    for table in [FmoPhaseTable::A1, FmoPhaseTable::A2] {
        let a = PhaseAssignment::from_triples(&fmo_phase_table(table)).unwrap();
        let tuned = base.with_graph(a.apply(&base.graph).unwrap()).unwrap();
        let tau = tuned.half_arrival(200.0).unwrap().unwrap();
        assert!(tau < tau0, "{table:?}: {tau} vs {tau0}");
    }
}

#[test]
fn fmo_hamiltonian_files_are_validated() {
    let data = FmoData::shipped();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    std::fs::write(&path, serde_json::to_string(&data).unwrap()).unwrap();
    let loaded = FmoData::load(&path).unwrap();
    assert_eq!(loaded, data);
    assert_eq!(build_fmo_from(&loaded, &FmoRates::default()).unwrap(), build_fmo(&FmoRates::default()).unwrap());

    let mut bad = data.clone();
    bad.couplings[0][1] += 1.0;
    assert!(build_fmo_from(&bad, &FmoRates::default()).is_err());
    let mut bad = data;
    bad.units = "eV".into();
    assert!(build_fmo_from(&bad, &FmoRates::default()).is_err());
    assert!(FmoData::load(&dir.path().join("missing.json")).is_err());
}

#[test]
fn optimizer_is_deterministic_across_pool_sizes() {
    let sys = build_ws_experiment(&WsConfig { n: 16, seed: 3, ..WsConfig::default() }).unwrap();
    let end = sys.sinks[0].feeders[0].0;
    let edges: Vec<(usize, usize)> = sys.graph.neighbors(end).into_iter().map(|v| (end, v)).collect();
    let obj = Objective::maximize(ObjectiveKind::OccupancyAt { time: 6.0, site: sys.target });
    let cfg = OptimizerConfig { restarts: 6, max_iterations: 150, seed: 11, ..OptimizerConfig::default() };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| optimize(&sys, &edges, &obj, &cfg).unwrap())
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one, four);
    assert!(one.objective >= one.baseline);
    assert_eq!(one.restart_values.len(), 6);
}
