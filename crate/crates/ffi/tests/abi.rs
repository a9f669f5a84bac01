// Copyright 2026 The chiralwalk Authors
// SPDX-License-Identifier: Apache-2.0

use std::ffi::{CStr, CString};
use std::ptr;

use chiralwalk_ffi::*;

fn last_error() -> String {
    let p = cw_last_error_message();
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { cw_string_free(p) };
    s
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(cw_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn graph_round_trip() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(cw_graph_new(3, &mut g), CwStatus::Ok);
        assert_eq!(cw_graph_add_edge(g, 0, 1, 1.0, 0.0), CwStatus::Ok);
        assert_eq!(cw_graph_add_edge(g, 1, 2, 1.0, 0.7), CwStatus::Ok);
        let mut n = 0;
        assert_eq!(cw_graph_n_edges(g, &mut n), CwStatus::Ok);
        assert_eq!(n, 2);

        let mut json = ptr::null_mut();
        assert_eq!(cw_graph_to_json(g, &mut json), CwStatus::Ok);
        let mut h = ptr::null_mut();
        assert_eq!(cw_graph_from_json(json, &mut h), CwStatus::Ok);
        let mut sites = 0;
        assert_eq!(cw_graph_n_sites(h, &mut sites), CwStatus::Ok);
        assert_eq!(sites, 3);
        cw_string_free(json);
        cw_graph_free(g);
        cw_graph_free(h);
    }
}

#[test]
fn errors_carry_status_and_message() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(cw_graph_new(2, &mut g), CwStatus::Ok);
        assert_eq!(cw_graph_add_edge(g, 0, 5, 1.0, 0.0), CwStatus::InvalidArgument);
        assert!(!last_error().is_empty());
        assert_eq!(cw_graph_add_edge(ptr::null_mut(), 0, 1, 1.0, 0.0), CwStatus::NullPointer);
        assert!(last_error().contains("graph"));
        let bad = CString::new("{not json").unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(cw_graph_from_json(bad.as_ptr(), &mut h), CwStatus::Json);
        assert!(h.is_null());
        let invalid = [0xffu8, 0];
        assert_eq!(cw_graph_from_json(invalid.as_ptr().cast(), &mut h), CwStatus::InvalidUtf8);
        cw_graph_free(g);
        // Freeing NULL is a no-op.
        cw_graph_free(ptr::null_mut());
        cw_trajectory_free(ptr::null_mut());
        cw_system_free(ptr::null_mut());
        cw_string_free(ptr::null_mut());
    }
}

#[test]
fn ring_evolution_matches_closed_form() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(cw_graph_cycle(5, 1.0, 0.4, &mut g), CwStatus::Ok);
        let times: Vec<f64> = (0..50).map(|k| 0.2 * k as f64).collect();
        let mut t = ptr::null_mut();
        assert_eq!(cw_evolve_unitary(g, 0, times.as_ptr(), times.len(), &mut t), CwStatus::Ok);
        let (mut len, mut dim) = (0, 0);
        assert_eq!(cw_trajectory_len(t, &mut len), CwStatus::Ok);
        assert_eq!(cw_trajectory_dim(t, &mut dim), CwStatus::Ok);
        assert_eq!((len, dim), (50, 5));
        let mut series = vec![0.0; len];
        assert_eq!(cw_trajectory_series(t, 2, series.as_mut_ptr(), len), CwStatus::Ok);
        for (k, &tk) in times.iter().enumerate() {
            let mut want = 0.0;
            assert_eq!(cw_polygon_stp(5, 0.4, 0, 2, tk, &mut want), CwStatus::Ok);
            assert!((want - series[k]).abs() < 1e-10);
        }
        let mut short = vec![0.0; 3];
        assert_eq!(cw_trajectory_series(t, 2, short.as_mut_ptr(), 3), CwStatus::Dimension);
        let mut ts = vec![0.0; len];
        assert_eq!(cw_trajectory_times(t, ts.as_mut_ptr(), len), CwStatus::Ok);
        assert_eq!(ts, times);

        let mut csv = ptr::null_mut();
        assert_eq!(cw_trajectory_to_csv(t, &mut csv), CwStatus::Ok);
        let text = CStr::from_ptr(csv).to_str().unwrap();
        assert!(text.starts_with("t,site_0,"));
        assert_eq!(text.lines().count(), 51);
        cw_string_free(csv);
        cw_trajectory_free(t);
        cw_graph_free(g);
    }
}

#[test]
fn systems_through_the_abi() {
    unsafe {
        let mut sys = ptr::null_mut();
        assert_eq!(cw_system_chain(2, -std::f64::consts::FRAC_PI_2, 1.0, &mut sys), CwStatus::Ok);
        let mut dim = 0;
        assert_eq!(cw_system_dim(sys, &mut dim), CwStatus::Ok);
        assert_eq!(dim, 6);
        let (mut tau, mut found) = (0.0, 0);
        assert_eq!(cw_system_half_arrival(sys, 500.0, &mut tau, &mut found), CwStatus::Ok);
        assert_eq!(found, 1);
        assert!(tau > 0.0);

        let mut json = ptr::null_mut();
        assert_eq!(cw_system_to_json(sys, &mut json), CwStatus::Ok);
        let mut copy = ptr::null_mut();
        assert_eq!(cw_system_from_json(json, &mut copy), CwStatus::Ok);
        let times = [0.0, 1.0, 2.0];
        let mut t = ptr::null_mut();
        assert_eq!(cw_system_evolve(copy, times.as_ptr(), 3, &mut t), CwStatus::Ok);
        cw_trajectory_free(t);
        cw_string_free(json);
        cw_system_free(copy);
        cw_system_free(sys);

        let mut sw = ptr::null_mut();
        assert_eq!(cw_system_switch(std::f64::consts::FRAC_PI_2, 1.0, &mut sw), CwStatus::Ok);
        let (e, f) = (CString::new("trap_e").unwrap(), CString::new("trap_f").unwrap());
        let (mut pe, mut pf) = (0.0, 0.0);
        assert_eq!(cw_system_asymptotic_capture(sw, e.as_ptr(), &mut pe), CwStatus::Ok);
        assert_eq!(cw_system_asymptotic_capture(sw, f.as_ptr(), &mut pf), CwStatus::Ok);
        assert!(pe > pf);
        assert!((pe + pf - 1.0).abs() < 1e-8);
        let nope = CString::new("missing").unwrap();
        assert_ne!(cw_system_asymptotic_capture(sw, nope.as_ptr(), &mut pe), CwStatus::Ok);
        cw_system_free(sw);

        let mut fmo = ptr::null_mut();
        assert_eq!(cw_system_fmo(&mut fmo), CwStatus::Ok);
        assert_eq!(cw_system_dim(fmo, &mut dim), CwStatus::Ok);
        assert_eq!(dim, 9);
        cw_system_free(fmo);

        assert_eq!(cw_system_chain(0, 0.0, 1.0, &mut sys), CwStatus::InvalidArgument);
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/chiralwalk.h");
    let src = include_str!("../src/lib.rs");
    let exports: Vec<&str> = src
        .split("extern \"C\" fn ")
        .skip(1)
        .map(|s| s.split('(').next().unwrap())
        .collect();
    assert!(exports.len() > 20);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let Some(cc) = ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok())
    else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(
        &src,
        format!(
            "#include \"{}/include/chiralwalk.h\"\nint main(void) {{ CwGraph *g = 0; return cw_graph_new(2, &g) == CW_STATUS_OK ? 0 : 1; }}\n",
            env!("CARGO_MANIFEST_DIR")
        ),
    )
    .unwrap();
    let status = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"])
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}
