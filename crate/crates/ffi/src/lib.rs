// Copyright 2026 The chiralwalk Authors
// SPDX-License-Identifier: Apache-2.0

//! C ABI for `chiralwalk`.
//!
//! Objects cross the boundary as opaque handles created by `cw_*_new` style
//! constructors and released with the matching `cw_*_free`. Every fallible
//! call returns a [`CwStatus`]; on failure the message is available from
//! [`cw_last_error_message`] on the same thread. Strings returned by the
//! library are owned by the caller and released with [`cw_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use chiralwalk::analytic::{polygon_stp, PolygonSpec};
use chiralwalk::dynamics::{evolve_unitary, hamiltonian_from_graph, Trajectory};
use chiralwalk::systems::{build_fmo, build_switch, build_triangle_chain, ChainConfig, ExperimentSystem, FmoRates, SwitchConfig};
use chiralwalk::{Error, PhasedGraph};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Dimension = 3,
    Numerical = 4,
    Config = 5,
    Io = 6,
    Json = 7,
    InvalidUtf8 = 8,
    Panic = 9,
}

/// Phased graph handle.
pub struct CwGraph(PhasedGraph);

/// Occupancy trajectory handle.
pub struct CwTrajectory(Trajectory);

/// Experiment system handle.
pub struct CwSystem(ExperimentSystem);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> CwStatus {
    match err {
        Error::Dimension { .. } => CwStatus::Dimension,
        Error::InvalidArgument(_) => CwStatus::InvalidArgument,
        Error::Numerical(_) => CwStatus::Numerical,
        Error::Config(_) => CwStatus::Config,
        Error::Io(_) => CwStatus::Io,
        Error::Json(_) => CwStatus::Json,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
    Utf8,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CwStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            CwStatus::NullPointer
        }
        Ok(Err(Fail::Utf8)) => {
            set_error("string is not valid UTF-8".into());
            CwStatus::InvalidUtf8
        }
        Err(_) => {
            set_error("internal panic".into());
            CwStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn get_mut<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn get_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail::Utf8)
}

unsafe fn get_slice<'a>(p: *const f64, len: usize, what: &'static str) -> Result<&'a [f64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    let slot = get_mut(out, "out")?;
    *slot = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let slot = get_mut(out, "out")?;
    *slot = CString::new(s).map_err(|e| Fail::Lib(Error::Numerical(e.to_string())))?.into_raw();
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy of the last error message on this thread, or NULL if none.
/// Release it with `cw_string_free`.
#[no_mangle]
pub extern "C" fn cw_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

#[no_mangle]
pub unsafe extern "C" fn cw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Empty graph on `n_sites` sites.
#[no_mangle]
pub unsafe extern "C" fn cw_graph_new(n_sites: usize, out: *mut *mut CwGraph) -> CwStatus {
    guard(|| put(out, CwGraph(PhasedGraph::new(n_sites)?)))
}

/// Ring `0 - 1 - ... - n-1 - 0` with magnitude `j` and phase `phase` on
/// every hop `k -> k+1`.
#[no_mangle]
pub unsafe extern "C" fn cw_graph_cycle(n_sites: usize, j: f64, phase: f64, out: *mut *mut CwGraph) -> CwStatus {
    guard(|| put(out, CwGraph(chiralwalk::netgraph::cycle(n_sites, j, phase)?)))
}

/// Graph from its JSON form.
#[no_mangle]
pub unsafe extern "C" fn cw_graph_from_json(json: *const c_char, out: *mut *mut CwGraph) -> CwStatus {
    guard(|| put(out, CwGraph(PhasedGraph::from_json(get_str(json, "json")?)?)))
}

#[no_mangle]
pub unsafe extern "C" fn cw_graph_to_json(graph: *const CwGraph, out: *mut *mut c_char) -> CwStatus {
    guard(|| put_string(out, get(graph, "graph")?.0.to_json()?))
}

/// Adds the hop `a -> b` with amplitude `magnitude * e^{i phase}`.
#[no_mangle]
pub unsafe extern "C" fn cw_graph_add_edge(graph: *mut CwGraph, a: usize, b: usize, magnitude: f64, phase: f64) -> CwStatus {
    guard(|| {
        get_mut(graph, "graph")?.0.add_edge(a, b, magnitude, phase)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn cw_graph_n_sites(graph: *const CwGraph, out: *mut usize) -> CwStatus {
    guard(|| {
        *get_mut(out, "out")? = get(graph, "graph")?.0.n_sites();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn cw_graph_n_edges(graph: *const CwGraph, out: *mut usize) -> CwStatus {
    guard(|| {
        *get_mut(out, "out")? = get(graph, "graph")?.0.n_edges();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn cw_graph_free(graph: *mut CwGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Closed evolution from `start` sampled at `times[0..n_times]`.
#[no_mangle]
pub unsafe extern "C" fn cw_evolve_unitary(
    graph: *const CwGraph,
    start: usize,
    times: *const f64,
    n_times: usize,
    out: *mut *mut CwTrajectory,
) -> CwStatus {
    guard(|| {
        let h = hamiltonian_from_graph(&get(graph, "graph")?.0);
        let traj = evolve_unitary(&h, start, get_slice(times, n_times, "times")?)?;
        put(out, CwTrajectory(traj))
    })
}

/// Number of time points.
#[no_mangle]
pub unsafe extern "C" fn cw_trajectory_len(traj: *const CwTrajectory, out: *mut usize) -> CwStatus {
    guard(|| {
        *get_mut(out, "out")? = get(traj, "trajectory")?.0.len();
        Ok(())
    })
}

/// Number of sites per time point.
#[no_mangle]
pub unsafe extern "C" fn cw_trajectory_dim(traj: *const CwTrajectory, out: *mut usize) -> CwStatus {
    guard(|| {
        *get_mut(out, "out")? = get(traj, "trajectory")?.0.dim();
        Ok(())
    })
}

/// Copies the occupancy of `site` into `buf`, which must hold
/// `cw_trajectory_len` values.
#[no_mangle]
pub unsafe extern "C" fn cw_trajectory_series(
    traj: *const CwTrajectory,
    site: usize,
    buf: *mut f64,
    buf_len: usize,
) -> CwStatus {
    guard(|| {
        let t = &get(traj, "trajectory")?.0;
        let series = t.series(site)?;
        if buf_len < series.len() {
            return Err(Error::Dimension {
                expected: series.len(),
                got: buf_len,
            }
            .into());
        }
        if buf.is_null() {
            return Err(Fail::Null("buf"));
        }
        slice::from_raw_parts_mut(buf, series.len()).copy_from_slice(&series);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn cw_trajectory_times(traj: *const CwTrajectory, buf: *mut f64, buf_len: usize) -> CwStatus {
    guard(|| {
        let t = &get(traj, "trajectory")?.0;
        if buf_len < t.len() {
            return Err(Error::Dimension {
                expected: t.len(),
                got: buf_len,
            }
            .into());
        }
        if buf.is_null() {
            return Err(Fail::Null("buf"));
        }
        slice::from_raw_parts_mut(buf, t.len()).copy_from_slice(&t.times);
        Ok(())
    })
}

/// CSV text with columns `t, site_0.., trace`.
#[no_mangle]
pub unsafe extern "C" fn cw_trajectory_to_csv(traj: *const CwTrajectory, out: *mut *mut c_char) -> CwStatus {
    guard(|| put_string(out, get(traj, "trajectory")?.0.to_csv_string()))
}

#[no_mangle]
pub unsafe extern "C" fn cw_trajectory_free(traj: *mut CwTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Closed-form transfer probability on a uniformly phased `n`-ring.
#[no_mangle]
pub unsafe extern "C" fn cw_polygon_stp(n: usize, phi: f64, start: usize, end: usize, t: f64, out: *mut f64) -> CwStatus {
    guard(|| {
        let spec = PolygonSpec::new(n, phi, start, end)?;
        *get_mut(out, "out")? = polygon_stp(&spec, t);
        Ok(())
    })
}

/// System from its JSON form.
#[no_mangle]
pub unsafe extern "C" fn cw_system_from_json(json: *const c_char, out: *mut *mut CwSystem) -> CwStatus {
    guard(|| put(out, CwSystem(ExperimentSystem::from_json(get_str(json, "json")?)?)))
}

#[no_mangle]
pub unsafe extern "C" fn cw_system_to_json(sys: *const CwSystem, out: *mut *mut c_char) -> CwStatus {
    guard(|| put_string(out, get(sys, "system")?.0.to_json()?))
}

/// Directional switch with control phase `theta`. A `trap_rate` of zero
/// or less builds the closed walk.
#[no_mangle]
pub unsafe extern "C" fn cw_system_switch(theta: f64, trap_rate: f64, out: *mut *mut CwSystem) -> CwStatus {
    guard(|| {
        let sw = build_switch(&SwitchConfig {
            theta,
            trap_rate: (trap_rate > 0.0).then_some(trap_rate),
            ..SwitchConfig::default()
        })?;
        put(out, CwSystem(sw.system))
    })
}

/// Triangle chain of `n_triangles` with `theta` on every control hop. A
/// `trap_rate` of zero or less builds the open chain.
#[no_mangle]
pub unsafe extern "C" fn cw_system_chain(
    n_triangles: usize,
    theta: f64,
    trap_rate: f64,
    out: *mut *mut CwSystem,
) -> CwStatus {
    guard(|| {
        let sys = build_triangle_chain(&ChainConfig {
            n_triangles,
            theta,
            trap_rate: (trap_rate > 0.0).then_some(trap_rate),
            ..ChainConfig::default()
        })?;
        put(out, CwSystem(sys))
    })
}

/// FMO with the shipped Hamiltonian and default rates, in ps.
#[no_mangle]
pub unsafe extern "C" fn cw_system_fmo(out: *mut *mut CwSystem) -> CwStatus {
    guard(|| put(out, CwSystem(build_fmo(&FmoRates::default())?)))
}

/// Extended dimension: graph sites followed by sinks.
#[no_mangle]
pub unsafe extern "C" fn cw_system_dim(sys: *const CwSystem, out: *mut usize) -> CwStatus {
    guard(|| {
        *get_mut(out, "out")? = get(sys, "system")?.0.dim();
        Ok(())
    })
}

/// Evolution on the system's own grid.
#[no_mangle]
pub unsafe extern "C" fn cw_system_evolve_default(sys: *const CwSystem, out: *mut *mut CwTrajectory) -> CwStatus {
    guard(|| put(out, CwTrajectory(get(sys, "system")?.0.evolve_default()?)))
}

#[no_mangle]
pub unsafe extern "C" fn cw_system_evolve(
    sys: *const CwSystem,
    times: *const f64,
    n_times: usize,
    out: *mut *mut CwTrajectory,
) -> CwStatus {
    guard(|| {
        let traj = get(sys, "system")?.0.evolve(get_slice(times, n_times, "times")?)?;
        put(out, CwTrajectory(traj))
    })
}

/// Time at which the target first holds half the population. `found` is
/// set to 0 when that does not happen before `max_horizon`.
#[no_mangle]
pub unsafe extern "C" fn cw_system_half_arrival(
    sys: *const CwSystem,
    max_horizon: f64,
    tau: *mut f64,
    found: *mut i32,
) -> CwStatus {
    guard(|| {
        let r = get(sys, "system")?.0.half_arrival(max_horizon)?;
        *get_mut(found, "found")? = r.is_some() as i32;
        *get_mut(tau, "tau")? = r.unwrap_or(f64::NAN);
        Ok(())
    })
}

/// Population eventually captured by the named sink.
#[no_mangle]
pub unsafe extern "C" fn cw_system_asymptotic_capture(sys: *const CwSystem, sink: *const c_char, out: *mut f64) -> CwStatus {
    guard(|| {
        let v = get(sys, "system")?.0.asymptotic_capture(get_str(sink, "sink")?)?;
        *get_mut(out, "out")? = v;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn cw_system_free(sys: *mut CwSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}
