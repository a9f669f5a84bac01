/* Copyright 2026 The chiralwalk Authors
 * SPDX-License-Identifier: Apache-2.0 */

#ifndef CHIRALWALK_H
#define CHIRALWALK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum CwStatus {
  CW_STATUS_OK = 0,
  CW_STATUS_NULL_POINTER = 1,
  CW_STATUS_INVALID_ARGUMENT = 2,
  CW_STATUS_DIMENSION = 3,
  CW_STATUS_NUMERICAL = 4,
  CW_STATUS_CONFIG = 5,
  CW_STATUS_IO = 6,
  CW_STATUS_JSON = 7,
  CW_STATUS_INVALID_UTF8 = 8,
  CW_STATUS_PANIC = 9,
} CwStatus;

/**
 * Phased graph handle.
 */
typedef struct CwGraph CwGraph;

/**
 * Experiment system handle.
 */
typedef struct CwSystem CwSystem;

/**
 * Occupancy trajectory handle.
 */
typedef struct CwTrajectory CwTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *cw_version(void);

/**
 * Copy of the last error message on this thread, or NULL if none.
 * Release it with `cw_string_free`.
 */
char *cw_last_error_message(void);

void cw_string_free(char *s);

/**
 * Empty graph on `n_sites` sites.
 */
enum CwStatus cw_graph_new(size_t n_sites, struct CwGraph **out);

/**
 * Ring `0 - 1 - ... - n-1 - 0` with magnitude `j` and phase `phase` on
 * every hop `k -> k+1`.
 */
enum CwStatus cw_graph_cycle(size_t n_sites, double j, double phase, struct CwGraph **out);

/**
 * Graph from its JSON form.
 */
enum CwStatus cw_graph_from_json(const char *json, struct CwGraph **out);

enum CwStatus cw_graph_to_json(const struct CwGraph *graph, char **out);

/**
 * Adds the hop `a -> b` with amplitude `magnitude * e^{i phase}`.
 */
enum CwStatus cw_graph_add_edge(struct CwGraph *graph,
                                size_t a,
                                size_t b,
                                double magnitude,
                                double phase);

enum CwStatus cw_graph_n_sites(const struct CwGraph *graph, size_t *out);

enum CwStatus cw_graph_n_edges(const struct CwGraph *graph, size_t *out);

void cw_graph_free(struct CwGraph *graph);

/**
 * Closed evolution from `start` sampled at `times[0..n_times]`.
 */
enum CwStatus cw_evolve_unitary(const struct CwGraph *graph,
                                size_t start,
                                const double *times,
                                size_t n_times,
                                struct CwTrajectory **out);

/**
 * Number of time points.
 */
enum CwStatus cw_trajectory_len(const struct CwTrajectory *traj, size_t *out);

/**
 * Number of sites per time point.
 */
enum CwStatus cw_trajectory_dim(const struct CwTrajectory *traj, size_t *out);

/**
 * Copies the occupancy of `site` into `buf`, which must hold
 * `cw_trajectory_len` values.
 */
enum CwStatus cw_trajectory_series(const struct CwTrajectory *traj,
                                   size_t site,
                                   double *buf,
                                   size_t buf_len);

enum CwStatus cw_trajectory_times(const struct CwTrajectory *traj, double *buf, size_t buf_len);

/**
 * CSV text with columns `t, site_0.., trace`.
 */
enum CwStatus cw_trajectory_to_csv(const struct CwTrajectory *traj, char **out);

void cw_trajectory_free(struct CwTrajectory *traj);

/**
 * Closed-form transfer probability on a uniformly phased `n`-ring.
 */
enum CwStatus cw_polygon_stp(size_t n, double phi, size_t start, size_t end, double t, double *out);

/**
 * System from its JSON form.
 */
enum CwStatus cw_system_from_json(const char *json, struct CwSystem **out);

enum CwStatus cw_system_to_json(const struct CwSystem *sys, char **out);

/**
 * Directional switch with control phase `theta`. A `trap_rate` of zero
 * or less builds the closed walk.
 */
enum CwStatus cw_system_switch(double theta, double trap_rate, struct CwSystem **out);

/**
 * Triangle chain of `n_triangles` with `theta` on every control hop. A
 * `trap_rate` of zero or less builds the open chain.
 */
enum CwStatus cw_system_chain(size_t n_triangles,
                              double theta,
                              double trap_rate,
                              struct CwSystem **out);

/**
 * FMO with the shipped Hamiltonian and default rates, in ps.
 */
enum CwStatus cw_system_fmo(struct CwSystem **out);

/**
 * Extended dimension: graph sites followed by sinks.
 */
enum CwStatus cw_system_dim(const struct CwSystem *sys, size_t *out);

/**
 * Evolution on the system's own grid.
 */
enum CwStatus cw_system_evolve_default(const struct CwSystem *sys, struct CwTrajectory **out);

enum CwStatus cw_system_evolve(const struct CwSystem *sys,
                               const double *times,
                               size_t n_times,
                               struct CwTrajectory **out);

/**
 * Time at which the target first holds half the population. `found` is
 * set to 0 when that does not happen before `max_horizon`.
 */
enum CwStatus cw_system_half_arrival(const struct CwSystem *sys,
                                     double max_horizon,
                                     double *tau,
                                     int32_t *found);

/**
 * Population eventually captured by the named sink.
 */
enum CwStatus cw_system_asymptotic_capture(const struct CwSystem *sys,
                                           const char *sink,
                                           double *out);

void cw_system_free(struct CwSystem *sys);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHIRALWALK_H */
