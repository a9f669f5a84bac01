// Copyright 2026 The chiralwalk Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::Trajectory;
use crate::{Error, Result};

/// Local maxima below this height are treated as numerical noise.
pub const MIN_PEAK_HEIGHT: f64 = 1e-9;

/// Occupancy series of one site.
pub fn transfer_probability(traj: &Trajectory, site: usize) -> Result<Vec<f64>> {
    let d = traj.dim();
    if site >= d {
        return Err(Error::invalid(format!("site {site} out of range for dimension {d}")));
    }
    Ok(traj.site_occupancies.iter().map(|occ| occ[site]).collect())
}

fn check_series(times: &[f64], values: &[f64]) -> Result<()> {
    if times.len() != values.len() {
        return Err(Error::Dimension {
            expected: times.len(),
            got: values.len(),
        });
    }
    if times.is_empty() {
        return Err(Error::invalid("empty series"));
    }
    Ok(())
}

/// Earliest time the series reaches 1/2, linearly interpolated between
/// samples. `None` when it never does.
pub fn half_arrival_time(times: &[f64], values: &[f64]) -> Result<Option<f64>> {
    check_series(times, values)?;
    if values[0] >= 0.5 {
        return Ok(Some(times[0]));
    }
    for k in 1..values.len() {
        let (a, b) = (values[k - 1], values[k]);
        if b >= 0.5 {
            let frac = (0.5 - a) / (b - a);
            return Ok(Some(times[k - 1] + frac * (times[k] - times[k - 1])));
        }
    }
    Ok(None)
}

/// `ν = 1/τ`.
pub fn transport_speed(tau: f64) -> Result<f64> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::invalid(format!("arrival time {tau} is not positive")));
    }
    Ok(1.0 / tau)
}

/// First local maximum of a sampled series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FirstMaximum {
    pub time: f64,
    pub value: f64,
    pub index: usize,
    /// No interior maximum; `time`/`value` are the last sample.
    pub boundary: bool,
}

/// First interior local maximum above [`MIN_PEAK_HEIGHT`], refined by a
/// parabola through the neighbouring samples. Plateaus resolve to their
/// earliest sample.
pub fn first_maximum(times: &[f64], values: &[f64]) -> Result<FirstMaximum> {
    check_series(times, values)?;
    let n = values.len();
    let last = FirstMaximum {
        time: times[n - 1],
        value: values[n - 1],
        index: n - 1,
        boundary: true,
    };
    let mut k = 1;
    while k + 1 < n {
        let v = values[k];
        if v > values[k - 1] && v >= values[k + 1] && v > MIN_PEAK_HEIGHT {
            // Walk a plateau to see whether it eventually descends.
            let mut j = k;
            while j + 1 < n && values[j + 1] == v {
                j += 1;
            }
            if j + 1 < n && values[j + 1] < v {
                if j > k {
                    return Ok(FirstMaximum {
                        time: times[k],
                        value: v,
                        index: k,
                        boundary: false,
                    });
                }
                return Ok(refine(times, values, k));
            }
            k = j + 1;
            continue;
        }
        k += 1;
    }
    Ok(last)
}

fn refine(times: &[f64], values: &[f64], k: usize) -> FirstMaximum {
    let (t0, t1, t2) = (times[k - 1], times[k], times[k + 1]);
    let (y0, y1, y2) = (values[k - 1], values[k], values[k + 1]);
    let mut out = FirstMaximum {
        time: t1,
        value: y1,
        index: k,
        boundary: false,
    };
    // Vertex of the interpolating parabola.
    let d01 = (y1 - y0) / (t1 - t0);
    let d12 = (y2 - y1) / (t2 - t1);
    let a = (d12 - d01) / (t2 - t0);
    if a < 0.0 {
        let b = d01 - a * (t0 + t1);
        let tv = -b / (2.0 * a);
        if tv > t0 && tv < t2 {
            let yv = y0 + d01 * (tv - t0) + a * (tv - t0) * (tv - t1);
            if yv >= y1 {
                out.time = tv;
                out.value = yv;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn half_arrival_interpolates() {
        let t = [0.0, 1.0, 2.0, 3.0];
        let y = [0.0, 0.2, 0.6, 0.9];
        assert_abs_diff_eq!(half_arrival_time(&t, &y).unwrap().unwrap(), 1.75, epsilon = 1e-15);
        assert_eq!(half_arrival_time(&t, &[0.0, 0.1, 0.2, 0.49]).unwrap(), None);
        assert_eq!(half_arrival_time(&t, &[0.0, 0.5, 0.2, 0.1]).unwrap(), Some(1.0));
        assert!(half_arrival_time(&t, &[0.0]).is_err());
    }

    #[test]
    fn speed() {
        assert_abs_diff_eq!(transport_speed(4.0).unwrap(), 0.25);
        assert!(transport_speed(0.0).is_err());
        assert!(transport_speed(f64::INFINITY).is_err());
    }

    #[test]
    fn first_max_of_sine_squared() {
        let t: Vec<f64> = (0..=300).map(|k| k as f64 * 0.01).collect();
        let y: Vec<f64> = t.iter().map(|x| x.sin().powi(2)).collect();
        let m = first_maximum(&t, &y).unwrap();
        assert!(!m.boundary);
        assert_abs_diff_eq!(m.time, std::f64::consts::FRAC_PI_2, epsilon = 1e-5);
        assert_abs_diff_eq!(m.value, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn first_max_picks_first_not_global() {
        let t = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        let y = [0.0, 0.3, 0.1, 0.9, 0.2, 0.0];
        let m = first_maximum(&t, &y).unwrap();
        assert_eq!(m.index, 1);
    }

    #[test]
    fn plateau_resolves_to_earliest() {
        let t = [0.0, 1.0, 2.0, 3.0, 4.0];
        let y = [0.0, 0.5, 0.5, 0.5, 0.1];
        let m = first_maximum(&t, &y).unwrap();
        assert_eq!((m.index, m.time, m.value), (1, 1.0, 0.5));
    }

    #[test]
    fn monotone_and_flat_series_are_boundary() {
        let t = [0.0, 1.0, 2.0];
        let m = first_maximum(&t, &[0.0, 0.4, 0.8]).unwrap();
        assert!(m.boundary);
        assert_eq!(m.value, 0.8);
        let m = first_maximum(&t, &[0.0, 0.0, 0.0]).unwrap();
        assert!(m.boundary);
        // Rising into a trailing plateau is not a peak.
        let m = first_maximum(&[0.0, 1.0, 2.0, 3.0], &[0.0, 0.5, 0.5, 0.5]).unwrap();
        assert!(m.boundary);
    }

    #[test]
    fn noise_floor() {
        let t = [0.0, 1.0, 2.0, 3.0, 4.0];
        let y = [0.0, 1e-12, 0.0, 0.4, 0.1];
        assert_eq!(first_maximum(&t, &y).unwrap().index, 3);
    }
}
