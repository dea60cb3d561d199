// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form credibility quantities.
//!
//! ```
//! use accred::protocol::bounds;
//! assert_eq!(bounds::epsilon_noiseless_gates(3)?, 0.421875);
//! let b = bounds::variation_distance_bound(0.421875, 9, 10, 0.05).unwrap();
//! assert!((b - 0.421875 / 0.85).abs() < 1e-12);
//! # Ok::<(), accred::Error>(())
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `kappa = 3 (3/4)^2` as the exact fraction `27/16`.
pub const KAPPA_NUMERATOR: u64 = 27;
pub const KAPPA_DENOMINATOR: u64 = 16;
pub const KAPPA: f64 = 27.0 / 16.0;

/// Smallest number of traps for which the credibility bounds hold.
pub const MIN_TRAPS: usize = 3;

fn check_v(v: usize) -> Result<()> {
    if v < MIN_TRAPS {
        return Err(Error::Domain(format!(
            "v ≥ 3 required (the credibility bound needs at least three traps), got v = {v}"
        )));
    }
    Ok(())
}

/// `epsilon = kappa / (v + 1)` as an exact fraction `(numerator, denominator)`.
pub fn epsilon_noiseless_gates_exact(v: usize) -> Result<(u64, u64)> {
    check_v(v)?;
    Ok((KAPPA_NUMERATOR, KAPPA_DENOMINATOR * (v as u64 + 1)))
}

/// `epsilon = kappa / (v + 1)` for noiseless single-qubit gates.
pub fn epsilon_noiseless_gates(v: usize) -> Result<f64> {
    check_v(v)?;
    Ok(KAPPA / (v as f64 + 1.0))
}

/// `epsilon = g kappa / (v + 1) + 1 - g` for bounded single-qubit gate noise.
pub fn epsilon_bounded_gates(v: usize, g: f64) -> Result<f64> {
    check_v(v)?;
    if !(0.0..=1.0).contains(&g) {
        return Err(Error::Domain(format!("g = {g} outside [0, 1]")));
    }
    Ok(g * KAPPA / (v as f64 + 1.0) + 1.0 - g)
}

/// Per-run bound on accepting a corrupted target when the noise touches
/// exactly `v_hat` of the `v + 1` circuits: `v_hat/(v+1) (3/4)^(v_hat-1)`.
pub fn touched_circuits_bound(v: usize, v_hat: usize) -> f64 {
    if v_hat == 0 {
        return 0.0;
    }
    v_hat as f64 / (v as f64 + 1.0) * 0.75f64.powi(v_hat as i32 - 1)
}

/// Hoeffding confidence `1 - 2 exp(-2 d theta^2)`.
pub fn confidence(d: usize, theta: f64) -> f64 {
    1.0 - 2.0 * (-2.0 * d as f64 * theta * theta).exp()
}

/// `epsilon / (N_acc/d - theta)` when the denominator is positive.
pub fn variation_distance_bound(epsilon: f64, n_acc: usize, d: usize, theta: f64) -> Option<f64> {
    let slack = n_acc as f64 / d as f64 - theta;
    (slack > 0.0).then(|| epsilon / slack)
}

/// `delta = prod_p (1 - r_p)`, a lower bound on acceptance under bounded noise.
pub fn delta_bound(rates: &[f64]) -> Result<f64> {
    if let Some(r) = rates.iter().find(|r| !(0.0..1.0).contains(*r)) {
        return Err(Error::Domain(format!("error rate {r} outside [0, 1)")));
    }
    Ok(rates.iter().map(|r| 1.0 - r).product())
}

/// Operation counts of one circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationCounts {
    pub preparations: usize,
    pub measurements: usize,
    pub cz_gates: usize,
    pub single_qubit_gates: usize,
}

impl OperationCounts {
    /// Counts for `n` qubits and `m` bands with `cz_gates` entangling gates.
    pub fn for_shape(n: usize, m: usize, cz_gates: usize) -> Self {
        Self {
            preparations: n,
            measurements: n,
            cz_gates,
            single_qubit_gates: n * m,
        }
    }

    /// Counts with a maximal cZ matching in every band but the last.
    pub fn dense(n: usize, m: usize) -> Self {
        Self::for_shape(n, m, (n / 2) * m.saturating_sub(1))
    }

    /// An `n`-qubit GHZ chain: `n - 1` cZ gates.
    pub fn ghz(n: usize, m: usize) -> Self {
        Self::for_shape(n, m, n.saturating_sub(1))
    }
}

/// One point of the bounded-noise curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub r0: f64,
    pub epsilon: f64,
    pub delta: f64,
    /// `epsilon / delta`, not clamped.
    pub bound: f64,
    /// True when `bound > 1`, which says nothing about a variation distance.
    pub vacuous: bool,
}

/// `epsilon / delta` for a grid of base error rates.
///
/// Preparations, measurements and cZ gates fail with rate `r0`; single-qubit
/// gates with `r0 / gate_rate_divisor`. Every one of the `v + 1` circuits
/// has the operation counts in `counts`.
pub fn bounded_noise_curve(
    v: usize,
    counts: &OperationCounts,
    r0_grid: &[f64],
    gate_rate_divisor: f64,
) -> Result<Vec<CurvePoint>> {
    check_v(v)?;
    if !(gate_rate_divisor >= 1.0) {
        return Err(Error::Domain(format!(
            "gate rate divisor {gate_rate_divisor} must be at least 1"
        )));
    }
    let circuits = (v + 1) as i32;
    r0_grid
        .iter()
        .map(|&r0| {
            if !(0.0..1.0).contains(&r0) {
                return Err(Error::Domain(format!("r0 = {r0} outside [0, 1)")));
            }
            let rg = r0 / gate_rate_divisor;
            let heavy = (counts.preparations + counts.measurements + counts.cz_gates) as i32;
            let light = counts.single_qubit_gates as i32;
            let g = (1.0 - rg).powi(circuits * light);
            let delta = (1.0 - r0).powi(circuits * heavy) * g;
            let epsilon = epsilon_bounded_gates(v, g)?;
            let bound = epsilon / delta;
            Ok(CurvePoint {
                r0,
                epsilon,
                delta,
                bound,
                vacuous: bound > 1.0,
            })
        })
        .collect()
}

/// Header of [`curve_csv`].
pub const CURVE_CSV_HEADER: &str = "r0,epsilon,delta,bound";

/// CSV with header [`CURVE_CSV_HEADER`].
pub fn curve_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from(CURVE_CSV_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&format!("{},{},{},{}\n", p.r0, p.epsilon, p.delta, p.bound));
    }
    out
}

/// Parses a grid `start:stop:steps` into `steps` evenly spaced points from
/// `start` to `stop` inclusive; requires `0 <= start < stop < 1`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::Domain(format!("grid {spec:?} is not start:stop:steps"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(0.0 <= start && start < stop && stop < 1.0) || steps < 2 {
        return Err(Error::Domain(format!(
            "grid {spec:?} needs 0 <= start < stop < 1 and at least 2 steps"
        )));
    }
    Ok((0..steps)
        .map(|i| start + (stop - start) * i as f64 / (steps - 1) as f64)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_values() {
        assert_eq!(epsilon_noiseless_gates(3).unwrap(), 0.421875);
        assert_eq!(epsilon_noiseless_gates_exact(3).unwrap(), (27, 64));
        assert!((epsilon_noiseless_gates(15).unwrap() - 27.0 / 256.0).abs() < 1e-15);
        assert!(epsilon_noiseless_gates(2).is_err());
        assert_eq!(epsilon_bounded_gates(3, 1.0).unwrap(), 0.421875);
        assert_eq!(epsilon_bounded_gates(3, 0.0).unwrap(), 1.0);
        assert!((epsilon_bounded_gates(3, 0.9).unwrap() - 0.4796875).abs() < 1e-15);
        assert!(epsilon_bounded_gates(3, 1.5).is_err());
    }

    #[test]
    fn eq_one_bound() {
        assert!(variation_distance_bound(0.4, 1, 10, 0.1).is_none());
        assert!(variation_distance_bound(0.4, 0, 10, 0.1).is_none());
        let b = variation_distance_bound(0.421875, 10, 10, 0.05).unwrap();
        assert!((b - 0.421875 / 0.95).abs() < 1e-15);
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta_bound(&[]).unwrap(), 1.0);
        assert!((delta_bound(&[0.01; 10]).unwrap() - 0.99f64.powi(10)).abs() < 1e-15);
        assert!(delta_bound(&[1.0]).is_err());
    }

    #[test]
    fn touched_bound_peaks_at_three() {
        let v = 7;
        let b: Vec<f64> = (1..=8).map(|h| touched_circuits_bound(v, h)).collect();
        let max = b.iter().cloned().fold(0.0, f64::max);
        assert!((b[2] - max).abs() < 1e-15);
        assert!((max - KAPPA / 8.0).abs() < 1e-15);
        assert!((touched_circuits_bound(3, 3) - 0.421875).abs() < 1e-15);
    }

    #[test]
    fn curve_starts_at_epsilon_and_grows() {
        let counts = OperationCounts::ghz(7, 7);
        let grid = parse_grid("0:0.02:21").unwrap();
        let pts = bounded_noise_curve(3, &counts, &grid, 10.0).unwrap();
        assert_eq!(pts[0].bound, 0.421875);
        assert!(pts.windows(2).all(|w| w[1].bound >= w[0].bound));
        assert!(pts.last().unwrap().vacuous);
        assert!(curve_csv(&pts).starts_with("r0,epsilon,delta,bound\n"));
    }

    #[test]
    fn grid_errors() {
        assert!(parse_grid("0.5:0.1:3").is_err());
        assert!(parse_grid("0:1:3").is_err());
        assert!(parse_grid("0:0.1").is_err());
        assert_eq!(parse_grid("0:0.1:2").unwrap(), vec![0.0, 0.1]);
    }
}
