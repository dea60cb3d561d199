// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Brute-force checks of the protocol's guarantees.
//!
//! These recompute outcomes from the Pauli algebra and the simulators and
//! never call the protocol runner.
//!
//! * [`detection`]: exact probability that a trap misses a Pauli error
//!   collection, by enumerating every trap choice.
//! * [`twirl`]: the pad average turns arbitrary noise into a Pauli mixture.
//! * [`credibility`]: Monte Carlo estimate of accepting a corrupted target.

pub mod credibility;
pub mod detection;
pub mod nnls;
pub mod twirl;

use serde::{Deserialize, Serialize};

/// Exhaustive results are exact; sampled ones carry a standard error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    /// Which check produced the report.
    pub check: String,
    /// Human-readable instance description, stable across runs.
    pub instance: String,
    pub probability: f64,
    /// Exact value as `"num/den"` when enumerated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    /// Standard error for sampled estimates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    pub bound: f64,
    pub passed: bool,
    pub mode: Mode,
    /// Enumeration size or number of samples.
    pub size: u64,
}

impl CheckReport {
    /// JSON on one line.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }
}
