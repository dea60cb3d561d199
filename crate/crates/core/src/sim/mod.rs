// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Simulation backends.
//!
//! * [`frame`]: exact Pauli-frame propagation for Clifford circuits with
//!   Pauli noise.
//! * [`statevector`]: dense sampling for generic circuits.
//! * [`density`]: exact output distributions under Kraus channels.
//!
//! All backends start from `|+>^n` and measure every qubit in the X basis;
//! outcome 0 means `|+>`. Outcome masks put qubit `q` at bit `q`.

pub mod density;
pub mod frame;
pub mod statevector;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Size limits for the dense backends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimLimits {
    pub max_statevector_qubits: usize,
    pub max_density_qubits: usize,
}

impl Default for SimLimits {
    fn default() -> Self {
        Self {
            max_statevector_qubits: 16,
            max_density_qubits: 6,
        }
    }
}

impl SimLimits {
    pub fn new(max_statevector_qubits: usize, max_density_qubits: usize) -> Result<Self> {
        if max_statevector_qubits == 0 || max_density_qubits == 0 {
            return Err(Error::Domain("simulation limits must be at least 1".into()));
        }
        Ok(Self {
            max_statevector_qubits,
            max_density_qubits,
        })
    }

    pub(crate) fn check_statevector(&self, n: usize) -> Result<()> {
        if n > self.max_statevector_qubits {
            return Err(Error::LimitExceeded {
                what: "statevector qubits",
                requested: n,
                limit: self.max_statevector_qubits,
            });
        }
        Ok(())
    }

    pub(crate) fn check_density(&self, n: usize) -> Result<()> {
        if n > self.max_density_qubits {
            return Err(Error::LimitExceeded {
                what: "density-matrix qubits",
                requested: n,
                limit: self.max_density_qubits,
            });
        }
        Ok(())
    }
}

pub use density::{run_density, Channel, DensityNoise};
pub use frame::{clifford_output, ideal_clifford_output, propagate_frame, trap_output};
pub use statevector::{ideal_distribution, run_statevector, StateVector};
