// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input document. `path` is a JSON path such as `$.bands[0].cz`.
    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    /// A circuit violates one or more structural invariants.
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    /// A 2x2 matrix is not unitary within tolerance.
    #[error("matrix is not unitary (max |U U^dagger - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for {len} qubits")]
    IndexOutOfRange { index: usize, len: usize },

    /// The frame backend only handles Clifford gates.
    #[error("non-Clifford gate at band {band}, qubit {qubit}")]
    NonClifford { band: usize, qubit: usize },

    #[error("{what}: {requested} exceeds limit {limit}")]
    LimitExceeded {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("channel is not trace preserving (max deviation {0:e})")]
    NotTracePreserving(f64),

    /// Argument outside the domain of a closed-form bound.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("too large to enumerate: {count} choices exceed cap {cap}")]
    TooLargeToEnumerate { count: u128, cap: u128 },

    #[error("malformed trap choice: {0}")]
    MalformedChoice(String),

    #[error("noise model: {0}")]
    Noise(String),

    /// A party sent or received a message out of turn.
    #[error("protocol violation: {0}")]
    ProtocolViolation(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
