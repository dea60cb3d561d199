// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Accreditation of noisy quantum computations.
//!
//! A target circuit is hidden among `v` trap circuits of the same shape. All
//! `v + 1` circuits are randomised with a quantum one-time pad and run on a
//! noisy device. Trap outcomes yield a bound on the variation distance
//! between the noisy and ideal output distributions of the target.

// Negated float comparisons reject NaN inputs.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bits;
pub mod circuit;
pub mod clifford;
pub mod error;
pub mod linalg;
pub mod mesothetic;
pub mod noise;
pub mod oracles;
pub mod pauli;
pub mod protocol;
pub mod qotp;
pub mod rng;
pub mod sim;
pub mod traps;

pub use bits::BitString;
pub use circuit::{Band, Circuit, Gate};
pub use clifford::Clifford;
pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/circuits.md")]
    mod circuits {}
    #[doc = include_str!("../../../book/src/pauli.md")]
    mod pauli {}
    #[doc = include_str!("../../../book/src/qotp.md")]
    mod qotp {}
    #[doc = include_str!("../../../book/src/traps.md")]
    mod traps {}
    #[doc = include_str!("../../../book/src/noise.md")]
    mod noise {}
    #[doc = include_str!("../../../book/src/protocol.md")]
    mod protocol {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/mesothetic.md")]
    mod mesothetic {}
}
