// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Typed messages, an ordered in-process transport and the shared register.

use std::collections::VecDeque;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::pauli::PauliString;
use crate::sim::StateVector;

/// One of the two parties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn other(self) -> Party {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Party::Alice => "alice",
            Party::Bob => "bob",
        })
    }
}

/// Opaque name of a simulated register.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RegisterHandle(pub u64);

/// Protocol message.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Message {
    QubitsToAlice { register: RegisterHandle },
    QubitsToBob { register: RegisterHandle },
    MeasurementResults { bits: BitString },
    Abort,
}

impl Message {
    pub fn kind(&self) -> &'static str {
        match self {
            Message::QubitsToAlice { .. } => "qubits_to_alice",
            Message::QubitsToBob { .. } => "qubits_to_bob",
            Message::MeasurementResults { .. } => "measurement_results",
            Message::Abort => "abort",
        }
    }
}

/// Lossless, ordered, typed delivery between the two parties.
pub trait Transport {
    fn send(&mut self, from: Party, message: Message) -> Result<()>;
    /// Next message addressed to `to`, if any.
    fn recv(&mut self, to: Party) -> Option<Message>;
}

/// Two FIFO queues in memory.
#[derive(Clone, Debug, Default)]
pub struct InProcessTransport {
    to_alice: VecDeque<Message>,
    to_bob: VecDeque<Message>,
}

impl InProcessTransport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pending(&self) -> usize {
        self.to_alice.len() + self.to_bob.len()
    }
}

impl Transport for InProcessTransport {
    fn send(&mut self, from: Party, message: Message) -> Result<()> {
        match from {
            Party::Alice => self.to_bob.push_back(message),
            Party::Bob => self.to_alice.push_back(message),
        }
        Ok(())
    }

    fn recv(&mut self, to: Party) -> Option<Message> {
        match to {
            Party::Alice => self.to_alice.pop_front(),
            Party::Bob => self.to_bob.pop_front(),
        }
    }
}

/// The simulated qubits of one circuit. Only the current owner may act on
/// them; while in transit nobody may.
#[derive(Clone, Debug)]
pub struct SharedRegister {
    handle: RegisterHandle,
    owner: Option<Party>,
    state: StateVector,
}

impl SharedRegister {
    /// `n` qubits in `|+>`, owned by `creator`.
    pub fn create(handle: RegisterHandle, n: usize, creator: Party) -> Self {
        Self {
            handle,
            owner: Some(creator),
            state: StateVector::plus(n),
        }
    }

    pub fn handle(&self) -> RegisterHandle {
        self.handle
    }

    pub fn owner(&self) -> Option<Party> {
        self.owner
    }

    pub fn n(&self) -> usize {
        self.state.n()
    }

    fn check(&self, by: Party) -> Result<()> {
        if self.owner == Some(by) {
            Ok(())
        } else {
            Err(Error::ProtocolViolation(format!(
                "{by} acted on register {} owned by {}",
                self.handle.0,
                self.owner.map_or("nobody".to_string(), |p| p.to_string())
            )))
        }
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n() {
            return Err(Error::IndexOutOfRange { index: q, len: self.n() });
        }
        Ok(())
    }

    pub fn apply_single(&mut self, by: Party, q: usize, u: &Mat2) -> Result<()> {
        self.check(by)?;
        self.check_qubit(q)?;
        self.state.apply_single(q, u);
        Ok(())
    }

    pub fn apply_cz(&mut self, by: Party, a: usize, b: usize) -> Result<()> {
        self.check(by)?;
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        self.state.apply_cz(a, b);
        Ok(())
    }

    pub fn apply_pauli(&mut self, by: Party, p: &PauliString) -> Result<()> {
        self.check(by)?;
        if p.n() != self.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                found: p.n(),
            });
        }
        self.state.apply_pauli(p);
        Ok(())
    }

    pub fn measure_x<R: Rng + ?Sized>(&mut self, by: Party, rng: &mut R) -> Result<BitString> {
        self.check(by)?;
        Ok(self.state.measure_x(rng))
    }

    /// Gives up ownership for sending.
    pub fn release(&mut self, by: Party) -> Result<RegisterHandle> {
        self.check(by)?;
        self.owner = None;
        Ok(self.handle)
    }

    /// Takes ownership of a register received as `handle`.
    pub fn claim(&mut self, by: Party, handle: RegisterHandle) -> Result<()> {
        if handle != self.handle {
            return Err(Error::ProtocolViolation(format!(
                "{by} received register {} but register {} is live",
                handle.0, self.handle.0
            )));
        }
        if self.owner.is_some() {
            return Err(Error::ProtocolViolation(format!(
                "register {} claimed by {by} while not in transit",
                handle.0
            )));
        }
        self.owner = Some(by);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hadamard;

    #[test]
    fn fifo_per_direction() {
        let mut t = InProcessTransport::new();
        t.send(Party::Bob, Message::Abort).unwrap();
        t.send(Party::Bob, Message::QubitsToAlice { register: RegisterHandle(1) }).unwrap();
        assert_eq!(t.recv(Party::Bob), None);
        assert_eq!(t.recv(Party::Alice), Some(Message::Abort));
        assert_eq!(t.pending(), 1);
    }

    #[test]
    fn only_owner_may_act() {
        let mut r = SharedRegister::create(RegisterHandle(0), 2, Party::Bob);
        assert!(r.apply_single(Party::Alice, 0, &hadamard()).is_err());
        r.apply_cz(Party::Bob, 0, 1).unwrap();
        let h = r.release(Party::Bob).unwrap();
        assert!(r.apply_cz(Party::Bob, 0, 1).is_err());
        assert!(r.apply_cz(Party::Alice, 0, 1).is_err());
        assert!(r.claim(Party::Alice, RegisterHandle(9)).is_err());
        r.claim(Party::Alice, h).unwrap();
        r.apply_single(Party::Alice, 1, &hadamard()).unwrap();
        assert!(r.claim(Party::Bob, h).is_err());
    }

    #[test]
    fn message_json() {
        let m = Message::QubitsToBob { register: RegisterHandle(3) };
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"kind":"qubits_to_bob","register":3}"#);
    }
}
