// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Alice and Bob as message-driven state machines.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::transport::{Message, Party, RegisterHandle, SharedRegister, Transport};
use crate::bits::BitString;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::noise::{DeviationEvent, NoiseModel};
use crate::pauli::PauliString;
use crate::qotp::{self, DressedCircuit};
use crate::traps;

/// Everything Bob is allowed to know when he acts.
///
/// The target's cZ layout is public; its single-qubit gates, the target
/// slot, the trap choices and the pads are not.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BobView {
    pub n: usize,
    pub m: usize,
    pub v: usize,
    /// Circuit being run, from 0.
    pub circuit: usize,
    /// Noise location: 0 after preparation, `j` after Alice returns band `j`.
    pub location: usize,
    /// cZ pairs per band.
    pub cz: Vec<Vec<(usize, usize)>>,
}

/// A deviation applied by Bob while he holds the register.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Deviation {
    Pauli { pauli: PauliString },
    Unitary { qubit: usize, matrix: Mat2 },
}

/// Fixed insertion at `location` of `circuit`, or of every circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Insertion {
    #[serde(default)]
    pub circuit: Option<usize>,
    pub location: usize,
    pub deviation: Deviation,
}

/// How Bob behaves.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BobStrategy {
    #[default]
    Honest,
    /// Fixed insertions.
    Policy { insertions: Vec<Insertion> },
    /// At each location, with probability `rate`, a uniform non-identity
    /// Pauli on the whole register.
    RandomPauli { rate: f64 },
}

impl BobStrategy {
    pub fn is_honest(&self) -> bool {
        match self {
            BobStrategy::Honest => true,
            BobStrategy::Policy { insertions } => insertions.is_empty(),
            BobStrategy::RandomPauli { rate } => *rate == 0.0,
        }
    }

    /// The same Paulis on every circuit, one per location.
    pub fn fixed_paulis(errors: &[PauliString]) -> Self {
        BobStrategy::Policy {
            insertions: errors
                .iter()
                .enumerate()
                .filter(|(_, p)| !p.is_identity())
                .map(|(l, p)| Insertion {
                    circuit: None,
                    location: l,
                    deviation: Deviation::Pauli { pauli: *p },
                })
                .collect(),
        }
    }

    pub fn validate(&self, n: usize, m: usize) -> Result<()> {
        match self {
            BobStrategy::Honest => Ok(()),
            BobStrategy::RandomPauli { rate } => {
                if (0.0..=1.0).contains(rate) {
                    Ok(())
                } else {
                    Err(Error::Domain(format!("rate {rate} outside [0, 1]")))
                }
            }
            BobStrategy::Policy { insertions } => {
                for ins in insertions {
                    if ins.location > m {
                        return Err(Error::IndexOutOfRange {
                            index: ins.location,
                            len: m + 1,
                        });
                    }
                    match &ins.deviation {
                        Deviation::Pauli { pauli } if pauli.n() != n => {
                            return Err(Error::SizeMismatch {
                                expected: n,
                                found: pauli.n(),
                            })
                        }
                        Deviation::Unitary { qubit, matrix } => {
                            if *qubit >= n {
                                return Err(Error::IndexOutOfRange { index: *qubit, len: n });
                            }
                            crate::circuit::Gate::unitary(*matrix)?;
                        }
                        _ => {}
                    }
                }
                Ok(())
            }
        }
    }

    fn deviations<R: Rng + ?Sized>(&self, view: &BobView, rng: &mut R) -> Vec<Deviation> {
        match self {
            BobStrategy::Honest => Vec::new(),
            BobStrategy::Policy { insertions } => insertions
                .iter()
                .filter(|i| i.location == view.location && i.circuit.is_none_or(|c| c == view.circuit))
                .map(|i| i.deviation.clone())
                .collect(),
            BobStrategy::RandomPauli { rate } => {
                if *rate > 0.0 && rng.gen::<f64>() < *rate {
                    let n = view.n;
                    let total = 1u64 << (2 * n);
                    let idx = rng.gen_range(1..total);
                    let low = (1u64 << n) - 1;
                    vec![Deviation::Pauli {
                        pauli: PauliString::from_masks(n, idx & low, idx >> n).hermitian(),
                    }]
                } else {
                    Vec::new()
                }
            }
        }
    }
}

/// Bob: prepares, applies cZ layers, measures, and may deviate.
#[derive(Debug)]
pub struct Bob {
    strategy: BobStrategy,
    view: BobView,
    next_handle: u64,
    /// What Bob did to each circuit, kept for the corruption check.
    applied: Vec<Vec<(usize, Deviation)>>,
    done: bool,
}

impl Bob {
    /// Bob is built from public information only.
    pub fn new(topology: &Circuit, v: usize, strategy: BobStrategy) -> Self {
        Self {
            strategy,
            view: BobView {
                n: topology.n(),
                m: topology.m(),
                v,
                circuit: 0,
                location: 0,
                cz: topology.bands().iter().map(|b| b.cz.clone()).collect(),
            },
            next_handle: 0,
            applied: vec![Vec::new(); v + 1],
            done: false,
        }
    }

    pub fn view(&self) -> &BobView {
        &self.view
    }

    pub(crate) fn applied(&self) -> &[Vec<(usize, Deviation)>] {
        &self.applied
    }

    fn deviate<R: Rng + ?Sized>(&mut self, reg: &mut SharedRegister, rng: &mut R) -> Result<()> {
        for d in self.strategy.deviations(&self.view, rng) {
            match &d {
                Deviation::Pauli { pauli } => reg.apply_pauli(Party::Bob, pauli)?,
                Deviation::Unitary { qubit, matrix } => reg.apply_single(Party::Bob, *qubit, matrix)?,
            }
            self.applied[self.view.circuit].push((self.view.location, d));
        }
        Ok(())
    }

    /// Prepares the register of the current circuit and sends it to Alice.
    pub fn start<T: Transport, R: Rng + ?Sized>(
        &mut self,
        reg: &mut Option<SharedRegister>,
        transport: &mut T,
        rng: &mut R,
    ) -> Result<()> {
        let mut r = SharedRegister::create(RegisterHandle(self.next_handle), self.view.n, Party::Bob);
        self.next_handle += 1;
        self.view.location = 0;
        self.deviate(&mut r, rng)?;
        let handle = r.release(Party::Bob)?;
        *reg = Some(r);
        transport.send(Party::Bob, Message::QubitsToAlice { register: handle })
    }

    /// Handles one message from Alice.
    pub fn handle<T: Transport, R: Rng + ?Sized>(
        &mut self,
        message: Message,
        reg: &mut Option<SharedRegister>,
        transport: &mut T,
        rng: &mut R,
    ) -> Result<()> {
        if self.done && message != Message::Abort {
            return Err(Error::ProtocolViolation(format!(
                "bob received {} after the session ended",
                message.kind()
            )));
        }
        match message {
            Message::QubitsToBob { register } => {
                let r = reg
                    .as_mut()
                    .ok_or_else(|| Error::ProtocolViolation("no live register".into()))?;
                r.claim(Party::Bob, register)?;
                self.view.location += 1;
                let j = self.view.location;
                self.deviate(r, rng)?;
                if j < self.view.m {
                    for &(a, b) in &self.view.cz[j - 1] {
                        r.apply_cz(Party::Bob, a, b)?;
                    }
                    let h = r.release(Party::Bob)?;
                    transport.send(Party::Bob, Message::QubitsToAlice { register: h })
                } else {
                    let bits = r.measure_x(Party::Bob, rng)?;
                    *reg = None;
                    transport.send(Party::Bob, Message::MeasurementResults { bits })?;
                    self.view.circuit += 1;
                    if self.view.circuit <= self.view.v {
                        self.start(reg, transport, rng)
                    } else {
                        self.done = true;
                        Ok(())
                    }
                }
            }
            Message::Abort => {
                self.done = true;
                *reg = None;
                Ok(())
            }
            other => Err(Error::ProtocolViolation(format!(
                "bob cannot receive {}",
                other.kind()
            ))),
        }
    }
}

/// Alice's private record. Never handed to Bob.
#[derive(Clone, Debug, PartialEq)]
pub struct AlicePrivate {
    pub v0: usize,
    pub dressed: Vec<DressedCircuit>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum AliceState {
    AwaitQubits { k: usize, j: usize },
    AwaitResults { k: usize },
    Done,
}

/// What Alice did with a message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AliceStep {
    Continue,
    Finished,
}

/// Alice: runs the single-qubit gates and checks the traps.
#[derive(Debug)]
pub struct Alice {
    private: AlicePrivate,
    gate_noise: Option<NoiseModel>,
    state: AliceState,
    outputs: Vec<Option<BitString>>,
    deviations: Vec<Vec<DeviationEvent>>,
    aborted: bool,
}

impl Alice {
    /// Preliminary steps: target slot, traps, pads.
    pub fn prepare<R: Rng + ?Sized>(
        target: &Circuit,
        v: usize,
        gate_noise: Option<NoiseModel>,
        rng: &mut R,
    ) -> Result<Self> {
        if let Some(g) = &gate_noise {
            g.validate()?;
            if g.has_pauli_part() || g.gate_part().is_none() {
                return Err(Error::Noise("alice's noise must be gate noise only".into()));
            }
        }
        let v0 = rng.gen_range(0..=v);
        let circuits = (0..=v)
            .map(|k| {
                if k == v0 {
                    Ok(target.clone())
                } else {
                    traps::generate_trap(target, &traps::sample_choice(target, rng))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let dressed = circuits
            .iter()
            .map(|c| qotp::dress(c, &qotp::sample_pads(c.n(), c.m(), rng)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            private: AlicePrivate { v0, dressed },
            gate_noise,
            state: AliceState::AwaitQubits { k: 0, j: 1 },
            outputs: vec![None; v + 1],
            deviations: vec![Vec::new(); v + 1],
            aborted: false,
        })
    }

    pub fn private(&self) -> &AlicePrivate {
        &self.private
    }

    pub fn aborted(&self) -> bool {
        self.aborted
    }

    /// Post-processed outputs per circuit; `None` if never run.
    pub fn outputs(&self) -> &[Option<BitString>] {
        &self.outputs
    }

    /// Gate errors on Alice's device, per circuit.
    pub fn deviations(&self) -> &[Vec<DeviationEvent>] {
        &self.deviations
    }

    fn violation(&self, message: &Message) -> Error {
        Error::ProtocolViolation(format!(
            "alice received {} while in state {:?}",
            message.kind(),
            self.state
        ))
    }

    /// Handles one message from Bob.
    pub fn handle<T: Transport, R: Rng + ?Sized>(
        &mut self,
        message: Message,
        reg: &mut Option<SharedRegister>,
        transport: &mut T,
        rng: &mut R,
    ) -> Result<AliceStep> {
        match (self.state, &message) {
            (AliceState::AwaitQubits { k, j }, Message::QubitsToAlice { register }) => {
                let r = reg
                    .as_mut()
                    .ok_or_else(|| Error::ProtocolViolation("no live register".into()))?;
                r.claim(Party::Alice, *register)?;
                let band = &self.private.dressed[k].circuit.bands()[j - 1];
                for (q, g) in band.singles.iter().enumerate() {
                    r.apply_single(Party::Alice, q, &g.matrix())?;
                }
                if let Some(noise) = &self.gate_noise {
                    if let Some(ev) = noise.sample_gate_deviation(r.n(), k, j, rng)? {
                        r.apply_pauli(Party::Alice, &ev.pauli)?;
                        self.deviations[k].push(ev);
                    }
                }
                let h = r.release(Party::Alice)?;
                transport.send(Party::Alice, Message::QubitsToBob { register: h })?;
                let m = self.private.dressed[k].circuit.m();
                self.state = if j < m {
                    AliceState::AwaitQubits { k, j: j + 1 }
                } else {
                    AliceState::AwaitResults { k }
                };
                Ok(AliceStep::Continue)
            }
            (AliceState::AwaitResults { k }, Message::MeasurementResults { bits }) => {
                let s = bits.xor(&self.private.dressed[k].key)?;
                let failed = k != self.private.v0 && !s.is_zero();
                self.outputs[k] = Some(s);
                if failed {
                    self.aborted = true;
                    self.state = AliceState::Done;
                    transport.send(Party::Alice, Message::Abort)?;
                    return Ok(AliceStep::Finished);
                }
                if k + 1 < self.outputs.len() {
                    self.state = AliceState::AwaitQubits { k: k + 1, j: 1 };
                    Ok(AliceStep::Continue)
                } else {
                    self.state = AliceState::Done;
                    Ok(AliceStep::Finished)
                }
            }
            _ => Err(self.violation(&message)),
        }
    }

    /// Whether Bob's deviations or Alice's own gate errors changed the
    /// target's outcome, by the single-party runner's proxy. Unitary
    /// deviations always count.
    pub(crate) fn target_corrupted(&self, bob: &[(usize, Deviation)]) -> Result<bool> {
        let v0 = self.private.v0;
        let dressed = &self.private.dressed[v0].circuit;
        let (n, m) = (dressed.n(), dressed.m());
        let mut errors = vec![PauliString::identity(n); m + 1];
        for (l, d) in bob {
            match d {
                Deviation::Pauli { pauli } => errors[*l] = pauli.multiply(&errors[*l])?,
                Deviation::Unitary { .. } => return Ok(true),
            }
        }
        // X before measurement and on fresh |+> states does nothing.
        errors[0] = errors[0].z_part();
        errors[m] = errors[m].z_part();
        crate::protocol::target_corrupted(dressed, &errors, &self.deviations[v0])
    }
}
