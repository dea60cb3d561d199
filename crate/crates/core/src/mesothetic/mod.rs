// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Two-party version of the protocol.
//!
//! Bob owns the quantum device: he prepares `|+>` states, applies the cZ
//! layers and measures. Alice only applies the padded single-qubit gates of
//! each band, so she needs the register back once per band. Bob learns the
//! cZ layout and `v`, nothing else. Alice aborts as soon as a trap returns a
//! nonzero bit.
//!
//! ```
//! use accred::circuit::families;
//! use accred::mesothetic::{run_session, BobStrategy, SessionConfig};
//! use accred::rng::seeded;
//!
//! let target = families::ghz(3, 3).unwrap();
//! let config = SessionConfig::new(3, BobStrategy::Honest);
//! let report = run_session(&target, &config, &mut seeded(1)).unwrap();
//! assert!(report.accepted() && !report.aborted);
//! ```

pub mod parties;
pub mod transport;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use parties::{Alice, AlicePrivate, AliceStep, Bob, BobStrategy, BobView, Deviation, Insertion};
pub use transport::{InProcessTransport, Message, Party, RegisterHandle, SharedRegister, Transport};

use crate::bits::BitString;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::noise::NoiseModel;
use crate::oracles::{CheckReport, Mode};
use crate::protocol::bounds::{epsilon_bounded_gates, epsilon_noiseless_gates};
use crate::protocol::Flag;
use crate::rng::{self, SimRng};

/// Session parameters known to both parties, plus Alice's device noise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionConfig {
    pub v: usize,
    pub bob: BobStrategy,
    /// Gate noise on Alice's device (gate part only).
    #[serde(default)]
    pub alice_noise: Option<NoiseModel>,
    /// Keep the message transcript in the report.
    #[serde(default)]
    pub keep_transcript: bool,
}

impl SessionConfig {
    pub fn new(v: usize, bob: BobStrategy) -> Self {
        Self {
            v,
            bob,
            alice_noise: None,
            keep_transcript: false,
        }
    }

    pub fn with_alice_noise(mut self, noise: NoiseModel) -> Self {
        self.alice_noise = Some(noise);
        self
    }

    pub fn with_transcript(mut self) -> Self {
        self.keep_transcript = true;
        self
    }

    /// `g` of Alice's device over `v + 1` circuits of `m` bands.
    pub fn g_factor(&self, m: usize) -> f64 {
        self.alice_noise
            .as_ref()
            .map_or(1.0, |noise| noise.g_factor(self.v + 1, m))
    }
}

/// One delivered message.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub seq: usize,
    pub from: Party,
    pub message: Message,
}

/// Outcome of one session.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionReport {
    pub flag: Flag,
    /// Post-processed target output, if the target ran before any abort.
    pub target_output: Option<BitString>,
    pub transcript_len: usize,
    pub aborted: bool,
    /// Circuits completed, including the one that triggered an abort.
    pub circuits_run: usize,
    /// Deviations changed the target outcome (same proxy as the
    /// single-party runner).
    pub target_corrupted: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transcript: Vec<TranscriptEntry>,
}

impl SessionReport {
    pub fn accepted(&self) -> bool {
        self.flag == Flag::Acc
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

struct Recorder<'a, T: Transport> {
    inner: &'a mut T,
    log: Vec<TranscriptEntry>,
    count: usize,
    keep: bool,
}

impl<T: Transport> Transport for Recorder<'_, T> {
    fn send(&mut self, from: Party, message: Message) -> Result<()> {
        if self.keep {
            self.log.push(TranscriptEntry {
                seq: self.count,
                from,
                message: message.clone(),
            });
        }
        self.count += 1;
        self.inner.send(from, message)
    }

    fn recv(&mut self, to: Party) -> Option<Message> {
        self.inner.recv(to)
    }
}

/// Runs one session over an in-process transport.
pub fn run_session(target: &Circuit, config: &SessionConfig, rng: &mut SimRng) -> Result<SessionReport> {
    run_session_over(target, config, &mut InProcessTransport::new(), rng)
}

/// Runs one session over `transport`.
pub fn run_session_over<T: Transport>(
    target: &Circuit,
    config: &SessionConfig,
    transport: &mut T,
    rng: &mut SimRng,
) -> Result<SessionReport> {
    config.bob.validate(target.n(), target.m())?;
    let mut alice = Alice::prepare(target, config.v, config.alice_noise.clone(), rng)?;
    let mut bob = Bob::new(&target.topology(), config.v, config.bob.clone());
    let mut t = Recorder {
        inner: transport,
        log: Vec::new(),
        count: 0,
        keep: config.keep_transcript,
    };
    let mut reg = None;
    bob.start(&mut reg, &mut t, rng)?;
    loop {
        if let Some(msg) = t.recv(Party::Alice) {
            if alice.handle(msg, &mut reg, &mut t, rng)? == AliceStep::Finished {
                break;
            }
        } else if let Some(msg) = t.recv(Party::Bob) {
            bob.handle(msg, &mut reg, &mut t, rng)?;
        } else {
            return Err(Error::ProtocolViolation("no message in flight before the session ended".into()));
        }
    }
    // Let Bob see a trailing abort.
    while let Some(msg) = t.recv(Party::Bob) {
        if msg == Message::Abort {
            bob.handle(msg, &mut reg, &mut t, rng)?;
        }
    }
    let v0 = alice.private().v0;
    let aborted = alice.aborted();
    let flag = if aborted { Flag::Rej } else { Flag::Acc };
    let target_corrupted = alice.target_corrupted(&bob.applied()[v0])?;
    Ok(SessionReport {
        flag,
        target_output: alice.outputs()[v0],
        transcript_len: t.count,
        aborted,
        circuits_run: alice.outputs().iter().filter(|o| o.is_some()).count(),
        target_corrupted,
        transcript: t.log,
    })
}

/// Monte Carlo estimate of `P(accept and target corrupted)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SoundnessEstimate {
    pub sessions: u64,
    pub accepted: u64,
    pub aborted: u64,
    pub hits: u64,
    pub estimate: f64,
    pub sigma: f64,
    pub g: f64,
    pub bound: f64,
}

impl SoundnessEstimate {
    pub fn report(&self, instance: &str, bound_override: Option<f64>) -> CheckReport {
        let bound = bound_override.unwrap_or(self.bound);
        CheckReport {
            check: "mesothetic-soundness".into(),
            instance: instance.into(),
            probability: self.estimate,
            exact: None,
            sigma: Some(self.sigma),
            bound,
            passed: self.estimate <= bound + 3.0 * self.sigma,
            mode: Mode::Sampled,
            size: self.sessions,
        }
    }
}

/// Runs `sessions` independent sessions, session `i` on stream `i` of
/// `seed`.
pub fn soundness_estimate(
    target: &Circuit,
    config: &SessionConfig,
    sessions: u64,
    seed: u64,
) -> Result<SoundnessEstimate> {
    let base = epsilon_noiseless_gates(config.v)?;
    if sessions == 0 {
        return Err(Error::Domain("sessions must be positive".into()));
    }
    let g = config.g_factor(target.m());
    let bound = if config.alice_noise.is_some() {
        epsilon_bounded_gates(config.v, g)?
    } else {
        base
    };
    let config = SessionConfig {
        keep_transcript: false,
        ..config.clone()
    };
    let counts = (0..sessions)
        .into_par_iter()
        .map(|i| {
            let r = run_session(target, &config, &mut rng::stream(seed, i))?;
            Ok::<_, Error>((
                r.accepted() as u64,
                r.aborted as u64,
                (r.accepted() && r.target_corrupted) as u64,
            ))
        })
        .try_reduce(|| (0, 0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1, a.2 + b.2)))?;
    let b = counts.2 as f64 / sessions as f64;
    Ok(SoundnessEstimate {
        sessions,
        accepted: counts.0,
        aborted: counts.1,
        hits: counts.2,
        estimate: b,
        sigma: (b * (1.0 - b) / sessions as f64).sqrt(),
        g,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::families;
    use crate::pauli::PauliString;
    use crate::rng::seeded;

    #[test]
    fn honest_sessions_accept_with_correct_output() {
        let target = families::ghz(3, 3).unwrap();
        for s in 0..50 {
            let r = run_session(&target, &SessionConfig::new(3, BobStrategy::Honest), &mut seeded(s)).unwrap();
            assert!(r.accepted() && !r.aborted && !r.target_corrupted);
            let out = r.target_output.unwrap();
            // GHZ measured in the X basis has even parity.
            assert_eq!(out.count_ones() % 2, 0, "{out}");
            assert_eq!(r.circuits_run, 4);
            // Per circuit: m register round trips and one result.
            assert_eq!(r.transcript_len, 4 * (2 * 3 + 1));
        }
    }

    #[test]
    fn z_before_measurement_aborts_on_first_trap() {
        let target = families::ghz(2, 2).unwrap();
        let zz: PauliString = "ZZ".parse().unwrap();
        let id = PauliString::identity(2);
        let bob = BobStrategy::fixed_paulis(&[id, id, zz]);
        let cfg = SessionConfig::new(3, bob).with_transcript();
        for s in 0..30 {
            let mut rng = seeded(s);
            let r = run_session(&target, &cfg, &mut rng).unwrap();
            assert!(r.aborted && !r.accepted());
            let v0_first = r.circuits_run == 2;
            assert!(r.circuits_run == 1 || v0_first);
            assert_eq!(r.transcript.last().unwrap().message, Message::Abort);
        }
    }

    #[test]
    fn out_of_order_message_is_a_violation() {
        let target = families::ghz(2, 2).unwrap();
        let mut rng = seeded(1);
        let mut alice = Alice::prepare(&target, 3, None, &mut rng).unwrap();
        let mut t = InProcessTransport::new();
        let mut reg = None;
        let err = alice
            .handle(
                Message::MeasurementResults { bits: BitString::zeros(2) },
                &mut reg,
                &mut t,
                &mut rng,
            )
            .unwrap_err();
        assert!(matches!(err, Error::ProtocolViolation(_)));
    }

    #[test]
    fn bob_view_has_no_private_fields() {
        let target = families::ghz(2, 2).unwrap();
        let bob = Bob::new(&target.topology(), 3, BobStrategy::Honest);
        let json = serde_json::to_value(bob.view()).unwrap();
        let mut keys: Vec<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort_unstable();
        assert_eq!(keys, ["circuit", "cz", "location", "m", "n", "v"]);
    }

    #[test]
    fn pauli_bob_soundness_within_bound() {
        let target = families::ghz(2, 2).unwrap();
        let bob = BobStrategy::RandomPauli { rate: 0.3 };
        let est = soundness_estimate(&target, &SessionConfig::new(3, bob), 4000, 5).unwrap();
        assert!(est.report("test", None).passed, "{est:?}");
        assert!(est.aborted > 0);
    }

    #[test]
    fn alice_noise_bound() {
        let target = families::ghz(2, 2).unwrap();
        let noise = NoiseModel::bounded_gate(0.01).unwrap();
        let cfg = SessionConfig::new(3, BobStrategy::Honest).with_alice_noise(noise);
        let g = cfg.g_factor(2);
        assert!((g - 0.99f64.powi(8)).abs() < 1e-15);
        let est = soundness_estimate(&target, &cfg, 2000, 3).unwrap();
        assert!((est.bound - (g * 27.0 / 64.0 + 1.0 - g)).abs() < 1e-15);
        assert!(est.report("test", None).passed);
    }

    #[test]
    fn sessions_are_reproducible() {
        let target = families::ghz(2, 3).unwrap();
        let cfg = SessionConfig::new(3, BobStrategy::RandomPauli { rate: 0.2 }).with_transcript();
        let a = run_session(&target, &cfg, &mut seeded(9)).unwrap();
        let b = run_session(&target, &cfg, &mut seeded(9)).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }
}
