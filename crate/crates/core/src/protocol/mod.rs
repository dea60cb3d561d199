// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! The accreditation protocol.
//!
//! One run hides the target among `v` traps at a secret slot `v0`, pads
//! every circuit, executes all `v + 1` under one noise realisation and
//! accepts iff every trap outputs all zeros. [`accredit`] repeats this `d`
//! times and turns the acceptance count into a bound on the variation
//! distance of the accepted target outputs.
//!
//! ```
//! use accred::{circuit, noise::NoiseModel, protocol};
//! let target = circuit::parse(r#"{"n":2,"m":2,"bands":[
//!     {"singles":[{"clifford":"H"},{"clifford":"I"}],"cz":[[0,1]]},
//!     {"singles":[{"clifford":"I"},{"clifford":"H"}],"cz":[]}]}"#)?;
//! let config = protocol::ProtocolConfig::new(3, 10, 0.05, 7, NoiseModel::noiseless());
//! let report = protocol::accredit(&config, &target)?;
//! assert_eq!(report.n_acc, 10);
//! # Ok::<(), accred::Error>(())
//! ```

pub mod bounds;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::bits::BitString;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::noise::{DeviationEvent, NoiseModel, PauliErrorCollection};
use crate::qotp;
use crate::rng;
use crate::sim::{self, SimLimits};
use crate::traps;

/// Which closed form supplies `epsilon`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsilonMode {
    /// `kappa / (v + 1)`: single-qubit gates assumed noiseless.
    #[default]
    NoiselessGates,
    /// `g kappa / (v + 1) + 1 - g` with `g` from the model's gate noise.
    BoundedGates,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub v: usize,
    pub d: usize,
    pub theta: f64,
    pub master_seed: u64,
    pub noise: NoiseModel,
    #[serde(default)]
    pub epsilon_mode: EpsilonMode,
    #[serde(default)]
    pub limits: SimLimits,
}

impl ProtocolConfig {
    pub fn new(v: usize, d: usize, theta: f64, master_seed: u64, noise: NoiseModel) -> Self {
        Self {
            v,
            d,
            theta,
            master_seed,
            noise,
            epsilon_mode: EpsilonMode::NoiselessGates,
            limits: SimLimits::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        bounds::epsilon_noiseless_gates(self.v)?;
        if self.d == 0 {
            return Err(Error::Domain("d ≥ 1 runs required".into()));
        }
        if !(self.theta > 0.0) {
            return Err(Error::Domain(format!("theta = {} must be positive", self.theta)));
        }
        self.noise.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    Acc,
    Rej,
}

/// Result of one protocol run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOutcome {
    /// Secret slot of the target, from 0.
    pub v0: usize,
    pub target_output: BitString,
    /// Post-processed trap outputs in slot order, skipping `v0`.
    pub trap_outputs: Vec<BitString>,
    pub flag: Flag,
    /// The noise realisation acted nontrivially on the target: a nonzero
    /// output flip after frame reduction (Clifford targets), any error that
    /// is not invisible on the target's cZ layers (generic targets), or any
    /// gate deviation.
    pub target_corrupted: bool,
}

/// Noise realisation for one run, drawn before any circuit is built.
pub(crate) struct Realisation {
    pub collection: PauliErrorCollection,
    pub deviations: Vec<Vec<DeviationEvent>>,
}

pub(crate) fn sample_realisation<R: Rng + ?Sized>(
    noise: &NoiseModel,
    circuits: usize,
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<Realisation> {
    let collection = if noise.has_pauli_part() {
        noise.sample_collection(circuits, n, m, rng)?
    } else {
        PauliErrorCollection::identity(circuits, n, m)
    };
    let mut deviations = vec![Vec::new(); circuits];
    if noise.gate_part().is_some() {
        for (k, slot) in deviations.iter_mut().enumerate() {
            for j in 1..=m {
                if let Some(ev) = noise.sample_gate_deviation(n, k, j, rng)? {
                    slot.push(ev);
                }
            }
        }
    }
    Ok(Realisation {
        collection,
        deviations,
    })
}

/// Target-corruption proxy shared with the two-party session engine.
///
/// Gate deviations always count. Collections that no circuit on the target's
/// cZ layers can detect ([`crate::noise::is_invisible`]) never count.
pub(crate) fn target_corrupted(
    dressed_target: &Circuit,
    errors: &[crate::pauli::PauliString],
    deviations: &[DeviationEvent],
) -> Result<bool> {
    if !deviations.is_empty() {
        return Ok(true);
    }
    if crate::noise::is_invisible(dressed_target, errors) {
        return Ok(false);
    }
    if dressed_target.is_clifford() {
        Ok(!sim::trap_output(dressed_target, errors)?.is_zero())
    } else {
        Ok(errors.iter().any(|p| !p.is_identity()))
    }
}

/// One run of the protocol.
pub fn single_run<R: Rng + ?Sized>(
    target: &Circuit,
    v: usize,
    noise: &NoiseModel,
    limits: &SimLimits,
    rng: &mut R,
) -> Result<RunOutcome> {
    if v == 0 {
        return Err(Error::Domain("at least one trap is required".into()));
    }
    let (n, m) = (target.n(), target.m());
    let v0 = rng.gen_range(0..=v);
    let mut circuits = Vec::with_capacity(v + 1);
    for k in 0..=v {
        if k == v0 {
            circuits.push(target.clone());
        } else {
            let choice = traps::sample_choice(target, rng);
            circuits.push(traps::generate_trap(target, &choice)?);
        }
    }
    let dressed: Vec<qotp::DressedCircuit> = circuits
        .iter()
        .map(|c| qotp::dress(c, &qotp::sample_pads(n, m, rng)))
        .collect::<Result<_>>()?;
    let real = sample_realisation(noise, v + 1, n, m, rng)?;

    let mut target_output = BitString::zeros(n);
    let mut trap_outputs = Vec::with_capacity(v);
    let mut corrupted = false;
    for (k, dc) in dressed.iter().enumerate() {
        let errors = real.collection.for_circuit(k);
        let devs = &real.deviations[k];
        let raw = if k != v0 && devs.is_empty() {
            sim::clifford_output(&dc.circuit, errors)?
        } else {
            sim::run_statevector(&dc.circuit, Some(errors), devs, limits, rng)?
        };
        let out = qotp::postprocess(&raw, &dc.key)?;
        if k == v0 {
            target_output = out;
            corrupted = target_corrupted(&dc.circuit, errors, devs)?;
        } else {
            trap_outputs.push(out);
        }
    }
    let flag = if trap_outputs.iter().all(BitString::is_zero) {
        Flag::Acc
    } else {
        Flag::Rej
    };
    Ok(RunOutcome {
        v0,
        target_output,
        trap_outputs,
        flag,
        target_corrupted: corrupted,
    })
}

/// Executes `d` independent runs; run `i` uses stream `i` of the master seed.
pub fn run_all(config: &ProtocolConfig, target: &Circuit) -> Result<Vec<RunOutcome>> {
    config.validate()?;
    (0..config.d)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(config.master_seed, i as u64);
            single_run(target, config.v, &config.noise, &config.limits, &mut r)
        })
        .collect()
}

fn serialize_bound<S: Serializer>(b: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match b {
        Some(x) => s.serialize_f64(*x),
        None => s.serialize_str("unavailable"),
    }
}

/// Summary of `d` runs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AccreditationReport {
    pub master_seed: u64,
    pub v: usize,
    pub d: usize,
    pub theta: f64,
    pub n_acc: usize,
    pub epsilon_mode: EpsilonMode,
    pub epsilon: f64,
    /// `1 - 2 exp(-2 d theta^2)`.
    pub confidence: f64,
    /// `epsilon / (N_acc/d - theta)` when positive, else `"unavailable"`.
    #[serde(serialize_with = "serialize_bound")]
    pub bound: Option<f64>,
    pub status: String,
    /// Target outputs of accepted runs, in run order.
    pub accepted_outputs: Vec<BitString>,
    /// Accepted runs whose target was corrupted. Only a simulator knows this.
    pub accepted_corrupted: usize,
}

impl AccreditationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }
}

/// Report status when nothing was accepted.
pub const STATUS_NONE_ACCEPTED: &str = "no accredited outputs; all outputs discarded";

/// Runs the protocol `d` times and bounds the accepted outputs.
pub fn accredit(config: &ProtocolConfig, target: &Circuit) -> Result<AccreditationReport> {
    let runs = run_all(config, target)?;
    report(config, target, &runs)
}

/// Aggregates finished runs into a report.
pub fn report(
    config: &ProtocolConfig,
    target: &Circuit,
    runs: &[RunOutcome],
) -> Result<AccreditationReport> {
    let epsilon = match config.epsilon_mode {
        EpsilonMode::NoiselessGates => bounds::epsilon_noiseless_gates(config.v)?,
        EpsilonMode::BoundedGates => {
            let g = config.noise.g_factor(config.v + 1, target.m());
            bounds::epsilon_bounded_gates(config.v, g)?
        }
    };
    let accepted: Vec<&RunOutcome> = runs.iter().filter(|r| r.flag == Flag::Acc).collect();
    let n_acc = accepted.len();
    let d = runs.len();
    let bound = bounds::variation_distance_bound(epsilon, n_acc, d, config.theta);
    let status = if n_acc == 0 {
        STATUS_NONE_ACCEPTED.to_string()
    } else if bound.is_none() {
        format!("bound unavailable: acceptance rate does not exceed theta = {}", config.theta)
    } else {
        "accredited".to_string()
    };
    Ok(AccreditationReport {
        master_seed: config.master_seed,
        v: config.v,
        d,
        theta: config.theta,
        n_acc,
        epsilon_mode: config.epsilon_mode,
        epsilon,
        confidence: bounds::confidence(d, config.theta),
        bound,
        status,
        accepted_outputs: accepted.iter().map(|r| r.target_output).collect(),
        accepted_corrupted: accepted.iter().filter(|r| r.target_corrupted).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Band, Gate};
    use crate::clifford::Clifford;
    use crate::noise::{IndependentChannels, PauliRates, RateOverride};

    fn target() -> Circuit {
        let h = Gate::from(Clifford::H);
        Circuit::new(
            3,
            vec![
                Band::new(vec![h, Gate::IDENTITY, h], [(0, 1)]),
                Band::new(vec![Gate::IDENTITY, h, Gate::from(Clifford::S)], [(1, 2)]),
                Band::new(vec![h, h, h], []),
            ],
        )
        .unwrap()
    }

    #[test]
    fn noiseless_runs_accept() {
        let mut r = rng::seeded(1);
        for _ in 0..50 {
            let out = single_run(&target(), 3, &NoiseModel::noiseless(), &SimLimits::default(), &mut r)
                .unwrap();
            assert_eq!(out.flag, Flag::Acc);
            assert!(!out.target_corrupted);
            assert_eq!(out.trap_outputs.len(), 3);
        }
    }

    #[test]
    fn final_z_everywhere_rejects() {
        let noise = NoiseModel::Independent(IndependentChannels {
            default: PauliRates::ZERO,
            overrides: vec![RateOverride {
                circuit: None,
                location: Some(3),
                qubit: None,
                rates: PauliRates::dephasing(1.0),
            }],
        });
        let mut r = rng::seeded(2);
        for _ in 0..20 {
            let out = single_run(&target(), 3, &noise, &SimLimits::default(), &mut r).unwrap();
            assert_eq!(out.flag, Flag::Rej);
            assert!(out.trap_outputs.iter().all(|t| t.count_ones() == 3));
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = ProtocolConfig::new(3, 40, 0.05, 99, NoiseModel::independent(PauliRates::depolarizing(0.05)));
        let a = accredit(&cfg, &target()).unwrap();
        let b = accredit(&cfg, &target()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.confidence, 1.0 - 2.0 * (-2.0 * 40.0 * 0.05f64 * 0.05).exp());
    }

    #[test]
    fn config_is_validated() {
        let cfg = ProtocolConfig::new(2, 10, 0.05, 0, NoiseModel::noiseless());
        let e = accredit(&cfg, &target()).unwrap_err();
        assert!(e.to_string().contains("v ≥ 3 required"));
        let cfg = ProtocolConfig::new(3, 0, 0.05, 0, NoiseModel::noiseless());
        assert!(accredit(&cfg, &target()).is_err());
        let cfg = ProtocolConfig::new(3, 5, 0.0, 0, NoiseModel::noiseless());
        assert!(accredit(&cfg, &target()).is_err());
    }

    #[test]
    fn bound_json_uses_unavailable() {
        let noise = NoiseModel::Independent(IndependentChannels {
            default: PauliRates::ZERO,
            overrides: vec![RateOverride {
                circuit: None,
                location: Some(3),
                qubit: None,
                rates: PauliRates::dephasing(1.0),
            }],
        });
        let cfg = ProtocolConfig::new(3, 5, 0.05, 0, noise);
        let rep = accredit(&cfg, &target()).unwrap();
        assert_eq!(rep.n_acc, 0);
        assert_eq!(rep.status, STATUS_NONE_ACCEPTED);
        assert!(rep.to_json().contains("\"bound\": \"unavailable\""));
    }
}
