// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

use accred::circuit::{self, families};
use accred::mesothetic::{self, BobStrategy, SessionConfig};
use accred::noise::NoiseModel;
use accred::protocol::{self, ProtocolConfig, STATUS_NONE_ACCEPTED};
use accred::rng::seeded;
use accred::Error;

const GHZ3: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/ghz3.json"));
const DEPOLARIZING: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/depolarizing.json"));

#[test]
fn data_files_parse() {
    let c = circuit::parse(GHZ3).unwrap();
    assert_eq!(c, families::ghz(3, 3).unwrap());
    assert_eq!(circuit::parse(&circuit::serialize(&c)).unwrap(), c);
    NoiseModel::from_json(DEPOLARIZING).unwrap();
}

#[test]
fn noisy_ghz_accreditation_is_reproducible() {
    let target = circuit::parse(GHZ3).unwrap();
    let noise = NoiseModel::from_json(DEPOLARIZING).unwrap();
    let cfg = ProtocolConfig::new(4, 300, 0.05, 77, noise);
    let a = protocol::accredit(&cfg, &target).unwrap();
    let b = protocol::accredit(&cfg, &target).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert!(a.n_acc > 0 && a.n_acc < a.d);
    assert_eq!(a.accepted_outputs.len(), a.n_acc);
    // GHZ outcomes in the X basis have even parity unless corrupted.
    let odd = a.accepted_outputs.iter().filter(|s| s.count_ones() % 2 == 1).count();
    assert!(odd <= a.accepted_corrupted);
}

#[test]
fn always_failing_traps_discard_everything() {
    let target = families::ghz(2, 2).unwrap();
    let noise = NoiseModel::from_json(
        r#"{"kind":"independent","default":{"x":0,"y":0,"z":0},
            "overrides":[{"location":0,"qubit":0,"rates":{"x":0,"y":0,"z":1}}]}"#,
    )
    .unwrap();
    let rep = protocol::accredit(&ProtocolConfig::new(3, 50, 0.05, 1, noise), &target).unwrap();
    assert_eq!(rep.n_acc, 0);
    assert_eq!(rep.status, STATUS_NONE_ACCEPTED);
    assert!(rep.bound.is_none());
}

#[test]
fn too_few_traps_are_rejected() {
    let target = families::ghz(2, 2).unwrap();
    let cfg = ProtocolConfig::new(2, 10, 0.05, 1, NoiseModel::noiseless());
    assert!(matches!(protocol::accredit(&cfg, &target), Err(Error::Domain(_))));
}

#[test]
fn mesothetic_session_matches_single_party_outputs() {
    let target = circuit::parse(GHZ3).unwrap();
    let cfg = SessionConfig::new(3, BobStrategy::Honest).with_transcript();
    let rep = mesothetic::run_session(&target, &cfg, &mut seeded(3)).unwrap();
    assert!(rep.accepted());
    let out = rep.target_output.unwrap();
    assert_eq!(out.count_ones() % 2, 0);
    assert_eq!(rep.transcript.len(), rep.transcript_len);
    let json: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
    assert_eq!(json["flag"], "acc");
}
