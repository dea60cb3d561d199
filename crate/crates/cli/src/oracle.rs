// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

use accred::circuit::families;
use accred::oracles::credibility::{self, Adversary};
use accred::oracles::detection::{self, describe_topology, Class, TrapFamily};
use accred::oracles::twirl::{self, random_register_unitary, TWIRL_IDENTITY_TOLERANCE};
use accred::oracles::{CheckReport, Mode};
use accred::rng;
use accred::sim::{Channel, DensityNoise, SimLimits};
use accred::traps::DEFAULT_ENUMERATION_CAP;
use clap::ValueEnum;

use crate::{CliResult, Failure, Output};

/// Residual below which the pad-averaged output counts as a Pauli mixture.
const TWIRL_RESIDUAL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    /// Exact trap pass probabilities for every collection of a class.
    TrapDetection,
    /// Pad average of random unitary noise versus a Pauli mixture fit.
    Twirl,
    /// Dense check of the Pauli twirl identities.
    PauliTwirl,
    /// Monte Carlo rate of accepting a corrupted target.
    Credibility,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Single,
    Two,
    /// Three or more locations, sampled.
    Many,
    /// All three classes.
    All,
}

#[derive(clap::Args, Debug)]
pub struct OracleArgs {
    #[arg(long, value_enum)]
    which: Which,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Collection class for trap-detection.
    #[arg(long, value_enum, default_value_t = ClassArg::All)]
    class: ClassArg,
    /// Sampled collections per topology for the many-location class.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Circuits in the twirl family.
    #[arg(long, default_value_t = 24)]
    circuits: usize,
    /// Trap circuits for credibility.
    #[arg(long, default_value_t = 3)]
    v: usize,
    /// Runs per adversary for credibility.
    #[arg(long, default_value_t = 100_000)]
    runs: u64,
    /// Number of adversaries for credibility.
    #[arg(long, default_value_t = 50)]
    adversaries: usize,
    /// Replace every claimed bound (testing hook).
    #[arg(long)]
    bound: Option<f64>,
}

fn emit(out: &mut Output, reports: &[CheckReport], failures: &mut u64) -> CliResult<()> {
    for r in reports {
        if !r.passed {
            *failures += 1;
        }
        out.line(&r.to_json_line())?;
    }
    Ok(())
}

/// Runs the selected check; true when every report passed.
pub fn run(args: &OracleArgs, seed: u64, out: &mut Output) -> CliResult<bool> {
    let mut failures = 0u64;
    let mut r = rng::seeded(seed);
    match args.which {
        Which::TrapDetection => {
            let classes: &[Class] = match args.class {
                ClassArg::Single => &[Class::Single],
                ClassArg::Two => &[Class::Two],
                ClassArg::Many => &[Class::Many],
                ClassArg::All => &[Class::Single, Class::Two, Class::Many],
            };
            for topo in families::all_topologies(args.n, args.m) {
                let family = TrapFamily::new(&topo, DEFAULT_ENUMERATION_CAP)?;
                for &class in classes {
                    if class == Class::Many && args.m + 1 < 3 {
                        continue;
                    }
                    let reports = detection::sweep(&family, class, args.samples, args.bound, &mut r)?;
                    emit(out, &reports, &mut failures)?;
                }
            }
        }
        Which::Twirl => {
            if args.n > 2 || args.m > 2 || args.circuits == 0 {
                return Err(Failure::input("twirl supports n <= 2, m <= 2 and at least one circuit"));
            }
            let topo = families::random_topology(args.n, args.m, &mut r)?;
            let family: Vec<_> = (0..args.circuits)
                .map(|_| families::random_generic_on(&topo, &mut r))
                .collect();
            let mut noise = DensityNoise::noiseless(args.n, args.m);
            let all: Vec<usize> = (0..args.n).collect();
            for l in 0..=args.m {
                let u = random_register_unitary(args.n, &mut r);
                noise.push(l, Channel::on(args.n, &all, vec![u])?);
            }
            let res = twirl::twirl_channel(&family, &noise, &SimLimits::default())?;
            let bound = args.bound.unwrap_or(TWIRL_RESIDUAL);
            let report = CheckReport {
                check: "twirl".into(),
                instance: format!(
                    "{} circuits={} noise=random-unitary residual",
                    describe_topology(&topo),
                    args.circuits
                ),
                probability: res.residual,
                exact: None,
                sigma: None,
                bound,
                passed: res.residual < bound,
                mode: Mode::Exhaustive,
                size: res.pads_per_circuit * res.circuits as u64,
            };
            emit(out, &[report], &mut failures)?;
        }
        Which::PauliTwirl => {
            let bound = args.bound.unwrap_or(TWIRL_IDENTITY_TOLERANCE);
            for n in 1..=args.n.min(2) {
                let rep = twirl::pauli_twirl_identity_check(n, &mut r)?;
                let checks = [
                    ("full-cross", rep.full_cross),
                    ("full-diagonal", rep.full_diagonal_error),
                    ("restricted-cross", rep.restricted_cross),
                ];
                let reports: Vec<CheckReport> = checks
                    .iter()
                    .map(|(name, value)| CheckReport {
                        check: "pauli-twirl".into(),
                        instance: format!("n={n} {name} max-entry"),
                        probability: *value,
                        exact: None,
                        sigma: None,
                        bound,
                        passed: *value < bound,
                        mode: Mode::Exhaustive,
                        size: 1u64 << (4 * n),
                    })
                    .collect();
                emit(out, &reports, &mut failures)?;
            }
        }
        Which::Credibility => {
            credibility::require_traps(args.v)?;
            for i in 0..args.adversaries {
                let topo = families::random_topology(args.n, args.m, &mut r)?;
                let target = families::random_generic_on(&topo, &mut r);
                let adversary = make_adversary(i, &target, args.v, &mut r)?;
                let est = credibility::estimate(&target, args.v, &adversary, args.runs, seed ^ i as u64)?;
                let reports = est.reports(&credibility::describe_target(&target, args.v), args.bound);
                emit(out, &reports, &mut failures)?;
            }
        }
    }
    Ok(failures == 0)
}

/// Even indices: the worst two-location collection replicated on 1 to 4
/// circuits. Odd indices: random sparse distributions.
fn make_adversary(
    i: usize,
    target: &accred::Circuit,
    v: usize,
    r: &mut rng::SimRng,
) -> CliResult<Adversary> {
    if i.is_multiple_of(2) && target.m() >= 1 {
        let family = TrapFamily::new(&target.topology(), DEFAULT_ENUMERATION_CAP)?;
        let worst = detection::summarize_class(&family, Class::Two)?;
        let v_hat = 1 + (i / 2) % (v + 1).min(4);
        Ok(credibility::replicated(&worst.worst_collection, v, v_hat)?)
    } else {
        let entries = 1 + i % 5;
        Ok(credibility::random_sparse(target.n(), target.m(), v, entries, r)?)
    }
}
