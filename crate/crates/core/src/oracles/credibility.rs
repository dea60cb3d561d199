// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Monte Carlo estimate of accepting a corrupted target.
//!
//! Each run puts the target in a uniform slot among `v + 1`, draws one
//! collection from the adversary, and checks every trap with a freshly
//! sampled trap choice using the flip tables of [`TrapFamily`]. Pads do not
//! change trap outputs once post-processed, so they are not sampled.

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::detection::{describe_topology, TrapFamily};
use super::{CheckReport, Mode};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::noise::{is_invisible, ExplicitDistribution, PauliErrorCollection};
use crate::pauli::PauliString;
use crate::protocol::bounds::{epsilon_noiseless_gates, touched_circuits_bound, MIN_TRAPS};
use crate::rng;
use crate::sim;
use crate::traps::DEFAULT_ENUMERATION_CAP;

/// Runs per independent random stream.
const BLOCK: u64 = 1 << 14;

/// A named adversary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Adversary {
    pub label: String,
    pub distribution: ExplicitDistribution,
}

impl Adversary {
    /// Number of circuits each entry touches, if all entries agree.
    pub fn touched(&self) -> Option<usize> {
        let mut it = self.distribution.entries.iter().map(|(c, _)| touched(c));
        let first = it.next()?;
        it.all(|t| t == first).then_some(first)
    }

    /// Probability-weighted per-entry touched-circuit bound.
    pub fn touched_bound(&self, v: usize) -> f64 {
        let total: f64 = self.distribution.entries.iter().map(|(_, p)| p).sum();
        self.distribution
            .entries
            .iter()
            .map(|(c, p)| p / total * touched_circuits_bound(v, touched(c)))
            .sum()
    }
}

/// Number of circuits with at least one non-identity error.
pub fn touched(c: &PauliErrorCollection) -> usize {
    (0..c.circuits())
        .filter(|&k| c.for_circuit(k).iter().any(|p| !p.is_identity()))
        .count()
}

/// Result of [`estimate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CredibilityEstimate {
    pub adversary: String,
    pub runs: u64,
    pub hits: u64,
    pub estimate: f64,
    pub sigma: f64,
    pub kappa_bound: f64,
    /// Set when every entry touches the same number of circuits.
    pub touched: Option<usize>,
    pub touched_bound: f64,
}

impl CredibilityEstimate {
    /// One report against `κ/(v+1)` and one against the touched-circuit
    /// bound. `bound_override` replaces both bounds.
    pub fn reports(&self, instance: &str, bound_override: Option<f64>) -> Vec<CheckReport> {
        let make = |check: &str, bound: f64| CheckReport {
            check: check.into(),
            instance: format!("{instance} adversary={}", self.adversary),
            probability: self.estimate,
            exact: None,
            sigma: Some(self.sigma),
            bound,
            passed: self.estimate <= bound + 3.0 * self.sigma,
            mode: Mode::Sampled,
            size: self.runs,
        };
        vec![
            make("credibility", bound_override.unwrap_or(self.kappa_bound)),
            make("credibility-touched", bound_override.unwrap_or(self.touched_bound)),
        ]
    }
}

/// Whether the errors on the target slot change its outcome.
///
/// Invisible collections never do. Otherwise Clifford targets need a
/// nonzero output flip and other targets any non-identity error.
fn corrupts(target: &Circuit, clifford: bool, errors: &[PauliString]) -> Result<bool> {
    if is_invisible(target, errors) {
        Ok(false)
    } else if clifford {
        Ok(!sim::trap_output(target, errors)?.is_zero())
    } else {
        Ok(errors.iter().any(|p| !p.is_identity()))
    }
}

/// Estimates `P(accept and target corrupted)` over `runs` runs.
pub fn estimate(
    target: &Circuit,
    v: usize,
    adversary: &Adversary,
    runs: u64,
    seed: u64,
) -> Result<CredibilityEstimate> {
    let kappa_bound = epsilon_noiseless_gates(v)?;
    if runs == 0 {
        return Err(Error::Domain("runs must be positive".into()));
    }
    let entries = &adversary.distribution.entries;
    if entries.is_empty() {
        return Err(Error::Noise("adversary has no entries".into()));
    }
    for (c, _) in entries {
        if c.circuits() != v + 1 || c.n() != target.n() || c.m() != target.m() {
            return Err(Error::Noise(format!(
                "adversary '{}' has shape ({}, {}, {}), expected ({}, {}, {})",
                adversary.label,
                c.circuits(),
                c.n(),
                c.m(),
                v + 1,
                target.n(),
                target.m()
            )));
        }
    }
    let weights = WeightedIndex::new(entries.iter().map(|(_, p)| *p))
        .map_err(|e| Error::Noise(format!("adversary weights: {e}")))?;
    let family = TrapFamily::new(&target.topology(), DEFAULT_ENUMERATION_CAP)?;
    let clifford = target.is_clifford();

    // Per entry: target corruption for each slot, trap errors as Pauli lists.
    let corrupt: Vec<Vec<bool>> = entries
        .iter()
        .map(|(c, _)| {
            (0..=v)
                .map(|k| corrupts(target, clifford, c.for_circuit(k)))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;

    let blocks = runs.div_ceil(BLOCK);
    let hits: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut r = rng::stream(seed, b);
            let len = BLOCK.min(runs - b * BLOCK);
            let mut hits = 0u64;
            for _ in 0..len {
                let v0 = r.gen_range(0..=v);
                let e = weights.sample(&mut r);
                let (c, _) = &entries[e];
                let mut accepted = true;
                for k in (0..=v).filter(|&k| k != v0) {
                    let choice = r.gen_range(0..family.choice_count());
                    if family.flip_mask(choice, c.for_circuit(k)) != 0 {
                        accepted = false;
                    }
                }
                if accepted && corrupt[e][v0] {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let b = hits as f64 / runs as f64;
    Ok(CredibilityEstimate {
        adversary: adversary.label.clone(),
        runs,
        hits,
        estimate: b,
        sigma: (b * (1.0 - b) / runs as f64).sqrt(),
        kappa_bound,
        touched: adversary.touched(),
        touched_bound: adversary.touched_bound(v),
    })
}

/// Adversary placing `single` on the first `v_hat` of `v + 1` circuits.
pub fn replicated(single: &[PauliString], v: usize, v_hat: usize) -> Result<Adversary> {
    let n = single
        .first()
        .map(PauliString::n)
        .ok_or_else(|| Error::Domain("empty collection".into()))?;
    let m = single.len() - 1;
    if v_hat > v + 1 {
        return Err(Error::IndexOutOfRange { index: v_hat, len: v + 1 });
    }
    let mut paulis = vec![vec![PauliString::identity(n); m + 1]; v + 1];
    for slot in paulis.iter_mut().take(v_hat) {
        slot.copy_from_slice(single);
    }
    let c = PauliErrorCollection::new(n, m, paulis)?;
    let errors: Vec<String> = single.iter().map(|p| p.to_string()).collect();
    Ok(Adversary {
        label: format!("replicated[{}]x{v_hat}", errors.join(",")),
        distribution: ExplicitDistribution { entries: vec![(c, 1.0)] },
    })
}

fn random_single<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Vec<PauliString> {
    loop {
        let errors: Vec<PauliString> = (0..=m)
            .map(|l| {
                if rng.gen_bool(0.5) {
                    return PauliString::identity(n);
                }
                let x = if l == 0 || l == m { 0 } else { rng.gen_range(0..1u64 << n) };
                PauliString::from_masks(n, x, rng.gen_range(0..1u64 << n)).hermitian()
            })
            .collect();
        if errors.iter().any(|p| !p.is_identity()) {
            return errors;
        }
    }
}

/// Random sparse adversary with `entries` collections, each touching a
/// random subset of circuits.
pub fn random_sparse<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    v: usize,
    entries: usize,
    rng: &mut R,
) -> Result<Adversary> {
    let mut out = Vec::with_capacity(entries);
    for _ in 0..entries {
        let v_hat = rng.gen_range(1..=v + 1);
        let mut paulis = vec![vec![PauliString::identity(n); m + 1]; v + 1];
        for k in index::sample(rng, v + 1, v_hat) {
            paulis[k] = random_single(n, m, rng);
        }
        out.push((PauliErrorCollection::new(n, m, paulis)?, rng.gen_range(0.05..1.0)));
    }
    let total: f64 = out.iter().map(|(_, p)| p).sum();
    for e in &mut out {
        e.1 /= total;
    }
    Ok(Adversary {
        label: format!("sparse[{entries}]"),
        distribution: ExplicitDistribution { entries: out },
    })
}

/// Description of a target for report instances.
pub fn describe_target(target: &Circuit, v: usize) -> String {
    let kind = if target.is_clifford() { "clifford" } else { "generic" };
    format!("{} target={kind} v={v}", describe_topology(target))
}

/// Checks that `v` allows a credibility claim.
pub fn require_traps(v: usize) -> Result<()> {
    if v < MIN_TRAPS {
        epsilon_noiseless_gates(v)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::families;
    use crate::oracles::detection::{summarize_class, Class};
    use crate::rng::seeded;

    fn generic_target(n: usize, m: usize, seed: u64) -> Circuit {
        let mut r = seeded(seed);
        let topo = families::random_topology(n, m, &mut r).unwrap();
        families::random_generic_on(&topo, &mut r)
    }

    #[test]
    fn identity_adversary_never_hits() {
        let t = generic_target(2, 2, 1);
        let id = PauliErrorCollection::identity(4, 2, 2);
        let adv = Adversary {
            label: "identity".into(),
            distribution: ExplicitDistribution { entries: vec![(id, 1.0)] },
        };
        let e = estimate(&t, 3, &adv, 5000, 7).unwrap();
        assert_eq!(e.hits, 0);
        assert_eq!(e.touched, Some(0));
        assert_eq!(e.touched_bound, 0.0);
    }

    #[test]
    fn worst_two_band_on_three_circuits_is_near_bound() {
        let t = generic_target(2, 2, 3);
        let fam = TrapFamily::new(&t.topology(), DEFAULT_ENUMERATION_CAP).unwrap();
        let worst = summarize_class(&fam, Class::Two).unwrap();
        let adv = replicated(&worst.worst_collection, 3, 3).unwrap();
        assert_eq!(adv.touched(), Some(3));
        assert!((adv.touched_bound(3) - 27.0 / 64.0).abs() < 1e-15);
        let e = estimate(&t, 3, &adv, 40_000, 11).unwrap();
        for r in e.reports("test", None) {
            assert!(r.passed, "{r:?}");
        }
        assert!(e.reports("test", Some(0.1)).iter().all(|r| !r.passed));
    }

    #[test]
    fn estimates_are_reproducible() {
        let t = generic_target(2, 3, 5);
        let adv = random_sparse(2, 3, 3, 4, &mut seeded(9)).unwrap();
        let a = estimate(&t, 3, &adv, 20_000, 1).unwrap();
        let b = estimate(&t, 3, &adv, 20_000, 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn v_below_three_is_rejected() {
        assert!(require_traps(2).is_err());
        assert!(require_traps(3).is_ok());
    }
}
