// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact probability that a trap outputs all zeros under a Pauli error
//! collection, averaged over every trap choice.
//!
//! For a fixed trap the output flip mask is linear in the errors, so the
//! family precomputes, for every choice and location, the flip mask of each
//! Pauli inserted there. A collection then passes a choice iff the XOR of
//! its per-location masks is zero.
//!
//! ```
//! use accred::oracles::detection::TrapFamily;
//! use accred::{circuit::families, pauli::PauliString};
//! let topo = &families::all_topologies(1, 3)[0];
//! let fam = TrapFamily::new(topo, 1 << 20)?;
//! let z: PauliString = "Z".parse().unwrap();
//! let i = PauliString::identity(1);
//! let p = fam.pass_probability(&[z, i, i, i])?;
//! assert_eq!(*p.numer(), 0);
//! # Ok::<(), accred::Error>(())
//! ```

use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{CheckReport, Mode};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::noise::is_invisible;
use crate::pauli::PauliString;
use crate::sim;
use crate::traps;

/// Largest number of assignments scanned when enumerating [`Class::Many`].
pub const MAX_MANY_COLLECTIONS: u128 = 1 << 22;

/// Largest register for which per-Pauli tables are built.
pub const MAX_TABLE_QUBITS: usize = 6;

/// Flip-mask tables for all trap choices on one topology.
#[derive(Clone, Debug)]
pub struct TrapFamily {
    topology: Circuit,
    choices: usize,
    paulis: usize,
    table: Vec<u64>,
}

fn pauli_index(p: &PauliString) -> usize {
    (p.x_mask() | (p.z_mask() << p.n())) as usize
}

fn pauli_from_index(n: usize, idx: usize) -> PauliString {
    let low = (1usize << n) - 1;
    PauliString::from_masks(n, (idx & low) as u64, (idx >> n) as u64).hermitian()
}

/// Collection classes by number of non-identity locations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    /// Exactly one location.
    Single,
    /// Exactly two locations.
    Two,
    /// Three or more locations.
    Many,
}

impl Class {
    /// The claimed upper bound on the pass probability.
    pub fn bound(self) -> Ratio<u128> {
        match self {
            Class::Single => Ratio::new(1, 2),
            Class::Two | Class::Many => Ratio::new(3, 4),
        }
    }
}

impl TrapFamily {
    /// Builds tables for every choice on `topology`'s cZ layers.
    pub fn new(topology: &Circuit, cap: u128) -> Result<Self> {
        let n = topology.n();
        let m = topology.m();
        if n > MAX_TABLE_QUBITS {
            return Err(Error::LimitExceeded {
                what: "qubits for trap detection tables",
                requested: n,
                limit: MAX_TABLE_QUBITS,
            });
        }
        let topology = topology.topology();
        let paulis = 1usize << (2 * n);
        let choices: Vec<traps::TrapChoice> = traps::enumerate_choices(&topology, cap)?.collect();
        let mut table = vec![0u64; choices.len() * (m + 1) * paulis];
        let id = PauliString::identity(n);
        for (c, choice) in choices.iter().enumerate() {
            let trap = traps::generate_trap(&topology, choice)?;
            for l in 0..=m {
                // Flip masks of X_q and Z_q inserted at location l.
                let mut basis = vec![0u64; 2 * n];
                for (b, slot) in basis.iter_mut().enumerate() {
                    let mut errors = vec![id; m + 1];
                    errors[l] = PauliString::single(n, b % n, b < n, b >= n);
                    *slot = sim::trap_output(&trap, &errors)?.mask();
                }
                let base = (c * (m + 1) + l) * paulis;
                for idx in 1..paulis {
                    let low = idx.trailing_zeros() as usize;
                    table[base + idx] = table[base + (idx & (idx - 1))] ^ basis[low];
                }
            }
        }
        Ok(Self {
            topology,
            choices: choices.len(),
            paulis,
            table,
        })
    }

    pub fn topology(&self) -> &Circuit {
        &self.topology
    }

    pub fn choice_count(&self) -> usize {
        self.choices
    }

    fn check(&self, errors: &[PauliString]) -> Result<()> {
        let (n, m) = (self.topology.n(), self.topology.m());
        if errors.len() != m + 1 || errors.iter().any(|p| p.n() != n) {
            return Err(Error::SizeMismatch {
                expected: m + 1,
                found: errors.len(),
            });
        }
        Ok(())
    }

    /// Flip mask of choice `c` under `errors`.
    pub fn flip_mask(&self, c: usize, errors: &[PauliString]) -> u64 {
        let m = self.topology.m();
        errors.iter().enumerate().fold(0u64, |acc, (l, p)| {
            acc ^ self.table[(c * (m + 1) + l) * self.paulis + pauli_index(p)]
        })
    }

    /// Number of choices whose trap outputs all zeros.
    pub fn pass_count(&self, errors: &[PauliString]) -> Result<u128> {
        self.check(errors)?;
        Ok(self.pass_count_unchecked(&errors.iter().map(pauli_index).collect::<Vec<_>>()))
    }

    fn pass_count_unchecked(&self, idx: &[usize]) -> u128 {
        let m = self.topology.m();
        let stride = (m + 1) * self.paulis;
        let active: Vec<(usize, usize)> = idx
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != 0)
            .map(|(l, &p)| (l, p))
            .collect();
        (0..self.choices)
            .filter(|&c| {
                active.iter().fold(0u64, |acc, &(l, p)| {
                    acc ^ self.table[c * stride + l * self.paulis + p]
                }) == 0
            })
            .count() as u128
    }

    /// Exact pass probability over all choices.
    pub fn pass_probability(&self, errors: &[PauliString]) -> Result<Ratio<u128>> {
        Ok(Ratio::new(self.pass_count(errors)?, self.choices as u128))
    }

    /// Pauli indices allowed at location `l`, identity excluded.
    fn location_paulis(&self, l: usize) -> Vec<usize> {
        let n = self.topology.n();
        let m = self.topology.m();
        if l == 0 || l == m {
            (1..1usize << n).map(|z| z << n).collect()
        } else {
            (1..self.paulis).collect()
        }
    }

    fn errors_from(&self, idx: &[usize]) -> Vec<PauliString> {
        idx.iter()
            .map(|&p| pauli_from_index(self.topology.n(), p))
            .collect()
    }

    /// Calls `visit` with every collection of the class and its pass count.
    /// [`Class::Many`] is enumerated only up to [`MAX_MANY_COLLECTIONS`]
    /// assignments.
    pub fn for_each_exhaustive(
        &self,
        class: Class,
        mut visit: impl FnMut(&[usize], u128),
    ) -> Result<u64> {
        let m = self.topology.m();
        let mut idx = vec![0usize; m + 1];
        let mut count = 0u64;
        match class {
            Class::Single => {
                for l in 0..=m {
                    for p in self.location_paulis(l) {
                        idx[l] = p;
                        visit(&idx, self.pass_count_unchecked(&idx));
                        count += 1;
                    }
                    idx[l] = 0;
                }
            }
            Class::Two => {
                for l1 in 0..=m {
                    for l2 in l1 + 1..=m {
                        let p2s = self.location_paulis(l2);
                        for p1 in self.location_paulis(l1) {
                            idx[l1] = p1;
                            for &p2 in &p2s {
                                idx[l2] = p2;
                                visit(&idx, self.pass_count_unchecked(&idx));
                                count += 1;
                            }
                        }
                        idx[l1] = 0;
                        idx[l2] = 0;
                    }
                }
            }
            Class::Many => {
                let options: Vec<Vec<usize>> = (0..=m)
                    .map(|l| std::iter::once(0).chain(self.location_paulis(l)).collect())
                    .collect();
                let total = options.iter().map(|o| o.len() as u128).product::<u128>();
                if total > MAX_MANY_COLLECTIONS {
                    return Err(Error::TooLargeToEnumerate {
                        count: total,
                        cap: MAX_MANY_COLLECTIONS,
                    });
                }
                let mut digit = vec![0usize; m + 1];
                loop {
                    if digit.iter().filter(|&&d| d != 0).count() >= 3 {
                        for (l, &d) in digit.iter().enumerate() {
                            idx[l] = options[l][d];
                        }
                        visit(&idx, self.pass_count_unchecked(&idx));
                        count += 1;
                    }
                    let Some(l) = (0..=m).find(|&l| digit[l] + 1 < options[l].len()) else {
                        break;
                    };
                    digit[l] += 1;
                    digit[..l].iter_mut().for_each(|d| *d = 0);
                }
            }
        }
        Ok(count)
    }

    /// A random collection touching at least three locations.
    pub fn sample_many<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<usize>> {
        let m = self.topology.m();
        if m + 1 < 3 {
            return Err(Error::Domain(format!(
                "m = {m} leaves fewer than three locations"
            )));
        }
        loop {
            let idx: Vec<usize> = (0..=m)
                .map(|l| {
                    if rng.gen::<bool>() {
                        0
                    } else {
                        let opts = self.location_paulis(l);
                        opts[rng.gen_range(0..opts.len())]
                    }
                })
                .collect();
            if idx.iter().filter(|&&p| p != 0).count() >= 3 {
                return Ok(idx);
            }
        }
    }

    /// Pass count of a collection given as Pauli indices.
    pub fn pass_count_indices(&self, idx: &[usize]) -> u128 {
        self.pass_count_unchecked(idx)
    }

    /// Collection as Paulis from indices.
    pub fn collection(&self, idx: &[usize]) -> Vec<PauliString> {
        self.errors_from(idx)
    }
}

/// Text description of a cZ topology, e.g. `n=2 m=2 cz=[[0-1],[]]`.
pub fn describe_topology(c: &Circuit) -> String {
    let bands: Vec<String> = c
        .bands()
        .iter()
        .map(|b| {
            let pairs: Vec<String> = b.cz.iter().map(|(a, b)| format!("{a}-{b}")).collect();
            format!("[{}]", pairs.join(","))
        })
        .collect();
    format!("n={} m={} cz=[{}]", c.n(), c.m(), bands.join(","))
}

fn describe_errors(errors: &[PauliString]) -> String {
    let e: Vec<String> = errors.iter().map(|p| p.to_string()).collect();
    format!("errors=[{}]", e.join(","))
}

/// Worst collection of a class and summary counts.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassSummary {
    pub class: Class,
    pub collections: u64,
    pub worst: Ratio<u128>,
    pub worst_collection: Vec<PauliString>,
    pub violations: u64,
    /// Non-identity collections no circuit on the topology can see. They
    /// pass every trap and are left out of `worst` and `violations`.
    pub invisible: u64,
}

/// Exhaustively checks one class on a family.
pub fn summarize_class(family: &TrapFamily, class: Class) -> Result<ClassSummary> {
    let total = family.choice_count() as u128;
    let bound = class.bound();
    let mut worst = (0u128, Vec::new());
    let mut violations = 0;
    let mut invisible = 0;
    let collections = family.for_each_exhaustive(class, |idx, pass| {
        if is_invisible(family.topology(), &family.collection(idx)) {
            invisible += 1;
            return;
        }
        if pass > worst.0 || worst.1.is_empty() {
            worst = (pass, idx.to_vec());
        }
        if Ratio::new(pass, total) > bound {
            violations += 1;
        }
    })?;
    Ok(ClassSummary {
        class,
        collections,
        worst: Ratio::new(worst.0, total),
        worst_collection: family.collection(&worst.1),
        violations,
        invisible,
    })
}

fn report(
    family: &TrapFamily,
    idx: &[usize],
    pass: u128,
    bound: f64,
    mode: Mode,
) -> CheckReport {
    let total = family.choice_count() as u128;
    let probability = pass as f64 / total as f64;
    let errors = family.collection(idx);
    let hidden = is_invisible(family.topology(), &errors);
    // Invisible collections are held to the trivial bound.
    let bound = if hidden { 1.0 } else { bound };
    CheckReport {
        check: "trap-detection".into(),
        instance: format!(
            "{} {}{}",
            describe_topology(family.topology()),
            describe_errors(&errors),
            if hidden { " invisible" } else { "" }
        ),
        probability,
        exact: Some(format!("{pass}/{total}")),
        sigma: None,
        bound,
        // Exact comparison; `bound` is a dyadic fraction in practice.
        passed: (pass as f64) <= bound * total as f64,
        mode,
        size: total as u64,
    }
}

/// One report per collection of `class`. [`Class::Many`] draws `samples`
/// random collections. `bound` replaces the claimed bound when given.
pub fn sweep<R: Rng + ?Sized>(
    family: &TrapFamily,
    class: Class,
    samples: usize,
    bound: Option<f64>,
    rng: &mut R,
) -> Result<Vec<CheckReport>> {
    let claimed = class.bound();
    let b = bound.unwrap_or(*claimed.numer() as f64 / *claimed.denom() as f64);
    let mut out = Vec::new();
    match class {
        Class::Single | Class::Two => {
            family.for_each_exhaustive(class, |idx, pass| {
                out.push(report(family, idx, pass, b, Mode::Exhaustive));
            })?;
        }
        Class::Many => {
            for _ in 0..samples {
                let idx = family.sample_many(rng)?;
                let pass = family.pass_count_indices(&idx);
                out.push(report(family, &idx, pass, b, Mode::Sampled));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::families;
    use crate::rng::seeded;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    /// Direct average over generated traps, without tables.
    fn direct(topology: &Circuit, errors: &[PauliString]) -> Ratio<u128> {
        let choices: Vec<_> = traps::enumerate_choices(topology, 1 << 20).unwrap().collect();
        let pass = choices
            .iter()
            .filter(|ch| {
                let trap = traps::generate_trap(topology, ch).unwrap();
                sim::trap_output(&trap, errors).unwrap().is_zero()
            })
            .count();
        Ratio::new(pass as u128, choices.len() as u128)
    }

    #[test]
    fn tables_match_direct_simulation() {
        let mut rng = seeded(12);
        for topo in families::all_topologies(3, 3) {
            let fam = TrapFamily::new(&topo, 1 << 20).unwrap();
            for _ in 0..5 {
                let idx = fam.sample_many(&mut rng).unwrap();
                let errors = fam.collection(&idx);
                assert_eq!(fam.pass_probability(&errors).unwrap(), direct(&topo, &errors));
            }
        }
    }

    #[test]
    fn preparation_z_is_always_caught() {
        let topo = &families::all_topologies(2, 2)[1];
        let fam = TrapFamily::new(topo, 1 << 20).unwrap();
        let prob = fam.pass_probability(&[p("ZI"), p("II"), p("II")]).unwrap();
        assert_eq!(prob, Ratio::new(0, 1));
    }

    #[test]
    fn cancelling_pair_passes_with_orientation() {
        // Z before and after the band-1 gate on qubit 0 cancels exactly when
        // qubit 0 gets S (and the sandwich bit is 0), i.e. when it is the
        // control of the effective cX.
        let topo = &families::all_topologies(2, 2)[1];
        assert_eq!(topo.band(1).cz, vec![(0, 1)]);
        let fam = TrapFamily::new(topo, 1 << 20).unwrap();
        let errors = [p("ZI"), p("ZI"), p("II")];
        for c in 0..fam.choice_count() {
            let ch = traps::TrapChoice::from_index(topo, c as u128).unwrap();
            let caught = fam.flip_mask(c, &errors) != 0;
            if !ch.t {
                assert_eq!(caught, ch.bands[0].orientation[0], "choice {c}");
            }
        }
    }

    #[test]
    fn small_sweeps_pass() {
        let topo = &families::all_topologies(1, 3)[0];
        let fam = TrapFamily::new(topo, 1 << 20).unwrap();
        let reports = sweep(&fam, Class::Single, 0, None, &mut seeded(0)).unwrap();
        assert_eq!(reports.len(), 1 + 3 + 3 + 1);
        assert!(reports.iter().all(|r| r.passed));
        let bad = sweep(&fam, Class::Single, 0, Some(0.1), &mut seeded(0)).unwrap();
        assert!(bad.iter().any(|r| !r.passed));
    }

    #[test]
    fn every_violation_is_invisible() {
        for n in 1..=2 {
            for m in 2..=3 {
                for topo in families::all_topologies(n, m) {
                    let fam = TrapFamily::new(&topo, 1 << 20).unwrap();
                    let total = fam.choice_count() as u128;
                    for class in [Class::Single, Class::Two] {
                        let bound = class.bound();
                        fam.for_each_exhaustive(class, |idx, pass| {
                            if Ratio::new(pass, total) > bound {
                                assert_eq!(pass, total);
                                assert!(is_invisible(&topo, &fam.collection(idx)));
                            }
                        })
                        .unwrap();
                        assert_eq!(summarize_class(&fam, class).unwrap().violations, 0);
                    }
                }
            }
        }
    }

    /// Z on one end of a cZ pair at preparation and measurement, Z on the
    /// other end before the cZ: every trap passes, yet generic targets see it.
    #[test]
    fn three_location_collection_escapes_every_trap() {
        let topo = &families::all_topologies(2, 2)[1];
        let errors = [p("IZ"), p("ZI"), p("IZ")];
        assert!(!is_invisible(topo, &errors));
        let fam = TrapFamily::new(topo, 1 << 20).unwrap();
        assert_eq!(fam.pass_probability(&errors).unwrap(), Ratio::new(1, 1));
        assert_eq!(direct(topo, &errors), Ratio::new(1, 1));
        let s = summarize_class(&fam, Class::Many).unwrap();
        assert_eq!(s.worst, Ratio::new(1, 1));
        assert_eq!(s.violations, 2);
    }

    #[test]
    fn many_class_enumeration_counts() {
        let topo = &families::all_topologies(1, 2)[0];
        let fam = TrapFamily::new(topo, 1 << 20).unwrap();
        // One qubit: Z at 0 and 2, any of X, Y, Z at 1.
        assert_eq!(fam.for_each_exhaustive(Class::Many, |_, _| {}).unwrap(), 3);
        let big = &families::all_topologies(3, 4)[0];
        let fam = TrapFamily::new(big, 1 << 20).unwrap();
        assert!(matches!(
            fam.for_each_exhaustive(Class::Many, |_, _| {}),
            Err(Error::TooLargeToEnumerate { .. })
        ));
    }

    #[test]
    fn uncoupled_z_pair_is_invisible() {
        let topo = &families::all_topologies(2, 2)[0];
        assert!((1..=2).all(|j| topo.band(j).cz.is_empty()));
        let errors = [p("ZI"), p("II"), p("ZI")];
        assert!(is_invisible(topo, &errors));
        let fam = TrapFamily::new(topo, 1 << 20).unwrap();
        assert_eq!(fam.pass_probability(&errors).unwrap(), Ratio::new(1, 1));
        let s = summarize_class(&fam, Class::Two).unwrap();
        assert!(s.invisible >= 1);
        assert_eq!(s.violations, 0);
    }
}
