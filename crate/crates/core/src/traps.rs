// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Trap circuits.
//!
//! A trap reuses the target's cZ layers. Around each cZ pair one qubit gets
//! `S` and the other `H`, turning the cZ into a cX with a random
//! orientation; an unpaired qubit gets `H` or `S`. Each band's assignment
//! `V_j` is undone at the start of the next band, and with probability 1/2
//! the whole circuit is sandwiched between rounds of Hadamards. In the
//! absence of noise a trap always outputs all zeros.
//!
//! ```
//! use accred::{circuit, traps, Clifford, Gate};
//! let c = circuit::parse(r#"{"n":1,"m":2,"bands":[
//!     {"singles":[{"clifford":"H"}],"cz":[]},
//!     {"singles":[{"clifford":"H"}],"cz":[]}]}"#)?;
//! assert_eq!(traps::choice_count(&c), 4);
//! let choice = traps::TrapChoice::from_index(&c, 2)?;
//! let trap = traps::generate_trap(&c, &choice)?;
//! assert_eq!(trap.band(1).singles[0], Gate::from(Clifford::S));
//! assert_eq!(trap.band(2).singles[0], Gate::from(Clifford::SDG));
//! # Ok::<(), accred::Error>(())
//! ```

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{compose_singles, Band, Circuit, Gate};
use crate::clifford::Clifford;
use crate::error::{Error, Result};

/// Default cap on the number of choices [`enumerate_choices`] will walk.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 24;

/// Random assignment for one band `j < m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BandChoice {
    /// One bit per cZ pair `(lo, hi)` in sorted order. `false` puts `S` on
    /// `lo` and `H` on `hi` (cX with control `lo`); `true` swaps them.
    pub orientation: Vec<bool>,
    /// One bit per unpaired qubit, ascending. `false` is `H`, `true` is `S`.
    pub unpaired: Vec<bool>,
}

/// Full random choice for one trap circuit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrapChoice {
    /// Bands `1..m`; the last band has no assignment of its own.
    pub bands: Vec<BandChoice>,
    /// Global Hadamard sandwich bit.
    pub t: bool,
}

fn band_sizes(target: &Circuit) -> Vec<(usize, usize)> {
    let n = target.n();
    target.bands()[..target.m() - 1]
        .iter()
        .map(|b| (b.cz.len(), b.unpaired(n).len()))
        .collect()
}

/// Size of the choice space: `2 * prod_j 2^(p_j + u_j)`.
pub fn choice_count(target: &Circuit) -> u128 {
    let bits: usize = band_sizes(target).iter().map(|(p, u)| p + u).sum::<usize>() + 1;
    if bits >= 128 {
        u128::MAX
    } else {
        1u128 << bits
    }
}

impl TrapChoice {
    /// Builds a choice from bits in enumeration order: band-major, pairs
    /// before unpaired qubits, and `t` last.
    fn from_bit_iter(target: &Circuit, mut bits: impl Iterator<Item = bool>) -> TrapChoice {
        let mut next = || bits.next().expect("not enough choice bits");
        let bands = band_sizes(target)
            .into_iter()
            .map(|(p, u)| BandChoice {
                orientation: (0..p).map(|_| next()).collect(),
                unpaired: (0..u).map(|_| next()).collect(),
            })
            .collect();
        TrapChoice { bands, t: next() }
    }

    fn bits(&self) -> Vec<bool> {
        let mut out: Vec<bool> = self
            .bands
            .iter()
            .flat_map(|b| b.orientation.iter().chain(&b.unpaired).copied())
            .collect();
        out.push(self.t);
        out
    }

    /// The `index`-th choice in enumeration order. `t` is the fastest digit.
    pub fn from_index(target: &Circuit, index: u128) -> Result<TrapChoice> {
        let total = choice_count(target);
        if index >= total {
            return Err(Error::MalformedChoice(format!(
                "index {index} outside a space of {total} choices"
            )));
        }
        let width = band_sizes(target).iter().map(|(p, u)| p + u).sum::<usize>() + 1;
        Ok(TrapChoice::from_bit_iter(
            target,
            (0..width).rev().map(|b| (index >> b) & 1 == 1),
        ))
    }

    /// Position of this choice in enumeration order.
    pub fn index(&self) -> u128 {
        self.bits()
            .into_iter()
            .fold(0u128, |acc, b| (acc << 1) | u128::from(b))
    }

    /// Checks the shape against the target's cZ layers.
    pub fn check(&self, target: &Circuit) -> Result<()> {
        let sizes = band_sizes(target);
        if self.bands.len() != sizes.len() {
            return Err(Error::MalformedChoice(format!(
                "expected {} band assignments, found {}",
                sizes.len(),
                self.bands.len()
            )));
        }
        for (j, (b, (p, u))) in self.bands.iter().zip(sizes).enumerate() {
            if b.orientation.len() != p || b.unpaired.len() != u {
                return Err(Error::MalformedChoice(format!(
                    "band {}: expected {p} pair bits and {u} unpaired bits, found {} and {}",
                    j + 1,
                    b.orientation.len(),
                    b.unpaired.len()
                )));
            }
        }
        Ok(())
    }

    /// The assignment `V_j` for `j` in `0..=m`. `V_0` and `V_m` are `H^t`.
    pub fn assignment(&self, target: &Circuit, j: usize) -> Vec<Clifford> {
        let n = target.n();
        let sandwich = if self.t { Clifford::H } else { Clifford::I };
        if j == 0 || j == target.m() {
            return vec![sandwich; n];
        }
        let band = target.band(j);
        let choice = &self.bands[j - 1];
        let mut v = vec![Clifford::I; n];
        for (&(lo, hi), &flip) in band.cz.iter().zip(&choice.orientation) {
            let (s_qubit, h_qubit) = if flip { (hi, lo) } else { (lo, hi) };
            v[s_qubit] = Clifford::S;
            v[h_qubit] = Clifford::H;
        }
        for (q, &bit) in band.unpaired(n).iter().zip(&choice.unpaired) {
            v[*q] = if bit { Clifford::S } else { Clifford::H };
        }
        v
    }
}

/// Builds the trap circuit: band `j` applies `V_{j-1}^dagger` then `V_j`,
/// recompiled into one Clifford per qubit.
pub fn generate_trap(target: &Circuit, choice: &TrapChoice) -> Result<Circuit> {
    choice.check(target)?;
    let n = target.n();
    let mut prev = choice.assignment(target, 0);
    let mut bands = Vec::with_capacity(target.m());
    for (idx, band) in target.bands().iter().enumerate() {
        let cur = choice.assignment(target, idx + 1);
        let singles = (0..n)
            .map(|q| {
                compose_singles(
                    &Gate::Clifford(prev[q].inverse()),
                    &Gate::Clifford(cur[q]),
                )
            })
            .collect();
        bands.push(Band {
            singles,
            cz: band.cz.clone(),
        });
        prev = cur;
    }
    Circuit::new(n, bands)
}

/// A uniformly random choice.
pub fn sample_choice<R: Rng + ?Sized>(target: &Circuit, rng: &mut R) -> TrapChoice {
    TrapChoice::from_bit_iter(target, std::iter::repeat_with(|| rng.gen::<bool>()))
}

/// Every choice exactly once, in [`TrapChoice::from_index`] order.
pub fn enumerate_choices(
    target: &Circuit,
    cap: u128,
) -> Result<impl Iterator<Item = TrapChoice> + '_> {
    let count = choice_count(target);
    if count > cap {
        return Err(Error::TooLargeToEnumerate { count, cap });
    }
    Ok((0..count).map(move |k| TrapChoice::from_index(target, k).expect("index in range")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn topo(n: usize, pairs: &[&[(usize, usize)]]) -> Circuit {
        let mut bands: Vec<Band> = pairs
            .iter()
            .map(|p| Band::new(vec![Gate::IDENTITY; n], p.iter().copied()))
            .collect();
        bands.push(Band::new(vec![Gate::IDENTITY; n], []));
        Circuit::new(n, bands).unwrap()
    }

    #[test]
    fn choice_counts() {
        assert_eq!(choice_count(&topo(1, &[&[]])), 4);
        assert_eq!(choice_count(&topo(2, &[&[(0, 1)]])), 4);
        assert_eq!(choice_count(&topo(2, &[&[]])), 8);
        assert_eq!(choice_count(&topo(1, &[])), 2);
    }

    #[test]
    fn enumeration_is_exhaustive_and_distinct() {
        let c = topo(3, &[&[(0, 2)], &[(1, 2)]]);
        let all: Vec<TrapChoice> = enumerate_choices(&c, DEFAULT_ENUMERATION_CAP)
            .unwrap()
            .collect();
        assert_eq!(all.len() as u128, choice_count(&c));
        let set: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        for (k, ch) in all.iter().enumerate() {
            assert_eq!(ch.index(), k as u128);
        }
        assert!(!all[0].t && all[1].t);
    }

    #[test]
    fn cap_is_enforced() {
        let c = topo(3, &[&[(0, 2)], &[(1, 2)]]);
        assert!(matches!(
            enumerate_choices(&c, 4),
            Err(Error::TooLargeToEnumerate { .. })
        ));
    }

    #[test]
    fn single_qubit_s_assignment() {
        let c = topo(1, &[&[]]);
        let ch = TrapChoice {
            bands: vec![BandChoice {
                orientation: vec![],
                unpaired: vec![true],
            }],
            t: false,
        };
        let trap = generate_trap(&c, &ch).unwrap();
        assert_eq!(trap.band(1).singles[0], Gate::from(Clifford::S));
        assert_eq!(trap.band(2).singles[0], Gate::from(Clifford::SDG));
    }

    #[test]
    fn pair_orientation_zero_puts_s_on_lo() {
        let c = topo(2, &[&[(0, 1)]]);
        let ch = TrapChoice {
            bands: vec![BandChoice {
                orientation: vec![false],
                unpaired: vec![],
            }],
            t: false,
        };
        let trap = generate_trap(&c, &ch).unwrap();
        assert_eq!(trap.band(1).singles, vec![Gate::from(Clifford::S), Gate::from(Clifford::H)]);
    }

    #[test]
    fn sandwich_bit_touches_first_and_last_band() {
        let c = topo(1, &[]);
        let ch = TrapChoice { bands: vec![], t: true };
        let trap = generate_trap(&c, &ch).unwrap();
        assert_eq!(trap.band(1).singles[0], Gate::IDENTITY);
        let c = topo(1, &[&[]]);
        let ch = TrapChoice {
            bands: vec![BandChoice {
                orientation: vec![],
                unpaired: vec![false],
            }],
            t: true,
        };
        let trap = generate_trap(&c, &ch).unwrap();
        // H then H, and H then H again.
        assert_eq!(trap.band(1).singles[0], Gate::IDENTITY);
        assert_eq!(trap.band(2).singles[0], Gate::IDENTITY);
    }

    #[test]
    fn malformed_choice_is_rejected() {
        let c = topo(2, &[&[(0, 1)]]);
        let ch = TrapChoice { bands: vec![], t: false };
        assert!(matches!(generate_trap(&c, &ch), Err(Error::MalformedChoice(_))));
    }

    #[test]
    fn traps_are_clifford() {
        let c = topo(3, &[&[(0, 1)], &[(1, 2)]]);
        for ch in enumerate_choices(&c, DEFAULT_ENUMERATION_CAP).unwrap() {
            assert!(generate_trap(&c, &ch).unwrap().is_clifford());
        }
    }
}
