// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Quantum one-time pad compilation.
//!
//! Every single-qubit gate `U` in band `j` becomes `X^a' Z^a U`, so the
//! state after each band is padded with a random Pauli. The pad is carried
//! through the cZ layer and undone at the start of band `j + 1`. Band 1 also
//! starts with `X^gamma`, which is invisible on `|+>` but twirls the state
//! preparation. The pad of the last band is a Z flip on the X-basis
//! outcomes and is removed classically with [`postprocess`].
//!
//! ```
//! use accred::{circuit, qotp, rng};
//! let c = circuit::parse(r#"{"n":1,"m":1,"bands":[{"singles":[{"clifford":"H"}],"cz":[]}]}"#)?;
//! let pads = qotp::sample_pads(1, 1, &mut rng::seeded(7));
//! let dressed = qotp::dress(&c, &pads)?;
//! assert_eq!(dressed.key, pads.alpha[0]);
//! # Ok::<(), accred::Error>(())
//! ```

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::circuit::{compose_singles, Band, Circuit, Gate};
use crate::clifford::Clifford;
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Pad bits for one circuit. `alpha[j]` and `alpha_prime[j]` hold band `j + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadRecord {
    pub alpha: Vec<BitString>,
    pub alpha_prime: Vec<BitString>,
    pub gamma: BitString,
}

/// A padded circuit and the key that undoes the final pad.
#[derive(Clone, Debug, PartialEq)]
pub struct DressedCircuit {
    pub circuit: Circuit,
    pub key: BitString,
}

/// Number of random bits one circuit consumes: `2nm + n`.
pub fn pad_bit_count(n: usize, m: usize) -> usize {
    2 * n * m + n
}

impl PadRecord {
    pub fn zeros(n: usize, m: usize) -> PadRecord {
        PadRecord {
            alpha: vec![BitString::zeros(n); m],
            alpha_prime: vec![BitString::zeros(n); m],
            gamma: BitString::zeros(n),
        }
    }

    /// Fills a record from bits in sampling order: for each band, for each
    /// qubit, `alpha` then `alpha_prime`; then `gamma` per qubit.
    pub fn from_bits(n: usize, m: usize, mut bits: impl Iterator<Item = bool>) -> PadRecord {
        let mut pads = PadRecord::zeros(n, m);
        let mut next = || bits.next().expect("not enough pad bits");
        for j in 0..m {
            for i in 0..n {
                pads.alpha[j].set(i, next());
                pads.alpha_prime[j].set(i, next());
            }
        }
        for i in 0..n {
            pads.gamma.set(i, next());
        }
        pads
    }

    /// The record whose sampling-order bits are the binary digits of
    /// `index`, least significant first.
    pub fn from_index(n: usize, m: usize, index: u128) -> PadRecord {
        PadRecord::from_bits(n, m, (0..).map(|b| b < 128 && (index >> b) & 1 == 1))
    }

    pub fn n(&self) -> usize {
        self.gamma.len()
    }

    pub fn m(&self) -> usize {
        self.alpha.len()
    }

    /// The pad `X^a' Z^a` placed after band `j` (numbered from 1).
    pub fn pad(&self, j: usize) -> PauliString {
        PauliString::from_masks(
            self.n(),
            self.alpha_prime[j - 1].mask(),
            self.alpha[j - 1].mask(),
        )
    }
}

/// Independent uniform pad bits, drawn in the order of [`PadRecord::from_bits`].
pub fn sample_pads<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> PadRecord {
    PadRecord::from_bits(n, m, std::iter::repeat_with(|| rng.gen::<bool>()))
}

fn pauli_gate(p: &PauliString, q: usize) -> Gate {
    let (x, z) = p.local(q);
    Gate::Clifford(Clifford::pauli(x, z))
}

/// Applies the one-time pad to every single-qubit gate of `circuit`.
pub fn dress(circuit: &Circuit, pads: &PadRecord) -> Result<DressedCircuit> {
    let (n, m) = (circuit.n(), circuit.m());
    if pads.m() != m
        || pads.alpha_prime.len() != m
        || pads.n() != n
        || pads.alpha.iter().chain(&pads.alpha_prime).any(|b| b.len() != n)
    {
        return Err(Error::Domain(format!(
            "pad record does not match a circuit with n = {n}, m = {m}"
        )));
    }
    let mut undo = PauliString::from_masks(n, pads.gamma.mask(), 0);
    let mut bands = Vec::with_capacity(m);
    for (idx, band) in circuit.bands().iter().enumerate() {
        let j = idx + 1;
        let pad = pads.pad(j);
        let singles = band
            .singles
            .iter()
            .enumerate()
            .map(|(q, u)| {
                let g = compose_singles(&pauli_gate(&undo, q), u);
                compose_singles(&g, &pauli_gate(&pad, q))
            })
            .collect();
        bands.push(Band {
            singles,
            cz: band.cz.clone(),
        });
        undo = pad.conj_cz_layer(&band.cz)?;
    }
    Ok(DressedCircuit {
        circuit: Circuit::new(n, bands)?,
        key: pads.alpha[m - 1],
    })
}

/// Removes the final pad from measured outcomes.
pub fn postprocess(outputs: &BitString, key: &BitString) -> Result<BitString> {
    outputs.xor(key)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    struct Counting<R> {
        inner: R,
        calls: usize,
    }

    impl<R: RngCore> RngCore for Counting<R> {
        fn next_u32(&mut self) -> u32 {
            self.calls += 1;
            self.inner.next_u32()
        }
        fn next_u64(&mut self) -> u64 {
            self.calls += 1;
            self.inner.next_u64()
        }
        fn fill_bytes(&mut self, dest: &mut [u8]) {
            self.calls += dest.len();
            self.inner.fill_bytes(dest)
        }
        fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
            self.fill_bytes(dest);
            Ok(())
        }
    }

    fn two_band() -> Circuit {
        let h = Gate::from(Clifford::H);
        Circuit::new(
            2,
            vec![Band::new(vec![h, h], [(0, 1)]), Band::new(vec![h, h], [])],
        )
        .unwrap()
    }

    #[test]
    fn zero_pads_leave_circuit_unchanged() {
        let c = two_band();
        let d = dress(&c, &PadRecord::zeros(2, 2)).unwrap();
        assert_eq!(d.circuit, c);
        assert!(d.key.is_zero());
    }

    #[test]
    fn x_pad_propagates_through_cz() {
        let c = Circuit::new(
            2,
            vec![
                Band::new(vec![Gate::IDENTITY; 2], [(0, 1)]),
                Band::new(vec![Gate::IDENTITY; 2], []),
            ],
        )
        .unwrap();
        let mut pads = PadRecord::zeros(2, 2);
        pads.alpha_prime[0].set(0, true);
        let d = dress(&c, &pads).unwrap();
        assert_eq!(d.circuit.band(1).singles[0], Gate::from(Clifford::X));
        assert_eq!(d.circuit.band(2).singles[0], Gate::from(Clifford::X));
        assert_eq!(d.circuit.band(2).singles[1], Gate::from(Clifford::Z));
    }

    #[test]
    fn one_qubit_one_band_draws_three_bits() {
        let mut rng = Counting {
            inner: crate::rng::seeded(3),
            calls: 0,
        };
        sample_pads(1, 1, &mut rng);
        assert_eq!(rng.calls, 3);
        assert_eq!(pad_bit_count(1, 1), 3);
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_pads(3, 4, &mut crate::rng::seeded(11));
        let b = sample_pads(3, 4, &mut crate::rng::seeded(11));
        assert_eq!(a, b);
    }

    #[test]
    fn postprocess_examples() {
        let k: BitString = "0110".parse().unwrap();
        assert!(postprocess(&k, &k).unwrap().is_zero());
        let z = BitString::zeros(4);
        let k: BitString = "1010".parse().unwrap();
        assert_eq!(postprocess(&z, &k).unwrap(), k);
        assert!(postprocess(&z, &BitString::zeros(3)).is_err());
    }

    #[test]
    fn mismatched_pads_are_rejected() {
        assert!(dress(&two_band(), &PadRecord::zeros(2, 3)).is_err());
        assert!(dress(&two_band(), &PadRecord::zeros(3, 2)).is_err());
    }

    #[test]
    fn pad_json_round_trip() {
        let p = sample_pads(2, 2, &mut crate::rng::seeded(5));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<PadRecord>(&s).unwrap(), p);
    }
}
