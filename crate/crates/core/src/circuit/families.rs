// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Circuit generators used by tests, examples and the command line.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{Band, Circuit, Gate};
use crate::clifford::{Clifford, GROUP_ORDER};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat2, C64};

/// GHZ preparation on `n` qubits followed by X-basis measurement.
///
/// Band `j < n` holds a cX from qubit `j - 1` to qubit `j` written as
/// `H cZ H`; the target enters the cZ as `|+>`, so only the closing `H`
/// appears, in band `j + 1`. Bands beyond `n` are identity.
pub fn ghz(n: usize, m: usize) -> Result<Circuit> {
    if n == 0 || m < n {
        return Err(Error::Domain(format!(
            "a GHZ chain on {n} qubits needs at least {n} bands, got {m}"
        )));
    }
    let h = Gate::from(Clifford::H);
    let bands = (1..=m)
        .map(|j| {
            let mut singles = vec![Gate::IDENTITY; n];
            if (2..=n).contains(&j) {
                singles[j - 1] = h;
            }
            let cz: Vec<(usize, usize)> = if j < n { vec![(j - 1, j)] } else { vec![] };
            Band::new(singles, cz)
        })
        .collect();
    Circuit::new(n, bands)
}

/// A random matching: shuffled qubits paired up, each pair kept with
/// probability 1/2.
pub fn random_matching<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let mut q: Vec<usize> = (0..n).collect();
    q.shuffle(rng);
    q.chunks_exact(2)
        .filter(|_| rng.gen::<bool>())
        .map(|p| (p[0], p[1]))
        .collect()
}

/// A circuit with random cZ layers and identity gates.
pub fn random_topology<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Circuit> {
    let bands = (1..=m)
        .map(|j| {
            let cz = if j < m { random_matching(n, rng) } else { vec![] };
            Band::new(vec![Gate::IDENTITY; n], cz)
        })
        .collect();
    Circuit::new(n, bands)
}

pub fn random_clifford_gate<R: Rng + ?Sized>(rng: &mut R) -> Gate {
    Gate::Clifford(Clifford::from_index(rng.gen_range(0..GROUP_ORDER)).expect("in range"))
}

/// Haar-random single-qubit unitary.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let mut q: [f64; 4] = [0.0; 4];
    for x in q.iter_mut() {
        *x = rng.sample(StandardNormal);
    }
    let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [a, b, c, d] = q.map(|x| x / norm);
    linalg::mat2(
        C64::new(a, b),
        C64::new(c, d),
        C64::new(-c, d),
        C64::new(a, -b),
    )
}

pub fn random_generic_gate<R: Rng + ?Sized>(rng: &mut R) -> Gate {
    Gate::Unitary(random_unitary(rng))
}

/// Random Clifford gates on the cZ layers of `topology`.
pub fn random_clifford_on<R: Rng + ?Sized>(topology: &Circuit, rng: &mut R) -> Circuit {
    let gates = (0..topology.m())
        .map(|_| (0..topology.n()).map(|_| random_clifford_gate(rng)).collect())
        .collect();
    topology.with_singles(gates).expect("same shape")
}

/// Random generic gates on the cZ layers of `topology`.
pub fn random_generic_on<R: Rng + ?Sized>(topology: &Circuit, rng: &mut R) -> Circuit {
    let gates = (0..topology.m())
        .map(|_| (0..topology.n()).map(|_| random_generic_gate(rng)).collect())
        .collect();
    topology.with_singles(gates).expect("same shape")
}

/// Each gate is Clifford or generic with probability 1/2.
pub fn random_mixed_on<R: Rng + ?Sized>(topology: &Circuit, rng: &mut R) -> Circuit {
    let gates = (0..topology.m())
        .map(|_| {
            (0..topology.n())
                .map(|_| {
                    if rng.gen::<bool>() {
                        random_clifford_gate(rng)
                    } else {
                        random_generic_gate(rng)
                    }
                })
                .collect()
        })
        .collect();
    topology.with_singles(gates).expect("same shape")
}

pub fn random_clifford<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Circuit> {
    let t = random_topology(n, m, rng)?;
    Ok(random_clifford_on(&t, rng))
}

pub fn random_generic<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Circuit> {
    let t = random_topology(n, m, rng)?;
    Ok(random_generic_on(&t, rng))
}

/// Every circuit topology on `n` qubits and `m` bands: all matchings in
/// each of the first `m - 1` bands.
pub fn all_topologies(n: usize, m: usize) -> Vec<Circuit> {
    let matchings = all_matchings(n);
    let mut out = Vec::new();
    let mut idx = vec![0usize; m.saturating_sub(1)];
    loop {
        let bands = (1..=m)
            .map(|j| {
                let cz = if j < m { matchings[idx[j - 1]].clone() } else { vec![] };
                Band::new(vec![Gate::IDENTITY; n], cz)
            })
            .collect();
        out.push(Circuit::new(n, bands).expect("valid topology"));
        // Odometer over band matchings.
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return out;
            }
            idx[pos] += 1;
            if idx[pos] < matchings.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// All matchings (including the empty one) on `n` qubits.
pub fn all_matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(free: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some((&first, rest)) = free.split_first() else {
            out.push(acc.clone());
            return;
        };
        rec(rest, acc, out);
        for (i, &other) in rest.iter().enumerate() {
            let remaining: Vec<usize> =
                rest.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &q)| q).collect();
            acc.push((first, other));
            rec(&remaining, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(&(0..n).collect::<Vec<_>>(), &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn matching_counts() {
        // Telephone numbers.
        let counts: Vec<usize> = (0..6).map(|n| all_matchings(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 10, 26]);
        assert_eq!(all_topologies(3, 4).len(), 64);
        assert_eq!(all_topologies(2, 1).len(), 1);
    }

    #[test]
    fn ghz_is_valid() {
        let c = ghz(3, 3).unwrap();
        assert!(c.validate().is_ok());
        assert_eq!(c.cz_count(), 2);
        assert!(ghz(3, 2).is_err());
        assert_eq!(ghz(3, 5).unwrap().m(), 5);
    }

    #[test]
    fn random_unitaries_are_unitary() {
        let mut r = seeded(3);
        for _ in 0..100 {
            assert!(linalg::unitarity_deviation(&random_unitary(&mut r)) < 1e-12);
        }
    }
}
