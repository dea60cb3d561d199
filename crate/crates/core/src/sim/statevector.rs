// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense statevector backend.

use rand::Rng;

use crate::bits::BitString;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat2, C64};
use crate::noise::DeviationEvent;
use crate::pauli::PauliString;

use super::SimLimits;

/// Amplitudes of an `n`-qubit state; basis index bit `q` is qubit `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|+>^n`.
    pub fn plus(n: usize) -> Self {
        let dim = 1usize << n;
        let a = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self {
            n,
            amps: vec![a; dim],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn apply_single(&mut self, q: usize, u: &Mat2) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = u[0][0] * a + u[0][1] * b;
                self.amps[i | bit] = u[1][0] * a + u[1][1] * b;
            }
        }
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) {
        let mask = (1usize << a) | (1usize << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
    }

    /// Applies `X^x Z^z` up to global phase.
    pub fn apply_pauli(&mut self, p: &PauliString) {
        let x = p.x_mask() as usize;
        let z = p.z_mask() as usize;
        if z != 0 {
            for (i, amp) in self.amps.iter_mut().enumerate() {
                if (i & z).count_ones() % 2 == 1 {
                    *amp = -*amp;
                }
            }
        }
        if x != 0 {
            for i in 0..self.amps.len() {
                let j = i ^ x;
                if i < j {
                    self.amps.swap(i, j);
                }
            }
        }
    }

    /// X-basis outcome probabilities, indexed by outcome mask.
    pub fn x_basis_probabilities(&self) -> Vec<f64> {
        let mut s = self.clone();
        let h = linalg::hadamard();
        for q in 0..self.n {
            s.apply_single(q, &h);
        }
        s.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Samples an X-basis measurement of every qubit.
    pub fn measure_x<R: Rng + ?Sized>(&self, rng: &mut R) -> BitString {
        let probs = self.x_basis_probabilities();
        let total: f64 = probs.iter().sum();
        let u = rng.gen::<f64>() * total;
        let mut acc = 0.0;
        let mut pick = probs.len() - 1;
        for (i, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                pick = i;
                break;
            }
        }
        BitString::from_mask(self.n, pick as u64)
    }
}

fn check_inputs(
    circuit: &Circuit,
    errors: Option<&[PauliString]>,
    deviations: &[DeviationEvent],
) -> Result<()> {
    if let Some(e) = errors {
        if e.len() != circuit.m() + 1 {
            return Err(Error::SizeMismatch {
                expected: circuit.m() + 1,
                found: e.len(),
            });
        }
        if let Some(p) = e.iter().find(|p| p.n() != circuit.n()) {
            return Err(Error::SizeMismatch {
                expected: circuit.n(),
                found: p.n(),
            });
        }
    }
    for d in deviations {
        if d.band == 0 || d.band > circuit.m() || d.pauli.n() != circuit.n() {
            return Err(Error::Domain(format!(
                "deviation at band {} on {} qubits does not fit the circuit",
                d.band,
                d.pauli.n()
            )));
        }
    }
    Ok(())
}

/// Final state of a noisy run before measurement.
///
/// `errors[l]` is applied at location `l`; each deviation is applied right
/// after the single-qubit round of its band.
pub fn evolve(
    circuit: &Circuit,
    errors: Option<&[PauliString]>,
    deviations: &[DeviationEvent],
    limits: &SimLimits,
) -> Result<StateVector> {
    limits.check_statevector(circuit.n())?;
    check_inputs(circuit, errors, deviations)?;
    let mut s = StateVector::plus(circuit.n());
    if let Some(e) = errors {
        s.apply_pauli(&e[0]);
    }
    for (idx, band) in circuit.bands().iter().enumerate() {
        let j = idx + 1;
        for (q, g) in band.singles.iter().enumerate() {
            s.apply_single(q, &g.matrix());
        }
        if let Some(e) = errors {
            s.apply_pauli(&e[j]);
        }
        for d in deviations.iter().filter(|d| d.band == j) {
            s.apply_pauli(&d.pauli);
        }
        for &(a, b) in &band.cz {
            s.apply_cz(a, b);
        }
    }
    Ok(s)
}

/// One X-basis sample from a noisy run.
pub fn run_statevector<R: Rng + ?Sized>(
    circuit: &Circuit,
    errors: Option<&[PauliString]>,
    deviations: &[DeviationEvent],
    limits: &SimLimits,
    rng: &mut R,
) -> Result<BitString> {
    Ok(evolve(circuit, errors, deviations, limits)?.measure_x(rng))
}

/// Exact noiseless X-basis output distribution.
pub fn ideal_distribution(circuit: &Circuit, limits: &SimLimits) -> Result<Vec<f64>> {
    Ok(evolve(circuit, None, &[], limits)?.x_basis_probabilities())
}

/// Largest amplitude difference after aligning the global phase on the
/// largest amplitude of `a`.
pub fn max_amplitude_gap(a: &StateVector, b: &StateVector) -> f64 {
    let k = a
        .amps
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .map_or(0, |(i, _)| i);
    if b.amps[k].norm() < 1e-12 {
        return f64::INFINITY;
    }
    let phase = a.amps[k] / b.amps[k];
    let phase = phase / phase.norm();
    a.amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| (x - y * phase).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Band, Gate};
    use crate::clifford::Clifford;
    use crate::rng::seeded;

    #[test]
    fn identity_circuit_outputs_zero() {
        let c = Circuit::new(3, vec![Band::new(vec![Gate::IDENTITY; 3], [])]).unwrap();
        let mut rng = seeded(1);
        for _ in 0..100 {
            let s = run_statevector(&c, None, &[], &SimLimits::default(), &mut rng).unwrap();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn hadamard_gives_uniform_outcomes() {
        let c = Circuit::new(1, vec![Band::new(vec![Gate::from(Clifford::H)], [])]).unwrap();
        let p = ideal_distribution(&c, &SimLimits::default()).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn size_limit_is_enforced() {
        let c = Circuit::new(3, vec![Band::new(vec![Gate::IDENTITY; 3], [])]).unwrap();
        let limits = SimLimits::new(2, 2).unwrap();
        assert!(matches!(
            evolve(&c, None, &[], &limits),
            Err(Error::LimitExceeded { .. })
        ));
    }
}
