// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Density-matrix backend with Kraus channels.
//!
//! ```
//! use accred::{circuit, sim};
//! let c = circuit::parse(r#"{"n":1,"m":1,"bands":[{"singles":[{"clifford":"I"}],"cz":[]}]}"#)?;
//! let mut noise = sim::DensityNoise::noiseless(1, 1);
//! noise.push(1, sim::Channel::depolarizing(1, 0, 1.0)?);
//! let p = sim::run_density(&c, &noise, &sim::SimLimits::default())?;
//! assert!((p[0] - 0.5).abs() < 1e-12);
//! # Ok::<(), accred::Error>(())
//! ```

use nalgebra::DMatrix;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat2, C64, ONE, ZERO};
use crate::pauli::PauliString;

use super::SimLimits;

/// Tolerance on `sum_k K_k^dagger K_k = I`.
pub const TRACE_TOLERANCE: f64 = 1e-10;

type CMat = DMatrix<C64>;

/// A CPTP map on the full `n`-qubit register given by Kraus operators.
#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    n: usize,
    kraus: Vec<CMat>,
}

/// Embeds an operator on `targets` (local bit `i` is `targets[i]`) into `n` qubits.
pub fn embed(n: usize, targets: &[usize], op: &CMat) -> CMat {
    let dim = 1usize << n;
    let local = |x: usize| {
        targets
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &q)| acc | (((x >> q) & 1) << i))
    };
    let rest: usize = !targets.iter().fold(0usize, |acc, &q| acc | (1 << q));
    CMat::from_fn(dim, dim, |r, c| {
        if (r ^ c) & rest != 0 {
            ZERO
        } else {
            op[(local(r), local(c))]
        }
    })
}

fn mat2_to_dmatrix(m: &Mat2) -> CMat {
    CMat::from_fn(2, 2, |r, c| m[r][c])
}

/// Full-register matrix of a Pauli, up to global phase.
pub fn pauli_matrix(p: &PauliString) -> CMat {
    let dim = 1usize << p.n();
    let x = p.x_mask() as usize;
    let z = p.z_mask() as usize;
    // (X^x Z^z)|c> = (-1)^{c.z} |c ^ x>
    CMat::from_fn(dim, dim, |r, c| {
        if r == c ^ x {
            if (c & z).count_ones() % 2 == 1 {
                -ONE
            } else {
                ONE
            }
        } else {
            ZERO
        }
    })
}

impl Channel {
    /// Checks trace preservation of full-register Kraus operators.
    pub fn new(n: usize, kraus: Vec<CMat>) -> Result<Self> {
        let dim = 1usize << n;
        if kraus.is_empty() || kraus.iter().any(|k| k.shape() != (dim, dim)) {
            return Err(Error::Domain(format!(
                "Kraus operators must be non-empty and {dim}x{dim}"
            )));
        }
        let sum = kraus
            .iter()
            .fold(CMat::zeros(dim, dim), |acc, k| acc + k.adjoint() * k);
        let dev = (sum - CMat::identity(dim, dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if dev > TRACE_TOLERANCE {
            return Err(Error::NotTracePreserving(dev));
        }
        Ok(Self { n, kraus })
    }

    /// Kraus operators on a subset of qubits.
    pub fn on(n: usize, targets: &[usize], kraus: Vec<CMat>) -> Result<Self> {
        if targets.iter().any(|&q| q >= n) {
            return Err(Error::IndexOutOfRange {
                index: *targets.iter().max().unwrap_or(&0),
                len: n,
            });
        }
        Self::new(n, kraus.iter().map(|k| embed(n, targets, k)).collect())
    }

    pub fn single_qubit(n: usize, q: usize, kraus: &[Mat2]) -> Result<Self> {
        Self::on(n, &[q], kraus.iter().map(mat2_to_dmatrix).collect())
    }

    pub fn unitary_on_qubit(n: usize, q: usize, u: &Mat2) -> Result<Self> {
        Self::single_qubit(n, q, &[*u])
    }

    /// `rho -> sum_i p_i P_i rho P_i`.
    pub fn pauli_mixture(n: usize, terms: &[(PauliString, f64)]) -> Result<Self> {
        if terms.iter().any(|(_, p)| *p < 0.0) {
            return Err(Error::Domain("negative Pauli probability".into()));
        }
        Self::new(
            n,
            terms
                .iter()
                .map(|(p, w)| pauli_matrix(p) * C64::new(w.sqrt(), 0.0))
                .collect(),
        )
    }

    /// Single-qubit depolarizing channel of strength `p` on qubit `q`;
    /// `p = 1` is fully depolarizing.
    pub fn depolarizing(n: usize, q: usize, p: f64) -> Result<Self> {
        let s = |w: f64| C64::new(w.sqrt(), 0.0);
        let scale = |m: Mat2, w: f64| m.map(|row| row.map(|z| z * s(w)));
        Self::single_qubit(
            n,
            q,
            &[
                scale(linalg::identity2(), 1.0 - 3.0 * p / 4.0),
                scale(linalg::pauli_x(), p / 4.0),
                scale(linalg::pauli_y(), p / 4.0),
                scale(linalg::pauli_z(), p / 4.0),
            ],
        )
    }

    /// Amplitude damping with decay probability `gamma` on qubit `q`.
    pub fn amplitude_damping(n: usize, q: usize, gamma: f64) -> Result<Self> {
        let k0 = linalg::mat2(ONE, ZERO, ZERO, C64::new((1.0 - gamma).sqrt(), 0.0));
        let k1 = linalg::mat2(ZERO, C64::new(gamma.sqrt(), 0.0), ZERO, ZERO);
        Self::single_qubit(n, q, &[k0, k1])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    /// Channel composition: `self` first, then `next`.
    pub fn then(&self, next: &Channel) -> Result<Channel> {
        let kraus = next
            .kraus
            .iter()
            .flat_map(|b| self.kraus.iter().map(move |a| b * a))
            .collect();
        Channel::new(self.n, kraus)
    }

    fn apply(&self, rho: &CMat) -> CMat {
        self.kraus
            .iter()
            .fold(CMat::zeros(rho.nrows(), rho.ncols()), |acc, k| {
                acc + k * rho * k.adjoint()
            })
    }
}

/// Channels at each location `0..=m`, applied in insertion order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DensityNoise {
    n: usize,
    locations: Vec<Vec<Channel>>,
}

impl DensityNoise {
    pub fn noiseless(n: usize, m: usize) -> Self {
        Self {
            n,
            locations: vec![Vec::new(); m + 1],
        }
    }

    /// Appends a channel at location `l`.
    pub fn push(&mut self, l: usize, channel: Channel) -> &mut Self {
        assert_eq!(channel.n(), self.n, "channel width");
        self.locations[l].push(channel);
        self
    }

    pub fn at(&self, l: usize) -> &[Channel] {
        &self.locations[l]
    }

    pub fn m(&self) -> usize {
        self.locations.len() - 1
    }
}

fn apply_single(rho: &mut CMat, q: usize, u: &Mat2) {
    let dim = rho.nrows();
    let bit = 1usize << q;
    // rho <- U rho: mix row pairs.
    for r in 0..dim {
        if r & bit != 0 {
            continue;
        }
        for c in 0..dim {
            let (a, b) = (rho[(r, c)], rho[(r | bit, c)]);
            rho[(r, c)] = u[0][0] * a + u[0][1] * b;
            rho[(r | bit, c)] = u[1][0] * a + u[1][1] * b;
        }
    }
    // rho <- rho U^dagger: mix column pairs.
    for c in 0..dim {
        if c & bit != 0 {
            continue;
        }
        for r in 0..dim {
            let (a, b) = (rho[(r, c)], rho[(r, c | bit)]);
            rho[(r, c)] = a * u[0][0].conj() + b * u[0][1].conj();
            rho[(r, c | bit)] = a * u[1][0].conj() + b * u[1][1].conj();
        }
    }
}

fn apply_cz(rho: &mut CMat, a: usize, b: usize) {
    let mask = (1usize << a) | (1usize << b);
    let dim = rho.nrows();
    for r in 0..dim {
        for c in 0..dim {
            if ((r & mask == mask) as u8 ^ (c & mask == mask) as u8) == 1 {
                rho[(r, c)] = -rho[(r, c)];
            }
        }
    }
}

/// Exact X-basis output distribution of a noisy circuit, indexed by
/// outcome mask.
pub fn run_density(circuit: &Circuit, noise: &DensityNoise, limits: &SimLimits) -> Result<Vec<f64>> {
    let n = circuit.n();
    limits.check_density(n)?;
    if noise.n != n || noise.m() != circuit.m() {
        return Err(Error::Domain(format!(
            "noise for n = {}, m = {} does not fit a circuit with n = {n}, m = {}",
            noise.n,
            noise.m(),
            circuit.m()
        )));
    }
    let dim = 1usize << n;
    let mut rho = CMat::from_element(dim, dim, C64::new(1.0 / dim as f64, 0.0));
    for ch in noise.at(0) {
        rho = ch.apply(&rho);
    }
    for (idx, band) in circuit.bands().iter().enumerate() {
        for (q, g) in band.singles.iter().enumerate() {
            apply_single(&mut rho, q, &g.matrix());
        }
        for ch in noise.at(idx + 1) {
            rho = ch.apply(&rho);
        }
        for &(a, b) in &band.cz {
            apply_cz(&mut rho, a, b);
        }
    }
    let h = linalg::hadamard();
    for q in 0..n {
        apply_single(&mut rho, q, &h);
    }
    Ok((0..dim).map(|i| rho[(i, i)].re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Band, Gate};

    #[test]
    fn noiseless_identity_is_point_mass() {
        let c = Circuit::new(2, vec![Band::new(vec![Gate::IDENTITY; 2], [])]).unwrap();
        let p = run_density(&c, &DensityNoise::noiseless(2, 1), &SimLimits::default()).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-12);
        assert!(p[1..].iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn non_trace_preserving_is_rejected() {
        let half = linalg::identity2().map(|r| r.map(|z| z * 0.5));
        assert!(matches!(
            Channel::single_qubit(1, 0, &[half]),
            Err(Error::NotTracePreserving(_))
        ));
    }

    #[test]
    fn pauli_matrix_matches_tensor_form() {
        let p: PauliString = "XZ".parse().unwrap();
        let m = pauli_matrix(&p);
        // X on qubit 0, Z on qubit 1: |00> -> |01>(index 1), |10>(index 2) -> -|11>.
        assert_eq!(m[(1, 0)], ONE);
        assert_eq!(m[(3, 2)], -ONE);
    }

    #[test]
    fn density_limit_is_enforced() {
        let c = Circuit::new(3, vec![Band::new(vec![Gate::IDENTITY; 3], [])]).unwrap();
        let limits = SimLimits::new(16, 2).unwrap();
        assert!(run_density(&c, &DensityNoise::noiseless(3, 1), &limits).is_err());
    }
}
