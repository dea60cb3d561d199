// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Twirling checks.
//!
//! [`twirl_channel`] averages the exact output distribution of padded
//! circuits over every pad assignment and fits it with a single
//! non-negative mixture of Pauli error collections shared by a whole family
//! of circuits with the same cZ layers. A small residual means the pads
//! reduced the noise to classically correlated Pauli errors that do not
//! depend on the single-qubit gates.
//!
//! [`pauli_twirl_identity_check`] verifies the underlying operator
//! identities directly.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::nnls::nnls;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::pauli::PauliString;
use crate::qotp::{self, PadRecord};
use crate::sim::density::pauli_matrix;
use crate::sim::{self, DensityNoise, SimLimits};

/// Largest number of pad bits [`pad_averaged_distribution`] will enumerate.
pub const MAX_PAD_BITS: usize = 21;

/// Largest number of collections the mixture fit will use.
pub const MAX_COLLECTIONS: usize = 4096;

/// Exact output distribution averaged over all pads, after post-processing.
pub fn pad_averaged_distribution(
    circuit: &Circuit,
    noise: &DensityNoise,
    limits: &SimLimits,
) -> Result<Vec<f64>> {
    let (n, m) = (circuit.n(), circuit.m());
    let bits = qotp::pad_bit_count(n, m);
    if bits > MAX_PAD_BITS {
        return Err(Error::TooLargeToEnumerate {
            count: 1u128 << bits,
            cap: 1u128 << MAX_PAD_BITS,
        });
    }
    let total = 1u64 << bits;
    // Fixed blocks summed in order keep the result independent of scheduling.
    const PAD_BLOCK: u64 = 1 << 12;
    let partial: Vec<Vec<f64>> = (0..total.div_ceil(PAD_BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut avg = vec![0.0; 1 << n];
            for idx in b * PAD_BLOCK..total.min((b + 1) * PAD_BLOCK) {
                let dressed = qotp::dress(circuit, &PadRecord::from_index(n, m, idx as u128))?;
                let p = sim::run_density(&dressed.circuit, noise, limits)?;
                let key = dressed.key.mask() as usize;
                for (s, ps) in p.iter().enumerate() {
                    avg[s ^ key] += ps;
                }
            }
            Ok(avg)
        })
        .collect::<Result<_>>()?;
    let mut avg = vec![0.0; 1 << n];
    for part in partial {
        avg.iter_mut().zip(part).for_each(|(x, y)| *x += y);
    }
    let w = 1.0 / total as f64;
    Ok(avg.into_iter().map(|x| x * w).collect())
}

/// Every single-circuit collection: Z-type at locations 0 and `m`,
/// arbitrary in between.
pub fn all_collections(n: usize, m: usize) -> Vec<Vec<PauliString>> {
    let mut out = vec![Vec::new()];
    for l in 0..=m {
        let options: Vec<PauliString> = if l == 0 || l == m {
            (0..1u64 << n).map(|z| PauliString::from_masks(n, 0, z)).collect()
        } else {
            PauliString::all(n).map(|p| p.hermitian()).collect()
        };
        out = out
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |p| {
                    let mut v = prefix.clone();
                    v.push(*p);
                    v
                })
            })
            .collect();
    }
    out
}

/// The collection with the same output statistics as `errors` on every
/// circuit of `topology`'s shape.
///
/// Complex conjugation leaves X-basis statistics unchanged and acts on each
/// single-qubit unitary as conjugation by `Y`. Collecting those `Y` layers
/// multiplies the collection by `Z` on every qubit at preparation and
/// measurement and by `Z` on the cZ-paired qubits at each middle location.
pub fn conjugate_partner(topology: &Circuit, errors: &[PauliString]) -> Result<Vec<PauliString>> {
    let (n, m) = (topology.n(), topology.m());
    if errors.len() != m + 1 {
        return Err(Error::SizeMismatch {
            expected: m + 1,
            found: errors.len(),
        });
    }
    let all = (1u64 << n) - 1;
    errors
        .iter()
        .enumerate()
        .map(|(l, e)| {
            let z = if l == 0 || l == m {
                all
            } else {
                topology.band(l).cz.iter().fold(0, |acc, &(a, b)| acc | 1 << a | 1 << b)
            };
            e.multiply(&PauliString::from_masks(n, 0, z)).map(|p| p.hermitian())
        })
        .collect()
}

fn total_weight(c: &[PauliString]) -> u32 {
    c.iter().map(PauliString::weight).sum()
}

/// Result of [`twirl_channel`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwirlResult {
    pub circuits: usize,
    pub pads_per_circuit: u64,
    pub collections: usize,
    /// Euclidean norm of the fit residual over all stacked distributions.
    pub residual: f64,
    /// Pad-averaged distributions, one per circuit.
    pub averaged: Vec<Vec<f64>>,
    /// Collections with weight above `1e-9`, heaviest first. Each
    /// collection and its [`conjugate_partner`] are merged under the one
    /// with fewer non-identity sites.
    pub mixture: Vec<(Vec<PauliString>, f64)>,
    /// Sum of all fitted weights.
    pub total_weight: f64,
}

/// Pad-averages every circuit of `family` under `noise` and fits one Pauli
/// collection mixture to all of them.
pub fn twirl_channel(
    family: &[Circuit],
    noise: &DensityNoise,
    limits: &SimLimits,
) -> Result<TwirlResult> {
    check_family(family)?;
    let averaged = family
        .iter()
        .map(|c| pad_averaged_distribution(c, noise, limits))
        .collect::<Result<Vec<_>>>()?;
    fit_mixture(family, averaged, limits)
}

fn check_family(family: &[Circuit]) -> Result<&Circuit> {
    let first = family
        .first()
        .ok_or_else(|| Error::Domain("twirl check needs at least one circuit".into()))?;
    if family.iter().any(|c| !c.same_topology(first)) {
        return Err(Error::Domain("twirl family must share one cZ topology".into()));
    }
    Ok(first)
}

/// Fits one Pauli collection mixture to the given output distributions,
/// one per circuit of `family`.
pub fn fit_mixture(
    family: &[Circuit],
    distributions: Vec<Vec<f64>>,
    limits: &SimLimits,
) -> Result<TwirlResult> {
    let first = check_family(family)?;
    let (n, m) = (first.n(), first.m());
    let dim = 1usize << n;
    if distributions.len() != family.len() {
        return Err(Error::SizeMismatch {
            expected: family.len(),
            found: distributions.len(),
        });
    }
    if let Some(d) = distributions.iter().find(|d| d.len() != dim) {
        return Err(Error::SizeMismatch {
            expected: dim,
            found: d.len(),
        });
    }
    let collections = all_collections(n, m);
    if collections.len() > MAX_COLLECTIONS {
        return Err(Error::TooLargeToEnumerate {
            count: collections.len() as u128,
            cap: MAX_COLLECTIONS as u128,
        });
    }
    let rows = family.len() * dim;
    let mut a = DMatrix::<f64>::zeros(rows, collections.len());
    let b = DVector::from_iterator(rows, distributions.iter().flatten().copied());
    for (ci, c) in family.iter().enumerate() {
        for (k, col) in collections.iter().enumerate() {
            let p = sim::statevector::evolve(c, Some(col), &[], limits)?.x_basis_probabilities();
            for (s, v) in p.iter().enumerate() {
                a[(ci * dim + s, k)] = *v;
            }
        }
    }
    let sol = nnls(&a, &b, 20 * collections.len());
    let mut merged: Vec<(Vec<PauliString>, f64)> = Vec::new();
    for (c, &w) in collections.into_iter().zip(sol.x.iter()) {
        let partner = conjugate_partner(first, &c)?;
        let rep = if total_weight(&partner) < total_weight(&c) { partner } else { c };
        match merged.iter_mut().find(|(r, _)| *r == rep) {
            Some(entry) => entry.1 += w,
            None => merged.push((rep, w)),
        }
    }
    let mut mixture: Vec<(Vec<PauliString>, f64)> =
        merged.into_iter().filter(|(_, w)| *w > 1e-9).collect();
    mixture.sort_by(|x, y| y.1.total_cmp(&x.1));
    Ok(TwirlResult {
        circuits: family.len(),
        pads_per_circuit: 1u64 << qotp::pad_bit_count(n, m),
        collections: a.ncols(),
        residual: sol.residual,
        averaged: distributions,
        total_weight: sol.x.sum(),
        mixture,
    })
}

/// Largest entries found by [`pauli_twirl_identity_check`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliTwirlReport {
    pub n: usize,
    /// Max entry of `sum_Q Q P Q rho Q P' Q` over all `P != P'`.
    pub full_cross: f64,
    /// Max deviation of the `P = P'` sum from `4^n P rho P`.
    pub full_diagonal_error: f64,
    /// Max entry of the `{I,X}` twirl over distinct `P, P'` in `{I,Z}^n`.
    pub restricted_cross: f64,
    pub passed: bool,
}

/// Tolerance for [`pauli_twirl_identity_check`].
pub const TWIRL_IDENTITY_TOLERANCE: f64 = 1e-12;

fn random_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<C64> {
    let dim = 1usize << n;
    let g = DMatrix::<C64>::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    rho / tr
}

fn max_entry(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Checks the full and restricted Pauli twirl identities on a random state.
pub fn pauli_twirl_identity_check<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<PauliTwirlReport> {
    if n == 0 || n > 3 {
        return Err(Error::Domain(format!("twirl identity check supports 1 <= n <= 3, got {n}")));
    }
    let rho = random_density(n, rng);
    let paulis: Vec<DMatrix<C64>> = PauliString::all(n).map(|p| pauli_matrix(&p)).collect();
    let x_type: Vec<DMatrix<C64>> = (0..1u64 << n)
        .map(|x| pauli_matrix(&PauliString::from_masks(n, x, 0)))
        .collect();
    let z_type: Vec<DMatrix<C64>> = (0..1u64 << n)
        .map(|z| pauli_matrix(&PauliString::from_masks(n, 0, z)))
        .collect();
    let twirl = |qs: &[DMatrix<C64>], p: &DMatrix<C64>, pp: &DMatrix<C64>| {
        qs.iter().fold(DMatrix::<C64>::zeros(rho.nrows(), rho.ncols()), |acc, q| {
            acc + q * p * q * &rho * q * pp * q
        })
    };
    let scale = C64::new(paulis.len() as f64, 0.0);
    let mut full_cross = 0.0f64;
    let mut full_diagonal_error = 0.0f64;
    for (i, p) in paulis.iter().enumerate() {
        for (j, pp) in paulis.iter().enumerate() {
            let s = twirl(&paulis, p, pp);
            if i == j {
                let expect = p * &rho * p * scale;
                full_diagonal_error = full_diagonal_error.max(max_entry(&(s - expect)));
            } else {
                full_cross = full_cross.max(max_entry(&s));
            }
        }
    }
    let mut restricted_cross = 0.0f64;
    for (i, p) in z_type.iter().enumerate() {
        for (j, pp) in z_type.iter().enumerate() {
            if i != j {
                restricted_cross = restricted_cross.max(max_entry(&twirl(&x_type, p, pp)));
            }
        }
    }
    let passed = full_cross < TWIRL_IDENTITY_TOLERANCE
        && restricted_cross < TWIRL_IDENTITY_TOLERANCE
        && full_diagonal_error < TWIRL_IDENTITY_TOLERANCE;
    Ok(PauliTwirlReport {
        n,
        full_cross,
        full_diagonal_error,
        restricted_cross,
        passed,
    })
}

/// Random unitary on the whole `n`-qubit register (QR of a Gaussian matrix).
pub fn random_register_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<C64> {
    let dim = 1usize << n;
    let g = DMatrix::<C64>::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    // Fix column phases so the distribution is Haar.
    let phases = DMatrix::<C64>::from_fn(dim, dim, |i, j| {
        if i == j {
            let d = r[(i, i)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                C64::new(1.0, 0.0)
            }
        } else {
            C64::new(0.0, 0.0)
        }
    });
    q * phases
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::families;
    use crate::rng::seeded;
    use crate::sim::Channel;

    fn family(n: usize, m: usize, count: usize, seed: u64) -> Vec<Circuit> {
        let mut rng = seeded(seed);
        let topo = families::random_topology(n, m, &mut rng).unwrap();
        (0..count).map(|_| families::random_generic_on(&topo, &mut rng)).collect()
    }

    #[test]
    fn collection_count() {
        assert_eq!(all_collections(2, 2).len(), 256);
        assert_eq!(all_collections(1, 1).len(), 4);
    }

    #[test]
    fn noiseless_average_is_bare_distribution() {
        let fam = family(2, 2, 3, 4);
        let limits = SimLimits::default();
        for c in &fam {
            let avg = pad_averaged_distribution(c, &DensityNoise::noiseless(2, 2), &limits).unwrap();
            let bare = sim::statevector::ideal_distribution(c, &limits).unwrap();
            let tv = crate::linalg::total_variation(&avg, &bare);
            assert!(tv < 1e-12, "{tv}");
        }
    }

    #[test]
    fn final_z_is_recovered() {
        use crate::circuit::{Band, Gate};
        let topo = Circuit::new(
            2,
            vec![
                Band::new(vec![Gate::IDENTITY; 2], [(0, 1)]),
                Band::new(vec![Gate::IDENTITY; 2], []),
            ],
        )
        .unwrap();
        let mut rng = seeded(5);
        let fam: Vec<Circuit> = (0..4).map(|_| families::random_generic_on(&topo, &mut rng)).collect();
        let mut noise = DensityNoise::noiseless(2, 2);
        let z: PauliString = "ZI".parse().unwrap();
        noise.push(2, Channel::pauli_mixture(2, &[(z, 1.0)]).unwrap());
        let r = twirl_channel(&fam, &noise, &SimLimits::default()).unwrap();
        assert!(r.residual < 1e-9);
        assert_eq!(r.mixture.len(), 1, "{:?}", r.mixture);
        assert_eq!(r.mixture[0].0[2], z);
        assert!(r.mixture[0].0[..2].iter().all(PauliString::is_identity));
    }

    #[test]
    fn random_unitary_noise_is_twirled() {
        let mut rng = seeded(21);
        let fam = family(2, 2, 24, 22);
        let mut noise = DensityNoise::noiseless(2, 2);
        for l in 0..=2 {
            let u = random_register_unitary(2, &mut rng);
            noise.push(l, Channel::on(2, &[0, 1], vec![u]).unwrap());
        }
        let r = twirl_channel(&fam, &noise, &SimLimits::default()).unwrap();
        assert!(r.residual < 1e-9, "{}", r.residual);
        assert!((r.total_weight - 1.0).abs() < 1e-6);

        // Without pads the same noise is not a Pauli mixture.
        let bare = fam
            .iter()
            .map(|c| sim::run_density(c, &noise, &SimLimits::default()))
            .collect::<Result<Vec<_>>>()
            .unwrap();
        let r = fit_mixture(&fam, bare, &SimLimits::default()).unwrap();
        assert!(r.residual > 1e-4, "{}", r.residual);
    }

    #[test]
    fn partners_have_equal_statistics() {
        let mut rng = seeded(8);
        let limits = SimLimits::default();
        for _ in 0..20 {
            let c = families::random_generic(3, 3, &mut rng).unwrap();
            let e: Vec<PauliString> = (0..=3)
                .map(|l| {
                    let x = if l == 0 || l == 3 { 0 } else { rng.gen_range(0..8) };
                    PauliString::from_masks(3, x, rng.gen_range(0..8))
                })
                .collect();
            let p = conjugate_partner(&c, &e).unwrap();
            let a = sim::statevector::evolve(&c, Some(&e), &[], &limits).unwrap();
            let b = sim::statevector::evolve(&c, Some(&p), &[], &limits).unwrap();
            let tv = crate::linalg::total_variation(&a.x_basis_probabilities(), &b.x_basis_probabilities());
            assert!(tv < 1e-12, "{tv}");
        }
    }

    #[test]
    fn identity_channels_give_identity() {
        let fam = family(2, 2, 3, 12);
        let r = twirl_channel(&fam, &DensityNoise::noiseless(2, 2), &SimLimits::default()).unwrap();
        assert!(r.residual < 1e-9);
        assert_eq!(r.mixture.len(), 1);
        assert!(r.mixture[0].0.iter().all(PauliString::is_identity));
        assert!((r.mixture[0].1 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn identity_twirl_holds_for_one_and_two_qubits() {
        for n in 1..=2 {
            let rep = pauli_twirl_identity_check(n, &mut seeded(n as u64)).unwrap();
            assert!(rep.passed, "{rep:?}");
        }
    }

    #[test]
    fn register_unitaries_are_unitary() {
        let u = random_register_unitary(2, &mut seeded(1));
        let dev = (&u * u.adjoint() - DMatrix::<C64>::identity(4, 4))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-12);
    }
}
