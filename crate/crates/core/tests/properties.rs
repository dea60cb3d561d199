// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

use accred::circuit::families;
use accred::clifford::Clifford;
use accred::linalg::{total_variation, C64};
use accred::pauli::PauliString;
use accred::rng::seeded;
use accred::sim::density::{embed, pauli_matrix};
use accred::sim::{self, SimLimits};
use accred::{qotp, traps};

type CMat = nalgebra::DMatrix<C64>;

fn pauli(n: usize) -> impl Strategy<Value = PauliString> {
    let mask = (1u64 << n) - 1;
    (0u8..4, any::<u64>(), any::<u64>())
        .prop_map(move |(ph, x, z)| PauliString::from_masks(n, x & mask, z & mask).with_phase(ph))
}

fn clifford() -> impl Strategy<Value = Clifford> {
    (0usize..24).prop_map(|i| Clifford::from_index(i).unwrap())
}

/// `i^phase X^x Z^z` as a full matrix.
fn dense(p: &PauliString) -> CMat {
    let phase = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ][p.phase() as usize];
    pauli_matrix(p) * phase
}

fn cz_matrix(n: usize, a: usize, b: usize) -> CMat {
    let dim = 1 << n;
    CMat::from_fn(dim, dim, |r, c| {
        if r != c {
            C64::new(0.0, 0.0)
        } else if (r >> a) & 1 == 1 && (r >> b) & 1 == 1 {
            C64::new(-1.0, 0.0)
        } else {
            C64::new(1.0, 0.0)
        }
    })
}

fn close(a: &CMat, b: &CMat) -> bool {
    (a - b).iter().all(|z| z.norm() < 1e-12)
}

proptest! {
    #[test]
    fn multiply_is_associative(a in pauli(4), b in pauli(4), c in pauli(4)) {
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn multiply_matches_dense(a in pauli(3), b in pauli(3)) {
        let ab = a.multiply(&b).unwrap();
        prop_assert!(close(&dense(&ab), &(dense(&a) * dense(&b))));
    }

    #[test]
    fn single_conjugation_matches_dense(p in pauli(3), g in clifford(), q in 0usize..3) {
        let m = g.matrix();
        let u = embed(3, &[q], &CMat::from_fn(2, 2, |r, c| m[r][c]));
        let expected = &u * dense(&p) * u.adjoint();
        prop_assert!(close(&dense(&p.conj_single(q, g).unwrap()), &expected));
    }

    #[test]
    fn cz_conjugation_matches_dense(p in pauli(3), a in 0usize..3, d in 1usize..3) {
        let b = (a + d) % 3;
        let u = cz_matrix(3, a, b);
        let expected = &u * dense(&p) * &u;
        prop_assert!(close(&dense(&p.conj_cz(a, b).unwrap()), &expected));
    }

    #[test]
    fn conjugation_is_an_automorphism(a in pauli(3), b in pauli(3), g in clifford(), q in 0usize..3) {
        let lhs = a.multiply(&b).unwrap().conj_single(q, g).unwrap();
        let rhs = a.conj_single(q, g).unwrap().multiply(&b.conj_single(q, g).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cz_and_cx_are_involutions(p in pauli(4), a in 0usize..4, d in 1usize..4) {
        let b = (a + d) % 4;
        prop_assert_eq!(p.conj_cz(a, b).unwrap().conj_cz(a, b).unwrap(), p);
        prop_assert_eq!(p.conj_cx(a, b).unwrap().conj_cx(a, b).unwrap(), p);
        prop_assert_eq!(p.conj_cz(a, b).unwrap(), p.conj_cz(b, a).unwrap());
    }

    #[test]
    fn inverse_undoes_conjugation(p in pauli(2), g in clifford(), q in 0usize..2) {
        let back = p.conj_single(q, g).unwrap().conj_single(q, g.inverse()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn one_pad_is_transparent(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=3) {
        let mut r = seeded(seed);
        let topo = families::random_topology(n, m, &mut r).unwrap();
        let c = families::random_mixed_on(&topo, &mut r);
        let dressed = qotp::dress(&c, &qotp::sample_pads(n, m, &mut r)).unwrap();
        let limits = SimLimits::default();
        let bare = sim::ideal_distribution(&c, &limits).unwrap();
        let raw = sim::ideal_distribution(&dressed.circuit, &limits).unwrap();
        let key = dressed.key.mask() as usize;
        let post: Vec<f64> = (0..raw.len()).map(|s| raw[s ^ key]).collect();
        prop_assert!(total_variation(&bare, &post) < 1e-10);
    }

    #[test]
    fn frame_matches_statevector_on_traps(seed in any::<u64>(), n in 1usize..=4, m in 1usize..=4) {
        let mut r = seeded(seed);
        let target = families::random_generic(n, m, &mut r).unwrap();
        let trap = traps::generate_trap(&target, &traps::sample_choice(&target, &mut r)).unwrap();
        let errors: Vec<PauliString> = (0..=m)
            .map(|_| PauliString::from_masks(n, r.gen_range(0..1 << n), r.gen_range(0..1 << n)))
            .collect();
        let frame = sim::trap_output(&trap, &errors).unwrap();
        let limits = SimLimits::default();
        let sample = sim::run_statevector(&trap, Some(&errors), &[], &limits, &mut r).unwrap();
        prop_assert_eq!(frame, sample);
    }
}
