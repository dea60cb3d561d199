// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! The 24-element single-qubit Clifford group, modulo global phase.
//!
//! Elements are addressed by a stable index. The first seven indices are
//! fixed to the named gates `I, X, Y, Z, H, S, Sdg`; the remaining seventeen
//! follow breadth-first discovery order from the generators `H` and `S`.
//! All tables are built once on first use.

use std::fmt;
use std::sync::OnceLock;

use crate::linalg::{self, Mat2};

pub const GROUP_ORDER: usize = 24;

/// A single-qubit Pauli with phase: `i^phase · X^x · Z^z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliTerm {
    pub phase: u8,
    pub x: bool,
    pub z: bool,
}

impl PauliTerm {
    pub const fn new(phase: u8, x: bool, z: bool) -> Self {
        Self {
            phase: phase & 3,
            x,
            z,
        }
    }

    /// Product `self · other`.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: PauliTerm) -> PauliTerm {
        let swap = if self.z && other.x { 2 } else { 0 };
        PauliTerm::new(
            self.phase + other.phase + swap,
            self.x ^ other.x,
            self.z ^ other.z,
        )
    }

    fn matrix(self) -> Mat2 {
        let mut m = linalg::identity2();
        if self.x {
            m = linalg::mul2(&m, &linalg::pauli_x());
        }
        if self.z {
            m = linalg::mul2(&m, &linalg::pauli_z());
        }
        let ph = linalg::I.powu(u32::from(self.phase));
        for z in m.iter_mut().flatten() {
            *z *= ph;
        }
        m
    }
}

/// Index into the single-qubit Clifford group.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clifford(u8);

impl Clifford {
    pub const I: Clifford = Clifford(0);
    pub const X: Clifford = Clifford(1);
    pub const Y: Clifford = Clifford(2);
    pub const Z: Clifford = Clifford(3);
    pub const H: Clifford = Clifford(4);
    pub const S: Clifford = Clifford(5);
    pub const SDG: Clifford = Clifford(6);

    const NAMES: [&'static str; 7] = ["I", "X", "Y", "Z", "H", "S", "Sdg"];

    /// Returns `None` unless `index < 24`.
    pub fn from_index(index: usize) -> Option<Clifford> {
        (index < GROUP_ORDER).then_some(Clifford(index as u8))
    }

    pub fn index(self) -> usize {
        usize::from(self.0)
    }

    /// Name of a named gate, or `C<k>` for the rest.
    pub fn name(self) -> String {
        match Self::NAMES.get(self.index()) {
            Some(n) => (*n).to_string(),
            None => format!("C{}", self.0),
        }
    }

    /// Accepts the named gates and `C<k>` for any index.
    pub fn from_name(name: &str) -> Option<Clifford> {
        if let Some(i) = Self::NAMES.iter().position(|n| *n == name) {
            return Some(Clifford(i as u8));
        }
        let rest = name.strip_prefix('C')?;
        if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        rest.parse::<usize>().ok().and_then(Clifford::from_index)
    }

    pub fn is_pauli(self) -> bool {
        self.0 < 4
    }

    /// Canonical-phase unitary of this element.
    pub fn matrix(self) -> Mat2 {
        tables().matrices[self.index()]
    }

    /// The element equal to applying `self` first and then `next`.
    pub fn then(self, next: Clifford) -> Clifford {
        Clifford(tables().compose[self.index()][next.index()])
    }

    pub fn inverse(self) -> Clifford {
        Clifford(tables().inverse[self.index()])
    }

    /// `g X g^dagger` for this element `g`.
    pub fn conj_x(self) -> PauliTerm {
        tables().conj_x[self.index()]
    }

    /// `g Z g^dagger` for this element `g`.
    pub fn conj_z(self) -> PauliTerm {
        tables().conj_z[self.index()]
    }

    /// `g P g^dagger` for a phased single-qubit Pauli `P`.
    pub fn conjugate(self, p: PauliTerm) -> PauliTerm {
        let mut out = PauliTerm::new(p.phase, false, false);
        if p.x {
            out = out.mul(self.conj_x());
        }
        if p.z {
            out = out.mul(self.conj_z());
        }
        out
    }

    /// Clifford whose canonical matrix matches `u` up to global phase.
    pub fn from_matrix(u: &Mat2) -> Option<Clifford> {
        let target = linalg::canonical_phase(u);
        tables()
            .matrices
            .iter()
            .position(|m| linalg::max_abs_diff2(m, &target) < 1e-9)
            .map(|i| Clifford(i as u8))
    }

    /// The Pauli element with the given symplectic bits.
    pub fn pauli(x: bool, z: bool) -> Clifford {
        match (x, z) {
            (false, false) => Clifford::I,
            (true, false) => Clifford::X,
            (true, true) => Clifford::Y,
            (false, true) => Clifford::Z,
        }
    }

    pub fn all() -> impl Iterator<Item = Clifford> {
        (0..GROUP_ORDER as u8).map(Clifford)
    }
}

impl fmt::Debug for Clifford {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Display for Clifford {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

struct Tables {
    matrices: Vec<Mat2>,
    compose: Vec<[u8; GROUP_ORDER]>,
    inverse: Vec<u8>,
    conj_x: Vec<PauliTerm>,
    conj_z: Vec<PauliTerm>,
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(build_tables)
}

fn find(list: &[Mat2], u: &Mat2) -> Option<usize> {
    let c = linalg::canonical_phase(u);
    list.iter().position(|m| linalg::max_abs_diff2(m, &c) < 1e-9)
}

fn build_tables() -> Tables {
    let sdg = linalg::adjoint2(&linalg::phase_s());
    let mut matrices: Vec<Mat2> = [
        linalg::identity2(),
        linalg::pauli_x(),
        linalg::pauli_y(),
        linalg::pauli_z(),
        linalg::hadamard(),
        linalg::phase_s(),
        sdg,
    ]
    .iter()
    .map(linalg::canonical_phase)
    .collect();

    let generators = [linalg::hadamard(), linalg::phase_s()];
    let mut frontier = 0;
    while frontier < matrices.len() {
        let base = matrices[frontier];
        for g in &generators {
            let next = linalg::mul2(g, &base);
            if find(&matrices, &next).is_none() {
                matrices.push(linalg::canonical_phase(&next));
            }
        }
        frontier += 1;
    }
    assert_eq!(matrices.len(), GROUP_ORDER, "Clifford closure must have 24 elements");

    let compose = (0..GROUP_ORDER)
        .map(|a| {
            let mut row = [0u8; GROUP_ORDER];
            for (b, cell) in row.iter_mut().enumerate() {
                // `a` first, then `b`: the matrix is M_b · M_a.
                let m = linalg::mul2(&matrices[b], &matrices[a]);
                *cell = find(&matrices, &m).expect("group is closed") as u8;
            }
            row
        })
        .collect::<Vec<_>>();
    let inverse = (0..GROUP_ORDER)
        .map(|a| compose[a].iter().position(|&c| c == 0).expect("inverse exists") as u8)
        .collect();

    let paulis: Vec<PauliTerm> = (0..4u8)
        .flat_map(|ph| {
            [(false, false), (true, false), (false, true), (true, true)]
                .into_iter()
                .map(move |(x, z)| PauliTerm::new(ph, x, z))
        })
        .collect();
    let identify = |m: &Mat2| -> PauliTerm {
        *paulis
            .iter()
            .find(|p| linalg::max_abs_diff2(&p.matrix(), m) < 1e-9)
            .expect("Clifford conjugation maps Paulis to Paulis")
    };
    let conj = |g: &Mat2, p: &Mat2| linalg::mul2(&linalg::mul2(g, p), &linalg::adjoint2(g));
    let conj_x = matrices
        .iter()
        .map(|g| identify(&conj(g, &linalg::pauli_x())))
        .collect();
    let conj_z = matrices
        .iter()
        .map(|g| identify(&conj(g, &linalg::pauli_z())))
        .collect();

    Tables {
        matrices,
        compose,
        inverse,
        conj_x,
        conj_z,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_indices_hold_named_matrices() {
        assert!(linalg::phase_distance2(&Clifford::H.matrix(), &linalg::hadamard()) < 1e-12);
        assert!(linalg::phase_distance2(&Clifford::S.matrix(), &linalg::phase_s()) < 1e-12);
        assert!(linalg::phase_distance2(&Clifford::Y.matrix(), &linalg::pauli_y()) < 1e-12);
    }

    #[test]
    fn composition_matches_matrix_product() {
        for a in Clifford::all() {
            for b in Clifford::all() {
                let expected = linalg::mul2(&b.matrix(), &a.matrix());
                assert!(linalg::phase_distance2(&a.then(b).matrix(), &expected) < 1e-12);
            }
        }
    }

    #[test]
    fn hadamard_and_phase_act_on_paulis_as_tabulated() {
        let x = PauliTerm::new(0, true, false);
        let z = PauliTerm::new(0, false, true);
        let y = PauliTerm::new(1, true, true);
        let bits = |p: PauliTerm| (p.x, p.z);
        assert_eq!(bits(Clifford::H.conjugate(x)), (false, true));
        assert_eq!(bits(Clifford::H.conjugate(z)), (true, false));
        assert_eq!(bits(Clifford::H.conjugate(y)), (true, true));
        assert_eq!(bits(Clifford::S.conjugate(x)), (true, true));
        assert_eq!(bits(Clifford::S.conjugate(y)), (true, false));
        assert_eq!(bits(Clifford::S.conjugate(z)), (false, true));
    }

    #[test]
    fn names_round_trip() {
        for c in Clifford::all() {
            assert_eq!(Clifford::from_name(&c.name()), Some(c));
        }
        assert_eq!(Clifford::from_name("C4"), Some(Clifford::H));
        assert_eq!(Clifford::from_name("C24"), None);
        assert_eq!(Clifford::from_name("C"), None);
    }

    #[test]
    fn inverse_is_two_sided() {
        for c in Clifford::all() {
            assert_eq!(c.then(c.inverse()), Clifford::I);
            assert_eq!(c.inverse().then(c), Clifford::I);
        }
    }
}
